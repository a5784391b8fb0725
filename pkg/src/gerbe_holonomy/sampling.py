"""Seeded random cocycles, loops, loop arrows and families.

Every sampler takes a ``numpy.random.Generator`` so that a suite run
with a fixed seed always builds the same data. Random cocycles are
assembled from pieces that are cocycles by construction: characters
and Schur multiplier representatives (exact phases), images of the
total coboundary, and G-invariant constant forms.

Torus paths are built with rational endpoints, so the junction
conditions of a loop hold exactly.
"""

import itertools
import logging
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np
import sympy

from .cohomology import cyclic_three_cocycle, h1_finite_group, h2_finite_group
from .deligne import (
    CochainFunction,
    FlatNData,
    FormCochain,
    GerbeData,
    LineData,
    cech_delta,
    gauge_coboundary,
    gerbe_coboundary,
)
from .expressions import S, T, coordinate
from .forms import PForm, pullback_form
from .groupoids import ActionGroupoid
from .loops import (
    LoopArrow,
    LoopFamily,
    ParametricCarrier,
    Partition,
    PointCarrier,
    SegmentedLoop,
    build_loop,
    loop_arrow,
    make_family,
)
from .phases import Phase

logger = logging.getLogger(__name__)

DENOMINATORS = (2, 3, 4, 6, 8)
GRID = 16


def random_phase(rng: np.random.Generator, denominators: Sequence[int] = DENOMINATORS) -> Phase:
    q = int(rng.choice(denominators))
    return Phase(Fraction(int(rng.integers(q)), q))


def _q(value) -> sympy.Rational:
    value = Fraction(value)
    return sympy.Rational(value.numerator, value.denominator)


def _rational(rng: np.random.Generator, denominator: int = 8, low: int = -4, high: int = 4) -> Fraction:
    return Fraction(int(rng.integers(low * denominator, high * denominator + 1)), denominator)


def _unit_expr(rng: np.random.Generator, dim: int) -> sympy.Expr:
    """A periodic unit-modulus expression exp(i(a sin + b cos) + 2 pi i n.x)."""
    exponent = sympy.Integer(0)
    for j in range(1, dim + 1):
        x = coordinate(j)
        a = sympy.Rational(int(rng.integers(-4, 5)), 8)
        b = sympy.Rational(int(rng.integers(-4, 5)), 8)
        n = int(rng.integers(-1, 2))
        exponent += a * sympy.sin(2 * sympy.pi * x) + b * sympy.cos(2 * sympy.pi * x) + 2 * sympy.pi * n * x
    return sympy.exp(sympy.I * exponent)


def random_one_form(rng: np.random.Generator, dim: int) -> PForm:
    """A random periodic imaginary 1-form."""
    coefficients = {}
    for j in range(1, dim + 1):
        k = int(rng.integers(1, dim + 1))
        a = sympy.Rational(int(rng.integers(-4, 5)), 8)
        coefficients[(j,)] = sympy.I * a * sympy.sin(2 * sympy.pi * coordinate(k))
    return PForm(1, dim, coefficients)


def _invariant_constant_form(groupoid: ActionGroupoid, degree: int, rng: np.random.Generator) -> PForm:
    """Average of a random constant imaginary form over the linear parts of G."""
    dim = groupoid.dim
    if degree > dim:
        return PForm.zero(degree, dim)
    coefficients = {
        index: sympy.I * sympy.Rational(int(rng.integers(-4, 5)), 4)
        for index in itertools.combinations(range(1, dim + 1), degree)
    }
    form = PForm(degree, dim, coefficients)
    total = PForm.zero(degree, dim)
    for g in groupoid.group.elements:
        total = total + pullback_form(form, groupoid.action.base_map(g))
    return total.scale(sympy.Rational(1, groupoid.group.order))


def random_character(groupoid: ActionGroupoid, rng: np.random.Generator) -> CochainFunction:
    """h(x, g) = chi(g) for a random character chi: G -> Q/Z."""
    data = h1_finite_group(groupoid.group)
    turns = [Fraction(0)] * groupoid.group.order
    for d, chi in zip(data.invariant_factors, data.characters):
        power = int(rng.integers(d))
        turns = [t + power * c for t, c in zip(turns, chi)]
    return CochainFunction(groupoid, 1, {(g,): Phase(t) for g, t in enumerate(turns)})


def random_gauge(groupoid: ActionGroupoid, rng: np.random.Generator, level: int = 0) -> CochainFunction:
    """A random nonvanishing function on nerve level ``level``: phases per point
    on finite spaces, periodic unit expressions on tori.

    Above level 0 the cochain is normalized: keys containing the identity
    are left at 1, so the gerbe it bounds has h(e, k) = h(k, e) = 1.
    """
    entries = {}
    identity = groupoid.group.identity
    for key in groupoid.level_keys(level):
        if identity in key:
            continue
        if groupoid.is_finite:
            entries[key] = tuple(random_phase(rng) for _ in groupoid.base_points())
        else:
            entries[key] = _unit_expr(rng, groupoid.dim)
    return CochainFunction(groupoid, level, entries)


def combine_lines(first: LineData, second: LineData) -> LineData:
    return LineData(first.h.product(second.h), first.A.combine(second.A))


def combine_gerbes(first: GerbeData, second: GerbeData) -> GerbeData:
    return GerbeData(first.h.product(second.h), first.A.combine(second.A), first.B.combine(second.B))


def random_line_data(groupoid: ActionGroupoid, rng: np.random.Generator) -> LineData:
    """chi * D_0(f), plus a G-invariant constant connection on tori."""
    line = combine_lines(LineData(random_character(groupoid, rng)), gauge_coboundary(random_gauge(groupoid, rng)))
    if groupoid.dim > 0:
        invariant = _invariant_constant_form(groupoid, 1, rng)
        line = combine_lines(line, LineData(CochainFunction(groupoid, 1), FormCochain(groupoid, 0, 1, {(): invariant})))
    return line


def random_torsion_cocycle(groupoid: ActionGroupoid, rng: np.random.Generator) -> CochainFunction:
    """A random class of H^2(G, C*) times the coboundary of random phases."""
    schur = h2_finite_group(groupoid.group)
    epsilon = schur.cocycle_for([int(rng.integers(d)) for d in schur.invariant_factors])
    shift = [Fraction(0) if g == groupoid.group.identity else random_phase(rng).turns
             for g in groupoid.group.elements]
    return epsilon.times_coboundary(shift).as_cochain(groupoid)


def random_gerbe_data(groupoid: ActionGroupoid, rng: np.random.Generator) -> GerbeData:
    """Torsion class * D_1(f, A), plus an invariant constant curving on tori."""
    torsion = GerbeData(random_torsion_cocycle(groupoid, rng))
    f = random_gauge(groupoid, rng, level=1)
    A = None
    if groupoid.dim > 0:
        A = FormCochain(groupoid, 0, 1, {(): random_one_form(rng, groupoid.dim)})
    gerbe = combine_gerbes(torsion, gerbe_coboundary(f, A))
    if groupoid.dim >= 2:
        curving = _invariant_constant_form(groupoid, 2, rng)
        gerbe = combine_gerbes(gerbe, GerbeData(
            CochainFunction(groupoid, 2), FormCochain.zero(groupoid, 1, 1),
            FormCochain(groupoid, 0, 2, {(): curving}),
        ))
    return gerbe


def torsion_line_data(groupoid: ActionGroupoid, rng: np.random.Generator) -> LineData:
    """Flat line data: a character times the coboundary of phases."""
    gauge = random_gauge(groupoid, rng) if groupoid.is_finite else CochainFunction(groupoid, 0)
    return LineData(random_character(groupoid, rng).product(cech_delta(gauge)))


def random_flat_three(groupoid: ActionGroupoid, rng: np.random.Generator) -> FlatNData:
    """p-th power of the cyclic 3-cocycle times the coboundary of random phases."""
    n = groupoid.group.order
    p = int(rng.integers(n))
    omega = CochainFunction(groupoid, 3, dict(cyclic_three_cocycle(n, p)))
    c = CochainFunction(groupoid, 2, {
        key: random_phase(rng) for key in groupoid.level_keys(2)
    })
    return FlatNData(omega.product(cech_delta(c)))


# loops


def random_partition(rng: np.random.Generator, segments: int) -> Partition:
    cuts = sorted(int(c) for c in rng.choice(np.arange(1, GRID), size=segments - 1, replace=False))
    return Partition(tuple([Fraction(0)] + [Fraction(c, GRID) for c in cuts] + [Fraction(1)]))


def _segment_expr(start: Sequence[Fraction], end: Sequence[Fraction], a: Fraction, b: Fraction,
                  bumps: Sequence[Fraction], variation: Optional[Tuple[Sequence, Sequence]] = None) -> Tuple[sympy.Expr, ...]:
    """Straight line from start (at a) to end (at b) plus a bump vanishing at both ends."""
    a_, b_ = _q(a), _q(b)
    tau = (T - a_) / (b_ - a_)
    exprs = []
    for j, (x0, x1) in enumerate(zip(start, end)):
        x0_, x1_ = _q(x0), _q(x1)
        bump = _q(bumps[j]) * (T - a_) * (b_ - T)
        expr = x0_ + (x1_ - x0_) * tau + bump
        if variation is not None:
            v0 = _q(variation[0][j])
            v1 = _q(variation[1][j])
            expr += S * (v0 + (v1 - v0) * tau + (T - a_) * (b_ - T))
        exprs.append(sympy.expand(expr))
    return tuple(exprs)


def _torus_endpoints(groupoid: ActionGroupoid, rng: np.random.Generator,
                     connecting: Sequence[int]) -> Tuple[List[Tuple], List[Tuple]]:
    n = len(connecting)
    ends = [tuple(_rational(rng, 8, 0, 1) for _ in range(groupoid.dim)) for _ in range(n)]
    starts = [None] * n
    for i in range(n):
        starts[(i + 1) % n] = tuple(Fraction(v) for v in groupoid.action.act_lifted(ends[i], connecting[i]))
    return starts, ends


def random_loop(groupoid: ActionGroupoid, rng: np.random.Generator,
                segments: Optional[int] = None) -> SegmentedLoop:
    """A random segmented loop with 1 to 3 segments."""
    n = segments if segments is not None else int(rng.integers(1, 4))
    partition = random_partition(rng, n)
    G = groupoid
    if G.is_finite:
        points = [int(rng.integers(G.space.size))]
        connecting = []
        for i in range(n - 1):
            g = int(rng.integers(G.group.order))
            connecting.append(g)
            points.append(G.action.act(points[-1], g))
        closing = [g for g in G.group.elements if G.action.act(points[-1], g) == points[0]]
        connecting.append(int(rng.choice(closing)))
        carriers = [PointCarrier(p) for p in points]
        return build_loop(G, partition, carriers, connecting)
    connecting = [int(rng.integers(G.group.order)) for _ in range(n)]
    starts, ends = _torus_endpoints(G, rng, connecting)
    carriers = []
    for i in range(n):
        a, b = partition.interval(i)
        bumps = [_rational(rng, 4, -1, 1) for _ in range(G.dim)]
        carriers.append(ParametricCarrier(_segment_expr(starts[i], ends[i], a, b, bumps)))
    return build_loop(G, partition, carriers, connecting)


def random_labels(groupoid: ActionGroupoid, rng: np.random.Generator, size: int) -> List[int]:
    return [int(rng.integers(groupoid.group.order)) for _ in range(size)]


def random_loop_arrow(loop: SegmentedLoop, rng: np.random.Generator) -> LoopArrow:
    return loop_arrow(loop, random_labels(loop.groupoid, rng, loop.size))


def random_arrow_pair(loop: SegmentedLoop, rng: np.random.Generator) -> Tuple[LoopArrow, LoopArrow]:
    first = random_loop_arrow(loop, rng)
    return first, random_loop_arrow(first.target, rng)


def random_breakpoints(loop: SegmentedLoop, rng: np.random.Generator, count: int) -> List[Fraction]:
    """Distinct new breakpoints on the grid of 1/64, away from the existing ones."""
    existing = set(loop.partition.points)
    candidates = [Fraction(k, 64) for k in range(1, 64) if Fraction(k, 64) not in existing]
    picks = rng.choice(len(candidates), size=min(count, len(candidates)), replace=False)
    return sorted(candidates[int(i)] for i in picks)


def random_family(groupoid: ActionGroupoid, rng: np.random.Generator,
                  segments: Optional[int] = None, epsilon: float = 0.1) -> LoopFamily:
    """A family of loop arrows on a torus quotient, linear in the parameter s.

    The variation at each junction is pushed through the linear part of
    the connecting element, so every slice is a loop.
    """
    G = groupoid
    if G.is_finite:
        raise ValueError("families need a torus model")
    n = segments if segments is not None else int(rng.integers(1, 3))
    partition = random_partition(rng, n)
    connecting = [int(rng.integers(G.group.order)) for _ in range(n)]
    starts, ends = _torus_endpoints(G, rng, connecting)
    moves_end = [tuple(_rational(rng, 4, -1, 1) for _ in range(G.dim)) for _ in range(n)]
    moves_start = [None] * n
    for i in range(n):
        moves_start[(i + 1) % n] = tuple(Fraction(v) for v in G.action.base_map(connecting[i]).linear(moves_end[i]))
    carriers = []
    for i in range(n):
        a, b = partition.interval(i)
        bumps = [_rational(rng, 4, -1, 1) for _ in range(G.dim)]
        exprs = _segment_expr(starts[i], ends[i], a, b, bumps, (moves_start[i], moves_end[i]))
        carriers.append(ParametricCarrier(exprs))
    labels = random_labels(G, rng, n)
    return make_family(G, partition, carriers, connecting, labels, epsilon=epsilon)


def arrow_chains(loop: SegmentedLoop, length: int) -> List[List[LoopArrow]]:
    """Every composable chain of ``length`` loop arrows starting at ``loop``."""
    G = loop.groupoid
    labelings = list(itertools.product(G.group.elements, repeat=loop.size))
    chains: List[List[LoopArrow]] = [[]]
    for _ in range(length):
        extended = []
        for chain in chains:
            start = chain[-1].target if chain else loop
            for labels in labelings:
                extended.append(chain + [loop_arrow(start, labels)])
        chains = extended
    return chains

