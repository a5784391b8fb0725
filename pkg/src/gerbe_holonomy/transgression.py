"""Transgression of Deligne cocycles to loop groupoids.

This module provides the holonomy evaluators:

- ``HolonomyMap`` (tau_1): line data to the function
  H(psi) = exp(sum_i int psi_i*A) * prod_i h(psi(a_i))^-1 on loops.
- ``TransgressedBundle`` (tau_2): gerbe data to the line bundle with
  connection (F, Delta) on the loop groupoid.
- ``FlatTransgression`` (tau_n): flat n-cocycles to functions on
  (n-1)-tuples of composable loop arrows.

and the harnesses checking their identities: multiplicativity of F,
the connection identity -dlog F = delta Delta along loop families and
the commutation square tau_2 o (delta + d) = (delta - d) o tau_1.

Exponentials carry no 2*pi*i factor: unit-modulus holonomy comes from
imaginary-valued forms.
"""

import logging
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import phases
from .deligne import CochainFunction, FlatNData, FormCochain, GerbeData, LineData, gerbe_coboundary
from .exceptions import ArityMismatch, NotComposable, StepTooLarge
from .groupoids import Arrow, Groupoid
from .loops import (
    LoopArrow,
    LoopFamily,
    LoopTangent,
    SegmentedLoop,
    compose_loop_arrows,
    integrate_along,
    refine_arrow,
    refine_loop,
    same_loop,
    segment_object,
)
from .models import Report
from .phases import Value
from .quadrature import DEFAULT_SUBINTERVALS, DEFAULT_TARGET

logger = logging.getLogger(__name__)

DEFAULT_FD_STEP = 1e-3
CONVERGENCE_FLOOR = 1e-11
CONVERGENCE_RATIO = 3.5


def _exponential(integral: complex, factors: Sequence[Value], groupoid: Groupoid) -> Value:
    """exp(integral) * prod factors, exact when there is nothing to integrate."""
    product = phases.multiply(factors)
    if groupoid.dim == 0 or integral == 0:
        return product
    return complex(np.exp(integral)) * complex(product)


def _level0_form(groupoid: Groupoid, forms: FormCochain, loop: SegmentedLoop, i: int):
    seg = loop.segments[i]
    key, _ = groupoid.locate_object(segment_object(groupoid, seg, seg.start))
    return forms.entry(key)


def tau1_eval(data: LineData, loop: SegmentedLoop, n: int = DEFAULT_SUBINTERVALS,
              target: Optional[float] = DEFAULT_TARGET) -> Value:
    """H(psi) = exp(sum_i int psi_i*A) * prod_i h(psi(a_i))^-1."""
    G = loop.groupoid
    integral = 0j
    for i, seg in enumerate(loop.segments):
        integral += integrate_along(_level0_form(G, data.A, loop, i), seg, n=n, target=target)
    factors = [phases.inverse(data.h(arrow)) for arrow in loop.arrows]
    return _exponential(integral, factors, G)


@dataclass(frozen=True)
class HolonomyMap:
    """tau_1 of line data, evaluated on loops."""

    data: LineData
    quadrature_n: int = DEFAULT_SUBINTERVALS
    target: Optional[float] = DEFAULT_TARGET

    def __call__(self, loop: SegmentedLoop) -> Value:
        return tau1_eval(self.data, loop, self.quadrature_n, self.target)

    def delta(self, arrow: LoopArrow) -> Value:
        """(delta H)(Lambda) = H(target) / H(source)."""
        return phases.multiply([self(arrow.target), phases.inverse(self(arrow.source))])


def F_eval(data: GerbeData, arrow: LoopArrow, n: int = DEFAULT_SUBINTERVALS,
           target: Optional[float] = DEFAULT_TARGET) -> Value:
    """F(Lambda) = exp(sum_i int Lambda_i*A) * prod_i h(psi(a_i), Lambda_{i+1}(a_i)) / h(Lambda_i(a_i), phi(a_i)).

    Over [M/G] with one segment this is exp(int psi*A_k) h_{g,k} / h_{k,k^-1gk}
    at psi(1); over a cover it is the chart formula with the segment charts.
    """
    G = arrow.groupoid
    source, image = arrow.source, arrow.target
    integral = 0j
    factors: List[Value] = []
    for i, seg in enumerate(source.segments):
        key, _ = G.locate([arrow.start_arrow(i)])
        integral += integrate_along(data.A.entry(key), seg, n=n, target=target)
        factors.append(data.h(source.arrows[i], arrow.start_arrow(i + 1)))
        factors.append(phases.inverse(data.h(arrow.end_arrow(i), image.arrows[i])))
    return _exponential(integral, factors, G)


def Delta_eval(data: GerbeData, loop: SegmentedLoop, tangent: LoopTangent,
               n: int = DEFAULT_SUBINTERVALS, target: Optional[float] = DEFAULT_TARGET) -> complex:
    """<Delta_psi, xi> = sum_i int B(dpsi_i/dt, xi_i) dt + sum_i <A_{psi(a_i)}, xi_i(a_i)>."""
    G = loop.groupoid
    if G.dim == 0:
        return 0j
    total = 0j
    for i, seg in enumerate(loop.segments):
        total += integrate_along(_level0_form(G, data.B, loop, i), seg, tangent.fields[i], n=n, target=target)
        arrow = loop.arrows[i]
        key, base = G.locate([arrow])
        form = data.A.entry(key)
        if form.coefficients:
            point = np.array([[float(v) for v in base]])
            vector = tangent.at(i, seg.end)[None, :]
            total += complex(form.evaluate_batch(point, [vector])[0])
    return total


@dataclass(frozen=True)
class TransgressedBundle:
    """tau_2 of gerbe data: the transition function F and the connection Delta."""

    data: GerbeData
    quadrature_n: int = DEFAULT_SUBINTERVALS
    target: Optional[float] = DEFAULT_TARGET

    def F(self, arrow: LoopArrow) -> Value:
        return F_eval(self.data, arrow, self.quadrature_n, self.target)

    def Delta(self, loop: SegmentedLoop, tangent: LoopTangent) -> complex:
        return Delta_eval(self.data, loop, tangent, self.quadrature_n, self.target)


def tau2_build(data: GerbeData, quadrature_n: int = DEFAULT_SUBINTERVALS,
               target: Optional[float] = DEFAULT_TARGET) -> TransgressedBundle:
    return TransgressedBundle(data, quadrature_n, target)


# flat transgression


def _loops_of(arrows: Sequence[LoopArrow], loop: Optional[SegmentedLoop]) -> List[SegmentedLoop]:
    if not arrows:
        if loop is None:
            raise ArityMismatch("a loop is needed when no arrows are given")
        return [loop]
    loops = [arrows[0].source]
    for previous, current in zip(arrows, arrows[1:]):
        if not same_loop(previous.target, current.source):
            raise NotComposable(str(previous.target), str(current.source))
    loops.extend(a.target for a in arrows)
    return loops


def junction_tuple(arrows: Sequence[LoopArrow], i: int, j: int,
                   loop: Optional[SegmentedLoop] = None) -> Tuple[Arrow, ...]:
    """(Lambda^1_i(a_i), .., Lambda^j_i(a_i), psi^j(a_i), Lambda^{j+1}_{i+1}(a_i), ..).

    psi^0 is the source of the first arrow and psi^j the target of the
    j-th; the tuple is composable and has len(arrows) + 1 entries.
    """
    loops = _loops_of(arrows, loop)
    before = tuple(arrows[m].end_arrow(i) for m in range(j))
    after = tuple(arrows[m].start_arrow(i + 1) for m in range(j, len(arrows)))
    return before + (loops[j].arrows[i],) + after


def tau_n_flat_eval(data: FlatNData, arrows: Sequence[LoopArrow], loop: Optional[SegmentedLoop] = None,
                    n: int = DEFAULT_SUBINTERVALS, target: Optional[float] = DEFAULT_TARGET) -> Value:
    """F_n on n-1 composable loop arrows (on a loop when n = 1).

    prod_i prod_{j=0}^{n-1} omega(junction_tuple(i, j))^((-1)^(j+n)),
    times exp(sum_i int theta^1) over the arrow tuple along segment i.

    Raises:
        NotComposable: consecutive arrows do not compose
    """
    order = data.n
    if len(arrows) != order - 1:
        raise ArityMismatch(f"degree-{order} data is evaluated on {order - 1} loop arrows, got {len(arrows)}")
    loops = _loops_of(arrows, loop)
    base_loop = loops[0]
    G = base_loop.groupoid
    factors: List[Value] = []
    for i in range(base_loop.size):
        for j in range(order):
            value = data.omega(*junction_tuple(arrows, i, j, base_loop))
            factors.append(value if (j + order) % 2 == 0 else phases.inverse(value))
    integral = 0j
    if arrows and data.forms:
        for i, seg in enumerate(base_loop.segments):
            key, _ = G.locate([a.start_arrow(i) for a in arrows])
            integral += integrate_along(data.theta.entry(key), seg, n=n, target=target)
    return _exponential(integral, factors, G)


@dataclass(frozen=True)
class FlatTransgression:
    data: FlatNData
    quadrature_n: int = DEFAULT_SUBINTERVALS
    target: Optional[float] = DEFAULT_TARGET

    @property
    def n(self) -> int:
        return self.data.n

    def __call__(self, arrows: Sequence[LoopArrow], loop: Optional[SegmentedLoop] = None) -> Value:
        return tau_n_flat_eval(self.data, arrows, loop, self.quadrature_n, self.target)


# finite differences along families


def _log_ratio(plus: Value, minus: Value) -> complex:
    ratio = complex(plus) / complex(minus)
    if abs(ratio - 1) > 0.5:
        raise StepTooLarge(ratio)
    return complex(np.log1p(ratio - 1))


def dlogF_fd(bundle: TransgressedBundle, family: LoopFamily, step: float = DEFAULT_FD_STEP) -> complex:
    """d/ds log F(Lambda(s)) at 0 by central differences of F(Lambda(+h)) / F(Lambda(-h)).

    Both slices use the bundle's fixed subinterval count, so their
    quadrature errors cancel in the quotient.

    Raises:
        StepTooLarge: the ratio is far from 1, so the step is too coarse
    """
    pinned = replace(bundle, target=None)
    return _log_ratio(pinned.F(family.slice(step)), pinned.F(family.slice(-step))) / (2 * step)


def dlogH_fd(holonomy: HolonomyMap, family: LoopFamily, step: float = DEFAULT_FD_STEP) -> complex:
    """d/ds log H(psi(s)) at 0 along the source loops of the family."""
    pinned = replace(holonomy, target=None)
    return _log_ratio(pinned(family.source(step)), pinned(family.source(-step))) / (2 * step)


def connection_mismatch(bundle: TransgressedBundle, family: LoopFamily, step: float) -> float:
    """|-dlog F - (Delta(phi, xi_phi) - Delta(psi, xi_psi))| for the family's tangent."""
    base = family.slice(0)
    source_tangent, target_tangent = family.tangents()
    expected = bundle.Delta(base.target, target_tangent) - bundle.Delta(base.source, source_tangent)
    return abs(-dlogF_fd(bundle, family, step) - expected)


def _reduction(coarse: float, fine: float) -> float:
    """coarse / fine, infinite once a mismatch is at the rounding floor."""
    if coarse <= CONVERGENCE_FLOOR or fine <= CONVERGENCE_FLOOR:
        return float("inf")
    return coarse / fine


def _convergence(report: Report, name: str, mismatches: Sequence[Tuple[float, float]]) -> None:
    """Each family's mismatch must shrink by CONVERGENCE_RATIO when the step halves."""
    worst, witness = float("inf"), None
    for index, (coarse, fine) in enumerate(mismatches):
        reduction = _reduction(coarse, fine)
        if reduction < worst:
            worst, witness = reduction, f"family {index}: {coarse:.3e} -> {fine:.3e}"
    report.add_check(name, max(0.0, CONVERGENCE_RATIO - worst), 0.0, samples=len(mismatches), witness=witness)
    if witness is not None:
        report.values[f"{name} ratio"] = f"{worst:.3f}"


def check_connection_identity(bundle: TransgressedBundle, families: Sequence[LoopFamily],
                              step: float = DEFAULT_FD_STEP, tol: float = 1e-4, seed: Optional[int] = None) -> Report:
    """-dlog F = delta Delta along each family, at ``step`` and ``step / 2``."""
    report = Report(command="connection", seed=seed)
    worst_coarse = 0.0
    witness = None
    mismatches = []
    for index, family in enumerate(families):
        coarse = connection_mismatch(bundle, family, step)
        fine = connection_mismatch(bundle, family, step / 2)
        if coarse >= worst_coarse:
            worst_coarse, witness = coarse, f"family {index}"
        mismatches.append((coarse, fine))
        logger.debug("family %d: mismatch %.3e at h, %.3e at h/2", index, coarse, fine)
    report.add_check("connection identity", worst_coarse, tol, samples=len(families), witness=witness)
    _convergence(report, "connection convergence", mismatches)
    report.values["fd_step"] = repr(step)
    return report


def check_multiplicativity(bundle: TransgressedBundle, pairs: Sequence[Tuple[LoopArrow, LoopArrow]],
                           tol: float = 1e-8, seed: Optional[int] = None) -> Report:
    """F(Lambda o Omega) = F(Lambda) F(Omega) on composable pairs."""
    report = Report(command="multiplicativity", seed=seed)
    worst = 0.0
    exact = True
    witness = None
    for index, (first, second) in enumerate(pairs):
        together = bundle.F(compose_loop_arrows(first, second))
        apart = phases.multiply([bundle.F(first), bundle.F(second)])
        gap = phases.distance(together, apart)
        exact = exact and phases.is_exact(together) and phases.is_exact(apart)
        if gap > worst:
            worst, witness = gap, f"pair {index}: {first} then {second}"
    report.add_check("F multiplicative", worst, 0.0 if exact and pairs else tol, exact=exact and bool(pairs),
                     samples=len(pairs), witness=witness)
    return report


def check_invariance(holonomy: HolonomyMap, arrows: Sequence[LoopArrow], tol: float = 1e-8,
                     seed: Optional[int] = None) -> Report:
    """H(target) = H(source) on every loop arrow."""
    report = Report(command="invariance", seed=seed)
    worst, witness, exact = 0.0, None, True
    for index, arrow in enumerate(arrows):
        value = holonomy.delta(arrow)
        exact = exact and phases.is_exact(value)
        gap = phases.distance_from_one(value)
        if gap > worst:
            worst, witness = gap, f"arrow {index}: {arrow}"
    exact = exact and bool(arrows)
    report.add_check("H invariant", worst, 0.0 if exact else tol, exact=exact,
                     samples=len(arrows), witness=witness)
    return report


def check_refinement(holonomy: HolonomyMap, loops: Sequence[SegmentedLoop], points: Sequence,
                     bundle: Optional[TransgressedBundle] = None, arrows: Sequence[LoopArrow] = (),
                     tol: float = 1e-9) -> Report:
    """H and F are unchanged when loops and arrows are refined at ``points``."""
    report = Report(command="refinement")
    worst = 0.0
    for loop in loops:
        fresh = [p for p in points if p not in loop.partition.points]
        worst = max(worst, phases.distance(holonomy(loop), holonomy(refine_loop(loop, fresh))))
    report.add_check("H refinement invariant", worst, tol, samples=len(loops))
    if bundle is not None:
        worst = 0.0
        for arrow in arrows:
            fresh = [p for p in points if p not in arrow.source.partition.points]
            worst = max(worst, phases.distance(bundle.F(arrow), bundle.F(refine_arrow(arrow, fresh))))
        report.add_check("F refinement invariant", worst, tol, samples=len(arrows))
    return report


def check_commutation_square(f: CochainFunction, A: Optional[FormCochain], arrows: Sequence[LoopArrow],
                             families: Sequence[LoopFamily] = (), step: float = DEFAULT_FD_STEP,
                             tol: float = 1e-9, form_tol: float = 1e-4,
                             n: int = DEFAULT_SUBINTERVALS, seed: Optional[int] = None) -> Report:
    """tau_2 o (delta + d) against (delta - d) o tau_1 on line data (f, A).

    Function parts: F(Lambda) of the gerbe D_1(f, A) against H(phi) / H(psi).
    Form parts: Delta(psi, xi) against -dlog H along each family, by
    central differences at ``step`` and ``step / 2``.
    """
    report = Report(command="square", seed=seed)
    line = LineData(f, A)
    holonomy = HolonomyMap(line, n)
    bundle = tau2_build(gerbe_coboundary(f, line.A), n)
    worst, witness, exact = 0.0, None, True
    for index, arrow in enumerate(arrows):
        left = bundle.F(arrow)
        right = holonomy.delta(arrow)
        exact = exact and phases.is_exact(left) and phases.is_exact(right)
        gap = phases.distance(left, right)
        if gap > worst:
            worst, witness = gap, f"arrow {index}: {arrow}"
    exact = exact and bool(arrows)
    report.add_check("square function part", worst, 0.0 if exact else tol, exact=exact,
                     samples=len(arrows), witness=witness)
    coarse = 0.0
    witness = None
    mismatches = []
    for index, family in enumerate(families):
        base = family.slice(0)
        tangent, _ = family.tangents()
        delta = bundle.Delta(base.source, tangent)
        here = abs(delta + dlogH_fd(holonomy, family, step))
        there = abs(delta + dlogH_fd(holonomy, family, step / 2))
        if here >= coarse:
            coarse, witness = here, f"family {index}"
        mismatches.append((here, there))
    report.add_check("square form part", coarse, form_tol, samples=len(families), witness=witness)
    if families:
        _convergence(report, "square form convergence", mismatches)
    report.values["fd_step"] = repr(step)
    logger.info("commutation square: function %.3e, form %.3e", worst, coarse)
    return report


def flat_cocycle_defect(transgression: FlatTransgression, tuples: Sequence[Sequence[LoopArrow]]) -> Tuple[float, Optional[str]]:
    """Largest |delta F_n - 1| over composable n-tuples of loop arrows.

    (delta F)(L_1..L_n) = prod_i F(faces_i)^((-1)^i) with inner faces
    composing adjacent arrows.
    """
    worst, witness = 0.0, None
    for index, chain in enumerate(tuples):
        k = len(chain)
        factors: List[Value] = []
        for i in range(k + 1):
            if i == 0:
                face = list(chain[1:])
            elif i == k:
                face = list(chain[:-1])
            else:
                face = list(chain[: i - 1]) + [compose_loop_arrows(chain[i - 1], chain[i])] + list(chain[i + 1:])
            loop = chain[0].target if i == 0 and k == 1 else chain[0].source
            value = transgression(face, loop)
            factors.append(value if i % 2 == 0 else phases.inverse(value))
        gap = phases.distance_from_one(phases.multiply(factors))
        if gap > worst:
            worst, witness = gap, f"tuple {index}"
    return worst, witness
