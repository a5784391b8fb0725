"""Built-in acceptance suites.

Each suite builds its own seeded data, runs one family of identities
and returns a ``Report``. ``selftest`` runs them without any input
file; ``quick`` mode shrinks the sample counts for smoke checks.
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from . import phases
from .cohomology import (
    TorsionCocycle,
    abelian_multiplier,
    brute_force_h2_order,
    h2_finite_group,
)
from .deligne import FlatNData, FormCochain, gauge_coboundary
from .groupoids import ActionGroupoid, point_quotient, reflection_torus
from .groups import parse_group
from .loops import constant_loop, loop_arrow, zero_tangent
from .models import CheckResult, Report, UnitTally
from .quadrature import simpson
from .sampling import (
    arrow_chains,
    random_arrow_pair,
    random_breakpoints,
    random_family,
    random_flat_three,
    random_gauge,
    random_gerbe_data,
    random_line_data,
    random_loop,
    random_loop_arrow,
    random_one_form,
)
from .sectors import check_constant_loops, check_inner_local_system, restrict_to_inertia, torsion_gerbe
from .transgression import (
    FlatTransgression,
    HolonomyMap,
    check_commutation_square,
    check_connection_identity,
    check_multiplicativity,
    check_refinement,
    flat_cocycle_defect,
    tau2_build,
    tau_n_flat_eval,
)

logger = logging.getLogger(__name__)

TOLERANCE = 1e-8
REFINEMENT_TOLERANCE = 1e-9
FD_TOLERANCE = 1e-4
QUADRATURE_TOLERANCE = 1e-9

GROUPS_UP_TO_EIGHT = (
    "1", "Z/2", "Z/3", "Z/4", "Z/2xZ/2", "Z/5", "Z/6", "Z/7",
    "Z/8", "Z/2xZ/4", "Z/2xZ/2xZ/2", "S3", "D4", "Q8",
)
ABELIAN_UP_TO_EIGHT = {
    "Z/2": (2,), "Z/3": (3,), "Z/4": (4,), "Z/2xZ/2": (2, 2), "Z/5": (5,), "Z/6": (6,),
    "Z/7": (7,), "Z/8": (8,), "Z/2xZ/4": (2, 4), "Z/2xZ/2xZ/2": (2, 2, 2),
}
BRUTE_FORCE = (("Z/2", 2), ("Z/3", 3), ("Z/2xZ/2", 2), ("Z/4", 4))

Runner = Callable[[np.random.Generator, bool], Report]


@dataclass(frozen=True)
class Suite:
    name: str
    title: str
    runner: Runner


SUITES: Dict[str, Suite] = {}


def suite(name: str, title: str) -> Callable[[Runner], Runner]:
    def register(runner: Runner) -> Runner:
        SUITES[name] = Suite(name, title, runner)
        return runner
    return register


def _count(full: int, quick: bool) -> int:
    return max(2, full // 10) if quick else full


def _backends() -> List[ActionGroupoid]:
    return [point_quotient(parse_group("Z/2xZ/2")), reflection_torus(1)]


def _tagged(report: Report, tag: str) -> Report:
    """Copy of the report with ``[tag]`` appended to every check name."""
    tagged = report.model_copy(deep=True)
    for check in tagged.checks:
        check.name = f"{check.name} [{tag}]"
    return tagged


def _combine(command: str, reports: Sequence[Report], seed: Optional[int] = None) -> Report:
    """Fold reports into one, keeping the worst residual per check name."""
    combined = Report(command=command, seed=seed)
    by_name: Dict[str, CheckResult] = {}
    for report in reports:
        combined.values.update(report.values)
        combined.tables.extend(report.tables)
        for check in report.checks:
            seen = by_name.get(check.name)
            if seen is None:
                by_name[check.name] = check.model_copy()
                combined.checks.append(by_name[check.name])
                continue
            if check.residual > seen.residual or (not check.passed and seen.passed):
                seen.residual, seen.witness = check.residual, check.witness
            seen.tolerance = max(seen.tolerance, check.tolerance)
            seen.passed = seen.passed and check.passed
            seen.exact = seen.exact and check.exact
            seen.samples += check.samples
    return combined


# holonomy


@suite("holonomy-invariance", "H(target) = H(source) for random line cocycles and loop arrows")
def holonomy_invariance(rng: np.random.Generator, quick: bool) -> Report:
    report = Report(command="holonomy-invariance")
    for G in _backends():
        tally = UnitTally()
        for index in range(_count(50, quick)):
            holonomy = HolonomyMap(random_line_data(G, rng))
            arrow = random_loop_arrow(random_loop(G, rng), rng)
            tally.update(holonomy.delta(arrow), f"sample {index}: {arrow}")
        tally.record(report, f"H invariant [{G!r}]", TOLERANCE)
    return report


@suite("coboundary-annihilation", "the holonomy of a gauge coboundary is 1")
def coboundary_annihilation(rng: np.random.Generator, quick: bool) -> Report:
    report = Report(command="coboundary-annihilation")
    for G in _backends():
        tally = UnitTally()
        for index in range(_count(20, quick)):
            holonomy = HolonomyMap(gauge_coboundary(random_gauge(G, rng)))
            loop = random_loop(G, rng)
            tally.update(holonomy(loop), f"sample {index}: {loop}")
        tally.record(report, f"H of D0 f is 1 [{G!r}]", TOLERANCE)
    return report


@suite("refinement", "H and F are unchanged by refining the partition")
def refinement(rng: np.random.Generator, quick: bool) -> Report:
    reports = []
    for G in _backends():
        for _ in range(_count(10, quick)):
            holonomy = HolonomyMap(random_line_data(G, rng))
            bundle = tau2_build(random_gerbe_data(G, rng))
            loop = random_loop(G, rng)
            arrow = random_loop_arrow(loop, rng)
            points = random_breakpoints(loop, rng, 5)
            reports.append(_tagged(
                check_refinement(holonomy, [loop], points, bundle, [arrow], REFINEMENT_TOLERANCE), repr(G),
            ))
    return _combine("refinement", reports)


# transgressed bundle


@suite("F-multiplicativity", "F(L o M) = F(L) F(M) over random gerbe cocycles")
def f_multiplicativity(rng: np.random.Generator, quick: bool) -> Report:
    reports = []
    for G in (point_quotient(parse_group("Z/2xZ/2")), reflection_torus(2)):
        for _ in range(_count(25, quick)):
            bundle = tau2_build(random_gerbe_data(G, rng))
            pair = random_arrow_pair(random_loop(G, rng), rng)
            reports.append(_tagged(check_multiplicativity(bundle, [pair], TOLERANCE), repr(G)))
    return _combine("F-multiplicativity", reports)


@suite("connection-identity", "-dlog F = delta Delta along random torus families")
def connection_identity(rng: np.random.Generator, quick: bool) -> Report:
    G = reflection_torus(2)
    reports = []
    for _ in range(_count(20, quick)):
        bundle = tau2_build(random_gerbe_data(G, rng))
        reports.append(check_connection_identity(bundle, [random_family(G, rng)], tol=FD_TOLERANCE))
    return _combine("connection-identity", reports)


@suite("commutation-square", "tau_2 o D_1 = D o tau_1 on line cochains")
def commutation_square(rng: np.random.Generator, quick: bool) -> Report:
    reports = []
    G = point_quotient(parse_group("Z/2xZ/2"))
    for _ in range(_count(10, quick)):
        f = random_gauge(G, rng, level=1)
        arrows = [random_loop_arrow(random_loop(G, rng), rng) for _ in range(3)]
        reports.append(_tagged(check_commutation_square(f, None, arrows), repr(G)))
    G = reflection_torus(1)
    for _ in range(_count(10, quick)):
        f = random_gauge(G, rng, level=1)
        A = FormCochain(G, 0, 1, {(): random_one_form(rng, G.dim)})
        family = random_family(G, rng)
        arrows = [family.slice(0), random_loop_arrow(random_loop(G, rng), rng)]
        reports.append(_tagged(
            check_commutation_square(f, A, arrows, [family], tol=TOLERANCE, form_tol=FD_TOLERANCE), repr(G),
        ))
    return _combine("commutation-square", reports)


# torsion and sectors


def sign_torsion(group_spec: str = "Z/2xZ/2") -> TorsionCocycle:
    """e((a1, a2), (b1, b2)) = (-1)^(a1 b2) on Z/2 x Z/2."""
    G = parse_group(group_spec)
    coords = {G.index(f"({a},{b})"): (a, b) for a, b in itertools.product(range(2), repeat=2)}
    return TorsionCocycle.from_function(G, lambda g, h: Fraction(coords[g][0] * coords[h][1], 2))


@suite("discrete-torsion", "F((phi, g), k) = e(g, k) / e(k, g) for the sign cocycle")
def discrete_torsion(rng: np.random.Generator, quick: bool) -> Report:
    epsilon = sign_torsion()
    G = point_quotient(epsilon.group)
    bundle = tau2_build(torsion_gerbe(epsilon, G))
    report = Report(command="discrete-torsion")
    ratio, connection = UnitTally(), 0.0
    for g, k in itertools.product(G.group.elements, repeat=2):
        loop = constant_loop(G, "pt", g)
        expected = epsilon(g, k) / epsilon(k, g)
        F = bundle.F(loop_arrow(loop, [k]))
        ratio.update(phases.multiply([F, phases.inverse(expected)]),
                     f"({G.group.label_of(g)}, {G.group.label_of(k)})")
        connection = max(connection, abs(bundle.Delta(loop, zero_tangent(loop))))
        report.values[f"F({G.group.label_of(g)},{G.group.label_of(k)})"] = phases.format_value(F)
    ratio.record(report, "F matches the torsion ratio", 0.0)
    report.add_check("Delta vanishes", connection, 0.0, exact=True, samples=G.group.order**2)
    return report


@suite("inner-local-system", "restricted transgressions are inner local systems")
def inner_local_system(rng: np.random.Generator, quick: bool) -> Report:
    reports = []
    specs = GROUPS_UP_TO_EIGHT[:6] if quick else GROUPS_UP_TO_EIGHT
    for spec in specs:
        group = parse_group(spec)
        schur = h2_finite_group(group)
        G = point_quotient(group)
        for epsilon in schur.representatives or [TorsionCocycle.trivial(group)]:
            bundle = tau2_build(torsion_gerbe(epsilon, G))
            ls = restrict_to_inertia(bundle)
            reports.append(check_inner_local_system(ls, points=0))
            reports.append(check_constant_loops(ls, bundle))
    G = reflection_torus(2)
    bundle = tau2_build(random_gerbe_data(G, rng))
    ls = restrict_to_inertia(bundle)
    reports.append(_tagged(check_inner_local_system(ls, TOLERANCE, points=_count(100, quick)), repr(G)))
    reports.append(_tagged(check_constant_loops(ls, bundle), repr(G)))
    combined = _combine("inner-local-system", reports)
    combined.values["groups"] = ", ".join(specs)
    return combined


@suite("schur-multiplier", "H^2(G, C*) against closed forms and exhaustive enumeration")
def schur_multiplier(rng: np.random.Generator, quick: bool) -> Report:
    report = Report(command="schur-multiplier")
    mismatches, witness = 0, None
    for spec, orders in ABELIAN_UP_TO_EIGHT.items():
        found = h2_finite_group(parse_group(spec)).invariant_factors
        expected = abelian_multiplier(orders)
        report.values[f"H2({spec})"] = str(found)
        if list(found) != list(expected):
            mismatches, witness = mismatches + 1, f"{spec}: {found} != {expected}"
    for spec, expected in (("S3", []), ("D4", [2]), ("Q8", [])):
        found = h2_finite_group(parse_group(spec)).invariant_factors
        report.values[f"H2({spec})"] = str(found)
        if list(found) != expected:
            mismatches, witness = mismatches + 1, f"{spec}: {found} != {expected}"
    report.add_check("invariant factors match closed forms", float(mismatches), 0.0, exact=True,
                     samples=len(ABELIAN_UP_TO_EIGHT) + 3, witness=witness)
    mismatches, witness = 0, None
    cases = BRUTE_FORCE[:3] if quick else BRUTE_FORCE
    for spec, m in cases:
        group = parse_group(spec)
        order = h2_finite_group(group).order
        counted = brute_force_h2_order(group, m)
        if order != counted:
            mismatches, witness = mismatches + 1, f"{spec}: {order} != {counted}"
    report.add_check("multiplier order matches enumeration", float(mismatches), 0.0, exact=True,
                     samples=len(cases), witness=witness)
    return report


# flat transgression


@suite("flat-transgression", "tau_n on flat data: n = 2 agrees with tau_2, delta F_3 = 1")
def flat_transgression(rng: np.random.Generator, quick: bool) -> Report:
    report = Report(command="flat-transgression")
    G = point_quotient(parse_group("Z/2xZ/2"))
    reduction = UnitTally()
    for index in range(_count(20, quick)):
        data = random_gerbe_data(G, rng)
        bundle = tau2_build(data)
        arrow = random_loop_arrow(random_loop(G, rng), rng)
        flat = tau_n_flat_eval(FlatNData(data.h), [arrow])
        reduction.update(phases.multiply([flat, phases.inverse(bundle.F(arrow))]), f"sample {index}: {arrow}")
    reduction.record(report, "n = 2 reduction matches F", 0.0)
    G = point_quotient(parse_group("Z/2"))
    worst, witness, samples = 0.0, None, 0
    for index in range(_count(20, quick)):
        transgression = FlatTransgression(random_flat_three(G, rng))
        chains = arrow_chains(random_loop(G, rng, segments=1 + index % 2), 3)
        defect, where = flat_cocycle_defect(transgression, chains)
        samples += len(chains)
        if defect > worst:
            worst, witness = defect, f"cocycle {index}, {where}"
    report.add_check("delta F_3 is 1", worst, 0.0, exact=True, samples=samples, witness=witness)
    return report


# numerics


@suite("quadrature", "Simpson's rule: exact on constants, fourth-order convergence")
def quadrature(rng: np.random.Generator, quick: bool) -> Report:
    report = Report(command="quadrature")
    worst = 0.0
    for c in rng.uniform(-5.0, 5.0, size=_count(20, quick)):
        a, b = sorted(rng.uniform(-1.0, 1.0, size=2))
        value = simpson(lambda t, c=c: np.full_like(t, c), a, b, 16)
        worst = max(worst, abs(value - c * (b - a)))
    report.add_check("constant integrands", worst, QUADRATURE_TOLERANCE)
    exact = np.e - 1.0
    coarse = abs(simpson(np.exp, 0.0, 1.0, 8) - exact)
    fine = abs(simpson(np.exp, 0.0, 1.0, 16) - exact)
    ratio = coarse / fine
    report.add_check("order-4 convergence", max(0.0, 8.0 - ratio), 0.0, samples=2,
                     witness=f"error ratio {ratio:.3f}")
    report.values["error ratio"] = f"{ratio:.3f}"
    return report


# running


def list_suites() -> List[Suite]:
    return list(SUITES.values())


def run_suite(name: str, seed: int = 0, quick: bool = False) -> Report:
    """Run one suite with a generator seeded by ``seed``.

    Raises:
        KeyError: unknown suite name
    """
    entry = SUITES[name]
    logger.info("suite %s (seed %d%s)", name, seed, ", quick" if quick else "")
    report = entry.runner(np.random.default_rng(seed), quick)
    report.command = f"selftest {name}"
    report.seed = seed
    return report


def run_all(seed: int = 0, quick: bool = False, names: Optional[Sequence[str]] = None) -> Report:
    """Run the suites in order; check names are prefixed by the suite name."""
    combined = Report(command="selftest", seed=seed)
    for name in names or list(SUITES):
        result = run_suite(name, seed, quick)
        for check in result.checks:
            renamed = check.model_copy()
            renamed.name = f"{name}: {check.name}"
            combined.checks.append(renamed)
        combined.values.update({f"{name}: {key}": value for key, value in result.values.items()})
    return combined
