"""Twisted sectors and inner local systems.

Restricting the transgressed line bundle of a gerbe on [M/G] to
constant loops gives a function on the inertia groupoid,

    f(v, a) = h(v, a) / h(a, a^-1 v a),

together with the restriction of the connection to the fixed sets.
This module builds that local system, checks the inner local system
axioms and splits [M/G] into sectors [M^g / C(g)].
"""

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import phases
from .cohomology import TorsionCocycle
from .deligne import GerbeData
from .exceptions import GroupSpecError, InputError
from .forms import PForm, exterior_d, pullback_form
from .groupoids import (
    ActionGroupoid,
    AffineSubtorus,
    InertiaArrow,
    InertiaGroupoid,
    QuotientArrow,
    inertia,
)
from .groups import Subgroup, conjugacy_data
from .loops import constant_loop, loop_arrow
from .models import Report, ReportTable, UnitTally
from .phases import Value
from .transgression import TransgressedBundle

logger = logging.getLogger(__name__)

FLATNESS_TOLERANCE = 1e-8


def object_label(groupoid: ActionGroupoid, v: QuotientArrow) -> str:
    if groupoid.is_finite:
        point = groupoid.space.points[v.point]
    else:
        point = "(" + ", ".join(str(x) for x in v.point) + ")"
    return f"{point}|{groupoid.group.label_of(v.element)}"


@dataclass
class LocalSystem:
    """The function f on inertia arrows and the flat 1-forms on fixed sets."""

    inertia: InertiaGroupoid
    data: GerbeData
    omega_flat: Dict[int, PForm] = field(default_factory=dict)
    overrides: Dict[Tuple[int, int], Value] = field(default_factory=dict)

    @property
    def groupoid(self) -> ActionGroupoid:
        return self.inertia.groupoid

    @cached_property
    def object_list(self) -> List[QuotientArrow]:
        return self.inertia.objects()

    def objects(self) -> List[QuotientArrow]:
        return self.object_list

    def f(self, arrow: InertiaArrow) -> Value:
        """h(v, a) / h(a, a^-1 v a), unless overridden."""
        if self.overrides:
            key = self._key(arrow)
            if key in self.overrides:
                return self.overrides[key]
        conjugated = self.inertia.target(arrow)
        h = self.data.h
        return phases.multiply([h(arrow.loop, arrow.alpha), phases.inverse(h(arrow.alpha, conjugated))])

    def _key(self, arrow: InertiaArrow) -> Optional[Tuple[int, int]]:
        objects = self.objects()
        for index, v in enumerate(objects):
            if v.element == arrow.loop.element and self.groupoid.same_object(v.point, arrow.loop.point):
                return index, arrow.alpha.element
        return None

    def arrow(self, index: int, k: int) -> InertiaArrow:
        v = self.objects()[index]
        return InertiaArrow(v, QuotientArrow(v.point, k))

    def perturbed(self, index: int, k: int, factor: Value) -> "LocalSystem":
        """Copy with f at (object ``index``, element ``k``) multiplied by ``factor``."""
        overrides = dict(self.overrides)
        overrides[(index, k)] = phases.multiply([self.f(self.arrow(index, k)), factor])
        return LocalSystem(self.inertia, self.data, dict(self.omega_flat), overrides)

    def table(self) -> ReportTable:
        G = self.groupoid
        rows = []
        for index, v in enumerate(self.objects()):
            for k in G.group.elements:
                value = self.f(self.arrow(index, k))
                rows.append([object_label(G, v), G.group.label_of(k), phases.format_value(value)])
        return ReportTable(title="inner local system", columns=["object", "arrow", "f"], rows=rows)


def restrict_to_inertia(bundle: TransgressedBundle, resolution: int = 0) -> LocalSystem:
    """Restrict tau_2 of gerbe data on [M/G] to constant loops.

    ``resolution`` sets the grid used on positive-dimensional fixed
    components of torus models.
    """
    data = bundle.data
    G = data.groupoid
    if not isinstance(G, ActionGroupoid):
        raise InputError("inertia restriction needs an action groupoid")
    omega = {}
    if G.dim > 0:
        omega = {g: data.A.entry((g,)) for g in G.group.elements if data.A.entry((g,)).coefficients}
    system = LocalSystem(inertia(G, resolution), data, omega)
    logger.debug("restricted %s to %d inertia objects", type(data).__name__, len(system.objects()))
    return system


def _arrow_text(G: ActionGroupoid, arrow: InertiaArrow) -> str:
    return f"({object_label(G, arrow.loop)}, {G.group.label_of(arrow.alpha.element)})"


def _component_directions(ls: LocalSystem, g: int) -> List[Tuple[AffineSubtorus, np.ndarray]]:
    G = ls.groupoid
    if G.is_finite:
        return []
    result = []
    for component in ls.inertia.fixed[g]:
        if component.dimension >= 2:
            result.append((component, np.array(component.directions, dtype=float)))
    return result


def _flatness(ls: LocalSystem, points: int, seed: int) -> Tuple[float, int, Optional[str], int]:
    """dw_g and g*B - B on tangent pairs of each fixed component.

    Also returns the number of tangent pairs; it is 0 when every fixed
    component has dimension below 2 and there is nothing to test.
    """
    G = ls.groupoid
    worst, samples, witness, pairs = 0.0, 0, None, 0
    if G.is_finite or G.dim < 2:
        return worst, samples, witness, pairs
    rng = np.random.default_rng(seed)
    B = ls.data.B.entry(())
    for g in G.group.elements:
        omega = ls.omega_flat.get(g, PForm.zero(1, G.dim))
        curvature = exterior_d(omega)
        twist = pullback_form(B, G.action.base_map(g)) - B
        for component, directions in _component_directions(ls, g):
            offset = np.array([float(v) for v in component.offset])
            u = rng.random((points, len(directions)))
            where = offset + u @ directions
            for a, b in itertools.combinations(range(len(directions)), 2):
                pairs += 1
                first = np.broadcast_to(directions[a], where.shape)
                second = np.broadcast_to(directions[b], where.shape)
                for form, label in ((curvature, "d omega"), (twist, "g*B - B")):
                    if not form.coefficients:
                        continue
                    values = np.abs(form.evaluate_batch(where, [first, second]))
                    samples += len(values)
                    if values.max() > worst:
                        worst = float(values.max())
                        witness = f"{label} on sector {G.group.label_of(g)} at {component.describe()}"
    return worst, samples, witness, pairs


def check_inner_local_system(ls: LocalSystem, tol: float = FLATNESS_TOLERANCE,
                             points: int = 100, seed: int = 0) -> Report:
    """Check the inner local system axioms exhaustively over inertia arrows.

    Units: f = 1 on arrows between identity loops. Inversion:
    f(i(v, a)) f(v, a) = 1. Morphism: f is multiplicative on composable
    pairs. Flatness: d omega = 0 and g*B = B on tangent pairs of each
    fixed set.
    """
    report = Report(command="inertia", seed=seed)
    inert = ls.inertia
    G = ls.groupoid
    elements = list(G.group.elements)
    objects = ls.objects()
    units, inverses, morphism = UnitTally(), UnitTally(), UnitTally()
    for index, v in enumerate(objects):
        for k in elements:
            arrow = ls.arrow(index, k)
            value = ls.f(arrow)
            if v.element == G.group.identity:
                units.update(value, _arrow_text(G, arrow))
            back = inert.inverse(arrow)
            inverses.update(phases.multiply([ls.f(back), value]), _arrow_text(G, arrow))
            end = inert.target(arrow)
            for m in elements:
                second = InertiaArrow(end, QuotientArrow(end.point, m))
                composed = inert.compose(arrow, second)
                ratio = phases.multiply([
                    ls.f(composed), phases.inverse(value), phases.inverse(ls.f(second)),
                ])
                morphism.update(ratio, f"{_arrow_text(G, arrow)} then {_arrow_text(G, second)}")
    units.record(report, "inner units", tol)
    inverses.record(report, "inner inverse", tol)
    morphism.record(report, "inner morphism", tol)
    worst, samples, witness, pairs = _flatness(ls, points, seed)
    if pairs == 0:
        witness = "vacuous: no fixed component of dimension 2 or more carries a tangent pair"
        report.values["inner flatness"] = "vacuous"
    report.add_check("inner flatness", worst, tol, exact=False, samples=samples, witness=witness)
    report.values["objects"] = str(len(objects))
    report.values["groupoid"] = repr(G)
    return report


def check_constant_loops(ls: LocalSystem, bundle: TransgressedBundle, tol: float = 1e-10) -> Report:
    """f agrees with F on constant loop arrows through every inertia object."""
    report = Report(command="inertia")
    G = ls.groupoid
    worst = UnitTally()
    for index, v in enumerate(ls.objects()):
        point = G.space.points[v.point] if G.is_finite else v.point
        loop = constant_loop(G, point, v.element)
        for k in G.group.elements:
            F = bundle.F(loop_arrow(loop, [k]))
            worst.update(phases.multiply([F, phases.inverse(ls.f(ls.arrow(index, k)))]),
                         _arrow_text(G, ls.arrow(index, k)))
    worst.record(report, "inertia restriction matches F", tol)
    return report


def torsion_gerbe(epsilon: TorsionCocycle, groupoid: ActionGroupoid) -> GerbeData:
    """The flat gerbe h(x, g, k) = e(g, k) with A = B = 0.

    Raises:
        GroupSpecError: e fails the cocycle condition
    """
    value, triple = epsilon.defect()
    if triple is not None:
        labels = ", ".join(epsilon.group.label_of(g) for g in triple)
        raise GroupSpecError(f"torsion data is not a cocycle: defect {value} at ({labels})")
    return GerbeData(epsilon.as_cochain(groupoid))


@dataclass
class Sector:
    """The sector [M^g / C(g)] of one conjugacy class."""

    element: int
    members: Tuple[int, ...]
    centralizer: Subgroup
    fixed: Union[List[int], List[AffineSubtorus]]
    values: List[Tuple[str, str, str]] = field(default_factory=list)

    @property
    def is_empty(self) -> bool:
        return not self.fixed


@dataclass
class SectorDecomposition:
    groupoid: ActionGroupoid
    sectors: List[Sector]

    def table(self) -> ReportTable:
        G = self.groupoid
        rows = []
        for sector in self.sectors:
            if G.is_finite:
                fixed = "{" + ",".join(G.space.points[p] for p in sector.fixed) + "}"
            else:
                fixed = "; ".join(c.describe() for c in sector.fixed) or "empty"
            rows.append([
                G.group.label_of(sector.element),
                "{" + ",".join(G.group.label_of(g) for g in sector.members) + "}",
                fixed,
                "{" + ",".join(G.group.label_of(k) for k in sector.centralizer.elements) + "}",
            ])
        return ReportTable(title="sectors", columns=["g", "class", "fixed set", "centralizer"], rows=rows)

    def value_tables(self) -> List[ReportTable]:
        G = self.groupoid
        return [
            ReportTable(
                title=f"local system on sector {G.group.label_of(sector.element)}",
                columns=["fixed point", "k", "f"],
                rows=[list(row) for row in sector.values],
            )
            for sector in self.sectors
            if sector.values
        ]


def sector_decomposition(groupoid: ActionGroupoid, local_system: Optional[LocalSystem] = None,
                         resolution: int = 0) -> SectorDecomposition:
    """One sector per conjugacy class; with a local system, its C(g)-equivariant values."""
    data = conjugacy_data(groupoid.group)
    inert = local_system.inertia if local_system is not None else inertia(groupoid, resolution)
    sectors = []
    for members, centralizer in zip(data.classes, data.centralizers):
        g = members[0]
        sector = Sector(g, members, centralizer, inert.fixed[g])
        if local_system is not None:
            for index, v in enumerate(local_system.objects()):
                if v.element != g:
                    continue
                for k in centralizer.elements:
                    value = local_system.f(local_system.arrow(index, k))
                    sector.values.append(
                        (object_label(groupoid, v), groupoid.group.label_of(k), phases.format_value(value))
                    )
        sectors.append(sector)
    logger.debug("%r splits into %d sectors", groupoid, len(sectors))
    return SectorDecomposition(groupoid, sectors)


def sector_summary(decomposition: SectorDecomposition) -> Dict[str, str]:
    G = decomposition.groupoid
    return {
        f"sector {G.group.label_of(s.element)}": f"|C(g)|={s.centralizer.order}, components={len(s.fixed)}"
        for s in decomposition.sectors
    }


def torsion_phases(epsilon: TorsionCocycle, pairs: Sequence[Tuple[int, int]] = ()) -> Dict[Tuple[int, int], Value]:
    """e(g, k) / e(k, k^-1 g k) for commuting pairs (all pairs by default)."""
    G = epsilon.group
    if not pairs:
        pairs = [(g, k) for g, k in itertools.product(G.elements, repeat=2) if G.mul(g, k) == G.mul(k, g)]
    return {(g, k): epsilon(g, k) / epsilon(k, G.conjugate(g, k)) for g, k in pairs}
