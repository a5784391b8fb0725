"""Segmented loops and loop arrows.

A loop in a groupoid is a partition ``0 = a_0 < ... < a_n = 1`` of the
circle, one path segment per interval and one connecting arrow per
breakpoint, running from the end of segment i to the start of segment
i+1 (the last one wraps around to the start of the first segment).

A loop arrow moves every segment along a constant arrow label (a group
element for [M/G], a chart for a cover); the target loop and its
connecting arrows are determined by the source loop and the labels.
"""

import logging
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import sympy

from .exceptions import (
    BadPartition,
    DimensionMismatch,
    DuplicateBreakpoint,
    EndpointMismatch,
    NotComposable,
    OutsideChart,
    PartitionMismatch,
)
from .expressions import S, T, Expr, compile_expr, parse_expr
from .forms import AffineMap, PForm
from .groupoids import ActionGroupoid, Arrow, ChartPoint, CoverGroupoid, Groupoid, Obj
from .quadrature import DEFAULT_SUBINTERVALS, DEFAULT_TARGET, adaptive_simpson, simpson

logger = logging.getLogger(__name__)

LOOP_TOLERANCE = 1e-10
TANGENT_TOLERANCE = 1e-8


def _fraction(value) -> Fraction:
    if isinstance(value, float):
        return Fraction(value).limit_denominator(10**12)
    return Fraction(str(value)) if isinstance(value, str) else Fraction(value)


@dataclass(frozen=True)
class Partition:
    """Breakpoints 0 = a_0 < a_1 < ... < a_n = 1."""

    points: Tuple[Fraction, ...]

    def __post_init__(self) -> None:
        points = tuple(_fraction(p) for p in self.points)
        if len(points) < 2 or points[0] != 0 or points[-1] != 1:
            raise BadPartition(f"a partition runs from 0 to 1, got {[str(p) for p in points]}")
        if any(a >= b for a, b in zip(points, points[1:])):
            raise BadPartition(f"breakpoints must increase strictly: {[str(p) for p in points]}")
        object.__setattr__(self, "points", points)

    @classmethod
    def uniform(cls, n: int) -> "Partition":
        if n < 1:
            raise BadPartition("a partition needs at least one interval")
        return cls(tuple(Fraction(i, n) for i in range(n + 1)))

    @property
    def size(self) -> int:
        return len(self.points) - 1

    def interval(self, i: int) -> Tuple[Fraction, Fraction]:
        return self.points[i], self.points[i + 1]

    def __str__(self) -> str:
        return "{" + ", ".join(str(p) for p in self.points) + "}"


# carriers


def _exact_value(expr: Expr) -> Union[Fraction, float]:
    if expr.is_Rational:
        return Fraction(int(expr.p), int(expr.q))
    return float(sympy.N(expr, 17))


@dataclass(frozen=True)
class ParametricCarrier:
    """Coordinates given as expressions in t (and possibly the family parameter s)."""

    exprs: Tuple[Expr, ...]

    @property
    def dim(self) -> int:
        return len(self.exprs)

    def at(self, t, s=0) -> Tuple:
        sub = {T: sympy.sympify(t), S: sympy.sympify(s)}
        return tuple(_exact_value(sympy.sympify(e).xreplace(sub)) for e in self.exprs)

    def points(self, ts: np.ndarray, s: float = 0.0) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        empty = np.zeros((len(ts), 0))
        columns = [compile_expr(e, 0)(empty, t=ts, s=s).real for e in self.exprs]
        return np.stack(columns, axis=1) if columns else empty

    def velocity(self, ts: np.ndarray, s: float = 0.0) -> np.ndarray:
        return self.differentiate(T).points(ts, s)

    def differentiate(self, symbol: sympy.Symbol) -> "ParametricCarrier":
        return ParametricCarrier(tuple(sympy.diff(e, symbol) for e in self.exprs))

    def substitute(self, s) -> "ParametricCarrier":
        value = sympy.nsimplify(s) if isinstance(s, (Fraction, int)) else sympy.Float(s)
        return ParametricCarrier(tuple(sympy.sympify(e).xreplace({S: value}) for e in self.exprs))

    def mapped(self, mapping: AffineMap) -> "ParametricCarrier":
        moved = self.linear(mapping).exprs
        return ParametricCarrier(tuple(
            e + sympy.Rational(str(shift)) for e, shift in zip(moved, mapping.translation)
        ))

    def linear(self, mapping: AffineMap) -> "ParametricCarrier":
        """Push vectors through the linear part of ``mapping``."""
        dim = len(self.exprs)
        return ParametricCarrier(tuple(
            sum((mapping.matrix[i][j] * self.exprs[j] for j in range(dim)), sympy.Integer(0))
            for i in range(dim)
        ))

    def breaks(self) -> Tuple[float, ...]:
        return ()

    def is_parametric_in_s(self) -> bool:
        return any(S in sympy.sympify(e).free_symbols for e in self.exprs)


@dataclass(frozen=True)
class PolylineCarrier:
    """Sampled path (t_j, x_j), linear between samples."""

    knots: Tuple[Tuple[float, Tuple[float, ...]], ...]

    def __post_init__(self) -> None:
        if len(self.knots) < 2:
            raise BadPartition("a polyline needs at least two samples")
        ts = [float(t) for t, _ in self.knots]
        if any(a >= b for a, b in zip(ts, ts[1:])):
            raise BadPartition("polyline sample times must increase strictly")

    @property
    def dim(self) -> int:
        return len(self.knots[0][1])

    def _arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        ts = np.array([float(t) for t, _ in self.knots])
        xs = np.array([[float(v) for v in x] for _, x in self.knots]).reshape(len(ts), self.dim)
        return ts, xs

    def at(self, t, s=0) -> Tuple:
        for time, point in self.knots:
            if float(time) == float(t):
                return tuple(point)
        return tuple(float(v) for v in self.points(np.array([float(t)]))[0])

    def points(self, ts: np.ndarray, s: float = 0.0) -> np.ndarray:
        times, xs = self._arrays()
        ts = np.asarray(ts, dtype=float)
        return np.stack([np.interp(ts, times, xs[:, j]) for j in range(self.dim)], axis=1)

    def velocity(self, ts: np.ndarray, s: float = 0.0) -> np.ndarray:
        times, xs = self._arrays()
        slopes = np.diff(xs, axis=0) / np.diff(times)[:, None]
        piece = np.clip(np.searchsorted(times, np.asarray(ts, dtype=float), side="right") - 1, 0, len(slopes) - 1)
        return slopes[piece]

    def substitute(self, s) -> "PolylineCarrier":
        return self

    def mapped(self, mapping: AffineMap) -> "PolylineCarrier":
        return PolylineCarrier(tuple((t, tuple(float(v) for v in mapping.apply(x))) for t, x in self.knots))

    def linear(self, mapping: AffineMap) -> "PolylineCarrier":
        return PolylineCarrier(tuple((t, tuple(float(v) for v in mapping.linear(x))) for t, x in self.knots))

    def breaks(self) -> Tuple[float, ...]:
        return tuple(float(t) for t, _ in self.knots)

    def is_parametric_in_s(self) -> bool:
        return False


@dataclass(frozen=True)
class PointCarrier:
    """A constant path; on a finite base the point is an index."""

    point: Obj

    @property
    def dim(self) -> int:
        return 0 if isinstance(self.point, int) else len(self.point)

    def at(self, t, s=0) -> Obj:
        return self.point

    def points(self, ts: np.ndarray, s: float = 0.0) -> np.ndarray:
        row = np.array([] if isinstance(self.point, int) else [float(v) for v in self.point])
        return np.tile(row, (len(np.atleast_1d(ts)), 1))

    def velocity(self, ts: np.ndarray, s: float = 0.0) -> np.ndarray:
        return np.zeros((len(np.atleast_1d(ts)), self.dim))

    def substitute(self, s) -> "PointCarrier":
        return self

    def breaks(self) -> Tuple[float, ...]:
        return ()

    def is_parametric_in_s(self) -> bool:
        return False


Carrier = Union[ParametricCarrier, PolylineCarrier, PointCarrier]


def parametric(*exprs) -> ParametricCarrier:
    """Carrier from expressions or expression text in t (and s)."""
    return ParametricCarrier(tuple(parse_expr(e) if isinstance(e, str) else sympy.sympify(e) for e in exprs))


@dataclass(frozen=True)
class PathSegment:
    """One path segment on [start, end]; ``chart`` is set over a cover."""

    start: Fraction
    end: Fraction
    carrier: Carrier
    chart: Optional[int] = None

    def coordinates(self, t) -> Obj:
        return self.carrier.at(t)

    def points(self, ts: np.ndarray) -> np.ndarray:
        return self.carrier.points(ts)

    def velocity(self, ts: np.ndarray) -> np.ndarray:
        return self.carrier.velocity(ts)


def segment_object(groupoid: Groupoid, segment: PathSegment, t) -> Obj:
    """The groupoid object the segment passes through at time t."""
    point = segment.carrier.at(t)
    if isinstance(groupoid, CoverGroupoid):
        return ChartPoint(tuple(point), segment.chart if segment.chart is not None else 0)
    return point


def _move_carrier(groupoid: Groupoid, carrier: Carrier, label: int) -> Carrier:
    """The carrier of the target path of the constant arrow path ``label``."""
    if isinstance(groupoid, CoverGroupoid):
        return carrier
    if groupoid.is_finite:
        return PointCarrier(groupoid.action.act(carrier.point, label))
    mapping = groupoid.action.base_map(label)
    if isinstance(carrier, PointCarrier):
        return PointCarrier(mapping.apply(carrier.point))
    return carrier.mapped(mapping)


@dataclass(frozen=True)
class SegmentedLoop:
    """An object of the loop groupoid."""

    groupoid: Groupoid
    partition: Partition
    segments: Tuple[PathSegment, ...]
    arrows: Tuple[Arrow, ...]

    @property
    def size(self) -> int:
        return self.partition.size

    @property
    def labels(self) -> Tuple[int, ...]:
        return tuple(self.groupoid.label(a) for a in self.arrows)

    def start_object(self, i: int) -> Obj:
        seg = self.segments[i % self.size]
        return segment_object(self.groupoid, seg, seg.start)

    def end_object(self, i: int) -> Obj:
        seg = self.segments[i]
        return segment_object(self.groupoid, seg, seg.end)

    def validate(self, tolerance: float = LOOP_TOLERANCE) -> "SegmentedLoop":
        """Check s(psi(a_i)) = psi_i(a_i) and t(psi(a_i)) = psi_{i+1}(a_i) cyclically.

        Raises:
            EndpointMismatch: carries the junction index and the distance
        """
        G = self.groupoid
        for i, arrow in enumerate(self.arrows):
            gap = G.object_distance(G.source(arrow), self.end_object(i))
            gap = max(gap, G.object_distance(G.target(arrow), self.start_object(i + 1)))
            if gap > tolerance:
                raise EndpointMismatch(i + 1, gap)
        return self

    def __str__(self) -> str:
        labels = ", ".join(_label_text(self.groupoid, label) for label in self.labels)
        return f"loop on {self.partition} with arrows [{labels}]"


def _label_text(groupoid: Groupoid, label: int) -> str:
    if isinstance(groupoid, ActionGroupoid):
        return groupoid.group.label_of(label)
    return groupoid.labels[label]


def _check_charts(groupoid: Groupoid, segments: Sequence[PathSegment], samples: int = 17) -> None:
    if not isinstance(groupoid, CoverGroupoid):
        return
    for seg in segments:
        if seg.chart is None:
            raise DimensionMismatch("segments over a cover need a chart")
        box = groupoid.charts[seg.chart]
        ts = np.linspace(float(seg.start), float(seg.end), samples)
        for x in seg.points(ts):
            if not box.contains(x, 1e-9):
                raise OutsideChart(tuple(float(v) for v in x), groupoid.labels[seg.chart])


def build_loop(groupoid: Groupoid, partition: Union[Partition, Sequence], carriers: Sequence,
               labels: Sequence, charts: Optional[Sequence] = None,
               tolerance: float = LOOP_TOLERANCE) -> SegmentedLoop:
    """Assemble and validate a segmented loop.

    Args:
        groupoid: the groupoid the loop lives in
        partition: a ``Partition`` or its breakpoints
        carriers: one carrier per segment (or an arrow-free point per segment)
        labels: connecting arrow labels, one per breakpoint a_1..a_n; group
            elements over [M/G], target charts over a cover
        charts: segment charts over a cover

    Raises:
        BadPartition: malformed partition or count mismatch
        EndpointMismatch: a connecting arrow does not join consecutive segments
    """
    if not isinstance(partition, Partition):
        partition = Partition(tuple(partition))
    n = partition.size
    if len(carriers) != n or len(labels) != n:
        raise BadPartition(
            f"{n} intervals need {n} segments and {n} arrows, got {len(carriers)} and {len(labels)}"
        )
    if isinstance(groupoid, CoverGroupoid):
        if charts is None or len(charts) != n:
            raise BadPartition("segments over a cover need one chart each")
        chart_ids = [groupoid.chart_index(c) for c in charts]
        labels = [groupoid.chart_index(lab) for lab in labels]
    else:
        chart_ids = [None] * n
        labels = [groupoid.group.index(lab) for lab in labels]
    segments = []
    for i, carrier in enumerate(carriers):
        if not isinstance(carrier, (ParametricCarrier, PolylineCarrier, PointCarrier)):
            point = groupoid.object(carrier) if isinstance(groupoid, ActionGroupoid) else tuple(carrier)
            carrier = PointCarrier(point)
        a, b = partition.interval(i)
        segments.append(PathSegment(a, b, carrier, chart_ids[i]))
    _check_charts(groupoid, segments)
    arrows = []
    for i, label in enumerate(labels):
        seg = segments[i]
        arrows.append(groupoid.arrow_from(segment_object(groupoid, seg, seg.end), label))
    loop = SegmentedLoop(groupoid, partition, tuple(segments), tuple(arrows))
    return loop.validate(tolerance)


def twisted_loop(groupoid: ActionGroupoid, path, g) -> SegmentedLoop:
    """One-segment loop with psi(1).g = psi(0)."""
    carrier = path if isinstance(path, (ParametricCarrier, PolylineCarrier, PointCarrier)) else parametric(*path)
    return build_loop(groupoid, Partition.uniform(1), [carrier], [g])


def constant_loop(groupoid: Groupoid, point, g, chart=None) -> SegmentedLoop:
    """The constant loop at a point fixed by g (or a chart label over a cover)."""
    if isinstance(groupoid, ActionGroupoid):
        carrier = PointCarrier(groupoid.object(point))
        return build_loop(groupoid, Partition.uniform(1), [carrier], [g])
    coords = tuple(groupoid.object(point, chart).point)
    return build_loop(groupoid, Partition.uniform(1), [PointCarrier(coords)], [g], charts=[chart])


# loop arrows


@dataclass(frozen=True)
class LoopArrow:
    """A morphism of the loop groupoid from ``source`` to ``target``."""

    source: SegmentedLoop
    target: SegmentedLoop
    labels: Tuple[int, ...]

    @property
    def groupoid(self) -> Groupoid:
        return self.source.groupoid

    def arrow_at(self, i: int, t) -> Arrow:
        """Lambda_i(t), the arrow over segment i at time t."""
        seg = self.source.segments[i % self.source.size]
        return self.groupoid.arrow_from(segment_object(self.groupoid, seg, t), self.labels[i % self.source.size])

    def start_arrow(self, i: int) -> Arrow:
        seg = self.source.segments[i % self.source.size]
        return self.arrow_at(i, seg.start)

    def end_arrow(self, i: int) -> Arrow:
        return self.arrow_at(i, self.source.segments[i].end)

    def __str__(self) -> str:
        labels = ", ".join(_label_text(self.groupoid, label) for label in self.labels)
        return f"arrow [{labels}] from {self.source}"


def loop_arrow(loop: SegmentedLoop, labels: Sequence, tolerance: float = LOOP_TOLERANCE) -> LoopArrow:
    """The loop arrow from ``loop`` along constant per-segment labels.

    Target segments are phi_i = target(Lambda_i) and target connecting
    arrows are Lambda_i(a_i)^-1 o psi(a_i) o Lambda_{i+1}(a_i).
    """
    G = loop.groupoid
    if len(labels) != loop.size:
        raise BadPartition(f"{loop.size} segments need {loop.size} labels, got {len(labels)}")
    if isinstance(G, CoverGroupoid):
        ids = tuple(G.chart_index(lab) for lab in labels)
    else:
        ids = tuple(G.group.index(lab) for lab in labels)
    segments = []
    for seg, label in zip(loop.segments, ids):
        chart = label if isinstance(G, CoverGroupoid) else None
        segments.append(PathSegment(seg.start, seg.end, _move_carrier(G, seg.carrier, label), chart))
    _check_charts(G, segments)
    provisional = LoopArrow(loop, loop, ids)
    arrows = []
    for i, connecting in enumerate(loop.arrows):
        back = G.inverse(provisional.end_arrow(i))
        arrows.append(G.compose(G.compose(back, connecting), provisional.start_arrow(i + 1)))
    target = SegmentedLoop(G, loop.partition, tuple(segments), tuple(arrows)).validate(tolerance)
    return LoopArrow(loop, target, ids)


def identity_arrow(loop: SegmentedLoop) -> LoopArrow:
    G = loop.groupoid
    if isinstance(G, CoverGroupoid):
        return loop_arrow(loop, [seg.chart for seg in loop.segments])
    return loop_arrow(loop, [G.group.identity] * loop.size)


def same_loop(a: SegmentedLoop, b: SegmentedLoop, tolerance: float = LOOP_TOLERANCE,
              samples: int = 9) -> bool:
    """Equal partitions, connecting labels and paths (compared as objects)."""
    G = a.groupoid
    if a.partition != b.partition or a.labels != b.labels:
        return False
    for sa, sb in zip(a.segments, b.segments):
        if sa.chart != sb.chart:
            return False
        for t in np.linspace(float(sa.start), float(sa.end), samples):
            x = segment_object(G, sa, t)
            y = segment_object(G, sb, t)
            if G.object_distance(x, y) > tolerance:
                return False
    return True


def compose_loop_arrows(first: LoopArrow, second: LoopArrow) -> LoopArrow:
    """first then second, segment by segment.

    Raises:
        PartitionMismatch: the partitions differ (refine both first)
        NotComposable: target(first) is not source(second)
    """
    if first.target.partition != second.source.partition:
        raise PartitionMismatch(
            f"partitions {first.target.partition} and {second.source.partition} differ"
        )
    if not same_loop(first.target, second.source):
        raise NotComposable(str(first.target), str(second.source))
    G = first.groupoid
    labels = []
    for i in range(first.source.size):
        composed = G.compose(first.start_arrow(i), second.start_arrow(i))
        labels.append(G.label(composed))
    return loop_arrow(first.source, labels)


def inverse_loop_arrow(arrow: LoopArrow) -> LoopArrow:
    G = arrow.groupoid
    labels = [G.label(G.inverse(arrow.start_arrow(i))) for i in range(arrow.source.size)]
    return loop_arrow(arrow.target, labels)


def _normalise_points(points: Sequence) -> List[Fraction]:
    return [_fraction(p) for p in points]


def refine_loop(loop: SegmentedLoop, points: Sequence) -> SegmentedLoop:
    """Split segments at new breakpoints, inserting identity arrows there.

    Raises:
        DuplicateBreakpoint: a point repeats or is already a breakpoint
        BadPartition: a point lies outside (0, 1)
    """
    new = _normalise_points(points)
    existing = set(loop.partition.points)
    seen = set()
    for p in new:
        if p in existing or p in seen:
            raise DuplicateBreakpoint(f"breakpoint {p} is already present")
        if not 0 < p < 1:
            raise BadPartition(f"breakpoint {p} is outside (0, 1)")
        seen.add(p)
    G = loop.groupoid
    segments: List[PathSegment] = []
    arrows: List[Arrow] = []
    for seg, connecting in zip(loop.segments, loop.arrows):
        cuts = sorted(p for p in new if seg.start < p < seg.end)
        bounds = [seg.start] + cuts + [seg.end]
        for a, b in zip(bounds, bounds[1:]):
            piece = replace(seg, start=a, end=b)
            segments.append(piece)
            if b != seg.end:
                arrows.append(G.identity(segment_object(G, piece, b)))
        arrows.append(connecting)
    partition = Partition(tuple(sorted(existing | seen)))
    logger.debug("refined %d segments to %d", loop.size, partition.size)
    return SegmentedLoop(G, partition, tuple(segments), tuple(arrows)).validate()


def refine_arrow(arrow: LoopArrow, points: Sequence) -> LoopArrow:
    """Refine source and target together; labels are copied to the new pieces."""
    source = refine_loop(arrow.source, points)
    labels = []
    old = arrow.source.segments
    for seg in source.segments:
        index = next(i for i, o in enumerate(old) if o.start <= seg.start and seg.end <= o.end)
        labels.append(arrow.labels[index])
    return loop_arrow(source, labels)


# tangents


@dataclass(frozen=True)
class LoopTangent:
    """Vector fields xi_i along the segments of a loop.

    At a junction the field is pushed through the connecting arrow's
    differential: xi_{i+1}(a_i) = R_{g_i} xi_i(a_i).
    """

    loop: SegmentedLoop
    fields: Tuple[Union[ParametricCarrier, PolylineCarrier], ...]

    def vectors(self, i: int, ts: np.ndarray) -> np.ndarray:
        return self.fields[i].points(ts)

    def at(self, i: int, t) -> np.ndarray:
        return self.fields[i].points(np.array([float(t)]))[0]

    def scaled(self, factor) -> "LoopTangent":
        return LoopTangent(self.loop, tuple(_scale_carrier(f, factor) for f in self.fields))

    def validate(self, tolerance: float = TANGENT_TOLERANCE) -> "LoopTangent":
        loop = self.loop
        G = loop.groupoid
        if len(self.fields) != loop.size:
            raise BadPartition(f"{loop.size} segments need {loop.size} vector fields")
        if G.dim == 0:
            return self
        for i, connecting in enumerate(loop.arrows):
            here = self.at(i, loop.segments[i].end)
            mapping = G.tangent_map(connecting)
            pushed = np.array([float(v) for v in mapping.linear(here)]) if mapping is not None else here
            nxt = (i + 1) % loop.size
            there = self.at(nxt, loop.segments[nxt].start)
            gap = float(np.max(np.abs(pushed - there)))
            if gap > tolerance:
                raise EndpointMismatch(i + 1, gap)
        return self


def _scale_carrier(carrier: Carrier, factor) -> Carrier:
    if isinstance(carrier, ParametricCarrier):
        return ParametricCarrier(tuple(sympy.sympify(factor) * e for e in carrier.exprs))
    return PolylineCarrier(tuple((t, tuple(factor * v for v in x)) for t, x in carrier.knots))


def loop_tangent(loop: SegmentedLoop, fields: Sequence) -> LoopTangent:
    carriers = tuple(
        f if isinstance(f, (ParametricCarrier, PolylineCarrier)) else parametric(*f)
        for f in fields
    )
    return LoopTangent(loop, carriers).validate()


def zero_tangent(loop: SegmentedLoop) -> LoopTangent:
    dim = loop.groupoid.dim
    return LoopTangent(loop, tuple(ParametricCarrier((sympy.Integer(0),) * dim) for _ in loop.segments))


def push_tangent(arrow: LoopArrow, tangent: LoopTangent) -> LoopTangent:
    """The tangent at the target loop induced by the arrow's differentials."""
    G = arrow.groupoid
    fields = []
    for i, f in enumerate(tangent.fields):
        mapping = G.tangent_map(arrow.start_arrow(i))
        fields.append(f if mapping is None else f.linear(mapping))
    return LoopTangent(arrow.target, tuple(fields)).validate()


# families


@dataclass(frozen=True)
class LoopFamily:
    """A one-parameter family of loop arrows Lambda(s), s in [-eps, eps].

    Segment carriers may depend on the family parameter ``s``; connecting
    labels and arrow labels are fixed along the family.
    """

    groupoid: Groupoid
    partition: Partition
    carriers: Tuple[ParametricCarrier, ...]
    connecting: Tuple[int, ...]
    labels: Tuple[int, ...]
    charts: Optional[Tuple[int, ...]] = None
    epsilon: float = 0.1

    def source(self, s=0) -> SegmentedLoop:
        carriers = [c.substitute(s) for c in self.carriers]
        return build_loop(self.groupoid, self.partition, carriers, self.connecting, self.charts)

    def slice(self, s=0) -> LoopArrow:
        return loop_arrow(self.source(s), self.labels)

    def tangents(self) -> Tuple[LoopTangent, LoopTangent]:
        """Exact s-derivatives at s = 0 of the source and target paths."""
        base = self.slice(0)
        source_fields = tuple(c.differentiate(S).substitute(0) for c in self.carriers)
        source = LoopTangent(base.source, source_fields).validate()
        return source, push_tangent(base, source)


def make_family(groupoid: Groupoid, partition: Union[Partition, Sequence], carriers: Sequence,
                connecting: Sequence, labels: Sequence, charts: Optional[Sequence] = None,
                epsilon: float = 0.1) -> LoopFamily:
    """Build a family and validate its slices at 0 and at +-epsilon."""
    if not isinstance(partition, Partition):
        partition = Partition(tuple(partition))
    G = groupoid
    carriers = tuple(c if isinstance(c, ParametricCarrier) else parametric(*c) for c in carriers)
    if isinstance(G, CoverGroupoid):
        connecting = tuple(G.chart_index(c) for c in connecting)
        labels = tuple(G.chart_index(c) for c in labels)
        charts = tuple(G.chart_index(c) for c in charts) if charts is not None else None
    else:
        connecting = tuple(G.group.index(c) for c in connecting)
        labels = tuple(G.group.index(c) for c in labels)
    family = LoopFamily(G, partition, carriers, connecting, labels, charts, epsilon)
    for s in (0, epsilon, -epsilon):
        family.slice(s)
    return family


# quadrature along segments


def _pieces(segment: PathSegment) -> List[Tuple[float, float]]:
    a, b = float(segment.start), float(segment.end)
    cuts = [t for t in segment.carrier.breaks() if a < t < b]
    bounds = [a] + cuts + [b]
    return list(zip(bounds, bounds[1:]))


def integrate_along(form: PForm, segment: PathSegment, field_carrier: Optional[Carrier] = None,
                    n: int = DEFAULT_SUBINTERVALS, target: Optional[float] = DEFAULT_TARGET) -> complex:
    """int psi*A for a 1-form, or int B(dpsi/dt, xi) dt for a 2-form paired with xi.

    Starting from ``n`` subintervals, the count is doubled until the
    halving estimate is within ``target``; ``target=None`` keeps n fixed.
    Polyline carriers are integrated piece by piece, sharing the target.

    Raises:
        QuadratureDiverged: non-finite integrand samples, or no convergence
    """
    if form.dim == 0 or not form.coefficients:
        return 0j
    if field_carrier is None and form.degree != 1:
        raise DimensionMismatch(f"only 1-forms integrate along a path, got degree {form.degree}")
    if field_carrier is not None and form.degree != 2:
        raise DimensionMismatch(f"the paired integral needs a 2-form, got degree {form.degree}")
    pieces = _pieces(segment)
    per_piece = n if len(pieces) == 1 else max(8, (n // len(pieces)) // 2 * 2)

    def integrand(ts: np.ndarray) -> np.ndarray:
        points = segment.carrier.points(ts)
        vectors = [segment.carrier.velocity(ts)]
        if field_carrier is not None:
            vectors.append(field_carrier.points(ts))
        return form.evaluate_batch(points, vectors)

    total = 0j
    for a, b in pieces:
        if target is None:
            total += simpson(integrand, a, b, per_piece)
        else:
            total += adaptive_simpson(integrand, a, b, per_piece, target / len(pieces))
    return total
