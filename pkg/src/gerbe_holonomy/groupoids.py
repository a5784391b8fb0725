"""Finite models of étale groupoids.

This module provides the two groupoid models used everywhere else:

- ``ActionGroupoid``: the global quotient [M/G] of a finite point set or
  a flat torus by a finite group acting by permutations or integer
  affine maps. Objects are points; the arrow ``(m, g)`` goes from ``m``
  to ``m.g``.
- ``CoverGroupoid``: the chart groupoid of a box cover of a region of
  R^d. Objects are ``(x, i)``; the arrow ``(x, i, j)`` exists when ``x``
  lies in both charts.

Both expose the same small interface (source, target, compose, inverse,
identity, locate, level_keys, face) so that cochains, loops and the
transgression formulas are written once.

It also provides nerve enumeration, the torus fixed-set solver and the
inertia groupoid.
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from .exceptions import (
    ActionNotCompatible,
    DimensionMismatch,
    InfiniteNerve,
    InputError,
    LevelTooLarge,
    NonInvertibleLinearPart,
    NotComposable,
    OutsideChart,
)
from .forms import AffineMap
from .groups import FiniteGroup, cyclic_group
from .smith import smith_normal_form

logger = logging.getLogger(__name__)

POINT_TOLERANCE = 1e-12
DEFAULT_NERVE_CAP = 10**7

Coordinates = Tuple[Union[Fraction, float], ...]
Key = Tuple[int, ...]


def as_coordinate(value) -> Union[Fraction, float]:
    """Rationals (ints, Fractions, "p/q" strings) stay exact; floats stay floats."""
    if isinstance(value, float):
        return value
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    text = str(value).strip()
    try:
        return Fraction(text)
    except ValueError:
        return float(text)


def torus_difference(a: Sequence, b: Sequence) -> float:
    """Largest coordinate distance between two points of R^d/Z^d."""
    worst = 0.0
    for x, y in zip(a, b):
        delta = float(x - y)
        delta = delta - round(delta)
        worst = max(worst, abs(delta))
    return worst


def reduce_mod_one(point: Sequence) -> Coordinates:
    return tuple(v % 1 for v in point)


@dataclass(frozen=True)
class FinitePointSet:
    points: Tuple[str, ...]

    @property
    def dim(self) -> int:
        return 0

    @property
    def size(self) -> int:
        return len(self.points)

    def index(self, ref) -> int:
        if isinstance(ref, int) and 0 <= ref < self.size:
            return ref
        try:
            return self.points.index(str(ref))
        except ValueError:
            raise InputError(f"unknown point '{ref}'") from None


@dataclass(frozen=True)
class FlatTorus:
    dim: int

    def reduce(self, point: Sequence) -> Coordinates:
        return reduce_mod_one(point)

    def box(self) -> List[Tuple[float, float]]:
        return [(0.0, 1.0)] * self.dim


SpaceModel = Union[FinitePointSet, FlatTorus]


@dataclass(frozen=True)
class Box:
    """Closed coordinate box [lower, upper] in R^d."""

    lower: Tuple[Fraction, ...]
    upper: Tuple[Fraction, ...]

    @property
    def dim(self) -> int:
        return len(self.lower)

    def contains(self, point: Sequence, tol: float = POINT_TOLERANCE) -> bool:
        return all(float(lo) - tol <= float(x) <= float(hi) + tol for lo, x, hi in zip(self.lower, point, self.upper))

    def intersect(self, other: "Box") -> Optional["Box"]:
        lower = tuple(max(a, b) for a, b in zip(self.lower, other.lower))
        upper = tuple(min(a, b) for a, b in zip(self.upper, other.upper))
        if any(lo >= hi for lo, hi in zip(lower, upper)):
            return None
        return Box(lower, upper)

    def ranges(self) -> List[Tuple[float, float]]:
        return [(float(lo), float(hi)) for lo, hi in zip(self.lower, self.upper)]

    def sample(self, rng: np.random.Generator, count: int, margin: float = 0.0) -> np.ndarray:
        lo = np.array([float(v) for v in self.lower])
        hi = np.array([float(v) for v in self.upper])
        span = hi - lo
        return lo + margin * span + rng.random((count, self.dim)) * span * (1 - 2 * margin)


@dataclass(frozen=True)
class PermutationAction:
    """Right action of a finite group on a finite point set."""

    permutations: Tuple[Tuple[int, ...], ...]

    def act(self, point: int, g: int) -> int:
        return self.permutations[g][point]


@dataclass(frozen=True)
class AffineAction:
    """Right action x.g = R_g x + t_g (mod 1) on a flat torus."""

    maps: Tuple[AffineMap, ...]

    def act_lifted(self, point: Sequence, g: int) -> Coordinates:
        return self.maps[g].apply(point)

    def act(self, point: Sequence, g: int) -> Coordinates:
        return reduce_mod_one(self.maps[g].apply(point))

    def base_map(self, g: int) -> AffineMap:
        return self.maps[g]


GroupAction = Union[PermutationAction, AffineAction]


@dataclass(frozen=True)
class QuotientArrow:
    """The arrow (m, g) of [M/G], from m to m.g."""

    point: Union[int, Coordinates]
    element: int


@dataclass(frozen=True)
class ChartPoint:
    """Object (x, i) of a cover groupoid."""

    point: Coordinates
    chart: int


@dataclass(frozen=True)
class ChartArrow:
    """The arrow (x, i, j) of a cover groupoid, from (x, i) to (x, j)."""

    point: Coordinates
    source_chart: int
    target_chart: int


Arrow = Union[QuotientArrow, ChartArrow]
Obj = Union[int, Coordinates, ChartPoint]


@dataclass(frozen=True)
class NerveTuple:
    arrows: Tuple[Arrow, ...]

    @property
    def level(self) -> int:
        return len(self.arrows)


class ActionGroupoid:
    """The action groupoid [M/G] with objects M and arrows M x G."""

    kind = "action"

    def __init__(self, space: SpaceModel, group: FiniteGroup, action: GroupAction,
                 tolerance: float = POINT_TOLERANCE):
        self.space = space
        self.group = group
        self.action = action
        self.tolerance = tolerance

    def __repr__(self) -> str:
        if self.is_finite:
            return f"[{{{','.join(self.space.points)}}}/{self.group.label}]"
        return f"[T^{self.space.dim}/{self.group.label}]"

    @property
    def is_finite(self) -> bool:
        return isinstance(self.space, FinitePointSet)

    @property
    def dim(self) -> int:
        return self.space.dim

    # objects

    def object(self, ref) -> Obj:
        if self.is_finite:
            return self.space.index(ref)
        point = tuple(as_coordinate(v) for v in ref)
        if len(point) != self.dim:
            raise DimensionMismatch(f"point {ref!r} has {len(point)} coordinates, expected {self.dim}")
        return point

    def object_distance(self, x: Obj, y: Obj) -> float:
        if self.is_finite:
            return 0.0 if x == y else 1.0
        return torus_difference(x, y)

    def same_object(self, x: Obj, y: Obj) -> bool:
        return self.object_distance(x, y) <= self.tolerance

    def base_points(self) -> List[int]:
        if not self.is_finite:
            raise InfiniteNerve(f"{self!r} has a continuum of objects")
        return list(range(self.space.size))

    def move(self, x: Obj, g: int) -> Obj:
        """x.g, without reduction mod 1 on tori so paths stay continuous."""
        if self.is_finite:
            return self.action.act(x, g)
        return self.action.act_lifted(x, g)

    # arrows

    def source(self, arrow: QuotientArrow) -> Obj:
        return arrow.point

    def target(self, arrow: QuotientArrow) -> Obj:
        return self.move(arrow.point, arrow.element)

    def identity(self, x: Obj) -> QuotientArrow:
        return QuotientArrow(x, self.group.identity)

    def inverse(self, arrow: QuotientArrow) -> QuotientArrow:
        return QuotientArrow(self.target(arrow), self.group.inv(arrow.element))

    def compose(self, a: QuotientArrow, b: QuotientArrow) -> QuotientArrow:
        """a then b: (m, g) o (m.g, h) = (m, gh)."""
        end = self.target(a)
        if not self.same_object(end, b.point):
            raise NotComposable(end, b.point)
        return QuotientArrow(a.point, self.group.mul(a.element, b.element))

    def arrow_from(self, x: Obj, label: int) -> QuotientArrow:
        return QuotientArrow(x, label)

    def label(self, arrow: QuotientArrow) -> int:
        return arrow.element

    # nerve bookkeeping

    def locate(self, arrows: Sequence[QuotientArrow]) -> Tuple[Key, Obj]:
        return tuple(a.element for a in arrows), arrows[0].point

    def locate_object(self, x: Obj) -> Tuple[Key, Obj]:
        return (), x

    def level_keys(self, k: int) -> List[Key]:
        return list(itertools.product(self.group.elements, repeat=k))

    def face(self, key: Key, i: int) -> Tuple[Key, Optional[Union[AffineMap, Tuple[int, ...]]]]:
        """Face i of a level-(k+1) key and the base-point map it induces."""
        k = len(key) - 1
        if i == 0:
            g = key[0]
            if self.is_finite:
                mover = tuple(self.action.act(p, g) for p in range(self.space.size))
            else:
                mover = self.action.base_map(g)
            return key[1:], mover
        if i == k + 1:
            return key[:-1], None
        merged = self.group.mul(key[i - 1], key[i])
        return key[: i - 1] + (merged,) + key[i + 1:], None

    def base_box(self, key: Key) -> Optional[List[Tuple[float, float]]]:
        return None if self.is_finite else self.space.box()

    def tangent_map(self, arrow: QuotientArrow) -> Optional[AffineMap]:
        """Differential of the arrow's local diffeomorphism (the linear part of g)."""
        if self.is_finite:
            return None
        return self.action.base_map(arrow.element)

    def level_size(self, k: int) -> int:
        return self.group.order**k

    def key_label(self, key: Key) -> str:
        return "(" + ",".join(self.group.label_of(g) for g in key) + ")"

    def point_label(self, base: Obj) -> str:
        if self.is_finite:
            return self.space.points[base]
        return "(" + ", ".join(f"{float(v):.6g}" for v in base) + ")"

    def enumerate_nerve(self, k: int, cap: int = DEFAULT_NERVE_CAP) -> List[NerveTuple]:
        return list(iter_nerve(self, k, cap))


def iter_nerve(groupoid: ActionGroupoid, k: int, cap: int = DEFAULT_NERVE_CAP) -> Iterator[NerveTuple]:
    """Composable k-tuples of [M/G] for finite M, in lexicographic order."""
    if k < 0:
        raise InputError(f"nerve level must be non-negative, got {k}")
    if not groupoid.is_finite:
        raise InfiniteNerve(f"{groupoid!r} has an infinite nerve")
    size = groupoid.space.size * groupoid.group.order**k
    if size > cap:
        raise LevelTooLarge(k, size, cap)
    for m in range(groupoid.space.size):
        for elements in itertools.product(groupoid.group.elements, repeat=k):
            arrows = []
            point = m
            for g in elements:
                arrows.append(QuotientArrow(point, g))
                point = groupoid.action.act(point, g)
            yield NerveTuple(tuple(arrows))


def enumerate_nerve(groupoid: ActionGroupoid, k: int, cap: int = DEFAULT_NERVE_CAP) -> List[NerveTuple]:
    return groupoid.enumerate_nerve(k, cap)


def make_action_groupoid(space: SpaceModel, group: FiniteGroup, action: GroupAction,
                         samples: int = 100, seed: int = 0) -> ActionGroupoid:
    """Validate the action and build [M/G].

    Raises:
        ActionNotCompatible: group table or action law fails; the pair
            (g, h) and a witness point are attached
        NonInvertibleLinearPart: some R_g has determinant other than +-1
        DimensionMismatch: matrix or translation shapes disagree with M
    """
    violation = group.axiom_violation()
    if violation is not None:
        law, witness = violation
        raise ActionNotCompatible(f"group table of {group.label} violates {law} at {witness}", witness)

    n = group.order
    if isinstance(space, FinitePointSet):
        if not isinstance(action, PermutationAction) or len(action.permutations) != n:
            raise DimensionMismatch("a finite point set needs one permutation per group element")
        for g, perm in enumerate(action.permutations):
            if sorted(perm) != list(range(space.size)):
                raise ActionNotCompatible(f"element {group.label_of(g)} does not act by a permutation", (g,))
        for p in range(space.size):
            if action.act(p, group.identity) != p:
                raise ActionNotCompatible("identity does not act trivially", (group.identity,), space.points[p])
        for g, h in itertools.product(group.elements, repeat=2):
            gh = group.mul(g, h)
            for p in range(space.size):
                if action.act(action.act(p, g), h) != action.act(p, gh):
                    raise ActionNotCompatible(
                        f"(x.{group.label_of(g)}).{group.label_of(h)} != x.({group.label_of(gh)}) at {space.points[p]}",
                        (g, h), space.points[p],
                    )
        return ActionGroupoid(space, group, action)

    if not isinstance(action, AffineAction) or len(action.maps) != n:
        raise DimensionMismatch("a torus needs one affine map per group element")
    for g, amap in enumerate(action.maps):
        if amap.dim != space.dim or len(amap.translation) != space.dim:
            raise DimensionMismatch(f"map of element {group.label_of(g)} has the wrong dimension")
        det = amap.determinant()
        if abs(det) != 1:
            raise NonInvertibleLinearPart(g, det)
    reduced = AffineAction(tuple(
        AffineMap(m.matrix, tuple(Fraction(v) % 1 if not isinstance(v, float) else v % 1 for v in m.translation))
        for m in action.maps
    ))
    rng = np.random.default_rng(seed)
    points = [tuple(float(v) for v in row) for row in rng.random((samples, space.dim))]
    identity_map = reduced.maps[group.identity]
    for x in points:
        if torus_difference(identity_map.apply(x), x) > POINT_TOLERANCE:
            raise ActionNotCompatible("identity does not act trivially", (group.identity,), x)
    for g, h in itertools.product(group.elements, repeat=2):
        gh = group.mul(g, h)
        for x in points:
            left = reduced.act(reduced.act(x, g), h)
            right = reduced.act(x, gh)
            if torus_difference(left, right) > POINT_TOLERANCE:
                raise ActionNotCompatible(
                    f"(x.{group.label_of(g)}).{group.label_of(h)} != x.({group.label_of(gh)}) at x={x}",
                    (g, h), x,
                )
    logger.debug("validated action of %s on T^%d", group.label, space.dim)
    return ActionGroupoid(space, group, reduced)


def point_quotient(group: FiniteGroup) -> ActionGroupoid:
    """[pt/G]."""
    action = PermutationAction(tuple((0,) for _ in group.elements))
    return make_action_groupoid(FinitePointSet(("pt",)), group, action)


def reflection_torus(dim: int, group: Optional[FiniteGroup] = None) -> ActionGroupoid:
    """T^d / Z/2 with the generator acting by x -> -x."""
    group = group if group is not None else cyclic_group(2)
    if group.order != 2:
        raise InputError(f"the reflection action needs a group of order 2, got {group.label}")
    identity = AffineMap.identity(dim)
    flip = AffineMap(
        tuple(tuple(-int(i == j) for j in range(dim)) for i in range(dim)),
        tuple(Fraction(0) for _ in range(dim)),
    )
    maps = tuple(identity if g == group.identity else flip for g in group.elements)
    return make_action_groupoid(FlatTorus(dim), group, AffineAction(maps))


class CoverGroupoid:
    """Chart groupoid of a cover of a region of R^d by closed boxes."""

    kind = "cover"

    def __init__(self, charts: Sequence[Box], labels: Optional[Sequence[str]] = None,
                 tolerance: float = POINT_TOLERANCE):
        if not charts:
            raise InputError("a cover needs at least one chart")
        dims = {c.dim for c in charts}
        if len(dims) != 1:
            raise DimensionMismatch("charts of different dimensions")
        self.charts = tuple(charts)
        self.labels = tuple(labels) if labels else tuple(f"U{i}" for i in range(len(charts)))
        self.tolerance = tolerance
        self._overlaps: Dict[Key, Optional[Box]] = {}

    def __repr__(self) -> str:
        return f"Cover({', '.join(self.labels)})"

    @property
    def is_finite(self) -> bool:
        return False

    @property
    def dim(self) -> int:
        return self.charts[0].dim

    def chart_index(self, ref) -> int:
        if isinstance(ref, int) and 0 <= ref < len(self.charts):
            return ref
        try:
            return self.labels.index(str(ref))
        except ValueError:
            raise InputError(f"unknown chart '{ref}'") from None

    def overlap(self, key: Key) -> Optional[Box]:
        if key not in self._overlaps:
            box: Optional[Box] = self.charts[key[0]]
            for i in key[1:]:
                box = box.intersect(self.charts[i]) if box is not None else None
            self._overlaps[key] = box
        return self._overlaps[key]

    def object(self, point, chart) -> ChartPoint:
        coords = tuple(as_coordinate(v) for v in point)
        index = self.chart_index(chart)
        if not self.charts[index].contains(coords, self.tolerance):
            raise OutsideChart(coords, self.labels[index])
        return ChartPoint(coords, index)

    def object_distance(self, x: ChartPoint, y: ChartPoint) -> float:
        if x.chart != y.chart:
            return float("inf")
        return max((abs(float(a) - float(b)) for a, b in zip(x.point, y.point)), default=0.0)

    def same_object(self, x: ChartPoint, y: ChartPoint) -> bool:
        return self.object_distance(x, y) <= self.tolerance

    def source(self, arrow: ChartArrow) -> ChartPoint:
        return ChartPoint(arrow.point, arrow.source_chart)

    def target(self, arrow: ChartArrow) -> ChartPoint:
        return ChartPoint(arrow.point, arrow.target_chart)

    def identity(self, x: ChartPoint) -> ChartArrow:
        return ChartArrow(x.point, x.chart, x.chart)

    def inverse(self, arrow: ChartArrow) -> ChartArrow:
        return ChartArrow(arrow.point, arrow.target_chart, arrow.source_chart)

    def compose(self, a: ChartArrow, b: ChartArrow) -> ChartArrow:
        """(x, i, j) o (x, j, k) = (x, i, k)."""
        if not self.same_object(self.target(a), self.source(b)):
            raise NotComposable(self.target(a), self.source(b))
        return ChartArrow(a.point, a.source_chart, b.target_chart)

    def arrow_from(self, x: ChartPoint, label: int) -> ChartArrow:
        if not self.charts[label].contains(x.point, 1e-9):
            raise OutsideChart(x.point, self.labels[label])
        return ChartArrow(x.point, x.chart, label)

    def label(self, arrow: ChartArrow) -> int:
        return arrow.target_chart

    def locate(self, arrows: Sequence[ChartArrow]) -> Tuple[Key, Coordinates]:
        return (arrows[0].source_chart,) + tuple(a.target_chart for a in arrows), arrows[0].point

    def locate_object(self, x: ChartPoint) -> Tuple[Key, Coordinates]:
        return (x.chart,), x.point

    def level_keys(self, k: int) -> List[Key]:
        keys = itertools.product(range(len(self.charts)), repeat=k + 1)
        return [key for key in keys if self.overlap(key) is not None]

    def face(self, key: Key, i: int) -> Tuple[Key, None]:
        return key[:i] + key[i + 1:], None

    def base_box(self, key: Key) -> Optional[List[Tuple[float, float]]]:
        box = self.overlap(key)
        return box.ranges() if box is not None else None

    def tangent_map(self, arrow: ChartArrow) -> None:
        return None

    def level_size(self, k: int) -> int:
        return len(self.charts) ** (k + 1)

    def key_label(self, key: Key) -> str:
        return "(" + ",".join(self.labels[i] for i in key) + ")"

    def point_label(self, base: Coordinates) -> str:
        return "(" + ", ".join(f"{float(v):.6g}" for v in base) + ")"


Groupoid = Union[ActionGroupoid, CoverGroupoid]


def compose_arrows(groupoid: Groupoid, a: Arrow, b: Arrow) -> Arrow:
    return groupoid.compose(a, b)


@dataclass(frozen=True)
class AffineSubtorus:
    """One component of a torus fixed set.

    The component is ``offset + span(directions) (mod Z^d)``; a point lies
    on it exactly when ``w . x = value (mod 1)`` for every constraint row.
    """

    offset: Tuple[Fraction, ...]
    directions: Tuple[Tuple[int, ...], ...]
    constraints: Tuple[Tuple[Tuple[int, ...], Fraction], ...]

    @property
    def dimension(self) -> int:
        return len(self.directions)

    def contains(self, point: Sequence, tol: float = POINT_TOLERANCE) -> bool:
        for row, value in self.constraints:
            dot = sum(float(w) * float(x) for w, x in zip(row, point)) - float(value)
            if abs(dot - round(dot)) > tol:
                return False
        return True

    def enumerate_points(self, denominator: int = 0) -> List[Coordinates]:
        """Members offset + sum (m_i / denominator) v_i over the directions v_i.

        With ``denominator`` 0, or on an isolated point, only the offset.
        """
        if self.dimension == 0 or denominator <= 0:
            return [self.offset]
        result = []
        for steps in itertools.product(range(denominator), repeat=self.dimension):
            point = list(self.offset)
            for step, direction in zip(steps, self.directions):
                for j, w in enumerate(direction):
                    point[j] = point[j] + Fraction(step * w, denominator)
            result.append(reduce_mod_one(point))
        return result

    def describe(self) -> str:
        offset = "(" + ", ".join(str(v) for v in self.offset) + ")"
        if not self.directions:
            return offset
        return offset + " + span" + str([list(d) for d in self.directions])


def fixed_set(action: AffineAction, g: int) -> List[AffineSubtorus]:
    """Solve (R_g - I) x = -t_g (mod Z^d) exactly.

    With U (R_g - I) V = D in Smith form, substitute x = V y; the
    constrained coordinates y_i (D_i != 0) take D_i values each and the
    rest are free, giving prod D_i parallel subtori.
    """
    amap = action.base_map(g)
    dim = amap.dim
    if any(isinstance(v, float) for v in amap.translation):
        raise DimensionMismatch("fixed sets need rational translations")
    shifted = [[amap.matrix[i][j] - int(i == j) for j in range(dim)] for i in range(dim)]
    form = smith_normal_form(np.array(shifted, dtype=np.int64).reshape(dim, dim))
    U = [[int(v) for v in row] for row in form.U.tolist()]
    V = [[int(v) for v in row] for row in form.V.tolist()]
    rank = form.rank
    target = [-sum(U[i][j] * Fraction(amap.translation[j]) for j in range(dim)) for i in range(dim)]
    if any(target[i] % 1 != 0 for i in range(rank, dim)):
        return []
    rows = [tuple(int(v) for v in row) for row in form.V_inverse.tolist()]
    directions = tuple(tuple(V[j][i] for j in range(dim)) for i in range(rank, dim))
    choices = [
        [(target[i] + n) / form.diagonal[i] for n in range(form.diagonal[i])] for i in range(rank)
    ]
    components = []
    for values in itertools.product(*choices):
        y = list(values) + [Fraction(0)] * (dim - rank)
        offset = reduce_mod_one([sum(V[i][j] * y[j] for j in range(dim)) for i in range(dim)])
        constraints = tuple((rows[i], Fraction(values[i]) % 1) for i in range(rank))
        components.append(AffineSubtorus(tuple(Fraction(v) for v in offset), directions, constraints))
    components.sort(key=lambda c: c.offset)
    return components


@dataclass(frozen=True)
class InertiaArrow:
    """Arrow (v, alpha) of the inertia groupoid, from v to alpha^-1 v alpha."""

    loop: QuotientArrow
    alpha: QuotientArrow


class InertiaGroupoid:
    """Inertia groupoid of an action groupoid.

    Objects are arrows v with s(v) = t(v); on tori they are listed per
    group element through the components of the fixed set M^g.
    """

    def __init__(self, groupoid: ActionGroupoid, resolution: int = 0):
        self.groupoid = groupoid
        self.resolution = resolution
        self.fixed: Dict[int, Union[List[int], List[AffineSubtorus]]] = {}
        for g in groupoid.group.elements:
            if groupoid.is_finite:
                self.fixed[g] = [p for p in groupoid.base_points() if groupoid.action.act(p, g) == p]
            else:
                self.fixed[g] = fixed_set(groupoid.action, g)

    def fixed_points(self, g: int) -> List[Obj]:
        entries = self.fixed[g]
        if self.groupoid.is_finite:
            return list(entries)
        points: List[Obj] = []
        for component in entries:
            points.extend(component.enumerate_points(self.resolution))
        return points

    def objects(self) -> List[QuotientArrow]:
        return [QuotientArrow(x, g) for g in self.groupoid.group.elements for x in self.fixed_points(g)]

    def arrows(self) -> List[InertiaArrow]:
        G = self.groupoid
        return [InertiaArrow(v, QuotientArrow(v.point, k)) for v in self.objects() for k in G.group.elements]

    def is_object(self, v: QuotientArrow) -> bool:
        return self.groupoid.same_object(self.groupoid.source(v), self.groupoid.target(v))

    def normalize(self, v: QuotientArrow) -> QuotientArrow:
        if self.groupoid.is_finite:
            return v
        return QuotientArrow(reduce_mod_one(v.point), v.element)

    def source(self, arrow: InertiaArrow) -> QuotientArrow:
        return arrow.loop

    def target(self, arrow: InertiaArrow) -> QuotientArrow:
        G = self.groupoid
        conjugated = G.compose(G.compose(G.inverse(arrow.alpha), arrow.loop), arrow.alpha)
        return self.normalize(conjugated)

    def unit(self, v: QuotientArrow) -> InertiaArrow:
        return InertiaArrow(v, self.groupoid.identity(v.point))

    def inverse(self, arrow: InertiaArrow) -> InertiaArrow:
        """i(v, alpha) = (alpha^-1 v alpha, alpha^-1)."""
        back = self.groupoid.inverse(arrow.alpha)
        return InertiaArrow(self.target(arrow), QuotientArrow(self.target(arrow).point, back.element))

    def compose(self, a: InertiaArrow, b: InertiaArrow) -> InertiaArrow:
        end = self.target(a)
        if end.element != b.loop.element or not self.groupoid.same_object(end.point, b.loop.point):
            raise NotComposable(end, b.loop)
        return InertiaArrow(a.loop, QuotientArrow(a.alpha.point, self.groupoid.group.mul(a.alpha.element, b.alpha.element)))


def inertia(groupoid: ActionGroupoid, resolution: int = 0) -> InertiaGroupoid:
    """The inertia groupoid; on tori positive-dimensional fixed components are
    represented by their offsets plus a grid of the given resolution."""
    return InertiaGroupoid(groupoid, resolution)
