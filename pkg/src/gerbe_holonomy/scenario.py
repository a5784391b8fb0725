"""Scenario files: JSON schema and loader.

A scenario describes one groupoid together with the cochains, loops,
loop arrows, tangents and families the commands work on. The schema is
a set of Pydantic models; ``load_scenario`` validates a file against it,
builds the library objects and reports every problem as a
``ScenarioError`` carrying the section path (``cochains.eps.function[2]``).

Rationals are written as ``"p/q"`` strings and stay exact.
"""

import hashlib
import json
import logging
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, Iterator, List, Literal, Optional, Sequence, Tuple, Union

import sympy
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from .cohomology import flat_three_cocycle, h2_finite_group
from .deligne import CochainFunction, DeligneCochain, FlatNData, FormCochain, GerbeData, LineData
from .exceptions import GerbeHolonomyError, InputError, ScenarioError
from .expressions import Expr, is_periodic, parse_expr
from .forms import AffineMap, PForm
from .groupoids import (
    ActionGroupoid,
    AffineAction,
    Box,
    CoverGroupoid,
    FinitePointSet,
    FlatTorus,
    Groupoid,
    PermutationAction,
    as_coordinate,
    make_action_groupoid,
)
from .groups import FiniteGroup, parse_group
from .loops import (
    LoopArrow,
    LoopFamily,
    LoopTangent,
    ParametricCarrier,
    PointCarrier,
    PolylineCarrier,
    SegmentedLoop,
    build_loop,
    loop_arrow,
    loop_tangent,
    make_family,
)
from .phases import Phase

logger = logging.getLogger(__name__)

Number = Union[int, float, str]
Ref = Union[int, str]


# schema


class ChartSpec(BaseModel):
    """A closed coordinate box of a cover."""

    label: Optional[str] = Field(None, description="Chart label, U<i> by default")
    lower: List[Number] = Field(..., description="Lower corner")
    upper: List[Number] = Field(..., description="Upper corner")

    @model_validator(mode="after")
    def check_corners(self) -> "ChartSpec":
        if len(self.lower) != len(self.upper):
            raise ValueError("lower and upper corners have different dimensions")
        return self


class AffineMapSpec(BaseModel):
    """x -> R x + t on the torus; translation entries may be "p/q" strings."""

    matrix: List[List[int]] = Field(..., description="Integer matrix R")
    translation: List[Number] = Field(default_factory=list, description="Translation t, zero by default")

    @field_validator("matrix")
    @classmethod
    def validate_square(cls, v: List[List[int]]) -> List[List[int]]:
        if any(len(row) != len(v) for row in v):
            raise ValueError("matrix must be square")
        return v


class GroupoidSpec(BaseModel):
    """The groupoid: a global quotient [M/G] or the chart groupoid of a cover."""

    kind: Literal["action", "cover"] = "action"
    group: Union[str, Dict[str, Any]] = Field("1", description="Group specification")
    points: Optional[List[str]] = Field(None, description="Finite space M")
    torus: Optional[int] = Field(None, ge=1, description="Dimension of the flat torus M")
    permutations: Dict[str, List[Ref]] = Field(
        default_factory=dict, description="Image of each point under an element, for generators at least"
    )
    maps: Dict[str, AffineMapSpec] = Field(
        default_factory=dict, description="Affine map of an element, for generators at least"
    )
    charts: List[ChartSpec] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_space(self) -> "GroupoidSpec":
        if self.kind == "cover":
            if not self.charts:
                raise ValueError("a cover needs at least one chart")
            return self
        if (self.points is None) == (self.torus is None):
            raise ValueError("an action groupoid needs exactly one of 'points' and 'torus'")
        if self.points is not None and self.maps:
            raise ValueError("affine maps only act on a torus")
        if self.torus is not None and self.permutations:
            raise ValueError("permutations only act on a finite space")
        return self


class FunctionEntrySpec(BaseModel):
    """One entry of a C*-valued cochain.

    ``value`` is an expression string, a number, a per-point list on
    finite spaces or ``{"turns": "p/q"}`` for the phase exp(2 pi i p/q).
    """

    key: List[Ref] = Field(default_factory=list)
    value: Union[Dict[str, Number], List[Union[Number, Dict[str, Number]]], Number]


class FormEntrySpec(BaseModel):
    """One entry of a form cochain: coefficients by multi-index ("1" or "1,2")."""

    key: List[Ref] = Field(default_factory=list)
    coefficients: Dict[str, str]


class CochainSpec(BaseModel):
    """Line, gerbe or flat degree-n data."""

    kind: Literal["line", "gerbe", "flat"]
    degree: Optional[int] = Field(None, ge=1, description="Degree of flat data")
    function: List[FunctionEntrySpec] = Field(default_factory=list)
    A: List[FormEntrySpec] = Field(default_factory=list)
    B: List[FormEntrySpec] = Field(default_factory=list)
    theta: List[FormEntrySpec] = Field(default_factory=list)
    torsion: Optional[List[int]] = Field(None, description="Class in H^2(G, C*) multiplied into h")
    cyclic: Optional[int] = Field(None, description="Power of the cyclic 3-cocycle multiplied into omega")

    @model_validator(mode="after")
    def check_components(self) -> "CochainSpec":
        if self.kind == "flat" and self.degree is None:
            raise ValueError("flat data needs a degree")
        if self.kind != "flat" and (self.theta or self.cyclic is not None):
            raise ValueError("'theta' and 'cyclic' belong to flat data")
        if self.kind != "gerbe" and (self.B or self.torsion is not None):
            raise ValueError("'B' and 'torsion' belong to gerbe data")
        if self.kind == "flat" and self.A:
            raise ValueError("flat data carries 'theta', not 'A'")
        if self.cyclic is not None and self.degree != 3:
            raise ValueError("the cyclic cocycle has degree 3")
        return self

    @property
    def level(self) -> int:
        if self.kind == "line":
            return 1
        if self.kind == "gerbe":
            return 2
        return int(self.degree)


class SegmentSpec(BaseModel):
    """One loop segment: a parametrised path, a constant point or a polyline."""

    path: Optional[List[str]] = Field(None, description="Coordinate expressions in t")
    point: Optional[Union[Ref, List[Number]]] = None
    polyline: Optional[List[Tuple[Number, List[Number]]]] = None
    chart: Optional[Ref] = None

    @model_validator(mode="after")
    def check_carrier(self) -> "SegmentSpec":
        given = [v for v in (self.path, self.point, self.polyline) if v is not None]
        if len(given) != 1:
            raise ValueError("a segment needs exactly one of 'path', 'point' and 'polyline'")
        return self


class LoopSpec(BaseModel):
    partition: List[Number] = Field(default_factory=lambda: ["0", "1"])
    segments: List[SegmentSpec]
    arrows: List[Ref] = Field(..., description="Connecting arrow labels, one per breakpoint")


class LoopArrowSpec(BaseModel):
    """A loop arrow from a named loop, or from the target of an earlier arrow."""

    loop: Optional[str] = None
    after: Optional[str] = None
    labels: List[Ref]

    @model_validator(mode="after")
    def check_source(self) -> "LoopArrowSpec":
        if (self.loop is None) == (self.after is None):
            raise ValueError("a loop arrow needs exactly one of 'loop' and 'after'")
        return self


class TangentSpec(BaseModel):
    loop: str
    fields: List[List[str]] = Field(..., description="Vector field expressions in t, one list per segment")


class FamilySpec(BaseModel):
    """A family of loop arrows whose segment paths depend on the parameter s."""

    partition: List[Number] = Field(default_factory=lambda: ["0", "1"])
    segments: List[List[str]]
    arrows: List[Ref]
    labels: List[Ref]
    charts: Optional[List[Ref]] = None
    epsilon: float = Field(0.1, gt=0)


class ScenarioSettings(BaseModel):
    """Per-scenario overrides of the configured settings."""

    tolerance: Optional[float] = Field(None, gt=0)
    exact_tolerance: Optional[float] = Field(None, ge=0)
    quadrature_n: Optional[int] = Field(None, ge=2)
    fd_step: Optional[float] = Field(None, gt=0)
    paths: Optional[int] = Field(None, ge=0)
    points: Optional[int] = Field(None, ge=0)
    random_loops: Optional[int] = Field(None, ge=0)
    nerve_cap: Optional[int] = Field(None, ge=1)
    group_order_cap: Optional[int] = Field(None, ge=1)
    resolution: Optional[int] = Field(None, ge=0)

    @field_validator("quadrature_n")
    @classmethod
    def validate_even(cls, v: Optional[int]) -> Optional[int]:
        if v is not None and v % 2:
            raise ValueError("Simpson's rule needs an even number of subintervals")
        return v

    def overrides(self) -> Dict[str, Any]:
        return self.model_dump(exclude_none=True)


class ScenarioSpec(BaseModel):
    """Top level of a scenario file."""

    name: str = ""
    description: str = ""
    seed: Optional[int] = None
    settings: ScenarioSettings = Field(default_factory=ScenarioSettings)
    groupoid: GroupoidSpec
    cochains: Dict[str, CochainSpec] = Field(default_factory=dict)
    loops: Dict[str, LoopSpec] = Field(default_factory=dict)
    loop_arrows: Dict[str, LoopArrowSpec] = Field(default_factory=dict)
    tangents: Dict[str, TangentSpec] = Field(default_factory=dict)
    families: Dict[str, FamilySpec] = Field(default_factory=dict)


# loaded scenario


@dataclass
class Scenario:
    """A validated scenario with its library objects."""

    spec: ScenarioSpec
    digest: str
    groupoid: Groupoid
    cochains: Dict[str, DeligneCochain] = field(default_factory=dict)
    loops: Dict[str, SegmentedLoop] = field(default_factory=dict)
    loop_arrows: Dict[str, LoopArrow] = field(default_factory=dict)
    tangents: Dict[str, LoopTangent] = field(default_factory=dict)
    families: Dict[str, LoopFamily] = field(default_factory=dict)

    @property
    def seed(self) -> Optional[int]:
        return self.spec.seed

    def cochain(self, name: Optional[str] = None, kind: Optional[type] = None) -> DeligneCochain:
        """The named cochain, or the only one of the requested kind."""
        if name is not None:
            if name not in self.cochains:
                raise ScenarioError(f"cochains.{name}", "no such cochain")
            found = self.cochains[name]
            if kind is not None and not isinstance(found, kind):
                raise ScenarioError(f"cochains.{name}", f"expected {kind.__name__}, found {type(found).__name__}")
            return found
        candidates = [c for c in self.cochains.values() if kind is None or isinstance(c, kind)]
        wanted = kind.__name__ if kind is not None else "cochain"
        if len(candidates) != 1:
            raise ScenarioError("cochains", f"found {len(candidates)} {wanted} entries, pass --data to choose one")
        return candidates[0]

    def loop(self, name: str) -> SegmentedLoop:
        return _lookup(self.loops, "loops", name)

    def loop_arrow(self, name: str) -> LoopArrow:
        return _lookup(self.loop_arrows, "loop_arrows", name)

    def tangent(self, name: str) -> LoopTangent:
        return _lookup(self.tangents, "tangents", name)

    def family(self, name: str) -> LoopFamily:
        return _lookup(self.families, "families", name)


def _lookup(table: Dict[str, Any], section: str, name: str) -> Any:
    if name not in table:
        raise ScenarioError(f"{section}.{name}", "no such entry")
    return table[name]


@contextmanager
def _section(path: str) -> Iterator[None]:
    """Re-raise input errors met while building ``path`` with that path attached."""
    try:
        yield
    except ScenarioError:
        raise
    except GerbeHolonomyError as e:
        raise ScenarioError(path, str(e)) from e


# groupoid


def _close_action(group: FiniteGroup, given: Dict[int, Any], identity: Any,
                  compose: Callable[[Any, Any], Any]) -> List[Any]:
    """Extend an action given on generators to the whole group.

    ``compose(a, b)`` is the value of gh from the values a of g and b of h.
    """
    values = {group.identity: identity}
    values.update(given)
    frontier = list(values)
    while frontier:
        g = frontier.pop()
        for s, value in given.items():
            gs = group.mul(g, s)
            if gs not in values:
                values[gs] = compose(values[g], value)
                frontier.append(gs)
    if len(values) != group.order:
        raise ScenarioError("groupoid", f"the given elements do not generate {group.label}")
    return [values[g] for g in group.elements]


def _permutation(space: FinitePointSet, images: Sequence[Ref], path: str) -> Tuple[int, ...]:
    if len(images) != space.size:
        raise ScenarioError(path, f"expected {space.size} images, got {len(images)}")
    return tuple(space.index(p) for p in images)


def _affine_map(spec: AffineMapSpec, dim: int, path: str) -> AffineMap:
    if len(spec.matrix) != dim:
        raise ScenarioError(path, f"matrix must be {dim}x{dim}")
    translation = spec.translation or [0] * dim
    if len(translation) != dim:
        raise ScenarioError(path, f"translation must have {dim} entries")
    return AffineMap(
        tuple(tuple(int(v) for v in row) for row in spec.matrix),
        tuple(Fraction(str(v)) for v in translation),
    )


def build_groupoid(spec: GroupoidSpec) -> Groupoid:
    if spec.kind == "cover":
        with _section("groupoid.charts"):
            boxes = [
                Box(tuple(as_coordinate(v) for v in c.lower), tuple(as_coordinate(v) for v in c.upper))
                for c in spec.charts
            ]
            labels = [c.label or f"U{i}" for i, c in enumerate(spec.charts)]
            return CoverGroupoid(boxes, labels)
    with _section("groupoid.group"):
        group = parse_group(spec.group)
    if spec.points is not None:
        space = FinitePointSet(tuple(spec.points))
        with _section("groupoid.permutations"):
            given = {
                group.index(ref): _permutation(space, images, f"groupoid.permutations.{ref}")
                for ref, images in spec.permutations.items()
            }
        if not given and group.order > 1:
            given = {g: tuple(range(space.size)) for g in group.elements}
        perms = _close_action(group, given, tuple(range(space.size)),
                              lambda p, q: tuple(q[x] for x in p))
        with _section("groupoid"):
            return make_action_groupoid(space, group, PermutationAction(tuple(perms)))
    dim = int(spec.torus)
    with _section("groupoid.maps"):
        given = {
            group.index(ref): _affine_map(m, dim, f"groupoid.maps.{ref}") for ref, m in spec.maps.items()
        }
    if not given and group.order > 1:
        given = {g: AffineMap.identity(dim) for g in group.elements}
    maps = _close_action(group, given, AffineMap.identity(dim), lambda a, b: a.then(b))
    with _section("groupoid"):
        return make_action_groupoid(FlatTorus(dim), group, AffineAction(tuple(maps)))


# cochains


def _key(G: Groupoid, refs: Sequence[Ref], level: int, path: str) -> Tuple[int, ...]:
    if isinstance(G, CoverGroupoid):
        if len(refs) != level + 1:
            raise ScenarioError(path, f"level-{level} keys over a cover name {level + 1} charts")
        key = tuple(G.chart_index(r) for r in refs)
        if G.overlap(key) is None:
            raise ScenarioError(path, f"charts {G.key_label(key)} do not overlap")
        return key
    if len(refs) != level:
        raise ScenarioError(path, f"level-{level} keys name {level} group elements")
    return tuple(G.group.index(r) for r in refs)


def _expression(G: Groupoid, text: Number, key: Tuple[int, ...], path: str) -> Expr:
    expr = parse_expr(str(text), G.dim, G.base_box(key))
    if any(not s.name.startswith("x") for s in expr.free_symbols):
        raise ScenarioError(path, f"'{text}' may only use the coordinates x1..x{G.dim}")
    if isinstance(G, ActionGroupoid) and G.dim > 0 and expr.free_symbols and not is_periodic(expr, G.dim):
        raise ScenarioError(path, f"'{text}' is not periodic on the torus")
    return expr


def _scalar(G: Groupoid, value: Any, key: Tuple[int, ...], path: str) -> Any:
    if isinstance(value, dict):
        if set(value) != {"turns"}:
            raise ScenarioError(path, "a phase is written {\"turns\": \"p/q\"}")
        return Phase(Fraction(str(value["turns"])))
    if isinstance(value, bool):
        raise ScenarioError(path, "booleans are not values")
    if isinstance(value, int):
        return sympy.Integer(value)
    if isinstance(value, float):
        return value
    return _expression(G, value, key, path)


def _function_value(G: Groupoid, value: Any, key: Tuple[int, ...], path: str) -> Any:
    if not isinstance(value, list):
        return _scalar(G, value, key, path)
    if not (isinstance(G, ActionGroupoid) and G.is_finite):
        raise ScenarioError(path, "per-point tables need a finite space")
    if len(value) != G.space.size:
        raise ScenarioError(path, f"expected {G.space.size} per-point values, got {len(value)}")
    return tuple(_scalar(G, v, key, f"{path}[{p}]") for p, v in enumerate(value))


def _function(G: Groupoid, entries: List[FunctionEntrySpec], level: int, path: str) -> CochainFunction:
    table = {}
    for i, entry in enumerate(entries):
        where = f"{path}[{i}]"
        with _section(where):
            key = _key(G, entry.key, level, where)
            if key in table:
                raise ScenarioError(where, f"duplicate key {G.key_label(key)}")
            table[key] = _function_value(G, entry.value, key, where)
    with _section(path):
        return CochainFunction(G, level, table)


def _multi_index(text: str, path: str) -> Tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise ScenarioError(path, f"'{text}' is not a multi-index like '1' or '1,2'") from None


def _forms(G: Groupoid, entries: List[FormEntrySpec], level: int, degree: int, path: str) -> FormCochain:
    table = {}
    for i, entry in enumerate(entries):
        where = f"{path}[{i}]"
        with _section(where):
            key = _key(G, entry.key, level, where)
            coefficients = {
                _multi_index(index, f"{where}.coefficients"): _expression(G, text, key, f"{where}.coefficients.{index}")
                for index, text in entry.coefficients.items()
            }
            table[key] = PForm(degree, G.dim, coefficients)
    with _section(path):
        return FormCochain(G, level, degree, table)


def build_cochain(G: Groupoid, spec: CochainSpec, path: str) -> DeligneCochain:
    function = _function(G, spec.function, spec.level, f"{path}.function")
    if spec.kind == "line":
        A = _forms(G, spec.A, 0, 1, f"{path}.A") if spec.A else None
        with _section(path):
            return LineData(function, A)
    if spec.kind == "gerbe":
        if spec.torsion is not None:
            if not isinstance(G, ActionGroupoid):
                raise ScenarioError(f"{path}.torsion", "torsion classes need an action groupoid")
            with _section(f"{path}.torsion"):
                epsilon = h2_finite_group(G.group).cocycle_for(spec.torsion)
                function = function.product(epsilon.as_cochain(G))
        A = _forms(G, spec.A, 1, 1, f"{path}.A") if spec.A else None
        B = _forms(G, spec.B, 0, 2, f"{path}.B") if spec.B else None
        with _section(path):
            return GerbeData(function, A, B)
    if spec.cyclic is not None:
        if not isinstance(G, ActionGroupoid):
            raise ScenarioError(f"{path}.cyclic", "the cyclic cocycle needs an action groupoid")
        with _section(f"{path}.cyclic"):
            function = function.product(flat_three_cocycle(G, spec.cyclic).omega)
    theta = _forms(G, spec.theta, spec.level - 1, 1, f"{path}.theta") if spec.theta else None
    with _section(path):
        return FlatNData(function, theta)


# loops


def _path_exprs(G: Groupoid, texts: Sequence[str], path: str, symbols: str = "t") -> Tuple[Expr, ...]:
    if len(texts) != G.dim:
        raise ScenarioError(path, f"expected {G.dim} coordinate expressions, got {len(texts)}")
    exprs = []
    for j, text in enumerate(texts):
        with _section(f"{path}[{j}]"):
            expr = parse_expr(text, 0)
        unexpected = {s.name for s in expr.free_symbols} - set(symbols)
        if unexpected:
            raise ScenarioError(f"{path}[{j}]", f"unexpected symbols {sorted(unexpected)}")
        exprs.append(expr)
    return tuple(exprs)


def _point(G: Groupoid, ref: Any, path: str):
    if isinstance(G, ActionGroupoid) and G.is_finite:
        if isinstance(ref, list):
            raise ScenarioError(path, "points of a finite space are named")
        return G.space.index(ref)
    if not isinstance(ref, list) or len(ref) != G.dim:
        raise ScenarioError(path, f"expected {G.dim} coordinates")
    return tuple(as_coordinate(v) for v in ref)


def _carrier(G: Groupoid, spec: SegmentSpec, path: str):
    if G.dim == 0 and spec.point is None:
        raise ScenarioError(path, "segments over a finite space are points")
    if spec.path is not None:
        return ParametricCarrier(_path_exprs(G, spec.path, f"{path}.path"))
    if spec.point is not None:
        with _section(f"{path}.point"):
            return PointCarrier(_point(G, spec.point, f"{path}.point"))
    knots = tuple(
        (as_coordinate(t), _point(G, x, f"{path}.polyline[{j}]")) for j, (t, x) in enumerate(spec.polyline)
    )
    with _section(f"{path}.polyline"):
        return PolylineCarrier(knots)


def build_loop_section(G: Groupoid, spec: LoopSpec, path: str) -> SegmentedLoop:
    carriers = [_carrier(G, seg, f"{path}.segments[{i}]") for i, seg in enumerate(spec.segments)]
    charts = None
    if isinstance(G, CoverGroupoid):
        charts = [seg.chart for seg in spec.segments]
        if any(c is None for c in charts):
            raise ScenarioError(f"{path}.segments", "segments over a cover need a chart")
    with _section(path):
        return build_loop(G, [as_coordinate(p) for p in spec.partition], carriers, spec.arrows, charts)


def build_scenario(spec: ScenarioSpec, digest: str = "builtin") -> Scenario:
    """Build the library objects of a validated scenario."""
    G = build_groupoid(spec.groupoid)
    scenario = Scenario(spec, digest, G)
    for name, cochain in spec.cochains.items():
        scenario.cochains[name] = build_cochain(G, cochain, f"cochains.{name}")
    for name, loop in spec.loops.items():
        scenario.loops[name] = build_loop_section(G, loop, f"loops.{name}")
    for name, arrow in spec.loop_arrows.items():
        path = f"loop_arrows.{name}"
        if arrow.loop is not None:
            if arrow.loop not in scenario.loops:
                raise ScenarioError(f"{path}.loop", f"unknown loop '{arrow.loop}'")
            source = scenario.loops[arrow.loop]
        else:
            if arrow.after not in scenario.loop_arrows:
                raise ScenarioError(f"{path}.after", f"unknown or later loop arrow '{arrow.after}'")
            source = scenario.loop_arrows[arrow.after].target
        with _section(path):
            scenario.loop_arrows[name] = loop_arrow(source, arrow.labels)
    for name, tangent in spec.tangents.items():
        path = f"tangents.{name}"
        if tangent.loop not in scenario.loops:
            raise ScenarioError(f"{path}.loop", f"unknown loop '{tangent.loop}'")
        fields = [ParametricCarrier(_path_exprs(G, f, f"{path}.fields[{i}]")) for i, f in enumerate(tangent.fields)]
        with _section(path):
            scenario.tangents[name] = loop_tangent(scenario.loops[tangent.loop], fields)
    for name, family in spec.families.items():
        path = f"families.{name}"
        carriers = [
            ParametricCarrier(_path_exprs(G, seg, f"{path}.segments[{i}]", symbols="ts"))
            for i, seg in enumerate(family.segments)
        ]
        with _section(path):
            scenario.families[name] = make_family(
                G, [as_coordinate(p) for p in family.partition], carriers, family.arrows,
                family.labels, family.charts, family.epsilon,
            )
    logger.info(
        "scenario %s: %r, %d cochains, %d loops, %d loop arrows",
        spec.name or digest[:12], G, len(scenario.cochains), len(scenario.loops), len(scenario.loop_arrows),
    )
    return scenario


def _error_path(loc: Sequence) -> str:
    path = ""
    for part in loc:
        if isinstance(part, int):
            path += f"[{part}]"
        else:
            path += f".{part}" if path else str(part)
    return path or "$"


def parse_scenario(raw: bytes, digest: Optional[str] = None) -> Scenario:
    """Validate scenario bytes and build the scenario.

    Raises:
        ScenarioError: malformed JSON, schema violations or unresolvable
            references, with the section path of the first problem
    """
    digest = digest or hashlib.sha256(raw).hexdigest()
    try:
        document = json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise ScenarioError("$", f"not valid JSON: {e}") from e
    try:
        spec = ScenarioSpec.model_validate(document)
    except ValidationError as e:
        first = e.errors()[0]
        raise ScenarioError(_error_path(first["loc"]), first["msg"]) from e
    return build_scenario(spec, digest)


def load_scenario(path: Union[str, Path]) -> Scenario:
    try:
        raw = Path(path).read_bytes()
    except OSError as e:
        raise InputError(f"cannot read scenario {path}: {e}") from e
    return parse_scenario(raw)
