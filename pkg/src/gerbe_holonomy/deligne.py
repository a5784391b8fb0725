"""Cech-Deligne cochains on groupoid nerves.

This module provides ``CochainFunction`` (C*-valued functions on nerve
level k), ``FormCochain`` (p-forms on nerve level k), the Deligne data
types ``LineData``, ``GerbeData`` and ``FlatNData``, and the operators
built from them: the Cech coboundary, the total coboundary
``D_k = delta + (-1)^(k+1) d``, gauge coboundaries and cocycle
verification.

No logarithm of a cochain value is ever taken. ``d log h`` is the
symbolic quotient ``dh/h``, and conditions containing it are also
checked in exponentiated, path-integrated form.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import sympy

from . import phases
from .exceptions import ArityMismatch, DimensionMismatch, LevelUnsupported, PossibleZero
from .expressions import Expr, certify_nonvanishing, compile_expr
from .forms import AffineMap, PForm, dlog, exterior_d, pullback_form
from .groupoids import DEFAULT_NERVE_CAP, Groupoid, Key
from .models import Report
from .phases import Phase, Value
from .quadrature import DEFAULT_SUBINTERVALS, DEFAULT_TARGET, adaptive_simpson

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-8


def to_sympy(value: Value) -> Expr:
    if isinstance(value, Phase):
        turns = sympy.Rational(value.turns.numerator, value.turns.denominator)
        return sympy.exp(2 * sympy.pi * sympy.I * turns)
    return sympy.sympify(complex(value))


def _as_phase(expr: Expr) -> Optional[Phase]:
    """Recognise exp(2*pi*i*r) with rational r among exact constants."""
    if expr == 1:
        return Phase.one()
    if expr.has(sympy.Float):
        return None
    try:
        if sympy.simplify(sympy.Abs(expr) - 1) != 0:
            return None
        turns = sympy.nsimplify(sympy.simplify(sympy.arg(expr) / (2 * sympy.pi)))
    except (TypeError, ValueError):
        return None
    if turns.is_Rational:
        return Phase.root(int(turns.p), int(turns.q))
    return None


@dataclass(frozen=True)
class ConstantEntry:
    """The same value at every base point."""

    value: Value

    @property
    def exact(self) -> bool:
        return phases.is_exact(self.value)

    def at(self, base) -> Value:
        return self.value

    def at_many(self, points: np.ndarray) -> np.ndarray:
        return np.full(len(points), complex(self.value))

    def pull(self, mover) -> "ConstantEntry":
        return self

    def expr(self) -> Expr:
        return to_sympy(self.value)


@dataclass(frozen=True)
class TableEntry:
    """One value per point of a finite base."""

    values: Tuple[Value, ...]

    @property
    def exact(self) -> bool:
        return all(phases.is_exact(v) for v in self.values)

    def at(self, base: int) -> Value:
        return self.values[base]

    def at_many(self, points: np.ndarray) -> np.ndarray:
        return np.array([complex(self.values[int(p)]) for p in np.ravel(points)])

    def pull(self, mover: Tuple[int, ...]) -> "TableEntry":
        return TableEntry(tuple(self.values[mover[p]] for p in range(len(self.values))))


@dataclass(frozen=True)
class ExprEntry:
    """A nonvanishing expression in the base coordinates."""

    expr: Expr
    dim: int

    @property
    def exact(self) -> bool:
        return False

    def at(self, base) -> Value:
        return complex(compile_expr(self.expr, self.dim)(np.array([float(v) for v in base])))

    def at_many(self, points: np.ndarray) -> np.ndarray:
        return compile_expr(self.expr, self.dim)(np.atleast_2d(points))

    def pull(self, mover: Optional[AffineMap]) -> "Entry":
        if mover is None:
            return self
        return make_entry(mover.pullback_expr(self.expr), self.dim)


Entry = Union[ConstantEntry, TableEntry, ExprEntry]
ONE = ConstantEntry(Phase.one())


def make_entry(value, dim: int = 0) -> Entry:
    """Normalise a value, a per-point sequence or an expression to an entry.

    Constant expressions that are exact roots of unity become phases, so
    torsion data written as expressions is still compared exactly.
    """
    if isinstance(value, (ConstantEntry, TableEntry, ExprEntry)):
        return value
    if isinstance(value, Phase):
        return ConstantEntry(value)
    if isinstance(value, (int, float, complex)):
        if complex(value) == 0:
            raise PossibleZero(str(value))
        return ConstantEntry(Phase.one() if complex(value) == 1 else complex(value))
    if isinstance(value, (list, tuple)):
        entries = [make_entry(v, dim) for v in value]
        if any(not isinstance(e, ConstantEntry) for e in entries):
            raise DimensionMismatch("per-point tables hold constants only")
        values = tuple(e.value for e in entries)
        if len(set(values)) == 1:
            return ConstantEntry(values[0])
        return TableEntry(values)
    expr = sympy.sympify(value)
    if expr.free_symbols:
        return ExprEntry(expr, dim)
    if expr == 0:
        raise PossibleZero(str(expr))
    phase = _as_phase(expr)
    if phase is not None:
        return ConstantEntry(phase)
    return ConstantEntry(complex(sympy.N(expr, 17)))


def entry_product(terms: Sequence[Tuple[Entry, int]], dim: int) -> Entry:
    """prod entry^exponent, exact when every factor is a constant phase."""
    if all(isinstance(e, ConstantEntry) for e, _ in terms):
        return ConstantEntry(phases.multiply(phases.power(e.value, k) for e, k in terms))
    tables = [e for e, _ in terms if isinstance(e, TableEntry)]
    if tables:
        size = len(tables[0].values)
        values = []
        for p in range(size):
            values.append(phases.multiply(phases.power(e.at(p), k) for e, k in terms))
        return make_entry(tuple(values), dim)
    expr = sympy.Integer(1)
    for e, k in terms:
        expr = expr * _entry_expr(e) ** k
    return make_entry(sympy.powsimp(expr), dim)


def _entry_expr(entry: Entry) -> Expr:
    if isinstance(entry, ExprEntry):
        return entry.expr
    if isinstance(entry, ConstantEntry):
        return entry.expr()
    raise DimensionMismatch("table entries have no expression form")


def _check_level(groupoid: Groupoid, k: int, cap: int) -> None:
    if k < 0:
        raise LevelUnsupported(f"nerve level must be non-negative, got {k}")
    size = groupoid.level_size(k)
    if size > cap:
        raise LevelUnsupported(f"level {k} has {size} components, above the cap {cap}")


@dataclass
class CochainFunction:
    """A C*-valued function on nerve level k; absent keys are 1."""

    groupoid: Groupoid
    level: int
    entries: Dict[Key, Entry] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.entries = {
            tuple(key): make_entry(value, self.groupoid.dim) for key, value in self.entries.items()
        }
        self.entries = {key: e for key, e in self.entries.items() if e != ONE}

    def entry(self, key: Key) -> Entry:
        return self.entries.get(tuple(key), ONE)

    def value(self, key: Key, base) -> Value:
        return self.entry(key).at(base)

    def __call__(self, *arrows) -> Value:
        """Value on a composable tuple of arrows (or on an object at level 0)."""
        G = self.groupoid
        if self.level == 0:
            key, base = G.locate_object(arrows[0])
        else:
            if len(arrows) != self.level:
                raise ArityMismatch(f"level-{self.level} cochain evaluated on {len(arrows)} arrows")
            key, base = G.locate(arrows)
        return self.value(key, base)

    @property
    def exact(self) -> bool:
        return all(e.exact for e in self.entries.values())

    def product(self, other: "CochainFunction") -> "CochainFunction":
        if other.level != self.level:
            raise LevelUnsupported("product of cochains of different levels")
        keys = set(self.entries) | set(other.entries)
        entries = {
            key: entry_product([(self.entry(key), 1), (other.entry(key), 1)], self.groupoid.dim)
            for key in sorted(keys)
        }
        return CochainFunction(self.groupoid, self.level, entries)

    def inverse(self) -> "CochainFunction":
        entries = {
            key: entry_product([(e, -1)], self.groupoid.dim) for key, e in self.entries.items()
        }
        return CochainFunction(self.groupoid, self.level, entries)

    def perturbed(self, key: Key, factor: Value) -> "CochainFunction":
        """Copy with the entry at ``key`` multiplied by ``factor``."""
        key = tuple(key)
        entries = dict(self.entries)
        entries[key] = entry_product(
            [(self.entry(key), 1), (ConstantEntry(factor), 1)], self.groupoid.dim
        )
        return CochainFunction(self.groupoid, self.level, entries)


@dataclass
class FormCochain:
    """p-forms on nerve level k, one per nerve component; absent keys are 0."""

    groupoid: Groupoid
    level: int
    degree: int
    entries: Dict[Key, PForm] = field(default_factory=dict)

    def __post_init__(self) -> None:
        dim = self.groupoid.dim
        cleaned = {}
        for key, form in self.entries.items():
            if not isinstance(form, PForm):
                form = PForm(self.degree, dim, form)
            if (form.degree, form.dim) != (self.degree, dim):
                raise DimensionMismatch(
                    f"form at {key} has degree {form.degree} on dimension {form.dim}, "
                    f"expected {self.degree} on {dim}"
                )
            if form.coefficients:
                cleaned[tuple(key)] = form
        self.entries = cleaned

    @classmethod
    def zero(cls, groupoid: Groupoid, level: int, degree: int) -> "FormCochain":
        return cls(groupoid, level, degree, {})

    def entry(self, key: Key) -> PForm:
        return self.entries.get(tuple(key), PForm.zero(self.degree, self.groupoid.dim))

    def combine(self, other: "FormCochain", sign: int = 1) -> "FormCochain":
        if (other.level, other.degree) != (self.level, self.degree):
            raise DimensionMismatch("forms on different levels or of different degrees")
        keys = sorted(set(self.entries) | set(other.entries))
        return FormCochain(
            self.groupoid, self.level, self.degree,
            {key: self.entry(key) + other.entry(key).scale(sign) for key in keys},
        )

    def scale(self, factor: int) -> "FormCochain":
        return FormCochain(
            self.groupoid, self.level, self.degree,
            {key: form.scale(factor) for key, form in self.entries.items()},
        )

    def is_zero(self) -> bool:
        return all(form.is_zero() for form in self.entries.values())


def cech_delta(sigma: CochainFunction, cap: int = DEFAULT_NERVE_CAP) -> CochainFunction:
    """(delta s)(g_1..g_{k+1}) = prod_i (s o face_i)^((-1)^i).

    Raises:
        LevelUnsupported: level k+1 has more components than ``cap``
    """
    G = sigma.groupoid
    _check_level(G, sigma.level + 1, cap)
    entries: Dict[Key, Entry] = {}
    for key in G.level_keys(sigma.level + 1):
        terms = []
        for i in range(sigma.level + 2):
            face, mover = G.face(key, i)
            terms.append((sigma.entry(face).pull(mover), (-1) ** i))
        entries[key] = entry_product(terms, G.dim)
    logger.debug("delta of level-%d cochain on %r: %d components", sigma.level, G, len(entries))
    return CochainFunction(G, sigma.level + 1, entries)


def form_delta(omega: FormCochain, cap: int = DEFAULT_NERVE_CAP) -> FormCochain:
    """Alternating sum of face pullbacks; face 0 pulls back along the action."""
    G = omega.groupoid
    _check_level(G, omega.level + 1, cap)
    if G.dim == 0 or not omega.entries:
        return FormCochain.zero(G, omega.level + 1, omega.degree)
    entries: Dict[Key, PForm] = {}
    for key in G.level_keys(omega.level + 1):
        total = PForm.zero(omega.degree, G.dim)
        for i in range(omega.level + 2):
            face, mover = G.face(key, i)
            form = omega.entry(face)
            if isinstance(mover, AffineMap):
                form = pullback_form(form, mover)
            total = total + form.scale((-1) ** i)
        entries[key] = total
    return FormCochain(G, omega.level + 1, omega.degree, entries)


def form_d(omega: FormCochain) -> FormCochain:
    return FormCochain(
        omega.groupoid, omega.level, omega.degree + 1,
        {key: exterior_d(form) for key, form in omega.entries.items()},
    )


def cochain_dlog(sigma: CochainFunction) -> FormCochain:
    """dh/h per component; constants and tables contribute nothing."""
    G = sigma.groupoid
    entries = {
        key: dlog(e.expr, G.dim) for key, e in sigma.entries.items() if isinstance(e, ExprEntry)
    }
    return FormCochain(G, sigma.level, 1, entries)


@dataclass
class DeligneCochain:
    """A cochain of total degree p: a function on G_p and j-forms on G_{p-j}."""

    degree: int
    function: CochainFunction
    forms: Tuple[FormCochain, ...] = ()

    def __post_init__(self) -> None:
        if self.function.level != self.degree:
            raise LevelUnsupported(
                f"degree-{self.degree} data needs its function on level {self.degree}, "
                f"got {self.function.level}"
            )
        for j, omega in enumerate(self.forms, start=1):
            if omega.degree != j or omega.level != self.degree - j:
                raise DimensionMismatch(
                    f"component {j} must be a {j}-form on level {self.degree - j}, "
                    f"got a {omega.degree}-form on level {omega.level}"
                )

    @property
    def groupoid(self) -> Groupoid:
        return self.function.groupoid

    def form(self, j: int) -> FormCochain:
        """The j-form component, zero when absent or beyond the data."""
        if 1 <= j <= len(self.forms):
            return self.forms[j - 1]
        return FormCochain.zero(self.groupoid, self.degree - j, j)

    @property
    def condition_names(self) -> List[str]:
        names = [f"{self.degree}-cocycle function"]
        names.extend(f"{self.degree}-cocycle {j}-form" for j in range(1, self.degree + 1))
        return names

    @property
    def path_condition(self) -> str:
        return f"{self.degree}-cocycle paths"


class LineData(DeligneCochain):
    """(h, A): transition function h on G_1 and connection A on G_0."""

    def __init__(self, h: CochainFunction, A: Optional[FormCochain] = None):
        super().__init__(1, h, (A if A is not None else FormCochain.zero(h.groupoid, 0, 1),))

    @property
    def h(self) -> CochainFunction:
        return self.function

    @property
    def A(self) -> FormCochain:
        return self.forms[0]

    @property
    def condition_names(self) -> List[str]:
        return ["1-cocycle b", "1-cocycle a (pointwise)"]

    path_condition = "1-cocycle a"


class GerbeData(DeligneCochain):
    """(h, A, B): h on G_2, 1-forms A on G_1 and the curving B on G_0."""

    def __init__(self, h: CochainFunction, A: Optional[FormCochain] = None,
                 B: Optional[FormCochain] = None):
        G = h.groupoid
        super().__init__(2, h, (
            A if A is not None else FormCochain.zero(G, 1, 1),
            B if B is not None else FormCochain.zero(G, 0, 2),
        ))

    @property
    def h(self) -> CochainFunction:
        return self.function

    @property
    def A(self) -> FormCochain:
        return self.forms[0]

    @property
    def B(self) -> FormCochain:
        return self.forms[1]

    @property
    def condition_names(self) -> List[str]:
        return ["2-cocycle h", "2-cocycle A (pointwise)", "2-cocycle B"]

    path_condition = "2-cocycle A"


class FlatNData(DeligneCochain):
    """(omega, theta^1, 0, ..., 0) of degree n: flat when theta^1 = 0."""

    def __init__(self, omega: CochainFunction, theta: Optional[FormCochain] = None):
        n = omega.level
        if n < 1:
            raise LevelUnsupported("flat data needs n >= 1")
        if theta is not None and n == 1:
            raise LevelUnsupported("degree-1 flat data has no theta component")
        forms: Tuple[FormCochain, ...] = ()
        if theta is not None:
            forms = (theta,)
        super().__init__(n, omega, forms)

    @property
    def n(self) -> int:
        return self.degree

    @property
    def omega(self) -> CochainFunction:
        return self.function

    @property
    def theta(self) -> FormCochain:
        return self.form(1)

    @property
    def is_flat(self) -> bool:
        return not self.forms or self.forms[0].is_zero()

    @property
    def condition_names(self) -> List[str]:
        names = [f"{self.n}-cocycle omega", f"{self.n}-cocycle theta (pointwise)"]
        names.extend(f"{self.n}-cocycle form {j}" for j in range(2, self.n + 1))
        return names

    @property
    def path_condition(self) -> str:  # type: ignore[override]
        return f"{self.n}-cocycle theta"


def total_coboundary(c: DeligneCochain, cap: int = DEFAULT_NERVE_CAP) -> DeligneCochain:
    """D_p c = (delta h, delta A^1 + s dlog h, delta A^2 + s dA^1, ...), s = (-1)^(p+1).

    Form components are computed up to degree max(p, 2); the function
    part stays multiplicative and the form parts additive.
    """
    p = c.degree
    sign = (-1) ** (p + 1)
    G = c.groupoid
    function = cech_delta(c.function, cap)
    forms: List[FormCochain] = []
    for j in range(1, max(p, 2) + 1):
        if j <= p:
            part = form_delta(c.form(j), cap)
        else:
            part = FormCochain.zero(G, p + 1 - j, j)
        lower = cochain_dlog(c.function) if j == 1 else form_d(c.form(j - 1))
        forms.append(part.combine(lower, sign))
    return DeligneCochain(p + 1, function, tuple(forms))


def gauge_coboundary(f: CochainFunction, cap: int = DEFAULT_NERVE_CAP) -> LineData:
    """(delta f, -df/f) for a nonvanishing function f on G_0.

    Raises:
        PossibleZero: an expression entry is not certified nonvanishing
    """
    if f.level != 0:
        raise LevelUnsupported(f"gauge functions live on level 0, got level {f.level}")
    _certify(f)
    dlog_f = cochain_dlog(f).scale(-1)
    return LineData(cech_delta(f, cap), dlog_f)


def gerbe_coboundary(f: CochainFunction, A: Optional[FormCochain] = None,
                     cap: int = DEFAULT_NERVE_CAP) -> GerbeData:
    """D_1(f, A) = (delta f, delta A + df/f, dA): the gerbe bounded by line data."""
    if f.level != 1:
        raise LevelUnsupported(f"gerbe coboundaries start from level 1, got level {f.level}")
    _certify(f)
    G = f.groupoid
    A = A if A is not None else FormCochain.zero(G, 0, 1)
    image = total_coboundary(LineData(f, A), cap)
    return GerbeData(image.function, image.forms[0], image.forms[1])


def _certify(f: CochainFunction) -> None:
    G = f.groupoid
    for key, entry in f.entries.items():
        if isinstance(entry, ExprEntry):
            box = G.base_box(key)
            if box is None or not certify_nonvanishing(entry.expr, box):
                raise PossibleZero(str(entry.expr))


# residuals


@dataclass
class Residual:
    value: float = 0.0
    samples: int = 0
    exact: bool = True
    witness: Optional[str] = None

    def update(self, value: float, witness: str, exact: bool) -> None:
        self.samples += 1
        self.exact = self.exact and exact
        if value > self.value:
            self.value = value
            self.witness = witness


def _sample_points(G: Groupoid, key: Key, rng: np.random.Generator, count: int) -> np.ndarray:
    box = G.base_box(key)
    if box is None:
        raise DimensionMismatch(f"no base box for component {key}")
    lo = np.array([a for a, _ in box])
    hi = np.array([b for _, b in box])
    return lo + rng.random((count, len(box))) * (hi - lo)


def _per_key(total: int, keys: int) -> int:
    return max(1, math.ceil(total / max(keys, 1)))


def function_residual(sigma: CochainFunction, points: int = 100, seed: int = 0) -> Residual:
    """Largest |sigma - 1|: exhaustive on finite nerves, sampled otherwise."""
    G = sigma.groupoid
    result = Residual()
    keys = G.level_keys(sigma.level)
    if G.is_finite:
        for key in keys:
            entry = sigma.entry(key)
            for base in G.base_points():
                value = entry.at(base)
                result.update(
                    phases.distance_from_one(value),
                    f"{G.key_label(key)} at {G.point_label(base)}",
                    phases.is_exact(value),
                )
        return result
    rng = np.random.default_rng(seed)
    count = _per_key(points, len(keys))
    for key in keys:
        entry = sigma.entry(key)
        if isinstance(entry, ConstantEntry):
            result.update(phases.distance_from_one(entry.value), G.key_label(key), entry.exact)
            continue
        sample = _sample_points(G, key, rng, count)
        values = np.abs(entry.at_many(sample) - 1.0)
        worst = int(np.argmax(values))
        result.update(float(values[worst]), f"{G.key_label(key)} at {G.point_label(sample[worst])}", False)
        result.samples += count - 1
    return result


def form_residual(omega: FormCochain, points: int = 100, seed: int = 0) -> Residual:
    """Largest |omega(x)(v_1..v_p)| over sampled points and random vectors."""
    G = omega.groupoid
    result = Residual()
    if G.dim == 0 or omega.degree > G.dim:
        return result
    rng = np.random.default_rng(seed)
    keys = G.level_keys(omega.level)
    count = _per_key(points, len(keys))
    for key in keys:
        sample = _sample_points(G, key, rng, count)
        vectors = [rng.uniform(-1.0, 1.0, (count, G.dim)) for _ in range(omega.degree)]
        form = omega.entry(key)
        if not form.coefficients:
            result.samples += count
            continue
        values = np.abs(form.evaluate_batch(sample, vectors))
        worst = int(np.argmax(values))
        result.update(float(values[worst]), f"{G.key_label(key)} at {G.point_label(sample[worst])}", False)
        result.samples += count - 1
    return result


def _segment_integral(form: PForm, start: np.ndarray, end: np.ndarray, n: int,
                      target: float = DEFAULT_TARGET) -> complex:
    direction = end - start

    def integrand(ts: np.ndarray) -> np.ndarray:
        points = start[None, :] + ts[:, None] * direction[None, :]
        return form.evaluate_batch(points, [np.broadcast_to(direction, points.shape)])

    return adaptive_simpson(integrand, 0.0, 1.0, n, target)


def path_residual(c: DeligneCochain, paths: int = 20, seed: int = 0,
                  quadrature_n: int = DEFAULT_SUBINTERVALS, cap: int = DEFAULT_NERVE_CAP) -> Residual:
    """Branch-free test of delta A^1 + s dlog h = 0 along straight paths.

    Along a path gamma inside one nerve component the condition
    integrates to exp(int_gamma delta A^1) * (h(gamma(1)) / h(gamma(0)))^s = 1.
    """
    G = c.groupoid
    result = Residual()
    if G.dim == 0:
        return result
    p = c.degree
    sign = (-1) ** (p + 1)
    h = c.function
    delta_a = form_delta(c.form(1), cap) if p >= 1 else FormCochain.zero(G, p, 1)
    keys = G.level_keys(p)
    if not keys:
        return result
    rng = np.random.default_rng(seed)
    for _ in range(paths):
        key = keys[int(rng.integers(len(keys)))]
        ends = _sample_points(G, key, rng, 2)
        integral = _segment_integral(delta_a.entry(key), ends[0], ends[1], quadrature_n)
        entry = h.entry(key)
        ratio = complex(entry.at(tuple(ends[1]))) / complex(entry.at(tuple(ends[0])))
        value = abs(np.exp(integral) * ratio**sign - 1.0)
        result.update(float(value), f"{G.key_label(key)} from {G.point_label(ends[0])} to {G.point_label(ends[1])}", False)
    return result


def coboundary_residuals(c: DeligneCochain, points: int = 100, seed: int = 0,
                         cap: int = DEFAULT_NERVE_CAP) -> List[Residual]:
    """Residuals of every component of D c: the function part first, then forms."""
    image = total_coboundary(c, cap)
    residuals = [function_residual(image.function, points, seed)]
    residuals.extend(
        form_residual(omega, points, seed + j) for j, omega in enumerate(image.forms, start=1)
    )
    return residuals


def verify_cocycle(c: DeligneCochain, tol: float = DEFAULT_TOLERANCE, paths: int = 20,
                   points: int = 100, seed: int = 0, quadrature_n: int = DEFAULT_SUBINTERVALS,
                   exact_tol: float = 0.0, cap: int = DEFAULT_NERVE_CAP) -> Report:
    """Check the cocycle conditions of line, gerbe or flat data.

    The function condition is exhaustive and exact on finite nerves and
    sampled elsewhere. Each form condition is checked pointwise on
    sampled (point, vectors) tuples; the degree-1 condition is also
    checked in exponentiated form along ``paths`` sampled paths.
    Failures are recorded in the report, never raised.
    """
    report = Report(command="verify", seed=seed)
    residuals = coboundary_residuals(c, points, seed, cap)
    names = c.condition_names
    for name, residual in zip(names, residuals):
        exact = residual.exact and name == names[0]
        report.add_check(
            name, residual.value, exact_tol if exact else tol, exact=exact,
            samples=residual.samples, witness=residual.witness,
        )
        logger.debug("%s: residual %.3e over %d samples", name, residual.value, residual.samples)
    if c.groupoid.dim > 0:
        along = path_residual(c, paths, seed, quadrature_n, cap)
        report.add_check(
            c.path_condition,
            along.value, tol, samples=along.samples, witness=along.witness,
        )
    report.values["kind"] = type(c).__name__
    report.values["degree"] = str(c.degree)
    report.values["groupoid"] = repr(c.groupoid)
    return report

