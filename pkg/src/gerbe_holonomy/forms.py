"""Differential forms with symbolic coefficients and affine maps.

A ``PForm`` stores coefficients on strictly increasing 1-based
multi-indices, e.g. ``{(1, 2): c}`` for ``c dx1^dx2``. Exterior
derivative and pullback along integer affine maps are exact; numeric
evaluation is vectorised over batches of points.
"""

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Mapping, Sequence, Tuple

import numpy as np
import sympy

from .exceptions import ArityMismatch, DimensionMismatch
from .expressions import Expr, compile_expr, coordinate, coordinates, diff_expr

MultiIndex = Tuple[int, ...]


def _permutation_sign(order: Sequence[int]) -> int:
    sign = 1
    items = list(order)
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if items[i] > items[j]:
                sign = -sign
    return sign


def _det(rows: Sequence[Sequence]) -> object:
    """Leibniz determinant; exact for exact entries and alternating by construction."""
    size = len(rows)
    if size == 0:
        return 1
    total = 0
    for perm in itertools.permutations(range(size)):
        term = _permutation_sign(perm)
        for r, c in enumerate(perm):
            term = term * rows[r][c]
        total = total + term
    return total


@dataclass(frozen=True)
class AffineMap:
    """x -> R x + t, R an integer matrix (reduced mod 1 on tori by the caller)."""

    matrix: Tuple[Tuple[int, ...], ...]
    translation: Tuple[Fraction, ...]

    @classmethod
    def identity(cls, dim: int) -> "AffineMap":
        return cls(
            tuple(tuple(int(i == j) for j in range(dim)) for i in range(dim)),
            tuple(Fraction(0) for _ in range(dim)),
        )

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def apply(self, point: Sequence) -> Tuple:
        return tuple(
            sum((self.matrix[i][j] * point[j] for j in range(self.dim)), start=0) + self.translation[i]
            for i in range(self.dim)
        )

    def apply_array(self, points: np.ndarray) -> np.ndarray:
        matrix = np.asarray(self.matrix, dtype=float)
        shift = np.asarray([float(v) for v in self.translation])
        return np.asarray(points, dtype=float) @ matrix.T + shift

    def linear(self, vector: Sequence) -> Tuple:
        return tuple(
            sum((self.matrix[i][j] * vector[j] for j in range(self.dim)), start=0)
            for i in range(self.dim)
        )

    def linear_array(self, vectors: np.ndarray) -> np.ndarray:
        return np.asarray(vectors) @ np.asarray(self.matrix, dtype=float).T

    def then(self, second: "AffineMap") -> "AffineMap":
        """second o self, i.e. (R2 R1, R2 t1 + t2)."""
        if second.dim != self.dim:
            raise DimensionMismatch(f"cannot compose maps of dimensions {self.dim} and {second.dim}")
        matrix = tuple(
            tuple(sum(second.matrix[i][k] * self.matrix[k][j] for k in range(self.dim)) for j in range(self.dim))
            for i in range(self.dim)
        )
        moved = second.linear(self.translation)
        return AffineMap(matrix, tuple(Fraction(m) + s for m, s in zip(moved, second.translation)))

    def determinant(self) -> int:
        return int(_det(self.matrix))

    def substitution(self) -> Dict[sympy.Symbol, Expr]:
        xs = coordinates(self.dim)
        return {
            xs[i]: sum((self.matrix[i][j] * xs[j] for j in range(self.dim)), start=sympy.Integer(0))
            + sympy.Rational(self.translation[i].numerator, self.translation[i].denominator)
            for i in range(self.dim)
        }

    def pullback_expr(self, expr: Expr) -> Expr:
        return sympy.sympify(expr).xreplace(self.substitution())


@dataclass(frozen=True, eq=False)
class PForm:
    """A p-form on a d-dimensional chart."""

    degree: int
    dim: int
    coefficients: Mapping[MultiIndex, Expr] = field(default_factory=dict)

    def __post_init__(self) -> None:
        cleaned: Dict[MultiIndex, Expr] = {}
        if self.degree <= self.dim:
            for index, value in self.coefficients.items():
                index = tuple(int(i) for i in index)
                if len(index) != self.degree or any(a >= b for a, b in zip(index, index[1:])):
                    raise ArityMismatch(f"multi-index {index} is not strictly increasing of length {self.degree}")
                if any(i < 1 or i > self.dim for i in index):
                    raise DimensionMismatch(f"multi-index {index} outside dimension {self.dim}")
                value = sympy.sympify(value)
                if value != 0:
                    cleaned[index] = value
        object.__setattr__(self, "coefficients", cleaned)

    @classmethod
    def zero(cls, degree: int, dim: int) -> "PForm":
        return cls(degree, dim, {})

    @classmethod
    def function(cls, expr: Expr, dim: int) -> "PForm":
        return cls(0, dim, {(): expr})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PForm):
            return NotImplemented
        return (self.degree, self.dim) == (other.degree, other.dim) and (self - other).is_zero()

    def _combine(self, other: "PForm", sign: int) -> "PForm":
        if (self.degree, self.dim) != (other.degree, other.dim):
            raise DimensionMismatch("forms of different degree or dimension")
        result: Dict[MultiIndex, Expr] = dict(self.coefficients)
        for index, value in other.coefficients.items():
            result[index] = result.get(index, sympy.Integer(0)) + sign * value
        return PForm(self.degree, self.dim, result)

    def __add__(self, other: "PForm") -> "PForm":
        return self._combine(other, 1)

    def __sub__(self, other: "PForm") -> "PForm":
        return self._combine(other, -1)

    def __neg__(self) -> "PForm":
        return self.scale(-1)

    def scale(self, factor) -> "PForm":
        return PForm(self.degree, self.dim, {i: factor * c for i, c in self.coefficients.items()})

    def is_zero(self) -> bool:
        """Symbolic zero test after expansion and light simplification."""
        return all(sympy.simplify(c) == 0 for c in self.coefficients.values())

    def map_coefficients(self, function) -> "PForm":
        return PForm(self.degree, self.dim, {i: function(c) for i, c in self.coefficients.items()})

    def evaluate_batch(self, points: np.ndarray, vectors: Sequence[np.ndarray]) -> np.ndarray:
        """Pairing at N points with p batches of N tangent vectors."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if len(vectors) != self.degree:
            raise ArityMismatch(f"{self.degree}-form evaluated on {len(vectors)} vectors")
        total = np.zeros(points.shape[0], dtype=complex)
        columns = [np.atleast_2d(np.asarray(v)) for v in vectors]
        for index, coefficient in self.coefficients.items():
            values = compile_expr(coefficient, self.dim)(points)
            minors = _det([[columns[a][:, i - 1] for i in index] for a in range(self.degree)])
            total = total + values * minors
        return total

    def __str__(self) -> str:
        if not self.coefficients:
            return "0"
        parts = []
        for index, coefficient in sorted(self.coefficients.items()):
            basis = "^".join(f"dx{i}" for i in index)
            parts.append(f"({coefficient})" + (f"*{basis}" if basis else ""))
        return " + ".join(parts)


def exterior_d(form: PForm) -> PForm:
    """Exact exterior derivative; degree above the dimension gives zero."""
    result: Dict[MultiIndex, Expr] = {}
    if form.degree + 1 > form.dim:
        return PForm.zero(form.degree + 1, form.dim)
    for index, coefficient in form.coefficients.items():
        for j in range(1, form.dim + 1):
            if j in index:
                continue
            derivative = diff_expr(coefficient, j)
            if derivative == 0:
                continue
            sign = (-1) ** sum(1 for i in index if i < j)
            target = tuple(sorted(index + (j,)))
            result[target] = result.get(target, sympy.Integer(0)) + sign * derivative
    return PForm(form.degree + 1, form.dim, result)


def differential(expr: Expr, dim: int) -> PForm:
    return exterior_d(PForm.function(expr, dim))


def dlog(expr: Expr, dim: int) -> PForm:
    """(d e)/e as a 1-form; no logarithm branch is involved."""
    expr = sympy.sympify(expr)
    return PForm(1, dim, {(j,): sympy.simplify(diff_expr(expr, j) / expr) for j in range(1, dim + 1)})


def eval_form(form: PForm, point: Sequence, vectors: Sequence[Sequence]) -> complex:
    """Alternating multilinear pairing at one point."""
    if len(vectors) != form.degree:
        raise ArityMismatch(f"{form.degree}-form evaluated on {len(vectors)} vectors")
    substitution = {coordinate(i + 1): sympy.sympify(v) for i, v in enumerate(point)}
    total = sympy.Integer(0)
    for index, coefficient in form.coefficients.items():
        minor = _det([[sympy.sympify(vectors[a][i - 1]) for i in index] for a in range(form.degree)])
        total = total + coefficient.xreplace(substitution) * minor
    return complex(sympy.N(total, 17))


def pullback_form(form: PForm, mapping: AffineMap) -> PForm:
    """f*w: coefficients precomposed with f, differentials through minors of R."""
    if mapping.dim != form.dim:
        raise DimensionMismatch(f"map of dimension {mapping.dim} applied to a form of dimension {form.dim}")
    result: Dict[MultiIndex, Expr] = {}
    targets = list(itertools.combinations(range(1, form.dim + 1), form.degree))
    for index, coefficient in form.coefficients.items():
        moved = mapping.pullback_expr(coefficient)
        for target in targets:
            minor = _det([[mapping.matrix[i - 1][j - 1] for j in target] for i in index])
            if minor != 0:
                result[target] = result.get(target, sympy.Integer(0)) + minor * moved
    return PForm(form.degree, form.dim, result)

