"""Finite group cohomology with coefficients in Q/Z.

This module provides:

- ``h1_finite_group`` and ``h2_finite_group``: characters and the Schur
  multiplier H^2(G, C*) = H^2(G, Q/Z), computed from the normalized bar
  complex by integer Smith normal form
- ``TorsionCocycle``: a 2-cocycle G x G -> C* with exact rational angles
- class coordinates, the exact coboundary test and normalization
- ``cyclic_three_cocycle`` and the alternating bicharacter of an
  abelian torsion class

Cochains are normalized: they live on tuples of non-identity elements.
Values are turns in Q/Z; exp(2 pi i turns) is the C* value.
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .deligne import CochainFunction, FlatNData
from .exceptions import GroupSpecError, GroupTooLarge
from .groupoids import ActionGroupoid
from .groups import FiniteGroup
from .phases import Phase
from .smith import SmithForm, row_basis, smith_normal_form

logger = logging.getLogger(__name__)

DEFAULT_GROUP_CAP = 64

Turns = Tuple[Tuple[Fraction, ...], ...]


def _nontrivial(group: FiniteGroup) -> List[int]:
    return [g for g in group.elements if g != group.identity]


def _positions(group: FiniteGroup, k: int) -> Dict[Tuple[int, ...], int]:
    return {t: i for i, t in enumerate(itertools.product(_nontrivial(group), repeat=k))}


def bar_coboundary_rows(group: FiniteGroup, k: int) -> List[Dict[int, int]]:
    """Sparse rows of d: C^k -> C^(k+1) on normalized cochains.

    (d e)(g_1..g_{k+1}) = e(g_2..) + sum_i (-1)^i e(..g_i g_{i+1}..)
    + (-1)^(k+1) e(g_1..g_k); faces with an identity entry vanish.
    """
    columns = _positions(group, k)
    rows = []
    for key in itertools.product(_nontrivial(group), repeat=k + 1):
        row: Dict[int, int] = {}
        faces = [(key[1:], 1)]
        for i in range(1, k + 1):
            merged = group.mul(key[i - 1], key[i])
            faces.append((key[: i - 1] + (merged,) + key[i + 1:], (-1) ** i))
        faces.append((key[:-1], (-1) ** (k + 1)))
        for face, sign in faces:
            if group.identity in face:
                continue
            column = columns[face]
            row[column] = row.get(column, 0) + sign
        rows.append(row)
    return rows


def _check_order(group: FiniteGroup, cap: int) -> None:
    if group.order > cap:
        raise GroupTooLarge(group.order, cap)


def _smith_of_coboundary(group: FiniteGroup, k: int) -> SmithForm:
    width = len(_nontrivial(group)) ** k
    basis = row_basis(bar_coboundary_rows(group, k), width)
    if basis.shape[0] == 0:
        return SmithForm([], None, _identity(width), 0, _identity(width))
    return smith_normal_form(basis, track_rows=False)


def _identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


@dataclass(frozen=True)
class TorsionCocycle:
    """A C*-valued 2-cocycle on G stored as exact turns."""

    group: FiniteGroup
    turns: Turns
    shift: Fraction = Fraction(0)

    @classmethod
    def trivial(cls, group: FiniteGroup) -> "TorsionCocycle":
        zero = tuple(tuple(Fraction(0) for _ in group.elements) for _ in group.elements)
        return cls(group, zero)

    @classmethod
    def from_function(cls, group: FiniteGroup, function) -> "TorsionCocycle":
        """Build from a callable (g, h) -> turns (Fraction, int or Phase)."""
        rows = []
        for g in group.elements:
            row = []
            for h in group.elements:
                value = function(g, h)
                row.append(value.turns if isinstance(value, Phase) else Fraction(value) % 1)
            rows.append(tuple(row))
        return cls(group, tuple(rows))

    def value(self, g: int, h: int) -> Phase:
        return Phase(self.turns[g][h])

    def __call__(self, g: int, h: int) -> Phase:
        return self.value(g, h)

    def defect(self) -> Tuple[Fraction, Optional[Tuple[int, int, int]]]:
        """Exhaustive delta e: the first nonzero value (in turns) and its triple."""
        G = self.group
        t = self.turns
        for a, b, c in itertools.product(G.elements, repeat=3):
            value = (t[b][c] - t[G.mul(a, b)][c] + t[a][G.mul(b, c)] - t[a][b]) % 1
            if value != 0:
                return value, (a, b, c)
        return Fraction(0), None

    @property
    def is_cocycle(self) -> bool:
        return self.defect()[1] is None

    @property
    def is_normalized(self) -> bool:
        e = self.group.identity
        return all(self.turns[e][g] == 0 and self.turns[g][e] == 0 for g in self.group.elements)

    def vector(self) -> List[Fraction]:
        """Turns on normalized positions, in bar-complex column order."""
        return [self.turns[g][h] for g, h in itertools.product(_nontrivial(self.group), repeat=2)]

    def product(self, other: "TorsionCocycle") -> "TorsionCocycle":
        return TorsionCocycle(
            self.group,
            tuple(tuple((a + b) % 1 for a, b in zip(r, s)) for r, s in zip(self.turns, other.turns)),
        )

    def times_coboundary(self, c: Sequence[Fraction]) -> "TorsionCocycle":
        """e * delta c for a 1-cochain c given as turns per element."""
        G = self.group
        return TorsionCocycle.from_function(
            G, lambda g, h: self.turns[g][h] + c[h] - c[G.mul(g, h)] + c[g]
        )

    def as_cochain(self, groupoid: ActionGroupoid) -> CochainFunction:
        """h(x, g, k) = e(g, k) on the nerve of an action groupoid of this group."""
        if groupoid.group.table != self.group.table:
            raise GroupSpecError(f"cocycle on {self.group.label} used over {groupoid!r}")
        entries = {
            (g, h): self.value(g, h)
            for g, h in itertools.product(self.group.elements, repeat=2)
            if self.turns[g][h] != 0
        }
        return CochainFunction(groupoid, 2, entries)

    def table_rows(self) -> List[List[str]]:
        G = self.group
        return [[G.label_of(g)] + [str(self.value(g, h)) for h in G.elements] for g in G.elements]


def normalize_cocycle(epsilon: TorsionCocycle) -> TorsionCocycle:
    """Shift by the constant coboundary so e(e, .) = e(., e) = 1.

    For a cocycle e(e, g) = e(g, e) = e(e, e); the shift is recorded.
    """
    e = epsilon.group.identity
    offset = epsilon.turns[e][e]
    if offset == 0:
        return epsilon
    turns = tuple(tuple((v - offset) % 1 for v in row) for row in epsilon.turns)
    return TorsionCocycle(epsilon.group, turns, (epsilon.shift + offset) % 1)


@dataclass
class SchurData:
    """H^2(G, C*) with one representative cocycle per invariant factor."""

    group: FiniteGroup
    invariant_factors: List[int]
    representatives: List[TorsionCocycle]
    diagonal: List[int] = field(default_factory=list, repr=False)
    inverse_transform: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def order(self) -> int:
        result = 1
        for d in self.invariant_factors:
            result *= d
        return result

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def describe(self) -> str:
        if self.is_trivial:
            return "0"
        return " + ".join(f"Z/{d}" for d in self.invariant_factors)

    def class_of(self, epsilon: TorsionCocycle) -> Tuple[int, ...]:
        """Coordinates of a cocycle's class in the product of Z/d_i."""
        return _class_coordinates(self, normalize_cocycle(epsilon).vector())

    def is_coboundary(self, epsilon: TorsionCocycle) -> bool:
        return all(v == 0 for v in self.class_of(epsilon))

    def cocycle_for(self, class_id: Sequence[int]) -> TorsionCocycle:
        """Product of representatives with the given exponents."""
        if len(class_id) != len(self.representatives):
            raise GroupSpecError(
                f"{self.group.label} has {len(self.representatives)} torsion generators, "
                f"got {len(class_id)} coordinates"
            )
        result = TorsionCocycle.trivial(self.group)
        for exponent, rep, d in zip(class_id, self.representatives, self.invariant_factors):
            for _ in range(int(exponent) % d):
                result = result.product(rep)
        return result


def _class_coordinates(schur: SchurData, vector: Sequence[Fraction]) -> Tuple[int, ...]:
    W = schur.inverse_transform
    coordinates = []
    for i, d in enumerate(schur.diagonal):
        y = sum((int(W[i][j]) * vector[j] for j in range(len(vector))), start=Fraction(0))
        if d > 1:
            coordinates.append(int((y * d) % d))
    return tuple(coordinates)


def h2_finite_group(group: FiniteGroup, cap: int = DEFAULT_GROUP_CAP) -> SchurData:
    """Schur multiplier H^2(G, C*) from the normalized bar complex.

    With U d_2 V = D, a Q/Z cochain e = V y is a cocycle exactly when
    d_i y_i is integral for the pivots i < r; the coboundaries are the
    free coordinates, so H^2 is the sum of Z/d_i over d_i > 1 and
    V e_i / d_i represents the i-th generator.

    Raises:
        GroupTooLarge: the order exceeds ``cap``
    """
    _check_order(group, cap)
    form = _smith_of_coboundary(group, 2)
    keys = list(itertools.product(_nontrivial(group), repeat=2))
    V = form.V
    representatives = []
    factors = []
    for i, d in enumerate(form.diagonal):
        if d <= 1:
            continue
        values = {key: Fraction(int(V[j][i]), d) % 1 for j, key in enumerate(keys)}
        rep = TorsionCocycle.from_function(group, lambda g, h: values.get((g, h), Fraction(0)))
        representatives.append(rep)
        factors.append(d)
    logger.debug("H^2(%s) has invariant factors %s", group.label, factors)
    return SchurData(group, factors, representatives, list(form.diagonal), form.V_inverse)


@dataclass
class CharacterData:
    """Hom(G, Q/Z) with one generating character per invariant factor."""

    group: FiniteGroup
    invariant_factors: List[int]
    characters: List[Tuple[Fraction, ...]]


def h1_finite_group(group: FiniteGroup, cap: int = DEFAULT_GROUP_CAP) -> CharacterData:
    """Characters G -> Q/Z through the Smith form of d_1.

    Raises:
        GroupTooLarge: the order exceeds ``cap``
    """
    _check_order(group, cap)
    form = _smith_of_coboundary(group, 1)
    others = _nontrivial(group)
    factors, characters = [], []
    for i, d in enumerate(form.diagonal):
        if d <= 1:
            continue
        values = {g: Fraction(int(form.V[j][i]), d) % 1 for j, g in enumerate(others)}
        characters.append(tuple(values.get(g, Fraction(0)) for g in group.elements))
        factors.append(d)
    return CharacterData(group, factors, characters)


def cyclic_three_cocycle(n: int, p: int = 1) -> Dict[Tuple[int, int, int], Phase]:
    """w(a, b, c) = exp(2 pi i p a (b + c - [b + c]_n) / n^2) on Z/n.

    Keys use the residues 0..n-1 (the element indices of ``Z/n``);
    entries equal to 1 are omitted.
    """
    if n < 1:
        raise GroupSpecError(f"cyclic order must be positive, got {n}")
    table = {}
    for a, b, c in itertools.product(range(n), repeat=3):
        carry = b + c - (b + c) % n
        turns = Fraction(p * a * carry, n * n)
        if turns % 1:
            table[(a, b, c)] = Phase(turns)
    return table


def flat_three_cocycle(groupoid: ActionGroupoid, p: int = 1) -> FlatNData:
    """The cyclic 3-cocycle of ``cyclic_three_cocycle`` as flat data over [M/Z/n]."""
    n = groupoid.group.order
    if groupoid.group.table != tuple(tuple((a + b) % n for b in range(n)) for a in range(n)):
        raise GroupSpecError(f"{groupoid.group.label} is not presented as Z/{n}")
    return FlatNData(CochainFunction(groupoid, 3, dict(cyclic_three_cocycle(n, p))))


def bicharacter_table(epsilon: TorsionCocycle) -> Tuple[List[List[Phase]], Optional[str]]:
    """b(g, k) = e(g, k) / e(k, g) for abelian G, with the first bilinearity failure.

    Raises:
        GroupSpecError: the group is not abelian
    """
    G = epsilon.group
    if not G.is_abelian:
        raise GroupSpecError(f"{G.label} is not abelian")
    table = [[epsilon(g, k) / epsilon(k, g) for k in G.elements] for g in G.elements]
    for g, h, k in itertools.product(G.elements, repeat=3):
        if table[G.mul(g, h)][k] != table[g][k] * table[h][k]:
            return table, f"first slot at ({G.label_of(g)}, {G.label_of(h)}; {G.label_of(k)})"
        if table[k][G.mul(g, h)] != table[k][g] * table[k][h]:
            return table, f"second slot at ({G.label_of(k)}; {G.label_of(g)}, {G.label_of(h)})"
    for g in G.elements:
        if not table[g][g].is_one():
            return table, f"not alternating at {G.label_of(g)}"
    return table, None


def abelian_multiplier(orders: Sequence[int]) -> List[int]:
    """Invariant factors of H^2 of a product of cyclic groups, sum over i < j of Z/gcd.

    Used as an independent oracle for the Smith form computation.
    """
    cyclic = []
    for i, j in itertools.combinations(range(len(orders)), 2):
        d = gcd(orders[i], orders[j])
        if d > 1:
            cyclic.append(d)
    return _invariant_factors(cyclic)


def _invariant_factors(cyclic: Sequence[int]) -> List[int]:
    """Invariant factors d_1 | d_2 | ... of a sum of cyclic groups."""
    primes: Dict[int, List[int]] = {}
    for n in cyclic:
        m, p = n, 2
        while m > 1:
            if m % p == 0:
                power = 1
                while m % p == 0:
                    m //= p
                    power *= p
                primes.setdefault(p, []).append(power)
            p += 1
    length = max((len(v) for v in primes.values()), default=0)
    factors = [1] * length
    for powers in primes.values():
        powers = sorted(powers)
        for k, q in enumerate(powers):
            factors[length - len(powers) + k] *= q
    return [f for f in factors if f > 1]


def brute_force_h2_order(group: FiniteGroup, m: int) -> int:
    """|H^2(G, Q/Z)| by enumerating normalized (1/m)Z/Z-valued cochains.

    Counts |H^2(G, Z/m)| as cocycles over coboundaries, then divides by
    |Hom(G, Z/m) / m Hom(G, Q/Z)|, which is |Hom(G, Z/m)| when m kills
    every character (m a multiple of the exponent of G). Only usable for
    tiny groups.
    """
    others = _nontrivial(group)
    pairs = list(itertools.product(others, repeat=2))
    index = {key: i for i, key in enumerate(pairs)}
    e = group.identity

    def lookup(values, g, h):
        if g == e or h == e:
            return 0
        return values[index[(g, h)]]

    cocycles = 0
    for values in itertools.product(range(m), repeat=len(pairs)):
        good = True
        for a, b, c in itertools.product(others, repeat=3):
            total = (lookup(values, b, c) - lookup(values, group.mul(a, b), c)
                     + lookup(values, a, group.mul(b, c)) - lookup(values, a, b))
            if total % m:
                good = False
                break
        cocycles += good
    coboundaries = set()
    homs = 0
    for c in itertools.product(range(m), repeat=len(others)):
        cc = dict(zip(others, c))
        cc[e] = 0
        image = tuple((cc[h] - cc[group.mul(g, h)] + cc[g]) % m for g, h in pairs)
        coboundaries.add(image)
        homs += all(v == 0 for v in image)
    return cocycles // len(coboundaries) // homs
