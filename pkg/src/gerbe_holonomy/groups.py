"""Finite groups given by multiplication tables.

This module provides the ``FiniteGroup`` type, the group specification
grammar used by scenarios and the CLI (``Z/n``, ``Z/nxZ/m``, ``S3``,
``D4``, ``Q8`` or an explicit table), and conjugacy data.

Products are written left to right: ``mul(g, h)`` is "g then h", which
is the convention of right actions ``x.(gh) = (x.g).h``.
"""

import itertools
import logging
import re
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .exceptions import GroupSpecError

logger = logging.getLogger(__name__)

MAX_TABLE_ORDER = 256

ElementRef = Union[int, str]


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group on the indices 0..order-1.

    Attributes:
        table: ``table[a][b]`` is the index of the product ``a*b``
        identity: index of the neutral element
        label: human readable name of the group
        element_labels: one label per element, used in reports
    """

    table: Tuple[Tuple[int, ...], ...]
    identity: int = 0
    label: str = "G"
    element_labels: Tuple[str, ...] = ()
    inverses: Tuple[int, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        if not self.element_labels:
            object.__setattr__(
                self, "element_labels", tuple(str(i) for i in range(len(self.table)))
            )
        if not self.inverses:
            inverses = []
            for a in range(len(self.table)):
                partner = [b for b in range(len(self.table)) if self.table[a][b] == self.identity]
                inverses.append(partner[0] if partner else -1)
            object.__setattr__(self, "inverses", tuple(inverses))

    @property
    def order(self) -> int:
        return len(self.table)

    @property
    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def product(self, elements: Sequence[int]) -> int:
        result = self.identity
        for g in elements:
            result = self.table[result][g]
        return result

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def conjugate(self, g: int, k: int) -> int:
        """k^-1 g k."""
        return self.mul(self.mul(self.inv(k), g), k)

    def power(self, g: int, n: int) -> int:
        base = g if n >= 0 else self.inv(g)
        result = self.identity
        for _ in range(abs(n)):
            result = self.mul(result, base)
        return result

    def element_order(self, g: int) -> int:
        n, current = 1, g
        while current != self.identity:
            current = self.mul(current, g)
            n += 1
        return n

    @cached_property
    def exponent(self) -> int:
        result = 1
        for g in self.elements:
            n = self.element_order(g)
            result = result * n // gcd(result, n)
        return result

    @cached_property
    def is_abelian(self) -> bool:
        array = np.asarray(self.table)
        return bool(np.array_equal(array, array.T))

    def subgroup_generated(self, generators: Sequence[int]) -> "Subgroup":
        members = {self.identity}
        frontier = [self.identity]
        while frontier:
            x = frontier.pop()
            for g in generators:
                y = self.mul(x, g)
                if y not in members:
                    members.add(y)
                    frontier.append(y)
        return Subgroup(tuple(sorted(members)))

    def label_of(self, g: int) -> str:
        return self.element_labels[g]

    def index(self, ref: ElementRef) -> int:
        """Resolve an element given by index or by label."""
        if isinstance(ref, (int, np.integer)) and not isinstance(ref, bool):
            if 0 <= int(ref) < self.order:
                return int(ref)
            raise GroupSpecError(f"element index {ref} out of range for {self.label}")
        text = str(ref).strip().replace(" ", "")
        for i, name in enumerate(self.element_labels):
            if name.replace(" ", "") == text:
                return i
        if text.isdigit() and int(text) < self.order:
            return int(text)
        raise GroupSpecError(f"unknown element '{ref}' of {self.label}")

    def axiom_violation(self) -> Optional[Tuple[str, Tuple[int, ...]]]:
        """First violated group axiom with its witness, or None."""
        n = self.order
        if n == 0:
            return ("empty", ())
        array = np.asarray(self.table, dtype=np.int32)
        if array.shape != (n, n) or array.min() < 0 or array.max() >= n:
            return ("closure", ())
        ids = np.arange(n)
        if not (np.array_equal(array[self.identity], ids) and np.array_equal(array[:, self.identity], ids)):
            bad = int(np.flatnonzero((array[self.identity] != ids) | (array[:, self.identity] != ids))[0])
            return ("identity", (bad,))
        for a, b in enumerate(self.inverses):
            if b < 0 or self.table[b][a] != self.identity:
                return ("inverse", (a,))
        if n <= MAX_TABLE_ORDER:
            left = array[array, :]
            right = array[:, array]
            bad = np.argwhere(left != right)
            if len(bad):
                return ("associativity", tuple(int(v) for v in bad[0]))
        return None

    def validate(self) -> "FiniteGroup":
        violation = self.axiom_violation()
        if violation is not None:
            law, witness = violation
            raise GroupSpecError(f"{self.label}: {law} law fails at {witness}")
        return self


@dataclass(frozen=True)
class Subgroup:
    """A subgroup recorded by its sorted element indices."""

    elements: Tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g: object) -> bool:
        return g in self.elements


@dataclass(frozen=True)
class ConjugacyData:
    classes: Tuple[Tuple[int, ...], ...]
    centralizers: Tuple[Subgroup, ...]

    def class_of(self, g: int) -> int:
        for position, members in enumerate(self.classes):
            if g in members:
                return position
        raise ValueError(g)


def conjugacy_data(group: FiniteGroup) -> ConjugacyData:
    """Conjugacy classes ordered by smallest member, with centralizers."""
    seen: set = set()
    classes: List[Tuple[int, ...]] = []
    centralizers: List[Subgroup] = []
    for g in group.elements:
        if g in seen:
            continue
        members = tuple(sorted({group.conjugate(g, k) for k in group.elements}))
        seen.update(members)
        classes.append(members)
        centralizers.append(
            Subgroup(tuple(k for k in group.elements if group.mul(g, k) == group.mul(k, g)))
        )
    return ConjugacyData(tuple(classes), tuple(centralizers))


def cyclic_group(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupSpecError(f"cyclic order must be positive, got {n}")
    table = tuple(tuple((a + b) % n for b in range(n)) for a in range(n))
    return FiniteGroup(table, 0, f"Z/{n}")


def direct_product(*factors: FiniteGroup) -> FiniteGroup:
    """Product group; index is mixed radix with the first factor most significant."""
    if len(factors) == 1:
        return factors[0]
    tuples = list(itertools.product(*(f.elements for f in factors)))
    position = {t: i for i, t in enumerate(tuples)}
    table = tuple(
        tuple(
            position[tuple(f.mul(x, y) for f, x, y in zip(factors, a, b))]
            for b in tuples
        )
        for a in tuples
    )
    labels = tuple(
        "(" + ",".join(f.label_of(x) for f, x in zip(factors, t)) + ")" for t in tuples
    )
    identity = position[tuple(f.identity for f in factors)]
    return FiniteGroup(table, identity, "x".join(f.label for f in factors), labels)


def permutation_group(generators: Sequence[Sequence[int]], label: str) -> FiniteGroup:
    """Closure of the generating permutations, sorted, identity first."""
    degree = len(generators[0])
    identity = tuple(range(degree))
    found = {identity}
    frontier = [identity]
    while frontier:
        current = frontier.pop()
        for gen in generators:
            # right action: apply current, then gen
            nxt = tuple(gen[current[x]] for x in range(degree))
            if nxt not in found:
                found.add(nxt)
                frontier.append(nxt)
    perms = sorted(found)
    position = {p: i for i, p in enumerate(perms)}
    table = tuple(
        tuple(position[tuple(h[g[x]] for x in range(degree))] for h in perms) for g in perms
    )
    labels = tuple(_cycle_notation(p) for p in perms)
    return FiniteGroup(table, position[identity], label, labels)


def _cycle_notation(perm: Tuple[int, ...]) -> str:
    seen, cycles = set(), []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cycle, x = [], start
        while x not in seen:
            seen.add(x)
            cycle.append(str(x))
            x = perm[x]
        cycles.append("(" + " ".join(cycle) + ")")
    return "".join(cycles) or "()"


def quaternion_group() -> FiniteGroup:
    units = ["1", "i", "j", "k"]
    # unit products as (sign, unit)
    rule: Dict[Tuple[int, int], Tuple[int, int]] = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }
    elements = [(s, u) for s in (1, -1) for u in range(4)]
    position = {e: i for i, e in enumerate(elements)}
    table = []
    for s1, u1 in elements:
        row = []
        for s2, u2 in elements:
            s, u = rule[(u1, u2)]
            row.append(position[(s1 * s2 * s, u)])
        table.append(tuple(row))
    labels = tuple(("" if s > 0 else "-") + units[u] for s, u in elements)
    return FiniteGroup(tuple(table), 0, "Q8", labels)


_NAMED = {
    "S3": lambda: permutation_group([(1, 0, 2), (1, 2, 0)], "S3"),
    "D4": lambda: permutation_group([(1, 2, 3, 0), (0, 3, 2, 1)], "D4"),
    "Q8": quaternion_group,
}

_CYCLIC = re.compile(r"^Z/(\d+)$")


def parse_group(spec: Union[str, Dict]) -> FiniteGroup:
    """Build a group from a specification.

    Accepts ``"Z/n"``, products such as ``"Z/2xZ/4"`` (``×`` also allowed),
    the named groups ``S3``, ``D4``, ``Q8``, ``"1"`` for the trivial group,
    or a mapping ``{"label": ..., "table": [[...]], "elements": [...]}``.
    """
    if isinstance(spec, dict):
        try:
            table = tuple(tuple(int(v) for v in row) for row in spec["table"])
        except (KeyError, TypeError, ValueError) as e:
            raise GroupSpecError(f"explicit group table is malformed: {e}") from e
        labels = tuple(str(v) for v in spec.get("elements", ()))
        if labels and len(labels) != len(table):
            raise GroupSpecError("element label count differs from table size")
        group = FiniteGroup(table, int(spec.get("identity", 0)), str(spec.get("label", "G")), labels)
        if len(table) > MAX_TABLE_ORDER:
            raise GroupSpecError(f"explicit tables are limited to order {MAX_TABLE_ORDER}")
        return group

    text = str(spec).strip().replace(" ", "").replace("×", "x")
    if text in ("1", "trivial", "Z/1"):
        return cyclic_group(1)
    if text in _NAMED:
        return _NAMED[text]()
    factors = []
    for part in text.split("x"):
        match = _CYCLIC.match(part)
        if match is None:
            raise GroupSpecError(f"cannot read group specification '{spec}'")
        factors.append(cyclic_group(int(match.group(1))))
    group = direct_product(*factors)
    logger.debug("parsed group %s of order %d", group.label, group.order)
    return group
