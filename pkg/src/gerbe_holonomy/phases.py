"""Exact unit-circle values and mixed scalar arithmetic.

Cochain values are either exact phases ``exp(2*pi*i*r)`` with rational
``r``, stored as ``Phase``, or ordinary complex doubles. Arithmetic
between two phases stays exact; anything mixed is promoted to complex.
"""

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union


@dataclass(frozen=True, order=True)
class Phase:
    """The unit complex number exp(2*pi*i*turns), turns kept in [0, 1)."""

    turns: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "turns", Fraction(self.turns) % 1)

    @classmethod
    def one(cls) -> "Phase":
        return cls(Fraction(0))

    @classmethod
    def root(cls, numerator: int, denominator: int) -> "Phase":
        return cls(Fraction(numerator, denominator))

    @classmethod
    def sign(cls, negative: bool) -> "Phase":
        return cls(Fraction(1, 2) if negative else Fraction(0))

    def __mul__(self, other: "Value") -> "Value":
        if isinstance(other, Phase):
            return Phase(self.turns + other.turns)
        return complex(self) * other

    __rmul__ = __mul__

    def __truediv__(self, other: "Value") -> "Value":
        if isinstance(other, Phase):
            return Phase(self.turns - other.turns)
        return complex(self) / other

    def __rtruediv__(self, other: "Value") -> "Value":
        return other * self.inverse()

    def __pow__(self, exponent: int) -> "Phase":
        return Phase(self.turns * exponent)

    def inverse(self) -> "Phase":
        return Phase(-self.turns)

    def is_one(self) -> bool:
        return self.turns == 0

    def __complex__(self) -> complex:
        # Quarter turns are returned exactly so that signs print cleanly.
        quarter = self.turns * 4
        if quarter.denominator == 1:
            return (1 + 0j, 1j, -1 + 0j, -1j)[int(quarter)]
        return cmath.exp(2j * math.pi * float(self.turns))

    def __str__(self) -> str:
        if self.turns == 0:
            return "1"
        if self.turns == Fraction(1, 2):
            return "-1"
        return f"exp(2*pi*i*{self.turns})"


Value = Union[Phase, complex]


def as_complex(value: Value) -> complex:
    return complex(value)


def is_exact(value: Value) -> bool:
    return isinstance(value, Phase)


def multiply(values: Iterable[Value]) -> Value:
    """Product of values; exact when every factor is a Phase."""
    result: Value = Phase.one()
    for value in values:
        result = result * value
    return result


def inverse(value: Value) -> Value:
    if isinstance(value, Phase):
        return value.inverse()
    return 1 / complex(value)


def power(value: Value, exponent: int) -> Value:
    if isinstance(value, Phase):
        return value**exponent
    return complex(value) ** exponent


def distance_from_one(value: Value) -> float:
    """|value - 1|, exactly 0.0 for the exact unit phase."""
    if isinstance(value, Phase):
        return 0.0 if value.is_one() else abs(complex(value) - 1)
    return abs(complex(value) - 1)


def distance(a: Value, b: Value) -> float:
    if isinstance(a, Phase) and isinstance(b, Phase):
        return distance_from_one(a / b)
    return abs(complex(a) - complex(b))


def format_value(value: Value, digits: int = 12) -> str:
    """Deterministic text form used in reports."""
    if isinstance(value, Phase):
        return f"phase({value.turns})"
    z = complex(value)
    return f"{z.real:.{digits}g}{z.imag:+.{digits}g}i"
