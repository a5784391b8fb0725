"""Exception hierarchy for gerbe-holonomy.

Every error raised by the library derives from ``GerbeHolonomyError``.
Input problems (malformed scenarios, expressions, groups, loops) derive
from ``InputError``; numerical breakdowns derive from ``NumericalError``.
Verification failures are never raised: they are recorded in reports.
"""

from typing import Any, Optional, Sequence


class GerbeHolonomyError(Exception):
    """Base class for all library errors."""

    exit_code = 2


class InputError(GerbeHolonomyError):
    """Invalid user input or malformed model data."""


class NumericalError(GerbeHolonomyError):
    """A numerical procedure could not produce a trustworthy value."""


class ExprSyntaxError(InputError):
    """Expression text could not be parsed."""

    def __init__(self, message: str, offset: int, text: str = ""):
        self.offset = offset
        self.text = text
        super().__init__(f"{message} at offset {offset}")


class UnknownSymbol(InputError):
    def __init__(self, name: str, offset: int):
        self.name = name
        self.offset = offset
        super().__init__(f"unknown symbol '{name}' at offset {offset}")


class ScenarioError(InputError):
    """Scenario validation failure, reported with its section path."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


class GroupSpecError(InputError):
    pass


class ActionNotCompatible(InputError):
    def __init__(self, message: str, pair: Optional[Sequence[int]] = None, point: Any = None):
        self.pair = tuple(pair) if pair is not None else None
        self.point = point
        super().__init__(message)


class NonInvertibleLinearPart(InputError):
    def __init__(self, element: int, determinant: int):
        self.element = element
        self.determinant = determinant
        super().__init__(
            f"linear part of element {element} has determinant {determinant}, "
            "not invertible over the integers"
        )


class DimensionMismatch(InputError):
    pass


class NotComposable(InputError):
    def __init__(self, left_end: Any, right_start: Any):
        self.left_end = left_end
        self.right_start = right_start
        super().__init__(
            f"arrows not composable: target {left_end!r} differs from source {right_start!r}"
        )


class InfiniteNerve(InputError):
    pass


class OutsideChart(InputError):
    def __init__(self, point, chart: str):
        self.point = point
        self.chart = chart
        super().__init__(f"point {point!r} is not in chart {chart}")


class LevelTooLarge(InputError):
    def __init__(self, level: int, size: int, cap: int):
        self.level = level
        self.size = size
        self.cap = cap
        super().__init__(f"nerve level {level} has {size} tuples, above the cap {cap}")


class LevelUnsupported(InputError):
    pass


class ArityMismatch(InputError):
    pass


class PossibleZero(InputError):
    def __init__(self, expression: str):
        self.expression = expression
        super().__init__(f"cannot certify that '{expression}' is nonvanishing")


class BadPartition(InputError):
    pass


class EndpointMismatch(InputError):
    def __init__(self, index: int, distance: float):
        self.index = index
        self.distance = distance
        super().__init__(
            f"endpoint mismatch at junction {index}: distance {distance:.3e}"
        )


class DuplicateBreakpoint(InputError):
    pass


class PartitionMismatch(InputError):
    pass


class GroupTooLarge(InputError):
    def __init__(self, order: int, cap: int):
        self.order = order
        self.cap = cap
        super().__init__(f"group of order {order} exceeds the cap {cap}")


class QuadratureDiverged(NumericalError):
    pass


class StepTooLarge(NumericalError):
    def __init__(self, ratio: complex):
        self.ratio = ratio
        super().__init__(
            f"finite-difference ratio {ratio:.6g} is far from 1; reduce the step"
        )
