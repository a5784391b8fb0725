"""Report models using Pydantic.

The machine report is the contract of every command: field order is
fixed by the model definitions and floats are written with ``repr``
precision, so a scenario and a seed always give the same bytes.
"""

from typing import Dict, Iterable, List, Optional

from pydantic import BaseModel, Field, field_validator

from . import phases
from .phases import Value

REPORT_SCHEMA_VERSION = 1


class CheckResult(BaseModel):
    """Outcome of one verified identity."""

    name: str = Field(..., description="Condition checked, e.g. '2-cocycle h'")
    residual: float = Field(..., description="Largest deviation found")
    tolerance: float = Field(0.0, description="Tolerance the residual is compared against")
    passed: bool = Field(..., description="Whether the residual is within tolerance")
    exact: bool = Field(False, description="Computed with exact arithmetic only")
    samples: int = Field(0, description="Number of tuples, points or paths examined")
    witness: Optional[str] = Field(None, description="Where the largest residual occurred")

    @field_validator("residual")
    @classmethod
    def validate_residual(cls, v: float) -> float:
        if v < 0:
            raise ValueError("residual must be non-negative")
        return v


class ReportTable(BaseModel):
    """A small table of computed values, rendered with rich by the CLI."""

    title: str
    columns: List[str]
    rows: List[List[str]] = Field(default_factory=list)


class Report(BaseModel):
    """Machine-readable result of a command."""

    schema_version: int = Field(REPORT_SCHEMA_VERSION, description="Report schema version")
    command: str = Field(..., description="Command or operation that produced the report")
    scenario_digest: str = Field("builtin", description="SHA-256 of the scenario file")
    seed: Optional[int] = Field(None, description="Seed of all random sampling")
    checks: List[CheckResult] = Field(default_factory=list)
    values: Dict[str, str] = Field(default_factory=dict, description="Named computed quantities")
    tables: List[ReportTable] = Field(default_factory=list)
    wall_time: Optional[float] = Field(None, description="Seconds, only when timings are requested")

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> List[CheckResult]:
        return [check for check in self.checks if not check.passed]

    def check(self, name: str) -> CheckResult:
        for item in self.checks:
            if item.name == name:
                return item
        raise KeyError(name)

    def add_check(self, name: str, residual: float, tolerance: float, exact: bool = False,
                  samples: int = 0, witness: Optional[str] = None) -> CheckResult:
        passed = residual == 0.0 if exact and tolerance == 0 else residual <= tolerance
        result = CheckResult(
            name=name, residual=float(residual), tolerance=float(tolerance), passed=passed,
            exact=exact, samples=samples, witness=witness,
        )
        self.checks.append(result)
        return result

    def merge(self, others: Iterable["Report"]) -> "Report":
        """Concatenate checks, values and tables in the given order."""
        merged = self.model_copy(deep=True)
        for other in others:
            merged.checks.extend(other.checks)
            merged.values.update(other.values)
            merged.tables.extend(other.tables)
        return merged

    def to_json(self) -> str:
        return self.model_dump_json(indent=2, exclude_none=True) + "\n"


class UnitTally:
    """Running worst |value - 1| over values that should all equal 1."""

    def __init__(self) -> None:
        self.value = 0.0
        self.witness: Optional[str] = None
        self.exact = True
        self.samples = 0

    def update(self, value: Value, witness: str) -> None:
        self.samples += 1
        self.exact = self.exact and phases.is_exact(value)
        gap = phases.distance_from_one(value)
        if gap > self.value:
            self.value, self.witness = gap, witness

    def record(self, report: Report, name: str, tol: float) -> CheckResult:
        """Add the tally as a check; exact tallies are held to zero."""
        exact = self.exact and self.samples > 0
        return report.add_check(name, self.value, 0.0 if exact else tol, exact=exact,
                                samples=self.samples, witness=self.witness)
