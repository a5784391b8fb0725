"""
Output formatting utilities for the gerbe-holonomy CLI.

The human report is a rendering of the machine report: every table
here is built from a ``Report`` and nothing else.
"""

from typing import Dict, Optional

from rich.console import Console
from rich.table import Table

from ...models import CheckResult, Report, ReportTable


def format_number(value: Optional[float], decimals: int) -> str:
    """Residuals in scientific notation; exact zeros stay "0"."""
    if value is None:
        return "N/A"
    if value == 0:
        return "0"
    return f"{value:.{decimals}e}"


def format_status(check: CheckResult) -> str:
    if check.passed:
        return "[green]pass[/green]" + (" (exact)" if check.exact else "")
    return "[red]FAIL[/red]"


def format_checks_table(report: Report, decimals: int = 3, verbose: bool = False) -> Table:
    """
    Format the checks of a report as a Rich table.

    Args:
        report: Report to render
        decimals: Digits of residuals and tolerances
        verbose: Include sample counts and witnesses of passing checks
    """
    table = Table(title=f"{report.command} checks")
    table.add_column("Check", style="cyan")
    table.add_column("Residual", justify="right")
    table.add_column("Tolerance", justify="right", style="dim")
    table.add_column("Status", justify="center")
    if verbose:
        table.add_column("Samples", justify="right", style="dim")
    table.add_column("Witness", style="yellow")

    for check in report.checks:
        row = [
            check.name,
            format_number(check.residual, decimals),
            format_number(check.tolerance, decimals),
            format_status(check),
        ]
        if verbose:
            row.append(str(check.samples))
        show_witness = verbose or not check.passed
        row.append((check.witness or "") if show_witness else "")
        table.add_row(*row)

    return table


def format_values_table(values: Dict[str, str], title: str = "Values") -> Table:
    table = Table(title=title)
    table.add_column("Quantity", style="cyan")
    table.add_column("Value", style="green")
    for key, value in values.items():
        table.add_row(key, value)
    return table


def format_report_table(data: ReportTable) -> Table:
    table = Table(title=data.title)
    for column in data.columns:
        table.add_column(column)
    for row in data.rows:
        table.add_row(*row)
    return table


def render_report(console: Console, report: Report, decimals: int = 3, verbose: bool = False) -> None:
    """Print values, tables, checks and the verdict of a report."""
    if report.values:
        console.print(format_values_table(report.values))
    for data in report.tables:
        console.print(format_report_table(data))
    if report.checks:
        console.print(format_checks_table(report, decimals, verbose))
        failures = len(report.failures)
        if failures:
            console.print(f"[red]{failures} of {len(report.checks)} checks failed[/red]")
        else:
            console.print(f"[green]All {len(report.checks)} checks passed[/green]")
    if report.wall_time is not None:
        console.print(f"[dim]Wall time: {report.wall_time:.3f} s[/dim]")
