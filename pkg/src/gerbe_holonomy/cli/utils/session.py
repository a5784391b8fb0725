"""
Shared plumbing of the analysis commands: common options, scenario
loading with settings overrides, report emission and exit codes.
"""

import time
from pathlib import Path
from typing import Any, Callable, List, NoReturn, Optional, Tuple

import click
from rich.console import Console

from ...exceptions import GerbeHolonomyError
from ...models import Report
from ...scenario import Scenario, load_scenario
from .config import Settings, resolve_seed
from .formatters import render_report

console = Console()

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2


def report_options(func: Callable) -> Callable:
    """--out, --seed and --timings, shared by every command that emits a report."""
    func = click.option(
        "--timings", is_flag=True, help="Record wall time in the report (breaks byte-identical output)"
    )(func)
    func = click.option(
        "--seed", type=int, help="Seed of sampled checks (overrides GERBE_SEED and the scenario)"
    )(func)
    func = click.option(
        "--out", "-o", type=click.Path(dir_okay=False, path_type=Path), help="Write the machine report (JSON) to FILE"
    )(func)
    return func


def scenario_argument(func: Callable) -> Callable:
    return click.argument("scenario", type=click.Path(exists=True, dir_okay=False, path_type=Path))(func)


def settings_of(ctx: click.Context) -> Settings:
    return ctx.obj.get("settings") or Settings()


def open_scenario(ctx: click.Context, path: Path, seed: Optional[int]) -> Tuple[Scenario, Settings, int]:
    """Load a scenario, apply its settings section and resolve the seed."""
    with console.status(f"[bold green]Loading {path.name}..."):
        scenario = load_scenario(path)
    settings = settings_of(ctx).with_overrides(scenario.spec.settings.overrides())
    return scenario, settings, resolve_seed(seed, scenario.seed, settings)


def fail(ctx: click.Context, error: Exception, action: str) -> NoReturn:
    """Report an error and exit with its code (2 for anything unexpected)."""
    console.print(f"[red]Error {action}: {error}[/red]")
    if ctx.obj.get("verbose"):
        console.print_exception()
    code = error.exit_code if isinstance(error, GerbeHolonomyError) else EXIT_INPUT
    ctx.exit(code)


def finish(ctx: click.Context, report: Report, out: Optional[Path], timings: bool = False,
           started: Optional[float] = None, digest: Optional[str] = None, seed: Optional[int] = None) -> NoReturn:
    """Print the human report, write the machine report and exit 0 or 1."""
    if digest is not None:
        report.scenario_digest = digest
    if seed is not None:
        report.seed = seed
    if timings and started is not None:
        report.wall_time = round(time.perf_counter() - started, 6)
    settings = settings_of(ctx)
    render_report(console, report, settings.display.decimal_places, ctx.obj.get("verbose", False))
    if out is not None:
        try:
            out.write_text(report.to_json(), encoding="utf-8")
        except OSError as e:
            fail(ctx, e, f"writing {out}")
        console.print(f"[dim]Report written to {out}[/dim]")
    ctx.exit(EXIT_OK if report.passed else EXIT_FAILED)


def split_ids(values: Any) -> List[str]:
    """Flatten repeated and comma-separated ID options."""
    ids = []
    for value in values or ():
        ids.extend(part.strip() for part in str(value).split(",") if part.strip())
    return ids
