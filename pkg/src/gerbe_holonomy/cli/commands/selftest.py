"""
Selftest command for the gerbe-holonomy CLI.

Runs the built-in acceptance suites; they need no scenario file.
"""

import time

import click
from rich.table import Table

from ...suites import SUITES, list_suites, run_all, run_suite
from ..utils.config import resolve_seed
from ..utils.session import console, fail, finish, report_options, settings_of


@click.command()
@click.option("--suite", "-s", "names", multiple=True, help="Run only this suite (repeatable)")
@click.option("--list", "list_only", is_flag=True, help="List the suites and exit")
@click.option("--quick", is_flag=True, help="Smaller sample counts")
@report_options
@click.pass_context
def selftest(ctx, names, list_only, quick, out, seed, timings):
    """
    Run the built-in acceptance suites.

    Examples:
        gerbe-holonomy selftest
        gerbe-holonomy selftest --list
        gerbe-holonomy selftest --suite discrete-torsion --out torsion.json
    """
    if list_only:
        table = Table(title="Acceptance suites")
        table.add_column("Suite", style="cyan")
        table.add_column("Checks")
        for entry in list_suites():
            table.add_row(entry.name, entry.title)
        console.print(table)
        return

    unknown = [name for name in names if name not in SUITES]
    if unknown:
        raise click.BadParameter(
            f"unknown suite {', '.join(unknown)}; see selftest --list", param_hint="--suite"
        )

    started = time.perf_counter()
    try:
        seed = resolve_seed(seed, None, settings_of(ctx))
        with console.status("[bold green]Running acceptance suites..."):
            if len(names) == 1:
                report = run_suite(names[0], seed, quick)
            else:
                report = run_all(seed, quick, list(names) or None)
    except Exception as e:
        fail(ctx, e, "running selftest")
    finish(ctx, report, out, timings, started, seed=seed)
