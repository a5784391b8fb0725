"""
Holonomy command (tau_1) for the gerbe-holonomy CLI.
"""

import time

import click

from ... import phases
from ...deligne import LineData
from ...models import Report
from ...transgression import HolonomyMap, check_invariance
from ..utils.session import console, fail, finish, open_scenario, report_options, scenario_argument, split_ids


@click.command()
@scenario_argument
@click.option("--loop", "-l", "loop_ids", multiple=True, required=True, help="Loop ID (repeatable, comma lists allowed)")
@click.option("--arrow", "-a", "arrow_ids", multiple=True, help="Loop arrows on which to check H(target) = H(source)")
@click.option("--data", "-d", "data_id", help="Line data to transgress (default: the only line data)")
@report_options
@click.pass_context
def tau1(ctx, scenario, loop_ids, arrow_ids, data_id, out, seed, timings):
    """
    Evaluate the holonomy H of line data on loops.

    Examples:
        gerbe-holonomy tau1 scenarios/shift_circle.json --loop psi
        gerbe-holonomy tau1 scenarios/shift_circle.json --loop psi --arrow lam
    """
    started = time.perf_counter()
    try:
        loaded, settings, seed = open_scenario(ctx, scenario, seed)
        data = loaded.cochain(data_id, LineData)
        holonomy = HolonomyMap(data, settings.quadrature_n)
        report = Report(command="tau1", seed=seed)
        with console.status("[bold green]Integrating holonomies..."):
            for loop_id in split_ids(loop_ids):
                report.values[f"H({loop_id})"] = phases.format_value(holonomy(loaded.loop(loop_id)))
            arrows = [loaded.loop_arrow(a) for a in split_ids(arrow_ids)]
            if arrows:
                report.checks.extend(check_invariance(holonomy, arrows, settings.tolerance).checks)
    except Exception as e:
        fail(ctx, e, "evaluating holonomy")
    finish(ctx, report, out, timings, started, loaded.digest, seed)
