"""
Commutation square command for the gerbe-holonomy CLI.
"""

import time

import click

from ...deligne import LineData
from ...transgression import check_commutation_square
from ..utils.session import console, fail, finish, open_scenario, report_options, scenario_argument, split_ids


@click.command()
@scenario_argument
@click.option("--data", "-d", "data_id", help="Line cochain (f, A); need not be a cocycle")
@click.option("--arrow", "-a", "arrow_ids", multiple=True, help="Loop arrows (default: all in the scenario)")
@click.option("--family", "-f", "family_ids", multiple=True, help="Families for the form part (default: all)")
@report_options
@click.pass_context
def square(ctx, scenario, data_id, arrow_ids, family_ids, out, seed, timings):
    """
    Check that transgression commutes with the total coboundary.

    Compares F of the gerbe D(f, A) with H(target) / H(source) on loop
    arrows, and Delta with -dlog H along families.

    Examples:
        gerbe-holonomy square scenarios/shift_circle.json
        gerbe-holonomy square scenarios/shift_circle.json --arrow lam --family slide
    """
    started = time.perf_counter()
    try:
        loaded, settings, seed = open_scenario(ctx, scenario, seed)
        line = loaded.cochain(data_id, LineData)
        arrows = [loaded.loop_arrow(a) for a in split_ids(arrow_ids) or loaded.loop_arrows]
        families = [loaded.family(f) for f in split_ids(family_ids) or loaded.families]
        with console.status("[bold green]Comparing both sides of the square..."):
            report = check_commutation_square(
                line.h, line.A, arrows, families, step=settings.fd_step, tol=settings.tolerance,
                form_tol=settings.fd_tolerance, n=settings.quadrature_n, seed=seed,
            )
    except Exception as e:
        fail(ctx, e, "checking the commutation square")
    finish(ctx, report, out, timings, started, loaded.digest, seed)
