"""
Verify command for the gerbe-holonomy CLI.

Checks the cocycle conditions of the line, gerbe or flat data of a
scenario.
"""

import time

import click

from ...deligne import verify_cocycle
from ..utils.session import console, fail, finish, open_scenario, report_options, scenario_argument


@click.command()
@scenario_argument
@click.option("--data", "-d", "data_id", help="Cochain to verify (default: every cochain)")
@report_options
@click.pass_context
def verify(ctx, scenario, data_id, out, seed, timings):
    """
    Verify the cocycle conditions of scenario cochains.

    The function condition is checked exhaustively on finite nerves and
    by sampling otherwise; form conditions are checked pointwise and
    along sampled paths.

    Examples:
        gerbe-holonomy verify scenarios/discrete_torsion.json
        gerbe-holonomy verify scenarios/torus_reflection.json --data gerbe --seed 3
        gerbe-holonomy verify scenarios/perturbed.json --out report.json
    """
    started = time.perf_counter()
    try:
        loaded, settings, seed = open_scenario(ctx, scenario, seed)
        names = [data_id] if data_id else list(loaded.cochains)
        if not names:
            raise click.UsageError("the scenario defines no cochains")
        reports = []
        with console.status("[bold green]Verifying cocycle conditions..."):
            for name in names:
                report = verify_cocycle(
                    loaded.cochain(name), tol=settings.tolerance, paths=settings.samples.paths,
                    points=settings.samples.points, seed=seed, quadrature_n=settings.quadrature_n,
                    exact_tol=settings.exact_tolerance, cap=settings.nerve_cap,
                )
                for check in report.checks:
                    check.name = f"{name}: {check.name}" if len(names) > 1 else check.name
                report.values = {
                    (f"{name}: {key}" if len(names) > 1 else key): value for key, value in report.values.items()
                }
                reports.append(report)
        combined = reports[0].merge(reports[1:])
    except click.UsageError:
        raise
    except Exception as e:
        fail(ctx, e, "verifying cocycle")
    finish(ctx, combined, out, timings, started, loaded.digest, seed)
