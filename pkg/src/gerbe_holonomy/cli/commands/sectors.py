"""
Sectors command for the gerbe-holonomy CLI.
"""

import time

import click

from ...deligne import GerbeData
from ...exceptions import InputError
from ...groupoids import ActionGroupoid
from ...models import Report
from ...sectors import restrict_to_inertia, sector_decomposition, sector_summary
from ...transgression import tau2_build
from ..utils.session import console, fail, finish, open_scenario, report_options, scenario_argument


@click.command()
@scenario_argument
@click.option("--data", "-d", "data_id", help="Gerbe whose local system is tabulated per sector")
@click.option("--resolution", "-r", type=click.IntRange(min=0),
              help="Grid for positive-dimensional fixed components")
@report_options
@click.pass_context
def sectors(ctx, scenario, data_id, resolution, out, seed, timings):
    """
    Split [M/G] into twisted sectors [M^g / C(g)].

    With gerbe data, each sector also lists the C(g)-equivariant values
    of the restricted local system.

    Examples:
        gerbe-holonomy sectors scenarios/torus_reflection.json
        gerbe-holonomy sectors scenarios/discrete_torsion.json --data eps
    """
    started = time.perf_counter()
    try:
        loaded, settings, seed = open_scenario(ctx, scenario, seed)
        G = loaded.groupoid
        if not isinstance(G, ActionGroupoid):
            raise InputError("sectors need an action groupoid")
        grid = resolution if resolution is not None else settings.resolution
        gerbes = [c for c in loaded.cochains.values() if isinstance(c, GerbeData)]
        local_system = None
        if data_id or gerbes:
            bundle = tau2_build(loaded.cochain(data_id, GerbeData), settings.quadrature_n)
            local_system = restrict_to_inertia(bundle, grid)
        with console.status("[bold green]Solving for fixed sets..."):
            decomposition = sector_decomposition(G, local_system, grid)
        report = Report(command="sectors", seed=seed)
        report.values.update(sector_summary(decomposition))
        report.tables.append(decomposition.table())
        report.tables.extend(decomposition.value_tables())
    except Exception as e:
        fail(ctx, e, "decomposing into sectors")
    finish(ctx, report, out, timings, started, loaded.digest, seed)
