"""
Inertia command for the gerbe-holonomy CLI.

Restricts the transgressed line bundle of a gerbe to constant loops and
checks the inner local system axioms.
"""

import time

import click

from ...deligne import GerbeData
from ...sectors import check_constant_loops, check_inner_local_system, restrict_to_inertia
from ...transgression import tau2_build
from ..utils.session import console, fail, finish, open_scenario, report_options, scenario_argument


@click.command()
@scenario_argument
@click.option("--data", "-d", "data_id", help="Gerbe data (default: the only gerbe data)")
@click.option("--resolution", "-r", type=click.IntRange(min=0),
              help="Grid for positive-dimensional fixed components")
@click.option("--table/--no-table", default=True, help="Include the table of f values")
@report_options
@click.pass_context
def inertia(ctx, scenario, data_id, resolution, table, out, seed, timings):
    """
    Restrict tau_2 of a gerbe to the inertia groupoid and check it.

    Checks triviality on units, f(i(v, a)) = f(v, a)^-1, the morphism
    property, flatness on the fixed sets and agreement with F on
    constant loops.

    Examples:
        gerbe-holonomy inertia scenarios/discrete_torsion.json
        gerbe-holonomy inertia scenarios/torus_reflection.json --seed 2 --no-table
    """
    started = time.perf_counter()
    try:
        loaded, settings, seed = open_scenario(ctx, scenario, seed)
        bundle = tau2_build(loaded.cochain(data_id, GerbeData), settings.quadrature_n)
        with console.status("[bold green]Restricting to the inertia groupoid..."):
            ls = restrict_to_inertia(bundle, resolution if resolution is not None else settings.resolution)
            report = check_inner_local_system(ls, settings.tolerance, settings.samples.points, seed)
            report = report.merge([check_constant_loops(ls, bundle, settings.tolerance)])
            if table:
                report.tables.append(ls.table())
    except Exception as e:
        fail(ctx, e, "restricting to inertia")
    finish(ctx, report, out, timings, started, loaded.digest, seed)
