"""
Flat transgression command (tau_n) for the gerbe-holonomy CLI.
"""

import time

import click

from ... import phases
from ...deligne import FlatNData
from ...exceptions import ArityMismatch
from ...groupoids import ActionGroupoid
from ...models import Report
from ...sampling import arrow_chains
from ...transgression import FlatTransgression, flat_cocycle_defect
from ..utils.session import console, fail, finish, open_scenario, report_options, scenario_argument, split_ids


@click.command()
@scenario_argument
@click.option("--n", "-n", "degree", type=click.IntRange(min=1), required=True, help="Degree of the flat data")
@click.option("--arrows", "-a", "arrow_ids", multiple=True, help="n-1 composable loop arrow IDs, in order")
@click.option("--loop", "-l", "loop_id", help="Loop to evaluate on when n = 1")
@click.option("--check", "exhaustive", is_flag=True,
              help="Check delta F_n = 1 on every composable n-tuple from the base loop (finite models)")
@click.option("--data", "-d", "data_id", help="Flat data to transgress (default: the only flat data)")
@report_options
@click.pass_context
def taun(ctx, scenario, degree, arrow_ids, loop_id, exhaustive, data_id, out, seed, timings):
    """
    Evaluate the transgression F_n of flat degree-n data.

    Examples:
        gerbe-holonomy taun scenarios/cyclic_three.json --n 3 --arrows lam,mu
        gerbe-holonomy taun scenarios/cyclic_three.json --n 3 --loop psi --check
    """
    started = time.perf_counter()
    try:
        loaded, settings, seed = open_scenario(ctx, scenario, seed)
        data = loaded.cochain(data_id, FlatNData)
        if data.n != degree:
            raise ArityMismatch(f"the selected data has degree {data.n}, not {degree}")
        transgression = FlatTransgression(data, settings.quadrature_n)
        names = split_ids(arrow_ids)
        arrows = [loaded.loop_arrow(a) for a in names]
        loop = loaded.loop(loop_id) if loop_id else None
        report = Report(command="taun", seed=seed)
        report.values["n"] = str(degree)
        with console.status("[bold green]Transgressing flat data..."):
            if arrows or loop is not None:
                report.values[f"F_{degree}({','.join(names) or loop_id})"] = phases.format_value(
                    transgression(arrows, loop)
                )
            if exhaustive:
                base = loop if loop is not None else (arrows[0].source if arrows else None)
                if base is None or not isinstance(loaded.groupoid, ActionGroupoid) or not loaded.groupoid.is_finite:
                    raise click.UsageError("--check needs a base loop over a finite action groupoid")
                chains = arrow_chains(base, degree)
                worst, witness = flat_cocycle_defect(transgression, chains)
                report.add_check(f"delta F_{degree} is 1", worst, settings.exact_tolerance,
                                 exact=True, samples=len(chains), witness=witness)
    except click.UsageError:
        raise
    except Exception as e:
        fail(ctx, e, "evaluating flat transgression")
    finish(ctx, report, out, timings, started, loaded.digest, seed)
