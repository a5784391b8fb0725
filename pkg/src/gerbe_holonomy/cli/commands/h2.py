"""
H2 command for the gerbe-holonomy CLI.

Computes the Schur multiplier H^2(G, C*) of a finite group.
"""

import time

import click

from ...cohomology import h2_finite_group
from ...groups import parse_group
from ...models import Report, ReportTable
from ..utils.config import resolve_seed
from ..utils.session import console, fail, finish, report_options, settings_of


@click.command()
@click.option("--group", "-g", "group_spec", required=True,
              help='Group: "Z/n", products like "Z/2xZ/4", S3, D4 or Q8')
@click.option("--tables/--no-tables", default=True, help="Print representative cocycle tables")
@report_options
@click.pass_context
def h2(ctx, group_spec, tables, out, seed, timings):
    """
    Compute H^2(G, C*) with one representative cocycle per generator.

    Examples:
        gerbe-holonomy h2 --group "Z/2xZ/2"
        gerbe-holonomy h2 --group D4 --no-tables --out d4.json
    """
    started = time.perf_counter()
    try:
        settings = settings_of(ctx)
        seed = resolve_seed(seed, None, settings)
        group = parse_group(group_spec)
        with console.status(f"[bold green]Reducing the bar complex of {group.label}..."):
            schur = h2_finite_group(group, settings.group_order_cap)
        report = Report(command="h2", seed=seed)
        report.values["group"] = group.label
        report.values["order of G"] = str(group.order)
        report.values["H^2(G, C*)"] = schur.describe()
        report.values["invariant factors"] = str(schur.invariant_factors)
        report.values["order of H^2"] = str(schur.order)
        not_cocycle = not_generator = 0
        witness = None
        for index, (rep, d) in enumerate(zip(schur.representatives, schur.invariant_factors)):
            if not rep.is_cocycle:
                not_cocycle += 1
                witness = f"representative {index}"
            coordinates = schur.class_of(rep)
            if schur.is_coboundary(rep) or coordinates[index] == 0:
                not_generator += 1
                witness = witness or f"representative {index} has class {coordinates}"
            if tables:
                report.tables.append(ReportTable(
                    title=f"representative {index} of order {d} (turns)",
                    columns=["g \\ h"] + list(group.element_labels),
                    rows=rep.table_rows(),
                ))
        count = len(schur.representatives)
        report.add_check("representatives are cocycles", float(not_cocycle), 0.0, exact=True,
                         samples=count, witness=witness)
        report.add_check("representatives are not coboundaries", float(not_generator), 0.0, exact=True,
                         samples=count, witness=witness)
    except Exception as e:
        fail(ctx, e, "computing H^2")
    finish(ctx, report, out, timings, started, seed=seed)
