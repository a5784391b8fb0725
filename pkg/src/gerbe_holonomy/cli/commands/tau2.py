"""
Transgressed line bundle command (tau_2) for the gerbe-holonomy CLI.
"""

import time

import click

from ... import phases
from ...deligne import GerbeData
from ...loops import same_loop
from ...models import Report
from ...transgression import check_connection_identity, check_multiplicativity, tau2_build
from ..utils.session import console, fail, finish, open_scenario, report_options, scenario_argument, split_ids


@click.command()
@scenario_argument
@click.option("--arrow", "-a", "arrow_ids", multiple=True, help="Loop arrow IDs on which to evaluate F")
@click.option("--tangent", "-t", "tangent_ids", multiple=True, help="Tangent IDs on which to evaluate Delta")
@click.option("--family", "-f", "family_ids", multiple=True, help="Families along which to check -dlog F = delta Delta")
@click.option("--data", "-d", "data_id", help="Gerbe data to transgress (default: the only gerbe data)")
@report_options
@click.pass_context
def tau2(ctx, scenario, arrow_ids, tangent_ids, family_ids, data_id, out, seed, timings):
    """
    Evaluate the transgressed line bundle (F, Delta) of gerbe data.

    Consecutive arrows that compose are also checked for
    F(L o M) = F(L) F(M).

    Examples:
        gerbe-holonomy tau2 scenarios/discrete_torsion.json --arrow lam
        gerbe-holonomy tau2 scenarios/torus_reflection.json --tangent xi --family wiggle
    """
    started = time.perf_counter()
    try:
        loaded, settings, seed = open_scenario(ctx, scenario, seed)
        bundle = tau2_build(loaded.cochain(data_id, GerbeData), settings.quadrature_n)
        report = Report(command="tau2", seed=seed)
        with console.status("[bold green]Transgressing..."):
            arrow_names = split_ids(arrow_ids)
            arrows = [loaded.loop_arrow(a) for a in arrow_names]
            for name, arrow in zip(arrow_names, arrows):
                report.values[f"F({name})"] = phases.format_value(bundle.F(arrow))
            for name in split_ids(tangent_ids):
                tangent = loaded.tangent(name)
                report.values[f"Delta({name})"] = phases.format_value(bundle.Delta(tangent.loop, tangent))
            pairs = [
                (first, second) for first, second in zip(arrows, arrows[1:])
                if same_loop(first.target, second.source)
            ]
            if pairs:
                report.checks.extend(check_multiplicativity(bundle, pairs, settings.tolerance).checks)
            families = [loaded.family(f) for f in split_ids(family_ids)]
            if families:
                identity = check_connection_identity(bundle, families, settings.fd_step, settings.fd_tolerance)
                report.checks.extend(identity.checks)
                report.values.update(identity.values)
    except Exception as e:
        fail(ctx, e, "transgressing gerbe")
    finish(ctx, report, out, timings, started, loaded.digest, seed)
