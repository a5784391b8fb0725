"""
Torsion command for the gerbe-holonomy CLI.

Builds the discrete-torsion gerbe of a class in H^2(G, C*) over
[pt/G] and tabulates the phases its transgression assigns to twisted
sectors.
"""

import time
from typing import List

import click

from ... import phases
from ...cohomology import bicharacter_table, h2_finite_group
from ...deligne import verify_cocycle
from ...exceptions import InputError
from ...groupoids import point_quotient
from ...groups import parse_group
from ...loops import constant_loop, loop_arrow
from ...models import ReportTable, UnitTally
from ...sectors import check_inner_local_system, restrict_to_inertia, torsion_gerbe, torsion_phases
from ...transgression import tau2_build
from ..utils.config import resolve_seed
from ..utils.session import console, fail, finish, report_options, settings_of, split_ids


def parse_class(values: List[str], generators: int) -> List[int]:
    """Class coordinates from "1,0" style text; a missing class means the first generator."""
    if not values:
        return [1] + [0] * (generators - 1) if generators else []
    try:
        return [int(v) for v in values]
    except ValueError:
        raise InputError(f"class coordinates must be integers, got {','.join(values)}") from None


@click.command()
@click.option("--group", "-g", "group_spec", required=True, help="Group specification")
@click.option("--class", "-k", "class_id", multiple=True,
              help="Coordinates of the class over the invariant factors, e.g. 1 or 1,0")
@report_options
@click.pass_context
def torsion(ctx, group_spec, class_id, out, seed, timings):
    """
    Discrete torsion of a class in H^2(G, C*) on [pt/G].

    Checks the gerbe cocycle conditions, that F on constant loops is
    e(g, k) / e(k, k^-1 g k), that the restriction to inertia is an
    inner local system and, for abelian G, that the commutator phase is
    an alternating bicharacter.

    Examples:
        gerbe-holonomy torsion --group "Z/2xZ/2" --class 1
        gerbe-holonomy torsion --group "Z/2xZ/2xZ/2" --class 1,0,1 --out z2cubed.json
    """
    started = time.perf_counter()
    try:
        settings = settings_of(ctx)
        seed = resolve_seed(seed, None, settings)
        group = parse_group(group_spec)
        schur = h2_finite_group(group, settings.group_order_cap)
        coordinates = parse_class(split_ids(class_id), len(schur.invariant_factors))
        epsilon = schur.cocycle_for(coordinates)
        G = point_quotient(group)
        gerbe = torsion_gerbe(epsilon, G)

        with console.status("[bold green]Transgressing the torsion gerbe..."):
            report = verify_cocycle(gerbe, tol=settings.tolerance, exact_tol=settings.exact_tolerance,
                                    seed=seed, cap=settings.nerve_cap)
            report.command = "torsion"
            bundle = tau2_build(gerbe, settings.quadrature_n)
            expected = torsion_phases(epsilon)
            tally = UnitTally()
            rows = []
            for (g, k), value in expected.items():
                F = bundle.F(loop_arrow(constant_loop(G, "pt", g), [k]))
                pair = f"({group.label_of(g)}, {group.label_of(k)})"
                tally.update(phases.multiply([F, phases.inverse(value)]), pair)
                rows.append([group.label_of(g), group.label_of(k), phases.format_value(F)])
            tally.record(report, "F matches e(g, k) / e(k, k^-1 g k)", settings.exact_tolerance)
            report.tables.append(ReportTable(title="twisted sector phases", columns=["g", "k", "F"], rows=rows))

            ls = restrict_to_inertia(bundle)
            report = report.merge([check_inner_local_system(ls, settings.tolerance, points=0, seed=seed)])
            if group.is_abelian:
                _, failure = bicharacter_table(epsilon)
                report.add_check("alternating bicharacter", 0.0 if failure is None else 1.0, 0.0,
                                 exact=True, samples=group.order**3, witness=failure)

        report.values["group"] = group.label
        report.values["H^2(G, C*)"] = schur.describe()
        report.values["class"] = str(tuple(schur.class_of(epsilon)))
    except Exception as e:
        fail(ctx, e, "building discrete torsion")
    finish(ctx, report, out, timings, started, seed=seed)
