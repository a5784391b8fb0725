"""
Main CLI entry point for gerbe-holonomy.

This module provides the command-line interface: cocycle verification,
the transgressions tau_1, tau_2 and tau_n on loop groupoids, the
commutation square, inertia restriction, twisted sectors, Schur
multipliers, discrete torsion and the built-in acceptance suites.
"""

import logging

import click
from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel
from rich.text import Text

from .. import __version__
from ..suites import list_suites
from .commands import h2, inertia, sectors, selftest, square, tau1, tau2, taun, torsion, verify
from .utils.config import get_config_path, init_config, validate_config
from .utils.session import EXIT_INPUT

console = Console()


def setup_logging(level: str, log_file=None) -> None:
    """Route the package logger through Rich, optionally also to a file."""
    logger = logging.getLogger("gerbe_holonomy")
    logger.handlers.clear()
    logger.setLevel(level)
    logger.propagate = False
    logger.addHandler(RichHandler(console=Console(stderr=True), show_path=False, rich_tracebacks=True))
    if log_file:
        handler = logging.FileHandler(log_file, encoding="utf-8")
        handler.setFormatter(logging.Formatter("%(asctime)s %(name)s %(levelname)s %(message)s"))
        logger.addHandler(handler)


@click.group(invoke_without_command=True)
@click.version_option(version=__version__, prog_name="gerbe-holonomy")
@click.option("--verbose", "-v", is_flag=True, help="Enable verbose output and debug logging")
@click.option("--config-file", type=click.Path(), help="Path to configuration file")
@click.pass_context
def main(ctx, verbose, config_file):
    """
    gerbe-holonomy - Holonomy and transgression of gerbes on orbifold groupoids.

    Scenario files describe a finite-model groupoid, Deligne cochains on
    it, loops and loop arrows; each command checks one identity and
    writes a report.

    Examples:
        gerbe-holonomy verify scenarios/discrete_torsion.json
        gerbe-holonomy tau2 scenarios/torus_reflection.json --arrow twist
        gerbe-holonomy h2 --group D4
        gerbe-holonomy selftest --quick
    """
    ctx.ensure_object(dict)

    ctx.obj["verbose"] = verbose
    ctx.obj["config_file"] = config_file

    try:
        config = init_config(config_file)
        settings = validate_config(config)
    except Exception as e:
        console.print(f"[red]Error loading configuration: {e}[/red]")
        ctx.exit(EXIT_INPUT)
    ctx.obj["config"] = config
    ctx.obj["settings"] = settings

    setup_logging("DEBUG" if verbose else settings.log_level, settings.log_file)

    if ctx.invoked_subcommand is None:
        show_welcome()


def show_welcome():
    """Show welcome message and basic usage information."""
    welcome_text = Text()
    welcome_text.append("gerbe-holonomy", style="bold blue")
    welcome_text.append(" - transgression of gerbes to loop groupoids\n\n", style="blue")
    welcome_text.append("Verify Deligne cocycles and compute holonomy on finite-model orbifolds.\n\n")
    welcome_text.append("Quick Start:\n", style="bold")
    welcome_text.append("  gerbe-holonomy verify SCENARIO          # Check cocycle conditions\n")
    welcome_text.append("  gerbe-holonomy tau2 SCENARIO --help     # Transgress a gerbe\n")
    welcome_text.append("  gerbe-holonomy h2 --group Z/2xZ/2       # Schur multiplier\n")
    welcome_text.append("  gerbe-holonomy selftest                 # Acceptance suites\n")

    panel = Panel(
        welcome_text,
        title="Welcome to gerbe-holonomy",
        border_style="blue",
        padding=(1, 2),
    )
    console.print(panel)


@main.command()
@click.pass_context
def info(ctx):
    """Show version, configuration source and effective settings."""
    settings = ctx.obj["settings"]
    verbose = ctx.obj.get("verbose", False)

    info_text = Text()
    info_text.append("System Information\n", style="bold blue")
    info_text.append(f"Version: {__version__}\n")
    info_text.append(f"Configuration: {get_config_path(ctx.obj.get('config_file'))}\n")
    info_text.append(f"Tolerance: {settings.tolerance:g} (exact checks {settings.exact_tolerance:g})\n")
    info_text.append(f"Quadrature: Simpson from {settings.quadrature_n} subintervals, doubled to 1e-9\n")
    info_text.append(f"Nerve cap: {settings.nerve_cap}, group order cap: {settings.group_order_cap}\n")
    info_text.append(f"Acceptance suites: {len(list_suites())}\n")

    if verbose:
        info_text.append("\nConfiguration:\n", style="bold")
        for key, value in settings.model_dump().items():
            info_text.append(f"  {key}: {value}\n")

    panel = Panel(
        info_text,
        title="gerbe-holonomy Information",
        border_style="green",
    )
    console.print(panel)


main.add_command(verify)
main.add_command(tau1)
main.add_command(tau2)
main.add_command(taun)
main.add_command(square)
main.add_command(inertia)
main.add_command(sectors)
main.add_command(h2)
main.add_command(torsion)
main.add_command(selftest)


if __name__ == "__main__":
    main()
