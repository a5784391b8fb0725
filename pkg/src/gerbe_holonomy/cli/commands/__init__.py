"""Command modules for the gerbe-holonomy CLI."""

from .h2 import h2
from .inertia import inertia
from .sectors import sectors
from .selftest import selftest
from .square import square
from .tau1 import tau1
from .tau2 import tau2
from .taun import taun
from .torsion import torsion
from .verify import verify

__all__ = [
    "verify",
    "tau1",
    "tau2",
    "taun",
    "square",
    "inertia",
    "sectors",
    "h2",
    "torsion",
    "selftest",
]
