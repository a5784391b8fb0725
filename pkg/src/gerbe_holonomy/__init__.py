"""
gerbe-holonomy - holonomy and transgression of gerbes on orbifold groupoids.

This package provides:
- Exact and symbolic Deligne cochains on finite-model Lie groupoids
- Segmented loops and their loop-groupoid arrows
- Transgression of line data to functions and of gerbes to line bundles
  with connection on the loop groupoid, plus tau_n for flat data
- Inertia restriction, twisted sectors and discrete torsion
- Finite group cohomology H^2(G, C*)
- A command-line interface with machine-readable reports
"""

__version__ = "0.1.0"

from .cohomology import TorsionCocycle, h2_finite_group
from .deligne import FlatNData, GerbeData, LineData, verify_cocycle
from .exceptions import GerbeHolonomyError, InputError, NumericalError
from .models import CheckResult, Report
from .transgression import tau1_eval, tau2_build

__all__ = [
    "CheckResult",
    "FlatNData",
    "GerbeData",
    "GerbeHolonomyError",
    "InputError",
    "LineData",
    "NumericalError",
    "Report",
    "TorsionCocycle",
    "h2_finite_group",
    "tau1_eval",
    "tau2_build",
    "verify_cocycle",
]
