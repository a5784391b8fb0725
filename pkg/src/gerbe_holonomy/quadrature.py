"""Composite Simpson quadrature for the integrals in the holonomy formulas."""

from functools import lru_cache
from typing import Callable, Optional, Tuple

import numpy as np

from .exceptions import QuadratureDiverged

DEFAULT_SUBINTERVALS = 256
DEFAULT_TARGET = 1e-9
MAX_SUBINTERVALS = 1 << 16


@lru_cache(maxsize=64)
def simpson_rule(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of composite Simpson on [0, 1] with n subintervals."""
    if n < 2 or n % 2:
        raise ValueError(f"Simpson needs an even number of subintervals, got {n}")
    nodes = np.linspace(0.0, 1.0, n + 1)
    weights = np.ones(n + 1)
    weights[1:-1:2] = 4.0
    weights[2:-1:2] = 2.0
    weights /= 3.0 * n
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def simpson(integrand: Callable[[np.ndarray], np.ndarray], a: float, b: float,
            n: int = DEFAULT_SUBINTERVALS) -> complex:
    """Integral of a vectorised integrand over [a, b]."""
    nodes, weights = simpson_rule(n)
    length = float(b) - float(a)
    if length == 0:
        return 0j
    ts = float(a) + length * nodes
    values = np.asarray(integrand(ts), dtype=complex)
    if not np.all(np.isfinite(values)):
        bad = float(ts[np.flatnonzero(~np.isfinite(values))[0]])
        raise QuadratureDiverged(f"integrand is not finite at t={bad:.6g}")
    return complex(length * np.dot(weights, values))


def simpson_with_estimate(integrand: Callable[[np.ndarray], np.ndarray], a: float, b: float,
                          n: int = DEFAULT_SUBINTERVALS) -> Tuple[complex, float]:
    """Value with n subintervals and the Richardson estimate from halving."""
    fine = simpson(integrand, a, b, n)
    coarse = simpson(integrand, a, b, n // 2) if n >= 4 else fine
    return fine, abs(fine - coarse) / 15.0


def adaptive_simpson(integrand: Callable[[np.ndarray], np.ndarray], a: float, b: float,
                     n: int = DEFAULT_SUBINTERVALS, target: float = DEFAULT_TARGET,
                     max_n: int = MAX_SUBINTERVALS) -> complex:
    """Simpson with n doubled until the halving estimate is at most ``target``.

    The returned value carries the Richardson correction (fine - coarse) / 15.

    Raises:
        QuadratureDiverged: the estimate is still above ``target`` at ``max_n``
    """
    half = n // 2
    coarse: Optional[complex] = simpson(integrand, a, b, half) if half >= 2 and half % 2 == 0 else None
    while True:
        fine = simpson(integrand, a, b, n)
        if coarse is not None:
            estimate = abs(fine - coarse) / 15.0
            if estimate <= target:
                return fine + (fine - coarse) / 15.0
            if n >= max_n:
                raise QuadratureDiverged(
                    f"error estimate {estimate:.3g} above {target:.3g} with {n} subintervals on [{a:.6g}, {b:.6g}]"
                )
        coarse, n = fine, 2 * n
