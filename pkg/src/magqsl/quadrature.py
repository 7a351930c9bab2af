"""Integrals over radial solutions.

The scaled problem lives on the half line with the two-dimensional
radial measure s ds, so normalization means integral(S^2 s ds) = 1 and
the dipole matrix element between two levels on a common grid is

    <a|s|b> = integral(S_a(s) * s * S_b(s) * s ds).

Composite Simpson on the solver grid is accurate far beyond the 1e-8
budget here because the integrands vanish exponentially at both ends
of the domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import integrate

from .constants import HBAR_ERG_S, MEC2_ERG

__all__ = [
    "QuadratureError",
    "OverlapResult",
    "norm_squared",
    "normalize",
    "inner",
    "overlap_s",
    "displacement",
    "mean_radius_t",
]

# A normalized solution may keep at most this fraction of its weight in
# the outer few percent of the grid; more means the domain was cut too
# short for the state and every integral downstream is suspect.
TAIL_FRACTION_LIMIT = 1e-8
_TAIL_WINDOW = 0.02


class QuadratureError(RuntimeError):
    """Raised when an integral over a radial solution cannot be trusted."""


@dataclass(frozen=True)
class OverlapResult:
    """Value of <a|s|b> plus a crude quadrature-error estimate."""

    value: float
    estimated_quadrature_error: float


def norm_squared(sol) -> float:
    """integral(S^2 s ds) over the solution's own grid."""
    return float(integrate.simpson(sol.values**2 * sol.grid, x=sol.grid))


def normalize(sol):
    """Rescale a radial solution to unit norm in the s ds measure.

    Returns a new solution with norm_factor multiplied by the applied
    scale.  Raises QuadratureError when the norm is degenerate or when
    the outer tail of the grid still carries more than
    TAIL_FRACTION_LIMIT of the total weight.
    """
    if not np.all(np.isfinite(sol.values)):
        raise QuadratureError("radial solution contains non-finite values")
    weight = sol.values**2 * sol.grid
    total = float(integrate.simpson(weight, x=sol.grid))
    if not math.isfinite(total) or total <= 0.0:
        raise QuadratureError(f"degenerate norm integral: {total}")
    k = max(2, int(_TAIL_WINDOW * sol.grid.size))
    tail = float(integrate.simpson(weight[-k:], x=sol.grid[-k:]))
    if tail / total > TAIL_FRACTION_LIMIT:
        raise QuadratureError(
            f"tail carries {tail / total:.3e} of the norm; "
            "integration domain too short for this state"
        )
    scale = 1.0 / math.sqrt(total)
    return replace(sol, values=sol.values * scale, norm_factor=sol.norm_factor * scale)


def _require_common_grid(a, b) -> None:
    if a.grid.shape != b.grid.shape or not np.array_equal(a.grid, b.grid):
        raise ValueError("overlap requires solutions on a common grid")


def inner(a, b) -> float:
    """Plain inner product integral(S_a S_b s ds) on a common grid."""
    _require_common_grid(a, b)
    return float(integrate.simpson(a.values * b.values * a.grid, x=a.grid))


def overlap_s(a, b) -> OverlapResult:
    """Dipole matrix element <a|s|b> on the common grid.

    The error estimate is the Simpson-trapezoid difference, a standard
    same-grid proxy for the quadrature truncation error.
    """
    _require_common_grid(a, b)
    y = a.values * b.values * a.grid**2
    simp = float(integrate.simpson(y, x=a.grid))
    trap = float(np.trapezoid(y, x=a.grid))
    return OverlapResult(value=simp, estimated_quadrature_error=abs(simp - trap))


def displacement(a, b, beta: float, n: float) -> float:
    """Oscillation amplitude x_disp = 2 |<a|s|b>| beta^(-1/(n+2)).

    This is the full swing of the interference term of an equal-weight
    superposition of the two levels, in lambda_e units.
    """
    if not beta > 0.0:
        raise ValueError(f"beta must be positive, got {beta}")
    return 2.0 * abs(overlap_s(a, b).value) * beta ** (-1.0 / (n + 2.0))


def mean_radius_t(state_a, state_b, beta: float, n: float, t: float) -> float:
    """Mean radius <x>(t) of the equal-weight two-level superposition.

    <x>(t) = [<a|x|a> + <b|x|b> + 2 <a|x|b> cos(omega t)] / 2 with
    omega = (E_b - E_a)/hbar; t in seconds, result in lambda_e units.
    """
    if not beta > 0.0:
        raise ValueError(f"beta must be positive, got {beta}")
    saa = overlap_s(state_a.radial, state_a.radial).value
    sbb = overlap_s(state_b.radial, state_b.radial).value
    sab = overlap_s(state_a.radial, state_b.radial).value
    omega = (state_b.epsilon - state_a.epsilon) * MEC2_ERG / HBAR_ERG_S
    scale = beta ** (-1.0 / (n + 2.0))
    return 0.5 * (saa + sbb + 2.0 * sab * math.cos(omega * t)) * scale
