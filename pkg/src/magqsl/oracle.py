"""Independent cross-checks for the shooting solver.

Three routes that share no integration code with the shooting method:

* the analytic uniform-field ladder (n = 0 reduces to a radial
  oscillator, alpha_tilde = 2 nu + 1 + z);
* closed-form oscillator wavefunctions and matrix elements;
* a cell-centered finite-volume eigensolver.  Writing the radial
  operator in flux form, -(s S')'/s + V S = alpha_tilde S, and
  integrating over cells [i h, (i+1) h] with unknowns at the cell
  centers gives a symmetric tridiagonal matrix after scaling each row
  by sqrt(center radius).  The s = 0 face carries zero flux, so no
  boundary condition is imposed at the origin and the 1/s coordinate
  singularity never enters.  A naive second-difference scheme for the
  equivalent -u'' + [V - 1/(4 s^2)] u problem stalls at O(sqrt(h))
  because u ~ sqrt(s) is not smooth at the origin; the flux form keeps
  clean O(h^2), so a Richardson step from two resolutions is valid and
  cancels the leading error term.  Eigenvalues come from LAPACK's
  Sturm-sequence bisection.

The test suite compares solver output against all three.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .problem import ScaledProblem

__all__ = [
    "landau_alpha_tilde",
    "oscillator_ground",
    "oscillator_first",
    "OVERLAP_01",
    "MEAN_S_00",
    "fd_eigenvalues",
]

# |<0|s|1>| and <0|s|0> for the scaled uniform-field problem, from the
# Gaussian integrals of the oscillator states below.
OVERLAP_01 = math.sqrt(2.0 * math.pi) / 4.0
MEAN_S_00 = math.sqrt(math.pi / 2.0)


def landau_alpha_tilde(nu: int, sigma: int = +1, zeeman_enabled: bool = True) -> float:
    """Uniform-field scaled eigenvalue: 2 nu + 1 + z, z = sigma or 0."""
    if nu < 0:
        raise ValueError(f"radial quantum number must be >= 0, got {nu}")
    if sigma not in (+1, -1):
        raise ValueError(f"sigma must be +1 or -1, got {sigma}")
    z = float(sigma) if zeeman_enabled else 0.0
    return 2.0 * nu + 1.0 + z


def oscillator_ground(s):
    """Normalized nu = 0 radial oscillator state, exp(-s^2/4)."""
    s = np.asarray(s, dtype=float)
    return np.exp(-0.25 * s * s)


def oscillator_first(s):
    """Normalized nu = 1 radial oscillator state, (1 - s^2/2) exp(-s^2/4)."""
    s = np.asarray(s, dtype=float)
    return (1.0 - 0.5 * s * s) * np.exp(-0.25 * s * s)


def _fv_levels(
    prob: ScaledProblem, count: int, s_max: float, cells: int
) -> np.ndarray:
    h = s_max / cells
    centers = (np.arange(cells) + 0.5) * h
    faces = np.arange(cells + 1) * h
    v = np.asarray(prob.potential(centers), dtype=float)
    diag = (faces[:-1] + faces[1:]) / (h * h * centers) + v
    off = -faces[1:-1] / (h * h * np.sqrt(centers[:-1] * centers[1:]))
    return eigh_tridiagonal(
        diag, off, select="i", select_range=(0, count - 1), eigvals_only=True
    )


def fd_eigenvalues(
    prob: ScaledProblem,
    count: int,
    s_max: float,
    cells: int = 4000,
    richardson: bool = True,
) -> np.ndarray:
    """Lowest `count` scaled eigenvalues on [0, s_max] by finite volumes.

    The caller chooses s_max deep enough into the forbidden region for
    all requested levels (the scaled problem's outer_cutoff at the top
    level's eigenvalue is a reasonable source).  With richardson=True
    the h and h/2 solutions are combined as (4 L_half - L) / 3,
    cancelling the leading O(h^2) term.

    Only m = 0 problems are supported: the m^2/s^2 centrifugal term
    would reintroduce the near-origin resolution problem this scheme
    exists to avoid.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    if cells < 100:
        raise ValueError(f"cells must be at least 100, got {cells}")
    if prob.m != 0:
        raise ValueError("finite-volume cross-check only supports m = 0")
    coarse = _fv_levels(prob, count, s_max, cells)
    if not richardson:
        return coarse
    fine = _fv_levels(prob, count, s_max, 2 * cells)
    return (4.0 * fine - coarse) / 3.0
