"""Dimensionless radial eigenproblem for an electron in B = B0 * rho^n.

Separating exp(i m phi) from the quadratic form of the Dirac equation
and measuring the radius in reduced Compton wavelengths (x = rho /
lambda_e) leaves, per spin projection sigma = +-1,

    -[S'' + S'/x - m^2 S/x^2]
        + [(beta x^(n+1) / (n+2))^2 + z beta x^n] S = alpha S,

with alpha = (E / m_e c^2)^2 - 1 and z = -2m/(n+2) + sigma; the sigma
term is the Zeeman coupling and can be switched off.  Rescaling

    s = x * beta^(1/(n+2))

removes the field strength entirely:

    -[S'' + S'/s - m^2 S/s^2] + V(s) S = alpha_tilde S,
    V(s) = s^(2n+2) / (n+2)^2 + z s^n + m^2 / s^2,
    alpha = alpha_tilde * beta^(2/(n+2)).

One scaled solve therefore serves every field strength.  That keeps B0
sweeps cheap and sidesteps integrating the raw equation at laboratory
fields, where beta ~ 1e-19 and the unscaled problem is hopelessly
stiff.  Everything downstream (QSL velocities, bound curves) is just
arithmetic on alpha_tilde and scaled matrix elements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "QuantumNumbers",
    "ScaledProblem",
    "cutoff_radius",
    "action_cutoff",
    "CUTOFF_MARGIN",
    "SPIN_UP_SIGMA",
    "sigma_for_label",
    "label_for_sigma",
]

# WKB tail action integral(sqrt(V - alpha_tilde) ds) required between
# the outer turning point and the grid boundary.  The eigenfunction
# amplitude at the wall is then ~exp(-25) and the induced eigenvalue
# shift ~exp(-50), far below every tolerance in play.  A margin stated
# in potential-height units would not do: for steep profiles (n ~ 2)
# the potential climbs 25 units within a fraction of a decay length
# and the truncated tail still shifts eigenvalues at the 1e-3 level.
CUTOFF_MARGIN = 25.0

# Display-level convention: "spin-up" denotes the sigma = +1 branch,
# the one whose uniform-field saturation speed is the smaller of the
# two.  Flip swap_spin_labels in the helpers below to relabel plots
# that use the opposite convention.
SPIN_UP_SIGMA = +1


@dataclass(frozen=True)
class QuantumNumbers:
    """Radial level nu >= 0, angular index m, spin projection sigma."""

    nu: int
    m: int = 0
    sigma: int = SPIN_UP_SIGMA

    def __post_init__(self) -> None:
        if self.nu < 0:
            raise ValueError(f"radial quantum number must be >= 0, got {self.nu}")
        if self.sigma not in (+1, -1):
            raise ValueError(f"sigma must be +1 or -1, got {self.sigma}")


def sigma_for_label(label: str, swap_spin_labels: bool = False) -> int:
    """Map a display label ('up'/'down') onto a sigma branch."""
    try:
        sigma = {"up": SPIN_UP_SIGMA, "down": -SPIN_UP_SIGMA}[label]
    except KeyError:
        raise ValueError(f"spin label must be 'up' or 'down', got {label!r}") from None
    return -sigma if swap_spin_labels else sigma


def label_for_sigma(sigma: int, swap_spin_labels: bool = False) -> str:
    if sigma not in (+1, -1):
        raise ValueError(f"sigma must be +1 or -1, got {sigma}")
    if swap_spin_labels:
        sigma = -sigma
    return "up" if sigma == SPIN_UP_SIGMA else "down"


@dataclass(frozen=True)
class ScaledProblem:
    """Field-free form of the radial problem for one (n, m, sigma) branch."""

    n: float
    m: int = 0
    sigma: int = SPIN_UP_SIGMA
    zeeman_enabled: bool = True

    def __post_init__(self) -> None:
        if not self.n > -1.0:
            raise ValueError(f"profile exponent must satisfy n > -1, got n={self.n}")
        if self.sigma not in (+1, -1):
            raise ValueError(f"sigma must be +1 or -1, got {self.sigma}")

    @property
    def spin_coeff(self) -> float:
        """Coefficient z of the linear-in-B term, -2m/(n+2) + sigma."""
        z = -2.0 * self.m / (self.n + 2.0)
        if self.zeeman_enabled:
            z += self.sigma
        return z

    def potential(self, s):
        """Scaled effective potential V(s); accepts scalars or arrays."""
        s = np.asarray(s, dtype=float)
        npl2 = self.n + 2.0
        v = s ** (2.0 * self.n + 2.0) / (npl2 * npl2)
        z = self.spin_coeff
        if z != 0.0:
            v = v + z * s**self.n
        if self.m != 0:
            v = v + (self.m * self.m) / (s * s)
        return v if v.ndim else float(v)

    def origin_series(self, s0: float, alpha_tilde: float) -> tuple[float, float]:
        """Series startup (S, S') at a small radius s0.

        For m = 0 the regular solution is analytic at the origin:
        S = 1 + z s^(n+2)/(n+2)^2 - alpha_tilde s^2/4 + ...; for m != 0
        it rises as s^|m| and the leading power is all that matters at
        the radii used here.
        """
        if s0 <= 0.0:
            raise ValueError(f"series start must be positive, got s0={s0}")
        if self.m == 0:
            z = self.spin_coeff
            npl2 = self.n + 2.0
            val = 1.0 + z * s0**npl2 / (npl2 * npl2) - 0.25 * alpha_tilde * s0 * s0
            der = z * s0 ** (self.n + 1.0) / npl2 - 0.5 * alpha_tilde * s0
            return val, der
        k = abs(self.m)
        return s0**k, k * s0 ** (k - 1.0)

    def outer_cutoff(self, alpha_tilde: float, margin: float = CUTOFF_MARGIN) -> float:
        """Smallest rounded s_max whose WKB tail action reaches `margin`."""
        return action_cutoff(self.potential, alpha_tilde, margin)

    def gamma(self, beta: float) -> float:
        """Coordinate scale x = gamma(beta) * s, gamma = beta^(-1/(n+2))."""
        if not beta > 0.0:
            raise ValueError(f"beta must be positive, got {beta}")
        return beta ** (-1.0 / (self.n + 2.0))

    def alpha_of_alpha_tilde(self, alpha_tilde: float, beta: float) -> float:
        """Physical alpha = alpha_tilde * beta^(2/(n+2))."""
        if not beta > 0.0:
            raise ValueError(f"beta must be positive, got {beta}")
        return alpha_tilde * beta ** (2.0 / (self.n + 2.0))


def cutoff_radius(potential, target: float, rounding: float = 0.01) -> float:
    """Largest s where potential(s) crosses target, rounded up.

    The potentials here all grow without bound, so the crossing exists
    whenever the target exceeds the potential somewhere; the result is
    rounded up to the next multiple of `rounding` so that nearby
    eigenvalues share identical grids.
    """
    return math.ceil(_largest_crossing(potential, target) / rounding) * rounding


def action_cutoff(
    potential, alpha: float, margin: float = CUTOFF_MARGIN, rounding: float = 0.01
) -> float:
    """Smallest rounded s_max accumulating WKB action `margin` past the turning point.

    The action is integral(sqrt(V(s) - alpha) ds) from the outer
    classical turning point out to s_max, so the bound-state tail has
    decayed by a factor ~exp(-margin) at the boundary regardless of how
    steep the potential is.

    When alpha sits below the potential minimum there is no turning
    point; that only happens for bracket probes below the spectrum, so
    precision in the cutoff is irrelevant and the potential-height rule
    stands in.
    """
    turn = _largest_crossing(potential, alpha, missing_ok=True)
    if turn is None:
        floor = _sampled_minimum(potential)
        return cutoff_radius(potential, max(alpha, floor) + margin, rounding)

    def action(s_max: float) -> float:
        s = np.linspace(turn, s_max, 513)
        w = np.sqrt(np.maximum(potential(s) - alpha, 0.0))
        return float(np.trapezoid(w, s))

    s_hi = max(2.0 * turn, turn + 1.0)
    while action(s_hi) < margin:
        s_hi *= 2.0
        if s_hi > 1e9:
            raise ValueError("tail action never reaches the requested margin")
    s_lo = turn
    for _ in range(100):
        mid = 0.5 * (s_lo + s_hi)
        if action(mid) >= margin:
            s_hi = mid
        else:
            s_lo = mid
    return math.ceil(s_hi / rounding) * rounding


def _largest_crossing(potential, target: float, missing_ok: bool = False):
    """Largest s where the (eventually increasing) potential crosses target."""
    # March outward until the potential clears the target.
    s_hi = 1.0
    while potential(s_hi) < target:
        s_hi *= 2.0
        if s_hi > 1e9:
            raise ValueError("potential never exceeds the cutoff target")
    # March inward until it dips below (handles repulsive cores).
    s_lo = s_hi / 2.0
    while potential(s_lo) >= target:
        s_lo /= 2.0
        if s_lo < 1e-12:
            if missing_ok:
                return None
            raise ValueError("potential exceeds the cutoff target everywhere")
    for _ in range(100):
        mid = 0.5 * (s_lo + s_hi)
        if potential(mid) >= target:
            s_hi = mid
        else:
            s_lo = mid
    return s_hi


def _sampled_minimum(potential) -> float:
    """Rough potential minimum from a fixed logarithmic sample."""
    s = np.geomspace(1e-6, 1e6, 2049)
    return float(np.min(potential(s)))
