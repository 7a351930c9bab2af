"""Physical constants and magnetic-field bookkeeping.

Unit conventions
----------------
CGS-Gaussian throughout, with lengths in picometres: a power-law field
profile B = B0 * rho^n carries B0 in Gauss * pm^-n, energies are in erg
and times in seconds.  Radial distances inside the eigenproblem are
measured in units of the reduced Compton wavelength LAMBDA_E_PM, and a
field profile enters the solver only through the dimensionless ratio

    beta = B0 * lambda_e^n / B_cr

so the critical field B_CR_GAUSS is the natural field unit.

The values are CODATA 2018, frozen as literals so that numeric output
never shifts underneath a scipy upgrade; the test suite cross-checks
them against scipy.constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "C_CM_S",
    "C_PM_S",
    "HBAR_ERG_S",
    "MEC2_ERG",
    "E_ESU",
    "LAMBDA_E_PM",
    "B_CR_GAUSS",
    "FieldProfile",
    "to_beta",
    "from_beta",
    "epsilon_of_alpha",
    "energy_erg",
    "velocity_to_c_units",
]

C_CM_S = 2.99792458e10            # speed of light [cm/s], exact
C_PM_S = 2.99792458e20            # speed of light [pm/s]
HBAR_ERG_S = 1.0545718176461565e-27   # hbar = h/2pi [erg s], h exact
E_ESU = 4.803204712570263e-10     # elementary charge [statC], from exact e
MEC2_ERG = 8.1871057769e-7        # electron rest energy m_e c^2 [erg]

# Reduced Compton wavelength hbar c / (m_e c^2), converted cm -> pm.
LAMBDA_E_PM = HBAR_ERG_S * C_CM_S / MEC2_ERG * 1e10

# Critical field m_e^2 c^3 / (hbar e) = (m_e c^2)^2 / (hbar c e) [G];
# about 4.414e13 G.  beta = 1 at B0 = B_cr for a uniform field.
B_CR_GAUSS = MEC2_ERG**2 / (HBAR_ERG_S * C_CM_S * E_ESU)


@dataclass(frozen=True)
class FieldProfile:
    """Axial power-law magnetic field B(rho) = b0 * rho^n (z direction).

    b0 is in Gauss * pm^-n and rho in pm.  The radial eigenproblem stops
    being normalizable at n = -1, so profiles require n > -1.
    """

    b0: float
    n: float

    def __post_init__(self) -> None:
        if not self.b0 > 0.0:
            raise ValueError(f"field coefficient must be positive, got b0={self.b0}")
        if not self.n > -1.0:
            raise ValueError(f"profile exponent must satisfy n > -1, got n={self.n}")


def to_beta(profile: FieldProfile) -> float:
    """Dimensionless field strength beta = b0 * lambda_e^n / B_cr."""
    return profile.b0 * LAMBDA_E_PM**profile.n / B_CR_GAUSS


def from_beta(beta: float, n: float) -> FieldProfile:
    """Field profile with the given beta; exact inverse of to_beta."""
    if not beta > 0.0:
        raise ValueError(f"beta must be positive, got {beta}")
    return FieldProfile(b0=beta * B_CR_GAUSS / LAMBDA_E_PM**n, n=n)


def epsilon_of_alpha(alpha: float) -> float:
    """Energy in rest-mass units, epsilon = E / (m_e c^2) = sqrt(1 + alpha)."""
    if alpha < -1.0:
        raise ValueError(f"alpha = {alpha} < -1 has no real energy")
    return math.sqrt(1.0 + alpha)


def energy_erg(alpha: float) -> float:
    """Level energy E = m_e c^2 sqrt(1 + alpha) [erg], rest mass included."""
    return MEC2_ERG * epsilon_of_alpha(alpha)


def velocity_to_c_units(x_disp: float, delta_eps: float) -> float:
    """Displacement speed v/c = x_disp * delta_eps / pi.

    x_disp is the interference displacement in lambda_e units and
    delta_eps the level gap in rest-mass units; the ratio is exactly
    rho_disp / (c tau_qsl) with the Mandelstam-Tamm time.
    """
    return x_disp * delta_eps / math.pi
