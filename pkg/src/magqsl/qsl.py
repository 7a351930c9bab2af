"""Quantum speed limits of two-level superpositions in power-law fields.

An electron prepared in an equal-weight superposition of neighboring
radial levels (nu, nu + 1) of one spin branch oscillates radially with
full swing x_disp = 2 |<nu|x|nu+1>|.  The quantum speed limit is that
displacement divided by the orthogonalization time

    tau_qsl = max(pi hbar / (2 dH), pi hbar / (2 <H>)),

the Mandelstam-Tamm and Margolus-Levitin bounds.  With both level
energies above the rest mass, <H> >= dH always, so the MT bound wins
and v/c reduces to x_disp * (eps_{nu+1} - eps_nu) / pi with energies in
rest-mass units and x_disp in Compton wavelengths.

Everything field-dependent follows from one scaled solve per branch:
alpha = alpha_tilde * t and x = s * beta^(-1/(n+2)) with t =
beta^(2/(n+2)), so sweeps over field strength are pure arithmetic.
Energy gaps are always evaluated as

    delta_eps = (alpha_tilde_hi - alpha_tilde_lo) * t / (eps_lo + eps_hi)

rather than by subtracting the epsilons, which would lose most digits
at laboratory field strengths (beta ~ 1e-13, eps - 1 ~ 1e-26).

As beta grows, eps_i -> sqrt(alpha_tilde_i) * t^(1/2) while the
displacement shrinks like beta^(-1/(n+2)) = t^(-1/2); the two rates
cancel and the QSL saturates at the field-independent value

    sqsl = s_disp * (sqrt(alpha_tilde_hi) - sqrt(alpha_tilde_lo)) / pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

from . import quadrature, shooting
from .constants import (
    HBAR_ERG_S,
    LAMBDA_E_PM,
    MEC2_ERG,
    FieldProfile,
    to_beta,
    velocity_to_c_units,
)
from .problem import ScaledProblem, sigma_for_label

__all__ = [
    "QslPoint",
    "delta_h",
    "mean_energy",
    "tau_qsl",
    "pair_epsilons",
    "qsl_velocity",
    "sweep_b0",
    "sweep_n",
    "sqsl",
    "DEFAULT_SWEEP_B0_RULE",
]

MT = "MT"
ML = "ML"


@dataclass(frozen=True)
class QslPoint:
    """Speed limit of one (nu, nu+1) superposition at one field strength."""

    profile: FieldProfile
    spin: str
    nu: int
    tau_qsl_s: float
    rho_disp_pm: float
    v_over_c: float
    bound_used: str

    @property
    def beta(self) -> float:
        return to_beta(self.profile)


def delta_h(e_low: float, e_high: float) -> float:
    """Energy spread dH = (e_high - e_low) / 2 of the equal superposition."""
    if not (e_high > e_low > 0.0):
        raise ValueError(
            f"need e_high > e_low > 0, got e_low={e_low}, e_high={e_high}"
        )
    return 0.5 * (e_high - e_low)


def mean_energy(e_low: float, e_high: float) -> float:
    """Mean energy <H> = (e_low + e_high) / 2, rest mass included."""
    return 0.5 * (e_low + e_high)


def tau_qsl(e_low: float, e_high: float) -> tuple[float, str]:
    """Orthogonalization time and which bound set it ('MT' or 'ML').

    tau = max(pi hbar / (2 dH), pi hbar / (2 <H>)).  Unlike delta_h this
    accepts non-positive e_low so the max logic is testable with
    synthetic energies; only <H> > 0 and a nonzero gap are required.
    Physical level pairs always have e_low >= m_e c^2 > 0, which makes
    <H> >= dH, so the MT bound wins there.
    """
    if not e_high > e_low:
        raise ValueError(f"need e_high > e_low, got e_low={e_low}, e_high={e_high}")
    mean = mean_energy(e_low, e_high)
    if not mean > 0.0:
        raise ValueError(f"mean energy must be positive, got {mean}")
    return _tau_from(0.5 * (e_high - e_low), mean)


def _tau_from(dh: float, mean: float) -> tuple[float, str]:
    tau_mt = 0.5 * math.pi * HBAR_ERG_S / dh
    tau_ml = 0.5 * math.pi * HBAR_ERG_S / mean
    if tau_mt >= tau_ml:
        return tau_mt, MT
    return tau_ml, ML


@dataclass(frozen=True)
class _PairData:
    """Field-independent data of one (nu, nu+1) pair of a branch."""

    alpha_lo: float
    alpha_hi: float
    s_disp: float


@lru_cache(maxsize=None)
def _pair_data_keyed(
    prob: ScaledProblem, nu: int, steps: int, s0: float, margin: float
) -> _PairData:
    lo, hi = shooting.solve_pair(prob, nu, steps)
    s_disp = 2.0 * abs(quadrature.overlap_s(lo, hi).value)
    return _PairData(lo.alpha_tilde, hi.alpha_tilde, s_disp)


def _pair_data(prob: ScaledProblem, nu: int, steps: int) -> _PairData:
    # The solver overrides join the key so a change in them is never
    # hidden by a stale memo.
    return _pair_data_keyed(
        prob, nu, steps, shooting._effective_s0(prob), shooting._effective_margin()
    )


def _branch_problem(n: float, spin: str, m: int, zeeman_enabled: bool) -> ScaledProblem:
    sigma = sigma_for_label(spin) if zeeman_enabled else +1
    return ScaledProblem(n=n, m=m, sigma=sigma, zeeman_enabled=zeeman_enabled)


def pair_epsilons(
    profile: FieldProfile,
    spin: str = "up",
    nu: int = 0,
    m: int = 0,
    zeeman_enabled: bool = True,
    steps: int = shooting.DEFAULT_STEPS,
) -> tuple[float, float, float]:
    """(eps_lo, eps_hi, delta_eps) of the (nu, nu+1) pair, rest-mass units.

    delta_eps comes from the cancellation-free form, so it stays
    accurate down to arbitrarily weak fields where eps_hi - eps_lo
    would round to zero.
    """
    prob = _branch_problem(profile.n, spin, m, zeeman_enabled)
    pair = _pair_data(prob, nu, steps)
    t = to_beta(profile) ** (2.0 / (profile.n + 2.0))
    eps_lo = math.sqrt(1.0 + pair.alpha_lo * t)
    eps_hi = math.sqrt(1.0 + pair.alpha_hi * t)
    d_eps = (pair.alpha_hi - pair.alpha_lo) * t / (eps_lo + eps_hi)
    return eps_lo, eps_hi, d_eps


def qsl_velocity(
    profile: FieldProfile,
    spin: str = "up",
    nu: int = 0,
    m: int = 0,
    zeeman_enabled: bool = True,
    steps: int = shooting.DEFAULT_STEPS,
) -> QslPoint:
    """Quantum speed limit of the (nu, nu+1) superposition of one branch."""
    prob = _branch_problem(profile.n, spin, m, zeeman_enabled)
    pair = _pair_data(prob, nu, steps)
    eps_lo, eps_hi, d_eps = pair_epsilons(profile, spin, nu, m, zeeman_enabled, steps)
    x_disp = pair.s_disp * to_beta(profile) ** (-1.0 / (profile.n + 2.0))
    v = velocity_to_c_units(x_disp, d_eps)
    if not 0.0 < v < 1.0:
        raise shooting.ConvergenceError(f"speed limit {v} outside (0, 1)")
    tau, bound = _tau_from(0.5 * d_eps * MEC2_ERG, mean_energy(eps_lo, eps_hi) * MEC2_ERG)
    if bound != MT:
        raise AssertionError("MT bound must win for positive-energy levels")
    return QslPoint(
        profile=profile,
        spin=spin if zeeman_enabled else "off",
        nu=nu,
        tau_qsl_s=tau,
        rho_disp_pm=x_disp * LAMBDA_E_PM,
        v_over_c=v,
        bound_used=bound,
    )


def sweep_b0(
    n: float,
    spin: str,
    nu: int,
    b0_grid: Sequence[float],
    m: int = 0,
    zeeman_enabled: bool = True,
    steps: int = shooting.DEFAULT_STEPS,
) -> list[QslPoint]:
    """QSL along a grid of field coefficients at fixed (n, spin, nu).

    The scaled problem is solved once (memoized); each grid point is a
    pure rescaling, so the cost is independent of the grid size and the
    output order is the grid order.
    """
    if len(b0_grid) == 0:
        raise ValueError("b0 grid must be non-empty")
    return [
        qsl_velocity(FieldProfile(b0=b0, n=n), spin, nu, m, zeeman_enabled, steps)
        for b0 in b0_grid
    ]


# Exponent sweeps hold the field coefficient at a magnetar-scale
# 1e17 G pm^-n for every n unless told otherwise.
DEFAULT_SWEEP_B0_RULE: Callable[[float], float] = lambda n: 1e17


def sweep_n(
    n_grid: Sequence[float],
    spin: str,
    nu: int = 0,
    b0_rule: Callable[[float], float] | None = None,
    m: int = 0,
    zeeman_enabled: bool = True,
    steps: int = shooting.DEFAULT_STEPS,
) -> list[QslPoint]:
    """QSL along a grid of profile exponents, one fresh solve per n."""
    if len(n_grid) == 0:
        raise ValueError("n grid must be non-empty")
    rule = b0_rule if b0_rule is not None else DEFAULT_SWEEP_B0_RULE
    return [
        qsl_velocity(FieldProfile(b0=rule(n), n=n), spin, nu, m, zeeman_enabled, steps)
        for n in n_grid
    ]


def sqsl(
    n: float,
    spin: str,
    nu: int = 0,
    m: int = 0,
    zeeman_enabled: bool = True,
    steps: int = shooting.DEFAULT_STEPS,
) -> float:
    """Saturated QSL, the exact beta -> infinity limit of qsl_velocity.

    Closed form s_disp * (sqrt(alpha_hi) - sqrt(alpha_lo)) / pi in
    scaled units; no sampling at large fields is involved.
    """
    prob = _branch_problem(n, spin, m, zeeman_enabled)
    pair = _pair_data(prob, nu, steps)
    # The favored branch's ground level sits exactly at zero; bisection
    # can land a hair below, which sqrt must not see.
    root_lo = math.sqrt(max(pair.alpha_lo, 0.0))
    root_hi = math.sqrt(max(pair.alpha_hi, 0.0))
    return pair.s_disp * (root_hi - root_lo) / math.pi
