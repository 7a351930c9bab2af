"""Bremermann-Bekenstein bound curves and critical-field extraction.

For each spin branch of a (nu, nu+1) superposition the scan compares
the mean energy <H> = (E_lo + E_hi)/2 (rest mass included) against the
information-rate bound

    rhs = hbar ln2 / (pi tau_qsl) = ln2 (E_hi - E_lo) / pi^2,

taking one processed bit.  <H> > rhs holds identically here, so the
interesting content is the shape: at weak fields <H> is pinned at the
rest mass while rhs climbs linearly (non-relativistic regime), at
strong fields both scale as sqrt(B0) and run parallel (relativistic
regime), with a transition band between.  The region labels follow the
local log-log slopes of a scan.

Two field scales fall out of the branch comparison.  The two rhs
curves of a uniform field start out equal (the non-relativistic gap
does not feel the Zeeman offset) and split as the field turns
relativistic; the field where the relative gap first reaches a
calibrated threshold marks the critical field.  Steeper profiles
instead have unequal gaps from the start, and the curves cross at one
field strength, which serves the same role.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from . import shooting
from .constants import MEC2_ERG, FieldProfile
from .qsl import pair_epsilons

__all__ = [
    "BBScanRow",
    "CriticalFieldResult",
    "NoSeparation",
    "NoCrossing",
    "SCAN_WINDOW",
    "SEPARATION_THRESHOLD",
    "REGION_FLAT_SLOPE",
    "REGION_PARALLEL_RTOL",
    "bb_row",
    "scan",
    "classify_regions",
    "critical_field",
]

# Field window [G pm^-n] every scan and critical-field search covers.
SCAN_WINDOW = (1e10, 1e18)

# Relative rhs gap defining "separated" branches.  Calibrated so the
# uniform-field search lands on the known critical field: at beta = 1
# the analytic gap is 1 - (1 + sqrt(3))/(sqrt(3) + sqrt(5)) = 0.3115.
SEPARATION_THRESHOLD = 0.31

# A mean-energy log-log slope below this is rest-mass-dominated.
REGION_FLAT_SLOPE = 0.05
# Slopes of <H> and rhs agreeing to this relative tolerance count as
# parallel, i.e. fully relativistic.
REGION_PARALLEL_RTOL = 0.05

_LN2_OVER_PI_SQ = math.log(2.0) / math.pi**2


class NoSeparation(RuntimeError):
    """The branch gap never reaches the threshold inside the window."""


class NoCrossing(RuntimeError):
    """The branch rhs curves never cross inside the window."""


@dataclass(frozen=True)
class BBScanRow:
    """Both branches' <H> and rhs at one field coefficient."""

    n: float
    b0: float
    mean_h_up: float
    rhs_up: float
    mean_h_down: float
    rhs_down: float
    region_up: str = ""
    region_down: str = ""


@dataclass(frozen=True)
class CriticalFieldResult:
    """Critical field coefficient q [G pm^-n] and how it was detected."""

    q: float
    mode: str
    threshold_used: float | None

    def __post_init__(self) -> None:
        if not self.q > 0.0:
            raise ValueError(f"critical field must be positive, got {self.q}")


def _branch_values(
    profile: FieldProfile, spin: str, nu: int, steps: int
) -> tuple[float, float]:
    """(mean_H, rhs) in erg for one branch at one field strength."""
    eps_lo, eps_hi, d_eps = pair_epsilons(profile, spin, nu, steps=steps)
    mean_h = 0.5 * (eps_lo + eps_hi) * MEC2_ERG
    rhs = _LN2_OVER_PI_SQ * d_eps * MEC2_ERG
    return mean_h, rhs


def bb_row(
    profile: FieldProfile, nu: int = 0, steps: int = shooting.DEFAULT_STEPS
) -> BBScanRow:
    """Evaluate both spin branches at one field coefficient."""
    mean_up, rhs_up = _branch_values(profile, "up", nu, steps)
    mean_down, rhs_down = _branch_values(profile, "down", nu, steps)
    if not (mean_up > rhs_up and mean_down > rhs_down):
        raise RuntimeError(f"information bound violated at b0={profile.b0}")
    return BBScanRow(
        n=profile.n,
        b0=profile.b0,
        mean_h_up=mean_up,
        rhs_up=rhs_up,
        mean_h_down=mean_down,
        rhs_down=rhs_down,
    )


def scan(
    n: float,
    nu: int = 0,
    window: tuple[float, float] = SCAN_WINDOW,
    points_per_decade: int = 8,
    steps: int = shooting.DEFAULT_STEPS,
) -> list[BBScanRow]:
    """Log-spaced unclassified scan rows across the field window."""
    if points_per_decade < 1:
        raise ValueError(f"points per decade must be >= 1, got {points_per_decade}")
    lo, hi = window
    if not 0.0 < lo < hi:
        raise ValueError(f"bad scan window {window}")
    decades = math.log10(hi / lo)
    count = int(round(decades * points_per_decade)) + 1
    grid = np.geomspace(lo, hi, count)
    return [bb_row(FieldProfile(b0=float(b0), n=n), nu, steps) for b0 in grid]


def classify_regions(rows: Sequence[BBScanRow]) -> list[BBScanRow]:
    """Label each row's branches I (non-relativistic), II, or III.

    Slopes are centered differences of log values against log b0, so
    the rows must be sorted by b0; log spacing keeps the estimates
    uniformly accurate.  Region I is where <H> is still flat, region
    III where <H> and rhs climb at matching rates, II in between.
    """
    if len(rows) < 2:
        raise ValueError("region classification needs at least two rows")
    b0 = np.array([row.b0 for row in rows])
    if not np.all(np.diff(b0) > 0.0):
        raise ValueError("scan rows must be sorted by increasing b0")
    log_b0 = np.log(b0)
    labeled = list(rows)
    for branch in ("up", "down"):
        mean = np.array([getattr(row, f"mean_h_{branch}") for row in rows])
        rhs = np.array([getattr(row, f"rhs_{branch}") for row in rows])
        slope_mean = np.gradient(np.log(mean), log_b0)
        slope_rhs = np.gradient(np.log(rhs), log_b0)
        parallel = np.abs(slope_mean - slope_rhs) <= REGION_PARALLEL_RTOL * np.maximum(
            np.abs(slope_mean), np.abs(slope_rhs)
        )
        for i, row in enumerate(labeled):
            if slope_mean[i] < REGION_FLAT_SLOPE:
                region = "I"
            elif parallel[i]:
                region = "III"
            else:
                region = "II"
            labeled[i] = replace(row, **{f"region_{branch}": region})
    return labeled


def critical_field(
    n: float,
    mode: str,
    threshold: float = SEPARATION_THRESHOLD,
    nu: int = 0,
    window: tuple[float, float] = SCAN_WINDOW,
    steps: int = shooting.DEFAULT_STEPS,
) -> CriticalFieldResult:
    """Critical field coefficient from the branch rhs curves.

    mode 'separation': smallest b0 where |rhs_up - rhs_down| relative
    to the larger reaches `threshold`.  mode 'intersection': the root
    of rhs_up - rhs_down, verified by a sign change.  Both searches
    bisect in log b0 after bracketing on a fine scan of the window.
    """
    if mode not in ("separation", "intersection"):
        raise ValueError(f"mode must be 'separation' or 'intersection', got {mode!r}")
    if mode == "separation" and not 0.0 < threshold < 1.0:
        raise ValueError(f"separation threshold must be in (0, 1), got {threshold}")

    def rhs_pair(log_b0: float) -> tuple[float, float]:
        profile = FieldProfile(b0=math.exp(log_b0), n=n)
        return (
            _branch_values(profile, "up", nu, steps)[1],
            _branch_values(profile, "down", nu, steps)[1],
        )

    def gap(log_b0: float) -> float:
        up, down = rhs_pair(log_b0)
        return abs(up - down) / max(up, down)

    def signed(log_b0: float) -> float:
        up, down = rhs_pair(log_b0)
        return up - down

    lo, hi = window
    decades = math.log10(hi / lo)
    count = int(round(decades * 16)) + 1
    logs = np.linspace(math.log(lo), math.log(hi), count)

    if mode == "separation":
        values = [gap(x) for x in logs]
        if values[0] >= threshold:
            raise NoSeparation(
                f"branches already split by {values[0]:.3f} at the window edge"
            )
        crossing = next((i for i, v in enumerate(values) if v >= threshold), None)
        if crossing is None:
            raise NoSeparation(
                f"branch gap peaks at {max(values):.3f} < {threshold} inside the window"
            )
        x_lo, x_hi = logs[crossing - 1], logs[crossing]
        for _ in range(100):
            mid = 0.5 * (x_lo + x_hi)
            if gap(mid) >= threshold:
                x_hi = mid
            else:
                x_lo = mid
        return CriticalFieldResult(
            q=math.exp(x_hi), mode=mode, threshold_used=threshold
        )

    values = [signed(x) for x in logs]
    bracket = None
    for i in range(len(values) - 1):
        if values[i] == 0.0:
            return CriticalFieldResult(
                q=float(math.exp(logs[i])), mode=mode, threshold_used=None
            )
        if values[i] * values[i + 1] < 0.0:
            bracket = i
            break
    if bracket is None:
        raise NoCrossing("branch rhs curves keep one ordering across the window")
    x_lo, x_hi = logs[bracket], logs[bracket + 1]
    f_lo = values[bracket]
    for _ in range(100):
        mid = 0.5 * (x_lo + x_hi)
        f_mid = signed(mid)
        if f_mid == 0.0:
            x_lo = x_hi = mid
            break
        if (f_mid > 0.0) == (f_lo > 0.0):
            x_lo, f_lo = mid, f_mid
        else:
            x_hi = mid
    return CriticalFieldResult(
        q=math.exp(0.5 * (x_lo + x_hi)), mode=mode, threshold_used=None
    )
