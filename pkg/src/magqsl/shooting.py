"""Shooting-method eigensolver for the scaled radial problem.

Integrates S'' + S'/s + (alpha_tilde - V(s)) S = 0 outward from a
series start near the origin with fixed-step classical RK4, counts
sign changes, and bisects in alpha_tilde until the node count flips
from nu to nu + 1.  The returned eigenfunction is assembled two-sided:
outward up to the outer classical turning point, inward from the far
boundary, glued there.  One-sided shooting would leave round-off
feeding the growing solution across the forbidden region, which ruins
the tail even when the eigenvalue itself is converged.

Grids start at s0 = 1e-6 (1e-4 for -1 < n < 0, where the potential is
singular at the origin and the first few percent of points are placed
geometrically instead of uniformly).  The outer boundary is the
smallest rounded radius accumulating WKB tail action CUTOFF_MARGIN
beyond the outer turning point, so the tail always decays by the same
factor before the wall no matter how steep the potential is.

Converged alpha_tilde values are cached in memory per process, keyed
by (n, m, spin, zeeman, nu, steps).  Setting QSL_CACHE_DIR additionally
persists them as JSON lines; a missing or stale cache file is never an
error, and cached values are bit-identical to recomputation, so warm
and cold runs produce identical output.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numba import njit

from . import quadrature
from .constants import epsilon_of_alpha
from .problem import CUTOFF_MARGIN, ScaledProblem

__all__ = [
    "BracketError",
    "ConvergenceError",
    "RadialSolution",
    "EigenState",
    "DEFAULT_STEPS",
    "converged_alpha_tilde",
    "solve_level",
    "solve_pair",
    "spectrum",
    "solve_custom_potential",
    "set_solver_overrides",
]

DEFAULT_STEPS = 40_000
BISECT_RTOL = 1e-10
# Eigenvalues closer to zero than this are the exact zero mode plus
# bisection noise (termination width ~3e-11); see converged_alpha_tilde.
ZERO_SNAP = 1e-9
BRACKET_CEILING = 1e6
OVERFLOW_GUARD = 0.5e300
# Fraction of points given geometric spacing when the origin is singular.
_GRADED_FRACTION = 0.05


class BracketError(RuntimeError):
    """No sign-change bracket found below the scan ceiling."""


class ConvergenceError(RuntimeError):
    """Bisection or eigenfunction assembly failed to converge."""


@dataclass(frozen=True)
class RadialSolution:
    """Sampled radial eigenfunction S(s) with its converged eigenvalue."""

    grid: np.ndarray
    values: np.ndarray
    alpha_tilde: float
    nodes: int
    norm_factor: float = 1.0


@dataclass(frozen=True)
class EigenState:
    """One bound level mapped to a physical field strength."""

    problem: ScaledProblem
    nu: int
    alpha_tilde: float
    alpha: float
    epsilon: float
    radial: RadialSolution


# ----------------------------------------------------------------------
# fixed-step RK4 kernels
# ----------------------------------------------------------------------


@njit(cache=True)
def _rk4_outward(h, vn, vm, isn, ism, alpha, s_init, p_init, guard):
    """Sweep origin -> s_max; returns S, S', node count, last sign, last index."""
    nsteps = h.shape[0]
    s_arr = np.zeros(nsteps + 1)
    p_arr = np.zeros(nsteps + 1)
    s_arr[0] = s_init
    p_arr[0] = p_init
    cs = s_init
    cp = p_init
    nodes = 0
    prev = 0.0
    if s_init > 0.0:
        prev = 1.0
    elif s_init < 0.0:
        prev = -1.0
    last = nsteps
    for i in range(nsteps):
        hi = h[i]
        d1s = cp
        d1p = -isn[i] * cp + (vn[i] - alpha) * cs
        s2 = cs + 0.5 * hi * d1s
        p2 = cp + 0.5 * hi * d1p
        d2s = p2
        d2p = -ism[i] * p2 + (vm[i] - alpha) * s2
        s3 = cs + 0.5 * hi * d2s
        p3 = cp + 0.5 * hi * d2p
        d3s = p3
        d3p = -ism[i] * p3 + (vm[i] - alpha) * s3
        s4 = cs + hi * d3s
        p4 = cp + hi * d3p
        d4s = p4
        d4p = -isn[i + 1] * p4 + (vn[i + 1] - alpha) * s4
        cs = cs + hi * (d1s + 2.0 * d2s + 2.0 * d3s + d4s) / 6.0
        cp = cp + hi * (d1p + 2.0 * d2p + 2.0 * d3p + d4p) / 6.0
        s_arr[i + 1] = cs
        p_arr[i + 1] = cp
        if abs(cs) > guard or abs(cp) > guard:
            last = i + 1
            break
        sgn = 0.0
        if cs > 0.0:
            sgn = 1.0
        elif cs < 0.0:
            sgn = -1.0
        if sgn != 0.0:
            if prev != 0.0 and sgn != prev:
                nodes += 1
            prev = sgn
    return s_arr, p_arr, nodes, prev, last


@njit(cache=True)
def _rk4_inward(h, vn, vm, isn, ism, alpha, i_match, s_init, p_init, guard):
    """Sweep s_max -> grid[i_match]; stable for the decaying solution."""
    nsteps = h.shape[0]
    s_arr = np.zeros(nsteps + 1)
    p_arr = np.zeros(nsteps + 1)
    s_arr[nsteps] = s_init
    p_arr[nsteps] = p_init
    cs = s_init
    cp = p_init
    ok = True
    for i in range(nsteps - 1, i_match - 1, -1):
        hi = -h[i]
        d1s = cp
        d1p = -isn[i + 1] * cp + (vn[i + 1] - alpha) * cs
        s2 = cs + 0.5 * hi * d1s
        p2 = cp + 0.5 * hi * d1p
        d2s = p2
        d2p = -ism[i] * p2 + (vm[i] - alpha) * s2
        s3 = cs + 0.5 * hi * d2s
        p3 = cp + 0.5 * hi * d2p
        d3s = p3
        d3p = -ism[i] * p3 + (vm[i] - alpha) * s3
        s4 = cs + hi * d3s
        p4 = cp + hi * d3p
        d4s = p4
        d4p = -isn[i] * p4 + (vn[i] - alpha) * s4
        cs = cs + hi * (d1s + 2.0 * d2s + 2.0 * d3s + d4s) / 6.0
        cp = cp + hi * (d1p + 2.0 * d2p + 2.0 * d3p + d4p) / 6.0
        s_arr[i] = cs
        p_arr[i] = cp
        if abs(cs) > guard or abs(cp) > guard:
            ok = False
            break
    return s_arr, p_arr, ok


# ----------------------------------------------------------------------
# grids and tabulated potentials
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class _Setup:
    """Everything the driver needs besides the trial eigenvalue."""

    potential: Callable
    origin: Callable
    cutoff: Callable
    s0: float
    graded: bool
    steps: int


@dataclass(frozen=True)
class _Tab:
    grid: np.ndarray
    h: np.ndarray
    vn: np.ndarray
    vm: np.ndarray
    isn: np.ndarray
    ism: np.ndarray


# Process-wide overrides of the grid start and cutoff margin, mainly
# for the command line's solver flags.  None means the built-in rule.
_S0_OVERRIDE: float | None = None
_MARGIN_OVERRIDE: float | None = None


def set_solver_overrides(s0: float | None = None, margin: float | None = None) -> None:
    """Override the series start s0 and/or the cutoff action margin.

    Applies process-wide to every later solve; pass None to restore a
    rule to its default.  Overridden values become part of the cache
    key, so results computed under different settings never mix.
    """
    global _S0_OVERRIDE, _MARGIN_OVERRIDE
    if s0 is not None and not 0.0 < s0 < 1.0:
        raise ValueError(f"s0 must be in (0, 1), got {s0}")
    if margin is not None and not margin > 0.0:
        raise ValueError(f"cutoff margin must be positive, got {margin}")
    _S0_OVERRIDE = s0
    _MARGIN_OVERRIDE = margin


def _effective_s0(prob: ScaledProblem) -> float:
    if _S0_OVERRIDE is not None:
        return _S0_OVERRIDE
    return 1e-4 if prob.n < 0.0 else 1e-6


def _effective_margin() -> float:
    return CUTOFF_MARGIN if _MARGIN_OVERRIDE is None else _MARGIN_OVERRIDE


def _setup_for(prob: ScaledProblem, steps: int) -> _Setup:
    if steps < 100:
        raise ValueError(f"steps must be at least 100, got {steps}")
    singular_origin = prob.n < 0.0 or prob.m != 0
    margin = _effective_margin()
    return _Setup(
        potential=prob.potential,
        origin=prob.origin_series,
        cutoff=lambda alpha: prob.outer_cutoff(alpha, margin),
        s0=_effective_s0(prob),
        graded=singular_origin,
        steps=steps,
    )


def _build_grid(s0: float, s_max: float, steps: int, graded: bool) -> np.ndarray:
    if s_max <= s0:
        raise ValueError(f"cutoff {s_max} not beyond series start {s0}")
    if not graded:
        return np.linspace(s0, s_max, steps + 1)
    # Geometric spacing over the first few percent of points resolves a
    # singular origin, then the rest of the domain is uniform.
    head = max(2, int(_GRADED_FRACTION * steps))
    s_break = s0 + _GRADED_FRACTION * (s_max - s0)
    head_pts = np.geomspace(s0, s_break, head + 1)
    tail_pts = np.linspace(s_break, s_max, steps - head + 1)
    return np.concatenate((head_pts, tail_pts[1:]))


def _tabulate_grid(potential, grid: np.ndarray) -> _Tab:
    mids = 0.5 * (grid[:-1] + grid[1:])
    return _Tab(
        grid=grid,
        h=np.diff(grid),
        vn=np.asarray(potential(grid), dtype=float),
        vm=np.asarray(potential(mids), dtype=float),
        isn=1.0 / grid,
        ism=1.0 / mids,
    )


def _tabulate(setup: _Setup, s_max: float) -> _Tab:
    grid = _build_grid(setup.s0, s_max, setup.steps, setup.graded)
    return _tabulate_grid(setup.potential, grid)


# ----------------------------------------------------------------------
# eigenvalue location
# ----------------------------------------------------------------------


def _probe_on(tab: _Tab, setup: _Setup, alpha: float) -> tuple[int, float]:
    s_init, p_init = setup.origin(tab.grid[0], alpha)
    _, _, nodes, term, _ = _rk4_outward(
        tab.h, tab.vn, tab.vm, tab.isn, tab.ism, alpha, s_init, p_init, OVERFLOW_GUARD
    )
    return nodes, term


def _probe(setup: _Setup, alpha: float) -> tuple[int, float]:
    return _probe_on(_tabulate(setup, setup.cutoff(alpha)), setup, alpha)


def _locate_alpha(setup: _Setup, nu: int) -> float:
    """Node-count doubling scan from 0, then bisection on the transition."""
    parity = 1.0 if nu % 2 == 0 else -1.0

    def above(nodes: int, term: float) -> bool:
        # Past the nu-th eigenvalue the sweep gains its (nu+1)-th sign
        # change; the parity check catches a tail flip whose node falls
        # beyond the last sample.
        return nodes > nu or (nodes == nu and term * parity < 0.0)

    if above(*_probe(setup, 0.0)):
        hi, lo = 0.0, -1.0
        while above(*_probe(setup, lo)):
            hi = lo
            lo *= 2.0
            if -lo > BRACKET_CEILING:
                raise BracketError(
                    f"no lower bracket for level {nu} above alpha_tilde = -{BRACKET_CEILING:g}"
                )
    else:
        lo, hi = 0.0, 1.0
        while not above(*_probe(setup, hi)):
            lo = hi
            hi *= 2.0
            if hi > BRACKET_CEILING:
                raise BracketError(
                    f"no upper bracket for level {nu} below alpha_tilde = {BRACKET_CEILING:g}"
                )

    # The grid is frozen at the bracket ceiling for the bisection phase
    # so every trial sees the same discretization.
    tab = _tabulate(setup, setup.cutoff(max(hi, 0.0)))
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo <= BISECT_RTOL * max(1.0, abs(mid)):
            return mid
        if above(*_probe_on(tab, setup, mid)):
            hi = mid
        else:
            lo = mid
    raise ConvergenceError(
        f"bisection for level {nu} did not reach tolerance {BISECT_RTOL:g}"
    )


# ----------------------------------------------------------------------
# eigenfunction assembly
# ----------------------------------------------------------------------


def _count_nodes(values: np.ndarray) -> int:
    sg = np.sign(values)
    sg = sg[sg != 0.0]
    return int(np.count_nonzero(sg[1:] != sg[:-1]))


def _assemble(setup: _Setup, tab: _Tab, alpha: float, nu: int) -> np.ndarray:
    s_init, p_init = setup.origin(tab.grid[0], alpha)
    s_out, p_out, _, _, last = _rk4_outward(
        tab.h, tab.vn, tab.vm, tab.isn, tab.ism, alpha, s_init, p_init, OVERFLOW_GUARD
    )
    if last < tab.h.shape[0]:
        raise ConvergenceError(
            f"outward sweep overflowed at s = {tab.grid[last]:.3g} "
            f"for alpha_tilde = {alpha:.6g}"
        )

    allowed = np.nonzero(tab.vn <= alpha)[0]
    if allowed.size == 0:
        raise ConvergenceError(
            f"alpha_tilde = {alpha:.6g} lies below the potential everywhere"
        )
    i_match = int(allowed[-1])
    i_match = min(max(i_match, 1), tab.grid.size - 2)
    # Step off an accidental node at the matching radius; moving inward
    # heads toward the last antinode, where the amplitude is large.
    peak = float(np.max(np.abs(s_out[: i_match + 1])))
    dodged = 0
    while abs(s_out[i_match]) < 1e-8 * peak and dodged < 50 and i_match > 1:
        i_match -= 1
        dodged += 1
    if abs(s_out[i_match]) < 1e-8 * peak:
        raise ConvergenceError("no usable matching radius near the turning point")

    tail_amp = 1e-150
    p_far = -tail_amp * math.sqrt(tab.vn[-1] - alpha)
    s_in, p_in, ok = _rk4_inward(
        tab.h, tab.vn, tab.vm, tab.isn, tab.ism, alpha, i_match, tail_amp, p_far,
        OVERFLOW_GUARD,
    )
    if not ok:
        raise ConvergenceError("inward sweep overflowed; domain margin too deep")

    scale = s_out[i_match] / s_in[i_match]
    if not math.isfinite(scale):
        raise ConvergenceError("degenerate matching between sweeps")
    ld_out = p_out[i_match] / s_out[i_match]
    ld_in = p_in[i_match] / s_in[i_match]
    if abs(ld_out - ld_in) > 1e-3 * (1.0 + abs(ld_out)):
        raise ConvergenceError(
            f"log-derivative mismatch {abs(ld_out - ld_in):.3e} at the matching "
            f"radius; alpha_tilde = {alpha:.9g} is not an eigenvalue of this grid"
        )

    values = np.concatenate((s_out[: i_match + 1], s_in[i_match + 1 :] * scale))
    nodes = _count_nodes(values)
    if nodes != nu:
        raise ConvergenceError(
            f"assembled solution has {nodes} nodes, expected {nu}"
        )
    return values


# ----------------------------------------------------------------------
# eigenvalue cache
# ----------------------------------------------------------------------

_MEM_CACHE: dict[tuple, float] = {}
_LOADED_PATH: str | None = None


def _cache_path() -> str | None:
    root = os.environ.get("QSL_CACHE_DIR")
    if not root:
        return None
    return os.path.join(root, "alpha_tilde_cache.jsonl")


def _cache_key(prob: ScaledProblem, nu: int, steps: int) -> tuple:
    # Without the Zeeman term both sigma branches coincide.
    sigma = prob.sigma if prob.zeeman_enabled else 0
    return (
        float(prob.n), int(prob.m), sigma, bool(prob.zeeman_enabled),
        int(nu), int(steps), float(_effective_s0(prob)), float(_effective_margin()),
    )


def _load_persistent() -> None:
    global _LOADED_PATH
    path = _cache_path()
    if path == _LOADED_PATH:
        return
    _LOADED_PATH = path
    if path is None:
        return
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError:
        return
    for line in lines:
        try:
            rec = json.loads(line)
            key = (
                float(rec["n"]), int(rec["m"]), int(rec["spin"]),
                bool(rec["zeeman"]), int(rec["nu"]), int(rec["steps"]),
                float(rec["s0"]), float(rec["margin"]),
            )
            _MEM_CACHE.setdefault(key, float(rec["alpha_tilde"]))
        except (ValueError, KeyError, TypeError):
            continue  # self-describing format: skip anything unreadable


def _store(key: tuple, alpha: float) -> None:
    _MEM_CACHE[key] = alpha
    path = _cache_path()
    if path is None:
        return
    rec = {
        "n": key[0], "m": key[1], "spin": key[2], "zeeman": key[3],
        "nu": key[4], "steps": key[5], "s0": key[6], "margin": key[7],
        "alpha_tilde": alpha,
    }
    try:
        os.makedirs(os.path.dirname(path), exist_ok=True)
        with open(path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(rec) + "\n")
    except OSError:
        pass  # persistence is best-effort; memory cache already updated


def converged_alpha_tilde(prob: ScaledProblem, nu: int, steps: int = DEFAULT_STEPS) -> float:
    """Converged scaled eigenvalue for one level, cached.

    The radial operator is the square of a first-order one, so its
    spectrum is nonnegative; the favored spin branch's ground level
    sits exactly at zero, where bisection noise lands within its
    termination width on either side.  Values inside ZERO_SNAP are
    therefore returned as an exact zero, which keeps downstream
    rescaling (alpha = alpha_tilde * t with t arbitrarily large) from
    manufacturing negative squared energies.
    """
    if nu < 0:
        raise ValueError(f"radial quantum number must be >= 0, got {nu}")
    _load_persistent()
    key = _cache_key(prob, nu, steps)
    if key in _MEM_CACHE:
        return _MEM_CACHE[key]
    alpha = _locate_alpha(_setup_for(prob, steps), nu)
    if abs(alpha) < ZERO_SNAP:
        alpha = 0.0
    _store(key, alpha)
    return alpha


# ----------------------------------------------------------------------
# public solver entry points
# ----------------------------------------------------------------------


def solve_level(
    prob: ScaledProblem,
    nu: int,
    steps: int = DEFAULT_STEPS,
    grid: np.ndarray | None = None,
) -> RadialSolution:
    """Normalized radial eigenfunction of one level.

    A caller-supplied grid overrides the level's own cutoff, which is
    how several levels end up sampled on a common grid for overlaps.
    """
    setup = _setup_for(prob, steps)
    alpha = converged_alpha_tilde(prob, nu, steps)
    if grid is None:
        tab = _tabulate(setup, setup.cutoff(alpha))
    else:
        tab = _tabulate_grid(setup.potential, np.asarray(grid, dtype=float))
    values = _assemble(setup, tab, alpha, nu)
    sol = RadialSolution(grid=tab.grid, values=values, alpha_tilde=alpha, nodes=nu)
    return quadrature.normalize(sol)


def solve_pair(
    prob: ScaledProblem, nu: int, steps: int = DEFAULT_STEPS
) -> tuple[RadialSolution, RadialSolution]:
    """Levels nu and nu+1 on a common grid sized for the upper one."""
    setup = _setup_for(prob, steps)
    a_hi = converged_alpha_tilde(prob, nu + 1, steps)
    grid = _build_grid(setup.s0, setup.cutoff(a_hi), steps, setup.graded)
    return solve_level(prob, nu, steps, grid), solve_level(prob, nu + 1, steps, grid)


def spectrum(
    prob: ScaledProblem, count: int, beta: float = 1.0, steps: int = DEFAULT_STEPS
) -> list[EigenState]:
    """First `count` levels as EigenStates at field strength beta.

    All radial solutions share the grid of the highest level, so matrix
    elements between any two of them are directly computable.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    setup = _setup_for(prob, steps)
    alphas = [converged_alpha_tilde(prob, k, steps) for k in range(count)]
    if any(b <= a for a, b in zip(alphas, alphas[1:])):
        raise ConvergenceError(f"spectrum not strictly increasing: {alphas}")
    grid = _build_grid(setup.s0, setup.cutoff(alphas[-1]), setup.steps, setup.graded)
    states = []
    for k in range(count):
        sol = solve_level(prob, k, steps, grid)
        alpha = prob.alpha_of_alpha_tilde(alphas[k], beta)
        states.append(
            EigenState(
                problem=prob,
                nu=k,
                alpha_tilde=alphas[k],
                alpha=alpha,
                epsilon=epsilon_of_alpha(alpha),
                radial=sol,
            )
        )
    return states


def solve_custom_potential(
    potential,
    origin,
    cutoff,
    nu: int,
    steps: int = DEFAULT_STEPS,
    s0: float = 1e-6,
    graded: bool = False,
) -> RadialSolution:
    """Solve an arbitrary radial potential with the same machinery.

    `potential` maps s-arrays to V values, `origin(s0, alpha)` gives the
    series start and `cutoff(alpha)` the outer radius.  Used to check
    the scaling refactor against the raw field-dependent equation, and
    handy for one-off potentials; results are not cached.
    """
    setup = _Setup(
        potential=potential, origin=origin, cutoff=cutoff,
        s0=s0, graded=graded, steps=steps,
    )
    alpha = _locate_alpha(setup, nu)
    tab = _tabulate(setup, setup.cutoff(alpha))
    values = _assemble(setup, tab, alpha, nu)
    sol = RadialSolution(grid=tab.grid, values=values, alpha_tilde=alpha, nodes=nu)
    return quadrature.normalize(sol)
