"""Command-line driver emitting plot-ready CSV or JSON tables.

Subcommands cover the level spectra, single QSL evaluations, field and
exponent sweeps, saturation values, and the information-bound scans.
All numeric output is written with full float precision and in a fixed
column order, so identical configurations produce byte-identical files.

Flags are `--key value` pairs; a line-oriented `key = value` config
file can supply any of them, with explicit flags taking precedence.
Exit status is 0 on success, 1 when the solver fails, 2 for usage
errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__, bbound, qsl, shooting
from .constants import (
    B_CR_GAUSS,
    C_CM_S,
    E_ESU,
    HBAR_ERG_S,
    LAMBDA_E_PM,
    MEC2_ERG,
    FieldProfile,
    from_beta,
    to_beta,
)
from .problem import ScaledProblem, sigma_for_label
from .quadrature import QuadratureError

__all__ = ["main", "build_parser"]

SPECTRUM_COLUMNS = ("n", "m", "spin", "zeeman", "nu", "alpha_tilde", "alpha", "epsilon")
QSL_COLUMNS = (
    "n", "b0_G_pm_n", "spin", "nu", "beta",
    "tau_qsl_s", "rho_disp_pm", "v_over_c", "bound",
)
BBOUND_COLUMNS = ("n", "b0_G_pm_n", "spin", "meanH_erg", "rhs_erg", "region")
SQSL_COLUMNS = ("n", "spin", "nu", "sqsl_v_over_c")

_LAB_UNIFORM = (0.0, 10.0)
_LAB_GRADIENT = (1.0, 2e-5)


class _UsageError(Exception):
    """Invalid flag or config values; reported with exit status 2."""


def _log_range(text: str) -> tuple[float, float, int]:
    """Parse 'start:stop:points_per_decade' for log-spaced field grids."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(
            f"expected start:stop:points_per_decade, got {text!r}"
        )
    try:
        start, stop, ppd = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad range {text!r}: {exc}") from None
    return start, stop, ppd


def _lin_range(text: str) -> tuple[float, float, float]:
    """Parse 'start:stop:step' for linear exponent grids."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected start:stop:step, got {text!r}")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad range {text!r}: {exc}") from None
    return start, stop, step


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value file supplying flag defaults")
    common.add_argument("--out", default="-", help="output path, '-' for stdout")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--steps", type=int, default=shooting.DEFAULT_STEPS,
                        help="integration steps per shooting sweep")
    common.add_argument("--s0", type=float, default=None,
                        help="override the series start radius")
    common.add_argument("--margin", type=float, default=None,
                        help="override the outer-cutoff action margin")

    parser = argparse.ArgumentParser(
        prog="magqsl",
        description="Landau-level spectra and quantum speed limits in power-law "
                    "magnetic fields",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", parents=[common],
                       help="scaled and physical level energies of each branch")
    p.add_argument("--n", type=float, required=True)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--spin", choices=("up", "down", "both"), default="both")
    p.add_argument("--zeeman", choices=("on", "off", "both-and-off"), default="on")
    p.add_argument("--levels", type=int, default=5)
    p.add_argument("--b0", type=float, default=None, help="field coefficient, G pm^-n")
    p.add_argument("--beta", type=float, default=None,
                   help="dimensionless field strength (default 1 unless --b0 given)")

    p = sub.add_parser("qsl", parents=[common],
                       help="QSL of one level pair at one field strength")
    p.add_argument("--n", type=float, required=True)
    p.add_argument("--b0", type=float, required=True)
    p.add_argument("--spin", choices=("up", "down", "both"), default="both")
    p.add_argument("--nu", type=int, default=0)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--zeeman", choices=("on", "off"), default="on")

    p = sub.add_parser("sweep-b0", parents=[common],
                       help="QSL along a log-spaced field grid")
    p.add_argument("--n", type=float, required=True)
    p.add_argument("--b0-range", type=_log_range, required=True,
                   metavar="START:STOP:PPD")
    p.add_argument("--spin", choices=("up", "down", "both"), default="both")
    p.add_argument("--nu", type=int, default=0)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--zeeman", choices=("on", "off"), default="on")

    p = sub.add_parser("sweep-n", parents=[common],
                       help="QSL along a grid of profile exponents")
    p.add_argument("--n-range", type=_lin_range, required=True,
                   metavar="START:STOP:STEP")
    p.add_argument("--b0", type=float, default=1e17,
                   help="field coefficient applied at every n")
    p.add_argument("--spin", choices=("up", "down", "both"), default="both")
    p.add_argument("--nu", type=int, default=0)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--zeeman", choices=("on", "off"), default="on")

    p = sub.add_parser("sqsl", parents=[common],
                       help="saturated QSL closed-form values")
    p.add_argument("--n", type=float, required=True)
    p.add_argument("--spin", choices=("up", "down", "both"), default="both")
    p.add_argument("--nu", type=int, default=0)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--zeeman", choices=("on", "off"), default="on")

    p = sub.add_parser("bbound", parents=[common],
                       help="information-bound scan and critical-field search")
    p.add_argument("--n", type=float, required=True)
    p.add_argument("--nu", type=int, default=0)
    p.add_argument("--b0-range", type=_log_range, default=None,
                   metavar="START:STOP:PPD",
                   help="scan window override (default 1e10:1e18:8)")
    p.add_argument("--critical", choices=("separation", "intersection"), default=None)
    p.add_argument("--threshold", type=float, default=bbound.SEPARATION_THRESHOLD,
                   help="relative rhs gap defining separation")

    sub.add_parser("lab-example", parents=[common],
                   help="tabletop-field QSL reference values")
    return parser


def _read_config_tokens(path: str) -> list[str]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise _UsageError(f"cannot read config file {path}: {exc}") from None
    tokens: list[str] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, eq, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not eq or not key or not value:
            raise _UsageError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key = key.replace("_", "-")
        if key in ("command", "config"):
            raise _UsageError(f"{path}:{lineno}: {key} cannot be set from a file")
        tokens.extend([f"--{key}", value])
    return tokens


def _parse(parser: argparse.ArgumentParser, argv: list[str]) -> argparse.Namespace:
    config_path = None
    for i, token in enumerate(argv):
        if token == "--config" and i + 1 < len(argv):
            config_path = argv[i + 1]
        elif token.startswith("--config="):
            config_path = token.split("=", 1)[1]
    if config_path is not None and argv and not argv[0].startswith("-"):
        # File tokens go right after the subcommand so explicit flags,
        # parsed later, override them.
        argv = [argv[0]] + _read_config_tokens(config_path) + argv[1:]
    return parser.parse_args(argv)


def _validate(args: argparse.Namespace) -> None:
    n_values: list[float] = []
    if getattr(args, "n", None) is not None:
        n_values.append(args.n)
    if getattr(args, "n_range", None) is not None:
        start, stop, step = args.n_range
        if step <= 0.0:
            raise _UsageError(f"n range step must be positive, got {step}")
        if stop < start:
            raise _UsageError(f"empty n range {start}:{stop}:{step}")
        n_values.extend([start, stop])
    for n in n_values:
        if not n > -1.0:
            raise _UsageError("n must exceed -1")
    if getattr(args, "b0_range", None) is not None:
        start, stop, ppd = args.b0_range
        if not 0.0 < start < stop:
            raise _UsageError(f"field range needs 0 < start < stop, got {start}:{stop}")
        if ppd < 1:
            raise _UsageError(f"points per decade must be >= 1, got {ppd}")
    if getattr(args, "b0", None) is not None and not args.b0 > 0.0:
        raise _UsageError(f"b0 must be positive, got {args.b0}")
    if getattr(args, "beta", None) is not None:
        if not args.beta > 0.0:
            raise _UsageError(f"beta must be positive, got {args.beta}")
        if getattr(args, "b0", None) is not None:
            raise _UsageError("give either --b0 or --beta, not both")
    if getattr(args, "nu", 0) < 0:
        raise _UsageError(f"nu must be >= 0, got {args.nu}")
    if getattr(args, "levels", 1) < 1:
        raise _UsageError(f"levels must be >= 1, got {args.levels}")
    if args.steps < 100:
        raise _UsageError(f"steps must be at least 100, got {args.steps}")
    if args.s0 is not None and not 0.0 < args.s0 < 1.0:
        raise _UsageError(f"s0 must be in (0, 1), got {args.s0}")
    if args.margin is not None and not args.margin > 0.0:
        raise _UsageError(f"margin must be positive, got {args.margin}")
    if getattr(args, "threshold", 0.5) is not None:
        t = getattr(args, "threshold", 0.5)
        if not 0.0 < t < 1.0:
            raise _UsageError(f"threshold must be in (0, 1), got {t}")


def _spin_labels(args: argparse.Namespace) -> list[str]:
    if getattr(args, "zeeman", "on") == "off":
        return ["off"]
    return ["up", "down"] if args.spin == "both" else [args.spin]


def _qsl_row(point: qsl.QslPoint) -> dict:
    return {
        "n": point.profile.n,
        "b0_G_pm_n": point.profile.b0,
        "spin": point.spin,
        "nu": point.nu,
        "beta": point.beta,
        "tau_qsl_s": point.tau_qsl_s,
        "rho_disp_pm": point.rho_disp_pm,
        "v_over_c": point.v_over_c,
        "bound": point.bound_used,
    }


def _qsl_points(args: argparse.Namespace, profile: FieldProfile) -> list[qsl.QslPoint]:
    zeeman = getattr(args, "zeeman", "on") != "off"
    return [
        qsl.qsl_velocity(profile, spin if zeeman else "up", args.nu, args.m,
                         zeeman, args.steps)
        for spin in _spin_labels(args)
    ]


def _log_grid(start: float, stop: float, ppd: int) -> np.ndarray:
    count = int(round(math.log10(stop / start) * ppd)) + 1
    return np.geomspace(start, stop, max(count, 2))


def _run_spectrum(args: argparse.Namespace) -> tuple[tuple, list[dict], str]:
    if args.beta is not None:
        beta = args.beta
    elif args.b0 is not None:
        beta = to_beta(FieldProfile(b0=args.b0, n=args.n))
    else:
        beta = 1.0
    branches: list[tuple[str, int, bool]] = []
    if args.zeeman in ("on", "both-and-off"):
        spins = ("up", "down") if args.spin == "both" else (args.spin,)
        branches += [(s, sigma_for_label(s), True) for s in spins]
    if args.zeeman in ("off", "both-and-off"):
        branches.append(("off", +1, False))
    rows = []
    for label, sigma, zeeman_on in branches:
        prob = ScaledProblem(n=args.n, m=args.m, sigma=sigma, zeeman_enabled=zeeman_on)
        for state in shooting.spectrum(prob, args.levels, beta, args.steps):
            rows.append({
                "n": args.n,
                "m": args.m,
                "spin": label,
                "zeeman": "on" if zeeman_on else "off",
                "nu": state.nu,
                "alpha_tilde": state.alpha_tilde,
                "alpha": state.alpha,
                "epsilon": state.epsilon,
            })
    return SPECTRUM_COLUMNS, rows, f"beta = {beta:.6e}"


def _run_qsl(args: argparse.Namespace) -> tuple[tuple, list[dict], str]:
    profile = FieldProfile(b0=args.b0, n=args.n)
    points = _qsl_points(args, profile)
    return QSL_COLUMNS, [_qsl_row(p) for p in points], f"beta = {to_beta(profile):.6e}"


def _run_sweep_b0(args: argparse.Namespace) -> tuple[tuple, list[dict], str]:
    start, stop, ppd = args.b0_range
    grid = _log_grid(start, stop, ppd)
    zeeman = args.zeeman != "off"
    rows = []
    for spin in _spin_labels(args):
        points = qsl.sweep_b0(args.n, spin if zeeman else "up", args.nu, list(grid),
                              args.m, zeeman, args.steps)
        rows.extend(_qsl_row(p) for p in points)
    return QSL_COLUMNS, rows, f"{len(grid)} field points per branch"


def _run_sweep_n(args: argparse.Namespace) -> tuple[tuple, list[dict], str]:
    start, stop, step = args.n_range
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    grid = [start + k * step for k in range(count)]
    zeeman = args.zeeman != "off"
    rows = []
    for spin in _spin_labels(args):
        points = qsl.sweep_n(grid, spin if zeeman else "up", args.nu,
                             lambda _n: args.b0, args.m, zeeman, args.steps)
        rows.extend(_qsl_row(p) for p in points)
    return QSL_COLUMNS, rows, f"{len(grid)} exponents per branch"


def _run_sqsl(args: argparse.Namespace) -> tuple[tuple, list[dict], str]:
    zeeman = args.zeeman != "off"
    rows = []
    for spin in _spin_labels(args):
        value = qsl.sqsl(args.n, spin if zeeman else "up", args.nu, args.m,
                         zeeman, args.steps)
        rows.append({"n": args.n, "spin": spin, "nu": args.nu,
                     "sqsl_v_over_c": value})
    return SQSL_COLUMNS, rows, "closed-form saturation"


def _run_bbound(args: argparse.Namespace) -> tuple[tuple, list[dict], str]:
    if args.b0_range is not None:
        start, stop, ppd = args.b0_range
        window, per_decade = (start, stop), ppd
    else:
        window, per_decade = bbound.SCAN_WINDOW, 8
    scan_rows = bbound.classify_regions(
        bbound.scan(args.n, args.nu, window, per_decade, args.steps)
    )
    rows = []
    for row in scan_rows:
        for spin in ("up", "down"):
            rows.append({
                "n": row.n,
                "b0_G_pm_n": row.b0,
                "spin": spin,
                "meanH_erg": getattr(row, f"mean_h_{spin}"),
                "rhs_erg": getattr(row, f"rhs_{spin}"),
                "region": getattr(row, f"region_{spin}"),
            })
    note = f"{len(scan_rows)} field points"
    if args.critical is not None:
        result = bbound.critical_field(args.n, args.critical, args.threshold,
                                       args.nu, window, args.steps)
        note += f"; critical field ({result.mode}) Q = {result.q:.6e} G pm^-n"
    return BBOUND_COLUMNS, rows, note


def _run_lab_example(args: argparse.Namespace) -> tuple[tuple, list[dict], str]:
    rows = []
    n0, b0 = _LAB_UNIFORM
    uniform = qsl.qsl_velocity(FieldProfile(b0=b0, n=n0), "up", steps=args.steps)
    row = _qsl_row(uniform)
    row["spin"] = "both"  # the uniform-field gap is spin-independent
    rows.append(row)
    n1, b1 = _LAB_GRADIENT
    for spin in ("up", "down"):
        point = qsl.qsl_velocity(FieldProfile(b0=b1, n=n1), spin, steps=args.steps)
        rows.append(_qsl_row(point))
    return QSL_COLUMNS, rows, "tabletop reference fields"


_RUNNERS = {
    "spectrum": _run_spectrum,
    "qsl": _run_qsl,
    "sweep-b0": _run_sweep_b0,
    "sweep-n": _run_sweep_n,
    "sqsl": _run_sqsl,
    "bbound": _run_bbound,
    "lab-example": _run_lab_example,
}


def _format_cell(value) -> str:
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return f"{value:.16e}"
    return str(value)


def _render_csv(columns: tuple, rows: list[dict]) -> str:
    lines = [",".join(columns)]
    lines += [",".join(_format_cell(row[c]) for c in columns) for row in rows]
    return "\n".join(lines) + "\n"


def _render_json(columns: tuple, rows: list[dict], args: argparse.Namespace) -> str:
    skip = {"config", "out", "format"}
    params = {
        key: value for key, value in sorted(vars(args).items()) if key not in skip
    }
    doc = {
        "meta": {
            "artifact": "magqsl",
            "version": __version__,
            "command": args.command,
            "constants": {
                "c_cm_s": C_CM_S,
                "hbar_erg_s": HBAR_ERG_S,
                "mec2_erg": MEC2_ERG,
                "e_esu": E_ESU,
                "lambda_e_pm": LAMBDA_E_PM,
                "b_cr_gauss": B_CR_GAUSS,
            },
            "solver": {"steps": args.steps, "s0": args.s0, "margin": args.margin},
            "params": params,
        },
        "rows": rows,
    }
    return json.dumps(doc, indent=2, default=str) + "\n"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    raw = list(sys.argv[1:] if argv is None else argv)
    try:
        args = _parse(parser, raw)
        _validate(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    shooting.set_solver_overrides(args.s0, args.margin)
    try:
        columns, rows, note = _RUNNERS[args.command](args)
        text = (_render_csv(columns, rows) if args.format == "csv"
                else _render_json(columns, rows, args))
    except (shooting.BracketError, shooting.ConvergenceError, QuadratureError,
            bbound.NoSeparation, bbound.NoCrossing, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.out == "-":
        sys.stdout.write(text)
        print(f"{args.command}: {len(rows)} rows ({note})", file=sys.stderr)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        print(f"{args.command}: {len(rows)} rows -> {args.out} ({note})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
