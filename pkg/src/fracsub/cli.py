"""Command-line interface: ``fracsub <command> [options]``.

Exit status: 0 success, 1 failed verification or lint, 2 usage error,
3 parameter-domain error, 4 numerical failure (including a density table
whose mass check fails).
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import (CensoredObservation, ConvergenceError, DiracLimit,
                     ParameterError)
from .specfun import mittag_leffler, wright_f, wright_m
from .stable import StableParams, stable_pdf, tail_coefficient
from .subordination import (QUAD_RTOL, DiffusionParams, drift_green,
                            green_function, tabulate_green)
from .verification import KS_TOL, verify_marginal
from .walker import (WalkConfig, invert_leading, lint_polyline, path_polyline,
                     simulate_walk, step_polyline)

OUTPUT_DIR_ENV = "FRACSUB_OUTPUT_DIR"
MASS_TOL = 1e-2

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN, EXIT_NUMERIC = 0, 1, 2, 3, 4


class _NumericFailure(Exception):
    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return "%.17g" % float(v)


def _csv_text(header, columns, footer=()):
    lines = [",".join(header)]
    for row in zip(*columns):
        lines.append(",".join(_fmt(v) for v in row))
    lines.extend(footer)
    return "\n".join(lines) + "\n"


def _resolve(path):
    if path is None:
        return None
    p = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


def _emit(args, text, meta=None):
    out = _resolve(args.output)
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", newline="\n") as fh:
        fh.write(text)
    if meta is not None and not args.no_meta:
        with open(str(out) + ".meta.json", "w", newline="\n") as fh:
            json.dump(meta, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _config(args):
    skip = {"func", "output", "no_meta"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _abscissae(args, name="x"):
    vals = getattr(args, name)
    if vals:
        return np.array(vals, dtype=float), False
    lo, hi, num = (getattr(args, f"{name}_min"), getattr(args, f"{name}_max"),
                   args.num)
    if lo is None or hi is None:
        raise ParameterError(f"give --{name} values or both --{name}-min and --{name}-max")
    if num < 1 or hi < lo or (num > 1 and hi == lo):
        raise ParameterError("need num >= 1 and min < max")
    return np.linspace(lo, hi, num), True


def _mass_footer(args, xs, us, tail, ranged):
    """Footer with the trapezoid mass, only for --x-min/--x-max tables."""
    if not ranged or xs.size < 2:
        return [], None
    ok = np.isfinite(us[:-1]) & np.isfinite(us[1:])
    mass = float((0.5 * (us[:-1] + us[1:]) * np.diff(xs))[ok].sum() + tail)
    footer = [f"# mass={_fmt(mass)} tail={_fmt(tail)} tol={_fmt(args.mass_tol)}"]
    _check_mass(args, mass, ranged)
    return footer, mass


def _check_mass(args, mass, ranged):
    if ranged and args.mass_check and abs(mass - 1.0) > args.mass_tol:
        raise _NumericFailure(
            f"density table mass {mass:.6g} differs from 1 by more than "
            f"{args.mass_tol:g}; widen the x range or refine the grid",
            achieved=abs(mass - 1.0))


# ------------------------------------------------------------------ commands

def cmd_mlf(args):
    z, _ = _abscissae(args, "z")
    vals = mittag_leffler(args.alpha, args.beta, z)
    _emit(args, _csv_text(["z", "value"], [z, np.atleast_1d(vals)]),
          {"config": _config(args)})
    return EXIT_OK


def cmd_wright(args):
    z, _ = _abscissae(args, "z")
    fn = wright_m if args.kind == "M" else wright_f
    vals = np.atleast_1d(fn(args.nu, z))
    _emit(args, _csv_text(["z", "value"], [z, vals]), {"config": _config(args)})
    return EXIT_OK


def _stable_tail_mass(p, xs):
    if p.alpha == 2.0:
        return 0.0
    tail = 0.0
    if xs[-1] > 0:
        tail += tail_coefficient(p, 1) * xs[-1] ** (-p.alpha) / p.alpha
    if xs[0] < 0:
        tail += tail_coefficient(p, -1) * (-xs[0]) ** (-p.alpha) / p.alpha
    return tail


def cmd_stable_pdf(args):
    p = StableParams(args.alpha, args.theta)
    xs, ranged = _abscissae(args)
    us = np.atleast_1d(stable_pdf(p, xs))
    tail = _stable_tail_mass(p, xs) if xs.size > 1 else 0.0
    footer, mass = _mass_footer(args, xs, us, tail, ranged)
    _emit(args, _csv_text(["x", "u"], [xs, us], footer),
          {"config": _config(args), "mass": mass})
    return EXIT_OK


def cmd_green(args):
    p = DiffusionParams(args.alpha, args.theta, args.beta)
    xs, ranged = _abscissae(args)
    meta = {"config": _config(args), "quad_rtol": QUAD_RTOL, "mass": None}
    footer = []
    if xs.size == 1:
        us = np.atleast_1d(green_function(p, xs[0], args.t))
    else:
        grid = tabulate_green(p, args.t, xs, workers=args.workers)
        us = grid.us
        meta.update(grid.meta, mass=grid.mass, tail_mass=grid.tail_mass)
        if ranged:
            footer = [f"# mass={_fmt(grid.mass)} tail={_fmt(grid.tail_mass)} "
                      f"tol={_fmt(args.mass_tol)}"]
            _check_mass(args, grid.mass, ranged)
    _emit(args, _csv_text(["x", "u"], [xs, us], footer), meta)
    return EXIT_OK


def cmd_drift(args):
    xs, ranged = _abscissae(args)
    us = np.atleast_1d(drift_green(args.beta, xs, args.t))
    footer, mass = _mass_footer(args, xs, us, 0.0, ranged)
    _emit(args, _csv_text(["x", "u"], [xs, us], footer),
          {"config": _config(args), "mass": mass})
    return EXIT_OK


def _walk_configs(args):
    p = DiffusionParams(args.alpha, args.theta, args.beta)
    return [WalkConfig(p, args.tau_star, args.steps, args.seed, args.trajectory_id + k)
            for k in range(args.paths)]


def _path_text(path, plot):
    if plot:
        xs, ys = path_polyline(path, plot)
        return _csv_text(["t", "x"], [xs, ys])
    return _csv_text(["n", "t_star", "t", "x"],
                     [path.n, path.t_star, path.t_bar, path.x_bar])


def _write_paths(args, paths, render):
    if len(paths) == 1:
        _emit(args, render(paths[0]), {"config": _config(args)})
        return
    if args.output is None:
        raise ParameterError("--output is required with --paths > 1")
    out = _resolve(args.output)
    stem, suffix = out.with_suffix(""), out.suffix or ".csv"
    for path in paths:
        name = f"{stem}_{path.config.trajectory_id}{suffix}"
        with open(name, "w", newline="\n") as fh:
            fh.write(render(path))
    if not args.no_meta:
        with open(str(out) + ".meta.json", "w", newline="\n") as fh:
            json.dump({"config": _config(args),
                       "files": [f"{stem.name}_{p.config.trajectory_id}{suffix}"
                                 for p in paths]}, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _simulate(args):
    configs = _walk_configs(args)
    if args.workers > 1 and len(configs) > 1:
        from .walker import simulate_ensemble
        return simulate_ensemble(configs, workers=args.workers)
    return [simulate_walk(c) for c in configs]


def cmd_simulate(args):
    paths = _simulate(args)
    _write_paths(args, paths, lambda p: _path_text(p, args.plot))
    return EXIT_OK


def cmd_invert(args):
    paths = _simulate(args)

    def render(path):
        d = invert_leading(path)
        xs, ys = step_polyline(d.t_jump, d.t_star)
        return _csv_text(["t", "t_star"], [xs, ys])
    _write_paths(args, paths, render)
    return EXIT_OK


def cmd_verify(args):
    p = DiffusionParams(args.alpha, args.theta, args.beta)
    report, x = verify_marginal(p, t_obs=args.t, n_paths=args.paths,
                                tau_star=args.tau_star, seed=args.seed,
                                workers=args.workers, ks_tol=args.ks_tol,
                                return_samples=True)
    if args.samples:
        with open(_resolve(args.samples), "w", newline="\n") as fh:
            fh.write(_csv_text(["trajectory_id", "x"], [np.arange(x.size), x]))
    if args.omit_timing:
        report["runtime_s"] = None
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    _emit(args, text, {"config": _config(args)})
    return EXIT_OK if report["pass"] else EXIT_FAIL


def _read_polyline(path):
    xs, ys = [], []
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        if len(header) != 2:
            raise ParameterError(f"{path}: expected a two-column step-function CSV")
        for line in fh:
            if not line.strip() or line.startswith("#"):
                continue
            a, b = line.split(",")
            xs.append(float(a))
            ys.append(float(b))
    return np.array(xs), np.array(ys)


def cmd_lint(args):
    failed = False
    for name in args.files:
        xs, ys = _read_polyline(name)
        problems = lint_polyline(xs, ys, monotone_y=args.monotone,
                                 require_waiting=args.require_waiting)
        status = "ok" if not problems else "; ".join(problems)
        print(f"{name}: {status}")
        failed |= bool(problems)
    return EXIT_FAIL if failed else EXIT_OK


# ------------------------------------------------------------------ parser

def _positive(v):
    x = float(v)
    if not (x > 0 and math.isfinite(x)):
        raise argparse.ArgumentTypeError(f"{v} is not a positive number")
    return x


def _count(v):
    n = int(v)
    if n < 1:
        raise argparse.ArgumentTypeError(f"{v} is not a positive integer")
    return n


def _nonneg_int(v):
    n = int(v)
    if n < 0:
        raise argparse.ArgumentTypeError(f"{v} is negative")
    return n


def _add_output(sp):
    sp.add_argument("--output", "-o", help=f"output file (relative to ${OUTPUT_DIR_ENV} "
                    "when set); stdout when omitted")
    sp.add_argument("--no-meta", action="store_true",
                    help="do not write the <output>.meta.json sidecar")


def _add_grid(sp, name="x"):
    sp.add_argument(f"--{name}", type=float, nargs="+", help="explicit abscissae")
    sp.add_argument(f"--{name}-min", type=float, dest=f"{name}_min")
    sp.add_argument(f"--{name}-max", type=float, dest=f"{name}_max")
    sp.add_argument("--num", type=int, default=101, help="points for a min/max range")


def _add_mass(sp):
    sp.add_argument("--mass-tol", type=float, default=MASS_TOL,
                    help="allowed |mass - 1| of a ranged table (default %(default)s)")
    sp.add_argument("--no-mass-check", dest="mass_check", action="store_false")


def _add_stable(sp, beta=False):
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--theta", type=float, default=0.0)
    if beta:
        sp.add_argument("--beta", type=float, required=True)


def _add_walk(sp):
    _add_stable(sp, beta=True)
    sp.add_argument("--tau-star", type=_positive, default=1.0, dest="tau_star")
    sp.add_argument("--steps", type=_count, default=1000)
    sp.add_argument("--seed", type=_nonneg_int, default=0)
    sp.add_argument("--trajectory-id", type=_nonneg_int, default=0, dest="trajectory_id")
    sp.add_argument("--paths", type=_count, default=1,
                    help="consecutive trajectory ids; files get an _<id> suffix")
    sp.add_argument("--workers", type=_count, default=1)


def build_parser():
    ap = argparse.ArgumentParser(prog="fracsub", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("mlf", help="Mittag-Leffler function E_{alpha,beta}(z)")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--beta", type=float, default=1.0)
    _add_grid(sp, "z")
    _add_output(sp)
    sp.set_defaults(func=cmd_mlf)

    sp = sub.add_parser("wright", help="Wright auxiliary functions M_nu, F_nu")
    sp.add_argument("--nu", type=float, required=True)
    sp.add_argument("--kind", choices=("M", "F"), default="M")
    _add_grid(sp, "z")
    _add_output(sp)
    sp.set_defaults(func=cmd_wright)

    sp = sub.add_parser("stable-pdf", help="stable density L_alpha^theta(x)")
    _add_stable(sp)
    _add_grid(sp)
    _add_mass(sp)
    _add_output(sp)
    sp.set_defaults(func=cmd_stable_pdf)

    sp = sub.add_parser("green", help="Green function u(x, t) by subordination")
    _add_stable(sp, beta=True)
    sp.add_argument("--t", type=_positive, default=1.0)
    sp.add_argument("--workers", type=_count, default=1)
    _add_grid(sp)
    _add_mass(sp)
    _add_output(sp)
    sp.set_defaults(func=cmd_green)

    sp = sub.add_parser("drift", help="time-fractional drift Green function")
    sp.add_argument("--beta", type=float, required=True)
    sp.add_argument("--t", type=_positive, default=1.0)
    _add_grid(sp)
    _add_mass(sp)
    _add_output(sp)
    sp.set_defaults(func=cmd_drift)

    sp = sub.add_parser("simulate", help="trajectory snapshots or step plot data")
    _add_walk(sp)
    sp.add_argument("--plot", choices=("leading", "parent", "subordinated"),
                    help="emit a step-function polyline (header t,x) instead of snapshots")
    _add_output(sp)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("invert", help="directing path t_*(t) as a step polyline")
    _add_walk(sp)
    _add_output(sp)
    sp.set_defaults(func=cmd_invert)

    sp = sub.add_parser("verify", help="Monte Carlo marginal vs quadrature CDF")
    _add_stable(sp, beta=True)
    sp.add_argument("--t", type=_positive, default=1.0)
    sp.add_argument("--paths", type=_count, default=100_000)
    sp.add_argument("--tau-star", type=_positive, default=1e-3, dest="tau_star")
    sp.add_argument("--seed", type=_nonneg_int, default=0)
    sp.add_argument("--workers", type=_count, default=1)
    sp.add_argument("--ks-tol", type=_positive, default=KS_TOL, dest="ks_tol")
    sp.add_argument("--omit-timing", action="store_true",
                    help="write runtime_s as null so reports are byte-identical")
    sp.add_argument("--samples", help="also write the simulated x(t) per trajectory "
                    "as CSV trajectory_id,x")
    _add_output(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("lint", help="check step-function CSV structure")
    sp.add_argument("files", nargs="+")
    sp.add_argument("--monotone", action="store_true",
                    help="ordinate must never decrease (leading path)")
    sp.add_argument("--require-waiting", action="store_true",
                    help="at least one horizontal segment of positive length")
    sp.set_defaults(func=cmd_lint)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParameterError, DiracLimit, CensoredObservation, OverflowError) as exc:
        print(f"fracsub {args.command}: parameter error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ConvergenceError, _NumericFailure) as exc:
        achieved = getattr(exc, "achieved", None)
        extra = f" (achieved error {achieved:.3g})" if achieved is not None else ""
        print(f"fracsub {args.command}: numerical failure: {exc}{extra}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"fracsub {args.command}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
