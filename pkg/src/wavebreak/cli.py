"""Command-line experiment runner.

Subcommands: simulate, classify, bounds, phase, portrait, sweep.  Every
command writes its artifacts (CSV, key=value summaries, optional SVG
plots) into the --out directory and prints a short result to stdout.

Exit codes: 0 success, 1 domain errors (inputs outside an operation's
mathematical domain, failed runs), 2 usage errors (unknown flags or
kernels, malformed config).

Flags override an optional key=value config file (--config); keys in the
file use the long option names (e.g. ``kernel=gaussian:1``).
"""

from __future__ import annotations

import argparse
import math
import os
import sys

from . import breaking_theory as bt
from . import plots, reporting
from .errors import ConfigurationError, DomainError, WavebreakError
from .initial_data import build_profile, export_csv, import_csv
from .kernels import parse_kernel
from .phase_plane import Window, integrate, portrait
from .spectral_solver import SolverConfig, run
from .sweep import SweepSpec, run_sweep, sweep_rows_for_csv


def _parse_triple(text: str, what: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigurationError(f"{what} must be lo:hi:count, got {text!r}")
    try:
        return float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigurationError(f"bad {what} {text!r}: {exc}")


def _parse_window(text: str) -> Window:
    parts = text.split(":")
    if len(parts) != 4:
        raise ConfigurationError(f"window must be xmin:xmax:ymin:ymax, got {text!r}")
    try:
        return Window(*(float(p) for p in parts))
    except ValueError as exc:
        raise ConfigurationError(f"bad window {text!r}: {exc}")


def _parse_density(text: str) -> tuple[int, int]:
    parts = text.split(":")
    if len(parts) != 2:
        raise ConfigurationError(f"density must be nx:ny, got {text!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise ConfigurationError(f"bad density {text!r}: {exc}")


def _load_config(path) -> dict[str, str]:
    cfg: dict[str, str] = {}
    try:
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                key, sep, value = line.partition("=")
                if not sep:
                    raise ConfigurationError(
                        f"{path}:{lineno}: expected key=value, got {line!r}")
                cfg[key.strip()] = value.strip()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path}: {exc}")
    return cfg


class _Resolver:
    """Merge precedence: explicit flag > config file > built-in default."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.config = _load_config(args.config) if getattr(args, "config", None) else {}

    def get(self, name: str, default, cast=None):
        val = getattr(self.args, name.replace("-", "_"), None)
        if val is not None:
            return val
        if name in self.config:
            raw = self.config[name]
            try:
                return cast(raw) if cast else raw
            except (TypeError, ValueError) as exc:
                raise ConfigurationError(f"bad config value {name}={raw!r}: {exc}")
        return default


def _outdir(res: _Resolver) -> str:
    out = res.get("out", "out")
    os.makedirs(out, exist_ok=True)
    return out


def _cmd_classify(args) -> int:
    res = _Resolver(args)
    p = bt.SlopePair(res.get("m1", None, float), res.get("m2", None, float))
    k0 = res.get("k0", 1.0, float)
    record = reporting.bounds_summary(p, k0)
    print(record["label"])
    out = _outdir(res)
    reporting.write_summary(os.path.join(out, "classify_summary.txt"), [record])
    return 0


def _cmd_bounds(args) -> int:
    res = _Resolver(args)
    p = bt.SlopePair(res.get("m1", None, float), res.get("m2", None, float))
    k0 = res.get("k0", 1.0, float)
    record = reporting.bounds_summary(p, k0)
    sys.stdout.write(reporting.summary_block(record))
    out = _outdir(res)
    reporting.write_summary(os.path.join(out, "bounds_summary.txt"), [record])
    return 0


def _cmd_simulate(args) -> int:
    res = _Resolver(args)
    kernel = parse_kernel(res.get("kernel", "gaussian:1"))
    cfg = SolverConfig(
        max_time=res.get("horizon", 1.0, float),
        cfl=res.get("cfl", 0.3, float),
        dealias_fraction=res.get("dealias", 2.0 / 3.0, float),
        blowup_slope_factor=res.get("blowup-factor", 50.0, float),
        tail_energy_limit=res.get("tail-limit", 1e-4, float),
        output_stride=res.get("stride", 1, int),
    )
    profile_path = res.get("profile", None)
    if profile_path is not None:
        ic = import_csv(profile_path)
    else:
        a = res.get("m1", None, float)
        b = res.get("m2", None, float)
        if a is None or b is None:
            raise ConfigurationError("simulate needs --m1 and --m2 (or --profile)")
        L = res.get("L", 40.0, float)
        w = res.get("w", 2.0, float)
        n = res.get("n", 1024, int)
        ic = build_profile(a, b, L, w, n)
    report = run(ic, kernel, cfg)
    summary = reporting.sim_summary(report)

    out = _outdir(res)
    export_csv(ic, os.path.join(out, "profile.csv"))
    series_csv = os.path.join(out, "simulation.csv")
    reporting.write_sim_csv(report, series_csv)
    reporting.write_summary(os.path.join(out, "simulation_summary.txt"), [summary])
    if res.get("plot", False):
        ts = summary["t_star"]
        Ts = summary["T_star"]
        origin = report.initial.m1 if summary["theorem_applies"] == "true" else None
        plots.emit_series_plot(
            series_csv, os.path.join(out, "simulation.svg"),
            t_star=ts if math.isfinite(ts) else None,
            T_star=Ts if math.isfinite(Ts) else None,
            envelope_origin_m1=origin,
        )
    msg = f"verdict={summary['verdict']}"
    if report.verdict.time is not None:
        msg += f" time={report.verdict.time!r}"
    if math.isfinite(summary["T_star"]):
        msg += f" T_star={summary['T_star']!r}"
    print(msg)
    return 0


def _cmd_phase(args) -> int:
    res = _Resolver(args)
    p0 = bt.SlopePair(res.get("x0", None, float), res.get("y0", None, float))
    horizon = res.get("horizon", 5.0, float)
    traj = integrate(p0, horizon)
    out = _outdir(res)
    traj_csv = os.path.join(out, "trajectory.csv")
    reporting.write_trajectory_csv(traj, traj_csv)
    summary = reporting.trajectory_summary(traj)
    reporting.write_summary(os.path.join(out, "trajectory_summary.txt"), [summary])
    if res.get("plot", False):
        plots.emit_trajectory_plot(traj_csv, os.path.join(out, "trajectory.svg"))
    print(f"status={traj.status} points={len(traj.t)}")
    return 0


def _cmd_portrait(args) -> int:
    res = _Resolver(args)
    window = _parse_window(res.get("window", "-6:1:-1:7"))
    density = _parse_density(res.get("density", "20:20"))
    grid = portrait(window, density)
    out = _outdir(res)
    arrows_csv = os.path.join(out, "portrait_arrows.csv")
    bounds_csv = os.path.join(out, "portrait_boundaries.csv")
    reporting.write_portrait_csvs(grid, arrows_csv, bounds_csv)
    if res.get("plot", False):
        plots.emit_portrait_plot(arrows_csv, bounds_csv,
                                 os.path.join(out, "portrait.svg"))
    print(f"arrows={grid.U.size}")
    return 0


def _cmd_sweep(args) -> int:
    res = _Resolver(args)
    m1_lo, m1_hi, m1_count = _parse_triple(res.get("m1-range", "-6:-2.2:5"), "m1-range")
    m2_lo, m2_hi, m2_count = _parse_triple(res.get("m2-range", "0:0.9:5"), "m2-range")
    mode = res.get("m2-mode", "fraction_of_parabola")
    if mode == "fraction":
        mode = "fraction_of_parabola"
    backend = res.get("backend", "ode")
    kernel = parse_kernel(res.get("kernel", "gaussian:1"))
    solver = None
    if backend == "pde":
        solver = SolverConfig(
            max_time=res.get("horizon", 1.0, float),
            cfl=res.get("cfl", 0.3, float),
            output_stride=res.get("stride", 4, int),
        )
    spec = SweepSpec(
        m1_lo=m1_lo, m1_hi=m1_hi, m1_count=m1_count,
        m2_mode=mode, m2_lo=m2_lo, m2_hi=m2_hi, m2_count=m2_count,
        kernel=kernel, backend=backend,
        horizon=res.get("horizon", 10.0, float),
        domain_length=res.get("L", 40.0, float),
        bump_width=res.get("w", 2.0, float),
        grid_size=res.get("n", 1024, int),
        solver=solver,
        seed=res.get("seed", None, int),
    )
    result = run_sweep(spec, workers=res.get("workers", 1, int))
    out = _outdir(res)
    reporting.write_rows(os.path.join(out, "sweep.csv"),
                         reporting.SWEEP_HEADER, sweep_rows_for_csv(result))
    broke = [r for r in result.rows if r.verdict == "BrokeAt"]
    in_om = [r for r in broke if r.in_omega]
    margins = [r.margin for r in in_om if math.isfinite(r.margin)]
    summary = {
        "backend": spec.backend,
        "kernel": spec.kernel.description,
        "rows": len(result.rows),
        "broke": len(broke),
        "broke_in_omega": len(in_om),
        "min_margin": min(margins) if margins else math.nan,
        "seed": spec.seed if spec.seed is not None else math.nan,
    }
    reporting.write_summary(os.path.join(out, "sweep_summary.txt"), [summary])
    sys.stdout.write(reporting.summary_block(summary))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wavebreak",
        description="Wave-breaking experiments for nonlocal Whitham-type equations",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="output directory (default: out)")
        p.add_argument("--config", help="key=value config file; flags override")
        p.add_argument("--seed", type=int, help="seed echoed into summaries")

    p = sub.add_parser("classify", help="label a slope pair against the regions")
    p.add_argument("--m1", type=float, required=True)
    p.add_argument("--m2", type=float, required=True)
    p.add_argument("--k0", type=float, help="kernel peak K(0) (default 1)")
    common(p)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("bounds", help="breaking-time bounds for a slope pair")
    p.add_argument("--m1", type=float, required=True)
    p.add_argument("--m2", type=float, required=True)
    p.add_argument("--k0", type=float, help="kernel peak K(0) (default 1)")
    common(p)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("simulate", help="run the PDE solver from a two-bump profile")
    p.add_argument("--m1", type=float, help="target min slope (< 0)")
    p.add_argument("--m2", type=float, help="target max slope (>= 0)")
    p.add_argument("--profile", help="load the initial profile from a CSV instead")
    p.add_argument("--kernel", help="gaussian:s | exponential:l | whitham | tabulated:<csv>")
    p.add_argument("--n", type=int, help="grid size, power of two (default 1024)")
    p.add_argument("--L", type=float, help="domain length (default 40)")
    p.add_argument("--w", type=float, help="bump width (default 2)")
    p.add_argument("--cfl", type=float)
    p.add_argument("--dealias", type=float)
    p.add_argument("--blowup-factor", type=float)
    p.add_argument("--tail-limit", type=float)
    p.add_argument("--horizon", type=float, help="integration horizon (default 1)")
    p.add_argument("--stride", type=int, help="record every k-th step")
    p.add_argument("--plot", action="store_const", const=True)
    common(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("phase", help="integrate one comparison-system trajectory")
    p.add_argument("--x0", type=float, required=True)
    p.add_argument("--y0", type=float, required=True)
    p.add_argument("--horizon", type=float, help="default 5")
    p.add_argument("--plot", action="store_const", const=True)
    common(p)
    p.set_defaults(func=_cmd_phase)

    p = sub.add_parser("portrait", help="sample the slope-plane vector field")
    p.add_argument("--window", help="xmin:xmax:ymin:ymax (default -6:1:-1:7)")
    p.add_argument("--density", help="nx:ny (default 20:20)")
    p.add_argument("--plot", action="store_const", const=True)
    common(p)
    p.set_defaults(func=_cmd_portrait)

    p = sub.add_parser("sweep", help="grid sweep over initial slope pairs")
    p.add_argument("--m1-range", help="lo:hi:count (default -6:-2.2:5)")
    p.add_argument("--m2-range", help="lo:hi:count (default 0:0.9:5)")
    p.add_argument("--m2-mode", choices=["absolute", "fraction", "fraction_of_parabola"])
    p.add_argument("--backend", choices=["ode", "pde"])
    p.add_argument("--kernel")
    p.add_argument("--horizon", type=float)
    p.add_argument("--L", type=float)
    p.add_argument("--w", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--cfl", type=float)
    p.add_argument("--stride", type=int)
    p.add_argument("--workers", type=int, help="worker pool size (default 1)")
    common(p)
    p.set_defaults(func=_cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, WavebreakError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
