"""CSV and summary serialization for simulation and analysis artifacts.

All files are UTF-8, '.' decimal separator, no locale dependence.  Floats
are written with repr() so every emitted value round-trips exactly and
identical inputs produce byte-identical files.  Missing numeric values are
written as ``nan``.  Summaries are flat key=value blocks, one record per
line group (blank-line separated), keys in a fixed order.
"""

from __future__ import annotations

import csv
import math

import numpy as np

from . import breaking_theory as bt
from .errors import ConfigurationError, SingularityError
from .kernels import k_at_origin
from .phase_plane import PortraitGrid, Trajectory
from .spectral_solver import ExtremaSample, SimReport

SIM_HEADER = ["t", "m1", "m2", "xi1", "xi2", "dt", "tail_ratio"]
TRAJ_HEADER = ["t", "x", "y"]
ARROW_HEADER = ["x", "y", "u", "v"]
BOUNDARY_HEADER = ["curve", "x", "y"]
SWEEP_HEADER = ["m1", "m2", "label", "in_omega", "t_star", "T_star",
                "verdict", "t_break", "margin", "s_hit", "omega_exit"]


def _fmt(v) -> str:
    if v is None:
        return "nan"
    if isinstance(v, float):
        return repr(float(v))  # plain-float repr (np.float64 reprs differently)
    return str(v)


def write_rows(path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _read_rows(path, header: list[str]):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        got = next(reader, None)
        if got != header:
            raise ConfigurationError(
                f"{path}: expected header {','.join(header)}, got {got}")
        out = []
        for row in reader:
            if not row:
                continue
            if len(row) != len(header):
                raise ConfigurationError(f"{path}: malformed row {row}")
            out.append(row)
        return out


def write_sim_csv(report: SimReport, path) -> None:
    write_rows(path, SIM_HEADER,
               [(s.t, s.m1, s.m2, s.xi1, s.xi2, s.dt_used, s.tail_ratio)
                for s in report.series])


def read_sim_csv(path) -> list[ExtremaSample]:
    rows = _read_rows(path, SIM_HEADER)
    try:
        return [ExtremaSample(t=float(r[0]), m1=float(r[1]), m2=float(r[2]),
                              xi1=float(r[3]), xi2=float(r[4]),
                              dt_used=float(r[5]), tail_ratio=float(r[6]))
                for r in rows]
    except ValueError as exc:
        raise ConfigurationError(f"{path}: malformed numeric field: {exc}")


def write_trajectory_csv(traj: Trajectory, path) -> None:
    write_rows(path, TRAJ_HEADER, zip(traj.t.tolist(), traj.x.tolist(), traj.y.tolist()))


def read_trajectory_csv(path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    rows = _read_rows(path, TRAJ_HEADER)
    try:
        data = np.array([[float(v) for v in r] for r in rows], dtype=float)
    except ValueError as exc:
        raise ConfigurationError(f"{path}: malformed numeric field: {exc}")
    if data.size == 0:
        return np.zeros(0), np.zeros(0), np.zeros(0)
    return data[:, 0], data[:, 1], data[:, 2]


def write_portrait_csvs(grid: PortraitGrid, arrows_path, boundaries_path) -> None:
    rows = []
    for iy in range(len(grid.ys)):
        for ix in range(len(grid.xs)):
            rows.append((grid.xs[ix], grid.ys[iy], grid.U[iy, ix], grid.V[iy, ix]))
    write_rows(arrows_path, ARROW_HEADER, rows)
    brows = []
    for name, curve in grid.boundaries.items():
        for x, y in curve:
            brows.append((name, float(x), float(y)))
    write_rows(boundaries_path, BOUNDARY_HEADER, brows)


def read_portrait_csvs(arrows_path, boundaries_path):
    arows = _read_rows(arrows_path, ARROW_HEADER)
    arrows = np.array([[float(v) for v in r] for r in arows], dtype=float)
    brows = _read_rows(boundaries_path, BOUNDARY_HEADER)
    curves: dict[str, list[tuple[float, float]]] = {}
    for name, x, y in brows:
        curves.setdefault(name, []).append((float(x), float(y)))
    return arrows, {k: np.array(v) for k, v in curves.items()}


def read_sweep_csv(path) -> list[dict]:
    """Sweep rows as dicts with numeric fields parsed back to floats."""
    rows = _read_rows(path, SWEEP_HEADER)
    out = []
    for r in rows:
        rec = dict(zip(SWEEP_HEADER, r))
        try:
            for key in ("m1", "m2", "t_star", "T_star", "t_break", "margin",
                        "s_hit", "omega_exit"):
                rec[key] = float(rec[key])
        except ValueError as exc:
            raise ConfigurationError(f"{path}: malformed numeric field: {exc}")
        rec["in_omega"] = rec["in_omega"] == "true"
        out.append(rec)
    return out


def summary_block(record: dict) -> str:
    """One key=value block; key order is the dict insertion order."""
    return "".join(f"{k}={_fmt(v)}\n" for k, v in record.items())


def write_summary(path, records: list[dict]) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(summary_block(r) for r in records))


def read_summary(path) -> list[dict]:
    records: list[dict] = []
    current: dict = {}
    with open(path) as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                if current:
                    records.append(current)
                    current = {}
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ConfigurationError(f"{path}: malformed summary line {line!r}")
            current[key] = value
    if current:
        records.append(current)
    return records


def physical_bounds(p: bt.SlopePair, k0: float):
    """(t*, T*) in physical time units for a pair in Omega, else (nan, nan).

    The slope-plane bounds live in normalized time (K(0) = 1); dividing by
    K(0) maps them back to the time variable of the unscaled equation.
    """
    q = bt.normalize(p, k0)
    if not bt.in_omega(q):
        return math.nan, math.nan
    return bt.t_star(q) / k0, bt.T_star(q) / k0


def sim_summary(report: SimReport) -> dict:
    """Summary record for a simulation, stable key order.

    For kernels without a finite K(0) (whitham) the slope-plane theory does
    not apply: bounds are nan, in_omega_initial and theorem_applies false.
    """
    p = report.initial
    try:
        k0 = k_at_origin(report.kernel)
        admissible = True
    except SingularityError:
        k0 = math.nan
        admissible = False
    if admissible:
        in_om = bt.in_omega(bt.normalize(p, k0))
        ts, Ts = physical_bounds(p, k0)
    else:
        in_om = False
        ts = Ts = math.nan
    t_break = report.verdict.time if report.verdict.kind == "BrokeAt" else math.nan
    return {
        "verdict": report.verdict.kind,
        "t_break": t_break,
        "T_star": Ts,
        "t_star": ts,
        "in_omega_initial": "true" if in_om else "false",
        "kernel": report.kernel.description,
        "grid": report.n,
        "domain_length": report.L,
        "m1_initial": p.m1,
        "m2_initial": p.m2,
        "k_at_zero": k0,
        "theorem_applies": "true" if (admissible and in_om) else "false",
        "verdict_time": report.verdict.time if report.verdict.time is not None else math.nan,
        "samples": len(report.series),
    }


def bounds_summary(p: bt.SlopePair, k0: float = 1.0) -> dict:
    """Record for the bounds/classify surface: memberships and time bounds."""
    q = bt.normalize(p, k0)
    label = bt.classify(p, k0)
    in_om = bt.in_omega(q)
    ts, Ts = physical_bounds(p, k0)
    return {
        "m1": p.m1,
        "m2": p.m2,
        "k0": k0,
        "in_omega": "true" if in_om else "false",
        "seliger": "true" if bt.seliger(q, 1.0) else "false",
        "label": label.value,
        "t_star": ts,
        "T_star": Ts,
        "deadline": Ts,
    }


def trajectory_summary(traj: Trajectory) -> dict:
    ev = traj.events
    return {
        "x0": traj.initial.m1,
        "y0": traj.initial.m2,
        "status": traj.status,
        "s_hit": ev.s_hit,
        "omega_exit": ev.omega_exit,
        "blowup_threshold_time": ev.blowup,
        "blowup_time": ev.blowup_time,
        "blowup_uncertainty": ev.blowup_uncertainty,
        "points": len(traj.t),
    }
