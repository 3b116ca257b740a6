"""Parameter sweeps over initial slope pairs, ODE or PDE backed.

A sweep walks a rectangular grid in the slope plane.  The second coordinate
is either an absolute m2 value or a fraction of the parabola height
m1^2 + m1 (fraction mode covers the breaking region uniformly in the
geometry that matters; absolute grids waste points outside it).

Rows run independently: with ``workers > 1`` they are dispatched to a
process pool and merged back in grid order, so results are deterministic
regardless of worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import breaking_theory as bt
from .errors import DomainError, IntegratorFailure, SingularityError
from .initial_data import build_profile
from .kernels import PhaseVelocity, k_at_origin
from .phase_plane import integrate
from .reporting import physical_bounds
from .spectral_solver import SolverConfig, run


@dataclass(frozen=True)
class SweepSpec:
    m1_lo: float
    m1_hi: float
    m1_count: int
    m2_mode: str  # 'absolute' | 'fraction_of_parabola'
    m2_lo: float
    m2_hi: float
    m2_count: int
    kernel: PhaseVelocity
    backend: str = "ode"  # 'ode' | 'pde'
    horizon: float = 10.0
    domain_length: float = 40.0
    bump_width: float = 2.0
    grid_size: int = 1024
    solver: SolverConfig | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.m1_count < 1 or self.m2_count < 1:
            raise DomainError("sweep counts must be >= 1")
        if self.m1_lo > self.m1_hi or self.m2_lo > self.m2_hi:
            raise DomainError("sweep ranges must be ordered lo <= hi")
        if self.m2_mode not in ("absolute", "fraction_of_parabola"):
            raise DomainError(f"unknown m2 mode {self.m2_mode!r}")
        if self.backend not in ("ode", "pde"):
            raise DomainError(f"unknown sweep backend {self.backend!r}")

    def points(self) -> list[bt.SlopePair]:
        m1s = np.linspace(self.m1_lo, self.m1_hi, self.m1_count)
        m2s = np.linspace(self.m2_lo, self.m2_hi, self.m2_count)
        pts = []
        for m1 in m1s:
            for v in m2s:
                m2 = v * (m1 * m1 + m1) if self.m2_mode == "fraction_of_parabola" else v
                pts.append(bt.SlopePair(float(m1), float(m2)))
        return pts


@dataclass(frozen=True)
class SweepRow:
    m1: float
    m2: float
    label: str
    in_omega: bool
    t_star: float
    T_star: float
    verdict: str
    t_break: float
    margin: float
    s_hit: float
    omega_exit: float


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    rows: tuple[SweepRow, ...]


def _classify(spec: SweepSpec, p: bt.SlopePair):
    try:
        k0 = k_at_origin(spec.kernel)
    except SingularityError:
        return "Undefined", False, math.nan, math.nan
    label = bt.classify(p, k0).value
    in_om = bt.in_omega(bt.normalize(p, k0))
    ts, Ts = physical_bounds(p, k0)
    return label, in_om, ts, Ts


def _run_row(spec: SweepSpec, p: bt.SlopePair) -> SweepRow:
    label, in_om, ts, Ts = _classify(spec, p)
    t_break = s_hit = omega_exit = math.nan

    if spec.backend == "ode":
        try:
            traj = integrate(p, spec.horizon, record=False)
        except IntegratorFailure:
            verdict = "IntegratorFailure"
        else:
            ev = traj.events
            s_hit = ev.s_hit if ev.s_hit is not None else math.nan
            omega_exit = ev.omega_exit if ev.omega_exit is not None else math.nan
            if traj.status == "blowup":
                verdict = "BrokeAt"
                t_break = ev.blowup_time
            else:
                verdict = "ResolvedToHorizon"
    else:
        try:
            ic = build_profile(p.m1, p.m2, spec.domain_length, spec.bump_width,
                               spec.grid_size)
        except DomainError:
            verdict = "InvalidProfile"
        else:
            cfg = spec.solver or SolverConfig(max_time=spec.horizon)
            report = run(ic, spec.kernel, cfg)
            verdict = report.verdict.kind
            if verdict == "BrokeAt":
                t_break = report.verdict.time

    margin = Ts - t_break if (math.isfinite(Ts) and math.isfinite(t_break)) else math.nan
    return SweepRow(m1=p.m1, m2=p.m2, label=label, in_omega=in_om,
                    t_star=ts, T_star=Ts, verdict=verdict, t_break=t_break,
                    margin=margin, s_hit=s_hit, omega_exit=omega_exit)


def run_sweep(spec: SweepSpec, workers: int = 1) -> SweepResult:
    """Run one row per grid point; merge in grid order."""
    pts = spec.points()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_run_row, [spec] * len(pts), pts, chunksize=8))
    else:
        rows = [_run_row(spec, p) for p in pts]
    return SweepResult(spec=spec, rows=tuple(rows))


def sweep_rows_for_csv(result: SweepResult):
    for r in result.rows:
        yield (r.m1, r.m2, r.label, "true" if r.in_omega else "false",
               r.t_star, r.T_star, r.verdict, r.t_break, r.margin,
               r.s_hit, r.omega_exit)
