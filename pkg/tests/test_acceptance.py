"""Acceptance suite: one test per criterion, one printed PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines live.
The ODE batches and the two PDE runs are shared module-scoped fixtures.
"""

import math
import time

import numpy as np
import pytest

from wavebreak.breaking_theory import (
    SlopePair,
    T_star,
    boundary_identity,
    classify,
    in_omega,
    in_omega_closure,
    riccati_envelope,
    t_star,
)
from wavebreak.initial_data import build_profile
from wavebreak.kernels import PhaseVelocity
from wavebreak.phase_plane import integrate
from wavebreak.spectral_solver import SolverConfig, Stepper, run

GAUSS = PhaseVelocity.gaussian(1.0)
SEED = 20240901

# frozen 40-digit oracles for the criterion-5 spot values
HALF_LN2 = 0.3465735902799726547086160607290882840
HALF_LN3_PLUS_SIXTH = 0.7159728110007215123642892851279295190
ONE_SIXTH = 0.1666666666666666666666666666666666667


def report(criterion: int, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"criterion {criterion}: {detail}"


@pytest.fixture(scope="module")
def omega_batch():
    """500 trajectories from points sampled in the breaking region."""
    rng = np.random.default_rng(SEED)
    m1 = rng.uniform(-8.0, -2.05, size=500)
    m2 = rng.uniform(0.0, m1 * m1 + m1)
    points = [SlopePair(float(a), float(b)) for a, b in zip(m1, m2)]
    t0 = time.perf_counter()
    trajs = [integrate(p, 5.0) for p in points]
    return points, trajs, time.perf_counter() - t0


@pytest.fixture(scope="module")
def breaking_run():
    t0 = time.perf_counter()
    ic = build_profile(-4.0, 2.0, 40.0, 2.0, 4096)
    rep = run(ic, GAUSS, SolverConfig(max_time=1.0))
    return rep, time.perf_counter() - t0


@pytest.fixture(scope="module")
def breaking_run_fine():
    ic = build_profile(-4.0, 2.0, 40.0, 2.0, 8192)
    return run(ic, GAUSS, SolverConfig(max_time=1.0))


def test_criterion_1_ode_deadlines(omega_batch):
    points, trajs, elapsed = omega_batch
    worst = math.inf
    blew = 0
    for p, tr in zip(points, trajs):
        if tr.status == "blowup" and tr.x[-1] <= -1e6:
            blew += 1
            worst = min(worst, T_star(p) - tr.events.blowup_time)
    ok = blew == 500 and worst > 1e-6
    report(1, ok, f"500 trajectories blew up, min T*-T margin {worst:.3e} "
                  f"(> 1e-6), batch time {elapsed:.2f}s")


def test_criterion_2_ode_invariance(omega_batch):
    _, trajs, _ = omega_batch
    exits = sum(tr.events.omega_exit is not None for tr in trajs)
    point_violations = 0
    for tr in trajs:
        inside = [in_omega_closure(SlopePair(a, b), tol=1e-8)
                  for a, b in zip(tr.x, tr.y)]
        point_violations += inside.count(False)
    ok = exits == 0 and point_violations == 0
    report(2, ok, f"exit events {exits}, recorded-point violations "
                  f"{point_violations} (band 1e-8)")


def test_criterion_3_hitting_times():
    rng = np.random.default_rng(SEED + 1)
    t0 = time.perf_counter()
    worst = -math.inf
    violations = 0
    for _ in range(200):
        m1 = float(rng.uniform(-8.0, -2.05))
        m2 = float(rng.uniform(-m1, m1 * m1 + m1))  # ensures m1 + m2 > 0
        p = SlopePair(m1, m2)
        assert in_omega(p) and m1 + m2 > 0.0
        tr = integrate(p, 5.0, record=False)
        gap = tr.events.s_hit - t_star(p)
        worst = max(worst, gap)
        if gap > 1e-8:
            violations += 1
    elapsed = time.perf_counter() - t0
    ok = violations == 0
    report(3, ok, f"200 points, worst s_hit - t* = {worst:.3e} (<= 1e-8), "
                  f"{violations} violations, time {elapsed:.2f}s")


def test_criterion_4_boundary_identity():
    rng = np.random.default_rng(SEED + 2)
    m1 = rng.uniform(-10.0, 0.0, size=1000)
    m2 = m1 * m1 + m1
    expansion = m2 * m2 - m2 + m1
    direct = np.array([boundary_identity(v) for v in m1])
    rel = np.max(np.abs(expansion - direct) / np.maximum(1.0, np.abs(m1) ** 4))
    exact_corner = boundary_identity(-2.0) == 0.0
    ok = rel <= 1e-9 and exact_corner
    report(4, ok, f"max relative defect {rel:.3e} (<= 1e-9), "
                  f"identity(-2) == 0 exactly: {exact_corner}")


def test_criterion_5_formula_spot_values():
    e1 = abs(T_star(SlopePair(-4.0, 2.0)) - HALF_LN2)
    e2 = abs(T_star(SlopePair(-3.0, 4.0)) - HALF_LN3_PLUS_SIXTH)
    e3 = abs(t_star(SlopePair(-3.0, 4.0)) - ONE_SIXTH)
    ok = e1 <= 1e-12 and e2 <= 1e-12 and e3 <= 1e-15
    report(5, ok, f"|T*(-4,2)-ln2/2|={e1:.1e}, "
                  f"|T*(-3,4)-(ln3/2+1/6)|={e2:.1e}, |t*(-3,4)-1/6|={e3:.1e}")


def test_criterion_6_region_extension():
    headline = classify(SlopePair(-2.5, 3.0), 1.0).value == "OmegaOnly"
    m1s = np.linspace(-6.0, -2.0, 100)
    m2s = np.linspace(0.0, 12.0, 100)
    omega_only = 0
    misclassified = 0
    for a in m1s:
        for b in m2s:
            label = classify(SlopePair(float(a), float(b)), 1.0).value
            if label == "OmegaOnly":
                omega_only += 1
            if label == "SeligerOnly":
                # consistency scan: a SeligerOnly label must not satisfy the
                # raw region inequalities
                if a < -2.0 and 0.0 <= b < a * a + a:
                    misclassified += 1
    ok = headline and omega_only > 0 and misclassified == 0
    report(6, ok, f"classify(-2.5,3)=OmegaOnly: {headline}, OmegaOnly grid "
                  f"count {omega_only}, misclassified SeligerOnly {misclassified}")


def test_criterion_7_pde_breaking(breaking_run, breaking_run_fine):
    rep, elapsed = breaking_run
    deadline_ok = (rep.verdict.kind == "BrokeAt"
                   and rep.verdict.time <= T_star(SlopePair(-4.0, 2.0)) + 0.05)
    shadow_ok = all(in_omega_closure(p, tol=1e-6) for p in rep.slope_path())
    fine = breaking_run_fine
    conv = abs(rep.verdict.time - fine.verdict.time)
    ok = deadline_ok and shadow_ok and fine.verdict.kind == "BrokeAt" and conv < 0.01
    report(7, ok, f"N=4096 {rep.verdict.kind} t={rep.verdict.time:.4f} "
                  f"(T*+0.05={T_star(SlopePair(-4, 2)) + 0.05:.4f}), path in "
                  f"closure: {shadow_ok}, |t_break(8192)-t_break(4096)|="
                  f"{conv:.4f} (< 0.01), N=4096 run time {elapsed:.1f}s")


def test_criterion_8_linear_exactness():
    n, L = 1024, 40.0
    u0 = build_profile(-1.0, 1.0, L, 2.0, n).samples
    worst = 0.0
    for pv in (GAUSS, PhaseVelocity.whitham()):
        stepper = Stepper(n, L, pv, nonlinear=False)
        state = stepper.dealias(np.fft.rfft(u0))
        steps = 137
        dt = 1.0 / steps
        out = state.copy()
        t = 0.0
        for _ in range(steps):
            out, t = stepper.step(out, t, dt)
        exact = state * np.exp(stepper.lin * 1.0)
        err = np.max(np.abs(np.fft.irfft(out - exact, n)))
        worst = max(worst, err)
    ok = worst <= 1e-10
    report(8, ok, f"max physical-space error at t=1 over gaussian/whitham "
                  f"multipliers: {worst:.2e} (<= 1e-10)")


def test_criterion_9_control_run():
    ic = build_profile(-0.2, 0.2, 40.0, 2.0, 1024)
    rep = run(ic, GAUSS, SolverConfig(max_time=5.0, output_stride=4))
    peak = max(abs(s.m1) for s in rep.series)
    ok = rep.verdict.kind == "ResolvedToHorizon" and peak <= 1.0
    report(9, ok, f"{rep.verdict.kind}, max|m1| = {peak:.4f} (<= 1)")


def test_criterion_10_riccati_envelope(omega_batch, breaking_run):
    points, trajs, _ = omega_batch
    worst = math.inf
    # ODE leg: anchor at the first recorded point past s_hit (t=0 when the
    # pair starts in the half-plane m1+m2 <= 0, i.e. t* = 0)
    for tr in trajs:
        t0_idx = int(np.searchsorted(tr.t, tr.events.s_hit))
        x0, t0 = float(tr.x[t0_idx]), float(tr.t[t0_idx])
        tt = tr.t[t0_idx + 1 :]
        xx = tr.x[t0_idx + 1 :]
        env = 0.5 * np.exp(2.0 * (tt - t0)) * (2.0 / x0 + 1.0) - 0.5
        worst = min(worst, float(np.min(1.0 / xx - env)) if len(tt) else worst)
    ode_ok = worst >= -1e-6

    # PDE leg: (-4,2) has t* = 0; anchor at the measured initial slope
    rep, _ = breaking_run
    x0 = rep.initial.m1
    defects = [1.0 / s.m1 - riccati_envelope(x0, 0.0, s.t)
               for s in rep.series if s.m1 < 0.0]
    pde_worst = min(defects)
    pde_ok = pde_worst >= -1e-6
    report(10, ode_ok and pde_ok,
           f"min(1/m1 - envelope): ODE batch {worst:.3e}, PDE run "
           f"{pde_worst:.3e} (both >= -1e-6)")
