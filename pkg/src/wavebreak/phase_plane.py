"""The comparison ODE system in the slope plane, with event tracking.

The system

    x' = -x^2 + y - x,      y' = -y^2 + y - x

turns the slope-extrema differential inequalities into equalities, so every
invariance and time bound proved for the inequality system must hold along
its trajectories: started in Omega they stay in the closure, reach the
half-plane x + y <= 0 by t*, and drive x to -infinity before T*.  The
integrator certifies exactly those facts numerically.

Integration uses an embedded Cash-Karp 4(5) pair on plain floats (the
right-hand side is two quadratics; array machinery would only add
overhead) with

* mixed absolute/relative error control, default rtol 1e-10,
* a growth cap rejecting steps where |x| more than doubles, so steps
  shrink on approach to blowup,
* event localization by re-stepping from the step start with a shrunken
  step inside a bisection/secant iteration (event times inherit the
  integrator's own accuracy),
* blowup report: when x first reaches the threshold -1e6 the remaining
  time to the singularity is extrapolated from the dominant Riccati
  asymptote x ~ -1/(T - t), giving T = t_hit - 1/x_hit with the last
  accepted step as the quoted uncertainty.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .breaking_theory import SlopePair
from .errors import DomainError, IntegratorFailure

# Cash-Karp 4(5) tableau
_A2 = (1.0 / 5.0,)
_A3 = (3.0 / 40.0, 9.0 / 40.0)
_A4 = (3.0 / 10.0, -9.0 / 10.0, 6.0 / 5.0)
_A5 = (-11.0 / 54.0, 5.0 / 2.0, -70.0 / 27.0, 35.0 / 27.0)
_A6 = (1631.0 / 55296.0, 175.0 / 512.0, 575.0 / 13824.0,
       44275.0 / 110592.0, 253.0 / 4096.0)
_B5 = (37.0 / 378.0, 0.0, 250.0 / 621.0, 125.0 / 594.0, 0.0, 512.0 / 1771.0)
_E = (_B5[0] - 2825.0 / 27648.0, 0.0, _B5[2] - 18575.0 / 48384.0,
      _B5[3] - 13525.0 / 55296.0, -277.0 / 14336.0, _B5[5] - 0.25)

MIN_STEP = 1e-14


def vector_field(x: float, y: float) -> tuple[float, float]:
    """Right-hand side (-x^2 + y - x, -y^2 + y - x)."""
    return (-x * x + y - x, -y * y + y - x)


def _trial(x: float, y: float, h: float) -> tuple[float, float, float, float]:
    """One Cash-Karp step of size h; returns (x5, y5, err_x, err_y)."""
    k1x = -x * x + y - x
    k1y = -y * y + y - x
    u = x + h * _A2[0] * k1x
    v = y + h * _A2[0] * k1y
    k2x = -u * u + v - u
    k2y = -v * v + v - u
    u = x + h * (_A3[0] * k1x + _A3[1] * k2x)
    v = y + h * (_A3[0] * k1y + _A3[1] * k2y)
    k3x = -u * u + v - u
    k3y = -v * v + v - u
    u = x + h * (_A4[0] * k1x + _A4[1] * k2x + _A4[2] * k3x)
    v = y + h * (_A4[0] * k1y + _A4[1] * k2y + _A4[2] * k3y)
    k4x = -u * u + v - u
    k4y = -v * v + v - u
    u = x + h * (_A5[0] * k1x + _A5[1] * k2x + _A5[2] * k3x + _A5[3] * k4x)
    v = y + h * (_A5[0] * k1y + _A5[1] * k2y + _A5[2] * k3y + _A5[3] * k4y)
    k5x = -u * u + v - u
    k5y = -v * v + v - u
    u = x + h * (_A6[0] * k1x + _A6[1] * k2x + _A6[2] * k3x
                 + _A6[3] * k4x + _A6[4] * k5x)
    v = y + h * (_A6[0] * k1y + _A6[1] * k2y + _A6[2] * k3y
                 + _A6[3] * k4y + _A6[4] * k5y)
    k6x = -u * u + v - u
    k6y = -v * v + v - u
    x5 = x + h * (_B5[0] * k1x + _B5[2] * k3x + _B5[3] * k4x + _B5[5] * k6x)
    y5 = y + h * (_B5[0] * k1y + _B5[2] * k3y + _B5[3] * k4y + _B5[5] * k6y)
    ex = h * (_E[0] * k1x + _E[2] * k3x + _E[3] * k4x + _E[4] * k5x + _E[5] * k6x)
    ey = h * (_E[0] * k1y + _E[2] * k3y + _E[3] * k4y + _E[4] * k5y + _E[5] * k6y)
    return x5, y5, ex, ey


def _closure_margin(x: float, y: float) -> float:
    """Signed distance proxy to the closure of Omega (>= 0 inside)."""
    return min(-2.0 - x, y, x * x + x - y)


@dataclass(frozen=True)
class TrajectoryEvents:
    """Event times along a trajectory (None when the event never fired).

    ``blowup`` is the time x first reached the blowup threshold;
    ``blowup_time`` the Riccati-extrapolated singularity time with
    ``blowup_uncertainty`` the step size at detection.
    """

    omega_exit: float | None = None
    s_hit: float | None = None
    blowup: float | None = None
    blowup_time: float | None = None
    blowup_uncertainty: float | None = None


@dataclass(frozen=True)
class Trajectory:
    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    events: TrajectoryEvents
    initial: SlopePair
    status: str  # 'horizon' or 'blowup'


def _locate(x0: float, y0: float, h: float, g, g0: float, g1: float):
    """Fraction theta in (0, 1] where g along the step first crosses zero.

    g maps a state (x, y) to a scalar with g0 = g(start) > 0 >= g1 = g(end).
    Each trial re-steps from the step start with size theta*h, so the
    located state carries one-step integration accuracy.  Bisection with a
    secant accelerator; robust to kinks in g.
    """
    lo, glo = 0.0, g0
    hi, ghi = 1.0, g1
    xs, ys = None, None
    for _ in range(80):
        if ghi == 0.0 or (hi - lo) * abs(h) < 1e-15 * (1.0 + abs(h)):
            break
        mid = hi - ghi * (hi - lo) / (ghi - glo)
        if not (lo + 1e-12 < mid < hi - 1e-12):
            mid = 0.5 * (lo + hi)
        xm, ym, _, _ = _trial(x0, y0, mid * h)
        gm = g(xm, ym)
        if gm > 0.0:
            lo, glo = mid, gm
        else:
            hi, ghi = mid, gm
            xs, ys = xm, ym
    if xs is None:
        xs, ys, _, _ = _trial(x0, y0, hi * h)
    return hi, xs, ys


def integrate(p0: SlopePair, horizon: float, *, rtol: float = 1e-10,
              atol: float = 1e-12, blowup_threshold: float = 1e6,
              exit_tol: float = 1e-8, record: bool = True) -> Trajectory:
    """Integrate the comparison system from p0 until the horizon or blowup.

    Works from any starting point (portrait trajectories included).  Events
    recorded: first exit from the Omega closure (band ``exit_tol``), first
    time x + y <= 0, and the blowup threshold crossing with extrapolated
    singularity time.  Raises IntegratorFailure (partial trajectory
    attached) if the step size underflows before any terminal event.
    """
    if not horizon > 0:
        raise DomainError(f"horizon must be positive, got {horizon}")
    x, y = float(p0.m1), float(p0.m2)
    t = 0.0
    ts, xs, ys = [0.0], [x], [y]

    s_hit = 0.0 if x + y <= 0.0 else None
    # an exit only makes sense for trajectories that started inside
    was_inside = _closure_margin(x, y) >= -exit_tol
    omega_exit = None
    blowup = blowup_time = blowup_unc = None
    status = "horizon"

    fx, fy = vector_field(x, y)
    h = min(0.01 / (1.0 + math.hypot(fx, fy)), horizon)

    while t < horizon:
        ht = min(h, horizon - t)
        if ht <= 0.0:
            break
        if h < MIN_STEP:
            # the controller collapsed (approaching a singularity without a
            # terminal event); report the partial trajectory
            partial = Trajectory(
                t=np.array(ts), x=np.array(xs), y=np.array(ys),
                events=TrajectoryEvents(omega_exit=omega_exit, s_hit=s_hit),
                initial=p0, status="failed",
            )
            raise IntegratorFailure(
                f"step size underflow at t={t:.6g} (x={x:.3e})",
                trajectory=partial,
            )
        if t + ht == t:
            break  # horizon reached to machine precision
        x5, y5, ex, ey = _trial(x, y, ht)
        sx = atol + rtol * max(abs(x), abs(x5))
        sy = atol + rtol * max(abs(y), abs(y5))
        err = max(abs(ex) / sx, abs(ey) / sy)
        grow_ok = abs(x5) <= 2.0 * max(abs(x), 1.0)
        if err <= 1.0 and grow_ok:
            if s_hit is None and x5 + y5 <= 0.0:
                theta, _, _ = _locate(x, y, ht, lambda a, b: a + b, x + y, x5 + y5)
                s_hit = t + theta * ht
            if was_inside and omega_exit is None:
                m_new = _closure_margin(x5, y5)
                if m_new < -exit_tol:
                    g = lambda a, b: _closure_margin(a, b) + exit_tol
                    theta, _, _ = _locate(x, y, ht, g,
                                          _closure_margin(x, y) + exit_tol,
                                          m_new + exit_tol)
                    omega_exit = t + theta * ht
            if x5 <= -blowup_threshold:
                thr = blowup_threshold
                theta, xh, yh = _locate(x, y, ht, lambda a, b: a + thr,
                                        x + thr, x5 + thr)
                blowup = t + theta * ht
                blowup_time = blowup - 1.0 / xh
                blowup_unc = ht
                ts.append(blowup)
                xs.append(xh)
                ys.append(yh)
                status = "blowup"
                break
            t, x, y = t + ht, x5, y5
            if record:
                ts.append(t)
                xs.append(x)
                ys.append(y)
            h = ht * (min(5.0, max(0.2, 0.9 * err ** -0.2)) if err > 0 else 5.0)
        else:
            h = ht * (0.5 if not grow_ok else max(0.2, 0.9 * err ** -0.2))
    if not record and status == "horizon":
        ts.append(t)
        xs.append(x)
        ys.append(y)
    return Trajectory(
        t=np.array(ts), x=np.array(xs), y=np.array(ys),
        events=TrajectoryEvents(omega_exit=omega_exit, s_hit=s_hit,
                                blowup=blowup, blowup_time=blowup_time,
                                blowup_uncertainty=blowup_unc),
        initial=p0, status=status,
    )


@dataclass(frozen=True)
class Window:
    xmin: float
    xmax: float
    ymin: float
    ymax: float

    @property
    def degenerate(self) -> bool:
        return not (self.xmax > self.xmin and self.ymax > self.ymin)


#: default plotting window for slope-plane portraits (a choice, not a datum)
DEFAULT_WINDOW = Window(-6.0, 1.0, -1.0, 7.0)


@dataclass(frozen=True)
class PortraitGrid:
    """Vector-field samples plus the three region boundary curves."""

    xs: np.ndarray
    ys: np.ndarray
    U: np.ndarray  # shape (len(ys), len(xs))
    V: np.ndarray
    boundaries: dict[str, np.ndarray] = field(default_factory=dict)


def boundary_curves(window: Window, samples: int = 128) -> dict[str, np.ndarray]:
    """Tabulate the Omega boundary (vertical segment + parabola branch)
    and the classical-condition line m1 + m2 = -2 over the window."""
    seg_y = np.linspace(0.0, 2.0, samples)
    omega_line = np.column_stack([np.full_like(seg_y, -2.0), seg_y])
    left = min(window.xmin, -2.0)
    par_x = np.linspace(-2.0, left, samples)
    omega_parabola = np.column_stack([par_x, par_x * par_x + par_x])
    lin_x = np.linspace(window.xmin, window.xmax, samples)
    seliger_line = np.column_stack([lin_x, -2.0 - lin_x])
    return {
        "omega_line": omega_line,
        "omega_parabola": omega_parabola,
        "seliger_line": seliger_line,
    }


def portrait(window: Window, density: tuple[int, int] = (20, 20)) -> PortraitGrid:
    """Vector field sampled on a uniform grid over the window.

    A degenerate (zero-area) window or nonpositive density yields empty
    arrays; boundary curves are tabulated regardless for the plot emitter.
    """
    nx, ny = density
    if window.degenerate or nx < 1 or ny < 1:
        empty = np.zeros((0, 0))
        return PortraitGrid(xs=np.zeros(0), ys=np.zeros(0), U=empty, V=empty,
                            boundaries=boundary_curves(window) if not window.degenerate else {})
    xs = np.linspace(window.xmin, window.xmax, nx)
    ys = np.linspace(window.ymin, window.ymax, ny)
    X, Y = np.meshgrid(xs, ys)
    U = -X * X + Y - X
    V = -Y * Y + Y - X
    return PortraitGrid(xs=xs, ys=ys, U=U, V=V, boundaries=boundary_curves(window))
