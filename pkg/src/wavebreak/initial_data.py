"""Smooth periodic initial profiles with prescribed gradient extrema.

The construction places two compactly supported bumps in the derivative:

    u0'(x) = (a - c) B((x - L/4)/w) + (b - c) B((x - 3L/4)/w) + c

with the standard bump B(s) = exp(1 - 1/(1 - s^2)) on |s| < 1 (zero
outside), and the constant c = -(a + b) I / (L - 2 I), I = w * integral(B),
chosen so the derivative has exactly zero mean.  Whenever a <= c <= b the
derivative attains its minimum a at L/4 and its maximum b at 3L/4; the
precondition w <= L/8 keeps I/L small so this holds for all reasonable
slope pairs.  u0 itself is the spectral antiderivative pinned to u0(0) = 0.

The bump centers sit at maximal separation so the two extremum locations
stay well apart during evolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from . import spectral
from .breaking_theory import SlopePair
from .errors import ConfigurationError, DomainError, GeometryError

#: integral of the unit bump exp(1 - 1/(1 - s^2)) over [-1, 1]
BUMP_INTEGRAL = quad(lambda s: math.exp(1.0 - 1.0 / (1.0 - s * s)), -1.0, 1.0,
                     epsabs=1e-13, epsrel=1e-13)[0]


def bump(s):
    """The unit bump B(s) = exp(1 - 1/(1 - s^2)) on |s| < 1, else 0."""
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    inside = np.abs(s) < 1.0
    si = s[inside]
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - si * si))
    return out


@dataclass(frozen=True)
class InitialCondition:
    """Periodic initial profile with targeted derivative extrema.

    ``samples`` holds u0 on the uniform grid x_j = j L / n; the canonical
    derivative is the spectral derivative of these samples.  The flat
    profile (a = b = 0, all-zero samples) is admitted as the one degenerate
    exception to a < 0 <= b, so the solver's zero-data contract has a
    well-formed input.
    """

    domain_length: float
    samples: np.ndarray
    target_min_slope: float
    target_max_slope: float
    bump_width: float

    def __post_init__(self):
        n = len(self.samples)
        if n < 256 or n & (n - 1) != 0:
            raise ConfigurationError(f"grid size must be a power of two >= 256, got {n}")
        if not self.domain_length > 0:
            raise ConfigurationError("domain length must be positive")
        a, b = self.target_min_slope, self.target_max_slope
        degenerate = a == 0.0 and b == 0.0
        if not degenerate and not (a < 0.0 <= b):
            raise DomainError(f"target slopes must satisfy a < 0 <= b, got ({a}, {b})")

    @property
    def n(self) -> int:
        return len(self.samples)


def flat_profile(L: float, n: int) -> InitialCondition:
    """The degenerate zero profile (control input for the solver)."""
    return InitialCondition(domain_length=float(L), samples=np.zeros(n),
                            target_min_slope=0.0, target_max_slope=0.0,
                            bump_width=float(L) / 8.0)


def mean_zero_constant(a: float, b: float, L: float, w: float) -> float:
    """The constant c = -(a+b) I / (L - 2I) that zeroes the derivative mean."""
    I = w * BUMP_INTEGRAL
    return -(a + b) * I / (L - 2.0 * I)


def derivative_profile(a: float, b: float, L: float, w: float, x) -> np.ndarray:
    """Closed-form u0'(x) for the two-bump construction (oracle-friendly)."""
    c = mean_zero_constant(a, b, L, w)
    x = np.asarray(x, dtype=float)
    return (a - c) * bump((x - L / 4.0) / w) + (b - c) * bump((x - 3.0 * L / 4.0) / w) + c


def build_profile(a: float, b: float, L: float, w: float, n: int) -> InitialCondition:
    """Construct u0 with min u0' = a at L/4 and max u0' = b at 3L/4.

    Raises GeometryError when the mean-zero constant c falls outside
    [a, b] (the fix is a smaller bump width), DomainError for slope pairs
    violating a < 0 <= b.
    """
    if not (a < 0.0 <= b):
        raise DomainError(f"profile slopes must satisfy a < 0 <= b, got ({a}, {b})")
    if not (w > 0.0 and w <= L / 8.0):
        raise DomainError(f"bump width must satisfy 0 < w <= L/8, got w={w}, L={L}")
    c = mean_zero_constant(a, b, L, w)
    if not (a <= c <= b):
        raise GeometryError(
            f"mean-zero constant c={c:.6g} falls outside [{a:g}, {b:g}]; "
            "use a smaller bump width w"
        )
    x = spectral.grid(n, L)
    up = derivative_profile(a, b, L, w, x)
    up = up - up.mean()  # remove the O(1e-12) discrete-mean residual
    u = spectral.antiderivative(up, L)
    return InitialCondition(domain_length=float(L), samples=u,
                            target_min_slope=float(a), target_max_slope=float(b),
                            bump_width=float(w))


def slope_samples(ic: InitialCondition) -> np.ndarray:
    """Canonical derivative samples: spectral derivative of u0."""
    return spectral.derivative(ic.samples, ic.domain_length)


def measured_extrema(ic: InitialCondition) -> SlopePair:
    """(min, max) of the spectral derivative, parabolically refined."""
    up = slope_samples(ic)
    lo, _ = spectral.refined_min(up, ic.domain_length)
    hi, _ = spectral.refined_max(up, ic.domain_length)
    return SlopePair(lo, hi)


def export_csv(ic: InitialCondition, path) -> None:
    """Write the profile as CSV ``x,u0`` with '#' metadata header lines."""
    x = spectral.grid(ic.n, ic.domain_length)
    with open(path, "w", newline="") as fh:
        fh.write(f"# L={ic.domain_length!r}\n")
        fh.write(f"# a={ic.target_min_slope!r}\n")
        fh.write(f"# b={ic.target_max_slope!r}\n")
        fh.write(f"# w={ic.bump_width!r}\n")
        fh.write(f"# n={ic.n}\n")
        fh.write("x,u0\n")
        for xi, ui in zip(x, ic.samples):
            fh.write(f"{float(xi)!r},{float(ui)!r}\n")


def import_csv(path) -> InitialCondition:
    """Read a profile written by :func:`export_csv`."""
    meta: dict[str, float] = {}
    xs: list[float] = []
    us: list[float] = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, val = line[1:].partition("=")
                meta[key.strip()] = float(val)
                continue
            if line == "x,u0":
                continue
            try:
                xi, ui = line.split(",")
                xs.append(float(xi))
                us.append(float(ui))
            except ValueError as exc:
                raise ConfigurationError(f"malformed profile row {line!r}: {exc}")
    for key in ("L", "a", "b", "w", "n"):
        if key not in meta:
            raise ConfigurationError(f"profile file {path} missing metadata '{key}'")
    if len(us) != int(meta["n"]):
        raise ConfigurationError(
            f"profile file {path} declares n={int(meta['n'])} but has {len(us)} rows"
        )
    return InitialCondition(domain_length=meta["L"], samples=np.array(us),
                            target_min_slope=meta["a"], target_max_slope=meta["b"],
                            bump_width=meta["w"])
