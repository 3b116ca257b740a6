"""Convolution kernels specified through their phase velocities.

A kernel K is defined by its Fourier symbol c(kappa), the phase velocity:

    K(x) = (1/2pi) * integral c(kappa) exp(i kappa x) dkappa

Supported variants:

* ``gaussian:sigma``     c(kappa) = sigma*sqrt(2pi)*exp(-sigma^2 kappa^2/2),
                         K(x) = exp(-x^2/(2 sigma^2)), K(0) = 1.
* ``exponential:lam``    c(kappa) = 2 lam/(lam^2 + kappa^2),
                         K(x) = exp(-lam|x|), K(0) = 1.
* ``whitham``            c(kappa) = sqrt(tanh kappa / kappa); the kernel is
                         unbounded at the origin and is supported for
                         simulation only (never evaluated pointwise).
* ``tabulated:<csv>``    c sampled on kappa >= 0, extended evenly.

The gaussian and exponential variants are the canonical regular kernels:
both have K(0) = 1, so slope-plane results for them need no rescaling.
Note the exponential kernel is only Lipschitz at the origin; it satisfies
every sampled admissibility check below but is not smooth there.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import AccuracyError, ConfigurationError, RangeError, SingularityError

#: symbol magnitude below which the quadrature tail is truncated
SYMBOL_TAIL = 1e-12


@dataclass(frozen=True)
class PhaseVelocity:
    """Immutable kernel descriptor; build via the classmethod constructors."""

    kind: str
    width: float | None = None
    rate: float | None = None
    table: tuple[tuple[float, float], ...] | None = None
    description: str = ""

    @classmethod
    def gaussian(cls, width: float) -> "PhaseVelocity":
        if not width > 0:
            raise ConfigurationError(f"gaussian width must be positive, got {width}")
        return cls(kind="gaussian", width=float(width),
                   description=f"gaussian:{width:g}")

    @classmethod
    def exponential(cls, rate: float) -> "PhaseVelocity":
        if not rate > 0:
            raise ConfigurationError(f"exponential rate must be positive, got {rate}")
        return cls(kind="exponential", rate=float(rate),
                   description=f"exponential:{rate:g}")

    @classmethod
    def whitham(cls) -> "PhaseVelocity":
        return cls(kind="whitham", description="whitham")

    @classmethod
    def tabulated(cls, samples, description: str = "") -> "PhaseVelocity":
        rows = tuple((float(k), float(c)) for k, c in samples)
        if not rows:
            raise ConfigurationError("tabulated kernel needs at least one sample")
        kappas = [k for k, _ in rows]
        if kappas[0] < 0:
            raise ConfigurationError("tabulated samples store kappa >= 0 only")
        if any(b <= a for a, b in zip(kappas, kappas[1:])):
            raise ConfigurationError("tabulated kappa samples must be strictly increasing")
        return cls(kind="tabulated", table=rows,
                   description=description or f"tabulated[{len(rows)}]")


@dataclass(frozen=True)
class KernelAdmissibility:
    """Result of the sampled hypothesis checks (advisory, not a proof).

    ``k_at_zero`` is None exactly when ``bounded`` is False.  The probe
    grid actually used is recorded alongside the flags.
    """

    k_at_zero: float | None
    bounded: bool
    integrable: bool
    symmetric: bool
    monotone_decreasing_on_right: bool
    probe_grid: tuple[float, ...]
    notes: str = ""


def _whitham_symbol(kappa):
    ak = np.abs(np.asarray(kappa, dtype=float))
    # removable singularity at 0: tanh k / k = 1 - k^2/3 + O(k^4)
    small = ak < 1e-8
    safe = np.where(small, 1.0, ak)
    ratio = np.where(small, 1.0 - ak * ak / 3.0, np.tanh(safe) / safe)
    return np.sqrt(ratio)


def multiplier(pv: PhaseVelocity, kappa):
    """Phase velocity c(kappa); even in kappa.  Accepts scalars or arrays."""
    k = np.asarray(kappa, dtype=float)
    if not np.all(np.isfinite(k)):
        raise RangeError("kappa must be finite")
    if pv.kind == "gaussian":
        s = pv.width
        out = s * math.sqrt(2.0 * math.pi) * np.exp(-0.5 * (s * k) ** 2)
    elif pv.kind == "exponential":
        lam = pv.rate
        out = 2.0 * lam / (lam * lam + k * k)
    elif pv.kind == "whitham":
        out = _whitham_symbol(k)
    elif pv.kind == "tabulated":
        tab = np.asarray(pv.table, dtype=float)
        ak = np.abs(k)
        lo, hi = tab[0, 0], tab[-1, 0]
        if np.any(ak < lo - 1e-12) or np.any(ak > hi + 1e-12):
            raise RangeError(
                f"kappa outside tabulated range [{lo:g}, {hi:g}]"
            )
        out = np.interp(ak, tab[:, 0], tab[:, 1])
    else:
        raise ConfigurationError(f"unknown kernel kind {pv.kind!r}")
    return float(out) if np.isscalar(kappa) else out


def symbol_cutoff(pv: PhaseVelocity) -> float:
    """Truncation point K_max with |c(kappa)| < SYMBOL_TAIL beyond it.

    The whitham symbol decays only like kappa^(-1/2), so it has no usable
    cutoff and pointwise kernel quadrature is refused for it.
    """
    if pv.kind == "gaussian":
        s = pv.width
        return math.sqrt(2.0 * math.log(s * math.sqrt(2.0 * math.pi) / SYMBOL_TAIL)) / s
    if pv.kind == "exponential":
        lam = pv.rate
        return math.sqrt(max(2.0 * lam / SYMBOL_TAIL - lam * lam, 1.0))
    if pv.kind == "tabulated":
        return float(pv.table[-1][0])
    raise AccuracyError(
        "whitham symbol decays like kappa^(-1/2); no quadrature cutoff exists",
        achieved=math.inf,
    )


def _tabulated_inverse(pv: PhaseVelocity, x: float) -> float:
    """Exact inverse transform of the piecewise-linear tabulated symbol.

    Per segment with c = c0 + s (kappa - k0):

        integral c cos(kappa x) dkappa
            = (c1 sin(k1 x) - c0 sin(k0 x)) / x + s (cos(k1 x) - cos(k0 x)) / x^2,

    so no quadrature error enters: the only approximation is the table
    itself.  Contributions beyond the tabulated range are taken as zero.
    """
    tab = np.asarray(pv.table, dtype=float)
    k0, k1 = tab[:-1, 0], tab[1:, 0]
    c0, c1 = tab[:-1, 1], tab[1:, 1]
    if x == 0.0:
        total = float(np.sum(0.5 * (c0 + c1) * (k1 - k0)))
    else:
        s = (c1 - c0) / (k1 - k0)
        parts = (c1 * np.sin(k1 * x) - c0 * np.sin(k0 * x)) / x \
            + s * (np.cos(k1 * x) - np.cos(k0 * x)) / (x * x)
        total = float(np.sum(parts))
    return total / math.pi


def _kernel_quadrature(pv: PhaseVelocity, x: float, tol: float) -> float:
    """K(x) = (1/pi) * integral_0^Kmax c(kappa) cos(kappa x) dkappa."""
    if pv.kind == "tabulated":
        return _tabulated_inverse(pv, x)
    kmax = symbol_cutoff(pv)

    def f(kappa):
        return multiplier(pv, float(kappa))

    if x == 0.0:
        val, err = quad(f, 0.0, kmax, epsabs=tol, epsrel=tol, limit=400)
    else:
        val, err = quad(f, 0.0, kmax, weight="cos", wvar=float(x),
                        epsabs=tol, epsrel=tol, limit=400)
    val /= math.pi
    err /= math.pi
    if err > max(tol, 1e-10 * abs(val)):
        raise AccuracyError(
            f"kernel quadrature at x={x:g} reached only {err:.2e}", achieved=err
        )
    return val


def kernel_eval(pv: PhaseVelocity, x: float, method: str = "auto",
                tol: float = 1e-10) -> float:
    """Kernel value K(x); symmetric in x.

    Gaussian and exponential variants use their closed forms unless
    ``method='quadrature'`` forces the inverse-transform route (used by the
    cross-check tests).  The whitham kernel is never evaluated pointwise:
    x = 0 is singular and the symbol tail defeats quadrature elsewhere.
    """
    if pv.kind == "whitham":
        if x == 0.0:
            raise SingularityError("whitham kernel is singular at x = 0")
        raise AccuracyError(
            "pointwise whitham kernel values are refused: the symbol decays "
            "like kappa^(-1/2), too slowly for the quadrature tail bound",
            achieved=math.inf,
        )
    if method not in ("auto", "closed", "quadrature"):
        raise ConfigurationError(f"unknown kernel_eval method {method!r}")
    if method != "quadrature":
        if pv.kind == "gaussian":
            return math.exp(-0.5 * (x / pv.width) ** 2)
        if pv.kind == "exponential":
            return math.exp(-pv.rate * abs(x))
        if method == "closed":
            raise ConfigurationError(f"{pv.kind} kernel has no closed form")
    return _kernel_quadrature(pv, float(x), tol)


def k_at_origin(pv: PhaseVelocity) -> float:
    """K(0), the constant appearing in the slope-plane normalization.

    Raises SingularityError for the whitham kernel, whose K(0) diverges;
    that is what bars it from the breaking-condition classifier.
    """
    if pv.kind in ("gaussian", "exponential"):
        return 1.0
    if pv.kind == "whitham":
        raise SingularityError(
            "whitham kernel is unbounded: K(0) is undefined, so the "
            "breaking-condition normalization does not apply"
        )
    return kernel_eval(pv, 0.0)


def _tail_decay_integrable(xs: np.ndarray, ks: np.ndarray) -> bool:
    """Fit the sampled tail; accept exponential decay or power decay < -1."""
    pos = (xs > 0) & (np.abs(ks) > 0)
    xs, ks = xs[pos], np.abs(ks[pos])
    if xs.size < 3:
        # tail already underflowed to zero: decays faster than we can fit
        return True
    m = max(3, xs.size // 2)
    xt, kt = xs[-m:], ks[-m:]
    if np.any(kt < 1e-280):
        return True
    exp_slope = np.polyfit(xt, np.log(kt), 1)[0]
    if exp_slope < -1e-6:
        return True
    pow_slope = np.polyfit(np.log(xt), np.log(kt), 1)[0]
    return pow_slope < -1.0 - 1e-6


def check_admissibility(pv: PhaseVelocity, probe_grid) -> KernelAdmissibility:
    """Sampled checks of the kernel hypotheses on the given grid.

    Failed (or unverifiable) checks set flags False rather than raising.
    For the whitham kernel only symbol-side checks run: symmetry from the
    multiplier's parity, unboundedness from the non-integrable symbol tail;
    monotonicity of K cannot be sampled and is recorded False (unverified).
    """
    g = np.asarray(probe_grid, dtype=float)
    if g.size == 0:
        raise ConfigurationError("probe grid must be nonempty")
    if np.any(np.diff(g) <= 0) or g[0] < 0:
        raise ConfigurationError("probe grid must be sorted, nonnegative")

    if pv.kind == "whitham":
        c_pos = multiplier(pv, g)
        c_neg = multiplier(pv, -g)
        symmetric = bool(np.max(np.abs(c_pos - c_neg)) <= 1e-12)
        return KernelAdmissibility(
            k_at_zero=None,
            bounded=False,
            integrable=True,
            symmetric=symmetric,
            monotone_decreasing_on_right=False,
            probe_grid=tuple(g),
            notes=(
                "kernel-space checks skipped (kernel unbounded at 0): "
                "symmetry checked on the symbol; integrability inferred "
                "from the bounded continuous symbol; monotonicity unverified"
            ),
        )

    vals = np.array([kernel_eval(pv, float(x)) for x in g])
    mirror = np.array([kernel_eval(pv, -float(x)) for x in g])
    scale = max(1.0, float(np.max(np.abs(vals))))
    symmetric = bool(np.max(np.abs(vals - mirror)) <= 1e-10 * scale)
    monotone = bool(np.all(np.diff(vals) <= 1e-12 * scale))
    integrable = _tail_decay_integrable(g, vals)
    k0 = kernel_eval(pv, 0.0)
    bounded = bool(np.isfinite(k0)) and bool(np.all(np.isfinite(vals)))
    return KernelAdmissibility(
        k_at_zero=float(k0) if bounded else None,
        bounded=bounded,
        integrable=integrable,
        symmetric=symmetric,
        monotone_decreasing_on_right=monotone,
        probe_grid=tuple(g),
    )


def load_tabulated_csv(path) -> PhaseVelocity:
    """Read a tabulated phase velocity from CSV with header ``kappa,c``."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["kappa", "c"]:
            raise ConfigurationError(
                f"tabulated kernel file {path} must start with header 'kappa,c'"
            )
        try:
            rows = [(float(r[0]), float(r[1])) for r in reader if r]
        except (ValueError, IndexError) as exc:
            raise ConfigurationError(f"malformed tabulated kernel row in {path}: {exc}")
    return PhaseVelocity.tabulated(rows, description=f"tabulated:{path}")


def parse_kernel(text: str) -> PhaseVelocity:
    """Parse a CLI kernel string: gaussian:s, exponential:l, whitham, tabulated:<path>."""
    name, _, arg = text.partition(":")
    name = name.strip().lower()
    try:
        if name == "gaussian":
            return PhaseVelocity.gaussian(float(arg))
        if name == "exponential":
            return PhaseVelocity.exponential(float(arg))
        if name == "whitham":
            if arg:
                raise ConfigurationError("whitham kernel takes no parameter")
            return PhaseVelocity.whitham()
        if name == "tabulated":
            if not arg:
                raise ConfigurationError("tabulated kernel needs a CSV path")
            return load_tabulated_csv(arg)
    except ValueError as exc:
        raise ConfigurationError(f"bad kernel parameter in {text!r}: {exc}")
    raise ConfigurationError(f"unknown kernel {text!r}")
