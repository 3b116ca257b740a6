"""Slope-plane breaking conditions, time bounds, and proof identities.

Everything here lives in normalized units K(0) = 1; general kernels enter
only through :func:`normalize`, which maps slopes (m1, m2) -> (m1, m2)/K(0)
(with the companion time rescaling t -> K(0) t handled by callers of the
time bounds).

Working objects:

* the breaking region   Omega = {m1 < -2, 0 <= m2 < m1^2 + m1},
* the classical asymmetry condition  m1 + m2 <= -2 K(0),
* the invariant subregion  S = Omega intersect {m1 + m2 <= 0},
* the hitting-time bound t* and blowup deadline T*,
* the Riccati lower envelope for 1/m1 after t*.

Inequalities are implemented with exactly the strict/weak forms of the set
definitions (Omega open at m1 = -2 and at the parabola, closed at m2 = 0;
the asymmetry condition weak).  Region tests accept an optional tolerance
band so discrete trajectories that graze a boundary can be classified.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class SlopePair:
    """A point (m1, m2) in the plane of gradient extrema.

    Solver-produced pairs satisfy m1 <= 0 <= m2; free phase-plane points
    (portraits, classification queries) are unconstrained.
    """

    m1: float
    m2: float


class RegionLabel(enum.Enum):
    BOTH = "Both"
    OMEGA_ONLY = "OmegaOnly"
    SELIGER_ONLY = "SeligerOnly"
    NEITHER = "Neither"


@dataclass(frozen=True)
class BoundsReport:
    """Time bounds for an initial slope pair inside Omega.

    ``decay_rate`` is the triangle bound on (m1+m2)' and is only defined
    when m1 + m2 > 0 (None otherwise).  ``envelope_origin`` is the
    conservative envelope anchor: the initial pair itself, since
    m1(t*) <= m1(0) makes the initial slope the worst admissible origin.
    """

    t_star: float
    T_star: float
    decay_rate: float | None
    envelope_origin: SlopePair


def in_omega(p: SlopePair, tol: float = 0.0) -> bool:
    """Membership in Omega = {m1 < -2 and 0 <= m2 < m1^2 + m1}.

    tol > 0 widens every inequality by the band (used for grazing checks);
    tol = 0 reproduces the exact strict/weak pattern of the definition.
    """
    return (
        p.m1 < -2.0 + tol
        and p.m2 >= -tol
        and p.m2 < p.m1 * p.m1 + p.m1 + tol
    )


def in_omega_closure(p: SlopePair, tol: float = 0.0) -> bool:
    """Membership in the closure {m1 <= -2, 0 <= m2 <= m1^2 + m1} +- tol."""
    return (
        p.m1 <= -2.0 + tol
        and p.m2 >= -tol
        and p.m2 <= p.m1 * p.m1 + p.m1 + tol
    )


def seliger(p: SlopePair, k0: float = 1.0) -> bool:
    """Classical asymmetry breaking condition m1 + m2 <= -2 K(0)."""
    if not k0 > 0:
        raise DomainError(f"K(0) must be positive, got {k0}")
    return p.m1 + p.m2 <= -2.0 * k0


def normalize(p: SlopePair, k0: float) -> SlopePair:
    """Rescale slopes to K(0) = 1 units: (m1, m2) -> (m1/K(0), m2/K(0)).

    Under the companion time map t -> K(0) t the general slope system maps
    onto the normalized one, so every bound below applies to the rescaled
    pair with times read in rescaled units.
    """
    if not k0 > 0:
        raise DomainError(f"K(0) must be positive, got {k0}")
    return SlopePair(p.m1 / k0, p.m2 / k0)


def classify(p: SlopePair, k0: float = 1.0) -> RegionLabel:
    """Joint label against Omega and the classical condition (after normalization)."""
    q = normalize(p, k0)
    om = in_omega(q)
    se = seliger(q, 1.0)
    if om and se:
        return RegionLabel.BOTH
    if om:
        return RegionLabel.OMEGA_ONLY
    if se:
        return RegionLabel.SELIGER_ONLY
    return RegionLabel.NEITHER


def _require_omega(p: SlopePair, what: str) -> None:
    if not in_omega(p):
        raise DomainError(
            f"{what} requires (m1, m2) in the breaking region Omega; "
            f"got ({p.m1:g}, {p.m2:g})"
        )


def t_star(p: SlopePair) -> float:
    """Upper bound on the time to reach m1 + m2 <= 0.

    t* = max{0, (m1 + m2) / (2 m1 (2 + m1))}; zero exactly when the pair
    already satisfies m1 + m2 <= 0.  Defined on Omega only (the sign of the
    denominator relies on m1 < -2).
    """
    _require_omega(p, "t_star")
    s = p.m1 + p.m2
    if s <= 0.0:
        return 0.0
    return s / (2.0 * p.m1 * (2.0 + p.m1))


def T_star(p: SlopePair) -> float:
    """Blowup deadline T* = (1/2) log(m1/(2+m1)) + t*; positive on Omega."""
    _require_omega(p, "T_star")
    return 0.5 * math.log(p.m1 / (2.0 + p.m1)) + t_star(p)


def deadline(m1_at_tstar: float, t_star_value: float) -> float:
    """Zero crossing of the Riccati envelope: t* + (1/2) log(m1(t*)/(2+m1(t*)))."""
    if not m1_at_tstar < -2.0:
        raise DomainError(f"envelope origin slope must be < -2, got {m1_at_tstar}")
    return t_star_value + 0.5 * math.log(m1_at_tstar / (2.0 + m1_at_tstar))


def boundary_identity(m1: float) -> float:
    """The parabola-boundary production rate m1^3 (2 + m1).

    Equals the expansion m2^2 - m2 + m1 evaluated at m2 = m1^2 + m1; it is
    strictly positive for m1 < -2, which is what seals the invariance of
    Omega (trajectories touching the parabola are pushed back inside).
    """
    return m1 ** 3 * (2.0 + m1)


def triangle_decay_rate(p0: SlopePair) -> float:
    """Bound on (m1+m2)' inside the exit triangle: -2 m1 (2 + m1) < 0.

    Only defined for pairs in Omega with m1 + m2 > 0 (the pairs that have
    not yet reached the invariant subregion S).
    """
    _require_omega(p0, "triangle_decay_rate")
    if not p0.m1 + p0.m2 > 0.0:
        raise DomainError(
            f"triangle_decay_rate requires m1 + m2 > 0, got {p0.m1 + p0.m2:g}"
        )
    return -2.0 * p0.m1 * (2.0 + p0.m1)


def riccati_envelope(m1_at_tstar: float, t_star_value: float, t: float) -> float:
    """Lower bound on 1/m1(t) for t >= t*:

        1/m1(t) >= (1/2) exp(2 (t - t*)) (2/m1(t*) + 1) - 1/2.

    Equality holds at t = t*; the bound's zero crossing (see
    :func:`deadline`) forces m1 -> -infinity before that time.
    """
    if not m1_at_tstar < -2.0:
        raise DomainError(f"envelope origin slope must be < -2, got {m1_at_tstar}")
    if t < t_star_value:
        raise DomainError(f"envelope defined for t >= t* = {t_star_value:g}, got {t:g}")
    return 0.5 * math.exp(2.0 * (t - t_star_value)) * (2.0 / m1_at_tstar + 1.0) - 0.5


def bounds_report(p: SlopePair, k0: float = 1.0) -> BoundsReport:
    """Aggregate t*, T*, triangle rate and envelope anchor for a pair in Omega.

    The pair is normalized first; times are in normalized units (multiply
    by 1/K(0) to return to unscaled time).
    """
    q = normalize(p, k0)
    _require_omega(q, "bounds_report")
    ts = t_star(q)
    rate = triangle_decay_rate(q) if q.m1 + q.m2 > 0.0 else None
    return BoundsReport(t_star=ts, T_star=T_star(q), decay_rate=rate,
                        envelope_origin=q)
