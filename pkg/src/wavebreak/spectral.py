"""Shared pseudospectral helpers on a uniform periodic grid.

Real fields are stored as samples on x_j = j*L/n (j = 0..n-1) and
manipulated through one-sided rfft coefficients with wavenumbers
k_j = 2*pi*j/L (j = 0..n/2).  The Nyquist mode is zeroed by every
derivative/antiderivative so the two operations are exact mutual
inverses on the mean-free, Nyquist-free subspace.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError


def wavenumbers(n: int, L: float) -> np.ndarray:
    """One-sided rfft wavenumbers 2*pi*j/L for j = 0..n//2."""
    return 2.0 * np.pi * np.fft.rfftfreq(n, d=L / n)


def grid(n: int, L: float) -> np.ndarray:
    """Sample points x_j = j*L/n."""
    return np.arange(n) * (L / n)


def dealias_cutoff(n: int, fraction: float) -> int:
    """Largest retained mode index under the given dealias fraction.

    fraction = 2/3 gives the classical 2/3 rule for quadratic products.
    """
    return int(fraction * (n // 2))


def derivative(samples: np.ndarray, L: float) -> np.ndarray:
    """Spectral derivative of grid samples (Nyquist mode dropped)."""
    n = len(samples)
    k = wavenumbers(n, L)
    fh = np.fft.rfft(samples) * (1j * k)
    if n % 2 == 0:
        fh[-1] = 0.0
    return np.fft.irfft(fh, n)


def antiderivative(samples: np.ndarray, L: float) -> np.ndarray:
    """Spectral antiderivative F of mean-free samples, with F(x_0) = 0.

    The mean mode must vanish for a periodic antiderivative to exist;
    inputs with |mean| > 1e-10 * scale are rejected.
    """
    n = len(samples)
    fh = np.fft.rfft(samples)
    scale = max(1.0, float(np.max(np.abs(samples))))
    if abs(fh[0]) / n > 1e-10 * scale:
        raise DomainError(
            f"antiderivative requires mean-free input, got mean {fh[0].real / n:.3e}"
        )
    k = wavenumbers(n, L)
    Fh = np.zeros_like(fh)
    Fh[1:] = fh[1:] / (1j * k[1:])
    if n % 2 == 0:
        Fh[-1] = 0.0
    F = np.fft.irfft(Fh, n)
    return F - F[0]


def _parabolic(fm: float, f0: float, fp: float) -> tuple[float, float]:
    """Vertex (offset, value) of the parabola through three equispaced points."""
    den = fm - 2.0 * f0 + fp
    if den == 0.0:
        return 0.0, f0
    delta = 0.5 * (fm - fp) / den
    value = f0 - 0.25 * (fm - fp) * delta
    return delta, value


def refined_min(samples: np.ndarray, L: float) -> tuple[float, float]:
    """(min value, location) of grid samples, refined by 3-point parabola.

    The location is reported modulo L (periodic wrap of neighbours).
    """
    n = len(samples)
    i = int(np.argmin(samples))
    delta, value = _parabolic(samples[(i - 1) % n], samples[i], samples[(i + 1) % n])
    dx = L / n
    return value, ((i + delta) * dx) % L


def refined_max(samples: np.ndarray, L: float) -> tuple[float, float]:
    """(max value, location) of grid samples, refined by 3-point parabola."""
    n = len(samples)
    i = int(np.argmax(samples))
    delta, value = _parabolic(samples[(i - 1) % n], samples[i], samples[(i + 1) % n])
    dx = L / n
    return value, ((i + delta) * dx) % L
