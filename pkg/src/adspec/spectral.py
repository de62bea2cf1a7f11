"""Fourier transforms, periodograms and periodogram-ratio samples.

All transforms follow the convention

    y(w_k) = (2 pi T)^(-1/2) * sum_{t=1}^{T} x_t exp(i w_k t),   w_k = 2 pi k / T,

stored for k = 0 .. floor(T/2).  Periodograms are extended to (0, pi] as
piecewise-constant functions whose k-th cell is (w_k - pi/T, w_k + pi/T].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from .adstat import RatioSample
from .errors import (
    DegenerateSpectrumError,
    DomainError,
    InvalidInputError,
    InvalidParameterError,
)

MIN_LENGTH = 8

# Relative slack used when snapping floating-point grid positions onto exact
# integers (cell boundaries, block centres).
_SNAP = 1e-9


def _as_series(x, name: str = "series", min_length: int = MIN_LENGTH) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        raise InvalidInputError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size < min_length:
        raise InvalidInputError(f"{name} needs at least {min_length} samples, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        bad = int(np.flatnonzero(~np.isfinite(arr))[0])
        raise InvalidInputError(f"{name} contains a non-finite value at index {bad}")
    return arr


@dataclass(frozen=True)
class BivariateSeries:
    """Two equal-length real series observed on the same time grid."""

    x1: np.ndarray
    x2: np.ndarray

    def __post_init__(self):
        x1 = _as_series(self.x1, "x1")
        x2 = _as_series(self.x2, "x2")
        if x1.size != x2.size:
            raise InvalidInputError(
                f"channel lengths differ: len(x1)={x1.size}, len(x2)={x2.size}"
            )
        object.__setattr__(self, "x1", x1)
        object.__setattr__(self, "x2", x2)

    @property
    def T(self) -> int:
        return int(self.x1.size)

    def swapped(self) -> "BivariateSeries":
        return BivariateSeries(self.x2, self.x1)

    def scaled(self, c: float) -> "BivariateSeries":
        return BivariateSeries(c * self.x1, c * self.x2)


@dataclass(frozen=True)
class Spectrum:
    """Normalised DFT values at w_k = 2 pi k / T, k = 0 .. floor(T/2)."""

    values: np.ndarray
    T: int

    @property
    def frequencies(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.values.size) / self.T


@dataclass(frozen=True)
class Periodogram:
    """Squared DFT moduli on the Fourier grid, with piecewise-constant lookup."""

    values: np.ndarray
    T: int

    @property
    def frequencies(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.values.size) / self.T

    def at(self, omega: float) -> float:
        return periodogram_at(self, omega)


@dataclass(frozen=True)
class BlockLayout:
    """B consecutive blocks of even length M covering the first M*B samples."""

    B: int
    M: int
    T: int
    midpoints: Tuple[float, ...] = field(init=False)

    def __post_init__(self):
        if self.B < 1:
            raise InvalidParameterError(f"block count must be >= 1, got {self.B}")
        if self.M % 2 != 0:
            raise InvalidParameterError(f"block length must be even, got {self.M}")
        if self.M * self.B > self.T:
            raise InvalidParameterError(
                f"B*M = {self.B * self.M} exceeds the series length {self.T}"
            )
        mids = tuple(((k - 1) * self.M + self.M / 2) / self.T for k in range(1, self.B + 1))
        object.__setattr__(self, "midpoints", mids)

    def centre(self, k: int) -> int:
        """Integer sample index [u_k T] of the k-th block centre (k is 1-based)."""
        return (k - 1) * self.M + self.M // 2


def dft(series: Sequence[float]) -> Spectrum:
    """Normalised discrete Fourier transform on the non-negative Fourier grid."""
    x = _as_series(series)
    T = x.size
    k = np.arange(T // 2 + 1)
    # sum_{t=1}^{T} x_t e^{i w t} = e^{i w} * conj(rfft(x)) for real x
    phase = np.exp(2j * np.pi * k / T)
    phase[0] = 1.0
    if T % 2 == 0:
        phase[-1] = -1.0
    values = np.conj(np.fft.rfft(x)) * phase / math.sqrt(2.0 * math.pi * T)
    values[0] = values[0].real
    if T % 2 == 0:
        values[-1] = values[-1].real
    return Spectrum(values=values, T=T)


def periodogram(series: Sequence[float]) -> Periodogram:
    """Periodogram |y(w_k)|^2 on the grid k = 0 .. floor(T/2)."""
    y = dft(series)
    return Periodogram(values=y.values.real ** 2 + y.values.imag ** 2, T=y.T)


def cell_index(omega: float, T: int) -> int:
    """Index k of the grid cell (w_k - pi/T, w_k + pi/T] containing omega.

    Evaluates ceil(omega T / (2 pi) - 1/2); positions within a relative 1e-9
    of an integer are treated as sitting exactly on a cell's right edge.
    """
    pos = omega * T / (2.0 * math.pi) - 0.5
    nearest = round(pos)
    if abs(pos - nearest) <= _SNAP * max(1.0, abs(pos)):
        return int(nearest)
    return int(math.ceil(pos))


def _cell_index_frac(num: np.ndarray, den: int, T: int) -> np.ndarray:
    # Exact integer version of cell_index for omega = (num/den) * pi.
    return -((den - num * T) // (2 * den))


def periodogram_at(p: Periodogram, omega: float) -> float:
    """Value of the piecewise-constant periodogram at omega in (0, pi]."""
    if not (0.0 < omega <= math.pi):
        raise DomainError(f"frequency must lie in (0, pi], got {omega!r}")
    k = cell_index(omega, p.T)
    return float(p.values[min(k, p.values.size - 1)])


def _block_centre(u: float, T: int) -> int:
    pos = u * T
    nearest = round(pos)
    if abs(pos - nearest) <= _SNAP * max(1.0, abs(pos)):
        return int(nearest)
    return int(math.floor(pos))


def local_window(series: Sequence[float], u: float, M: int) -> np.ndarray:
    """The M samples x_{[uT]-M/2+1}, ..., x_{[uT]+M/2}, zero outside 1..T."""
    if M % 2 != 0 or M < MIN_LENGTH:
        raise InvalidParameterError(f"block length must be even and >= {MIN_LENGTH}, got {M}")
    if not (0.0 < u <= 1.0):
        raise DomainError(f"rescaled time must lie in (0, 1], got {u!r}")
    x = _as_series(series, min_length=1)
    T = x.size
    start = _block_centre(u, T) - M // 2  # 0-based index of x_{[uT]-M/2+1}
    window = np.zeros(M)
    lo, hi = max(start, 0), min(start + M, T)
    if hi > lo:
        window[lo - start:hi - start] = x[lo:hi]
    return window


def local_periodogram(series: Sequence[float], u: float, M: int) -> Periodogram:
    """Periodogram of the length-M window centred at rescaled time u."""
    window = local_window(series, u, M)
    return periodogram(window)


def staggered_indices(L: int, N: int) -> Tuple[np.ndarray, np.ndarray]:
    """Grid indices of the numerator frequencies (l - 1/2) pi / L and the
    denominator frequencies l pi / L, l = 1 .. L-1, on a length-N Fourier grid."""
    if L < 2:
        raise InvalidParameterError(f"L must be >= 2, got {L}")
    if 2 * L >= N:
        raise InvalidParameterError(
            f"L = {L} is too fine for a grid of length {N}: need L < {N}/2"
        )
    l = np.arange(1, L)
    num_idx = _cell_index_frac(2 * l - 1, 2 * L, N)
    den_idx = _cell_index_frac(2 * l, 2 * L, N)
    return num_idx, den_idx


def _ratios(p1: Periodogram, p2: Periodogram, L: int) -> np.ndarray:
    num_idx, den_idx = staggered_indices(L, p1.T)
    num = p1.values[num_idx]
    den = p2.values[den_idx]
    if np.any(den == 0.0):
        raise DegenerateSpectrumError(
            "second channel has a zero periodogram ordinate at a ratio frequency"
        )
    if np.any(num == 0.0):
        raise DegenerateSpectrumError(
            "first channel has a zero periodogram ordinate at a ratio frequency"
        )
    return num / den


def ratio_sample(
    x1: Sequence[float],
    x2: Sequence[float],
    L: int,
    block: Optional[Tuple[float, int]] = None,
    block_index: Optional[int] = None,
) -> RatioSample:
    """Staggered periodogram ratios I_11((l-1/2)pi/L) / I_22(l pi/L), l = 1..L-1.

    With ``block=(u, M)`` the local periodograms of length-M windows centred at
    rescaled time ``u`` are used instead of the full-sample periodograms.
    """
    a = _as_series(x1, "x1")
    b = _as_series(x2, "x2")
    if a.size != b.size:
        raise InvalidInputError(f"channel lengths differ: {a.size} != {b.size}")
    if block is None:
        p1, p2 = periodogram(a), periodogram(b)
        source = "global"
    else:
        u, M = block
        p1, p2 = local_periodogram(a, u, M), local_periodogram(b, u, M)
        source = "block" if block_index is None else f"block:{block_index}"
    return RatioSample(_ratios(p1, p2, L), source=source)
