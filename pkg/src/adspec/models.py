"""Seeded simulators for the bivariate processes used in the power studies.

Models A-I are stationary, J-R locally stationary.  Innovations
Z_t = (Z_1t, Z_2t) are Gaussian with unit variances and correlation rho and
are drawn for t = 1 - WARMUP .. T, so every model sees the same stream layout:

* constant-coefficient recursions start from a zero state at t = 1 - WARMUP
  and the first WARMUP outputs are discarded;
* time-varying recursions (K, P and custom paths) start from a zero state at
  t = 0, since their coefficient path is tied to t/T in (0, 1];
* moving averages read their lagged innovations from the pre-sample part;
* the wavelet models use Z_k for k = 0 .. T-1.

Models M and R are built by spectral synthesis and ignore rho.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable, Dict, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.signal import lfilter

from .errors import DomainError, InstabilityError, InvalidParameterError
from .spectral import BivariateSeries

WARMUP = 200
MIN_T = 64
STABILITY_TOL = 1e-9

STATIONARY_MODELS = tuple("ABCDEFGHI")
LOCALLY_STATIONARY_MODELS = tuple("JKLMNOPQR")
MODEL_IDS = STATIONARY_MODELS + LOCALLY_STATIONARY_MODELS
EQUAL_SPECTRA_MODELS = tuple("ABCDEJKLM")

SeedLike = Union[int, np.random.SeedSequence, np.random.Generator, None]


def _rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


# --------------------------------------------------------------------------
# innovations


@dataclass(frozen=True)
class InnovationStream:
    """Correlated Gaussian pairs; index 0 of each array is time 1 - pre."""

    z1: np.ndarray
    z2: np.ndarray
    rho: float
    pre: int = 0

    def at(self, t: int) -> Tuple[float, float]:
        i = t - 1 + self.pre
        return float(self.z1[i]), float(self.z2[i])


def gaussian_innovations(T: int, rho: float, seed: SeedLike = None,
                         pre: int = 0) -> InnovationStream:
    """Draw (Z_1t, Z_2t) for t = 1 - pre .. T.

    Z_2 = rho Z_1 + sqrt(1 - rho^2) W with Z_1, W independent standard normal.
    """
    if not (-1.0 < rho < 1.0):
        raise DomainError(f"innovation correlation must lie in (-1, 1), got {rho!r}")
    rng = _rng(seed)
    draws = rng.standard_normal((2, T + pre))
    z1 = draws[0]
    z2 = rho * z1 + math.sqrt(1.0 - rho * rho) * draws[1]
    return InnovationStream(z1=z1, z2=z2, rho=float(rho), pre=pre)


# --------------------------------------------------------------------------
# coefficient functions of the locally stationary models


def beta1(u):
    return 0.8 * (1.0 + np.sin(np.pi * u / 2.0))


def beta2(u):
    return 0.5 * (1.0 - np.cos(np.pi * u))


def phi_sv(u):
    return 0.6 * np.sin(4.0 * np.pi * u)


def gamma_switch(u):
    return (np.asarray(u) >= 0.5).astype(float)


def w1(u):
    return np.cos(np.pi * u / 2.0)


def w2(u):
    return 0.3 * np.asarray(u) ** 2


PSI1 = {0: 1.0 / math.sqrt(2.0), 1: -1.0 / math.sqrt(2.0)}
PSI2 = {0: 0.5, 1: 0.5, 2: -0.5, 3: -0.5}


def psi_m(u, v):
    return (1.2 * np.cos(2.0 * np.pi * v)) ** 2 + 0.3 * np.sin(2.0 * np.pi * u) + 0.7


def psi_r(u, v):
    return (1.2 * np.cos(2.0 * np.pi * v)) ** 2 + 0.6 * np.sin(2.0 * np.pi * u) + 0.7


# --------------------------------------------------------------------------
# custom linear models


@dataclass(frozen=True)
class ChannelFilter:
    """x_t = sum_j a_j x_{t-j} + scale (Z_t + sum_j b_j Z_{t-j}).

    With ``path_u`` set, ``ar_path``/``ma_path`` hold one coefficient row per
    node of the u-grid and the coefficients at t/T are linearly interpolated.
    """

    ar: Tuple[float, ...] = ()
    ma: Tuple[float, ...] = ()
    scale: float = 1.0
    path_u: Optional[Tuple[float, ...]] = None
    ar_path: Optional[Tuple[Tuple[float, ...], ...]] = None
    ma_path: Optional[Tuple[Tuple[float, ...], ...]] = None

    @property
    def time_varying(self) -> bool:
        return self.path_u is not None

    def coefficients(self, u: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """AR and MA coefficient matrices, one row per entry of u."""
        u = np.atleast_1d(np.asarray(u, dtype=float))
        if not self.time_varying:
            return (np.tile(np.asarray(self.ar, float), (u.size, 1)),
                    np.tile(np.asarray(self.ma, float), (u.size, 1)))
        grid = np.asarray(self.path_u, float)

        def interp(rows, const):
            if rows is None:
                return np.tile(np.asarray(const, float), (u.size, 1))
            table = np.asarray(rows, float).reshape(len(grid), -1)
            return np.column_stack([np.interp(u, grid, table[:, j])
                                    for j in range(table.shape[1])]) \
                if table.shape[1] else np.zeros((u.size, 0))
        return interp(self.ar_path, self.ar), interp(self.ma_path, self.ma)


def check_stationary(ar: Sequence[float], tol: float = STABILITY_TOL) -> None:
    """Raise InstabilityError unless 1 - sum a_j z^j has all roots outside |z| = 1."""
    a = np.asarray(ar, dtype=float)
    a = np.trim_zeros(a, "b")
    if a.size == 0:
        return
    # polynomial coefficients, highest degree first
    poly = np.concatenate((-a[::-1], [1.0]))
    roots = np.roots(poly)
    if roots.size and np.min(np.abs(roots)) <= 1.0 + tol:
        raise InstabilityError(
            f"AR polynomial with coefficients {tuple(a)} has a root of modulus "
            f"{np.min(np.abs(roots)):.6g} (must exceed 1)"
        )


@dataclass(frozen=True)
class CustomModel:
    x1: ChannelFilter
    x2: ChannelFilter

    def validate(self, T: int) -> None:
        u = np.arange(1, T + 1) / T
        for ch in (self.x1, self.x2):
            if ch.time_varying:
                ar_rows, _ = ch.coefficients(u)
                for row in np.unique(ar_rows, axis=0):
                    check_stationary(row)
            else:
                check_stationary(ch.ar)


def _floats(text: str) -> Tuple[float, ...]:
    text = text.strip()
    if not text:
        return ()
    return tuple(float(tok) for tok in text.replace(",", " ").split())


def _rows(text: str) -> Tuple[Tuple[float, ...], ...]:
    return tuple(_floats(row) for row in text.split(";"))


def load_custom_model(path) -> Tuple[CustomModel, Dict[str, float]]:
    """Read a custom model from an INI-style key/value file.

    Sections ``[x1]`` and ``[x2]`` take ``ar``, ``ma`` and ``scale``; an optional
    ``path_u`` grid with ``ar_path``/``ma_path`` rows (separated by ``;``) makes
    the channel time-varying.  An optional ``[model]`` section may set ``rho``.
    """
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    with open(path) as fh:
        parser.read_file(fh)
    channels = []
    for name in ("x1", "x2"):
        if not parser.has_section(name):
            raise InvalidParameterError(f"{path}: missing section [{name}]")
        sec = parser[name]
        path_u = _floats(sec["path_u"]) if "path_u" in sec else None
        ar_path = _rows(sec["ar_path"]) if "ar_path" in sec else None
        ma_path = _rows(sec["ma_path"]) if "ma_path" in sec else None
        if path_u is not None:
            for label, rows in (("ar_path", ar_path), ("ma_path", ma_path)):
                if rows is not None and len(rows) != len(path_u):
                    raise InvalidParameterError(
                        f"{path}: [{name}] {label} has {len(rows)} rows for "
                        f"{len(path_u)} grid points"
                    )
            if list(path_u) != sorted(path_u):
                raise InvalidParameterError(f"{path}: [{name}] path_u must be increasing")
        channels.append(ChannelFilter(
            ar=_floats(sec.get("ar", "")),
            ma=_floats(sec.get("ma", "")),
            scale=sec.getfloat("scale", 1.0),
            path_u=path_u,
            ar_path=ar_path,
            ma_path=ma_path,
        ))
    extras = {}
    if parser.has_section("model"):
        extras = {k: float(v) for k, v in parser["model"].items()}
    return CustomModel(*channels), extras


# --------------------------------------------------------------------------
# model specification


READINGS = ("default", "literal", "per-channel")


@dataclass(frozen=True)
class ModelSpec:
    """One simulation model.

    Two printed models carry a cross-channel term: the first channel of
    Model I lists x_{2,t-2} and the second channel of Model O lists Z_{1,t-2}.
    ``reading`` selects between the printed terms ("literal") and the
    per-channel alternatives x_{1,t-2} and Z_{2,t-2} ("per-channel").  The
    "default" is per-channel for Model I and literal for Model O, the
    combination that reproduces the published rejection rates.
    """

    id: str
    T: int
    rho: float = 0.5
    custom: Optional[CustomModel] = None
    reading: str = "default"

    @property
    def literal(self) -> bool:
        if self.reading == "default":
            return self.id == "O"
        return self.reading == "literal"

    def __post_init__(self):
        ident = self.id.upper() if isinstance(self.id, str) else self.id
        object.__setattr__(self, "id", ident)
        if ident != "CUSTOM" and ident not in MODEL_IDS:
            raise InvalidParameterError(f"unknown model {self.id!r}")
        if ident == "CUSTOM" and self.custom is None:
            raise InvalidParameterError("custom model needs filter coefficients")
        if not (-1.0 < self.rho < 1.0):
            raise DomainError(f"innovation correlation must lie in (-1, 1), got {self.rho!r}")
        if self.reading not in READINGS:
            raise InvalidParameterError(f"reading must be one of {READINGS}, got {self.reading!r}")
        if self.T < MIN_T:
            raise InvalidParameterError(f"T must be >= {MIN_T}, got {self.T}")
        if ident in ("M", "R") and self.T % 2:
            raise InvalidParameterError(f"model {ident} needs an even T, got {self.T}")
        if self.custom is not None:
            self.custom.validate(self.T)

    def with_T(self, T: int) -> "ModelSpec":
        return replace(self, T=T)


# --------------------------------------------------------------------------
# building blocks


def _arma(z: np.ndarray, ar: Sequence[float], ma: Sequence[float], scale: float) -> np.ndarray:
    # zero initial state at the first element of z
    a = np.concatenate(([1.0], -np.asarray(ar, float)))
    b = scale * np.concatenate(([1.0], np.asarray(ma, float)))
    return lfilter(b, a, z)


def _tv_ar1(z: np.ndarray, phi: np.ndarray, scale: float) -> np.ndarray:
    """x_t = phi_t x_{t-1} + scale z_t for t = 1..T with x_0 = 0."""
    x = np.empty_like(z)
    prev = 0.0
    for t in range(z.size):
        prev = phi[t] * prev + scale * z[t]
        x[t] = prev
    return x


def _tv_filter(z_full: np.ndarray, pre: int, T: int, ch: ChannelFilter) -> np.ndarray:
    u = np.arange(1, T + 1) / T
    ar, ma = ch.coefficients(u)
    p, q = ar.shape[1], ma.shape[1]
    z = z_full[pre:]
    # MA part reads lagged innovations from the pre-sample
    e = z.copy()
    for j in range(1, q + 1):
        e += ma[:, j - 1] * z_full[pre - j:pre - j + T]
    e *= ch.scale
    x = np.zeros(T)
    for t in range(T):
        acc = e[t]
        for j in range(1, min(p, t) + 1):
            acc += ar[t, j - 1] * x[t - j]
        x[t] = acc
    return x


def _wavelet(w: Callable, psi: Dict[int, float], z: np.ndarray, T: int) -> np.ndarray:
    """x_t = sum_{k=0}^{T-1} w(k/T) psi_{k-t} Z_k for t = 1..T."""
    t = np.arange(1, T + 1)
    x = np.zeros(T)
    for m, coef in psi.items():
        k = t + m
        inside = (k >= 0) & (k <= T - 1)
        x[inside] += coef * w(k[inside] / T) * z[k[inside]]
    return x


@lru_cache(maxsize=8)
def _synthesis_matrix(psi: Callable, T: int) -> np.ndarray:
    t = np.arange(1, T + 1)[:, None]
    k = np.arange(1, T + 1)[None, :]
    return psi(t / T, k / T) * np.exp(2j * np.pi * ((k * t) % T) / T)


def _symmetric_noise(rng: np.random.Generator, T: int) -> np.ndarray:
    """eps_1..eps_T with eps_k = conj(eps_{T-k}); real at k = T/2 and k = T."""
    eps = np.empty(T, dtype=complex)
    half = T // 2
    k = np.arange(1, half)
    re = rng.standard_normal(k.size)
    im = rng.standard_normal(k.size)
    eps[k - 1] = (re + 1j * im) / math.sqrt(2.0 * T)
    eps[T - k - 1] = np.conj(eps[k - 1])
    eps[half - 1] = rng.standard_normal() / math.sqrt(T)
    eps[T - 1] = rng.standard_normal() / math.sqrt(T)
    return eps


def spectral_synthesis(psi11: Callable, psi22: Callable, T: int, seed: SeedLike = None,
                       return_residual: bool = False):
    """x_t = sum_{k=1}^{T} Phi(t/T, k/T) exp(2 pi i k t / T) eps_k, Phi diagonal.

    Each channel has its own independent symmetric noise vector with
    covariance T^{-1} per coordinate, so the output is real up to rounding.
    """
    if T % 2:
        raise InvalidParameterError(f"spectral synthesis needs an even T, got {T}")
    rng = _rng(seed)
    out = []
    residual = 0.0
    for psi in (psi11, psi22):
        x = _synthesis_matrix(psi, T) @ _symmetric_noise(rng, T)
        residual = max(residual, float(np.max(np.abs(x.imag))))
        out.append(x.real.copy())
    series = BivariateSeries(out[0], out[1])
    return (series, residual) if return_residual else series


# --------------------------------------------------------------------------
# simulation


def simulate(spec: ModelSpec, seed: SeedLike = None) -> BivariateSeries:
    """Draw one bivariate sample path of length spec.T."""
    T, mid = spec.T, spec.id
    rng = _rng(seed)
    if mid in ("M", "R"):
        return spectral_synthesis(psi_m, psi_m if mid == "M" else psi_r, T, rng)

    z = gaussian_innovations(T, spec.rho, rng, pre=WARMUP)
    z1, z2 = z.z1, z.z2
    P = WARMUP
    cur1, cur2 = z1[P:], z2[P:]

    def lag(zz, j):
        return zz[P - j:P - j + T]

    def stationary(zz, ar=(), ma=(), scale=1.0):
        return _arma(zz, ar, ma, scale)[P:]

    u = np.arange(1, T + 1) / T
    r2 = 1.0 / math.sqrt(1.5)
    if mid == "A":
        x1 = cur1 - 0.8 * lag(z1, 1)
        x2 = cur2 - 0.8 * lag(z2, 1)
    elif mid == "B":
        x1 = cur1 - 0.8 * lag(z1, 1) - 0.5 * lag(z1, 2)
        x2 = cur2 - 0.8 * lag(z2, 1) - 0.5 * lag(z2, 2)
    elif mid == "C":
        x1 = stationary(z1, (0.5,), (), math.sqrt(0.75))
        x2 = stationary(z2, (0.5,), (), math.sqrt(0.75))
    elif mid == "D":
        x1 = stationary(z1, (0.5,), (-0.5,))
        x2 = stationary(z2, (0.5,), (-0.5,))
    elif mid == "E":
        x1 = stationary(z1, (0.5, -0.5), (), r2)
        x2 = stationary(z2, (0.5, -0.5), (), r2)
    elif mid == "F":
        x1 = cur1 - 0.8 * lag(z1, 1) - 0.5 * lag(z1, 2)
        x2 = cur2 - 0.8 * lag(z2, 1)
    elif mid == "G":
        x1 = stationary(z1, (0.5,), (), math.sqrt(0.75))
        x2 = stationary(z2, (0.5,), (-0.5,))
    elif mid == "H":
        x1 = stationary(z1, (0.5,), (), math.sqrt(0.75))
        x2 = stationary(z2, (0.5, -0.5), (), r2)
    elif mid == "I":
        full2 = _arma(z2, (0.6, -0.6), (), math.sqrt(0.55))
        if spec.literal:
            # x1_t = 0.5 x1_{t-1} - 0.5 x2_{t-2} + Z1_t / sqrt(1.5)
            drive = r2 * z1
            drive[2:] -= 0.5 * full2[:-2]
            full1 = lfilter([1.0], [1.0, -0.5], drive)
        else:
            full1 = _arma(z1, (0.5, -0.5), (), r2)
        x1, x2 = full1[P:], full2[P:]
    elif mid == "J":
        x1 = cur1 - beta1(u) * lag(z1, 1)
        x2 = cur2 - beta1(u) * lag(z2, 1)
    elif mid == "K":
        x1 = _tv_ar1(cur1, phi_sv(u), 1.0)
        x2 = _tv_ar1(cur2, phi_sv(u), 1.0)
    elif mid == "L":
        # Z_k for k = 0 .. T-1 sits at array offset P - 1 + k
        x1 = _wavelet(w1, PSI1, z1[P - 1:P - 1 + T], T)
        x2 = _wavelet(w1, PSI1, z2[P - 1:P - 1 + T], T)
    elif mid == "N":
        x1 = cur1 - beta1(u) * lag(z1, 1) - beta2(u) * lag(z1, 2)
        x2 = cur2 - beta1(u) * lag(z2, 1)
    elif mid == "O":
        x1 = cur1 - 0.8 * lag(z1, 1) - (0.5 - gamma_switch(u)) * lag(z1, 2)
        x2 = cur2 - 0.8 * lag(z2, 1) - 0.5 * lag(z1 if spec.literal else z2, 2)
    elif mid == "P":
        x1 = _tv_ar1(cur1, phi_sv(u), 1.5)
        x2 = _tv_ar1(cur2, phi_sv(u), 1.0)
    elif mid == "Q":
        k1 = z1[P - 1:P - 1 + T]
        k2 = z2[P - 1:P - 1 + T]
        x1 = _wavelet(w1, PSI1, k1, T) + _wavelet(w2, PSI2, k2, T)
        x2 = _wavelet(w1, PSI1, k2, T)
    elif mid == "CUSTOM":
        chans = []
        for ch, zz in ((spec.custom.x1, z1), (spec.custom.x2, z2)):
            if ch.time_varying:
                chans.append(_tv_filter(zz, P, T, ch))
            else:
                chans.append(_arma(zz, ch.ar, ch.ma, ch.scale)[P:])
        x1, x2 = chans
    else:  # pragma: no cover - guarded by ModelSpec
        raise InvalidParameterError(f"unknown model {mid!r}")
    return BivariateSeries(np.ascontiguousarray(x1), np.ascontiguousarray(x2))
