"""Equal-spectra tests built on Anderson-Darling statistics of periodogram ratios.

``stationary_test`` compares two time-invariant spectra using the full-sample
periodograms.  ``blocked_test`` splits the data into B blocks of length M,
computes one statistic per block from local periodograms and rejects when the
largest of them exceeds the 1 - alpha quantile of a maximum of B independent
limiting Anderson-Darling variables.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass
from typing import Optional, Tuple

import numpy as np

from .adstat import ad_statistic
from .errors import ConsistencyError, InvalidParameterError
from .nulldist import ad_quantile, blocked_quantile, blocked_sf
from .spectral import MIN_LENGTH, BivariateSeries, BlockLayout, ratio_sample

STATIONARY = "stationary"
BLOCKED = "blocked"


@dataclass(frozen=True)
class TestConfig:
    alpha: float = 0.05
    L: Optional[int] = None
    B: Optional[int] = None
    M: Optional[int] = None
    demean: bool = True

    # keep pytest from collecting this as a test class
    __test__ = False

    def __post_init__(self):
        if not (0.0 < self.alpha < 1.0):
            raise InvalidParameterError(f"alpha must lie in (0, 1), got {self.alpha!r}")
        if self.L is not None and self.L < 2:
            raise InvalidParameterError(f"L must be >= 2, got {self.L}")
        if self.B is not None and self.B < 1:
            raise InvalidParameterError(f"B must be >= 1, got {self.B}")
        if self.M is not None and (self.M % 2 != 0 or self.M < MIN_LENGTH):
            raise InvalidParameterError(f"M must be even and >= {MIN_LENGTH}, got {self.M}")


@dataclass(frozen=True)
class TestResult:
    statistic: float
    critical_value: float
    p_value: float
    reject: bool
    kind: str
    T: int
    L: int
    B: Optional[int]
    M: Optional[int]
    alpha: float
    block_statistics: Optional[Tuple[float, ...]] = None

    __test__ = False

    def to_dict(self) -> dict:
        d = asdict(self)
        if self.block_statistics is None:
            del d["block_statistics"]
        else:
            d["block_statistics"] = list(self.block_statistics)
        return d


def default_L(n: int) -> int:
    """Ratio-grid size min(floor(n/4), floor(n^(3/4)))."""
    # floor(n^(3/4)) = floor(sqrt(floor(sqrt(n^3)))), exact in integers
    return min(n // 4, math.isqrt(math.isqrt(n ** 3)))


def default_blocks(T: int) -> Tuple[int, int]:
    """Block count B = max(1, floor(sqrt(T)/5)) and the largest even M <= T/B."""
    B = max(1, math.isqrt(T // 25))
    M = T // B
    M -= M % 2
    return B, M


def _check_L(L: int, n: int, default: int) -> None:
    if 2 * L >= n:
        raise InvalidParameterError(
            f"L = {L} does not fit the Fourier resolution of {n} samples (need L < n/2)"
        )
    if L > 4 * default:
        warnings.warn(
            f"L = {L} exceeds the default {default} by more than 4x; ratios of "
            "neighbouring ordinates may be far from independent",
            stacklevel=3,
        )


def stationary_test(data: BivariateSeries, config: TestConfig = TestConfig()) -> TestResult:
    """Test H0: f_11 = f_22 on (0, pi) for two stationary series."""
    T = data.T
    dflt = default_L(T)
    L = config.L if config.L is not None else dflt
    _check_L(L, T, dflt)
    x1, x2 = data.x1, data.x2
    if config.demean:
        x1 = x1 - x1.mean()
        x2 = x2 - x2.mean()
    stat = ad_statistic(ratio_sample(x1, x2, L)).statistic
    crit = ad_quantile(1.0 - config.alpha)
    return TestResult(
        statistic=stat,
        critical_value=crit,
        p_value=blocked_sf(stat, 1),
        reject=bool(stat > crit),
        kind=STATIONARY,
        T=T,
        L=L,
        B=None,
        M=None,
        alpha=config.alpha,
    )


def resolve_blocks(T: int, config: TestConfig) -> BlockLayout:
    B_default, _ = default_blocks(T)
    B = config.B if config.B is not None else B_default
    if config.M is not None:
        M = config.M
    else:
        M = T // B
        M -= M % 2
    if M < MIN_LENGTH:
        raise InvalidParameterError(
            f"block length M = {M} is below {MIN_LENGTH}; use fewer blocks"
        )
    if B * M > T:
        raise ConsistencyError(f"B*M = {B * M} exceeds T = {T}")
    return BlockLayout(B=B, M=M, T=T)


def _block_demean(x: np.ndarray, layout: BlockLayout) -> np.ndarray:
    out = x.copy()
    n = layout.B * layout.M
    blocks = out[:n].reshape(layout.B, layout.M)
    blocks -= blocks.mean(axis=1, keepdims=True)
    return out


def blocked_test(data: BivariateSeries, config: TestConfig = TestConfig()) -> TestResult:
    """Test H0: f_11(u, .) = f_22(u, .) for every u, via the maximum of
    per-block statistics."""
    T = data.T
    layout = resolve_blocks(T, config)
    dflt = default_L(layout.M)
    L = config.L if config.L is not None else dflt
    _check_L(L, layout.M, dflt)
    x1, x2 = data.x1, data.x2
    if config.demean:
        # each window coincides with one block, so this removes local means
        x1 = _block_demean(x1, layout)
        x2 = _block_demean(x2, layout)
    stats = tuple(
        ad_statistic(ratio_sample(x1, x2, L, block=(u, layout.M), block_index=k)).statistic
        for k, u in enumerate(layout.midpoints, start=1)
    )
    stat = max(stats)
    crit = blocked_quantile(config.alpha, layout.B).value
    return TestResult(
        statistic=stat,
        critical_value=crit,
        p_value=blocked_sf(stat, layout.B),
        reject=bool(stat > crit),
        kind=BLOCKED,
        T=T,
        L=L,
        B=layout.B,
        M=layout.M,
        alpha=config.alpha,
        block_statistics=stats,
    )


def run_test(data: BivariateSeries, config: TestConfig = TestConfig(),
             kind: str = STATIONARY) -> TestResult:
    if kind == STATIONARY:
        return stationary_test(data, config)
    if kind == BLOCKED:
        return blocked_test(data, config)
    raise InvalidParameterError(f"unknown test kind {kind!r}")
