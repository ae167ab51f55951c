"""
Preprocessing

Noise-level estimation and the block-averaging transform used for
heavy-tailed noise, with the map from averaged-scale estimates back to
original indices.
"""

from dataclasses import dataclass
from typing import Iterable, Optional
import logging
import math

import numpy as np
from scipy.stats import median_abs_deviation

from idetect.errors import BadScaleError, IDetectError, ZeroScaleError
from idetect.models import SignalClass, TimeSeries

logger = logging.getLogger(__name__)

# Relative size below which a MAD estimate counts as zero
_ZERO_SCALE_RTOL = 1e-10


@dataclass(frozen=True)
class ScaleTransform:
    """
    Block-averaging transform of a series of length original_T.

    Attributes:
        s: Block size
        Q: Number of blocks, ceil(original_T / s)
        original_T: Length before averaging
    """

    s: int
    Q: int
    original_T: int

    def __post_init__(self) -> None:
        if self.s < 1 or self.Q < 1 or (self.Q - 1) * self.s >= self.original_T:
            raise BadScaleError(
                f"inconsistent transform s={self.s}, Q={self.Q}, T={self.original_T}"
            )


def estimate_sigma_mad(series: TimeSeries, signal_class: SignalClass) -> float:
    """
    Estimate the noise standard deviation from differenced data.

    First differences (divided by sqrt 2) for piecewise-constant signals,
    second differences (divided by sqrt 6) for continuous piecewise-linear ones.

    Args:
        series: Observed series, T >= 3
        signal_class: Selects the differencing order

    Returns:
        float: Positive sigma estimate

    Raises:
        IDetectError: If the series has fewer than 3 observations
        ZeroScaleError: If the estimate is zero
    """
    if series.T < 3:
        raise IDetectError(f"noise estimate needs at least 3 observations, got {series.T}")
    if signal_class is SignalClass.CONTINUOUS_PIECEWISE_LINEAR:
        diffs, factor = np.diff(series.values, n=2), math.sqrt(6.0)
    else:
        diffs, factor = np.diff(series.values, n=1), math.sqrt(2.0)

    sigma = float(median_abs_deviation(diffs, scale="normal")) / factor
    magnitude = float(np.max(np.abs(series.values)))
    if sigma <= _ZERO_SCALE_RTOL * max(magnitude, np.finfo(float).tiny):
        raise ZeroScaleError("MAD noise estimate is zero; supply sigma explicitly")
    logger.debug(f"MAD sigma estimate {sigma:.6g} ({signal_class.value})")
    return sigma


def block_average(series: TimeSeries, s: int) -> tuple[TimeSeries, ScaleTransform]:
    """
    Average consecutive blocks of s observations.

    The last block may be partial and is averaged over its actual length.

    Args:
        series: Observed series
        s: Block size, 1 <= s <= T

    Returns:
        tuple: (averaged series of length ceil(T/s), the transform)

    Raises:
        BadScaleError: If s < 1 or s > T
    """
    T = series.T
    if not 1 <= s <= T:
        raise BadScaleError(f"scale must lie in [1, {T}], got {s}")
    starts = np.arange(0, T, s)
    sums = np.add.reduceat(series.values, starts)
    counts = np.diff(np.append(starts, T))
    transform = ScaleTransform(s=s, Q=int(starts.shape[0]), original_T=T)
    return TimeSeries(sums / counts), transform


def map_locations(
    locations: Iterable[int], s: int, T: Optional[int] = None, lower: int = 1
) -> tuple[int, ...]:
    """
    Map averaged-scale locations back to original indices.

    r = (r_avg - 1) * s + floor(s/2 + 0.5), clamped to [lower, T-1] when T
    is given; duplicates created by the clamp are dropped.

    Args:
        locations: Locations on the averaged scale
        s: Block size
        T: Original length, enables clamping
        lower: Smallest admissible location

    Returns:
        tuple: Sorted, duplicate-free original locations
    """
    offset = math.floor(s / 2 + 0.5)
    mapped = [(int(r) - 1) * s + offset for r in locations]
    if T is not None:
        mapped = [min(max(r, lower), T - 1) for r in mapped]
    return tuple(sorted(set(mapped)))


def adapt_lambda(lam: int, s: int) -> int:
    """Expansion step on the averaged scale: max(1, floor(lam / s))."""
    return max(1, lam // s)
