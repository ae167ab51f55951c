"""
Brute-Force Oracles

Slow, independent reimplementations used to check the production code:
per-candidate summation of the contrasts, a Gram-Schmidt construction of
the linear-kink vector, and exact least-squares segmentation by dynamic
programming.
"""

from typing import Sequence
import logging

import numpy as np

from idetect.contrasts import helper_vectors
from idetect.errors import InfeasibleError, SpanTooShortError
from idetect.models import SignalClass, TimeSeries

logger = logging.getLogger(__name__)


def cusum_vector(s: int, e: int, b: int, T: int) -> np.ndarray:
    """Explicit CUSUM weight vector psi with <X, psi> equal to the CUSUM statistic."""
    n = e - s + 1
    n_left = b - s + 1
    n_right = e - b
    psi = np.zeros(T)
    psi[s - 1 : b] = np.sqrt(n_right / (n * n_left))
    psi[b:e] = -np.sqrt(n_left / (n * n_right))
    return psi


def gram_schmidt_phi(s: int, e: int, b: int, T: int) -> np.ndarray:
    """
    Unit vector of (t - b)_+ on [s, e] with the constant and linear parts removed.

    Equals the closed-form linear-kink vector up to sign.
    """
    gamma, ones = helper_vectors(s, e, T)
    hinge = np.zeros(T)
    t = np.arange(s, e + 1, dtype=float)
    hinge[s - 1 : e] = np.maximum(t - b, 0.0)
    residual = hinge - (hinge @ ones) * ones - (hinge @ gamma) * gamma
    return residual / np.linalg.norm(residual)


def oracle_argmax(
    series: TimeSeries, signal_class: SignalClass, s: int, e: int
) -> tuple[int, float]:
    """
    Argmax of the contrast on [s, e] by summing every candidate from scratch.

    Raises:
        SpanTooShortError: If the span admits no candidate
    """
    linear = signal_class is SignalClass.CONTINUOUS_PIECEWISE_LINEAR
    min_span = 2 if linear else 1
    if e - s < min_span:
        raise SpanTooShortError(s, e, min_span)
    x = series.values
    best_b, best_value = -1, -1.0
    candidates = range(s + 1, e) if linear else range(s, e)
    for b in candidates:
        weights = gram_schmidt_phi(s, e, b, series.T) if linear else cusum_vector(s, e, b, series.T)
        value = abs(float(np.dot(x, weights)))
        if value > best_value:
            best_b, best_value = b, value
    return best_b, best_value


def oracle_optimal_segmentation(series: TimeSeries, k: int) -> tuple[int, ...]:
    """
    Exact minimiser of the residual sum of squares with k mean shifts.

    Args:
        series: Observed series (meant for small T)
        k: Number of change-points

    Returns:
        tuple: Sorted change-point locations (last index of each segment but the final one)

    Raises:
        InfeasibleError: If k >= T
    """
    x = series.values
    T = series.T
    if k >= T:
        raise InfeasibleError(f"cannot place {k} change-points in a series of length {T}")
    if k == 0:
        return ()

    c1 = np.concatenate(([0.0], np.cumsum(x)))
    c2 = np.concatenate(([0.0], np.cumsum(x * x)))

    def cost(i: int, j: int) -> float:
        # SSE of x[i..j-1], 0-based half-open
        n = j - i
        total = c1[j] - c1[i]
        return float(c2[j] - c2[i] - total * total / n)

    # best[m][j]: minimal cost of x[0..j-1] split into m+1 segments
    best = np.full((k + 1, T + 1), np.inf)
    back = np.zeros((k + 1, T + 1), dtype=np.int64)
    for j in range(1, T + 1):
        best[0, j] = cost(0, j)
    for m in range(1, k + 1):
        for j in range(m + 1, T + 1):
            options = [best[m - 1, i] + cost(i, j) for i in range(m, j)]
            i_best = int(np.argmin(options))
            best[m, j] = options[i_best]
            back[m, j] = i_best + m

    cps: list[int] = []
    j = T
    for m in range(k, 0, -1):
        i = int(back[m, j])
        cps.append(i)
        j = i
    return tuple(sorted(cps))


def segment_means_sse(series: TimeSeries, change_points: Sequence[int]) -> float:
    """Residual sum of squares of the segment-mean fit."""
    x = series.values
    edges = [0, *change_points, series.T]
    return float(
        sum(np.sum((x[a:b] - x[a:b].mean()) ** 2) for a, b in zip(edges[:-1], edges[1:]))
    )
