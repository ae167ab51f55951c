"""
Accuracy Metrics

Mean squared error of a fit and the scaled Hausdorff distance between
true and estimated change-point sets.
"""

from typing import Optional, Sequence
import logging

import numpy as np

from idetect.errors import LengthMismatchError

logger = logging.getLogger(__name__)


def mse(fitted: Sequence[float], truth: Sequence[float]) -> float:
    """
    Mean squared error T^-1 sum (fitted_t - truth_t)^2.

    Raises:
        LengthMismatchError: If the sequences differ in length
    """
    f = np.asarray(fitted, dtype=float)
    g = np.asarray(truth, dtype=float)
    if f.shape != g.shape:
        raise LengthMismatchError(f"fitted has length {f.shape[0]}, truth has {g.shape[0]}")
    return float(np.mean((f - g) ** 2))


def largest_segment(true_cps: Sequence[int], T: int) -> int:
    """Length of the longest segment, with boundaries 0 and T."""
    edges = np.array([0, *sorted(true_cps), T])
    return int(np.max(np.diff(edges)))


def _directed(source: np.ndarray, target: np.ndarray) -> int:
    """max over source of the distance to the nearest target point (target sorted)."""
    idx = np.searchsorted(target, source)
    left = target[np.clip(idx - 1, 0, target.shape[0] - 1)]
    right = target[np.clip(idx, 0, target.shape[0] - 1)]
    nearest = np.minimum(np.abs(source - left), np.abs(source - right))
    return int(np.max(nearest))


def hausdorff_scaled(
    true_cps: Sequence[int], est_cps: Sequence[int], T: int
) -> Optional[float]:
    """
    Hausdorff distance between the two sets divided by the largest true segment.

    Args:
        true_cps: True change-points
        est_cps: Estimated change-points
        T: Series length

    Returns:
        float or None: 0 when both sets are empty, None when exactly one is
    """
    truth = np.sort(np.asarray(true_cps, dtype=np.int64))
    est = np.sort(np.asarray(est_cps, dtype=np.int64))
    if truth.size == 0 and est.size == 0:
        return 0.0
    if truth.size == 0 or est.size == 0:
        return None
    distance = max(_directed(truth, est), _directed(est, truth))
    return distance / largest_segment(truth.tolist(), T)
