"""
Isolate-Detect Loop

Scans a working interval [s, e] with right- and left-expanding
sub-intervals taken alternately, accepts the first contrast maximum above
the threshold, shrinks [s, e] past it and starts over. Long series are
split into windows that are scanned independently on the global kernel,
with one more scan across every edge between two windows.
"""

from dataclasses import dataclass
from itertools import zip_longest
from typing import Iterator, Optional
import logging
import math

import numpy as np

from idetect.contrasts import ContrastKernel, argmax_contrast
from idetect.errors import BadLambdaError, IDetectError, IndexOrderError
from idetect.models import ChangePointEstimate, DetectorConfig, RestartMode, Side

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ExpansionGrid:
    """
    Grid of expansion end-points over [start, end].

    Attributes:
        lam: Expansion step
        start: First index covered by the grid
        end: Last index covered by the grid
        right_points: start-1 + j*lam for j < K, then end (increasing)
        left_points: end - j*lam + 1 for j < K, then start (decreasing)
    """

    lam: int
    start: int
    end: int
    right_points: np.ndarray
    left_points: np.ndarray

    @classmethod
    def over(cls, start: int, end: int, lam: int) -> "ExpansionGrid":
        """Build the grid for the stretch [start, end]."""
        length = end - start + 1
        if not 1 <= lam <= length:
            raise BadLambdaError(f"lambda must lie in [1, {length}], got {lam}")
        steps = np.arange(1, math.ceil(length / lam), dtype=np.int64) * lam
        right = np.append(start - 1 + steps, end)
        left = np.append(end - steps + 1, start)
        right.setflags(write=False)
        left.setflags(write=False)
        return cls(lam=lam, start=start, end=end, right_points=right, left_points=left)

    @property
    def K(self) -> int:  # noqa: N802
        return int(self.right_points.shape[0])


def expansion_grid(T: int, lam: int) -> ExpansionGrid:
    """
    Build the expansion grid c^r_j = j*lam, c^l_j = T - j*lam + 1 over [1, T].

    Args:
        T: Series length
        lam: Expansion step, 1 <= lam <= T

    Returns:
        ExpansionGrid: K = ceil(T / lam) points per side

    Raises:
        BadLambdaError: If lam is outside [1, T]
    """
    return ExpansionGrid.over(1, T, lam)


@dataclass(frozen=True)
class WorkingInterval:
    """
    The current [s, e] with its expansion sequences.

    Attributes:
        s: Interval start
        e: Interval end
        right_seq: End-points of right-expanding intervals [s, c], last = e
        left_seq: Start-points of left-expanding intervals [c, e], last = s
    """

    s: int
    e: int
    right_seq: tuple[int, ...]
    left_seq: tuple[int, ...]

    def subintervals(self) -> Iterator[tuple[int, int, Side]]:
        """Yield R1, L1, R2, L2, ... then whatever remains of the longer side."""
        for right, left in zip_longest(self.right_seq, self.left_seq):
            if right is not None:
                yield self.s, right, Side.RIGHT_EXPANDING
            if left is not None:
                yield left, self.e, Side.LEFT_EXPANDING


def expanding_sequences(grid: ExpansionGrid, s: int, e: int) -> WorkingInterval:
    """
    Restrict the grid to a working interval.

    Args:
        grid: Expansion grid covering [s, e]
        s: Interval start
        e: Interval end

    Returns:
        WorkingInterval: Grid points strictly inside (s, e), then e (right) or s (left)

    Raises:
        IndexOrderError: Unless grid.start <= s < e <= grid.end
    """
    if not grid.start <= s < e <= grid.end:
        raise IndexOrderError(
            f"working interval [{s}, {e}] must satisfy {grid.start} <= s < e <= {grid.end}"
        )
    right = grid.right_points
    lo = int(np.searchsorted(right, s, side="right"))
    hi = int(np.searchsorted(right, e, side="left"))
    right_seq = tuple(int(c) for c in right[lo:hi]) + (e,)

    left_asc = grid.left_points[::-1]
    lo = int(np.searchsorted(left_asc, s, side="right"))
    hi = int(np.searchsorted(left_asc, e, side="left"))
    left_seq = tuple(int(c) for c in left_asc[lo:hi][::-1]) + (s,)
    return WorkingInterval(s=s, e=e, right_seq=right_seq, left_seq=left_seq)


def threshold_value(T: int, constant: float) -> float:
    """
    zeta_T = constant * sqrt(2 log T).

    Raises:
        IDetectError: If T < 2
    """
    if T < 2:
        raise IDetectError(f"threshold needs T >= 2, got {T}")
    return constant * math.sqrt(2.0 * math.log(T))


def detect_in_interval(
    kernel: ContrastKernel, interval: WorkingInterval, zeta: float
) -> Optional[ChangePointEstimate]:
    """
    Return the first contrast maximum above zeta along the expansion order.

    Args:
        kernel: Contrast kernel bound to the series
        interval: Working interval with its expansion sequences
        zeta: Detection threshold

    Returns:
        ChangePointEstimate or None if no sub-interval exceeds zeta
    """
    for s, e, side in interval.subintervals():
        if e - s < kernel.min_span:
            continue
        b, value = argmax_contrast(kernel, s, e)
        if value > zeta:
            return ChangePointEstimate(location=b, contrast_value=value, interval=(s, e), side=side)
    return None


def _restart(
    kernel: ContrastKernel,
    estimate: ChangePointEstimate,
    s: int,
    e: int,
    mode: RestartMode,
) -> tuple[int, int]:
    """New working interval after a detection."""
    b = estimate.location
    c_start, c_end = estimate.interval
    right = estimate.side is Side.RIGHT_EXPANDING
    if mode is RestartMode.INTERVAL_END:
        return (c_end, e) if right else (s, c_start)
    if right:
        return (kernel.segment_start(b), e)
    return (s, b)


def scan_range(
    kernel: ContrastKernel,
    grid: ExpansionGrid,
    zeta: float,
    restart_mode: RestartMode,
) -> list[ChangePointEstimate]:
    """
    Run the detect-and-restart loop over the grid's stretch.

    Args:
        kernel: Contrast kernel bound to the full series
        grid: Expansion grid of the stretch to scan
        zeta: Detection threshold
        restart_mode: Where the next scan starts after a detection

    Returns:
        list: Detections in the order they were made
    """
    s, e = grid.start, grid.end
    found: list[ChangePointEstimate] = []
    while e - s >= kernel.min_span:
        estimate = detect_in_interval(kernel, expanding_sequences(grid, s, e), zeta)
        if estimate is None:
            break
        found.append(estimate)
        s, e = _restart(kernel, estimate, s, e, restart_mode)
    logger.debug(f"Scan of [{grid.start}, {grid.end}] made {len(found)} detections")
    return found


def _sorted_unique(estimates: list[ChangePointEstimate]) -> list[ChangePointEstimate]:
    by_location: dict[int, ChangePointEstimate] = {}
    for est in estimates:
        by_location.setdefault(est.location, est)
    return [by_location[b] for b in sorted(by_location)]


def isolate_detect(
    kernel: ContrastKernel,
    config: DetectorConfig,
    *,
    constant: Optional[float] = None,
    restart_mode: Optional[RestartMode] = None,
) -> list[ChangePointEstimate]:
    """
    Threshold-based isolate-detect over the whole series.

    Args:
        kernel: Contrast kernel bound to the (standardised) series
        config: Detector configuration (lam, threshold_const, restart_mode)
        constant: Override of config.threshold_const
        restart_mode: Override of config.restart_mode

    Returns:
        list: Detections sorted by location, duplicate-free
    """
    T = kernel.T
    if T < 2:
        return []
    lam = min(config.lam, T)
    if lam < config.lam:
        logger.debug(f"lambda {config.lam} exceeds T={T}, using {lam}")
    zeta = threshold_value(T, config.threshold_const if constant is None else constant)
    mode = restart_mode or config.restart_mode
    return _sorted_unique(scan_range(kernel, expansion_grid(T, lam), zeta, mode))


def window_bounds(T: int, window_len: int) -> list[tuple[int, int]]:
    """Split [1, T] into ceil(T / window_len) contiguous windows of near-equal length."""
    count = math.ceil(T / window_len)
    edges = np.linspace(0, T, count + 1).round().astype(int)
    return [(int(edges[i]) + 1, int(edges[i + 1])) for i in range(count)]


def _scan_stretch(
    kernel: ContrastKernel,
    start: int,
    end: int,
    lam: int,
    zeta: float,
    mode: RestartMode,
) -> list[ChangePointEstimate]:
    if end - start < kernel.min_span:
        return []
    grid = ExpansionGrid.over(start, end, min(lam, end - start + 1))
    return scan_range(kernel, grid, zeta, mode)


def _seam_stretch(
    kernel: ContrastKernel,
    left: tuple[int, int],
    right: tuple[int, int],
    left_found: list[ChangePointEstimate],
    right_found: list[ChangePointEstimate],
) -> tuple[int, int]:
    """Stretch across the edge of two windows between their nearest detections."""
    start = left[0]
    if left_found:
        start = kernel.segment_start(max(est.location for est in left_found))
    end = right[1]
    if right_found:
        end = min(est.location for est in right_found)
    return start, end


def detect_windowed(
    kernel: ContrastKernel,
    config: DetectorConfig,
    *,
    constant: Optional[float] = None,
    restart_mode: Optional[RestartMode] = None,
) -> list[ChangePointEstimate]:
    """
    Windowed isolate-detect for long series.

    Delegates to isolate_detect unless windowing is enabled and T is strictly
    above config.window_trigger. Otherwise every window is scanned with its own
    grid, using the threshold of the full length. Each edge between two windows
    is then scanned once more, from the last detection before it to the first
    one after it, so a change-point sitting on an edge is seen in isolation.
    Every merged location is kept only if its contrast between its two
    neighbours still exceeds zeta.

    Args:
        kernel: Contrast kernel bound to the (standardised) series
        config: Detector configuration
        constant: Override of config.threshold_const
        restart_mode: Override of config.restart_mode

    Returns:
        list: Detections sorted by location, duplicate-free
    """
    T = kernel.T
    if not config.windowed or T <= config.window_trigger:
        return isolate_detect(kernel, config, constant=constant, restart_mode=restart_mode)

    zeta = threshold_value(T, config.threshold_const if constant is None else constant)
    mode = restart_mode or config.restart_mode
    windows = window_bounds(T, config.window_len)
    per_window = [
        _scan_stretch(kernel, start, end, config.lam, zeta, mode) for start, end in windows
    ]
    merged = [est for found in per_window for est in found]
    for k in range(len(windows) - 1):
        start, end = _seam_stretch(
            kernel, windows[k], windows[k + 1], per_window[k], per_window[k + 1]
        )
        merged.extend(_scan_stretch(kernel, start, end, config.lam, zeta, mode))
    merged = _sorted_unique(merged)

    locations = [est.location for est in merged]
    kept = []
    for j, est in enumerate(merged):
        previous = locations[j - 1] if j > 0 else 0
        following = locations[j + 1] if j + 1 < len(locations) else T
        if kernel.contrast(kernel.segment_start(previous), following, est.location) > zeta:
            kept.append(est)
    logger.debug(
        f"Windowed scan of T={T}: {len(windows)} windows, {len(merged)} detections, "
        f"{len(merged) - len(kept)} dropped on re-check"
    )
    return kept
