"""
Model Selection

Overdetection followed by pruning into a solution path, scoring of the
nested models with the strengthened Schwarz criterion, and the hybrid
rule that chooses between the threshold and the criterion.
"""

from dataclasses import dataclass
from typing import Optional, Sequence
import heapq
import logging
import math

import numpy as np
from scipy.linalg import solve_banded

from idetect.contrasts import ContrastKernel
from idetect.detector import detect_windowed
from idetect.errors import ConfigError, SingularFitError
from idetect.models import (
    ChangePointEstimate,
    DetectionResult,
    DetectorConfig,
    PathMode,
    RestartMode,
    SignalClass,
    SolutionPath,
    StoppingRule,
    TimeSeries,
)

logger = logging.getLogger(__name__)

# Residual variance at or below this fraction of the data scale counts as zero
_ZERO_VARIANCE_RTOL = 1e-20


@dataclass(frozen=True)
class PathConfig:
    """
    Parameters of the solution-path pruning.

    Attributes:
        alpha: Exponent of (log T)^alpha, > 1
        cstar: Distance scale C* of the full pruning
        ctilde2: Contrast floor constant of the full pruning
        mode: Part-4-only fast path or the full four-part algorithm
    """

    alpha: float = 1.01
    cstar: float = 1.0
    ctilde2: float = 2.0 * math.sqrt(2.0)
    mode: PathMode = PathMode.FAST_PART_4_ONLY

    def __post_init__(self) -> None:
        if not self.alpha > 1.0:
            raise ConfigError(f"alpha: must be > 1, got {self.alpha}")
        if not self.cstar > 0:
            raise ConfigError(f"cstar: must be > 0, got {self.cstar}")
        if not self.ctilde2 > 0:
            raise ConfigError(f"ctilde2: must be > 0, got {self.ctilde2}")

    @classmethod
    def from_detector_config(cls, config: DetectorConfig) -> "PathConfig":
        return cls(
            alpha=config.sic_alpha,
            cstar=config.cstar,
            ctilde2=config.ctilde2,
            mode=config.path_mode,
        )


@dataclass(frozen=True)
class ScoredModel:
    """
    One member M_j of the nested family with its sSIC value.

    Attributes:
        j: Model size
        change_points: Sorted locations of M_j
        ssic: Criterion value, -inf when the fit is exact
        n_params: j+1 (piecewise-constant) or j+2 (continuous piecewise-linear)
    """

    j: int
    change_points: tuple[int, ...]
    ssic: float
    n_params: int

    @property
    def degenerate(self) -> bool:
        return math.isinf(self.ssic)

    def to_dict(self) -> dict:
        return {
            "j": self.j,
            "change_points": list(self.change_points),
            "ssic": None if self.degenerate else self.ssic,
            "n_params": self.n_params,
            "degenerate": self.degenerate,
        }


def overdetect(kernel: ContrastKernel, config: DetectorConfig) -> list[ChangePointEstimate]:
    """
    Run isolate-detect with the lower overdetection constant.

    Args:
        kernel: Contrast kernel bound to the standardised series
        config: Detector configuration (path_threshold_const, lam, restart_mode)

    Returns:
        list: The sorted candidate set S-tilde
    """
    found = detect_windowed(kernel, config, constant=config.path_threshold_const)
    logger.debug(f"Overdetection kept {len(found)} candidates at lambda={config.lam}")
    return found


def _neighbour_interval(
    kernel: ContrastKernel, locations: Sequence[int], j: int
) -> tuple[int, int]:
    previous = locations[j - 1] if j > 0 else 0
    following = locations[j + 1] if j + 1 < len(locations) else kernel.T
    return kernel.segment_start(previous), following


def neighbor_contrast(kernel: ContrastKernel, locations: Sequence[int], j: int) -> float:
    """
    CS(r_j): contrast of the j-th candidate between its two neighbours.

    Args:
        kernel: Contrast kernel bound to the series
        locations: Sorted candidate locations
        j: 1-based position in ``locations``

    Returns:
        float: The contrast, 0 when the neighbour interval is too short
    """
    s, e = _neighbour_interval(kernel, locations, j - 1)
    return kernel.contrast(s, e, locations[j - 1])


def _fast_path(kernel: ContrastKernel, locations: list[int]) -> list[int]:
    """Remove the weakest candidate until none is left; return removal order."""
    n = len(locations)
    prev = list(range(-1, n - 1))
    nxt = list(range(1, n + 1))
    alive = [True] * n
    version = [0] * n

    def score(i: int) -> float:
        left = locations[prev[i]] if prev[i] >= 0 else 0
        right = locations[nxt[i]] if nxt[i] < n else kernel.T
        return kernel.contrast(kernel.segment_start(left), right, locations[i])

    heap = [(score(i), locations[i], i, 0) for i in range(n)]
    heapq.heapify(heap)
    removed: list[int] = []
    while heap:
        _, loc, i, ver = heapq.heappop(heap)
        if not alive[i] or ver != version[i]:
            continue
        alive[i] = False
        removed.append(loc)
        p, q = prev[i], nxt[i]
        if p >= 0:
            nxt[p] = q
        if q < n:
            prev[q] = p
        for k in (p, q):
            if 0 <= k < n and alive[k]:
                version[k] += 1
                heapq.heappush(heap, (score(k), locations[k], k, version[k]))
    return removed


def midpoint_interval(locations: Sequence[int], j: int, T: int) -> tuple[int, int]:
    """
    Interval between the midpoints to the neighbours of the j-th candidate.

    Args:
        locations: Sorted candidate locations
        j: 1-based position in ``locations``
        T: Series length; the outer neighbours are 1 and T

    Returns:
        tuple: (floor((r_{j-1} + r_j) / 2) + 1, ceil((r_j + r_{j+1}) / 2))
    """
    loc = locations[j - 1]
    previous = locations[j - 2] if j > 1 else 1
    following = locations[j] if j < len(locations) else T
    return (previous + loc) // 2 + 1, -(-(loc + following) // 2)


def _weakest(
    kernel: ContrastKernel, locations: list[int], midpoints: bool = False
) -> tuple[int, float]:
    """Index and value of the smallest triplet contrast (ties to the smallest location)."""
    best_j, best_value = 0, math.inf
    for j, loc in enumerate(locations):
        if midpoints:
            s, e = midpoint_interval(locations, j + 1, kernel.T)
        else:
            s, e = _neighbour_interval(kernel, locations, j)
        value = kernel.contrast(s, e, loc)
        if value < best_value:
            best_j, best_value = j, value
    return best_j, best_value


def _full_path(kernel: ContrastKernel, locations: list[int], pcfg: PathConfig) -> list[int]:
    """Four-part pruning; return the removal order."""
    T = kernel.T
    log_t = math.log(T)
    floor = pcfg.ctilde2 * math.sqrt(log_t)
    distance = pcfg.cstar * log_t**pcfg.alpha
    current = list(locations)
    removed: list[int] = []

    # Part 1: weak candidates crowded by their neighbours
    while current:
        m, value = _weakest(kernel, current)
        previous = current[m - 1] if m > 0 else 1
        following = current[m + 1] if m + 1 < len(current) else T
        if value <= floor and following - previous <= 2 * distance:
            removed.append(current.pop(m))
        else:
            break
    logger.debug(f"Full path part 1 removed {len(removed)} candidates")

    # Part 2: thin out close pairs, then weak candidates
    j = 1
    while j < len(current):
        if current[j] - current[j - 1] <= distance:
            removed.append(current.pop(j))
        else:
            j += 1
    while current:
        m, value = _weakest(kernel, current)
        if value > floor:
            break
        removed.append(current.pop(m))

    # Part 3: midpoint triplets
    while current:
        m, value = _weakest(kernel, current, midpoints=True)
        if value > floor:
            break
        removed.append(current.pop(m))
    logger.debug(f"Full path parts 1-3 left {len(current)} candidates")

    # Part 4
    removed.extend(_fast_path(kernel, current))
    return removed


def solution_path(
    kernel: ContrastKernel, locations: Sequence[int], pcfg: PathConfig
) -> SolutionPath:
    """
    Order the candidates by persistence.

    Args:
        kernel: Contrast kernel bound to the standardised series
        locations: Sorted, duplicate-free candidate set S-tilde
        pcfg: Pruning parameters

    Returns:
        SolutionPath: The removal order reversed, so b_1 is the last one removed
    """
    ordered = sorted(int(b) for b in locations)
    if pcfg.mode is PathMode.FULL_PARTS_1_TO_4:
        removed = _full_path(kernel, ordered, pcfg)
    else:
        removed = _fast_path(kernel, ordered)
    return SolutionPath(ordered_removals=tuple(reversed(removed)))


def _n_params(j: int, signal_class: SignalClass) -> int:
    return j + 2 if signal_class is SignalClass.CONTINUOUS_PIECEWISE_LINEAR else j + 1


def segment_fit(
    series: TimeSeries, change_points: Sequence[int], signal_class: SignalClass
) -> np.ndarray:
    """
    Least-squares fit between change-points.

    Piecewise-constant signals get segment means. Continuous piecewise-linear
    signals get the linear spline with knots at the change-points, written in
    the hat-function basis on {1, b_1, ..., b_j, T} so the normal equations
    are tridiagonal.

    Args:
        series: Observed series
        change_points: Sorted locations inside [1, T-1]
        signal_class: Selects the fit

    Returns:
        np.ndarray: Fitted values, length T

    Raises:
        SingularFitError: If knots repeat or sit on the series boundary
    """
    x = series.values
    T = series.T
    cps = [int(b) for b in change_points]

    if signal_class is SignalClass.PIECEWISE_CONSTANT:
        starts = np.array([0] + cps, dtype=np.int64)
        lengths = np.diff(np.append(starts, T))
        if np.any(lengths < 1):
            raise SingularFitError(f"change-points must be increasing inside [1, {T - 1}]: {cps}")
        means = np.add.reduceat(x, starts) / lengths
        return np.repeat(means, lengths)

    if T < 2:
        return x.copy()
    knots = np.array([1] + cps + [T], dtype=np.int64)
    if np.any(np.diff(knots) < 1):
        raise SingularFitError(f"knots must be distinct and inside (1, {T}): {cps}")

    t = np.arange(1, T + 1)
    n_segments = knots.shape[0] - 1
    seg = np.clip(np.searchsorted(knots, t, side="right") - 1, 0, n_segments - 1)
    w = (t - knots[seg]) / (knots[seg + 1] - knots[seg])
    lo, hi = 1.0 - w, w

    size = knots.shape[0]
    diag = np.bincount(seg, lo * lo, minlength=size) + np.bincount(seg + 1, hi * hi, minlength=size)
    off = np.bincount(seg, lo * hi, minlength=size - 1)[: size - 1]
    rhs = np.bincount(seg, lo * x, minlength=size) + np.bincount(seg + 1, hi * x, minlength=size)

    banded = np.zeros((3, size))
    banded[0, 1:] = off
    banded[1, :] = diag
    banded[2, :-1] = off
    try:
        coef = solve_banded((1, 1), banded, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularFitError(f"spline normal equations are singular for knots {cps}") from exc
    return coef[seg] * lo + coef[seg + 1] * hi


def ssic_score(
    series: TimeSeries,
    change_points: Sequence[int],
    signal_class: SignalClass,
    alpha: float,
) -> float:
    """
    Strengthened Schwarz criterion (T/2) log sigma_j^2 + n_j (log T)^alpha.

    Args:
        series: Observed series
        change_points: Sorted locations of the model
        signal_class: Selects the fit and n_j
        alpha: Penalty exponent

    Returns:
        float: The criterion, or -inf when the residual variance is zero
    """
    T = series.T
    residual = series.values - segment_fit(series, change_points, signal_class)
    variance = float(np.mean(residual * residual))
    scale = max(1.0, float(np.mean(series.values * series.values)))
    if variance <= _ZERO_VARIANCE_RTOL * scale:
        return -math.inf
    penalty = _n_params(len(change_points), signal_class) * math.log(T) ** alpha
    return 0.5 * T * math.log(variance) + penalty


def score_models(
    series: TimeSeries, path: SolutionPath, signal_class: SignalClass, alpha: float
) -> list[ScoredModel]:
    """Score every nested model M_0, ..., M_J."""
    return [
        ScoredModel(
            j=j,
            change_points=model,
            ssic=ssic_score(series, model, signal_class, alpha),
            n_params=_n_params(j, signal_class),
        )
        for j, model in enumerate(path.models)
    ]


def select_model(
    series: TimeSeries,
    path: SolutionPath,
    config: DetectorConfig,
    sigma_hat: float,
    scored: Optional[list[ScoredModel]] = None,
) -> DetectionResult:
    """
    Pick the nested model with the smallest sSIC (ties to the smaller j).

    Args:
        series: Observed series
        path: Solution path
        config: Detector configuration (signal_class, sic_alpha)
        sigma_hat: Noise level to report
        scored: Precomputed scores, computed here if omitted

    Returns:
        DetectionResult: Locations of the chosen model with its fit
    """
    if scored is None:
        scored = score_models(series, path, config.signal_class, config.sic_alpha)
    best = min(scored, key=lambda m: (m.ssic, m.j))
    warnings = []
    if best.degenerate:
        warnings.append(f"model j={best.j} fits exactly; sSIC ranked as -inf")
    logger.debug(f"sSIC selected j={best.j} of J={path.J}")
    return DetectionResult(
        change_points=best.change_points,
        fitted=segment_fit(series, best.change_points, config.signal_class),
        sigma_hat=sigma_hat,
        config_echo=config,
        stopping_used=StoppingRule.SIC,
        warnings=tuple(warnings),
    )


def sic_detect(
    series: TimeSeries, kernel: ContrastKernel, config: DetectorConfig, sigma_hat: float
) -> DetectionResult:
    """Overdetect, build the solution path and select by sSIC."""
    candidates = [est.location for est in overdetect(kernel, config)]
    path = solution_path(kernel, candidates, PathConfig.from_detector_config(config))
    return select_model(series, path, config, sigma_hat)


def hybrid_detect(
    series: TimeSeries, kernel: ContrastKernel, config: DetectorConfig, sigma_hat: float
) -> DetectionResult:
    """
    Threshold first, sSIC when the threshold finds few change-points.

    Both stages restart from each estimate. The threshold stage runs at
    config.lam; if it finds more than config.hybrid_jstar change-points its
    result is kept, otherwise the sSIC pipeline runs at config.hybrid_lambda.

    Args:
        series: Observed series (unscaled)
        kernel: Contrast kernel bound to the standardised series
        config: Detector configuration
        sigma_hat: Noise level to report

    Returns:
        DetectionResult: stopping_used tells which stage produced it
    """
    first = detect_windowed(kernel, config, restart_mode=RestartMode.ESTIMATE_POINT)
    if len(first) > config.hybrid_jstar:
        logger.info(
            f"Hybrid rule: threshold stage found {len(first)} > {config.hybrid_jstar}, accepted"
        )
        cps = tuple(est.location for est in first)
        return DetectionResult(
            change_points=cps,
            fitted=segment_fit(series, cps, config.signal_class),
            sigma_hat=sigma_hat,
            config_echo=config,
            stopping_used=StoppingRule.THRESHOLD,
        )
    logger.info(f"Hybrid rule: threshold stage found {len(first)}, running sSIC stage")
    sic_config = config.with_changes(
        lam=config.hybrid_lambda, restart_mode=RestartMode.ESTIMATE_POINT
    )
    result = sic_detect(series, kernel, sic_config, sigma_hat)
    return DetectionResult(
        change_points=result.change_points,
        fitted=result.fitted,
        sigma_hat=sigma_hat,
        config_echo=config,
        stopping_used=StoppingRule.SIC,
        warnings=result.warnings,
    )
