"""
Detection Pipeline

Single entry points that turn a series and a DetectorConfig into a
DetectionResult or a scored solution path.
"""

from typing import Iterable, Union
import logging
import math

from idetect.contrasts import ContrastKernel
from idetect.detector import detect_windowed
from idetect.models import (
    DetectionResult,
    DetectorConfig,
    SignalClass,
    SolutionPath,
    StoppingRule,
    TimeSeries,
    validate_series,
)
from idetect.preprocess import adapt_lambda, block_average, estimate_sigma_mad, map_locations
from idetect.selection import (
    PathConfig,
    ScoredModel,
    hybrid_detect,
    overdetect,
    score_models,
    segment_fit,
    sic_detect,
    solution_path,
)

logger = logging.getLogger(__name__)

SeriesLike = Union[TimeSeries, Iterable[float]]


def _as_series(series: SeriesLike) -> TimeSeries:
    return series if isinstance(series, TimeSeries) else validate_series(series)


def _resolve_sigma(series: TimeSeries, config: DetectorConfig) -> float:
    if config.sigma is not None:
        return config.sigma
    return estimate_sigma_mad(series, config.signal_class)


def _standardised_kernel(
    series: TimeSeries, config: DetectorConfig, sigma: float
) -> ContrastKernel:
    return ContrastKernel.build(series.scaled(1.0 / sigma), config.signal_class)


def detect(series: SeriesLike, config: DetectorConfig) -> DetectionResult:
    """
    Detect change-points with the configured stopping rule.

    Args:
        series: Observed series (validated if not already a TimeSeries)
        config: Detector configuration

    Returns:
        DetectionResult: Sorted change-points with the least-squares fit

    Raises:
        EmptyInputError: If the series is empty
        NonFiniteValueError: If the series contains NaN or infinity
        ZeroScaleError: If sigma is estimated and comes out as zero
    """
    series = _as_series(series)
    if config.ht_scale > 1:
        return _detect_heavy_tailed(series, config)

    sigma = _resolve_sigma(series, config)
    kernel = _standardised_kernel(series, config, sigma)
    logger.info(
        f"Detecting on T={series.T} ({config.signal_class.value}, "
        f"{config.stopping.value}), sigma={sigma:.4g}"
    )

    if config.stopping is StoppingRule.THRESHOLD:
        cps = tuple(est.location for est in detect_windowed(kernel, config))
        return DetectionResult(
            change_points=cps,
            fitted=segment_fit(series, cps, config.signal_class),
            sigma_hat=sigma,
            config_echo=config,
            stopping_used=StoppingRule.THRESHOLD,
        )
    if config.stopping is StoppingRule.SIC:
        return sic_detect(series, kernel, config, sigma)
    return hybrid_detect(series, kernel, config, sigma)


def _detect_heavy_tailed(series: TimeSeries, config: DetectorConfig) -> DetectionResult:
    """
    Detect on block averages and map the locations back.

    sigma_hat is reported on the scale of the input: the noise level found on
    the averages times sqrt(s).
    """
    s = config.ht_scale
    averaged, transform = block_average(series, s)
    inner = config.with_changes(
        ht_scale=1,
        lam=adapt_lambda(config.lam, s),
        hybrid_lambda=adapt_lambda(config.hybrid_lambda, s),
        sigma=None if config.sigma is None else config.sigma / math.sqrt(s),
    )
    logger.info(f"Block-averaging T={series.T} with s={s} into Q={transform.Q}")
    averaged_result = detect(averaged, inner)

    lower = 2 if config.signal_class is SignalClass.CONTINUOUS_PIECEWISE_LINEAR else 1
    cps = map_locations(averaged_result.change_points, s, T=series.T, lower=lower)
    return DetectionResult(
        change_points=cps,
        fitted=segment_fit(series, cps, config.signal_class),
        sigma_hat=averaged_result.sigma_hat * math.sqrt(s),
        config_echo=config,
        stopping_used=averaged_result.stopping_used,
        warnings=averaged_result.warnings,
    )


def detect_path(
    series: SeriesLike, config: DetectorConfig
) -> tuple[SolutionPath, list[ScoredModel]]:
    """
    Overdetect, build the solution path and score every nested model.

    Args:
        series: Observed series
        config: Detector configuration (lam, path_threshold_const, path_mode, sic_alpha)

    Returns:
        tuple: (path carrying per-j scores, the scored models M_0..M_J)
    """
    series = _as_series(series)
    sigma = _resolve_sigma(series, config)
    kernel = _standardised_kernel(series, config, sigma)
    candidates = [est.location for est in overdetect(kernel, config)]
    path = solution_path(kernel, candidates, PathConfig.from_detector_config(config))
    scored = score_models(series, path, config.signal_class, config.sic_alpha)
    return path.with_scores([m.ssic for m in scored]), scored
