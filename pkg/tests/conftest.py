"""
Pytest configuration and shared fixtures for isolate-detect tests.

Noiseless fixtures are detected with sigma fixed to a known value, since
the MAD estimate of a noiseless signal is zero.
"""

import numpy as np
import pytest

from idetect.config import Config
from idetect.models import DetectorConfig, SignalClass, StoppingRule, TimeSeries


def step_series(T: int, cps: list[int], levels: list[float]) -> TimeSeries:
    """Piecewise-constant series with the given change-points and segment values."""
    lengths = np.diff([0, *cps, T])
    return TimeSeries(np.repeat(np.asarray(levels, dtype=float), lengths))


def kink_series(T: int, cps: list[int], slopes: list[float], intercept: float = 0.0) -> TimeSeries:
    """Continuous piecewise-linear series with slope ``slopes[k]`` after the k-th kink."""
    t = np.arange(1, T + 1, dtype=float)
    f = intercept + slopes[0] * (t - 1)
    for r, (before, after) in zip(cps, zip(slopes, slopes[1:])):
        f = f + (after - before) * np.maximum(t - r, 0.0)
    return TimeSeries(f)


@pytest.fixture
def two_step() -> TimeSeries:
    """
    Length 100 with change-points at 38 and 77.

    Returns:
        TimeSeries: 0 on [1, 38], 4 on [39, 77], 0 on [78, 100]
    """
    return step_series(100, [38, 77], [0.0, 4.0, 0.0])


@pytest.fixture
def single_kink() -> TimeSeries:
    """Continuous piecewise-linear series of length 60 with one kink at 30."""
    return kink_series(60, [30], [0.5, -0.5], intercept=1.0)


@pytest.fixture
def noiseless_config() -> DetectorConfig:
    """Piecewise-constant threshold configuration with sigma fixed to 1."""
    return DetectorConfig(stopping=StoppingRule.THRESHOLD, sigma=1.0)


@pytest.fixture
def linear_config() -> DetectorConfig:
    """Continuous piecewise-linear threshold configuration with sigma fixed to 0.1."""
    return DetectorConfig(
        signal_class=SignalClass.CONTINUOUS_PIECEWISE_LINEAR,
        threshold_const=1.4,
        path_threshold_const=1.25,
        stopping=StoppingRule.THRESHOLD,
        sigma=0.1,
    )


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator for randomised property checks."""
    return np.random.default_rng(20240601)


@pytest.fixture
def mock_config(monkeypatch: pytest.MonkeyPatch) -> Config:
    """
    Configuration with a controlled environment.

    Args:
        monkeypatch: pytest fixture for patching environment

    Returns:
        Config: Configuration reading the patched environment
    """
    monkeypatch.setenv("IDETECT_LOG_LEVEL", "INFO")
    monkeypatch.setenv("IDETECT_BENCH_WORKERS", "2")
    monkeypatch.setenv("IDETECT_WINDOW_LEN", "2500")
    monkeypatch.setenv("IDETECT_WINDOW_TRIGGER", "10000")
    monkeypatch.setenv("IDETECT_OUTPUT_PRECISION", "6")
    return Config()
