"""
Tests for isolate-detect models.
"""

import json
import math

import numpy as np
import pytest

from idetect.errors import (
    ConfigError,
    EmptyInputError,
    IDetectError,
    NonFiniteValueError,
)
from idetect.models import (
    DetectionResult,
    DetectorConfig,
    PathMode,
    RestartMode,
    SignalClass,
    SolutionPath,
    StoppingRule,
    TimeSeries,
    default_config,
    validate_series,
)


class TestTimeSeries:
    """Test TimeSeries and validate_series."""

    def test_one_based_access(self):
        """Test at() and segment() use 1-based inclusive indices."""
        series = validate_series([1.0, 2.0, 3.0, 4.0])

        assert series.T == 4
        assert len(series) == 4
        assert series.at(1) == 1.0
        assert list(series.segment(2, 3)) == [2.0, 3.0]

    def test_values_are_read_only(self):
        """Test that stored values cannot be modified."""
        series = validate_series([1.0, 2.0])

        with pytest.raises(ValueError):
            series.values[0] = 5.0

    def test_empty_rejected(self):
        """Test that an empty input raises EmptyInputError."""
        with pytest.raises(EmptyInputError):
            validate_series([])

    def test_nan_reports_index(self):
        """Test that the first non-finite value is reported 1-based."""
        with pytest.raises(NonFiniteValueError) as exc_info:
            validate_series([0.0, 1.0, float("nan"), float("inf")])

        assert exc_info.value.index == 3

    def test_two_dimensional_rejected(self):
        """Test that a matrix is not accepted as a series."""
        with pytest.raises(IDetectError):
            validate_series(np.zeros((3, 2)))

    def test_scaled(self):
        """Test scaling returns a new series."""
        series = validate_series([2.0, 4.0])

        assert list(series.scaled(0.5).values) == [1.0, 2.0]
        assert list(series.values) == [2.0, 4.0]


class TestDetectorConfig:
    """Test DetectorConfig validation and serialization."""

    def test_defaults(self):
        """Test the documented defaults."""
        config = DetectorConfig()

        assert config.lam == 3
        assert config.stopping is StoppingRule.HYBRID
        assert config.restart_mode is RestartMode.INTERVAL_END
        assert config.sic_alpha == 1.01
        assert config.hybrid_jstar == 100
        assert config.hybrid_lambda == 10
        assert config.path_mode is PathMode.FAST_PART_4_ONLY
        assert config.ctilde2 == pytest.approx(2 * math.sqrt(2))

    @pytest.mark.parametrize(
        "changes",
        [
            {"lam": 0},
            {"sic_alpha": 1.0},
            {"ht_scale": 0},
            {"sigma": -1.0},
            {"threshold_const": 0.0},
            {"window_len": 20000},
        ],
    )
    def test_invalid_values_rejected(self, changes):
        """Test that invariant violations raise ConfigError."""
        with pytest.raises(ConfigError):
            DetectorConfig(**changes)

    def test_validate_lists_errors(self):
        """Test that with_changes re-validates."""
        with pytest.raises(ConfigError, match="lam"):
            DetectorConfig().with_changes(lam=-2)

    def test_class_defaults(self):
        """Test per-class threshold constants."""
        pcm = default_config(SignalClass.PIECEWISE_CONSTANT)
        cplm = default_config(SignalClass.CONTINUOUS_PIECEWISE_LINEAR)

        assert (pcm.threshold_const, pcm.path_threshold_const) == (1.0, 0.9)
        assert (cplm.threshold_const, cplm.path_threshold_const) == (1.4, 1.25)

    def test_dict_round_trip(self):
        """Test to_dict/from_dict preserve every field."""
        config = DetectorConfig(
            signal_class=SignalClass.CONTINUOUS_PIECEWISE_LINEAR,
            lam=5,
            sigma=0.5,
            path_mode=PathMode.FULL_PARTS_1_TO_4,
        )

        data = config.to_dict()

        assert data["lambda"] == 5
        assert data["signal_class"] == "cplm"
        assert DetectorConfig.from_dict(json.loads(json.dumps(data))) == config


class TestDetectionResult:
    """Test DetectionResult invariants and JSON form."""

    def test_json_round_trip(self):
        """Test that a result survives to_json/from_json."""
        result = DetectionResult(
            change_points=(2,),
            fitted=np.array([0.0, 0.0, 1.0, 1.0]),
            sigma_hat=0.5,
            config_echo=DetectorConfig(),
            stopping_used=StoppingRule.SIC,
            warnings=("note",),
        )

        restored = DetectionResult.from_json(result.to_json())

        assert restored.change_points == (2,)
        assert list(restored.fitted) == [0.0, 0.0, 1.0, 1.0]
        assert restored.stopping_used is StoppingRule.SIC
        assert restored.warnings == ("note",)
        assert restored.config_echo == result.config_echo

    def test_unsorted_rejected(self):
        """Test that change-points must be strictly increasing."""
        with pytest.raises(IDetectError):
            DetectionResult((3, 2), np.zeros(5), 1.0, DetectorConfig(), StoppingRule.SIC)

    def test_out_of_range_rejected(self):
        """Test that change-points must lie in [1, T-1]."""
        with pytest.raises(IDetectError):
            DetectionResult((5,), np.zeros(5), 1.0, DetectorConfig(), StoppingRule.SIC)


class TestSolutionPath:
    """Test SolutionPath nesting and serialization."""

    def test_nested_models(self):
        """Test that M_j holds the first j removals, sorted."""
        path = SolutionPath(ordered_removals=(50, 20, 80))

        assert path.J == 3
        assert path.models == [(), (50,), (20, 50), (20, 50, 80)]

    def test_empty_path(self):
        """Test the empty path has only M_0."""
        assert SolutionPath(ordered_removals=()).models == [()]

    def test_duplicates_rejected(self):
        """Test that removals must be distinct."""
        with pytest.raises(IDetectError):
            SolutionPath(ordered_removals=(3, 3))

    def test_score_count_checked(self):
        """Test that scores must cover M_0..M_J."""
        with pytest.raises(IDetectError):
            SolutionPath(ordered_removals=(3,), scores=(1.0,))

    def test_infinite_score_serialized_as_null(self):
        """Test the zero-variance sentinel survives the dict form."""
        path = SolutionPath(ordered_removals=(4,), scores=(10.0, float("-inf")))

        data = path.to_dict()

        assert data["scores"] == [10.0, None]
        assert SolutionPath.from_dict(data).scores == (10.0, float("-inf"))
