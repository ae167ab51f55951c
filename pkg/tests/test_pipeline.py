"""
Tests for the detection pipeline entry points.
"""

import numpy as np
import pytest

from conftest import step_series
from idetect.errors import EmptyInputError, NonFiniteValueError, ZeroScaleError
from idetect.evalsim.signals import add_noise, generate_signal, get_model
from idetect.models import (
    DetectorConfig,
    PathMode,
    SignalClass,
    StoppingRule,
    TimeSeries,
)
from idetect.pipeline import detect, detect_path


class TestDetect:
    """Test detect() across stopping rules."""

    @pytest.mark.parametrize("stopping", list(StoppingRule))
    def test_two_step_all_rules(self, two_step: TimeSeries, stopping: StoppingRule):
        """Test every stopping rule recovers the noiseless two-step signal."""
        config = DetectorConfig(stopping=stopping, sigma=1.0)

        result = detect(two_step, config)

        assert result.change_points == (38, 77)
        assert np.array_equal(result.fitted, two_step.values)
        assert result.sigma_hat == 1.0

    def test_threshold_reports_rule(self, two_step: TimeSeries, noiseless_config: DetectorConfig):
        """Test the threshold rule echoes its configuration."""
        result = detect(two_step, noiseless_config)

        assert result.stopping_used is StoppingRule.THRESHOLD
        assert result.config_echo == noiseless_config
        assert result.warnings == ()

    def test_plain_list_input(self, noiseless_config: DetectorConfig):
        """Test a list of floats is validated and accepted."""
        values = [0.0] * 30 + [5.0] * 30

        assert detect(values, noiseless_config).change_points == (30,)

    def test_empty_input(self, noiseless_config: DetectorConfig):
        """Test an empty list raises EmptyInputError."""
        with pytest.raises(EmptyInputError):
            detect([], noiseless_config)

    def test_nan_input(self, noiseless_config: DetectorConfig):
        """Test a NaN raises NonFiniteValueError."""
        with pytest.raises(NonFiniteValueError):
            detect([0.0, float("nan"), 1.0], noiseless_config)

    def test_auto_sigma_on_noiseless_data(self, two_step: TimeSeries):
        """Test MAD estimation fails loudly on noiseless input."""
        with pytest.raises(ZeroScaleError):
            detect(two_step, DetectorConfig())

    def test_noisy_step_auto_sigma(self, rng: np.random.Generator):
        """Test a large step in Gaussian noise is found near its location."""
        signal = step_series(600, [300], [0.0, 3.0]).values
        series = TimeSeries(signal + rng.standard_normal(600))

        result = detect(series, DetectorConfig())

        assert 1 <= result.n_change_points <= 2
        assert min(abs(b - 300) for b in result.change_points) <= 5
        assert result.sigma_hat == pytest.approx(1.0, rel=0.2)

    def test_pure_noise(self, rng: np.random.Generator):
        """Test Gaussian noise without change-points gives no detections."""
        series = TimeSeries(rng.standard_normal(500))
        config = DetectorConfig(stopping=StoppingRule.THRESHOLD, threshold_const=1.5, sigma=1.0)

        result = detect(series, config)

        assert result.change_points == ()
        assert np.allclose(result.fitted, series.values.mean())

    def test_noiseless_many_steps_sic(self):
        """Test sSIC recovers every change-point of a noiseless alternating signal."""
        spec = get_model("M2")
        signal = TimeSeries(generate_signal(spec))

        result = detect(signal, DetectorConfig(stopping=StoppingRule.SIC, sigma=spec.sigma))

        assert result.change_points == spec.true_cps
        assert result.warnings

    def test_hybrid_teeth_at_its_own_step(self):
        """Test the hybrid rule finds teeth spaced exactly hybrid_lambda apart."""
        spec = get_model("M2")
        signal = TimeSeries(generate_signal(spec))
        config = DetectorConfig(sigma=spec.sigma)

        result = detect(signal, config)

        assert config.hybrid_lambda == 10
        assert result.stopping_used is StoppingRule.SIC
        assert result.change_points == spec.true_cps

    def test_hybrid_noisy_teeth(self):
        """Test the default configuration recovers all 13 teeth of a noisy draw."""
        spec = get_model("M2")
        series = add_noise(generate_signal(spec), spec.sigma, seed=2024)

        result = detect(series, DetectorConfig())

        assert result.n_change_points == len(spec.true_cps) == 13
        assert all(abs(b - r) <= 2 for b, r in zip(result.change_points, spec.true_cps))

    def test_linear_class(self, single_kink: TimeSeries, linear_config: DetectorConfig):
        """Test a noiseless kink with the linear class."""
        result = detect(single_kink, linear_config)

        assert result.change_points == (30,)
        assert np.allclose(result.fitted, single_kink.values, atol=1e-9)


class TestHeavyTailed:
    """Test detection on block averages."""

    def test_location_mapped_back(self):
        """Test a step at 500 averaged in blocks of 5 maps back to 498."""
        series = step_series(1000, [500], [0.0, 3.0])
        config = DetectorConfig(stopping=StoppingRule.THRESHOLD, sigma=1.0, ht_scale=5)

        result = detect(series, config)

        assert result.change_points == (498,)
        assert result.fitted.shape == (1000,)
        assert result.config_echo.ht_scale == 5

    def test_scale_echoed_with_sigma(self):
        """Test the reported sigma is on the scale of the input, not of the averages."""
        series = step_series(1000, [500], [0.0, 3.0])
        config = DetectorConfig(stopping=StoppingRule.THRESHOLD, sigma=2.0, ht_scale=4)

        result = detect(series, config)

        assert result.sigma_hat == pytest.approx(2.0)


class TestDetectPath:
    """Test the scored solution path."""

    def test_path_and_scores(self, two_step: TimeSeries):
        """Test the path holds both change-points with one score per model."""
        config = DetectorConfig(stopping=StoppingRule.SIC, sigma=1.0)

        path, scored = detect_path(two_step, config)

        assert path.J == 2
        assert set(path.ordered_removals) == {38, 77}
        assert len(path.scores) == 3
        assert [m.j for m in scored] == [0, 1, 2]
        assert scored[2].degenerate

    @pytest.mark.parametrize("mode", list(PathMode))
    def test_noisy_path_modes(self, rng: np.random.Generator, mode: PathMode):
        """Test both pruning modes put the true change-point first."""
        signal = step_series(400, [200], [0.0, 4.0]).values
        series = TimeSeries(signal + rng.standard_normal(400))
        config = DetectorConfig(stopping=StoppingRule.SIC, path_mode=mode)

        path, scored = detect_path(series, config)

        assert path.J >= 1
        assert abs(path.ordered_removals[0] - 200) <= 3
        best = min(scored, key=lambda m: (m.ssic, m.j))
        assert 1 <= best.j <= 2

    def test_linear_path(self, single_kink: TimeSeries, linear_config: DetectorConfig):
        """Test the linear class gives j + 2 parameters."""
        path, scored = detect_path(single_kink, linear_config)

        assert path.ordered_removals[0] == 30
        assert [m.n_params for m in scored] == [j + 2 for j in range(path.J + 1)]


def test_signal_class_values():
    """Test the wire names of the signal classes."""
    assert SignalClass("pcm") is SignalClass.PIECEWISE_CONSTANT
    assert SignalClass("cplm") is SignalClass.CONTINUOUS_PIECEWISE_LINEAR
