"""
Tests for the idetect CLI.
"""

import json
from pathlib import Path

import numpy as np
import pytest
from typer.testing import CliRunner

from idetect.cli import EXIT_DOMAIN, EXIT_INPUT, app
from idetect.formats import render_values
from idetect.models import TimeSeries

runner = CliRunner()


@pytest.fixture
def two_step_file(tmp_path: Path, two_step: TimeSeries) -> Path:
    """Write the two-step fixture one value per line."""
    path = tmp_path / "two_step.txt"
    path.write_text("".join(f"{v}\n" for v in two_step.values), encoding="utf-8")
    return path


class TestCLIDetect:
    """Test the detect command."""

    def test_detect_json(self, two_step_file: Path):
        """Test JSON output lists the change-points."""
        result = runner.invoke(
            app, ["detect", str(two_step_file), "--sigma", "1", "--stop", "threshold"]
        )

        assert result.exit_code == 0
        payload = json.loads(result.stdout)
        assert payload["change_points"] == [38, 77]
        assert payload["stopping_used"] == "threshold"

    def test_detect_default_rule(self, two_step_file: Path):
        """Test the hybrid rule is the default."""
        result = runner.invoke(app, ["detect", str(two_step_file), "--sigma", "1"])

        assert result.exit_code == 0
        assert json.loads(result.stdout)["change_points"] == [38, 77]

    def test_detect_csv(self, two_step_file: Path):
        """Test CSV output has one row per observation."""
        result = runner.invoke(
            app, ["detect", str(two_step_file), "--sigma", "1", "--format", "csv"]
        )

        lines = result.stdout.strip().splitlines()
        assert result.exit_code == 0
        assert lines[0] == "t,x,fitted"
        assert len(lines) == 101

    def test_detect_table(self, two_step_file: Path):
        """Test the text summary."""
        result = runner.invoke(
            app, ["detect", str(two_step_file), "--sigma", "1", "--format", "table"]
        )

        assert result.exit_code == 0
        assert "change_points: 38, 77" in result.stdout

    def test_detect_to_file(self, two_step_file: Path, tmp_path: Path):
        """Test --out writes the result to a file."""
        out = tmp_path / "result.json"

        result = runner.invoke(
            app, ["detect", str(two_step_file), "--sigma", "1", "--out", str(out)]
        )

        assert result.exit_code == 0
        assert json.loads(out.read_text())["change_points"] == [38, 77]

    def test_detect_stdin(self):
        """Test '-' reads from standard input."""
        data = "\n".join(["0"] * 30 + ["5"] * 30) + "\n"

        result = runner.invoke(
            app, ["detect", "-", "--sigma", "1", "--stop", "threshold"], input=data
        )

        assert result.exit_code == 0
        assert json.loads(result.stdout)["change_points"] == [30]

    def test_detect_csv_column(self, tmp_path: Path):
        """Test --column reads a named CSV column."""
        path = tmp_path / "data.csv"
        rows = [f"{t},{0.0 if t <= 25 else 4.0}" for t in range(1, 51)]
        path.write_text("t,value\n" + "\n".join(rows) + "\n", encoding="utf-8")

        result = runner.invoke(
            app,
            ["detect", str(path), "--column", "value", "--sigma", "1", "--stop", "threshold"],
        )

        assert result.exit_code == 0
        assert json.loads(result.stdout)["change_points"] == [25]

    def test_empty_file(self, tmp_path: Path):
        """Test an empty file exits with the input error code."""
        path = tmp_path / "empty.txt"
        path.write_text("", encoding="utf-8")

        result = runner.invoke(app, ["detect", str(path)])

        assert result.exit_code == EXIT_INPUT
        assert "Error" in result.output

    def test_bad_line(self, tmp_path: Path):
        """Test a non-numeric line is reported with its number."""
        path = tmp_path / "bad.txt"
        path.write_text("1.0\n2.0\nabc\n", encoding="utf-8")

        result = runner.invoke(app, ["detect", str(path)])

        assert result.exit_code == EXIT_INPUT
        assert "line 3" in result.output

    def test_missing_file(self, tmp_path: Path):
        """Test an unreadable path exits with the input error code."""
        result = runner.invoke(app, ["detect", str(tmp_path / "nope.txt")])

        assert result.exit_code == EXIT_INPUT

    def test_bad_sigma(self, two_step_file: Path):
        """Test --sigma must be a number or 'auto'."""
        result = runner.invoke(app, ["detect", str(two_step_file), "--sigma", "loud"])

        assert result.exit_code == EXIT_INPUT

    def test_invalid_lambda(self, two_step_file: Path):
        """Test configuration errors exit with the input error code."""
        result = runner.invoke(app, ["detect", str(two_step_file), "--lambda", "0"])

        assert result.exit_code == EXIT_INPUT

    def test_detect_full_path_mode(self, two_step_file: Path):
        """Test --path-mode full reaches the sSIC pruning and is echoed back."""
        result = runner.invoke(
            app,
            ["detect", str(two_step_file), "--sigma", "1", "--stop", "sic", "--path-mode", "full"],
        )

        assert result.exit_code == 0
        payload = json.loads(result.stdout)
        assert payload["change_points"] == [38, 77]
        assert payload["config_echo"]["path_mode"] == "full"

    def test_bad_path_mode(self, two_step_file: Path):
        """Test an unknown pruning mode is rejected by the option parser."""
        result = runner.invoke(app, ["detect", str(two_step_file), "--path-mode", "bogus"])

        assert result.exit_code == 2

    def test_zero_noise_estimate(self, two_step_file: Path):
        """Test a noiseless series with automatic sigma is a domain error."""
        result = runner.invoke(app, ["detect", str(two_step_file)])

        assert result.exit_code == EXIT_DOMAIN
        assert "sigma" in result.output


class TestCLIPath:
    """Test the path command."""

    def test_path_json(self, two_step_file: Path):
        """Test the path lists removals, scores and the selected fit."""
        result = runner.invoke(app, ["path", str(two_step_file), "--sigma", "1"])

        assert result.exit_code == 0
        payload = json.loads(result.stdout)
        assert sorted(payload["ordered_removals"]) == [38, 77]
        assert payload["at"] == 2
        assert payload["change_points_at"] == [38, 77]
        assert len(payload["fitted_at"]) == 100

    def test_path_at(self, two_step_file: Path):
        """Test --at picks the model size."""
        result = runner.invoke(app, ["path", str(two_step_file), "--sigma", "1", "--at", "1"])

        assert result.exit_code == 0
        payload = json.loads(result.stdout)
        assert payload["at"] == 1
        assert len(payload["change_points_at"]) == 1

    def test_path_at_out_of_range(self, two_step_file: Path):
        """Test --at beyond J is a domain error."""
        result = runner.invoke(app, ["path", str(two_step_file), "--sigma", "1", "--at", "5"])

        assert result.exit_code == EXIT_DOMAIN

    def test_path_table(self, two_step_file: Path):
        """Test one row per nested model."""
        result = runner.invoke(
            app, ["path", str(two_step_file), "--sigma", "1", "--format", "csv"]
        )

        lines = result.stdout.strip().splitlines()
        assert result.exit_code == 0
        assert lines[0] == "j,ssic,n_params,change_points"
        assert len(lines) == 4


class TestCLISimulate:
    """Test the simulate command."""

    def test_simulate_lines(self, tmp_path: Path):
        """Test one value per line and the truth sidecar."""
        truth = tmp_path / "truth.json"

        result = runner.invoke(
            app, ["simulate", "--model", "M2", "--seed", "1", "--truth", str(truth)]
        )

        assert result.exit_code == 0
        assert len(result.stdout.strip().splitlines()) == 140
        payload = json.loads(truth.read_text())
        assert payload["model"] == "M2"
        assert len(payload["change_points"]) == 13
        assert len(payload["signal"]) == 140

    def test_simulate_deterministic(self):
        """Test the same seed reproduces the same bytes."""
        first = runner.invoke(app, ["simulate", "--model", "W4", "--seed", "9"])
        second = runner.invoke(app, ["simulate", "--model", "W4", "--seed", "9"])

        assert first.exit_code == 0
        assert first.stdout == second.stdout

    def test_simulate_csv(self):
        """Test the CSV layout."""
        result = runner.invoke(
            app, ["simulate", "--model", "M2", "--seed", "1", "--format", "csv"]
        )

        assert result.exit_code == 0
        assert result.stdout.splitlines()[0] == "t,x"

    def test_render_values_layouts(self):
        """Test the two value layouts written by simulate."""
        values = np.array([1.5, -2.0])

        assert render_values(values) == "1.5\n-2.0\n"
        assert render_values(values, "csv").splitlines() == ["t,x", "1,1.5", "2,-2"]

    def test_simulate_round_trip(self, tmp_path: Path):
        """Test simulated data feeds straight into detect."""
        data = tmp_path / "m2.txt"
        runner.invoke(app, ["simulate", "--model", "M2", "--seed", "4", "--out", str(data)])

        result = runner.invoke(app, ["detect", str(data)])

        assert result.exit_code == 0
        assert "change_points" in json.loads(result.stdout)

    def test_unknown_model(self):
        """Test an unknown model name exits with the input error code."""
        result = runner.invoke(app, ["simulate", "--model", "bogus", "--seed", "1"])

        assert result.exit_code == EXIT_INPUT
        assert "bogus" in result.output

    def test_bad_dof(self):
        """Test t-noise with too few degrees of freedom."""
        result = runner.invoke(
            app, ["simulate", "--model", "M2", "--seed", "1", "--dist", "t2"]
        )

        assert result.exit_code == EXIT_INPUT


class TestCLIBench:
    """Test the bench command."""

    def test_bench_single_rep(self, tmp_path: Path):
        """Test a one-replication benchmark prints a table and writes CSV."""
        out = tmp_path / "bench.csv"

        result = runner.invoke(
            app,
            ["bench", "--model", "M2", "--reps", "1", "--seed", "0", "--out", str(out)],
        )

        assert result.exit_code == 0
        assert "hybrid" in result.stdout
        assert out.read_text().startswith("method,model,")

    def test_bench_two_pipelines(self):
        """Test --pipeline is repeatable."""
        result = runner.invoke(
            app,
            [
                "bench", "--model", "M2", "--reps", "1",
                "--pipeline", "sic", "--pipeline", "threshold",
            ],
        )

        assert result.exit_code == 0
        assert "sic" in result.stdout
        assert "threshold" in result.stdout

    def test_bench_bad_reps(self):
        """Test --reps must be positive."""
        result = runner.invoke(app, ["bench", "--model", "M2", "--reps", "0"])

        assert result.exit_code == EXIT_INPUT

    def test_bench_bad_bins(self):
        """Test the bin scheme is validated."""
        result = runner.invoke(app, ["bench", "--model", "M2", "--bins", "wide"])

        assert result.exit_code == EXIT_INPUT

    def test_bench_unknown_model(self):
        """Test unknown models are rejected."""
        result = runner.invoke(app, ["bench", "--model", "Z9", "--reps", "1"])

        assert result.exit_code == EXIT_INPUT
