"""
Isolate-Detect CLI Module

Command-line interface: detection, solution-path export, simulation and
Monte-Carlo benchmarks.
"""

from enum import Enum
from pathlib import Path
from typing import Optional
import json
import logging

import typer

from idetect.config import get_config
from idetect.errors import (
    EmptyInputError,
    IDetectError,
    InputFormatError,
    NonFiniteValueError,
    UnknownModelError,
)
from idetect.evalsim.bench import bench_run, pipeline_method
from idetect.evalsim.signals import add_noise, generate_signal, get_model
from idetect.formats import (
    read_series,
    render_path,
    render_result,
    render_values,
    write_text,
)
from idetect.models import (
    DetectorConfig,
    PathMode,
    RestartMode,
    SignalClass,
    StoppingRule,
    TimeSeries,
    default_config,
)
from idetect.pipeline import detect as run_detect
from idetect.pipeline import detect_path
from idetect.selection import segment_fit

app = typer.Typer(
    name="idetect",
    help="Change-point detection by isolating and detecting.",
    add_completion=False,
)

logger = logging.getLogger(__name__)

# Exit codes
EXIT_DOMAIN = 1
EXIT_INPUT = 2


class OutputFormat(str, Enum):
    json = "json"
    csv = "csv"
    tsv = "tsv"
    table = "table"


class WindowMode(str, Enum):
    auto = "auto"
    off = "off"


class DataFormat(str, Enum):
    lines = "lines"
    csv = "csv"


def _fail(message: str, code: int) -> typer.Exit:
    typer.echo(f"Error: {message}", err=True)
    return typer.Exit(code)


def _load(input_path: str, column: Optional[str]) -> TimeSeries:
    try:
        return read_series(input_path, column)
    except OSError as e:
        raise _fail(f"cannot read {input_path}: {e}", EXIT_INPUT) from e
    except (InputFormatError, EmptyInputError, NonFiniteValueError) as e:
        raise _fail(f"{input_path}: {e}", EXIT_INPUT) from e


def _build_config(
    signal_class: SignalClass,
    stop: StoppingRule,
    lam: Optional[int],
    const: Optional[float],
    sigma: str,
    scale: int,
    window: WindowMode,
    restart: RestartMode,
    path_mode: PathMode = PathMode.FAST_PART_4_ONLY,
) -> DetectorConfig:
    changes: dict = {
        "stopping": stop,
        "ht_scale": scale,
        "windowed": window is WindowMode.auto,
        "restart_mode": restart,
        "path_mode": path_mode,
    }
    if lam is not None:
        changes["lam"] = lam
    if const is not None:
        changes["threshold_const"] = const
    if sigma != "auto":
        try:
            changes["sigma"] = float(sigma)
        except ValueError as e:
            raise _fail(
                f"--sigma must be 'auto' or a number, got {sigma!r}", EXIT_INPUT
            ) from e
    try:
        return default_config(signal_class).with_changes(**changes)
    except IDetectError as e:
        raise _fail(str(e), EXIT_INPUT) from e


@app.command()
def detect(
    input_path: str = typer.Argument(..., help="Data file, one value per line ('-' for stdin)"),
    column: Optional[str] = typer.Option(None, "--column", help="Read this CSV column instead"),
    signal_class: SignalClass = typer.Option(
        SignalClass.PIECEWISE_CONSTANT, "--class", "-c", help="pcm or cplm"
    ),
    stop: StoppingRule = typer.Option(StoppingRule.HYBRID, "--stop", help="Stopping rule"),
    lam: Optional[int] = typer.Option(None, "--lambda", "-l", help="Expansion step"),
    const: Optional[float] = typer.Option(None, "--const", help="Threshold constant"),
    sigma: str = typer.Option("auto", "--sigma", help="Noise level, or 'auto' for MAD"),
    scale: int = typer.Option(1, "--scale", help="Block-averaging scale for heavy tails"),
    window: WindowMode = typer.Option(WindowMode.auto, "--window", help="Windowing of long series"),
    restart: RestartMode = typer.Option(
        RestartMode.INTERVAL_END, "--restart", help="Restart from interval end or estimate"
    ),
    path_mode: PathMode = typer.Option(
        PathMode.FAST_PART_4_ONLY, "--path-mode", help="Solution-path pruning: fast or full"
    ),
    seed: Optional[int] = typer.Option(None, "--seed", help="Ignored; detection is deterministic"),
    fmt: OutputFormat = typer.Option(OutputFormat.json, "--format", "-f", help="Output format"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Write here instead of stdout"),
):
    """
    Detect change-points in a series.

    Example:
        idetect detect data.txt --class pcm --stop hybrid
    """
    series = _load(input_path, column)
    config = _build_config(
        signal_class, stop, lam, const, sigma, scale, window, restart, path_mode
    )
    try:
        result = run_detect(series, config)
    except IDetectError as e:
        raise _fail(str(e), EXIT_DOMAIN) from e
    write_text(render_result(result, series, fmt.value), out)


@app.command()
def path(
    input_path: str = typer.Argument(..., help="Data file, one value per line ('-' for stdin)"),
    column: Optional[str] = typer.Option(None, "--column", help="Read this CSV column instead"),
    signal_class: SignalClass = typer.Option(
        SignalClass.PIECEWISE_CONSTANT, "--class", "-c", help="pcm or cplm"
    ),
    lam: Optional[int] = typer.Option(None, "--lambda", "-l", help="Expansion step"),
    sigma: str = typer.Option("auto", "--sigma", help="Noise level, or 'auto' for MAD"),
    at: Optional[int] = typer.Option(
        None, "--at", help="Model size to fit (default: the sSIC choice)"
    ),
    path_mode: PathMode = typer.Option(
        PathMode.FAST_PART_4_ONLY, "--path-mode", help="Solution-path pruning: fast or full"
    ),
    fmt: OutputFormat = typer.Option(OutputFormat.json, "--format", "-f", help="Output format"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Write here instead of stdout"),
):
    """
    Export the solution path with the sSIC score of every nested model.

    Example:
        idetect path data.txt --at 5
    """
    series = _load(input_path, column)
    config = _build_config(
        signal_class,
        StoppingRule.SIC,
        lam,
        None,
        sigma,
        1,
        WindowMode.auto,
        RestartMode.INTERVAL_END,
        path_mode,
    )
    try:
        solution, scored = detect_path(series, config)
    except IDetectError as e:
        raise _fail(str(e), EXIT_DOMAIN) from e

    if at is None:
        at = min(scored, key=lambda m: (m.ssic, m.j)).j
    if not 0 <= at <= solution.J:
        raise _fail(f"--at {at} is outside [0, {solution.J}]", EXIT_DOMAIN)
    fitted = segment_fit(series, solution.model(at), signal_class)
    write_text(render_path(solution, scored, fitted, at, series, fmt.value), out)


@app.command()
def simulate(
    model: str = typer.Option(..., "--model", "-m", help="Model name, e.g. M2 or W1"),
    seed: int = typer.Option(..., "--seed", "-s", help="Random seed"),
    dist: str = typer.Option("gaussian", "--dist", help="gaussian, t3 or t5"),
    fmt: DataFormat = typer.Option(DataFormat.lines, "--format", "-f", help="lines or csv"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Write here instead of stdout"),
    truth: Optional[Path] = typer.Option(
        None, "--truth", help="Also write the noiseless signal and true change-points (JSON)"
    ),
):
    """
    Generate a noisy series from a named model.

    Example:
        idetect simulate --model M2 --seed 1 --truth m2_truth.json
    """
    try:
        spec = get_model(model)
        signal = generate_signal(spec)
        series = add_noise(signal, spec.sigma, dist=dist, seed=seed)
    except IDetectError as e:
        raise _fail(str(e), EXIT_INPUT) from e

    write_text(render_values(series.values, fmt.value), out)
    if truth is not None:
        payload = {
            "model": spec.name,
            "T": spec.T,
            "signal_class": spec.signal_class.value,
            "sigma": spec.sigma,
            "change_points": list(spec.true_cps),
            "signal": [float(v) for v in signal],
        }
        truth.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


@app.command()
def bench(
    model: str = typer.Option(..., "--model", "-m", help="Model name"),
    reps: int = typer.Option(100, "--reps", "-r", help="Number of replications"),
    seed: int = typer.Option(0, "--seed", "-s", help="Base seed; replication i uses seed ^ i"),
    dist: str = typer.Option("gaussian", "--dist", help="gaussian, t3 or t5"),
    pipeline: Optional[list[StoppingRule]] = typer.Option(
        None, "--pipeline", "-p", help="Stopping rule to benchmark (repeatable)"
    ),
    scale: int = typer.Option(1, "--scale", help="Block-averaging scale for heavy tails"),
    bins: str = typer.Option("narrow", "--bins", help="narrow or long"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="CSV path; table goes to stdout"),
):
    """
    Run a Monte-Carlo benchmark and print the result table.

    Example:
        idetect bench --model M4 --reps 100 --seed 7
    """
    if reps < 1:
        raise _fail(f"--reps must be >= 1, got {reps}", EXIT_INPUT)
    if bins not in ("narrow", "long"):
        raise _fail(f"--bins must be narrow or long, got {bins!r}", EXIT_INPUT)
    try:
        spec = get_model(model)
    except UnknownModelError as e:
        raise _fail(str(e), EXIT_INPUT) from e

    rules = pipeline or [StoppingRule.HYBRID]
    extra = {"ht_scale": scale} if scale > 1 else {}
    try:
        methods = [pipeline_method(spec, rule, **extra) for rule in rules]
        report = bench_run(spec, reps, dist=dist, seed=seed, methods=methods, bins=bins)
    except IDetectError as e:
        raise _fail(str(e), EXIT_DOMAIN) from e

    if out is not None:
        write_text(report.to_csv(), out)
    typer.echo(report.to_table())


@app.callback()
def main(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Enable verbose logging"),
):
    """
    Isolate-Detect - change-point detection for piecewise-constant and piecewise-linear signals.
    """
    log_level = logging.DEBUG if verbose else get_config().get_log_level().upper()
    logging.basicConfig(
        level=log_level,
        format="%(levelname)s: %(message)s",
    )
    if verbose:
        logger.debug("Verbose logging enabled")
