"""
Monte-Carlo Benchmark

Runs seeded replications of a simulation model through one or more
detection pipelines and aggregates the distribution of N-hat - N, the
mean squared error, the scaled Hausdorff distance and the run time.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence
import logging
import time

import numpy as np
import pandas as pd

from idetect.config import get_config
from idetect.errors import IDetectError
from idetect.evalsim.metrics import hausdorff_scaled, mse
from idetect.evalsim.signals import ModelSpec, add_noise, generate_signal
from idetect.models import DetectorConfig, StoppingRule, default_config
from idetect.pipeline import detect

logger = logging.getLogger(__name__)

BIN_SCHEMES: dict[str, list[str]] = {
    "narrow": ["<=-3", "-2", "-1", "0", "1", "2", ">=3"],
    "long": ["<=-500", "(-500,-50]", "(-50,-10)", "[-10,10]", ">10"],
}


def bin_label(diff: int, scheme: str = "narrow") -> str:
    """Histogram bin of N-hat - N under a bin scheme."""
    if scheme == "narrow":
        if diff <= -3:
            return "<=-3"
        if diff >= 3:
            return ">=3"
        return str(diff)
    if scheme == "long":
        if diff <= -500:
            return "<=-500"
        if diff <= -50:
            return "(-500,-50]"
        if diff < -10:
            return "(-50,-10)"
        if diff <= 10:
            return "[-10,10]"
        return ">10"
    raise IDetectError(f"unknown bin scheme {scheme!r}")


@dataclass(frozen=True)
class BenchMethod:
    """A labelled pipeline configuration."""

    label: str
    config: DetectorConfig


def pipeline_method(spec: ModelSpec, stopping: StoppingRule, **changes: object) -> BenchMethod:
    """Default configuration for a model's signal class with the given stopping rule."""
    config = default_config(spec.signal_class).with_changes(stopping=stopping, **changes)
    label = stopping.value
    if changes:
        label += "(" + ", ".join(f"{k}={v}" for k, v in changes.items()) + ")"
    return BenchMethod(label=label, config=config)


@dataclass(frozen=True)
class ReplicationOutcome:
    """Scores of one method on one replication."""

    label: str
    diff: int
    mse: float
    hausdorff: Optional[float]
    seconds: float


@dataclass
class BenchRow:
    label: str
    counts: dict[str, int]
    mse: float
    hausdorff: Optional[float]
    seconds: float
    reps: int


@dataclass
class BenchReport:
    """
    Aggregated benchmark of several methods on one model.

    Attributes:
        model: Model name
        reps: Number of replications
        dist: Noise distribution
        seed: Base seed; replication i uses seed ^ i
        bins: Bin scheme name
        rows: One row per method
    """

    model: str
    reps: int
    dist: str
    seed: int
    bins: str
    rows: list[BenchRow] = field(default_factory=list)

    def to_frame(self) -> pd.DataFrame:
        """One row per method: bin counts, MSE, d_H, time."""
        records = []
        for row in self.rows:
            record: dict[str, object] = {"method": row.label, "model": self.model}
            record.update({label: row.counts.get(label, 0) for label in BIN_SCHEMES[self.bins]})
            record["MSE"] = row.mse
            record["d_H"] = row.hausdorff
            record["time"] = row.seconds
            records.append(record)
        return pd.DataFrame.from_records(records)

    def to_csv(self) -> str:
        return self.to_frame().to_csv(index=False)

    def to_table(self, precision: Optional[int] = None) -> str:
        """Aligned text table with floats shown to ``precision`` significant digits."""
        digits = precision or get_config().get_output_precision()
        frame = self.to_frame()
        return frame.to_string(
            index=False, float_format=lambda v: f"{v:.{digits}g}", na_rep="-"
        )


def _run_replication(
    args: tuple[ModelSpec, int, str, int, list[BenchMethod]],
) -> list[ReplicationOutcome]:
    spec, index, dist, seed, methods = args
    truth = generate_signal(spec)
    series = add_noise(truth, spec.sigma, dist=dist, seed=seed ^ index)
    outcomes = []
    for method in methods:
        started = time.perf_counter()
        result = detect(series, method.config)
        elapsed = time.perf_counter() - started
        outcomes.append(
            ReplicationOutcome(
                label=method.label,
                diff=result.n_change_points - spec.N,
                mse=mse(result.fitted, truth),
                hausdorff=hausdorff_scaled(spec.true_cps, result.change_points, spec.T),
                seconds=elapsed,
            )
        )
    return outcomes


def bench_run(
    spec: ModelSpec,
    reps: int,
    dist: str = "gaussian",
    seed: int = 0,
    methods: Optional[Sequence[BenchMethod]] = None,
    bins: str = "narrow",
    workers: Optional[int] = None,
) -> BenchReport:
    """
    Run seeded replications and aggregate the scores per method.

    Args:
        spec: Simulation model
        reps: Number of replications, >= 1
        dist: Noise distribution ("gaussian", "t3", "t5", ...)
        seed: Base seed; replication i uses seed ^ i
        methods: Pipelines to compare (default: the hybrid rule)
        bins: "narrow" or "long" histogram of N-hat - N
        workers: Process count (default: IDETECT_BENCH_WORKERS)

    Returns:
        BenchReport: Rows in the order of ``methods``

    Raises:
        IDetectError: If reps < 1 or the bin scheme is unknown
    """
    if reps < 1:
        raise IDetectError(f"reps must be >= 1, got {reps}")
    if bins not in BIN_SCHEMES:
        raise IDetectError(f"unknown bin scheme {bins!r}")
    methods = list(methods or [pipeline_method(spec, StoppingRule.HYBRID)])
    workers = workers or get_config().get_bench_workers()
    jobs = [(spec, i, dist, seed, methods) for i in range(reps)]

    logger.info(
        f"Benchmark {spec.name}: {reps} reps x {len(methods)} methods on {workers} worker(s)"
    )
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            per_rep = list(pool.map(_run_replication, jobs))
    else:
        per_rep = [_run_replication(job) for job in jobs]

    report = BenchReport(model=spec.name, reps=reps, dist=dist, seed=seed, bins=bins)
    for k, method in enumerate(methods):
        outcomes = [rep[k] for rep in per_rep]
        counts = {label: 0 for label in BIN_SCHEMES[bins]}
        for outcome in outcomes:
            counts[bin_label(outcome.diff, bins)] += 1
        distances = [o.hausdorff for o in outcomes if o.hausdorff is not None]
        report.rows.append(
            BenchRow(
                label=method.label,
                counts=counts,
                mse=float(np.mean([o.mse for o in outcomes])),
                hausdorff=float(np.mean(distances)) if distances else None,
                seconds=float(np.mean([o.seconds for o in outcomes])),
                reps=reps,
            )
        )
    return report


def exact_frequency(report: BenchReport, label: Optional[str] = None) -> int:
    """Number of replications with N-hat = N (or in [-10, 10] for the long scheme)."""
    row = report.rows[0] if label is None else next(r for r in report.rows if r.label == label)
    key = "0" if report.bins == "narrow" else "[-10,10]"
    return row.counts[key]
