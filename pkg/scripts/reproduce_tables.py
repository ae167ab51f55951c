#!/usr/bin/env python3
"""
Reproduce the simulation tables.

Runs the benchmark matrix (exact recovery, long signals, heavy tails)
through the bench API and prints one report per model. Set
IDETECT_BENCH_WORKERS to spread replications over several processes.

Usage:
    python scripts/reproduce_tables.py [--reps 100] [--seed 2024] [--only M2,M4]
"""

import time
from typing import Optional

import typer

from idetect.evalsim import bench_run, get_model
from idetect.evalsim.bench import exact_frequency, pipeline_method
from idetect.models import StoppingRule

# (model, noise, ht_scale, bin scheme, replications; None means --reps)
MATRIX = [
    ("NC", "gaussian", 1, "narrow", None),
    ("M1", "gaussian", 1, "narrow", None),
    ("M2", "gaussian", 1, "narrow", None),
    ("M3", "gaussian", 1, "narrow", None),
    ("M4", "gaussian", 1, "narrow", None),
    ("W1", "gaussian", 1, "narrow", None),
    ("W2", "gaussian", 1, "narrow", None),
    ("W3", "gaussian", 1, "narrow", None),
    ("W4", "gaussian", 1, "narrow", None),
    ("W5", "gaussian", 1, "narrow", None),
    ("M5", "gaussian", 1, "long", None),
    ("ELT", "gaussian", 1, "long", 10),
    ("M3", "t5", 3, "narrow", None),
    ("M3", "t3", 5, "narrow", None),
]


def reproduce(
    reps: int = typer.Option(100, "--reps", help="Replications per model"),
    seed: int = typer.Option(2024, "--seed", help="Base seed"),
    only: Optional[str] = typer.Option(None, "--only", help="Comma-separated model names"),
) -> None:
    """Run every row of the matrix and print its report."""
    selected = {n.strip().upper() for n in (only or "").split(",") if n.strip()}
    for name, dist, scale, bins, rows_reps in MATRIX:
        if selected and name not in selected:
            continue
        spec = get_model(name)
        extra = {"ht_scale": scale} if scale > 1 else {}
        methods = [
            pipeline_method(spec, rule, **extra)
            for rule in (StoppingRule.THRESHOLD, StoppingRule.SIC, StoppingRule.HYBRID)
        ]
        n = rows_reps or reps

        started = time.perf_counter()
        report = bench_run(spec, n, dist=dist, seed=seed, methods=methods, bins=bins)
        elapsed = time.perf_counter() - started

        typer.echo(f"== {name} ({dist}, s={scale}, {n} reps, {elapsed:.1f}s)")
        typer.echo(report.to_table())
        for row in report.rows:
            typer.echo(f"   {row.label}: exact {exact_frequency(report, row.label)}/{n}")
        typer.echo()


if __name__ == "__main__":
    typer.run(reproduce)
