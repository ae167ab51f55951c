"""
Isolate-Detect Simulation Module

Benchmark models, noise, accuracy metrics, brute-force oracles and the
Monte-Carlo runner.
"""

from .signals import MODELS, ModelSpec, add_noise, generate_signal, get_model
from .metrics import hausdorff_scaled, mse
from .bench import BenchReport, bench_run

__all__ = [
    "MODELS",
    "BenchReport",
    "ModelSpec",
    "add_noise",
    "bench_run",
    "generate_signal",
    "get_model",
    "hausdorff_scaled",
    "mse",
]
