"""
Simulation Signals

Registry of the benchmark models and their noiseless signals, plus the
Gaussian and scaled Student-t noise generators.
"""

from dataclasses import dataclass
from typing import Optional, Union
import logging
import math

import numpy as np

from idetect.errors import BadDofError, IDetectError, UnknownModelError
from idetect.models import SignalClass, TimeSeries

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ModelSpec:
    """
    A named simulation model.

    Piecewise-constant models list one level per segment. Continuous
    piecewise-linear models give f_1, the initial slope f_2 - f_1 and one
    slope change per change-point.

    Attributes:
        name: Registry key
        T: Length
        true_cps: Sorted change-point locations
        signal_class: Structural class of the signal
        sigma: Noise standard deviation
        levels: Segment values (piecewise-constant)
        intercept: f_1 (piecewise-linear)
        slope: Initial slope (piecewise-linear)
        slope_changes: Slope change at each change-point (piecewise-linear)
    """

    name: str
    T: int
    true_cps: tuple[int, ...]
    signal_class: SignalClass
    sigma: float
    levels: tuple[float, ...] = ()
    intercept: float = 0.0
    slope: float = 0.0
    slope_changes: tuple[float, ...] = ()

    @property
    def N(self) -> int:  # noqa: N802
        return len(self.true_cps)


def _pcm(
    name: str, T: int, cps: Union[range, list[int]], levels: list[float], sigma: float
) -> ModelSpec:
    return ModelSpec(
        name=name,
        T=T,
        true_cps=tuple(cps),
        signal_class=SignalClass.PIECEWISE_CONSTANT,
        sigma=sigma,
        levels=tuple(float(v) for v in levels),
    )


def _cplm(
    name: str,
    T: int,
    cps: range,
    changes: list[float],
    intercept: float,
    slope: float,
    sigma: float,
) -> ModelSpec:
    return ModelSpec(
        name=name,
        T=T,
        true_cps=tuple(cps),
        signal_class=SignalClass.CONTINUOUS_PIECEWISE_LINEAR,
        sigma=sigma,
        intercept=intercept,
        slope=slope,
        slope_changes=tuple(float(v) for v in changes),
    )


def _alternating(count: int, first: float, second: float) -> list[float]:
    return [first if i % 2 == 0 else second for i in range(count)]


def _build_registry() -> dict[str, ModelSpec]:
    specs = [
        _pcm("NC", 3000, [], [0.0], 1.0),
        _pcm(
            "M1",
            2048,
            [205, 267, 308, 472, 512, 820, 902, 1332, 1557, 1598, 1659],
            [0, 14.64, -3.66, 7.32, -7.32, 10.98, -4.39, 3.29, 19.03, 7.68, 15.37, 0],
            10.0,
        ),
        _pcm("M2", 140, range(11, 132, 10), _alternating(14, 0.0, 1.0), 0.4),
        _pcm("M3", 150, range(11, 142, 10), list(range(1, 16)), 0.3),
        _pcm("M4", 2000, [1000, 1020], [0.0, 1.5, 0.0], 1.0),
        _pcm("M5", 20000, range(10, 19991, 10), _alternating(2000, 0.0, 3.0), 0.8),
        _pcm("M6", 10000, range(20, 9981, 20), list(range(0, 1000, 2)), 1.0),
        _pcm("LT2", 10000, range(40, 9961, 40), _alternating(250, 0.0, 1.5), 1.0),
        _pcm("ELT", 100000, range(5, 99996, 5), _alternating(20000, 0.0, 2.0), 0.3),
        _pcm("NC2", 300, [], [0.0], 1.0),
        _pcm("D1", 100000, [], [0.0], 1.0),
        _pcm("D2", 100000, [25000, 55000, 85000], [0, 3, -3, 2], 1.0),
        _pcm(
            "D3",
            100000,
            [16000, 22000, 28000, 46000, 62000, 74000, 86000],
            [0, 4, -4, 4, -4, 4, -4, 4],
            1.0,
        ),
        _cplm(
            "W1", 1500, range(150, 1351, 150), _alternating(9, -1 / 32, 1 / 32), -0.5, 1 / 64, 1.0
        ),
        _cplm("W2", 1500, range(15, 1486, 15), _alternating(99, -1.0, 1.0), -0.5, 1 / 40, 1.0),
        _cplm("W3", 840, range(7, 834, 7), _alternating(119, -1.0, 1.0), -0.5, 1 / 32, 0.3),
        _cplm(
            "W4",
            200,
            range(20, 181, 20),
            [1 / 6, 3 / 6, -3 / 4, -1 / 3, -2 / 3, 1, 1 / 4, 3 / 4, -5 / 4],
            1.0,
            1 / 32,
            0.3,
        ),
        _cplm(
            "W5",
            1000,
            range(50, 951, 50),
            [
                -1 / 16, -5 / 16, -5 / 8, 1, 5 / 16, 15 / 32, -5 / 8, -7 / 32, -3 / 4, 13 / 16,
                5 / 16, 19 / 32, -1, -5 / 8, 23 / 32, 1 / 2, 15 / 16, -25 / 16, -5 / 4,
            ],
            1.0,
            1 / 32,
            0.6,
        ),
        _cplm("SW1", 2400, range(20, 2381, 20), _alternating(119, 2.5, -2.5), 1.0, 1.25, 3.0),
        _cplm("SW2", 1500, range(50, 1451, 50), _alternating(29, -1 / 7, 1 / 7), -0.5, 1 / 24, 1.0),
    ]
    for j in (3, 4, 5):
        length = 7 * 10**j
        teeth = range(7, length - 6, 7)
        specs.append(_pcm(f"T1_{j}", length, teeth, _alternating(len(teeth) + 1, 0.0, 4.0), 0.5))
        specs.append(_pcm(f"T2_{j}", length, [], [0.0], 1.0))
    return {spec.name: spec for spec in specs}


MODELS: dict[str, ModelSpec] = _build_registry()


def model_names() -> list[str]:
    return list(MODELS)


def get_model(name: str) -> ModelSpec:
    """
    Look up a model by name (case-insensitive).

    Raises:
        UnknownModelError: If no model is registered under ``name``
    """
    spec = MODELS.get(name.upper())
    if spec is None:
        raise UnknownModelError(name, model_names())
    return spec


def generate_signal(spec: Union[ModelSpec, str]) -> np.ndarray:
    """
    Noiseless signal f of a model.

    Args:
        spec: The model, or its registry name

    Returns:
        np.ndarray: f_1, ..., f_T

    Raises:
        UnknownModelError: If a name is given and not registered
    """
    if isinstance(spec, str):
        spec = get_model(spec)
    if spec.signal_class is SignalClass.PIECEWISE_CONSTANT:
        lengths = np.diff(np.array((0,) + spec.true_cps + (spec.T,)))
        return np.repeat(np.array(spec.levels), lengths)

    # increments f_{t+1} - f_t for t = 1..T-1; the slope changes after each kink
    t = np.arange(1, spec.T)
    increments = np.full(spec.T - 1, spec.slope)
    for r, change in zip(spec.true_cps, spec.slope_changes):
        increments[t >= r] += change
    return spec.intercept + np.concatenate(([0.0], np.cumsum(increments)))


def add_noise(
    signal: np.ndarray,
    sigma: float,
    dist: str = "gaussian",
    seed: Optional[int] = None,
    dof: Optional[float] = None,
) -> TimeSeries:
    """
    Add i.i.d. noise with standard deviation sigma.

    Args:
        signal: Noiseless signal
        sigma: Noise standard deviation
        dist: "gaussian", "t" (with ``dof``), or "t3"/"t5" style shorthands
        seed: Seed of the numpy Generator
        dof: Student-t degrees of freedom, must exceed 2

    Returns:
        TimeSeries: signal + noise

    Raises:
        BadDofError: If Student-t noise is requested with dof <= 2
    """
    f = np.asarray(signal, dtype=float)
    rng = np.random.default_rng(seed)
    kind = dist.lower()
    if kind == "gaussian":
        noise = rng.standard_normal(f.shape[0])
    else:
        if not kind.startswith("t"):
            raise IDetectError(f"unknown noise distribution {dist!r}")
        if kind[1:]:
            try:
                dof = float(kind[1:])
            except ValueError as exc:
                raise IDetectError(f"unknown noise distribution {dist!r}") from exc
        if dof is None or not dof > 2:
            raise BadDofError(f"Student-t noise needs dof > 2, got {dof}")
        noise = math.sqrt((dof - 2.0) / dof) * rng.standard_t(dof, f.shape[0])
    return TimeSeries(f + sigma * noise)
