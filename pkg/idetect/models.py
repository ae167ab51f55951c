"""
Isolate-Detect Data Models

Records shared by every stage: the observed series, the detector
configuration, single detections, final results and the solution path.

Indexing is 1-based everywhere a location is exposed; numpy storage is
0-based and the conversion happens only inside accessors.
"""

from dataclasses import dataclass, field, asdict, replace
from enum import Enum
from typing import Any, Iterable, Optional, Sequence
import json
import logging
import math

import numpy as np

from idetect.config import get_config
from idetect.errors import (
    ConfigError,
    EmptyInputError,
    IDetectError,
    NonFiniteValueError,
)

logger = logging.getLogger(__name__)


class SignalClass(str, Enum):
    """Structural class of the underlying mean signal."""

    PIECEWISE_CONSTANT = "pcm"
    CONTINUOUS_PIECEWISE_LINEAR = "cplm"


class StoppingRule(str, Enum):
    """How the number of change-points is decided."""

    THRESHOLD = "threshold"
    SIC = "sic"
    HYBRID = "hybrid"


class RestartMode(str, Enum):
    """Where the working interval restarts after a detection."""

    INTERVAL_END = "interval_end"
    ESTIMATE_POINT = "estimate_point"


class Side(str, Enum):
    """Expansion direction of the interval in which a detection happened."""

    RIGHT_EXPANDING = "right"
    LEFT_EXPANDING = "left"


class PathMode(str, Enum):
    """Solution-path pruning variant."""

    FULL_PARTS_1_TO_4 = "full"
    FAST_PART_4_ONLY = "fast"


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """
    An observed univariate series X_1, ..., X_T.

    Attributes:
        values: Finite observations, stored read-only
    """

    values: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.values, dtype=float, copy=True)
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def T(self) -> int:  # noqa: N802
        """Series length."""
        return int(self.values.shape[0])

    def __len__(self) -> int:
        return self.T

    def at(self, t: int) -> float:
        """Return X_t (1-based)."""
        return float(self.values[t - 1])

    def segment(self, s: int, e: int) -> np.ndarray:
        """Return X_s, ..., X_e (1-based, inclusive)."""
        return self.values[s - 1 : e]

    def scaled(self, factor: float) -> "TimeSeries":
        """Return a new series with every value multiplied by ``factor``."""
        return TimeSeries(self.values * factor)

    def __repr__(self) -> str:
        return f"TimeSeries(T={self.T})"


def validate_series(raw: Iterable[float]) -> TimeSeries:
    """
    Build a TimeSeries from raw numbers.

    Args:
        raw: One-dimensional sequence of reals

    Returns:
        TimeSeries: The validated series

    Raises:
        EmptyInputError: If there are no values
        NonFiniteValueError: At the first NaN/infinity (1-based index)
    """
    arr = np.asarray(list(raw) if not isinstance(raw, np.ndarray) else raw, dtype=float)
    if arr.ndim != 1:
        raise IDetectError(f"expected a one-dimensional series, got shape {arr.shape}")
    if arr.size == 0:
        raise EmptyInputError("series is empty")

    bad = np.flatnonzero(~np.isfinite(arr))
    if bad.size:
        first = int(bad[0])
        raise NonFiniteValueError(index=first + 1, value=float(arr[first]))

    return TimeSeries(arr)


@dataclass(frozen=True)
class DetectorConfig:
    """
    All tunables of a detection run.

    Attributes:
        signal_class: Piecewise-constant or continuous piecewise-linear
        lam: Expansion step lambda of the interval grid
        threshold_const: C (pcm) or C-tilde (cplm) in zeta_T = C * sqrt(2 log T)
        path_threshold_const: Lower constant used by the overdetection pass
        stopping: Threshold, sSIC or hybrid stopping rule
        restart_mode: Restart from the interval end (ID) or the estimate (ID_det)
        sic_alpha: Exponent of the strengthened SIC penalty, > 1
        hybrid_jstar: Threshold results with more than this many points are kept
        hybrid_lambda: Expansion step of the hybrid rule's sSIC stage
        window_len: Window length for long series
        window_trigger: Windowing is used only when T is strictly above this
        windowed: False disables windowing regardless of T
        ht_scale: Block-averaging scale s (1 = off)
        sigma: Fixed noise level, or None for the MAD estimate
        path_mode: Part-4-only fast path or the full four-part pruning
        cstar: Distance scale C* of the full pruning
        ctilde2: Contrast floor constant of the full pruning
    """

    signal_class: SignalClass = SignalClass.PIECEWISE_CONSTANT
    lam: int = 3
    threshold_const: float = 1.0
    path_threshold_const: float = 0.9
    stopping: StoppingRule = StoppingRule.HYBRID
    restart_mode: RestartMode = RestartMode.INTERVAL_END
    sic_alpha: float = 1.01
    hybrid_jstar: int = 100
    hybrid_lambda: int = 10
    window_len: int = 3000
    window_trigger: int = 12000
    windowed: bool = True
    ht_scale: int = 1
    sigma: Optional[float] = None
    path_mode: PathMode = PathMode.FAST_PART_4_ONLY
    cstar: float = 1.0
    ctilde2: float = 2.0 * math.sqrt(2.0)

    def __post_init__(self) -> None:
        errors = self.validate()
        if errors:
            raise ConfigError("; ".join(errors))

    def validate(self) -> list[str]:
        """
        Check the configuration invariants.

        Returns:
            list: Error messages (empty if the configuration is valid)
        """
        errors = []
        if self.lam < 1:
            errors.append(f"lam: must be >= 1, got {self.lam}")
        if self.hybrid_lambda < 1:
            errors.append(f"hybrid_lambda: must be >= 1, got {self.hybrid_lambda}")
        if self.hybrid_jstar < 1:
            errors.append(f"hybrid_jstar: must be >= 1, got {self.hybrid_jstar}")
        if not self.sic_alpha > 1.0:
            errors.append(f"sic_alpha: must be > 1, got {self.sic_alpha}")
        if self.window_len < 1:
            errors.append(f"window_len: must be >= 1, got {self.window_len}")
        if self.window_len > self.window_trigger:
            errors.append(
                "window_len: must not exceed window_trigger "
                f"({self.window_len} > {self.window_trigger})"
            )
        if self.ht_scale < 1:
            errors.append(f"ht_scale: must be >= 1, got {self.ht_scale}")
        if not self.threshold_const > 0:
            errors.append(f"threshold_const: must be > 0, got {self.threshold_const}")
        if not self.path_threshold_const > 0:
            errors.append(f"path_threshold_const: must be > 0, got {self.path_threshold_const}")
        if self.sigma is not None and not (math.isfinite(self.sigma) and self.sigma > 0):
            errors.append(f"sigma: must be a positive real or None, got {self.sigma}")
        if not self.cstar > 0:
            errors.append(f"cstar: must be > 0, got {self.cstar}")
        if not self.ctilde2 > 0:
            errors.append(f"ctilde2: must be > 0, got {self.ctilde2}")
        return errors

    def with_changes(self, **changes: Any) -> "DetectorConfig":
        """Return a copy with some fields replaced (re-validated)."""
        return replace(self, **changes)

    def to_dict(self) -> dict[str, Any]:
        """
        Convert the configuration to a JSON-friendly dictionary.

        Returns:
            dict: Field values, enums as their string values, ``lam`` as ``lambda``
        """
        data = asdict(self)
        data["lambda"] = data.pop("lam")
        for key, value in data.items():
            if isinstance(value, Enum):
                data[key] = value.value
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "DetectorConfig":
        """
        Create a configuration from a dictionary produced by ``to_dict``.

        Args:
            data: Dictionary representation

        Returns:
            DetectorConfig: A new configuration
        """
        data = dict(data)
        if "lambda" in data:
            data["lam"] = data.pop("lambda")
        enums = {
            "signal_class": SignalClass,
            "stopping": StoppingRule,
            "restart_mode": RestartMode,
            "path_mode": PathMode,
        }
        for key, enum_cls in enums.items():
            if key in data:
                data[key] = enum_cls(data[key])
        return cls(**data)


def default_config(signal_class: SignalClass) -> DetectorConfig:
    """
    Return the calibrated defaults for a signal class.

    Args:
        signal_class: Piecewise-constant or continuous piecewise-linear

    Returns:
        DetectorConfig: Defaults (C = 1.0 / 1.4, overdetection 0.9 / 1.25)
    """
    config = get_config()
    linear = signal_class is SignalClass.CONTINUOUS_PIECEWISE_LINEAR
    return DetectorConfig(
        signal_class=signal_class,
        threshold_const=1.4 if linear else 1.0,
        path_threshold_const=1.25 if linear else 0.9,
        window_len=config.get_window_len(),
        window_trigger=config.get_window_trigger(),
    )


@dataclass(frozen=True)
class ChangePointEstimate:
    """
    A single detection made by the isolate-detect loop.

    Attributes:
        location: b-hat, the last index before the change (1-based)
        contrast_value: Contrast at b-hat on the detecting interval
        interval: (s, e) of the detecting interval
        side: Expansion direction of the detecting interval
    """

    location: int
    contrast_value: float
    interval: tuple[int, int]
    side: Side


@dataclass(frozen=True, eq=False)
class DetectionResult:
    """
    Final output of a detection run.

    Attributes:
        change_points: Strictly increasing locations in [1, T-1]
        fitted: Least-squares fit of the signal given the change-points
        sigma_hat: Noise level used for standardisation
        config_echo: Configuration that produced this result
        stopping_used: Rule that actually produced the output
        warnings: Flags raised along the way (e.g. zero residual variance)
    """

    change_points: tuple[int, ...]
    fitted: np.ndarray
    sigma_hat: float
    config_echo: DetectorConfig
    stopping_used: StoppingRule
    warnings: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        cps = tuple(int(c) for c in self.change_points)
        if any(b <= a for a, b in zip(cps, cps[1:])):
            raise IDetectError(f"change_points must be strictly increasing: {cps}")
        fitted = np.array(self.fitted, dtype=float, copy=True)
        fitted.setflags(write=False)
        if cps and (cps[0] < 1 or cps[-1] > fitted.shape[0] - 1):
            raise IDetectError(f"change_points must lie in [1, {fitted.shape[0] - 1}]: {cps}")
        object.__setattr__(self, "change_points", cps)
        object.__setattr__(self, "fitted", fitted)
        object.__setattr__(self, "warnings", tuple(self.warnings))

    @property
    def n_change_points(self) -> int:
        return len(self.change_points)

    def to_dict(self) -> dict[str, Any]:
        """
        Convert the result to a dictionary.

        Returns:
            dict: JSON-serializable representation (documented in docs/schemas.md)
        """
        return {
            "change_points": list(self.change_points),
            "fitted": [float(v) for v in self.fitted],
            "sigma_hat": float(self.sigma_hat),
            "config_echo": self.config_echo.to_dict(),
            "stopping_used": self.stopping_used.value,
            "warnings": list(self.warnings),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "DetectionResult":
        """
        Create a result from its dictionary form.

        Args:
            data: Dictionary representation

        Returns:
            DetectionResult: A new result instance
        """
        return cls(
            change_points=tuple(data["change_points"]),
            fitted=np.asarray(data["fitted"], dtype=float),
            sigma_hat=float(data["sigma_hat"]),
            config_echo=DetectorConfig.from_dict(data["config_echo"]),
            stopping_used=StoppingRule(data["stopping_used"]),
            warnings=tuple(data.get("warnings", ())),
        )

    def to_json(self, indent: Optional[int] = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_json(cls, text: str) -> "DetectionResult":
        return cls.from_dict(json.loads(text))

    def __repr__(self) -> str:
        return (
            f"DetectionResult(N={self.n_change_points}, sigma_hat={self.sigma_hat:.4g}, "
            f"stopping_used='{self.stopping_used.value}')"
        )


@dataclass(frozen=True)
class SolutionPath:
    """
    Ordered removal sequence b = (b_1, ..., b_J) and its nested models.

    b_J is the estimate removed first, so M_j = {b_1, ..., b_j} keeps the
    j most persistent estimates.

    Attributes:
        ordered_removals: b_1, ..., b_J
        scores: Optional sSIC value of every M_j, j = 0..J
    """

    ordered_removals: tuple[int, ...]
    scores: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        removals = tuple(int(b) for b in self.ordered_removals)
        if len(set(removals)) != len(removals):
            raise IDetectError(f"ordered_removals must be distinct: {removals}")
        if self.scores and len(self.scores) != len(removals) + 1:
            raise IDetectError(
                f"expected {len(removals) + 1} scores, got {len(self.scores)}"
            )
        object.__setattr__(self, "ordered_removals", removals)
        object.__setattr__(self, "scores", tuple(float(v) for v in self.scores))

    @property
    def J(self) -> int:  # noqa: N802
        return len(self.ordered_removals)

    def model(self, j: int) -> tuple[int, ...]:
        """Return the sorted locations of M_j."""
        if not 0 <= j <= self.J:
            raise IDetectError(f"model index {j} outside [0, {self.J}]")
        return tuple(sorted(self.ordered_removals[:j]))

    @property
    def models(self) -> list[tuple[int, ...]]:
        """The nested family M_0, ..., M_J."""
        return [self.model(j) for j in range(self.J + 1)]

    def with_scores(self, scores: Sequence[float]) -> "SolutionPath":
        return replace(self, scores=tuple(scores))

    def to_dict(self) -> dict[str, Any]:
        """
        Convert the path to a dictionary.

        Returns:
            dict: ordered_removals, nested models and per-j scores
        """
        return {
            "ordered_removals": list(self.ordered_removals),
            "models": [list(m) for m in self.models],
            "scores": [_json_float(v) for v in self.scores],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "SolutionPath":
        scores = [float("-inf") if v is None else float(v) for v in data.get("scores", [])]
        return cls(ordered_removals=tuple(data["ordered_removals"]), scores=tuple(scores))


def _json_float(value: float) -> Optional[float]:
    # JSON has no infinities; the zero-variance sentinel is written as null
    return None if math.isinf(value) else float(value)
