"""
Isolate-Detect - change-point detection by isolating and detecting

Finds level shifts in piecewise-constant signals and slope changes in
continuous piecewise-linear signals. Intervals expanding from both ends
of the data isolate each change-point before it is tested, and the
number of change-points is chosen by a threshold, a strengthened
Schwarz criterion, or a hybrid of the two.
"""

__version__ = "1.0.0"
__license__ = "MIT"

from idetect.models import (
    DetectionResult,
    DetectorConfig,
    SignalClass,
    SolutionPath,
    StoppingRule,
    TimeSeries,
    default_config,
    validate_series,
)
from idetect.pipeline import detect, detect_path

__all__ = [
    "DetectionResult",
    "DetectorConfig",
    "SignalClass",
    "SolutionPath",
    "StoppingRule",
    "TimeSeries",
    "default_config",
    "detect",
    "detect_path",
    "validate_series",
    "__version__",
]

import logging

logger = logging.getLogger(__name__)
