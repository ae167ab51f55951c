"""
Isolate-Detect Errors

Every domain failure is a ValueError underneath, so callers that only
care about "bad input" can keep catching ValueError.
"""

from typing import Optional


class IDetectError(ValueError):
    """Base class for all isolate-detect failures."""


class ConfigError(IDetectError):
    """A DetectorConfig or PathConfig invariant was violated."""


class EmptyInputError(IDetectError):
    """The series has no observations."""


class NonFiniteValueError(IDetectError):
    """
    The series contains NaN or infinity.

    Attributes:
        index: 1-based position of the first offending value
    """

    def __init__(self, index: int, value: float) -> None:
        self.index = index
        self.value = value
        super().__init__(f"non-finite value {value!r} at index {index}")


class IndexOrderError(IDetectError):
    """Interval indices do not satisfy the operation's ordering precondition."""


class DegenerateSpanError(IDetectError):
    """The linear contrast is undefined at b = s or b = e."""


class SpanTooShortError(IDetectError):
    """The interval is too short to admit any candidate change-point."""

    def __init__(self, s: int, e: int, min_span: int) -> None:
        self.s = s
        self.e = e
        self.min_span = min_span
        super().__init__(f"interval [{s}, {e}] is shorter than the minimum span {min_span}")


class BadLambdaError(IDetectError):
    """Expansion step outside [1, T]."""


class SingularFitError(IDetectError):
    """The spline design is rank-deficient (duplicate or boundary knots)."""


class ZeroScaleError(IDetectError):
    """The MAD noise estimate is zero; sigma must be supplied explicitly."""


class BadScaleError(IDetectError):
    """Block-averaging scale is below 1 or exceeds the series length."""


class UnknownModelError(IDetectError):
    """No simulation model is registered under the requested name."""

    def __init__(self, name: str, known: Optional[list[str]] = None) -> None:
        self.name = name
        hint = f" (known: {', '.join(known)})" if known else ""
        super().__init__(f"unknown model {name!r}{hint}")


class BadDofError(IDetectError):
    """Student-t degrees of freedom must exceed 2 for a finite variance."""


class LengthMismatchError(IDetectError):
    """Two sequences that must align have different lengths."""


class InfeasibleError(IDetectError):
    """The requested segmentation cannot exist (e.g. k >= T)."""


class InputFormatError(IDetectError):
    """
    A data file could not be parsed.

    Attributes:
        line: 1-based line of the offending entry, if known
    """

    def __init__(self, message: str, line: Optional[int] = None) -> None:
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")
