"""
Contrast Functions

Prefix-sum evaluation of the two contrast statistics:

- piecewise-constant signals: the CUSUM statistic
- continuous piecewise-linear signals: the inner product with the
  normalised kink vector phi_{s,e}^b

Both reduce to a handful of prefix-table reads per candidate, so scanning
an interval of length n costs O(n) vectorised work.
"""

from dataclasses import dataclass
from typing import Union
import logging
import math

import numpy as np

from idetect.errors import DegenerateSpanError, IndexOrderError, SpanTooShortError
from idetect.models import SignalClass, TimeSeries

logger = logging.getLogger(__name__)

# Above this length the prefix sums are accumulated with compensation
COMPENSATED_SUM_MIN_T = 100_000

# Multiple of machine epsilon below which a contrast is treated as an exact zero
_ROUNDOFF = 1e3 * np.finfo(float).eps


@dataclass(frozen=True, eq=False)
class PrefixTables:
    """
    Cumulative sums of X_t and t * X_t.

    Attributes:
        cum_x: cum_x[k] = sum_{t<=k} X_t, with cum_x[0] = 0
        cum_tx: cum_tx[k] = sum_{t<=k} t * X_t, with cum_tx[0] = 0
    """

    cum_x: np.ndarray
    cum_tx: np.ndarray

    @classmethod
    def from_series(cls, series: TimeSeries) -> "PrefixTables":
        x = series.values
        tx = x * np.arange(1, series.T + 1, dtype=float)
        if series.T > COMPENSATED_SUM_MIN_T:
            cum_x, cum_tx = _compensated_cumsum(x), _compensated_cumsum(tx)
        else:
            cum_x = np.concatenate(([0.0], np.cumsum(x)))
            cum_tx = np.concatenate(([0.0], np.cumsum(tx)))
        cum_x.setflags(write=False)
        cum_tx.setflags(write=False)
        return cls(cum_x=cum_x, cum_tx=cum_tx)


def _compensated_cumsum(values: np.ndarray) -> np.ndarray:
    """Running Neumaier-compensated sum, prefixed with 0."""
    out = np.empty(values.shape[0] + 1)
    out[0] = 0.0
    total = 0.0
    comp = 0.0
    for i, v in enumerate(values.tolist(), start=1):
        t = total + v
        if abs(total) >= abs(v):
            comp += (total - t) + v
        else:
            comp += (v - t) + total
        total = t
        out[i] = total + comp
    return out


def _cusum_values(tables: PrefixTables, s: int, e: int, b: np.ndarray) -> np.ndarray:
    """Signed CUSUM statistic at every b in ``b`` (s <= b < e)."""
    cum = tables.cum_x
    n = e - s + 1
    left = cum[b] - cum[s - 1]
    total = cum[e] - cum[s - 1]
    n_left = (b - s + 1).astype(float)
    n_right = n - n_left
    # sqrt(nr/(n nl)) * L - sqrt(nl/(n nr)) * R, with R = total - L
    return (n * left - total * n_left) / np.sqrt(n * n_left * n_right)


def _cplm_values(tables: PrefixTables, s: int, e: int, b: np.ndarray) -> np.ndarray:
    """Signed <X, phi_{s,e}^b> at every b in ``b`` (s < b < e)."""
    cx, ctx = tables.cum_x, tables.cum_tx
    bf = b.astype(float)
    n = float(e - s + 1)
    s_f, e_f = float(s), float(e)

    left_x = cx[b] - cx[s - 1]
    left_tx = ctx[b] - ctx[s - 1]
    right_x = cx[e] - cx[b]
    right_tx = ctx[e] - ctx[b]

    span_l = bf - s_f + 1.0
    span_r = e_f - bf
    alpha = np.sqrt(
        6.0 / (n * (n * n - 1.0) * (1.0 + (span_r + 1.0) * span_l + span_r * (span_l - 1.0)))
    )
    beta = np.sqrt(((span_r + 1.0) * span_r) / (span_l * (span_l - 1.0)))

    left = (e_f + 2.0 * bf - 3.0 * s_f + 2.0) * left_tx - (
        bf * e_f + bf * s_f - 2.0 * s_f * s_f + 2.0 * s_f
    ) * left_x
    right = (3.0 * e_f - 2.0 * bf - s_f + 2.0) * right_tx - (
        2.0 * e_f * e_f + 2.0 * e_f - bf * e_f - bf * s_f
    ) * right_x
    return alpha * beta * left - (alpha / beta) * right


def _tables_for(data: Union[TimeSeries, PrefixTables]) -> PrefixTables:
    if isinstance(data, PrefixTables):
        return data
    return PrefixTables.from_series(data)


def _length_of(data: Union[TimeSeries, PrefixTables]) -> int:
    if isinstance(data, PrefixTables):
        return int(data.cum_x.shape[0] - 1)
    return data.T


def cusum(data: Union[TimeSeries, PrefixTables], s: int, e: int, b: int) -> float:
    """
    Signed CUSUM statistic X-tilde_{s,e}^b.

    Args:
        data: The series, or its prefix tables for O(1) evaluation
        s: Interval start (1-based)
        e: Interval end (inclusive)
        b: Candidate change-point, s <= b < e

    Returns:
        float: sqrt((e-b)/(n(b-s+1))) sum_{s..b} X - sqrt((b-s+1)/(n(e-b))) sum_{b+1..e} X

    Raises:
        IndexOrderError: If 1 <= s <= b < e <= T does not hold
    """
    T = _length_of(data)
    if not (1 <= s <= b < e <= T):
        raise IndexOrderError(f"cusum needs 1 <= s <= b < e <= T, got s={s}, b={b}, e={e}, T={T}")
    return float(_cusum_values(_tables_for(data), s, e, np.array([b]))[0])


def _check_linear_indices(s: int, e: int, b: int, T: int) -> None:
    if not (1 <= s < e <= T and s <= b <= e):
        raise IndexOrderError(
            f"linear contrast needs 1 <= s <= b <= e <= T, got s={s}, b={b}, e={e}, T={T}"
        )
    if b == s or b == e:
        raise DegenerateSpanError(f"linear contrast undefined at b={b} for [{s}, {e}]")


def cplm_contrast(data: Union[TimeSeries, PrefixTables], s: int, e: int, b: int) -> float:
    """
    Linear-kink contrast |<X, phi_{s,e}^b>|.

    Args:
        data: The series, or its prefix tables for O(1) evaluation
        s: Interval start (1-based)
        e: Interval end (inclusive)
        b: Candidate kink, s < b < e

    Returns:
        float: Nonnegative contrast value

    Raises:
        IndexOrderError: If indices are out of order
        DegenerateSpanError: If b == s or b == e
    """
    _check_linear_indices(s, e, b, _length_of(data))
    return abs(float(_cplm_values(_tables_for(data), s, e, np.array([b]))[0]))


def cplm_contrast_vector(s: int, e: int, b: int, T: int) -> np.ndarray:
    """
    Explicit contrast vector phi_{s,e}^b of length T (zero outside [s, e]).

    Raises:
        IndexOrderError: If indices are out of order
        DegenerateSpanError: If b == s or b == e
    """
    _check_linear_indices(s, e, b, T)
    n = e - s + 1
    alpha = math.sqrt(
        6.0 / (n * (n * n - 1) * (1 + (e - b + 1) * (b - s + 1) + (e - b) * (b - s)))
    )
    beta = math.sqrt(((e - b + 1) * (e - b)) / ((b - s + 1) * (b - s)))

    phi = np.zeros(T)
    t_left = np.arange(s, b + 1, dtype=float)
    t_right = np.arange(b + 1, e + 1, dtype=float)
    phi[s - 1 : b] = alpha * beta * (
        (e + 2 * b - 3 * s + 2) * t_left - (b * e + b * s - 2 * s * s + 2 * s)
    )
    phi[b:e] = -(alpha / beta) * (
        (3 * e - 2 * b - s + 2) * t_right - (2 * e * e + 2 * e - b * e - b * s)
    )
    return phi


def helper_vectors(s: int, e: int, T: int) -> tuple[np.ndarray, np.ndarray]:
    """
    Unit linear vector gamma_{s,e} and unit constant vector 1_{s,e}.

    Returns:
        tuple: (gamma, ones), both of length T and zero outside [s, e]

    Raises:
        IndexOrderError: Unless 1 <= s < e <= T
    """
    if not (1 <= s < e <= T):
        raise IndexOrderError(f"helper vectors need 1 <= s < e <= T, got s={s}, e={e}, T={T}")
    n = e - s + 1
    t = np.arange(s, e + 1, dtype=float)

    gamma = np.zeros(T)
    norm = (n * (e * e - 2 * e * s + 2 * e + s * s - 2 * s) / 12.0) ** -0.5
    gamma[s - 1 : e] = norm * (t - (e + s) / 2.0)

    ones = np.zeros(T)
    ones[s - 1 : e] = n**-0.5
    return gamma, ones


@dataclass(frozen=True, eq=False)
class ContrastKernel:
    """
    Contrast evaluator bound to one series and one signal class.

    Attributes:
        signal_class: Selects CUSUM or the linear-kink contrast
        tables: Prefix tables of the bound series
        abs_max: max |X_t|, used to recognise round-off zeros
    """

    signal_class: SignalClass
    tables: PrefixTables
    abs_max: float

    @classmethod
    def build(cls, series: TimeSeries, signal_class: SignalClass) -> "ContrastKernel":
        return cls(
            signal_class=signal_class,
            tables=PrefixTables.from_series(series),
            abs_max=float(np.max(np.abs(series.values))),
        )

    @property
    def T(self) -> int:  # noqa: N802
        return int(self.tables.cum_x.shape[0] - 1)

    @property
    def is_linear(self) -> bool:
        return self.signal_class is SignalClass.CONTINUOUS_PIECEWISE_LINEAR

    @property
    def min_span(self) -> int:
        """Smallest e - s that admits a candidate."""
        return 2 if self.is_linear else 1

    def candidate_range(self, s: int, e: int) -> tuple[int, int]:
        """Inclusive range of admissible b on [s, e]."""
        return (s + 1, e - 1) if self.is_linear else (s, e - 1)

    def segment_start(self, previous: int) -> int:
        """
        Start of the stretch that follows a change-point at ``previous``.

        A level shift at b ends its segment at b, so the next one starts at b+1;
        a kink at b is shared by both linear pieces. ``previous = 0`` stands for
        the left end of the series.
        """
        if self.is_linear:
            return max(previous, 1)
        return previous + 1

    def values(self, s: int, e: int) -> tuple[np.ndarray, np.ndarray]:
        """
        Absolute contrast at every admissible candidate on [s, e].

        Returns:
            tuple: (candidates, |C_{s,e}^b|), both empty when the span is too short
        """
        lo, hi = self.candidate_range(s, e)
        if hi < lo:
            return np.empty(0, dtype=int), np.empty(0)
        b = np.arange(lo, hi + 1)
        raw = (_cplm_values if self.is_linear else _cusum_values)(self.tables, s, e, b)
        vals = np.abs(raw)
        vals[vals <= self._roundoff_floor(s, e)] = 0.0
        return b, vals

    def contrast(self, s: int, e: int, b: int) -> float:
        """
        |C_{s,e}^b| for one candidate, 0 when the span admits no candidate.

        Used for neighbour triplets where short spans are skipped rather than errors.
        """
        lo, hi = self.candidate_range(s, e)
        if not (1 <= s and e <= self.T) or not (lo <= b <= hi):
            return 0.0
        if self.is_linear:
            value = abs(float(_cplm_values(self.tables, s, e, np.array([b]))[0]))
        else:
            value = abs(float(_cusum_values(self.tables, s, e, np.array([b]))[0]))
        return 0.0 if value <= self._roundoff_floor(s, e) else value

    def _roundoff_floor(self, s: int, e: int) -> float:
        n = e - s + 1
        if self.is_linear:
            growth = math.sqrt(n) + float(e) * e / n**1.5
        else:
            growth = math.sqrt(n) + e / math.sqrt(n)
        return _ROUNDOFF * self.abs_max * growth


def argmax_contrast(kernel: ContrastKernel, s: int, e: int) -> tuple[int, float]:
    """
    Candidate with the largest contrast on [s, e].

    Args:
        kernel: Contrast kernel bound to the series
        s: Interval start
        e: Interval end

    Returns:
        tuple: (b, value); ties go to the smallest b

    Raises:
        SpanTooShortError: If e - s < kernel.min_span
    """
    if e - s < kernel.min_span:
        raise SpanTooShortError(s, e, kernel.min_span)
    b, vals = kernel.values(s, e)
    i = int(np.argmax(vals))
    return int(b[i]), float(vals[i])
