"""
Input and Output Formats

Reading series from plain numeric lines or a CSV column, and rendering
results, solution paths and simulated data as JSON, CSV, TSV or text.
"""

from pathlib import Path
from typing import Any, Optional, Sequence, TextIO
import io
import json
import logging
import math
import sys

import numpy as np
import pandas as pd

from idetect.errors import EmptyInputError, InputFormatError
from idetect.models import DetectionResult, SolutionPath, TimeSeries, validate_series

logger = logging.getLogger(__name__)


def _open_text(path: str) -> TextIO:
    if path == "-":
        return sys.stdin
    return open(path, encoding="utf-8")


def parse_lines(text: str) -> TimeSeries:
    """
    Parse one number per line; blank lines and ``#`` comments are skipped.

    Raises:
        InputFormatError: On a non-numeric or non-finite entry (names the line)
        EmptyInputError: If no values are found
    """
    values = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        entry = raw.split("#", 1)[0].strip()
        if not entry:
            continue
        try:
            value = float(entry)
        except ValueError:
            raise InputFormatError(f"not a number: {entry!r}", line=lineno) from None
        if not math.isfinite(value):
            raise InputFormatError(f"non-finite value {entry!r}", line=lineno)
        values.append(value)
    if not values:
        raise EmptyInputError("input contains no values")
    return validate_series(values)


def parse_csv_column(text: str, column: str) -> TimeSeries:
    """
    Read a named column of a CSV file with a header row.

    Raises:
        InputFormatError: If the column is missing or holds a non-numeric entry
        EmptyInputError: If the column is empty
    """
    try:
        frame = pd.read_csv(io.StringIO(text), dtype=str, keep_default_na=False)
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        raise InputFormatError(f"unreadable CSV: {exc}") from exc
    if column not in frame.columns:
        raise InputFormatError(f"column {column!r} not found (have: {', '.join(frame.columns)})")
    raw = frame[column].str.strip()
    numbers = pd.to_numeric(raw, errors="coerce")
    bad = numbers.isna() | ~np.isfinite(numbers.fillna(0.0))
    if bad.any():
        row = int(np.flatnonzero(bad.to_numpy())[0])
        # header is line 1
        raise InputFormatError(f"not a finite number: {raw.iloc[row]!r}", line=row + 2)
    if numbers.empty:
        raise EmptyInputError(f"column {column!r} is empty")
    return validate_series(numbers.to_numpy(dtype=float))


def read_series(path: str, column: Optional[str] = None) -> TimeSeries:
    """
    Read a series from a file (``-`` for stdin).

    Args:
        path: File path or ``-``
        column: CSV column name; plain numeric lines when omitted

    Returns:
        TimeSeries: The validated series

    Raises:
        OSError: If the file cannot be read
        InputFormatError: On malformed content
        EmptyInputError: If there are no values
    """
    handle = _open_text(path)
    try:
        text = handle.read()
    finally:
        if handle is not sys.stdin:
            handle.close()
    series = parse_csv_column(text, column) if column else parse_lines(text)
    logger.debug(f"Read {series.T} values from {path}")
    return series


def _frame_text(frame: pd.DataFrame, fmt: str) -> str:
    if fmt == "csv":
        return frame.to_csv(index=False, float_format="%.17g")
    if fmt == "tsv":
        # gnuplot reads '#' lines as comments
        header = "# " + "\t".join(frame.columns) + "\n"
        return header + frame.to_csv(index=False, sep="\t", header=False, float_format="%.17g")
    return frame.to_string(index=False) + "\n"


def series_frame(series: TimeSeries, fitted: np.ndarray) -> pd.DataFrame:
    return pd.DataFrame(
        {"t": np.arange(1, series.T + 1), "x": series.values, "fitted": fitted}
    )


def render_result(result: DetectionResult, series: TimeSeries, fmt: str) -> str:
    """
    Render a detection result.

    json: the result object; csv/tsv: t, x, fitted columns; table: a summary.
    """
    if fmt == "json":
        return result.to_json() + "\n"
    if fmt == "table":
        cps = ", ".join(str(b) for b in result.change_points) or "-"
        lines = [
            f"change_points: {cps}",
            f"count: {result.n_change_points}",
            f"sigma_hat: {result.sigma_hat:.6g}",
            f"stopping_used: {result.stopping_used.value}",
        ]
        lines.extend(f"warning: {w}" for w in result.warnings)
        return "\n".join(lines) + "\n"
    return _frame_text(series_frame(series, result.fitted), fmt)


def render_path(
    path: SolutionPath,
    scored: Sequence[Any],
    fitted: np.ndarray,
    at: int,
    series: TimeSeries,
    fmt: str,
) -> str:
    """
    Render a solution path with its scored models and the fit of M_at.

    json: path, models and fit in one object; csv/tsv/table: one row per model.
    """
    if fmt == "json":
        payload = path.to_dict()
        payload["scored_models"] = [m.to_dict() for m in scored]
        payload["at"] = at
        payload["change_points_at"] = list(path.model(at))
        payload["fitted_at"] = [float(v) for v in fitted]
        return json.dumps(payload, indent=2) + "\n"
    frame = pd.DataFrame(
        {
            "j": [m.j for m in scored],
            "ssic": [m.ssic for m in scored],
            "n_params": [m.n_params for m in scored],
            "change_points": [" ".join(str(b) for b in m.change_points) for m in scored],
        }
    )
    return _frame_text(frame, fmt)


def render_values(values: np.ndarray, fmt: str = "lines") -> str:
    """One value per line, or a t,x CSV."""
    if fmt == "lines":
        return "".join(f"{float(v)!r}\n" for v in values)
    data = {"t": np.arange(1, values.shape[0] + 1), "x": values}
    return pd.DataFrame(data).to_csv(index=False, float_format="%.17g")


def write_text(text: str, out: Optional[Path]) -> None:
    """Write to ``out`` or standard output."""
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        out.write_text(text, encoding="utf-8")
        logger.info(f"Wrote {out}")
