"""Time-series data model and CSV ingestion for volatility series.

Dates map to year fractions by business-day count: consecutive valid rows
are 0.004 years apart (252 business days per year, rounded to 1/250),
regardless of calendar gaps. The first observation sits at t = 0.
"""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass
from datetime import datetime
from typing import IO, Iterable

import numpy as np

from .errors import (
    DomainError,
    DuplicateDateError,
    InsufficientDataError,
    SchemaError,
)

BUSINESS_DAY_YEARS = 0.004


@dataclass(frozen=True)
class TimeSeriesPath:
    """Ordered (time, value) observations of one path.

    times are year fractions, strictly increasing; values are whatever the
    caller is measuring (volatility as a decimal, index points, prices).
    Arrays are copied and frozen on construction.
    """

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        t = np.array(self.times, dtype=float)
        v = np.array(self.values, dtype=float)
        if t.ndim != 1 or v.ndim != 1:
            raise ValueError("times and values must be one-dimensional")
        if t.shape != v.shape:
            raise ValueError(f"length mismatch: {t.size} times vs {v.size} values")
        if t.size < 2:
            raise InsufficientDataError(f"need at least 2 observations, got {t.size}")
        if not np.all(np.isfinite(t)) or not np.all(np.isfinite(v)):
            raise ValueError("times and values must all be finite")
        if np.any(np.diff(t) <= 0):
            raise ValueError("times must be strictly increasing")
        t.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return self.times.size

    @property
    def span(self) -> float:
        """Time covered by the observations."""
        return float(self.times[-1] - self.times[0])

    def window(self, start: int, n_points: int) -> "TimeSeriesPath":
        """Sub-path of n_points observations beginning at index start."""
        if start < 0 or start + n_points > len(self):
            raise InsufficientDataError(
                f"window [{start}, {start + n_points}) exceeds path of length {len(self)}"
            )
        return TimeSeriesPath(self.times[start : start + n_points],
                              self.values[start : start + n_points])


def log_transform(path: TimeSeriesPath) -> TimeSeriesPath:
    """Replace values by their natural log; times are unchanged.

    Raises DomainError naming the first offending index if any value is <= 0.
    """
    bad = np.flatnonzero(path.values <= 0)
    if bad.size:
        raise DomainError(
            f"cannot take log: value {path.values[bad[0]]:g} at index {int(bad[0])} is not positive"
        )
    return TimeSeriesPath(path.times, np.log(path.values))


@dataclass(frozen=True)
class IngestSpec:
    """Column names and formats for ingesting a (date, value) CSV."""

    date_col: str = "date"
    value_col: str = "value"
    date_format: str = "%Y-%m-%d"
    day_step: float = BUSINESS_DAY_YEARS


# Preset layouts. Yahoo daily quotes carry OHLC columns; the close is used.
GENERIC = IngestSpec()
YAHOO_VIX = IngestSpec(date_col="Date", value_col="Close")
# Timestamped variant for intraday-stamped daily data, e.g. "2020-01-02 16:00:00-05:00".
GENERIC_TIMESTAMPED = IngestSpec(date_format="%Y-%m-%d %H:%M:%S%z")


@dataclass(frozen=True)
class IngestResult:
    path: TimeSeriesPath
    n_rows: int
    n_dropped: int


def _open_text(file) -> IO[str]:
    if isinstance(file, (str, os.PathLike)):
        return open(file, "r", encoding="utf-8", newline="")
    if isinstance(file, bytes):
        return io.StringIO(file.decode("utf-8"))
    if hasattr(file, "read"):
        first = file.read(0)
        if isinstance(first, bytes):
            return io.TextIOWrapper(file, encoding="utf-8", newline="")
        return file
    raise TypeError(f"cannot read CSV from {type(file).__name__}")


def ingest_csv(file, spec: IngestSpec = GENERIC) -> IngestResult:
    """Read a delimiter-separated file into a TimeSeriesPath.

    Rows are sorted by parsed date; rows whose date or value does not parse
    (or is missing) are dropped and counted. The returned times are
    0, day_step, 2*day_step, ... from the first valid observation.

    Raises SchemaError if a named column is absent, InsufficientDataError
    if fewer than 2 rows survive, DuplicateDateError on repeated dates.
    """
    handle = _open_text(file)
    reader = csv.DictReader(handle)
    if reader.fieldnames is None:
        raise SchemaError("input has no header row")
    fields = [name.strip() for name in reader.fieldnames]
    for col in (spec.date_col, spec.value_col):
        if col not in fields:
            raise SchemaError(f"column {col!r} not found in header {fields}")

    rows: list[tuple[datetime, float]] = []
    n_rows = 0
    n_dropped = 0
    for record in reader:
        n_rows += 1
        raw_date = (record.get(spec.date_col) or "").strip()
        raw_value = (record.get(spec.value_col) or "").strip()
        try:
            when = datetime.strptime(raw_date, spec.date_format)
            level = float(raw_value)
        except (ValueError, TypeError):
            n_dropped += 1
            continue
        if not np.isfinite(level):
            n_dropped += 1
            continue
        rows.append((when, level))

    if len(rows) < 2:
        raise InsufficientDataError(
            f"only {len(rows)} valid rows after ingestion ({n_dropped} dropped)"
        )

    rows.sort(key=lambda item: item[0])
    for (d0, _), (d1, _) in zip(rows, rows[1:]):
        if d1 <= d0:
            raise DuplicateDateError(f"duplicate date {d1.isoformat()} after sorting")

    times = np.arange(len(rows)) * spec.day_step
    values = np.array([level for _, level in rows])
    return IngestResult(TimeSeriesPath(times, values), n_rows=n_rows, n_dropped=n_dropped)


def write_path_csv(path: TimeSeriesPath, file) -> None:
    """Write a path as `t,value` rows with 17 significant digits."""
    own = isinstance(file, (str, os.PathLike))
    handle = open(file, "w", encoding="utf-8", newline="") if own else file
    try:
        handle.write("t,value\n")
        for t, v in zip(path.times, path.values):
            handle.write(f"{t:.17g},{v:.17g}\n")
    finally:
        if own:
            handle.close()


def read_path_csv(file) -> TimeSeriesPath:
    """Read a `t,value` file written by write_path_csv."""
    handle = _open_text(file)
    reader = csv.DictReader(handle)
    if reader.fieldnames is None or not {"t", "value"} <= set(reader.fieldnames):
        raise SchemaError("expected header 't,value'")
    times, values = [], []
    for record in reader:
        times.append(float(record["t"]))
        values.append(float(record["value"]))
    if len(times) < 2:
        raise InsufficientDataError(f"only {len(times)} rows in path file")
    return TimeSeriesPath(np.array(times), np.array(values))
