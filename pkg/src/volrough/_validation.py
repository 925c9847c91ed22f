"""Input coercion shared by the estimator classes."""

from __future__ import annotations

import numpy as np

from .errors import DomainError, InsufficientDataError
from .timeseries import BUSINESS_DAY_YEARS, TimeSeriesPath


def as_1d_series(X, min_len: int = 2) -> np.ndarray:
    """Coerce X to a finite 1-D float array.

    Accepts a 1-D array-like or a single-column 2-D array (the sklearn
    (n_samples, 1) convention) and returns a fresh float copy.
    """
    x = np.asarray(X, dtype=float)
    if x.ndim == 2 and x.shape[1] == 1:
        x = x[:, 0]
    if x.ndim != 1:
        raise ValueError(f"expected a 1-D series or an (n, 1) column, got shape {x.shape}")
    if len(x) < min_len:
        raise InsufficientDataError(f"need at least {min_len} observations, got {len(x)}")
    if not np.isfinite(x).all():
        bad = int(np.flatnonzero(~np.isfinite(x))[0])
        raise DomainError(f"non-finite value at index {bad}")
    return x.copy()


def as_path(X, day_step: float = BUSINESS_DAY_YEARS, min_len: int = 2) -> TimeSeriesPath:
    """Coerce X to a TimeSeriesPath, passing one through untouched.

    Bare arrays are given uniform times of day_step per observation.
    """
    if isinstance(X, TimeSeriesPath):
        return X
    values = as_1d_series(X, min_len=min_len)
    times = np.arange(len(values)) * day_step
    return TimeSeriesPath(times=times, values=values)
