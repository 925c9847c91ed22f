"""Scaling-regression roughness estimator.

For moments q and integer lags d the structure function

    m(q, d) = mean over i of |x[i + d] - x[i]|^q

scales like d^(q*H) on a self-similar path. zeta(q) is the OLS slope of
log m(q, d) against log d, and H is the through-origin OLS slope of zeta(q)
against q. The estimator expects its input already on the scale to be
measured (log-volatility for roughness of volatility).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateMomentError, LagError
from .timeseries import TimeSeriesPath

DEFAULT_Q = (0.5, 1.0, 1.5, 2.0, 3.0)


@dataclass(frozen=True)
class RegressionConfig:
    """Moment orders and the lag range d = 1 .. n // max_lag_div."""

    q_values: tuple[float, ...] = DEFAULT_Q
    max_lag_div: int = 40

    def __post_init__(self):
        if len(self.q_values) < 2:
            raise ValueError("need at least two moment orders")
        if any(q <= 0 for q in self.q_values):
            raise ValueError(f"moment orders must be positive, got {self.q_values}")
        if self.max_lag_div < 1:
            raise ValueError(f"max_lag_div must be >= 1, got {self.max_lag_div}")

    def max_lag(self, n: int) -> int:
        return n // self.max_lag_div


@dataclass(frozen=True)
class RegressionEstimate:
    """H with the intermediate zeta(q) slopes and the grids they came from."""

    h: float
    q_values: np.ndarray
    zeta: np.ndarray
    lags: np.ndarray
    log_m: np.ndarray


def structure_function(values: np.ndarray, q: float, lag: int) -> float:
    """m(q, lag) = mean |x[i + lag] - x[i]|^q over all admissible i."""
    if lag < 1 or lag >= len(values):
        raise LagError(f"lag {lag} out of range for {len(values)} observations")
    diffs = np.abs(values[lag:] - values[:-lag])
    return float((diffs**q).mean())


def _slope(x: np.ndarray, y: np.ndarray) -> float:
    xc = x - x.mean()
    return float((xc * (y - y.mean())).sum() / (xc * xc).sum())


def estimate_h_regression(path: TimeSeriesPath,
                          cfg: RegressionConfig = RegressionConfig()) -> RegressionEstimate:
    """Two-stage scaling regression on the path's values.

    Raises LagError if the lag range collapses (n // max_lag_div < 2) and
    DegenerateMomentError if any structure function vanishes (a lag at which
    the path repeats itself exactly), since its log is then undefined.
    """
    x = path.values
    n = len(x)
    d_max = cfg.max_lag(n)
    if d_max < 2:
        raise LagError(
            f"{n} observations give max lag {d_max} (div {cfg.max_lag_div}); "
            "need at least lags 1 and 2"
        )
    lags = np.arange(1, d_max + 1)
    q_values = np.asarray(cfg.q_values, dtype=float)

    log_m = np.empty((len(q_values), len(lags)))
    for j, d in enumerate(lags):
        diffs = np.abs(x[d:] - x[:-d])
        for i, q in enumerate(q_values):
            m = (diffs**q).mean()
            if not (m > 0.0):
                raise DegenerateMomentError(
                    f"structure function m(q={q}, d={d}) is zero; "
                    "log-log regression undefined"
                )
            log_m[i, j] = np.log(m)

    log_d = np.log(lags.astype(float))
    zeta = np.array([_slope(log_d, log_m[i]) for i in range(len(q_values))])
    h = float((q_values * zeta).sum() / (q_values * q_values).sum())
    return RegressionEstimate(h=h, q_values=q_values, zeta=zeta, lags=lags,
                              log_m=log_m)
