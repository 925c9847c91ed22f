"""Estimator classes over the functional core.

PVariationHurst and RegressionHurst fit one roughness estimate to a full
series; SlidingHurst is a transformer mapping a series to the per-window
H values of the sliding p-variation estimator. All three follow the
fit / fitted-attribute / get_params convention, so they compose with
pipelines and parameter search out of the box.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from ._validation import as_path
from .pvariation import EstimatorConfig, estimate_h, sliding_estimate
from .regression import RegressionConfig, estimate_h_regression
from .timeseries import BUSINESS_DAY_YEARS, log_transform

DEFAULT_Q = RegressionConfig().q_values


def _check_fitted(est, attr: str) -> None:
    if not hasattr(est, attr):
        raise NotFittedError(
            f"{type(est).__name__} is not fitted yet; call fit before using this method"
        )


class PVariationHurst(BaseEstimator):
    """Roughness of one series by the normalized p-variation statistic.

    Parameters
    ----------
    k : int
        Coarse blocks per window; one window consumes k*k + 1 observations.
    log : bool
        Estimate on log(values) instead of raw values.
    day_step : float
        Time per observation in years, used when X is a bare array.

    Attributes (after fit)
    ----------------------
    h_ : float
        Estimated Hurst index, 1 / p_.
    p_ : float
        Variation order solving the normalization identity.
    residual_ : float
        Achieved |W(p_) - T|.
    """

    def __init__(self, k: int = 70, log: bool = False,
                 day_step: float = BUSINESS_DAY_YEARS):
        self.k = k
        self.log = log
        self.day_step = day_step

    def fit(self, X, y=None):
        cfg = EstimatorConfig(k=self.k)
        path = as_path(X, day_step=self.day_step, min_len=cfg.window_len)
        if self.log:
            path = log_transform(path)
        est = estimate_h(path, cfg)
        self.h_ = est.h
        self.p_ = est.p
        self.residual_ = est.w_residual
        return self

    def fit_predict(self, X, y=None) -> float:
        return self.fit(X).h_


class RegressionHurst(BaseEstimator):
    """Roughness of one series by the two-stage scaling regression.

    Parameters
    ----------
    q_values : tuple of float
        Moment orders for the structure functions.
    max_lag_div : int
        Lags run 1 .. n // max_lag_div.
    log : bool
        Estimate on log(values) instead of raw values.

    Attributes (after fit)
    ----------------------
    h_ : float
        Through-origin slope of zeta(q) against q.
    zeta_ : ndarray
        Per-moment scaling exponents.
    """

    def __init__(self, q_values: tuple = DEFAULT_Q, max_lag_div: int = 40,
                 log: bool = False):
        self.q_values = q_values
        self.max_lag_div = max_lag_div
        self.log = log

    def fit(self, X, y=None):
        cfg = RegressionConfig(q_values=tuple(self.q_values),
                               max_lag_div=self.max_lag_div)
        path = as_path(X, min_len=2 * cfg.max_lag_div)
        if self.log:
            path = log_transform(path)
        est = estimate_h_regression(path, cfg)
        self.h_ = est.h
        self.zeta_ = est.zeta
        return self

    def fit_predict(self, X, y=None) -> float:
        return self.fit(X).h_


class SlidingHurst(TransformerMixin, BaseEstimator):
    """Transform a series into sliding-window p-variation H values.

    Parameters
    ----------
    k : int
        Coarse blocks per window.
    stride : int
        Step between consecutive window starts.
    log : bool
        Estimate on log(values).
    day_step : float
        Time per observation in years, used when X is a bare array.

    Attributes (after fit)
    ----------------------
    summary_ : SlidingSummary
        Full window-by-window result including failures and histogram.
    mean_, std_ : float
        Population moments of the successful windows.
    """

    def __init__(self, k: int = 70, stride: int = 1, log: bool = False,
                 day_step: float = BUSINESS_DAY_YEARS):
        self.k = k
        self.stride = stride
        self.log = log
        self.day_step = day_step

    def fit(self, X, y=None):
        cfg = EstimatorConfig(k=self.k)
        path = as_path(X, day_step=self.day_step, min_len=cfg.window_len)
        if self.log:
            path = log_transform(path)
        self.summary_ = sliding_estimate(path, cfg, stride=self.stride)
        self.mean_ = self.summary_.mean
        self.std_ = self.summary_.std
        return self

    def transform(self, X=None) -> np.ndarray:
        """Column vector of per-window H values from the fitted series."""
        _check_fitted(self, "summary_")
        return self.summary_.h_values.reshape(-1, 1)

    def fit_transform(self, X, y=None, **fit_params) -> np.ndarray:
        return self.fit(X).transform(X)
