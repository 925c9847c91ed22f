"""Theoretical bias of roughness measured on implied volatilities.

Implied volatility averages future variance over the option's life, which
smooths the driver and biases the measured Hurst index upward. For the
two-point q = 2 regression slope over a span of K days, the expected
measurement is

    H_hat = (ln f(T/K) - ln f(T)) / (2 ln K) + H

with T the time to expiry and f a positive function describing how the
expected-vol increment scales with the expiry-to-lag ratio. f is supplied by
the caller; a constant f recovers H_hat = H, and f(theta) = theta^(2a)
shifts the measurement by exactly -a.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import DomainError


@dataclass(frozen=True)
class BiasConfig:
    """Expiry T and regression span K in business days, plus the scaling f."""

    t_days: float
    f_hat: Callable[[float], float]
    k_days: float = 25.0

    def __post_init__(self):
        if self.t_days <= 0:
            raise ValueError(f"t_days must be positive, got {self.t_days}")
        if self.k_days <= 1:
            raise ValueError(f"k_days must exceed 1, got {self.k_days}")


def theoretical_h_hat(h: float, cfg: BiasConfig) -> float:
    """Expected measured Hurst index for model roughness h.

    Evaluates f at T/K and T (both in days; only their ratio to K matters
    since f enters through a log difference). Raises DomainError if f is not
    positive at either point.
    """
    near = cfg.f_hat(cfg.t_days / cfg.k_days)
    far = cfg.f_hat(cfg.t_days)
    for theta, val in ((cfg.t_days / cfg.k_days, near), (cfg.t_days, far)):
        if not val > 0:
            raise DomainError(f"f_hat({theta}) = {val} is not positive")
    return (math.log(near) - math.log(far)) / (2.0 * math.log(cfg.k_days)) + h


def fit_bias_line(model_h, measured_h) -> tuple[float, float]:
    """OLS slope and intercept of measured H_hat against model h.

    The slope is the flatness diagnostic: 1 means the estimator tracks the
    model roughness, 0 means the measurement is insensitive to it.
    """
    x = [float(v) for v in model_h]
    y = [float(v) for v in measured_h]
    if len(x) != len(y) or len(x) < 2:
        raise ValueError("need at least two (model_h, measured_h) pairs of equal length")
    n = len(x)
    mx = sum(x) / n
    my = sum(y) / n
    sxx = sum((a - mx) ** 2 for a in x)
    if sxx == 0:
        raise ValueError("model_h values are all identical")
    slope = sum((a - mx) * (b - my) for a, b in zip(x, y)) / sxx
    return slope, my - slope * mx
