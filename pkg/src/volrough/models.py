"""Volatility-model simulators: rough exponential and Heston.

The rough exponential model drives log-volatility by fractional Brownian
motion, v(t) = exp(eta * W^H(t)) with v(0) = 1, and the spot by an
independent Brownian motion of scale sigma * v(t). The Heston model is the
standard square-root variance process discretized by full-truncation Euler.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .fbm import FbmDraw, FbmEngine, GaussianStream, build_engine
from .timeseries import BUSINESS_DAY_YEARS, TimeSeriesPath


@dataclass(frozen=True)
class RoughExpParams:
    """sigma: spot vol scale; eta: vol-of-vol; h: Hurst index of the driver."""

    sigma: float = 0.5
    eta: float = 0.5
    h: float = 0.10

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if self.eta < 0:
            raise ValueError(f"eta must be nonnegative, got {self.eta}")
        if not 0.0 < self.h < 1.0:
            raise ValueError(f"h must lie in (0, 1), got {self.h}")


@dataclass(frozen=True)
class HestonParams:
    """Square-root variance process dv = kappa(theta - v)dt + xi sqrt(v) dW."""

    v0: float = 0.04
    kappa: float = 1.0
    theta: float = 0.04
    xi: float = 0.5
    rho: float = -0.7

    def __post_init__(self):
        for name in ("v0", "kappa", "theta", "xi"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if not -1.0 <= self.rho <= 1.0:
            raise ValueError(f"rho must lie in [-1, 1], got {self.rho}")

    @property
    def feller(self) -> bool:
        """True when 2*kappa*theta >= xi^2 (the origin is unattainable)."""
        return 2.0 * self.kappa * self.theta >= self.xi**2


@dataclass(frozen=True)
class SimGrid:
    """Uniform fine grid: step dt over a horizon, day-aligned.

    dt must divide the business day (0.004 years) so that every business day
    falls on a grid point, and the horizon must be a whole number of steps.
    """

    dt: float = 0.001
    horizon_years: float = 4.0

    def __post_init__(self):
        if self.dt <= 0 or self.horizon_years <= 0:
            raise ValueError("dt and horizon_years must be positive")
        spd = BUSINESS_DAY_YEARS / self.dt
        if abs(spd - round(spd)) > 1e-9 * max(spd, 1.0) or round(spd) < 1:
            raise ValueError(
                f"dt = {self.dt} must divide one business day ({BUSINESS_DAY_YEARS} years)"
            )
        n = self.horizon_years / self.dt
        if abs(n - round(n)) > 1e-9 * n:
            raise ValueError(
                f"horizon {self.horizon_years} is not a whole number of steps of {self.dt}"
            )

    @property
    def steps_per_day(self) -> int:
        return round(BUSINESS_DAY_YEARS / self.dt)

    @property
    def n_steps(self) -> int:
        return round(self.horizon_years / self.dt)

    @property
    def n_days(self) -> int:
        return self.n_steps // self.steps_per_day

    @property
    def times(self) -> np.ndarray:
        """All grid times including t = 0: (n_steps + 1,)."""
        return np.arange(self.n_steps + 1) * self.dt

    def fine_index(self, day: int) -> int:
        """Fine-grid index of business day `day`."""
        if day < 0 or day > self.n_days:
            raise ValueError(f"day {day} outside 0..{self.n_days}")
        return day * self.steps_per_day


@dataclass(frozen=True)
class RoughExpVolPath:
    """A simulated instantaneous-vol path with everything needed to extend it.

    v has n_steps + 1 entries including v(0) = 1; normals are the whitened
    fBm coordinates (one per positive grid time) retained so conditional
    continuations reproduce this path's past exactly. path_index keys the
    continuation random streams so distinct initial paths never share fresh
    normals.
    """

    params: RoughExpParams
    grid: SimGrid
    v: np.ndarray
    normals: np.ndarray
    engine: FbmEngine = field(repr=False)
    path_index: int = 0

    def daily_values(self) -> np.ndarray:
        return self.v[:: self.grid.steps_per_day]

    def daily_path(self) -> TimeSeriesPath:
        spd = self.grid.steps_per_day
        return TimeSeriesPath(times=self.grid.times[::spd], values=self.daily_values())

    def fine_path(self) -> TimeSeriesPath:
        return TimeSeriesPath(times=self.grid.times, values=self.v)


def vol_from_fbm(params: RoughExpParams, w_values: np.ndarray) -> np.ndarray:
    """v = exp(eta * W^H), prepending v(0) = 1; rows of a 2-D input are paths."""
    w_values = np.asarray(w_values, dtype=float)
    v = np.exp(params.eta * w_values)
    pad = [(0, 0)] * (v.ndim - 1) + [(1, 0)]
    return np.pad(v, pad, constant_values=1.0)


def rough_exp_engine(params: RoughExpParams, grid: SimGrid) -> FbmEngine:
    """fBm engine on the grid's positive times; factor once, reuse per path."""
    return build_engine(params.h, grid.times[1:])


def rough_exp_from_normals(params: RoughExpParams, grid: SimGrid, engine: FbmEngine,
                           normals: np.ndarray, path_index: int = 0) -> RoughExpVolPath:
    """Build the vol path for given whitened coordinates (block-drawn outside)."""
    w = engine.path_from_normals(normals)
    return RoughExpVolPath(params=params, grid=grid, v=vol_from_fbm(params, w),
                           normals=np.asarray(normals, dtype=float),
                           engine=engine, path_index=path_index)


def simulate_rough_exp_vol(params: RoughExpParams, grid: SimGrid,
                           stream: GaussianStream, path_index: int = 0,
                           engine: FbmEngine | None = None) -> RoughExpVolPath:
    """Draw one instantaneous-vol path v(t) = exp(eta * W^H(t)), v(0) = 1.

    Pass a prebuilt engine to amortize the factorization across paths; it
    must match (params.h, grid).
    """
    if engine is None:
        engine = rough_exp_engine(params, grid)
    draw: FbmDraw = engine.draw_path(stream)
    return rough_exp_from_normals(params, grid, engine, draw.normals,
                                  path_index=path_index)


@dataclass(frozen=True)
class HestonPaths:
    """Variance and spot paths on the grid (spot normalized to S(0) = 1)."""

    params: HestonParams
    grid: SimGrid
    variance: np.ndarray
    spot: np.ndarray

    def vol_path(self) -> TimeSeriesPath:
        """sqrt(variance) as a time series."""
        return TimeSeriesPath(times=self.grid.times, values=np.sqrt(self.variance))


def simulate_heston(params: HestonParams, grid: SimGrid,
                    stream: GaussianStream) -> HestonPaths:
    """Full-truncation Euler: v' = v + kappa(theta - v+)dt + xi sqrt(v+) sqrt(dt) Z.

    v+ = max(v, 0), so square roots never see a negative argument while the
    drift keeps pulling excursions below zero back up. The spot uses the
    log-Euler step with a normal correlated at rho.
    """
    n = grid.n_steps
    dt = grid.dt
    sq_dt = math.sqrt(dt)
    z = stream.normal_block(n, 2)
    z_v = z[:, 0]
    z_s = params.rho * z_v + math.sqrt(1.0 - params.rho**2) * z[:, 1]

    v = np.empty(n + 1)
    log_s = np.empty(n + 1)
    v[0] = params.v0
    log_s[0] = 0.0
    for p in range(n):
        vp = max(v[p], 0.0)
        sq_v = math.sqrt(vp)
        v[p + 1] = v[p] + params.kappa * (params.theta - vp) * dt + params.xi * sq_v * sq_dt * z_v[p]
        log_s[p + 1] = log_s[p] - 0.5 * vp * dt + sq_v * sq_dt * z_s[p]
    # the recursion keeps the signed iterate; the variance process itself is v+
    return HestonPaths(params=params, grid=grid, variance=np.maximum(v, 0.0),
                       spot=np.exp(log_s))


def heston_atm_vol_proxy(params: HestonParams, v, tau: float):
    """ATM implied-vol proxy: sqrt of expected average variance to maturity.

    sigma(v, tau) = sqrt(theta + (v - theta) * (1 - exp(-kappa tau)) / (kappa tau)).
    This is a proxy (the vol of the expected integrated variance), not the
    exact Heston smile point; it is exact as tau -> 0 and at v = theta.
    """
    if tau <= 0:
        raise ValueError(f"tau must be positive, got {tau}")
    v = np.asarray(v, dtype=float)
    decay = (1.0 - math.exp(-params.kappa * tau)) / (params.kappa * tau)
    radicand = params.theta + (v - params.theta) * decay
    if np.any(radicand < 0):
        raise DomainError("negative radicand in the implied-vol proxy")
    out = np.sqrt(radicand)
    return float(out) if out.ndim == 0 else out
