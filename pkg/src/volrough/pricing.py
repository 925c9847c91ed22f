"""Black-76 ATM pricing, total-variance quadratures, and the MC implied vol.

Because the spot driver is independent of the volatility driver, the
conditional ATM call price given a volatility scenario is the Black-76 price
at that scenario's total variance; the Monte-Carlo price is the average of
those conditional prices over continuations of the volatility path, and the
implied vol inverts the averaged price in closed form.

All prices are forward-normalized (F = K = 1, unit numeraire).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr, ndtri

from .errors import DomainError, InversionError, SizeError
from .fbm import GaussianStream, PSEUDO, SOBOL
from .models import RoughExpVolPath
from .timeseries import BUSINESS_DAY_YEARS, TimeSeriesPath

LEFT = "left"
RIGHT = "right"
TRAPEZOIDAL = "trapezoidal"
RULES = (LEFT, RIGHT, TRAPEZOIDAL)

_RULE_ALIASES = {
    "left": LEFT,
    "left-rectangular": LEFT,
    "right": RIGHT,
    "right-rectangular": RIGHT,
    "trap": TRAPEZOIDAL,
    "trapezoid": TRAPEZOIDAL,
    "trapezoidal": TRAPEZOIDAL,
}


def normalize_rule(name: str) -> str:
    try:
        return _RULE_ALIASES[name.strip().lower()]
    except KeyError:
        raise ValueError(f"unknown quadrature rule {name!r}; choose from {RULES}") from None


def black76_atm_call(w):
    """Forward-normalized ATM call price 2*Phi(sqrt(w)/2) - 1 at total variance w."""
    w = np.asarray(w, dtype=float)
    if np.any(w < 0):
        raise DomainError("total variance must be nonnegative")
    out = 2.0 * ndtr(np.sqrt(w) / 2.0) - 1.0
    return float(out) if out.ndim == 0 else out


def implied_vol_from_price(price: float, tau: float) -> float:
    """Closed-form ATM inversion: w = (2*Phi^-1((price+1)/2))^2, vol = sqrt(w/tau)."""
    if tau <= 0:
        raise ValueError(f"tau must be positive, got {tau}")
    if not 0.0 < price < 1.0:
        raise InversionError(price=price)
    w = (2.0 * ndtri((price + 1.0) / 2.0)) ** 2
    return math.sqrt(w / tau)


def total_variance(segment, dt: float, sigma: float, rule: str):
    """Total variance of sigma * v over a uniform-step segment of vol values.

    segment holds v at the k+1 segment points (trailing axis; leading axes
    are independent paths). Rules: right sums sigma^2 v^2 dt over the k
    right endpoints, left over the k left endpoints, trapezoidal halves the
    two segment endpoints and keeps full interior weights.
    """
    rule = normalize_rule(rule)
    seg = np.asarray(segment, dtype=float)
    if seg.shape[-1] < 2:
        raise SizeError(f"segment needs at least 2 points, got {seg.shape[-1]}")
    sq = seg**2
    scale = sigma**2 * dt
    if rule == RIGHT:
        out = scale * sq[..., 1:].sum(axis=-1)
    elif rule == LEFT:
        out = scale * sq[..., :-1].sum(axis=-1)
    else:
        out = scale * (0.5 * sq[..., 0] + sq[..., 1:-1].sum(axis=-1) + 0.5 * sq[..., -1])
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class McConfig:
    """Continuation Monte-Carlo controls: path count, pairing, seeding, QMC."""

    m_paths: int = 8192
    antithetic: bool = True
    seed: int = 0
    qmc: bool = False

    def __post_init__(self):
        if self.m_paths < 2:
            raise ValueError(f"m_paths must be at least 2, got {self.m_paths}")
        if self.antithetic and self.m_paths % 2:
            raise ValueError(f"antithetic pairing needs even m_paths, got {self.m_paths}")

    def stream(self, path_index: int, day: int) -> GaussianStream:
        """Fresh-normal stream for one (initial path, valuation day) pair."""
        return GaussianStream(seed=self.seed, purpose="continuation",
                              keys=(path_index, day),
                              mode=SOBOL if self.qmc else PSEUDO)


@dataclass(frozen=True)
class ImpliedVolPoint:
    """One valuation day's ATM implied vol with the MC price standard error."""

    day: int
    tau_days: int
    implied_vol: float
    price_se: float

    def __post_init__(self):
        if self.implied_vol <= 0:
            raise ValueError(f"implied vol must be positive, got {self.implied_vol}")


def _fresh_block(mc: McConfig, stream: GaussianStream, dim: int) -> np.ndarray:
    """(m_paths, dim) fresh normals; under antithetic pairing the second half
    is the negation of the first and only half the normals are drawn."""
    if mc.antithetic:
        z = stream.normal_block(mc.m_paths // 2, dim)
        return np.vstack([z, -z])
    return stream.normal_block(mc.m_paths, dim)


def price_stats(prices: np.ndarray, antithetic: bool) -> tuple[float, float]:
    """Mean price and its standard error; antithetic pairs count as one draw."""
    prices = np.asarray(prices, dtype=float)
    if antithetic:
        m2 = len(prices) // 2
        units = 0.5 * (prices[:m2] + prices[m2:])
    else:
        units = prices
    se = float(units.std(ddof=1) / math.sqrt(len(units))) if len(units) > 1 else 0.0
    return float(units.mean()), se


def mc_quadratures(initial: RoughExpVolPath, day: int, k_days: int, mc: McConfig,
                   rules=RULES) -> dict[str, np.ndarray]:
    """Per-path total variances over (t_day, t_day+k] for each rule.

    Runs the conditional continuations once at the fine resolution and
    evaluates every requested quadrature on the same paths, so rule
    comparisons isolate the quadrature and never the sampling.
    """
    grid = initial.grid
    i = grid.fine_index(day)
    j = grid.fine_index(day + k_days)
    rules = tuple(normalize_rule(r) for r in rules)

    z = _fresh_block(mc, mc.stream(initial.path_index, day), j - i)
    w_cont = initial.engine.continue_block(initial.normals[:i], z)
    seg = np.empty((mc.m_paths, j - i + 1))
    seg[:, 0] = initial.v[i]
    seg[:, 1:] = np.exp(initial.params.eta * w_cont)
    return {r: total_variance(seg, grid.dt, initial.params.sigma, r) for r in rules}


def mc_implied_vol(initial: RoughExpVolPath, day: int, k_days: int, mc: McConfig,
                   rule: str = TRAPEZOIDAL) -> ImpliedVolPoint:
    """ATM implied vol at one valuation day from M conditional continuations.

    Averages the Black-76 prices of the per-path total variances and inverts
    the average at tau = k_days business days. Raises InversionError (with
    the price and its SE) if the averaged price leaves (0, 1).
    """
    rule = normalize_rule(rule)
    w_bar = mc_quadratures(initial, day, k_days, mc, rules=(rule,))[rule]
    price, se = price_stats(black76_atm_call(w_bar), mc.antithetic)
    tau = k_days * BUSINESS_DAY_YEARS
    if not 0.0 < price < 1.0:
        raise InversionError(price=price, se=se)
    return ImpliedVolPoint(day=day, tau_days=k_days,
                           implied_vol=implied_vol_from_price(price, tau),
                           price_se=se)


@dataclass(frozen=True)
class McVolSeries:
    """Daily MC outputs for one initial path and maturity, all rules at once.

    implied and avg_integrated are (n_rules, n_days) arrays aligned with
    `rules`; avg_integrated is sqrt(mean(w) / tau), the vol of the averaged
    total variance (no pricing step).
    """

    k_days: int
    rules: tuple[str, ...]
    days: np.ndarray
    implied: np.ndarray
    price_se: np.ndarray
    avg_integrated: np.ndarray

    @property
    def tau(self) -> float:
        return self.k_days * BUSINESS_DAY_YEARS

    def _row(self, rule: str) -> int:
        return self.rules.index(normalize_rule(rule))

    def implied_path(self, rule: str) -> TimeSeriesPath:
        return TimeSeriesPath(times=self.days * BUSINESS_DAY_YEARS,
                              values=self.implied[self._row(rule)].copy())

    def avg_integrated_path(self, rule: str) -> TimeSeriesPath:
        return TimeSeriesPath(times=self.days * BUSINESS_DAY_YEARS,
                              values=self.avg_integrated[self._row(rule)].copy())

    def to_csv(self, file, rule: str) -> None:
        """Rows of `day,t,tau_days,implied_vol,price_se` for one rule."""
        r = self._row(rule)
        own = isinstance(file, str) or hasattr(file, "__fspath__")
        handle = open(file, "w", encoding="utf-8", newline="") if own else file
        try:
            handle.write("day,t,tau_days,implied_vol,price_se\n")
            for idx, day in enumerate(self.days):
                t = day * BUSINESS_DAY_YEARS
                handle.write(
                    f"{int(day)},{t:.17g},{self.k_days},"
                    f"{self.implied[r, idx]:.17g},{self.price_se[r, idx]:.17g}\n"
                )
        finally:
            if own:
                handle.close()


def mc_vol_series(initial: RoughExpVolPath, k_days: int, mc: McConfig,
                  rules=RULES, days=None) -> McVolSeries:
    """mc_implied_vol (plus averaged-integrated vol) over a range of days.

    days defaults to every valuation day whose maturity fits the horizon.
    """
    rules = tuple(normalize_rule(r) for r in rules)
    if days is None:
        days = range(initial.grid.n_days - k_days + 1)
    days = np.asarray(list(days), dtype=int)
    tau = k_days * BUSINESS_DAY_YEARS

    implied = np.empty((len(rules), len(days)))
    price_se = np.empty_like(implied)
    avg_int = np.empty_like(implied)
    for idx, day in enumerate(days):
        w_by_rule = mc_quadratures(initial, int(day), k_days, mc, rules=rules)
        for r, rule in enumerate(rules):
            w_bar = w_by_rule[rule]
            price, se = price_stats(black76_atm_call(w_bar), mc.antithetic)
            if not 0.0 < price < 1.0:
                raise InversionError(price=price, se=se)
            implied[r, idx] = implied_vol_from_price(price, tau)
            price_se[r, idx] = se
            avg_int[r, idx] = math.sqrt(w_bar.mean() / tau)
    return McVolSeries(k_days=k_days, rules=rules, days=days, implied=implied,
                       price_se=price_se, avg_integrated=avg_int)


def realized_integrated_vols(initial: RoughExpVolPath, k_days: int,
                             rule: str = TRAPEZOIDAL, days=None) -> TimeSeriesPath:
    """sqrt(w / tau) from the initial path's own realized future quadrature.

    No Monte Carlo: each day's total variance integrates the initial path
    itself over (t_day, t_day+k], which is known along the whole horizon.
    """
    rule = normalize_rule(rule)
    grid = initial.grid
    if days is None:
        days = range(grid.n_days - k_days + 1)
    days = np.asarray(list(days), dtype=int)
    tau = k_days * BUSINESS_DAY_YEARS
    spd = grid.steps_per_day

    vols = np.empty(len(days))
    for idx, day in enumerate(days):
        i = grid.fine_index(int(day))
        j = i + k_days * spd
        if j > grid.n_steps:
            raise SizeError(f"day {day} plus {k_days} days exceeds the horizon")
        w = total_variance(initial.v[i : j + 1], grid.dt, initial.params.sigma, rule)
        vols[idx] = math.sqrt(w / tau)
    return TimeSeriesPath(times=days * BUSINESS_DAY_YEARS, values=vols)
