"""Normalized p-variation roughness estimator.

The statistic W(p) compares the p-variation of a path measured on a coarse
uniform partition of K blocks against the same variation measured on a fine
uniform partition of L = K*K intervals, block by block:

    W(p) = sum over coarse blocks of
               |coarse increment|^p / (sum of fine |increment|^p in the block)
               * (block time length)

The variation order p_hat solving W(p) = T (T the window's time span) gives
the roughness estimate H = 1 / p_hat. On a path of Hurst index h the block
ratios scale like K^(p*h - 1), so the root sits at p = 1/h.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .errors import (
    DegenerateBlockError,
    EmptySummaryError,
    NoRootError,
    SizeError,
)
from .timeseries import TimeSeriesPath


@dataclass(frozen=True)
class EstimatorConfig:
    """Partition sizes and root-search controls.

    k: number of coarse blocks. n_fine: number of fine intervals (defaults
    to k*k and must be a multiple of k). The root for the variation order is
    searched over p_bracket by a sign-change scan at scan_step increments
    followed by bisection down to p_tol.
    """

    k: int = 70
    n_fine: int | None = None
    p_bracket: tuple[float, float] = (1.0, 20.0)
    p_tol: float = 1e-8
    scan_step: float = 0.25

    def __post_init__(self):
        if self.k < 2:
            raise ValueError(f"k must be at least 2, got {self.k}")
        if self.n_fine is not None:
            if self.n_fine < self.k:
                raise ValueError(f"n_fine ({self.n_fine}) must be >= k ({self.k})")
            if self.n_fine % self.k:
                raise ValueError(f"n_fine ({self.n_fine}) must be a multiple of k ({self.k})")
        p_lo, p_hi = self.p_bracket
        if p_lo < 1.0:
            raise ValueError(f"p bracket lower bound must be >= 1, got {p_lo}")
        if p_hi <= p_lo:
            raise ValueError(f"p bracket {self.p_bracket} is empty")
        if self.p_tol <= 0 or self.scan_step <= 0:
            raise ValueError("p_tol and scan_step must be positive")

    @property
    def l(self) -> int:
        """Fine-interval count L (defaults to k squared)."""
        return self.k * self.k if self.n_fine is None else self.n_fine

    @property
    def window_len(self) -> int:
        """Observations one window consumes: L + 1."""
        return self.l + 1

    @property
    def block(self) -> int:
        """Fine intervals per coarse block."""
        return self.l // self.k


@dataclass(frozen=True)
class HurstEstimate:
    """One estimator output: H = 1/p at the solved variation order."""

    h: float
    p: float
    window_start: int
    w_residual: float


def _window_parts(path: TimeSeriesPath, cfg: EstimatorConfig, window_start: int):
    """Precompute the p-independent pieces of W for one window.

    Returns (fine_abs, coarse_abs, weights, t_span) with fine_abs shaped
    (k, block). Each block's increments are normalized by that block's
    largest fine increment, which leaves every W term unchanged while
    keeping denominators at 1 or above for powers up to p_hi (a global
    scale would let whole blocks underflow to 0/0). Raises
    DegenerateBlockError if any coarse block has zero fine variation.
    """
    n = cfg.window_len
    if window_start < 0 or window_start + n > len(path):
        raise SizeError(
            f"window of {n} observations at start {window_start} "
            f"exceeds path of length {len(path)}"
        )
    x = path.values[window_start : window_start + n]
    t = path.times[window_start : window_start + n]
    b = cfg.block

    fine_abs = np.abs(np.diff(x)).reshape(cfg.k, b)
    coarse_abs = np.abs(np.diff(x[::b]))
    dead = ~(fine_abs > 0).any(axis=1)
    if dead.any():
        raise DegenerateBlockError(int(np.flatnonzero(dead)[0]), window_start)

    scale = fine_abs.max(axis=1)
    fine_abs = fine_abs / scale[:, None]
    coarse_abs = coarse_abs / scale
    weights = np.diff(t[::b])
    return fine_abs, coarse_abs, weights, float(t[-1] - t[0])


def _w_terms(fine_abs, coarse_abs, weights, p: float) -> np.ndarray:
    denom = (fine_abs**p).sum(axis=1)
    return coarse_abs**p / denom * weights


def w_statistic(path: TimeSeriesPath, cfg: EstimatorConfig, p: float) -> float:
    """Evaluate W on a path of exactly L + 1 observations.

    Raises SizeError on the wrong observation count and DegenerateBlockError
    (naming the block) if a coarse block is constant.
    """
    if len(path) != cfg.window_len:
        raise SizeError(f"expected exactly {cfg.window_len} observations, got {len(path)}")
    if p < 1.0:
        raise ValueError(f"variation order must be >= 1, got {p}")
    return float(w_statistic_terms(path, cfg, p).sum())


def w_statistic_terms(path: TimeSeriesPath, cfg: EstimatorConfig, p: float) -> np.ndarray:
    """Per-block terms of W; w_statistic is their sum."""
    if len(path) != cfg.window_len:
        raise SizeError(f"expected exactly {cfg.window_len} observations, got {len(path)}")
    fine_abs, coarse_abs, weights, _ = _window_parts(path, cfg, 0)
    return _w_terms(fine_abs, coarse_abs, weights, p)


def _solve_order(f: Callable[[float], float], cfg: EstimatorConfig, t_span: float):
    """Root of f over cfg.p_bracket: scan for a sign change, then bisect.

    |f| below rounding slack counts as a root outright, so paths whose order
    sits exactly at the bracket edge (monotone blocks, p = 1) resolve there
    instead of failing the scan.
    """
    p_lo, p_hi = cfg.p_bracket
    atol = 1e-10 * max(t_span, 1e-300)

    f_lo = f(p_lo)
    if abs(f_lo) <= atol:
        return p_lo, abs(f_lo)
    prev_p, prev_f = p_lo, f_lo
    p = p_lo
    while p < p_hi:
        p = min(p + cfg.scan_step, p_hi)
        fp = f(p)
        if abs(fp) <= atol:
            return p, abs(fp)
        if (prev_f < 0.0) != (fp < 0.0):
            lo, hi = prev_p, p
            flo = prev_f
            while hi - lo > cfg.p_tol:
                mid = 0.5 * (lo + hi)
                fm = f(mid)
                if fm == 0.0:
                    return mid, 0.0
                if (flo < 0.0) != (fm < 0.0):
                    hi = mid
                else:
                    lo, flo = mid, fm
            root = 0.5 * (lo + hi)
            return root, abs(f(root))
        prev_p, prev_f = p, fp
    raise NoRootError(p_lo, p_hi, w_lo=f_lo + t_span, w_hi=prev_f + t_span,
                      target=t_span)


def estimate_h(path: TimeSeriesPath, cfg: EstimatorConfig, window_start: int = 0) -> HurstEstimate:
    """Estimate the Hurst index on the window of L + 1 observations at window_start.

    Solves W(p) = T by bracketed bisection; returns H = 1/p with the achieved
    residual |W(p) - T|. Raises NoRootError when no sign change exists in the
    bracket (smoother than H = 1/p_hi allows, or rougher than the bracket top)
    and propagates DegenerateBlockError from constant blocks.
    """
    fine_abs, coarse_abs, weights, t_span = _window_parts(path, cfg, window_start)

    def f(p: float) -> float:
        return float(_w_terms(fine_abs, coarse_abs, weights, p).sum()) - t_span

    p_hat, residual = _solve_order(f, cfg, t_span)
    return HurstEstimate(h=1.0 / p_hat, p=p_hat, window_start=window_start,
                         w_residual=residual)


@dataclass(frozen=True)
class SlidingSummary:
    """Window-by-window estimates with population moments and a histogram."""

    estimates: tuple[HurstEstimate, ...]
    t_starts: np.ndarray
    failures: tuple[tuple[int, str], ...]
    mean: float
    std: float
    hist_edges: np.ndarray
    hist_counts: np.ndarray

    @property
    def h_values(self) -> np.ndarray:
        return np.array([e.h for e in self.estimates])

    @property
    def n_windows(self) -> int:
        return len(self.estimates)

    @property
    def n_failed(self) -> int:
        return len(self.failures)

    def to_csv(self, file) -> None:
        """Rows of `window_start,t_start,h,p,residual`."""
        own = isinstance(file, (str,)) or hasattr(file, "__fspath__")
        handle = open(file, "w", encoding="utf-8", newline="") if own else file
        try:
            handle.write("window_start,t_start,h,p,residual\n")
            for est, t0 in zip(self.estimates, self.t_starts):
                handle.write(
                    f"{est.window_start},{t0:.17g},{est.h:.17g},{est.p:.17g},{est.w_residual:.17g}\n"
                )
        finally:
            if own:
                handle.close()

    def to_json_dict(self) -> dict:
        return {
            "mean": self.mean,
            "std": self.std,
            "n_windows": self.n_windows,
            "n_failed": self.n_failed,
            "histogram": {
                "bin_edges": [float(x) for x in self.hist_edges],
                "counts": [int(c) for c in self.hist_counts],
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def _summarize(estimates: list[HurstEstimate], t_starts: list[float],
               failures: list[tuple[int, str]], hist_bins: int) -> SlidingSummary:
    if not estimates:
        raise EmptySummaryError(
            f"all {len(failures)} windows failed; no estimates to summarize"
        )
    h = np.array([e.h for e in estimates])
    counts, edges = np.histogram(h, bins=hist_bins)
    return SlidingSummary(
        estimates=tuple(estimates),
        t_starts=np.array(t_starts),
        failures=tuple(failures),
        mean=float(h.mean()),
        std=float(h.std()),
        hist_edges=edges,
        hist_counts=counts,
    )


def sliding_estimate(path: TimeSeriesPath, cfg: EstimatorConfig, stride: int = 1,
                     max_windows: int | None = None, hist_bins: int = 30) -> SlidingSummary:
    """Estimate H on every start 0, stride, 2*stride, ... with a full window.

    Degenerate-block and no-root windows are recorded in `failures` and
    excluded from the moments; if every window fails, EmptySummaryError.
    """
    if stride < 1:
        raise ValueError(f"stride must be >= 1, got {stride}")
    last_start = len(path) - cfg.window_len
    if last_start < 0:
        raise SizeError(
            f"path of length {len(path)} is shorter than one window ({cfg.window_len})"
        )
    starts: Iterable[int] = range(0, last_start + 1, stride)
    if max_windows is not None:
        starts = list(starts)[:max_windows]

    estimates: list[HurstEstimate] = []
    t_starts: list[float] = []
    failures: list[tuple[int, str]] = []
    for start in starts:
        try:
            est = estimate_h(path, cfg, window_start=start)
        except DegenerateBlockError:
            failures.append((start, "degenerate-block"))
            continue
        except NoRootError:
            failures.append((start, "no-root"))
            continue
        estimates.append(est)
        t_starts.append(float(path.times[start]))
    return _summarize(estimates, t_starts, failures, hist_bins)
