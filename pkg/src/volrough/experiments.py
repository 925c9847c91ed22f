"""Named, configured, deterministic experiments with file artifacts.

Each experiment is specified by a frozen, JSON-serializable spec, runs
deterministically from its master seed (identical spec, identical bytes out),
and emits CSV files plus a summary.json under an output directory. Every
output file embeds the resolved spec for provenance: CSVs as a leading
`# spec: {...}` comment line, the JSON under its "spec" key.

Two preset sizes ship for the simulation studies: "paper" (full Monte-Carlo
weight, hours of CPU) and "smoke" (minutes, loosened expectations).
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, replace
from pathlib import Path
from typing import Callable, Iterable, Mapping

import numpy as np

from .bias import BiasConfig, fit_bias_line, theoretical_h_hat
from .errors import EmptySummaryError, SizeError
from .fbm import GaussianStream, PSEUDO, SOBOL
from .models import (
    HestonParams,
    RoughExpParams,
    SimGrid,
    rough_exp_engine,
    rough_exp_from_normals,
    simulate_heston,
)
from .pricing import (
    RULES,
    TRAPEZOIDAL,
    McConfig,
    mc_vol_series,
    normalize_rule,
    realized_integrated_vols,
)
from .pvariation import EstimatorConfig, SlidingSummary, sliding_estimate
from .timeseries import IngestSpec, TimeSeriesPath, ingest_csv, log_transform

SCALES = ("paper", "smoke")
PROXIES = ("instantaneous", "integrated-on-path", "integrated-on-average", "implied")
INSTANTANEOUS, INTEGRATED_PATH, INTEGRATED_AVG, IMPLIED = PROXIES


@dataclass(frozen=True)
class ExperimentResult:
    """What a run returns: the resolved spec, JSON-ready results, files written."""

    name: str
    spec: dict
    results: dict
    files: tuple[str, ...] = ()


@dataclass(frozen=True)
class Table1Spec:
    """One-day implied-vol roughness across step sizes and quadrature rules."""

    scale: str = "smoke"
    model: RoughExpParams = RoughExpParams(sigma=0.5, eta=0.5, h=0.10)
    dts: tuple[float, ...] = (0.002, 0.0005)
    horizon_years: float = 1.0
    maturity_days: int = 1
    rules: tuple[str, ...] = RULES
    n_initial_paths: int = 5
    m_paths: int = 1024
    antithetic: bool = True
    qmc_initial: bool = False
    qmc_mc: bool = False
    k_est: int = 15
    max_windows: int | None = None
    estimate_log: bool = False
    seed: int = 7

    def to_dict(self) -> dict:
        return {"experiment": "table1", **asdict(self)}


@dataclass(frozen=True)
class Table2Spec:
    """Roughness by proxy (instantaneous/integrated/implied) and maturity."""

    scale: str = "smoke"
    model: RoughExpParams = RoughExpParams(sigma=0.5, eta=0.5, h=0.05)
    h_values: tuple[float, ...] = (0.05, 0.10)
    dt: float = 0.002
    horizon_years: float = 1.0
    maturities_days: tuple[int, ...] = (1, 10, 20)
    rule: str = TRAPEZOIDAL
    n_initial_paths: int = 3
    m_paths: int = 1024
    antithetic: bool = True
    qmc_initial: bool = False
    qmc_mc: bool = False
    k_est: int = 15
    max_windows: int | None = None
    estimate_log: bool = False
    seed: int = 7

    def to_dict(self) -> dict:
        return {"experiment": "table2", **asdict(self)}


@dataclass(frozen=True)
class BiasCurveSpec:
    """Measured implied-vol roughness against model roughness, per maturity."""

    scale: str = "smoke"
    model: RoughExpParams = RoughExpParams(sigma=0.5, eta=0.5, h=0.10)
    h_values: tuple[float, ...] = (0.05, 0.10, 0.20, 0.40)
    dt: float = 0.002
    horizon_years: float = 1.0
    maturities_days: tuple[int, ...] = (1, 10, 20)
    rule: str = TRAPEZOIDAL
    n_initial_paths: int = 8
    m_paths: int = 1024
    antithetic: bool = True
    qmc_initial: bool = False
    qmc_mc: bool = False
    k_est: int = 15
    max_windows: int | None = None
    estimate_log: bool = False
    f_hat_power: float | None = None
    seed: int = 7

    def to_dict(self) -> dict:
        return {"experiment": "bias-curve", **asdict(self)}


@dataclass(frozen=True)
class MarketSpec:
    """Sliding roughness of one market series ingested from CSV."""

    input_path: str
    value_col: str
    date_col: str = "Date"
    date_format: str = "%Y-%m-%d"
    k: int = 70
    log: bool = False
    stride: int = 1
    max_windows: int | None = None
    hist_bins: int = 30

    def to_dict(self) -> dict:
        return {"experiment": "market-roughness", **asdict(self)}


_PAPER_TABLE1 = dict(
    scale="paper", dts=(0.001, 0.0004, 0.0002), horizon_years=4.0,
    n_initial_paths=20, m_paths=8192, qmc_initial=True, qmc_mc=True,
    k_est=25, max_windows=365,
)
_PAPER_TABLE2 = dict(
    scale="paper", dt=0.001, horizon_years=4.0, n_initial_paths=1,
    m_paths=8192, qmc_initial=True, qmc_mc=True, k_est=25, max_windows=365,
)
_PAPER_BIAS = dict(
    scale="paper", h_values=(0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45, 0.50),
    dt=0.001, horizon_years=4.0, n_initial_paths=32, m_paths=8192,
    qmc_initial=True, qmc_mc=True, k_est=25, max_windows=365,
)


def _apply_overrides(spec, overrides: Mapping | None):
    if not overrides:
        return spec
    extra = dict(overrides)
    extra.pop("experiment", None)
    model_over = extra.pop("model", None)
    fields = set(spec.__dataclass_fields__)
    unknown = set(extra) - fields
    if unknown:
        raise ValueError(f"unknown spec keys: {sorted(unknown)}")
    for key in ("dts", "h_values", "maturities_days", "rules"):
        if key in extra and extra[key] is not None:
            extra[key] = tuple(extra[key])
    spec = replace(spec, **extra)
    if model_over is not None:
        bad = set(model_over) - set(spec.model.__dataclass_fields__)
        if bad:
            raise ValueError(f"unknown model keys: {sorted(bad)}")
        spec = replace(spec, model=replace(spec.model, **model_over))
    return spec


def table1_spec(scale: str = "smoke", overrides: Mapping | None = None) -> Table1Spec:
    if scale not in SCALES:
        raise ValueError(f"scale must be one of {SCALES}, got {scale!r}")
    spec = Table1Spec() if scale == "smoke" else Table1Spec(**_PAPER_TABLE1)
    return _apply_overrides(spec, overrides)


def table2_spec(scale: str = "smoke", overrides: Mapping | None = None) -> Table2Spec:
    if scale not in SCALES:
        raise ValueError(f"scale must be one of {SCALES}, got {scale!r}")
    spec = Table2Spec() if scale == "smoke" else Table2Spec(**_PAPER_TABLE2)
    return _apply_overrides(spec, overrides)


def bias_curve_spec(scale: str = "smoke", overrides: Mapping | None = None) -> BiasCurveSpec:
    if scale not in SCALES:
        raise ValueError(f"scale must be one of {SCALES}, got {scale!r}")
    spec = BiasCurveSpec() if scale == "smoke" else BiasCurveSpec(**_PAPER_BIAS)
    return _apply_overrides(spec, overrides)


def _g(x) -> str:
    """CSV cell for an optional float: empty when missing."""
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    return f"{x:.17g}"


def _spec_line(spec_dict: dict) -> str:
    return "# spec: " + json.dumps(spec_dict, sort_keys=True, separators=(",", ":")) + "\n"


def _write_csv(path: Path, spec_dict: dict, header: str, rows: Iterable[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(_spec_line(spec_dict))
        fh.write(header + "\n")
        for row in rows:
            fh.write(row + "\n")


def _write_summary(path: Path, name: str, spec_dict: dict, results: dict) -> None:
    doc = {"experiment": name, "spec": spec_dict, "results": results}
    with open(path, "w", encoding="utf-8", newline="") as fh:
        json.dump(doc, fh, sort_keys=True, indent=2, allow_nan=False)
        fh.write("\n")


def _clean(x):
    """JSON-safe float: None for NaN."""
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return None
    return float(x)


def _initial_stream(seed: int, qmc: bool) -> GaussianStream:
    return GaussianStream(seed=seed, purpose="initial",
                          mode=SOBOL if qmc else PSEUDO)


def _valuation_days(grid: SimGrid, k_days: int, est_cfg: EstimatorConfig,
                    max_windows: int | None) -> range:
    """Days 0..n-1 to price: enough for max_windows sliding starts, capped by
    the horizon."""
    avail = grid.n_days - k_days + 1
    if avail < est_cfg.window_len:
        raise SizeError(
            f"horizon gives {avail} valuation days at maturity {k_days}; "
            f"the estimator window needs {est_cfg.window_len}"
        )
    if max_windows is None:
        return range(avail)
    return range(min(avail, est_cfg.window_len + max_windows - 1))


def _estimate_series(path: TimeSeriesPath, est_cfg: EstimatorConfig,
                     max_windows: int | None, log: bool) -> SlidingSummary:
    if log:
        path = log_transform(path)
    return sliding_estimate(path, est_cfg, stride=1, max_windows=max_windows)


def _pool(summaries: list[SlidingSummary]) -> dict:
    """Pooled window population over initial paths for one table cell."""
    h_all = np.concatenate([s.h_values for s in summaries]) if summaries else np.array([])
    n_failed = sum(s.n_failed for s in summaries)
    if len(h_all) == 0:
        return {"h_mean": None, "h_std": None, "n_windows": 0, "n_failed": n_failed}
    return {"h_mean": float(h_all.mean()), "h_std": float(h_all.std()),
            "n_windows": int(len(h_all)), "n_failed": int(n_failed)}


def run_table1(spec: Table1Spec, out_dir=None) -> ExperimentResult:
    """Mean sliding roughness of the daily implied-vol series per (dt, rule).

    For each step size: one fBm engine, n_initial_paths initial vol paths
    (block-drawn), and per path the daily MC implied-vol series priced under
    every rule on shared continuations. The cell statistic is the mean over
    initial paths of the per-path sliding mean, with its standard error.
    """
    est_cfg = EstimatorConfig(k=spec.k_est)
    rules = tuple(normalize_rule(r) for r in spec.rules)
    per_path_rows: list[dict] = []
    per_cell: dict[tuple[float, str], list[float]] = {(dt, r): [] for dt in spec.dts for r in rules}

    for dt_idx, dt in enumerate(spec.dts):
        grid = SimGrid(dt=dt, horizon_years=spec.horizon_years)
        engine = rough_exp_engine(spec.model, grid)
        days = _valuation_days(grid, spec.maturity_days, est_cfg, spec.max_windows)
        mc = McConfig(m_paths=spec.m_paths, antithetic=spec.antithetic,
                      seed=spec.seed, qmc=spec.qmc_mc)
        z_init = _initial_stream(spec.seed, spec.qmc_initial).child(dt_idx).normal_block(
            spec.n_initial_paths, engine.n)
        for m0 in range(spec.n_initial_paths):
            path_index = dt_idx * spec.n_initial_paths + m0
            initial = rough_exp_from_normals(spec.model, grid, engine, z_init[m0],
                                             path_index=path_index)
            series = mc_vol_series(initial, spec.maturity_days, mc, rules=rules, days=days)
            for rule in rules:
                summ = _estimate_series(series.implied_path(rule), est_cfg,
                                        spec.max_windows, spec.estimate_log)
                per_cell[(dt, rule)].append(summ.mean)
                per_path_rows.append({
                    "dt": dt, "rule": rule, "path_index": m0,
                    "h": summ.mean, "n_windows": summ.n_windows,
                    "n_failed": summ.n_failed,
                })

    cells = []
    for dt in spec.dts:
        for rule in rules:
            hs = np.array(per_cell[(dt, rule)])
            se = float(hs.std(ddof=1) / math.sqrt(len(hs))) if len(hs) > 1 else 0.0
            cells.append({"dt": dt, "rule": rule, "h_mean": float(hs.mean()),
                          "h_se": se, "n_paths": int(len(hs))})

    spec_dict = spec.to_dict()
    results = {"cells": cells, "per_path": per_path_rows}
    files: tuple[str, ...] = ()
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        table_csv = out / "table1.csv"
        _write_csv(table_csv, spec_dict, "dt,rule,h_mean,h_se,n_paths",
                   (f"{c['dt']:.17g},{c['rule']},{_g(c['h_mean'])},{_g(c['h_se'])},{c['n_paths']}"
                    for c in cells))
        paths_csv = out / "table1_paths.csv"
        _write_csv(paths_csv, spec_dict, "dt,rule,path_index,h,n_windows,n_failed",
                   (f"{r['dt']:.17g},{r['rule']},{r['path_index']},{_g(r['h'])},"
                    f"{r['n_windows']},{r['n_failed']}" for r in per_path_rows))
        summary = out / "summary.json"
        _write_summary(summary, "table1", spec_dict, results)
        files = (str(table_csv), str(paths_csv), str(summary))
    return ExperimentResult(name="table1", spec=spec_dict, results=results, files=files)


def table_cell(result: ExperimentResult, **match) -> dict:
    """First results cell whose fields equal every keyword given."""
    for cell in result.results["cells"]:
        if all(cell.get(k) == v for k, v in match.items()):
            return cell
    raise KeyError(f"no cell matching {match}")


def run_table2(spec: Table2Spec, out_dir=None) -> ExperimentResult:
    """Roughness of the four volatility proxies per (model h, maturity).

    Proxies: the instantaneous daily vol itself; sqrt(w/tau) of the initial
    path's realized quadrature; sqrt(mean w/tau) over the MC continuations;
    and the implied vol inverting the mean MC price. Window populations are
    pooled over initial paths; the reported spread is the pooled sliding std.
    """
    est_cfg = EstimatorConfig(k=spec.k_est)
    rule = normalize_rule(spec.rule)
    grid = SimGrid(dt=spec.dt, horizon_years=spec.horizon_years)
    cells: list[dict] = []

    for h_idx, h_model in enumerate(spec.h_values):
        model = replace(spec.model, h=h_model)
        engine = rough_exp_engine(model, grid)
        mc = McConfig(m_paths=spec.m_paths, antithetic=spec.antithetic,
                      seed=spec.seed, qmc=spec.qmc_mc)
        z_init = _initial_stream(spec.seed, spec.qmc_initial).child(h_idx).normal_block(
            spec.n_initial_paths, engine.n)
        initials = [
            rough_exp_from_normals(model, grid, engine, z_init[m0],
                                   path_index=h_idx * spec.n_initial_paths + m0)
            for m0 in range(spec.n_initial_paths)
        ]

        inst = [_estimate_series(ip.daily_path(), est_cfg, spec.max_windows,
                                 spec.estimate_log) for ip in initials]
        cells.append({"model_h": h_model, "proxy": INSTANTANEOUS, "maturity_days": 0,
                      **_pool(inst)})

        for k_days in spec.maturities_days:
            days = _valuation_days(grid, k_days, est_cfg, spec.max_windows)
            realized, averaged, implied = [], [], []
            for initial in initials:
                real_path = realized_integrated_vols(initial, k_days, rule, days)
                realized.append(_estimate_series(real_path, est_cfg,
                                                 spec.max_windows, spec.estimate_log))
                series = mc_vol_series(initial, k_days, mc, rules=(rule,), days=days)
                averaged.append(_estimate_series(series.avg_integrated_path(rule), est_cfg,
                                                 spec.max_windows, spec.estimate_log))
                implied.append(_estimate_series(series.implied_path(rule), est_cfg,
                                                spec.max_windows, spec.estimate_log))
            for proxy, summs in ((INTEGRATED_PATH, realized),
                                 (INTEGRATED_AVG, averaged),
                                 (IMPLIED, implied)):
                cells.append({"model_h": h_model, "proxy": proxy,
                              "maturity_days": k_days, **_pool(summs)})

    spec_dict = spec.to_dict()
    results = {"cells": cells}
    files: tuple[str, ...] = ()
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        table_csv = out / "table2.csv"
        _write_csv(table_csv, spec_dict,
                   "model_h,proxy,maturity_days,h_mean,h_std,n_windows,n_failed",
                   (f"{c['model_h']:.17g},{c['proxy']},{c['maturity_days']},"
                    f"{_g(c['h_mean'])},{_g(c['h_std'])},{c['n_windows']},{c['n_failed']}"
                    for c in cells))
        summary = out / "summary.json"
        _write_summary(summary, "table2", spec_dict,
                       {"cells": [{**c, "h_mean": _clean(c["h_mean"]),
                                   "h_std": _clean(c["h_std"])} for c in cells]})
        files = (str(table_csv), str(summary))
    return ExperimentResult(name="table2", spec=spec_dict, results=results, files=files)


def run_bias_curve(spec: BiasCurveSpec, out_dir=None,
                   f_hat: Callable[[float], float] | None = None) -> ExperimentResult:
    """Measured implied-vol roughness against model h, per maturity.

    Per (h, maturity): the mean over initial paths of the per-path sliding
    roughness of the daily implied series, a normal-approximation 95% CI,
    and the path min/max. The summary fits a line of measured against model
    roughness per maturity; the slope flattens as maturity grows. An
    f_hat (callable, or theta^(2a) via spec.f_hat_power) adds the
    theoretical expectation column.
    """
    est_cfg = EstimatorConfig(k=spec.k_est)
    rule = normalize_rule(spec.rule)
    grid = SimGrid(dt=spec.dt, horizon_years=spec.horizon_years)
    if f_hat is None and spec.f_hat_power is not None:
        a = spec.f_hat_power
        f_hat = lambda theta: theta ** (2.0 * a)

    per_path_rows: list[dict] = []
    cell_h: dict[tuple[float, int], list[float]] = {}
    all_failed: dict[tuple[float, int], int] = {}

    for h_idx, h_model in enumerate(spec.h_values):
        model = replace(spec.model, h=h_model)
        engine = rough_exp_engine(model, grid)
        mc = McConfig(m_paths=spec.m_paths, antithetic=spec.antithetic,
                      seed=spec.seed, qmc=spec.qmc_mc)
        z_init = _initial_stream(spec.seed, spec.qmc_initial).child(h_idx).normal_block(
            spec.n_initial_paths, engine.n)
        for m0 in range(spec.n_initial_paths):
            initial = rough_exp_from_normals(model, grid, engine, z_init[m0],
                                             path_index=h_idx * spec.n_initial_paths + m0)
            for k_days in spec.maturities_days:
                days = _valuation_days(grid, k_days, est_cfg, spec.max_windows)
                series = mc_vol_series(initial, k_days, mc, rules=(rule,), days=days)
                key = (h_model, k_days)
                try:
                    summ = _estimate_series(series.implied_path(rule), est_cfg,
                                            spec.max_windows, spec.estimate_log)
                except EmptySummaryError:
                    all_failed[key] = all_failed.get(key, 0) + 1
                    per_path_rows.append({"model_h": h_model, "t_days": k_days,
                                          "path_index": m0, "h_hat": None})
                    continue
                cell_h.setdefault(key, []).append(summ.mean)
                per_path_rows.append({"model_h": h_model, "t_days": k_days,
                                      "path_index": m0, "h_hat": summ.mean})

    cells: list[dict] = []
    for h_model in spec.h_values:
        for k_days in spec.maturities_days:
            key = (h_model, k_days)
            hs = np.array(cell_h.get(key, []))
            theo = None
            if f_hat is not None:
                theo = theoretical_h_hat(h_model, BiasConfig(
                    t_days=float(k_days), f_hat=f_hat, k_days=float(spec.k_est)))
            if len(hs) == 0:
                cells.append({"model_h": h_model, "t_days": k_days,
                              "theoretical_h_hat": theo, "mc_h_hat_mean": None,
                              "mc_h_hat_ci_low": None, "mc_h_hat_ci_high": None,
                              "h_min": None, "h_max": None, "n_paths": 0,
                              "n_paths_failed": all_failed.get(key, 0)})
                continue
            mean = float(hs.mean())
            half = 1.96 * float(hs.std(ddof=1) / math.sqrt(len(hs))) if len(hs) > 1 else 0.0
            cells.append({"model_h": h_model, "t_days": k_days,
                          "theoretical_h_hat": theo, "mc_h_hat_mean": mean,
                          "mc_h_hat_ci_low": mean - half, "mc_h_hat_ci_high": mean + half,
                          "h_min": float(hs.min()), "h_max": float(hs.max()),
                          "n_paths": int(len(hs)),
                          "n_paths_failed": all_failed.get(key, 0)})

    slopes: dict[str, float | None] = {}
    for k_days in spec.maturities_days:
        pairs = [(c["model_h"], c["mc_h_hat_mean"]) for c in cells
                 if c["t_days"] == k_days and c["mc_h_hat_mean"] is not None]
        if len(pairs) >= 2:
            slope, _ = fit_bias_line([p[0] for p in pairs], [p[1] for p in pairs])
            slopes[str(k_days)] = slope
        else:
            slopes[str(k_days)] = None
    ordered = [slopes[str(k)] for k in sorted(spec.maturities_days)]
    flattening = (all(s is not None for s in ordered)
                  and all(a > b for a, b in zip(ordered, ordered[1:])))

    spec_dict = spec.to_dict()
    results = {
        "cells": [{**c, "theoretical_h_hat": _clean(c["theoretical_h_hat"]),
                   "mc_h_hat_mean": _clean(c["mc_h_hat_mean"])} for c in cells],
        "slopes_by_maturity": slopes,
        "slope_flattens_with_maturity": flattening,
    }
    files: tuple[str, ...] = ()
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        curve_csv = out / "bias_curve.csv"
        _write_csv(curve_csv, spec_dict,
                   "model_h,t_days,theoretical_h_hat,mc_h_hat_mean,mc_h_hat_ci_low,mc_h_hat_ci_high",
                   (f"{c['model_h']:.17g},{c['t_days']},{_g(c['theoretical_h_hat'])},"
                    f"{_g(c['mc_h_hat_mean'])},{_g(c['mc_h_hat_ci_low'])},{_g(c['mc_h_hat_ci_high'])}"
                    for c in cells))
        paths_csv = out / "bias_curve_paths.csv"
        _write_csv(paths_csv, spec_dict, "model_h,t_days,path_index,h_hat",
                   (f"{r['model_h']:.17g},{r['t_days']},{r['path_index']},{_g(r['h_hat'])}"
                    for r in per_path_rows))
        summary = out / "summary.json"
        _write_summary(summary, "bias-curve", spec_dict, results)
        files = (str(curve_csv), str(paths_csv), str(summary))
    return ExperimentResult(name="bias-curve", spec=spec_dict, results=results, files=files)


def run_market_roughness(spec: MarketSpec, out_dir=None) -> ExperimentResult:
    """Sliding p-variation roughness of an ingested market series."""
    ingest_spec = IngestSpec(date_col=spec.date_col, value_col=spec.value_col,
                             date_format=spec.date_format)
    ingested = ingest_csv(spec.input_path, ingest_spec)
    path = ingested.path
    if spec.log:
        path = log_transform(path)
    est_cfg = EstimatorConfig(k=spec.k)
    summ = sliding_estimate(path, est_cfg, stride=spec.stride,
                            max_windows=spec.max_windows, hist_bins=spec.hist_bins)

    spec_dict = spec.to_dict()
    results = {
        **summ.to_json_dict(),
        "k": spec.k, "l": est_cfg.l, "window_len": est_cfg.window_len,
        "log": spec.log, "stride": spec.stride,
        "n_rows": ingested.n_rows, "n_dropped": ingested.n_dropped,
        "failures": [{"window_start": w, "kind": kind} for w, kind in summ.failures],
    }
    files: tuple[str, ...] = ()
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        est_csv = out / "estimates.csv"
        with open(est_csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(_spec_line(spec_dict))
            summ.to_csv(fh)
        summary = out / "summary.json"
        _write_summary(summary, "market-roughness", spec_dict, results)
        files = (str(est_csv), str(summary))
    return ExperimentResult(name="market-roughness", spec=spec_dict, results=results,
                            files=files)


def simulate_to_files(model: str, out_dir, config: Mapping | None = None) -> ExperimentResult:
    """Simulate one model path deterministically and write it as CSV.

    model "roughexp" writes the daily and fine instantaneous-vol paths;
    "heston" writes per-step time, variance, vol, and spot columns.
    """
    config = dict(config or {})
    seed = int(config.pop("seed", 7))
    grid_over = config.pop("grid", {})
    params_over = config.pop("model", {})
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    if model == "roughexp":
        grid = SimGrid(**{"dt": 0.001, "horizon_years": 4.0, **grid_over})
        params = RoughExpParams(**{"sigma": 0.5, "eta": 0.5, "h": 0.10, **params_over})
        if config:
            raise ValueError(f"unknown config keys: {sorted(config)}")
        engine = rough_exp_engine(params, grid)
        z = _initial_stream(seed, False).child(0).normal_block(1, engine.n)
        initial = rough_exp_from_normals(params, grid, engine, z[0], path_index=0)
        spec_dict = {"experiment": "simulate", "model": "roughexp", "seed": seed,
                     "grid": asdict(grid), "params": asdict(params)}
        daily = out / "path_daily.csv"
        fine = out / "path_fine.csv"
        dv, dt_path = initial.daily_values(), initial.daily_path()
        _write_csv(daily, spec_dict, "t,vol",
                   (f"{t:.17g},{v:.17g}" for t, v in zip(dt_path.times, dv)))
        _write_csv(fine, spec_dict, "t,vol",
                   (f"{t:.17g},{v:.17g}" for t, v in zip(grid.times, initial.v)))
        results = {"n_steps": grid.n_steps, "n_days": grid.n_days,
                   "v_final_daily": float(dv[-1])}
        summary = out / "summary.json"
        _write_summary(summary, "simulate", spec_dict, results)
        return ExperimentResult(name="simulate", spec=spec_dict, results=results,
                                files=(str(daily), str(fine), str(summary)))

    if model == "heston":
        grid = SimGrid(**{"dt": 0.004, "horizon_years": 5.0, **grid_over})
        params = HestonParams(**params_over)
        if config:
            raise ValueError(f"unknown config keys: {sorted(config)}")
        stream = GaussianStream(seed=seed, purpose="heston", keys=(0,))
        paths = simulate_heston(params, grid, stream)
        spec_dict = {"experiment": "simulate", "model": "heston", "seed": seed,
                     "grid": asdict(grid), "params": asdict(params)}
        path_csv = out / "path.csv"
        _write_csv(path_csv, spec_dict, "t,variance,vol,spot",
                   (f"{t:.17g},{v:.17g},{math.sqrt(max(v, 0.0)):.17g},{s:.17g}"
                    for t, v, s in zip(grid.times, paths.variance, paths.spot)))
        results = {"n_steps": grid.n_steps, "feller": params.feller,
                   "v_final": float(paths.variance[-1])}
        summary = out / "summary.json"
        _write_summary(summary, "simulate", spec_dict, results)
        return ExperimentResult(name="simulate", spec=spec_dict, results=results,
                                files=(str(path_csv), str(summary)))

    raise ValueError(f"unknown model {model!r}; choose heston or roughexp")
