"""Roughness of volatility time series, and the upward bias of implied-vol proxies.

The p-variation and scaling-regression estimators measure the Hurst index of
a series; the fBm engine, rough exponential and Heston simulators, and the
Monte-Carlo pricer quantify how much smoother implied volatility looks than
the instantaneous volatility that drives it.
"""

from .bias import BiasConfig, fit_bias_line, theoretical_h_hat
from .errors import (
    DataError,
    DegenerateBlockError,
    DegenerateMomentError,
    DomainError,
    DuplicateDateError,
    EmptyContinuationError,
    EmptySummaryError,
    FactorizationError,
    InsufficientDataError,
    InversionError,
    LagError,
    NoRootError,
    NumericalError,
    SchemaError,
    SizeError,
    VolroughError,
)
from .estimators import PVariationHurst, RegressionHurst, SlidingHurst
from .experiments import (
    PROXIES,
    BiasCurveSpec,
    ExperimentResult,
    MarketSpec,
    Table1Spec,
    Table2Spec,
    bias_curve_spec,
    run_bias_curve,
    run_market_roughness,
    run_table1,
    run_table2,
    simulate_to_files,
    table1_spec,
    table2_spec,
    table_cell,
)
from .fbm import (
    PSEUDO,
    SOBOL,
    FbmDraw,
    FbmEngine,
    GaussianStream,
    build_engine,
    fbm_covariance,
)
from .models import (
    HestonParams,
    HestonPaths,
    RoughExpParams,
    RoughExpVolPath,
    SimGrid,
    heston_atm_vol_proxy,
    rough_exp_engine,
    rough_exp_from_normals,
    simulate_heston,
    simulate_rough_exp_vol,
    vol_from_fbm,
)
from .pricing import (
    RULES,
    ImpliedVolPoint,
    McConfig,
    McVolSeries,
    black76_atm_call,
    implied_vol_from_price,
    mc_implied_vol,
    mc_quadratures,
    mc_vol_series,
    normalize_rule,
    price_stats,
    realized_integrated_vols,
    total_variance,
)
from .pvariation import (
    EstimatorConfig,
    HurstEstimate,
    SlidingSummary,
    estimate_h,
    sliding_estimate,
    w_statistic,
    w_statistic_terms,
)
from .regression import (
    RegressionConfig,
    RegressionEstimate,
    estimate_h_regression,
    structure_function,
)
from .timeseries import (
    BUSINESS_DAY_YEARS,
    GENERIC,
    IngestResult,
    IngestSpec,
    TimeSeriesPath,
    YAHOO_VIX,
    ingest_csv,
    log_transform,
    read_path_csv,
    write_path_csv,
)

__version__ = "0.1.0"

__all__ = [
    "BUSINESS_DAY_YEARS",
    "BiasConfig",
    "BiasCurveSpec",
    "DataError",
    "DegenerateBlockError",
    "DegenerateMomentError",
    "DomainError",
    "DuplicateDateError",
    "EmptyContinuationError",
    "EmptySummaryError",
    "EstimatorConfig",
    "ExperimentResult",
    "FactorizationError",
    "FbmDraw",
    "FbmEngine",
    "GENERIC",
    "GaussianStream",
    "HestonParams",
    "HestonPaths",
    "HurstEstimate",
    "ImpliedVolPoint",
    "IngestResult",
    "IngestSpec",
    "InsufficientDataError",
    "InversionError",
    "LagError",
    "MarketSpec",
    "McConfig",
    "McVolSeries",
    "NoRootError",
    "NumericalError",
    "PROXIES",
    "PSEUDO",
    "PVariationHurst",
    "RULES",
    "SOBOL",
    "RegressionConfig",
    "RegressionEstimate",
    "RegressionHurst",
    "RoughExpParams",
    "RoughExpVolPath",
    "SchemaError",
    "SimGrid",
    "SizeError",
    "SlidingHurst",
    "SlidingSummary",
    "Table1Spec",
    "Table2Spec",
    "TimeSeriesPath",
    "VolroughError",
    "YAHOO_VIX",
    "bias_curve_spec",
    "black76_atm_call",
    "build_engine",
    "estimate_h",
    "estimate_h_regression",
    "fbm_covariance",
    "fit_bias_line",
    "heston_atm_vol_proxy",
    "implied_vol_from_price",
    "ingest_csv",
    "log_transform",
    "mc_implied_vol",
    "mc_quadratures",
    "mc_vol_series",
    "normalize_rule",
    "price_stats",
    "read_path_csv",
    "realized_integrated_vols",
    "rough_exp_engine",
    "rough_exp_from_normals",
    "run_bias_curve",
    "run_market_roughness",
    "run_table1",
    "run_table2",
    "simulate_heston",
    "simulate_rough_exp_vol",
    "simulate_to_files",
    "sliding_estimate",
    "structure_function",
    "table1_spec",
    "table2_spec",
    "table_cell",
    "theoretical_h_hat",
    "total_variance",
    "vol_from_fbm",
    "w_statistic",
    "w_statistic_terms",
    "write_path_csv",
]
