import numpy as np
import pytest

from volrough import (
    DegenerateMomentError,
    LagError,
    RegressionConfig,
    TimeSeriesPath,
    build_engine,
    estimate_h_regression,
    structure_function,
)


def test_structure_function_by_hand():
    x = np.array([0.0, 1.0, 3.0, 6.0])
    # lag 1 diffs: 1,2,3 ; lag 2 diffs: 3,5
    assert structure_function(x, 1.0, 1) == pytest.approx(2.0)
    assert structure_function(x, 2.0, 1) == pytest.approx((1 + 4 + 9) / 3)
    assert structure_function(x, 1.0, 2) == pytest.approx(4.0)
    with pytest.raises(LagError):
        structure_function(x, 1.0, 4)


def test_config_validation():
    with pytest.raises(ValueError):
        RegressionConfig(q_values=())
    with pytest.raises(ValueError):
        RegressionConfig(q_values=(1.0, -2.0))
    with pytest.raises(ValueError):
        RegressionConfig(max_lag_div=0)
    assert RegressionConfig().max_lag(1000) == 25


def test_linear_path_gives_h_one():
    # |x(t+d) - x(t)|^q = (cd)^q exactly, so zeta(q) = q and h = 1
    t = np.arange(200.0)
    path = TimeSeriesPath(t, 0.7 * t)
    est = estimate_h_regression(path)
    assert est.h == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(est.zeta, np.asarray(est.q_values), atol=1e-12)


def test_scale_invariance():
    rng = np.random.default_rng(0)
    t = np.arange(300.0)
    x = rng.standard_normal(300).cumsum()
    h0 = estimate_h_regression(TimeSeriesPath(t, x)).h
    h1 = estimate_h_regression(TimeSeriesPath(t, 25.0 * x + 13.0)).h
    assert h1 == pytest.approx(h0, abs=1e-12)


def test_fbm_recovery():
    t = np.arange(1, 2001) / 2000
    for h in (0.3, 0.7):
        engine = build_engine(h, t)
        vals = []
        for seed in range(10):
            rng = np.random.default_rng(seed)
            x = np.concatenate([[0.0], engine.path_from_normals(rng.standard_normal(engine.n))])
            vals.append(estimate_h_regression(TimeSeriesPath(np.concatenate([[0.0], t]), x)).h)
        assert np.mean(vals) == pytest.approx(h, abs=0.05)


def test_short_series_raises():
    path = TimeSeriesPath(np.arange(50.0), np.random.default_rng(1).standard_normal(50))
    with pytest.raises(LagError):
        estimate_h_regression(path, RegressionConfig(max_lag_div=40))


def test_constant_series_degenerate():
    path = TimeSeriesPath(np.arange(200.0), np.ones(200))
    with pytest.raises(DegenerateMomentError):
        estimate_h_regression(path)


def test_estimate_fields():
    rng = np.random.default_rng(2)
    path = TimeSeriesPath(np.arange(400.0), rng.standard_normal(400).cumsum())
    est = estimate_h_regression(path)
    assert len(est.lags) == 10
    assert est.log_m.shape == (len(est.q_values), 10)
