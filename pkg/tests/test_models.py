import math

import numpy as np
import pytest

from volrough import (
    DomainError,
    GaussianStream,
    HestonParams,
    RoughExpParams,
    SimGrid,
    heston_atm_vol_proxy,
    rough_exp_engine,
    simulate_heston,
    simulate_rough_exp_vol,
    vol_from_fbm,
)


def test_param_validation():
    with pytest.raises(ValueError):
        RoughExpParams(sigma=0.0)
    with pytest.raises(ValueError):
        RoughExpParams(eta=-0.1)
    with pytest.raises(ValueError):
        RoughExpParams(h=1.0)
    with pytest.raises(ValueError):
        HestonParams(kappa=-1.0)
    with pytest.raises(ValueError):
        HestonParams(rho=-1.5)
    assert HestonParams(kappa=2.0, theta=0.09, xi=0.5).feller
    assert not HestonParams().feller


def test_simgrid_counts():
    grid = SimGrid(dt=0.001, horizon_years=2.0)
    assert grid.steps_per_day == 4
    assert grid.n_days == 500
    assert grid.n_steps == 2000
    assert len(grid.times) == 2001
    assert grid.times[grid.fine_index(3)] == pytest.approx(0.012)
    with pytest.raises(ValueError):
        grid.fine_index(501)


def test_simgrid_validation():
    with pytest.raises(ValueError):
        SimGrid(dt=0.003, horizon_years=1.0)  # not a divisor of one day
    with pytest.raises(ValueError):
        SimGrid(dt=0.002, horizon_years=0.0052)
    with pytest.raises(ValueError):
        SimGrid(dt=-0.001, horizon_years=1.0)


def test_vol_from_fbm_prepends_unit_start():
    params = RoughExpParams(eta=0.5)
    w = np.array([0.2, -0.4])
    v = vol_from_fbm(params, w)
    np.testing.assert_allclose(v, [1.0, np.exp(0.1), np.exp(-0.2)], rtol=1e-15)


def test_eta_zero_is_flat():
    params = RoughExpParams(eta=0.0)
    grid = SimGrid(dt=0.002, horizon_years=0.1)
    path = simulate_rough_exp_vol(params, grid, GaussianStream(seed=0, purpose="t"))
    np.testing.assert_array_equal(path.v, np.ones(grid.n_steps + 1))
    np.testing.assert_array_equal(path.daily_values(), np.ones(grid.n_days + 1))


def test_rough_exp_plumbing_matches_engine_draw():
    params = RoughExpParams(h=0.3)
    grid = SimGrid(dt=0.002, horizon_years=0.2)
    stream = GaussianStream(seed=21, purpose="t")
    path = simulate_rough_exp_vol(params, grid, stream)
    engine = rough_exp_engine(params, grid)
    draw = engine.draw_path(stream)
    np.testing.assert_allclose(path.v[1:], np.exp(params.eta * draw.values), rtol=1e-12)
    np.testing.assert_array_equal(path.normals, draw.normals)
    assert len(path.daily_path()) == grid.n_days + 1
    assert len(path.fine_path()) == grid.n_steps + 1


def test_daily_subsampling():
    params = RoughExpParams(h=0.2)
    grid = SimGrid(dt=0.001, horizon_years=0.1)
    path = simulate_rough_exp_vol(params, grid, GaussianStream(seed=2, purpose="t"))
    np.testing.assert_array_equal(path.daily_values(), path.v[:: grid.steps_per_day])


def test_heston_xi_zero_is_deterministic_recursion():
    params = HestonParams(v0=0.09, kappa=2.0, theta=0.04, xi=1e-300)
    grid = SimGrid(dt=0.004, horizon_years=1.0)
    paths = simulate_heston(params, grid, GaussianStream(seed=3, purpose="t"))
    n = np.arange(grid.n_steps + 1)
    expect = params.theta + (params.v0 - params.theta) * (1 - params.kappa * grid.dt) ** n
    np.testing.assert_allclose(paths.variance, expect, rtol=1e-10)


def test_heston_paths_are_finite_and_nonnegative():
    params = HestonParams()  # Feller violated: excursions hit zero
    grid = SimGrid(dt=0.004, horizon_years=5.0)
    paths = simulate_heston(params, grid, GaussianStream(seed=4, purpose="t"))
    assert np.all(np.isfinite(paths.variance))
    assert np.all(paths.variance >= 0.0)
    assert np.all(paths.spot > 0.0)
    vol = paths.vol_path()
    assert np.all(np.isfinite(vol.values))


def test_heston_determinism():
    params = HestonParams()
    grid = SimGrid(dt=0.004, horizon_years=0.5)
    a = simulate_heston(params, grid, GaussianStream(seed=5, purpose="t"))
    b = simulate_heston(params, grid, GaussianStream(seed=5, purpose="t"))
    np.testing.assert_array_equal(a.variance, b.variance)
    np.testing.assert_array_equal(a.spot, b.spot)


def test_proxy_example_value():
    params = HestonParams(kappa=1.0, theta=0.04)
    sigma = heston_atm_vol_proxy(params, 0.09, 1.0 / 12.0)
    decay = (1 - math.exp(-1.0 / 12.0)) * 12.0
    assert sigma == pytest.approx(math.sqrt(0.04 + 0.05 * decay), rel=1e-12)
    assert sigma == pytest.approx(0.2965, abs=5e-4)


def test_proxy_limits():
    params = HestonParams(kappa=1.0, theta=0.04)
    # at v = theta the proxy is flat at sqrt(theta) for any maturity
    assert heston_atm_vol_proxy(params, 0.04, 2.0) == pytest.approx(0.2, rel=1e-12)
    # short maturities collapse to the instantaneous vol
    assert heston_atm_vol_proxy(params, 0.09, 1e-9) == pytest.approx(0.3, rel=1e-6)
    with pytest.raises(ValueError):
        heston_atm_vol_proxy(params, 0.04, 0.0)
    with pytest.raises(DomainError):
        heston_atm_vol_proxy(params, -10.0, 1.0)


def test_proxy_vectorized():
    params = HestonParams()
    out = heston_atm_vol_proxy(params, np.array([0.04, 0.09]), 0.5)
    assert out.shape == (2,)
