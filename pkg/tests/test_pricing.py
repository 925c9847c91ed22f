import io
import math

import numpy as np
import pytest

from volrough import (
    BUSINESS_DAY_YEARS,
    RULES,
    DomainError,
    GaussianStream,
    InversionError,
    McConfig,
    RoughExpParams,
    SimGrid,
    SizeError,
    black76_atm_call,
    implied_vol_from_price,
    mc_implied_vol,
    mc_quadratures,
    mc_vol_series,
    normalize_rule,
    price_stats,
    realized_integrated_vols,
    simulate_rough_exp_vol,
    total_variance,
)


def smoke_path(seed: int = 0, h: float = 0.1, horizon: float = 0.5, eta: float = 0.5):
    params = RoughExpParams(h=h, eta=eta)
    grid = SimGrid(dt=0.002, horizon_years=horizon)
    return simulate_rough_exp_vol(params, grid,
                                  GaussianStream(seed=seed, purpose="initial"))


def test_black76_oracle():
    # 2*Phi(0.1) - 1 at w = 0.04
    assert black76_atm_call(0.04) == pytest.approx(0.0796557, abs=1e-7)
    assert black76_atm_call(0.0) == 0.0
    w = np.array([0.01, 0.04, 0.25])
    assert np.all(np.diff(black76_atm_call(w)) > 0)
    with pytest.raises(DomainError):
        black76_atm_call(-1e-9)


def test_inversion_oracle_and_roundtrip():
    assert implied_vol_from_price(0.5, 1.0) == pytest.approx(1.3490, abs=1e-4)
    for w in np.geomspace(1e-8, 25.0, 40):
        tau = 0.25
        vol = implied_vol_from_price(black76_atm_call(w), tau)
        assert vol == pytest.approx(math.sqrt(w / tau), rel=1e-10)


def test_inversion_rejects_impossible_prices():
    for price in (0.0, 1.0, -0.2, 1.7):
        with pytest.raises(InversionError):
            implied_vol_from_price(price, 1.0)
    with pytest.raises(ValueError):
        implied_vol_from_price(0.5, 0.0)


def test_rule_aliases():
    assert normalize_rule(" Trapezoidal ") == "trapezoidal"
    assert normalize_rule("TRAP") == "trapezoidal"
    with pytest.raises(ValueError):
        normalize_rule("simpson")


def test_total_variance_by_hand():
    # v = t over {0, 1, 2}, dt = 1, sigma = 1: squares are 0, 1, 4
    seg = np.array([0.0, 1.0, 2.0])
    assert total_variance(seg, 1.0, 1.0, "right") == pytest.approx(5.0)
    assert total_variance(seg, 1.0, 1.0, "left") == pytest.approx(1.0)
    assert total_variance(seg, 1.0, 1.0, "trapezoidal") == pytest.approx(3.0)
    with pytest.raises(SizeError):
        total_variance(np.array([1.0]), 1.0, 1.0, "left")


def test_trapezoid_is_mean_of_rectangles():
    rng = np.random.default_rng(0)
    seg = rng.uniform(0.5, 2.0, size=(7, 33))
    left = total_variance(seg, 0.001, 0.5, "left")
    right = total_variance(seg, 0.001, 0.5, "right")
    trap = total_variance(seg, 0.001, 0.5, "trapezoidal")
    np.testing.assert_allclose(trap, 0.5 * (left + right), rtol=1e-14)


def test_mc_config_validation():
    with pytest.raises(ValueError):
        McConfig(m_paths=101, antithetic=True)
    cfg = McConfig(m_paths=101, antithetic=False)
    assert cfg.stream(2, 5).keys == (2, 5)


def test_price_stats_antithetic_pairing():
    prices = np.array([1.0, 3.0, 2.0, 2.0])  # pairs (1,2) and (3,2)
    mean, se = price_stats(prices, antithetic=True)
    assert mean == pytest.approx(2.0)
    assert se == pytest.approx(np.std([1.5, 2.5], ddof=1) / math.sqrt(2))
    mean, se = price_stats(prices, antithetic=False)
    assert mean == pytest.approx(2.0)


def test_eta_zero_implies_flat_smile():
    # with eta = 0 the vol path is constant, so sigma_imp == sigma exactly
    path = smoke_path(seed=1, eta=0.0)
    mc = McConfig(m_paths=64, antithetic=True, seed=3)
    for k in (1, 10):
        pt = mc_implied_vol(path, day=5, k_days=k, mc=mc)
        assert pt.implied_vol == pytest.approx(0.5, rel=1e-12)
        assert pt.price_se == pytest.approx(0.0, abs=1e-15)


def test_mc_quadratures_shapes_and_rule_sharing():
    path = smoke_path(seed=2)
    mc = McConfig(m_paths=32, antithetic=True, seed=1)
    w = mc_quadratures(path, day=3, k_days=2, mc=mc)
    assert set(w) == set(RULES)
    for arr in w.values():
        assert arr.shape == (32,)
        assert np.all(arr > 0)
    np.testing.assert_allclose(w["trapezoidal"], 0.5 * (w["left"] + w["right"]),
                               rtol=1e-14)


def test_antithetic_reduces_price_se():
    path = smoke_path(seed=3)
    wins = 0
    for seed in range(10):
        anti = mc_implied_vol(path, day=10, k_days=5,
                              mc=McConfig(m_paths=256, antithetic=True, seed=seed))
        plain = mc_implied_vol(path, day=10, k_days=5,
                               mc=McConfig(m_paths=256, antithetic=False, seed=seed))
        wins += anti.price_se < plain.price_se
    assert wins >= 8


def test_price_se_scales_like_inverse_sqrt_m():
    path = smoke_path(seed=4)
    ratios = []
    for seed in range(8):
        small = mc_implied_vol(path, day=10, k_days=5,
                               mc=McConfig(m_paths=128, antithetic=False, seed=seed))
        big = mc_implied_vol(path, day=10, k_days=5,
                             mc=McConfig(m_paths=2048, antithetic=False, seed=seed))
        ratios.append(small.price_se / big.price_se)
    assert np.mean(ratios) == pytest.approx(4.0, rel=0.35)


def test_mc_vol_series_structure():
    path = smoke_path(seed=5, horizon=0.2)  # 50 days
    mc = McConfig(m_paths=64, antithetic=True, seed=2)
    series = mc_vol_series(path, k_days=10, mc=mc)
    n = path.grid.n_days - 10 + 1
    assert series.days.shape == (n,)
    assert series.implied.shape == (len(series.rules), n)
    assert np.all(series.implied > 0)
    imp = series.implied_path("trapezoidal")
    assert len(imp) == n
    avg = series.avg_integrated_path("trapezoidal")
    assert np.all(avg.values > 0)

    buf = io.StringIO()
    series.to_csv(buf, "trapezoidal")
    lines = buf.getvalue().strip().splitlines()
    assert lines[0] == "day,t,tau_days,implied_vol,price_se"
    assert len(lines) == 1 + n


def test_mc_vol_series_is_deterministic():
    path = smoke_path(seed=6, horizon=0.1)
    mc = McConfig(m_paths=64, antithetic=True, seed=9)
    a = mc_vol_series(path, k_days=1, mc=mc)
    b = mc_vol_series(path, k_days=1, mc=mc)
    np.testing.assert_array_equal(a.implied, b.implied)
    np.testing.assert_array_equal(a.price_se, b.price_se)


def test_qmc_mode_runs_and_differs():
    path = smoke_path(seed=7, horizon=0.1)
    pseudo = mc_vol_series(path, k_days=1, mc=McConfig(m_paths=64, antithetic=True, seed=4))
    qmc = mc_vol_series(path, k_days=1,
                        mc=McConfig(m_paths=64, antithetic=True, seed=4, qmc=True))
    assert not np.array_equal(pseudo.implied, qmc.implied)
    assert np.all(qmc.implied > 0)


def test_realized_integrated_vols_by_hand():
    path = smoke_path(seed=8, horizon=0.1)
    grid = path.grid
    real = realized_integrated_vols(path, k_days=1, rule="right")
    spd = grid.steps_per_day
    day = 3
    w = (0.5 * path.v[day * spd + 1 : (day + 1) * spd + 1]) ** 2 @ np.full(spd, grid.dt)
    assert real.values[day] == pytest.approx(math.sqrt(w / BUSINESS_DAY_YEARS), rel=1e-12)
    assert len(real) == grid.n_days


def test_realized_integrated_vols_bounds():
    path = smoke_path(seed=9, horizon=0.1)
    with pytest.raises(SizeError):
        realized_integrated_vols(path, k_days=3, days=[23, 24])
    ok = realized_integrated_vols(path, k_days=3, days=[21, 22])
    assert len(ok.values) == 2
