import json
from pathlib import Path

import numpy as np
import pytest

from volrough import (
    PROXIES,
    BiasCurveSpec,
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

TINY_T2 = {"h_values": (0.1,), "maturities_days": (1, 5), "n_initial_paths": 2,
           "m_paths": 128, "horizon_years": 0.6, "k_est": 10}
TINY_BIAS = {"h_values": (0.1, 0.3), "maturities_days": (1, 5), "n_initial_paths": 2,
             "m_paths": 128, "horizon_years": 0.6, "k_est": 10}


def read_json(path: Path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def test_spec_presets():
    smoke = table1_spec("smoke")
    assert smoke.dts == (0.002, 0.0005) and smoke.n_initial_paths == 5
    paper = table1_spec("paper")
    assert paper.dts == (0.001, 0.0004, 0.0002)
    assert paper.m_paths == 8192 and paper.qmc_mc and paper.k_est == 25
    assert table2_spec("paper").max_windows == 365
    assert len(bias_curve_spec("paper").h_values) == 10
    with pytest.raises(ValueError):
        table1_spec("huge")


def test_spec_overrides():
    spec = table2_spec("smoke", overrides={"m_paths": 256, "model": {"eta": 0.3},
                                           "maturities_days": [1, 2]})
    assert spec.m_paths == 256
    assert spec.model.eta == pytest.approx(0.3)
    assert spec.maturities_days == (1, 2)
    with pytest.raises(ValueError):
        table2_spec("smoke", overrides={"no_such_field": 1})
    with pytest.raises(ValueError):
        table2_spec("smoke", overrides={"model": {"bad": 1}})


def test_run_table2_outputs(tmp_path):
    spec = table2_spec("smoke", overrides=TINY_T2)
    res = run_table2(spec, out_dir=tmp_path)
    assert (tmp_path / "table2.csv").exists()
    assert (tmp_path / "summary.json").exists()

    cells = res.results["cells"]
    assert {c["proxy"] for c in cells} == set(PROXIES)
    inst = table_cell(res, proxy="instantaneous", model_h=0.1)
    assert 0.0 < inst["h_mean"] < 1.0
    impl = table_cell(res, proxy="implied", model_h=0.1, maturity_days=5)
    assert impl["n_windows"] > 0

    text = (tmp_path / "table2.csv").read_text()
    first, header = text.splitlines()[:2]
    assert first.startswith("# spec: ")
    assert header == "model_h,proxy,maturity_days,h_mean,h_std,n_windows,n_failed"
    summary = read_json(tmp_path / "summary.json")
    assert summary["spec"]["experiment"] == "table2"
    assert summary["spec"]["m_paths"] == 128


def test_run_table1_outputs(tmp_path):
    spec = table1_spec("smoke", overrides={"dts": (0.002,), "n_initial_paths": 2,
                                           "m_paths": 128, "horizon_years": 0.6,
                                           "k_est": 10})
    res = run_table1(spec, out_dir=tmp_path)
    cells = res.results["cells"]
    assert len(cells) == 3  # one dt, three rules
    for cell in cells:
        assert cell["h_se"] >= 0.0
        assert cell["n_paths"] == 2
    assert table_cell(res, rule="right", dt=0.002)["h_mean"] > 0
    assert (tmp_path / "table1.csv").exists()
    assert (tmp_path / "table1_paths.csv").exists()
    per_path = (tmp_path / "table1_paths.csv").read_text().splitlines()
    assert per_path[1] == "dt,rule,path_index,h,n_windows,n_failed"
    assert len(per_path) == 2 + 3 * 2


def test_run_bias_curve_outputs(tmp_path):
    spec = bias_curve_spec("smoke", overrides=TINY_BIAS)
    res = run_bias_curve(spec, out_dir=tmp_path)
    slopes = res.results["slopes_by_maturity"]
    assert set(slopes) == {"1", "5"}
    assert isinstance(res.results["slope_flattens_with_maturity"], bool)
    cells = res.results["cells"]
    assert len(cells) == 4  # 2 h values x 2 maturities
    for cell in cells:
        assert cell["h_min"] <= cell["mc_h_hat_mean"] <= cell["h_max"]
        assert cell["mc_h_hat_ci_low"] <= cell["mc_h_hat_mean"] <= cell["mc_h_hat_ci_high"]
    assert (tmp_path / "bias_curve.csv").exists()
    assert (tmp_path / "bias_curve_paths.csv").exists()


def test_bias_curve_theoretical_column(tmp_path):
    spec = bias_curve_spec("smoke", overrides={**TINY_BIAS, "f_hat_power": 0.2})
    res = run_bias_curve(spec, out_dir=tmp_path)
    for cell in res.results["cells"]:
        assert cell["theoretical_h_hat"] == pytest.approx(cell["model_h"] - 0.2, abs=1e-12)


def test_market_roughness(tmp_path):
    # synthetic daily series long enough for K = 10 windows
    rng = np.random.default_rng(0)
    n = 160
    dates = np.datetime64("2019-01-01") + np.arange(n)
    values = np.exp(rng.standard_normal(n).cumsum() * 0.05 + 3.0)
    csv = tmp_path / "series.csv"
    with open(csv, "w") as fh:
        fh.write("Date,Close\n")
        for d, v in zip(dates, values):
            fh.write(f"{d},{v:.6f}\n")

    spec = MarketSpec(input_path=str(csv), value_col="Close", k=10, log=True)
    res = run_market_roughness(spec, out_dir=tmp_path)
    summary = read_json(tmp_path / "summary.json")
    assert summary["results"]["n_windows"] == res.results["n_windows"] > 0
    assert summary["results"]["k"] == 10
    assert summary["results"]["n_rows"] == n
    assert (tmp_path / "estimates.csv").exists()
    lines = (tmp_path / "estimates.csv").read_text().splitlines()
    assert lines[0].startswith("# spec: ")
    assert lines[1] == "window_start,t_start,h,p,residual"


def test_simulate_to_files(tmp_path):
    out1 = tmp_path / "rexp"
    res = simulate_to_files("roughexp", out1, config={"model": {"h": 0.3},
                                                      "grid": {"horizon_years": 0.2}})
    assert (out1 / "path_daily.csv").exists()
    assert (out1 / "path_fine.csv").exists()
    assert read_json(out1 / "summary.json")["spec"]["model"] == "roughexp"

    out2 = tmp_path / "heston"
    simulate_to_files("heston", out2, config={"grid": {"horizon_years": 0.2}})
    header = (out2 / "path.csv").read_text().splitlines()[1]
    assert header == "t,variance,vol,spot"
    with pytest.raises(ValueError):
        simulate_to_files("garch", tmp_path / "x")
    with pytest.raises(ValueError):
        simulate_to_files("heston", tmp_path / "y", config={"bogus": 1})


def test_byte_determinism_across_runs(tmp_path):
    spec = table2_spec("smoke", overrides=TINY_T2)
    a = tmp_path / "a"
    b = tmp_path / "b"
    run_table2(spec, out_dir=a)
    run_table2(spec, out_dir=b)
    for file in sorted(p.name for p in a.iterdir()):
        assert (a / file).read_bytes() == (b / file).read_bytes(), file
