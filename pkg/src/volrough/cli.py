"""Command-line interface.

Subcommands: estimate, slide, regression (market series from CSV), simulate
(model paths), table1, table2, bias-curve (simulation studies at paper or
smoke scale). Outputs land under --out as CSV plus a summary.json. Exit
codes: 0 success, 2 data errors (files, schema, values), 3 numerical errors
(degenerate windows, failed root searches, failed inversions).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import DataError, NumericalError
from .experiments import (
    MarketSpec,
    bias_curve_spec,
    run_bias_curve,
    run_market_roughness,
    run_table1,
    run_table2,
    simulate_to_files,
    table1_spec,
    table2_spec,
)
from .regression import RegressionConfig, estimate_h_regression
from .timeseries import IngestSpec, ingest_csv, log_transform


def _add_ingest_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, help="CSV file with a date and a value column")
    p.add_argument("--value-col", required=True, help="name of the value column")
    p.add_argument("--date-col", default="Date", help="name of the date column")
    p.add_argument("--date-format", default="%Y-%m-%d", help="strptime format of the dates")
    p.add_argument("--log", action="store_true", help="estimate on log(values)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="volrough",
        description="Roughness of volatility series and the implied-vol bias, by simulation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", help="sliding p-variation roughness: summary only")
    _add_ingest_args(p)
    p.add_argument("--k", type=int, default=70, help="coarse blocks per window")
    p.add_argument("--stride", type=int, default=1, help="step between window starts")
    p.add_argument("--max-windows", type=int, default=None)
    p.add_argument("--out", default=None, help="directory for summary.json and estimates.csv")
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("slide", help="sliding p-variation roughness: full per-window CSV")
    _add_ingest_args(p)
    p.add_argument("--k", type=int, default=70)
    p.add_argument("--stride", type=int, default=1)
    p.add_argument("--max-windows", type=int, default=None)
    p.add_argument("--out", required=True, help="directory for estimates.csv and summary.json")
    p.set_defaults(func=_cmd_slide)

    p = sub.add_parser("regression", help="scaling-regression roughness of one series")
    _add_ingest_args(p)
    p.add_argument("--max-lag-div", type=int, default=40,
                   help="lags run 1 .. n // max-lag-div")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_regression)

    p = sub.add_parser("simulate", help="write one simulated model path as CSV")
    p.add_argument("--model", required=True, choices=("heston", "roughexp"))
    p.add_argument("--config", default=None, help="JSON file with model/grid/seed settings")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_simulate)

    for name, runner, preset in (("table1", run_table1, table1_spec),
                                 ("table2", run_table2, table2_spec),
                                 ("bias-curve", run_bias_curve, bias_curve_spec)):
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", default=None, help="JSON file overriding the preset spec")
        p.add_argument("--scale", default="smoke", choices=("paper", "smoke"))
        p.add_argument("--out", required=True)
        p.set_defaults(func=_cmd_experiment, runner=runner, preset=preset)
    return parser


def _load_config(path: str | None) -> dict | None:
    if path is None:
        return None
    with open(path, "r", encoding="utf-8") as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise ValueError(f"config {path} must hold a JSON object")
    return cfg


def _market_spec(args: argparse.Namespace) -> MarketSpec:
    return MarketSpec(
        input_path=args.input, value_col=args.value_col, date_col=args.date_col,
        date_format=args.date_format, k=args.k, log=args.log, stride=args.stride,
        max_windows=args.max_windows,
    )


def _cmd_estimate(args: argparse.Namespace) -> int:
    result = run_market_roughness(_market_spec(args), out_dir=args.out)
    r = result.results
    print(f"h_mean={r['mean']:.6f} h_std={r['std']:.6f} "
          f"n_windows={r['n_windows']} n_failed={r['n_failed']}")
    return 0


def _cmd_slide(args: argparse.Namespace) -> int:
    result = run_market_roughness(_market_spec(args), out_dir=args.out)
    r = result.results
    print(f"h_mean={r['mean']:.6f} h_std={r['std']:.6f} "
          f"n_windows={r['n_windows']} n_failed={r['n_failed']}")
    for f in result.files:
        print(f"wrote {f}")
    return 0


def _cmd_regression(args: argparse.Namespace) -> int:
    spec = IngestSpec(date_col=args.date_col, value_col=args.value_col,
                      date_format=args.date_format)
    path = ingest_csv(args.input, spec).path
    if args.log:
        path = log_transform(path)
    cfg = RegressionConfig(max_lag_div=args.max_lag_div)
    est = estimate_h_regression(path, cfg)
    print(f"h={est.h:.6f} max_lag={int(est.lags[-1])} n={len(path)}")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        doc = {
            "experiment": "regression",
            "spec": {"input_path": args.input, "value_col": args.value_col,
                     "date_col": args.date_col, "date_format": args.date_format,
                     "log": args.log, "max_lag_div": args.max_lag_div},
            "results": {"h": est.h,
                        "q_values": [float(q) for q in est.q_values],
                        "zeta": [float(z) for z in est.zeta],
                        "max_lag": int(est.lags[-1])},
        }
        with open(out / "summary.json", "w", encoding="utf-8", newline="") as fh:
            json.dump(doc, fh, sort_keys=True, indent=2)
            fh.write("\n")
        print(f"wrote {out / 'summary.json'}")
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    result = simulate_to_files(args.model, args.out, _load_config(args.config))
    for f in result.files:
        print(f"wrote {f}")
    return 0


def _cmd_experiment(args: argparse.Namespace) -> int:
    spec = args.preset(scale=args.scale, overrides=_load_config(args.config))
    result = args.runner(spec, out_dir=args.out)
    for cell in result.results.get("cells", []):
        parts = []
        for key, val in cell.items():
            if isinstance(val, float):
                parts.append(f"{key}={val:.6g}")
            else:
                parts.append(f"{key}={val}")
        print(" ".join(parts))
    slopes = result.results.get("slopes_by_maturity")
    if slopes is not None:
        printable = {k: (None if v is None else round(v, 6)) for k, v in slopes.items()}
        print(f"slopes_by_maturity={printable} "
              f"flattens={result.results['slope_flattens_with_maturity']}")
    for f in result.files:
        print(f"wrote {f}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    except (DataError, OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
