"""simctl: scenario runner and PSD curve export."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .phase_noise import SET_A, SET_B, psd_at, with_carrier, write_psd_csv
from .runners import (
    run_density_sweep,
    run_freq_density_sweep,
    run_interference,
    run_multi_trp,
    run_papr,
    single_run_rows,
    write_table_csv,
)
from .scenario import Scenario

_PSD_MODELS = {"set-a": SET_A, "set-b": SET_B}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simctl",
        description="Link-level phase-noise / PT-RS simulation control",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run the experiment described by a scenario file")
    run_p.add_argument("scenario", help="TOML scenario file")
    run_p.add_argument("--out", default=".", help="output directory for CSV files")
    run_p.add_argument("--seed", type=int, default=None, help="override base_seed")
    run_p.add_argument("--drops", type=int, default=None, help="override n_drops")
    run_p.add_argument("--jobs", type=int, default=1, help="parallel drop workers")

    psd_p = sub.add_parser("psd", help="export a model PSD curve as CSV")
    psd_p.add_argument("model", choices=sorted(_PSD_MODELS))
    psd_p.add_argument("--out", required=True, help="output CSV path")
    psd_p.add_argument("--carrier-hz", type=float, default=None,
                       help="operating carrier (default: the model's base carrier)")
    psd_p.add_argument("--f-min", type=float, default=1e3)
    psd_p.add_argument("--f-max", type=float, default=100e6)
    psd_p.add_argument("--points", type=int, default=200)
    return parser


def _cmd_psd(args) -> int:
    model = _PSD_MODELS[args.model]
    if args.carrier_hz is not None:
        model = with_carrier(model, args.carrier_hz)
    if args.f_min <= 0 or args.f_max <= args.f_min or args.points < 2:
        raise ConfigError("need 0 < f-min < f-max and points >= 2")
    freqs = np.logspace(np.log10(args.f_min), np.log10(args.f_max), args.points)
    write_psd_csv(args.out, freqs, psd_at(model, freqs))
    print(args.out)
    return 0


def _cmd_run(args) -> int:
    sc = Scenario.from_toml(args.scenario).with_overrides(base_seed=args.seed, n_drops=args.drops)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    header = sc.header_lines()
    jobs = max(1, args.jobs)

    def emit(suffix, rows, extra_header=()):
        path = out_dir / f"{sc.name}_{suffix}.csv"
        write_table_csv(path, rows, list(header) + list(extra_header))
        print(path)

    if sc.experiment == "single-run":
        emit("single_run", single_run_rows(sc, jobs=jobs))
    elif sc.experiment == "density-sweep":
        emit("density_sweep", run_density_sweep(sc, jobs=jobs))
    elif sc.experiment == "freq-density-sweep":
        emit("freq_density_sweep", run_freq_density_sweep(sc, jobs=jobs))
    elif sc.experiment == "interference":
        emit("interference", run_interference(sc, jobs=jobs))
    elif sc.experiment == "papr":
        result = run_papr(sc, jobs=jobs)
        emit("papr_ccdf", result["ccdf"])
        emit("papr_summary", result["summary"])
    elif sc.experiment == "multi-trp":
        emit("multi_trp", run_multi_trp(sc, jobs=jobs))
    else:  # unreachable: Scenario validates the experiment name
        raise ConfigError(f"unknown experiment '{sc.experiment}'")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "psd":
            return _cmd_psd(args)
        return _cmd_run(args)
    except (ConfigError, FileNotFoundError) as exc:
        print(f"simctl: error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"simctl: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
