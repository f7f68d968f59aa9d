"""Command-line entry point for the experiment harness."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .harness import (
    EXPERIMENTS,
    ExperimentConfig,
    read_results_csv,
    run_experiment,
    summarize,
)

_SUBCOMMANDS = sorted(EXPERIMENTS) + ["scaling"]


def _parse_int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x]


def _parse_float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="unitomo",
        description="Run reproducible unitary-channel estimation experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _SUBCOMMANDS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", type=Path, help="JSON config file (flags override it)")
        p.add_argument("--dim", type=_parse_int_list, help="comma list of dimensions")
        p.add_argument("--eps", type=_parse_float_list, help="comma list of accuracy targets")
        p.add_argument("--eta", type=float, help="failure-probability target")
        p.add_argument("--trials", type=int, help="trials per (d, eps) cell")
        p.add_argument("--seed", type=int, help="master seed")
        p.add_argument("--out", type=str, help="output directory for results.csv/summary.json")
        p.add_argument("--workers", type=int, help="concurrent trial workers")
    q = sub.add_parser("summarize", help="aggregate an existing results.csv")
    q.add_argument("csv", type=Path)
    q.add_argument("--out", type=str, help="directory for summary.json (default: alongside csv)")
    return parser


_FLAG_DEFAULTS = {
    "dims": [2],
    "eps": [0.1],
    "eta": 1.0 / 3.0,
    "trials": 10,
    "seed": 2024,
    "out": None,
    "workers": 1,
}


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    data: dict = {}
    if args.config is not None:
        data = json.loads(Path(args.config).read_text())
        if "experiment" in data and data["experiment"] != args.command:
            raise ValueError(
                f"config is for experiment {data['experiment']!r}, invoked as {args.command!r}"
            )
    data["experiment"] = args.command
    overrides = {
        "dims": args.dim,
        "eps": args.eps,
        "eta": args.eta,
        "trials": args.trials,
        "seed": args.seed,
        "out": args.out,
        "workers": args.workers,
    }
    for key, val in overrides.items():
        if val is not None:
            data[key] = val
    for key, default in _FLAG_DEFAULTS.items():
        data.setdefault(key, default)
    return ExperimentConfig.from_dict(data)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "summarize":
        records = read_results_csv(args.csv)
        summary = summarize(records)
        out_dir = Path(args.out) if args.out else Path(args.csv).parent
        out_dir.mkdir(parents=True, exist_ok=True)
        path = out_dir / "summary.json"
        path.write_text(json.dumps(summary, indent=2, sort_keys=True))
        print(f"wrote {path}")
        return 0
    config = config_from_args(args)
    records = run_experiment(config)
    by_cell: dict = {}
    for rec in records:
        key = (rec.experiment, rec.d, rec.eps)
        by_cell.setdefault(key, []).append(rec)
    for (experiment, d, eps), cell in sorted(by_cell.items()):
        rate = sum(r.success for r in cell) / len(cell)
        med_q = sorted(r.queries for r in cell)[len(cell) // 2]
        print(
            f"{experiment} d={d} eps={eps:g}: {len(cell)} trials, "
            f"success {rate:.2%}, median queries {med_q}"
        )
    if config.out:
        print(f"results written to {config.out}/results.csv")
    return 0


if __name__ == "__main__":
    sys.exit(main())
