"""Command-line interface: render figures from harness output files."""

from __future__ import annotations

import argparse
import sys

from .core import PlotSpec, plot_scaling, plot_success_heatmap


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plotkit", description="Plot unitomo results files.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("scaling", "log-log query-scaling curves with fitted slopes"),
        ("heatmap", "success-rate heatmap over the (d, eps) grid"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("csv", help="results.csv written by the harness")
        p.add_argument("--experiment", required=True, help="experiment name to filter on")
        p.add_argument("--out", required=True, help="output image path (svg/png/pdf)")
        p.add_argument("--summary", help="summary.json path (default: next to the csv)")
        p.add_argument("--linear", action="store_true", help="linear axes instead of log-log")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    spec = PlotSpec(
        csv_path=args.csv,
        experiment=args.experiment,
        out_path=args.out,
        loglog=not args.linear,
        summary_path=args.summary,
    )
    if args.command == "scaling":
        path = plot_scaling(spec)
    else:
        path = plot_success_heatmap(spec)
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
