"""Read harness result files and draw scaling figures.

The only inputs are the files the experiment harness writes: a
``results.csv`` with the fixed header and, optionally, a ``summary.json``
with per-(experiment, d) fitted slopes. All numbers shown on a figure are
recomputed here from the CSV and cross-checked against the summary when
one is available; a disagreement beyond 1e-6 is treated as corrupt input.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

EXPECTED_HEADER = [
    "experiment",
    "d",
    "eps",
    "eta",
    "seed",
    "queries",
    "dist_diamond",
    "dist_lie",
    "pudist",
    "ent_infid",
    "success",
    "wall_ms",
]

__all__ = [
    "MissingColumnError",
    "InsufficientPointsError",
    "PlotSpec",
    "load_results",
    "fit_loglog_slope",
    "plot_scaling",
    "plot_success_heatmap",
]


class MissingColumnError(ValueError):
    """The CSV lacks a column the plot needs."""


class InsufficientPointsError(ValueError):
    """Fewer than three distinct accuracy values for a slope fit."""


@dataclass
class PlotSpec:
    """What to draw and where to put it."""

    csv_path: str
    experiment: str
    out_path: str
    group_key: str = "d"
    loglog: bool = True
    summary_path: str | None = None  # default: summary.json beside the CSV


def load_results(path) -> list[dict]:
    """Parse a results CSV into typed row dicts, validating the header."""
    with open(path, newline="") as handle:
        reader = csv.DictReader(handle)
        missing = set(EXPECTED_HEADER) - set(reader.fieldnames or [])
        if missing:
            raise MissingColumnError(f"results file lacks columns: {sorted(missing)}")
        rows = []
        for raw in reader:
            rows.append(
                {
                    "experiment": raw["experiment"],
                    "d": int(raw["d"]),
                    "eps": float(raw["eps"]),
                    "queries": int(raw["queries"]),
                    "success": raw["success"] == "true",
                }
            )
    return rows


def fit_loglog_slope(rows: list[dict]) -> float:
    """OLS slope of log(median queries) against log(1/eps).

    Matches the harness's own fit: queries are reduced to a median per
    distinct eps before fitting.
    """
    cells: dict[float, list[int]] = {}
    for row in rows:
        cells.setdefault(row["eps"], []).append(row["queries"])
    if len(cells) < 3:
        raise InsufficientPointsError(
            f"need >= 3 distinct eps values for a slope, got {len(cells)}"
        )
    x = np.log([1.0 / e for e in cells])
    y = np.log([float(np.median(q)) for q in cells.values()])
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def _summary_slope(spec: PlotSpec, d: int) -> float | None:
    path = Path(spec.summary_path) if spec.summary_path else Path(spec.csv_path).parent / "summary.json"
    if not path.exists():
        return None
    summary = json.loads(path.read_text())
    try:
        return float(summary[spec.experiment][str(d)]["slope"])
    except KeyError:
        return None


def plot_scaling(spec: PlotSpec) -> str:
    """Draw median queries vs 1/eps per dimension, annotated with the slope.

    Returns the output path. Raises :class:`InsufficientPointsError` when
    the experiment filter leaves fewer than three eps values for every
    group, and ``ValueError`` if a recomputed slope disagrees with the
    summary file by more than 1e-6.
    """
    rows = [r for r in load_results(spec.csv_path) if r["experiment"] == spec.experiment]
    groups: dict[int, list[dict]] = {}
    for row in rows:
        groups.setdefault(row[spec.group_key], []).append(row)
    if not groups:
        raise InsufficientPointsError(
            f"no rows for experiment {spec.experiment!r} in {spec.csv_path}"
        )
    fig, ax = plt.subplots(figsize=(6, 4.5))
    drew = 0
    for d, group in sorted(groups.items()):
        cells: dict[float, list[int]] = {}
        for row in group:
            cells.setdefault(row["eps"], []).append(row["queries"])
        if len(cells) < 3:
            continue
        slope = fit_loglog_slope(group)
        reference = _summary_slope(spec, d)
        if reference is not None and abs(reference - slope) > 1e-6:
            raise ValueError(
                f"slope mismatch for d={d}: csv fit {slope!r} vs summary {reference!r}"
            )
        shown = reference if reference is not None else slope
        inv_eps = np.array(sorted(1.0 / e for e in cells))
        med = np.array([float(np.median(cells[1.0 / x])) for x in inv_eps])
        ax.plot(inv_eps, med, "o-", label=f"d={d} (slope {shown:.2f})")
        drew += 1
    if drew == 0:
        raise InsufficientPointsError(
            f"every group for {spec.experiment!r} has fewer than 3 eps values"
        )
    if spec.loglog:
        ax.set_xscale("log")
        ax.set_yscale("log")
    ax.set_xlabel("1 / eps")
    ax.set_ylabel("median queries")
    ax.set_title(f"{spec.experiment}: query scaling")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(spec.out_path)
    plt.close(fig)
    return spec.out_path


def plot_success_heatmap(spec: PlotSpec) -> str:
    """Success-rate heatmap over the (d, eps) grid for one experiment."""
    rows = [r for r in load_results(spec.csv_path) if r["experiment"] == spec.experiment]
    if not rows:
        raise InsufficientPointsError(
            f"no rows for experiment {spec.experiment!r} in {spec.csv_path}"
        )
    dims = sorted({r["d"] for r in rows})
    eps_vals = sorted({r["eps"] for r in rows}, reverse=True)
    grid = np.full((len(dims), len(eps_vals)), np.nan)
    for i, d in enumerate(dims):
        for j, eps in enumerate(eps_vals):
            cell = [r["success"] for r in rows if r["d"] == d and r["eps"] == eps]
            if cell:
                grid[i, j] = float(np.mean(cell))
    fig, ax = plt.subplots(figsize=(6, 4.5))
    im = ax.imshow(grid, vmin=0.0, vmax=1.0, cmap="viridis", aspect="auto")
    ax.set_xticks(range(len(eps_vals)), [f"{e:g}" for e in eps_vals])
    ax.set_yticks(range(len(dims)), [str(d) for d in dims])
    ax.set_xlabel("eps")
    ax.set_ylabel("d")
    ax.set_title(f"{spec.experiment}: success rate")
    for i in range(len(dims)):
        for j in range(len(eps_vals)):
            if not np.isnan(grid[i, j]):
                ax.text(j, i, f"{grid[i, j]:.2f}", ha="center", va="center", color="w")
    fig.colorbar(im, ax=ax)
    fig.tight_layout()
    fig.savefig(spec.out_path)
    plt.close(fig)
    return spec.out_path
