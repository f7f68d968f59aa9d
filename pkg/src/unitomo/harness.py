"""Reproducible experiment harness: trial runners, records, CSV/JSON output.

Every trial derives its own RNG from (master seed, dimension, eps, trial
index), owns its oracle, and produces one :class:`ExperimentRecord`;
failures are data (``success=false``), never crashes. Records are sorted
by key before writing so execution order (including multiprocess
execution) cannot affect the output files.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import floor, pi
from pathlib import Path

import numpy as np

from . import hard_instances
from .bootstrap import bootstrap, heisenberg_slope
from .constants import BOOTSTRAP_BASE, DEFAULT, SCALING_CONTROL, TomographyConstants
from .eigenphases import EigenphaseSimulator, estimate_eigenphases
from .linalg import BranchCutError, eig_unitary, haar_random
from .metrics import diamond_norm, ent_infidelity, hausdorff_phase_dist, lie_dist, pudist
from .oracle import BudgetExceededError, QueryOracle
from .process_tomography import ChannelSpec, base_estimate
from .state_tomography import PatternPrep, estimate_state

__all__ = [
    "CSV_HEADER",
    "ExperimentRecord",
    "ExperimentConfig",
    "EXPERIMENTS",
    "make_real_base",
    "run_experiment",
    "summarize",
    "write_results_csv",
    "read_results_csv",
]

CSV_HEADER = "experiment,d,eps,eta,seed,queries,dist_diamond,dist_lie,pudist,ent_infid,success,wall_ms"


@dataclass
class ExperimentRecord:
    """One trial's outcome."""

    experiment: str
    d: int
    eps: float
    eta: float
    seed: int
    queries: int
    dist_diamond: float
    dist_lie: float
    pudist: float
    ent_infid: float
    success: bool
    wall_ms: int

    def csv_row(self) -> str:
        return ",".join(
            [
                self.experiment,
                str(self.d),
                f"{self.eps:.12g}",
                f"{self.eta:.12g}",
                str(self.seed),
                str(self.queries),
                f"{self.dist_diamond:.12g}",
                f"{self.dist_lie:.12g}",
                f"{self.pudist:.12g}",
                f"{self.ent_infid:.12g}",
                "true" if self.success else "false",
                str(self.wall_ms),
            ]
        )


_CONFIG_KEYS = {
    "experiment",
    "dims",
    "eps",
    "eta",
    "trials",
    "seed",
    "out",
    "workers",
    "constants",
}

_CONSTANT_KEYS = set(TomographyConstants.__dataclass_fields__.keys())


@dataclass
class ExperimentConfig:
    """Declarative description of one experiment sweep."""

    experiment: str
    dims: list[int]
    eps: list[float]
    eta: float = 1.0 / 3.0
    trials: int = 10
    seed: int = 2024
    out: str | None = None
    workers: int = 1
    constants: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS and self.experiment != "scaling":
            raise ValueError(f"unknown experiment {self.experiment!r}")
        if not self.dims or not self.eps:
            raise ValueError("dimension and eps lists must be nonempty")
        unknown = set(self.constants) - _CONSTANT_KEYS
        if unknown:
            raise ValueError(f"unknown constant overrides: {sorted(unknown)}")
        for key, val in self.constants.items():
            if key != "use_hadamard_pow2" and val <= 0 and key != "boost_ln_mult":
                raise ValueError(f"constant {key} must be positive")

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        unknown = set(data) - _CONFIG_KEYS
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


def derive_trial_seed(master: int, d: int, eps: float, trial: int) -> tuple[int, np.random.Generator]:
    """Counter-based per-trial seed derivation; parallel-safe and stable."""
    seq = np.random.SeedSequence([int(master), int(d), int(round(eps * 1e9)), int(trial)])
    seed64 = int(seq.generate_state(1, dtype=np.uint64)[0])
    return seed64, np.random.default_rng(seq)


def make_real_base(constants: TomographyConstants):
    """Wrap the process-tomography base for use inside the refinement loop.

    The wrapped callable estimates the requested residual channel at the
    constant accuracy target ``constants.base_eps`` (phase-minimized
    operator norm) with per-call confidence ``eta_j``.
    """

    def base(oracle: QueryOracle, channel: ChannelSpec, eta_j: float, rng: np.random.Generator):
        return base_estimate(
            oracle, constants.base_eps, eta_j, rng, channel=channel, constants=constants
        )

    return base


@dataclass
class TrialResult:
    queries: int = 0
    dist_diamond: float = 0.0
    dist_lie: float = 0.0
    pudist: float = 0.0
    ent_infid: float = 0.0
    success: bool = False


def _distances(z: np.ndarray, est: np.ndarray) -> dict:
    return dict(
        dist_diamond=diamond_norm(z, est),
        dist_lie=lie_dist(z, est),
        pudist=pudist(z, est),
        ent_infid=ent_infidelity(z, est),
    )


def _trial_metrics_selftest(d, eps, eta, rng, constants) -> TrialResult:
    u = haar_random(d, rng)
    v = haar_random(d, rng)
    dn, pu, lie, fbar = diamond_norm(u, v), pudist(u, v), lie_dist(u, v), ent_infidelity(u, v)
    slack = 1e-9
    ok = (
        pu <= lie + slack
        and lie <= pi / 2 * pu + slack
        and dn / 2 <= pu + slack
        and pu <= dn + slack
        and 4 * fbar <= dn**2 + slack
        and dn**2 <= 2 * d * fbar + slack
    )
    return TrialResult(
        queries=0, dist_diamond=dn, dist_lie=lie, pudist=pu, ent_infid=fbar, success=bool(ok)
    )


def _trial_state_tomo(d, eps, eta, rng, constants) -> TrialResult:
    z = haar_random(d, rng)
    oracle = QueryOracle(z, rng)
    prep = PatternPrep(v0=np.eye(d, dtype=complex), v1=np.eye(d, dtype=complex), p=1)
    est = estimate_state(prep, oracle, eps, rng, constants=constants)
    target = z[:, 0]
    infid = 1.0 - abs(np.vdot(target, est.vector)) ** 2
    return TrialResult(
        queries=oracle.queries_used(), ent_infid=float(infid), success=bool(infid <= eps)
    )


def _trial_base_tomo(d, eps, eta, rng, constants) -> TrialResult:
    z = haar_random(d, rng)
    oracle = QueryOracle(z, rng)
    try:
        est = base_estimate(oracle, eps, eta, rng, constants=constants)
    except (BranchCutError, BudgetExceededError):
        return TrialResult(queries=oracle.queries_used(), **_WORST)
    dists = _distances(z, est)
    return TrialResult(
        queries=oracle.queries_used(), success=bool(dists["pudist"] <= eps), **dists
    )


def _trial_bootstrap(d, eps, eta, rng, constants) -> TrialResult:
    z = haar_random(d, rng)
    oracle = QueryOracle(z, rng)
    base = make_real_base(constants)
    try:
        est, _ = bootstrap(oracle, eps, eta, base, rng)
    except (BranchCutError, BudgetExceededError):
        return TrialResult(queries=oracle.queries_used(), **_WORST)
    dists = _distances(z, est)
    return TrialResult(
        queries=oracle.queries_used(), success=bool(dists["dist_lie"] <= eps), **dists
    )


def _trial_net_build(d, eps, eta, rng, constants) -> TrialResult:
    net = hard_instances.build_net(d, target_sep=0.25, target_n=20, max_attempts=10_000, rng=rng)
    return TrialResult(queries=0, success=net.complete)


def _trial_gadget_verify(d, eps, eta, rng, constants) -> TrialResult:
    r = hard_instances.sample_reflection(d, rng)
    alpha = float(rng.uniform(0.05, 1.0))
    sign = +1 if rng.random() < 0.5 else -1
    psi = haar_random(d, rng)[:, 0]
    res = hard_instances.gadget_apply(r, alpha, sign, psi)
    nu_expected = hard_instances.gadget_amplitude(alpha, sign)
    err = np.linalg.norm(res.nu * res.postselected - nu_expected * (hard_instances.frac_reflection(r, sign * alpha) @ psi))
    return TrialResult(queries=1, success=bool(err <= 1e-10))


def _trial_eigenphase(d, eps, eta, rng, constants) -> TrialResult:
    z = haar_random(d, rng)
    sim = EigenphaseSimulator(z, rng)
    est = estimate_eigenphases(sim, eps, rng, constants=constants)
    truth = np.mod(eig_unitary(z).phases, 2 * pi)
    dh = hausdorff_phase_dist(truth, est)
    return TrialResult(queries=sim.queries_used(), dist_lie=float(dh), success=bool(dh <= eps))


_PAULIS = [
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
]


def _trial_identify(d, eps, eta, rng, constants) -> TrialResult:
    if d == 2:
        net = hard_instances.ReflectionNet(elements=[p.copy() for p in _PAULIS], separation=0.25)
    else:
        net = hard_instances.build_net(d, 0.25, 8, 10_000, rng)
    truth = int(rng.integers(len(net)))
    alpha = 1.0 / floor(1.0 / (8.0 * eps))
    z = hard_instances.frac_reflection(net.elements[truth], alpha)
    oracle = QueryOracle(z, rng)
    base = make_real_base(constants)
    try:
        res = hard_instances.identify_via_powering(oracle, net, eps, eta, base, rng)
    except (BranchCutError, BudgetExceededError):
        return TrialResult(queries=oracle.queries_used(), **_WORST)
    return TrialResult(queries=oracle.queries_used(), success=bool(res.index == truth))


_WORST = dict(dist_diamond=2.0, dist_lie=pi, pudist=2.0, ent_infid=1.0, success=False)

EXPERIMENTS = {
    "metrics-selftest": (_trial_metrics_selftest, DEFAULT),
    "state-tomo": (_trial_state_tomo, DEFAULT),
    "base-tomo": (_trial_base_tomo, DEFAULT),
    "bootstrap": (_trial_bootstrap, BOOTSTRAP_BASE),
    "net-build": (_trial_net_build, DEFAULT),
    "gadget-verify": (_trial_gadget_verify, DEFAULT),
    "eigenphase": (_trial_eigenphase, DEFAULT),
    "identify": (_trial_identify, BOOTSTRAP_BASE),
}


def _run_one(args: tuple) -> ExperimentRecord:
    experiment, d, eps, eta, master, trial, overrides = args
    runner, profile = EXPERIMENTS[experiment]
    constants = profile.with_overrides(**overrides)
    seed64, rng = derive_trial_seed(master, d, eps, trial)
    start = time.perf_counter()
    try:
        result = runner(d, eps, eta, rng, constants)
    except Exception:
        result = TrialResult(**_WORST)
    wall_ms = int(round((time.perf_counter() - start) * 1000))
    return ExperimentRecord(
        experiment=experiment,
        d=d,
        eps=eps,
        eta=eta,
        seed=seed64,
        queries=result.queries,
        dist_diamond=result.dist_diamond,
        dist_lie=result.dist_lie,
        pudist=result.pudist,
        ent_infid=result.ent_infid,
        success=result.success,
        wall_ms=wall_ms,
    )


def _expand(config: ExperimentConfig) -> list[tuple]:
    if config.experiment == "scaling":
        jobs = []
        for name, profile_overrides in (
            ("bootstrap", {}),
            ("base-tomo", {"boost_ln_mult": SCALING_CONTROL.boost_ln_mult}),
        ):
            merged = dict(profile_overrides)
            merged.update(config.constants)
            for d in config.dims:
                for eps in config.eps:
                    for t in range(config.trials):
                        jobs.append((name, d, eps, config.eta, config.seed, t, merged))
        return jobs
    return [
        (config.experiment, d, eps, config.eta, config.seed, t, dict(config.constants))
        for d in config.dims
        for eps in config.eps
        for t in range(config.trials)
    ]


def run_experiment(config: ExperimentConfig) -> list[ExperimentRecord]:
    """Run every (d, eps, trial) cell and write results before returning."""
    jobs = _expand(config)
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            records = list(pool.map(_run_one, jobs, chunksize=1))
    else:
        records = [_run_one(job) for job in jobs]
    records.sort(key=lambda r: (r.experiment, r.d, r.eps, r.seed))
    if config.out is not None:
        out = Path(config.out)
        out.mkdir(parents=True, exist_ok=True)
        write_results_csv(records, out / "results.csv")
        (out / "summary.json").write_text(json.dumps(summarize(records), indent=2, sort_keys=True))
    return records


def write_results_csv(records: list[ExperimentRecord], path) -> None:
    lines = [CSV_HEADER] + [r.csv_row() for r in records]
    Path(path).write_text("\n".join(lines) + "\n")


def read_results_csv(path) -> list[ExperimentRecord]:
    lines = Path(path).read_text().strip().split("\n")
    if lines[0] != CSV_HEADER:
        raise ValueError(f"unexpected CSV header: {lines[0]!r}")
    records = []
    for line in lines[1:]:
        parts = line.split(",")
        records.append(
            ExperimentRecord(
                experiment=parts[0],
                d=int(parts[1]),
                eps=float(parts[2]),
                eta=float(parts[3]),
                seed=int(parts[4]),
                queries=int(parts[5]),
                dist_diamond=float(parts[6]),
                dist_lie=float(parts[7]),
                pudist=float(parts[8]),
                ent_infid=float(parts[9]),
                success=parts[10] == "true",
                wall_ms=int(parts[11]),
            )
        )
    return records


def summarize(records: list[ExperimentRecord]) -> dict:
    """Per-(experiment, d) aggregates: success rates, query medians, slopes."""
    if not records:
        raise ValueError("no records to summarize")
    groups: dict[tuple[str, int], list[ExperimentRecord]] = {}
    for rec in records:
        groups.setdefault((rec.experiment, rec.d), []).append(rec)
    summary: dict = {}
    for (experiment, d), group in sorted(groups.items()):
        cells = {}
        for rec in group:
            cells.setdefault(rec.eps, []).append(rec)
        per_eps = {
            f"{eps:.12g}": {
                "trials": len(cell),
                "success_rate": sum(r.success for r in cell) / len(cell),
                "median_queries": float(np.median([r.queries for r in cell])),
            }
            for eps, cell in sorted(cells.items())
        }
        entry = {"d": d, "experiment": experiment, "cells": per_eps}
        if len(cells) >= 3:
            entry["slope"] = heisenberg_slope(group)
        summary.setdefault(experiment, {})[str(d)] = entry
    return summary
