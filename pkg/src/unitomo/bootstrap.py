"""Iterative precision refinement with Heisenberg (1/eps) query scaling.

A constant-accuracy estimator is enough to reach accuracy eps: keep a
running estimate V_j, ask the base estimator for the 2^j-th power of the
residual Z V_j^dag (powering amplifies the remaining error to constant
size, where the base can see it), take the principal 2^j-th root of the
answer, and fold it back in. Query cost doubles per iteration while the
error halves, so the total is O(Q_base / eps) instead of O(Q_base / eps^2).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import ceil, log2

import numpy as np

from .linalg import frac_power
from .oracle import QueryOracle
from .process_tomography import ChannelSpec

__all__ = [
    "InsufficientDataError",
    "BootstrapIterate",
    "BootstrapTrace",
    "bootstrap",
    "heisenberg_slope",
]


class InsufficientDataError(ValueError):
    """Not enough distinct accuracy values to fit a scaling slope."""


@dataclass
class BootstrapIterate:
    """One refinement step: inputs, base output, and updated estimate."""

    j: int
    p: int
    eta_j: float
    base_output: np.ndarray
    estimate_after: np.ndarray
    queries_at_step: int


@dataclass
class BootstrapTrace:
    """Full refinement history; ``iterates`` has length T + 1."""

    t_final: int
    iterates: list[BootstrapIterate] = field(default_factory=list)
    final: np.ndarray | None = None


def bootstrap(
    oracle: QueryOracle,
    eps: float,
    eta: float,
    base,
    rng: np.random.Generator,
) -> tuple[np.ndarray, BootstrapTrace]:
    """Refine a constant-error base estimator down to accuracy ``eps``.

    ``base(oracle, channel, eta_j, rng) -> unitary`` must estimate the
    channel described by ``channel`` to constant projective accuracy
    (geodesic distance below 1/200) with failure probability at most
    ``eta_j``. Iteration j runs the base on the residual power
    ``(Z V_j^dag)^(2^j)`` with ``eta_j = eta * 8^(j - T - 1)`` and updates
    ``V_{j+1} = base_output^(1/2^j) V_j``.

    Raises ``BranchCutError`` if a base output has an eigenvalue at -1 (the
    trial should then be recorded as failed, not retried).
    """
    if not 0 < eps < 1 or not 0 < eta < 1:
        raise ValueError("eps and eta must lie in (0, 1)")
    d = oracle.dim
    t_final = ceil(log2(1.0 / eps))
    v = np.eye(d, dtype=complex)
    trace = BootstrapTrace(t_final=t_final)
    for j in range(t_final + 1):
        p = 2**j
        eta_j = eta * 8.0 ** (j - t_final - 1)
        channel = ChannelSpec(dim=d, v1=v.conj().T, p=p)
        u_j = base(oracle, channel, eta_j, rng)
        root = frac_power(u_j, 1.0 / p) if p > 1 else u_j
        v = root @ v
        trace.iterates.append(
            BootstrapIterate(
                j=j,
                p=p,
                eta_j=eta_j,
                base_output=u_j,
                estimate_after=v,
                queries_at_step=oracle.queries_used(),
            )
        )
    trace.final = v
    return v, trace


def heisenberg_slope(records) -> float:
    """Least-squares slope of log(median queries) against log(1/eps).

    ``records`` is an iterable with ``eps`` and ``queries`` attributes (or
    (eps, queries) pairs). Queries are aggregated to a median per distinct
    eps before fitting; at least 3 distinct eps values are required.
    """
    eps_vals: dict[float, list[float]] = {}
    for rec in records:
        if hasattr(rec, "eps"):
            e, q = float(rec.eps), float(rec.queries)
        else:
            e, q = float(rec[0]), float(rec[1])
        eps_vals.setdefault(e, []).append(q)
    if len(eps_vals) < 3:
        raise InsufficientDataError(
            f"need >= 3 distinct eps values for a slope, got {len(eps_vals)}"
        )
    x = np.log([1.0 / e for e in eps_vals])
    y = np.log([float(np.median(q)) for q in eps_vals.values()])
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)
