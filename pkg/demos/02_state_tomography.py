#!/usr/bin/env python3
"""Pure-state tomography: infidelity against the sample budget.

The uniform-POVM estimator reaches infidelity eps0 with about d/eps0
measurements. This script sweeps the infidelity target, runs a batch of
seeded trials at each point, and prints the observed scaling next to the
query ledger.
"""

import numpy as np

from unitomo import PatternPrep, QueryOracle, estimate_state, haar_random

d = 4
print(f"dimension d={d}; target is 1 - |<z|estimate>|^2 <= eps0\n")
print(f"{'eps0':>8s} {'samples':>9s} {'median infid':>13s} {'p90 infid':>10s} {'hits':>6s}")
for eps0 in (0.2, 0.1, 0.05, 0.02):
    infids = []
    samples = None
    for seed in range(40):
        rng = np.random.default_rng(seed)
        z = haar_random(d, rng)
        oracle = QueryOracle(z, rng)
        prep = PatternPrep(v0=np.eye(d, dtype=complex), v1=np.eye(d, dtype=complex))
        est = estimate_state(prep, oracle, eps0, rng)
        samples = est.samples_used
        infids.append(1 - abs(np.vdot(z[:, 0], est.vector)) ** 2)
    infids = np.array(infids)
    hits = int((infids <= eps0).sum())
    print(
        f"{eps0:8.3f} {samples:9d} {np.median(infids):13.5f} "
        f"{np.quantile(infids, 0.9):10.5f} {hits:4d}/40"
    )

print("\nHalving eps0 doubles the sample bill; the achieved infidelity tracks it.")
