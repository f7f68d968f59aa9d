#!/usr/bin/env python3
"""Hard instances: reflection nets, the fractional-query gadget, and
identification.

A packing net of reflections raised to a small fractional power alpha is a
family of channels that are alpha-close to the identity yet pairwise
distinguishable -- the geometry behind query lower bounds. The one-qubit
gadget shows how a single controlled reflection simulates a fractional
power under postselection, and the binomial bound caps any identification
strategy.
"""

import numpy as np

from unitomo import (
    QueryOracle,
    ReflectionNet,
    build_net,
    diamond_norm,
    frac_reflection,
    gadget_amplitude,
    gadget_apply,
    haar_random,
    identification_bound,
    identify_via_powering,
    sample_reflection,
)
from unitomo.constants import BOOTSTRAP_BASE
from unitomo.harness import make_real_base

rng = np.random.default_rng(21)

print("— greedy packing: 20 reflections in U(4), pairwise diamond norm >= 1/4")
net4 = build_net(4, target_sep=0.25, target_n=20, max_attempts=10_000, rng=rng)
pair = [
    diamond_norm(net4.elements[i], net4.elements[j])
    for i in range(len(net4))
    for j in range(i + 1, len(net4))
]
print(f"  built {len(net4)} elements; min pairwise diamond norm {min(pair):.3f}\n")

print("— fractional-query gadget on a random reflection")
r = sample_reflection(3, rng)
psi = haar_random(3, rng)[:, 0]
alpha = 0.23
res = gadget_apply(r, alpha, +1, psi)
target = gadget_amplitude(alpha, +1) * (frac_reflection(r, alpha) @ psi)
print(f"  postselected branch vs nu * R^alpha psi: error {np.linalg.norm(res.nu * res.postselected - target):.2e}")
print(f"  postselection amplitude |nu| = {abs(res.nu):.4f} "
      f"(>= exp(-alpha pi/2) = {np.exp(-alpha * np.pi / 2):.4f})\n")

print("— identification bound (1/N) binom(Q + d^2 - 1, Q), d=2, N=1000")
for q in (0, 1, 2, 4, 8, 16):
    print(f"  Q={q:3d}: success probability <= {identification_bound(q, 2, 1000):.4f}")

print("\n— identify a Pauli from queries to its fractional power (d=2, eps=0.05)")
paulis = [
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
]
net = ReflectionNet(elements=paulis, separation=0.25)
base = make_real_base(BOOTSTRAP_BASE)
hits = 0
for seed in range(10):
    gen = np.random.default_rng(seed)
    truth = int(gen.integers(3))
    z = frac_reflection(net.elements[truth], 0.5)
    oracle = QueryOracle(z, gen)
    out = identify_via_powering(oracle, net, 0.05, 0.1, base, gen)
    hits += out.index == truth
print(f"  correct identification in {hits}/10 trials")
