import itertools

import numpy as np
import pytest

from unitomo import (
    PatternPrep,
    QueryOracle,
    collect_samples,
    estimate_state,
    haar_random,
    povm_inversion,
    round_to_state,
    simplex_project,
)
from unitomo.constants import DEFAULT
from unitomo.state_tomography import PovmSampleSet


def eye(d):
    return np.eye(d, dtype=complex)


def identity_prep(d):
    return PatternPrep(v0=eye(d), v1=eye(d), p=1)


# ------------------------------------------------------------ sampling


def test_collect_samples_accounting(rng):
    oracle = QueryOracle(haar_random(2, rng), rng)
    prep = PatternPrep(v0=eye(2), v1=eye(2), p=3)
    samples = collect_samples(prep, oracle, 1, rng)
    assert samples.count == 1
    assert oracle.queries_used() == 3
    with pytest.raises(ValueError):
        collect_samples(prep, oracle, 0, rng)


def test_collect_samples_forced_identity_basis(rng):
    oracle = QueryOracle(eye(2), rng)  # prepared state is |0>
    forced = lambda r, n: np.broadcast_to(eye(2), (n, 2, 2)).copy()
    samples = collect_samples(identity_prep(2), oracle, 50, rng, basis_fn=forced)
    assert np.all(samples.indices == 0)


def test_collect_samples_first_moment(rng):
    z = haar_random(2, np.random.default_rng(17))
    oracle = QueryOracle(z, np.random.default_rng(3))
    samples = collect_samples(identity_prep(2), oracle, 10_000, rng)
    w = samples.outcome_vectors()
    overlap = np.abs(w @ z[:, 0].conj()) ** 2
    assert abs(overlap.mean() - 2.0 / 3.0) <= 0.02


# ------------------------------------------------------------ estimator


def test_inversion_single_sample():
    samples = PovmSampleSet(bases=np.eye(2, dtype=complex)[None], indices=np.array([0]))
    out = povm_inversion(samples)
    assert np.allclose(out, np.diag([2.0, -1.0]))


def test_inversion_uniform_complete_basis():
    bases = np.stack([np.eye(2, dtype=complex)] * 2)
    samples = PovmSampleSet(bases=bases, indices=np.array([0, 1]))
    out = povm_inversion(samples)
    assert np.allclose(out, np.diag([0.5, 0.5]))


def test_inversion_concentrates(rng):
    z = haar_random(2, np.random.default_rng(23))
    oracle = QueryOracle(z, np.random.default_rng(5))
    samples = collect_samples(identity_prep(2), oracle, 100_000, rng)
    est = povm_inversion(samples)
    target = np.outer(z[:, 0], z[:, 0].conj())
    assert np.linalg.norm(est - target, 2) <= 0.05


def test_inversion_unbiased_entrywise(rng):
    # mean of the estimator matches |z><z| entrywise within 3 sigma
    d, m = 3, 100_000
    z = haar_random(d, np.random.default_rng(29))
    oracle = QueryOracle(z, np.random.default_rng(7))
    samples = collect_samples(identity_prep(d), oracle, m, rng)
    est = povm_inversion(samples)
    target = np.outer(z[:, 0], z[:, 0].conj())
    # entry variance of (d+1)|v><v| is bounded by (d+1)^2; use that scale
    sigma = (d + 1) / np.sqrt(m)
    assert np.abs(est - target).max() <= 3 * sigma


# ------------------------------------------------------- simplex rounding


def test_simplex_projection_example():
    assert np.allclose(simplex_project(np.array([2.0, -1.0])), [1.0, 0.0])


def brute_force_simplex(v):
    # exact active-set enumeration: for each support, the equality-constrained
    # minimizer is v_S - mean offset; keep the feasible one with smallest cost
    best, best_cost = None, np.inf
    n = len(v)
    for mask in itertools.product([0, 1], repeat=n):
        support = [i for i in range(n) if mask[i]]
        if not support:
            continue
        theta = (sum(v[i] for i in support) - 1.0) / len(support)
        x = np.zeros(n)
        feasible = True
        for i in support:
            x[i] = v[i] - theta
            if x[i] < -1e-12:
                feasible = False
                break
        if not feasible:
            continue
        cost = np.sum((x - v) ** 2)
        if cost < best_cost - 1e-15:
            best, best_cost = x, cost
    return best


def test_simplex_projection_vs_bruteforce(rng):
    for _ in range(50):
        v = rng.normal(size=5) * 2
        fast = simplex_project(v)
        slow = brute_force_simplex(v)
        assert np.abs(fast - slow).max() <= 1e-9
        assert fast.sum() == pytest.approx(1.0)
        assert np.all(fast >= 0)


def test_round_to_state_projects_and_extracts():
    est = round_to_state(np.diag([2.0, -1.0]))
    assert abs(abs(est.vector[0]) - 1.0) <= 1e-12


def test_round_to_state_pure_input(rng):
    psi = haar_random(3, rng)[:, 0]
    est = round_to_state(np.outer(psi, psi.conj()))
    assert abs(abs(np.vdot(psi, est.vector)) - 1.0) <= 1e-10


def test_round_to_state_ordering():
    est = round_to_state(np.diag([0.6, 0.4]))
    assert abs(est.vector[0]) == pytest.approx(1.0)
    assert not est.degenerate_top


def test_round_to_state_degenerate_flag():
    est = round_to_state(np.diag([0.5, 0.5]))
    assert est.degenerate_top
    assert abs(est.vector[0]) == pytest.approx(1.0)  # lowest eigenindex wins


def test_round_phase_convention(rng):
    psi = haar_random(4, rng)[:, 0]
    est = round_to_state(np.outer(psi, psi.conj()))
    pivot = int(np.argmax(np.abs(est.vector)))
    assert est.vector[pivot].imag == pytest.approx(0.0, abs=1e-12)
    assert est.vector[pivot].real > 0


# ---------------------------------------------------------- end to end


def test_estimate_state_d1(rng):
    oracle = QueryOracle(np.array([[np.exp(0.7j)]]), rng)
    est = estimate_state(identity_prep(1), oracle, 0.05, rng)
    assert abs(abs(est.vector[0]) - 1.0) <= 1e-10


def test_estimate_state_statistical(rng):
    hits = 0
    for seed in range(100):
        gen = np.random.default_rng(seed)
        z = haar_random(2, gen)
        oracle = QueryOracle(z, gen)
        est = estimate_state(identity_prep(2), oracle, 0.05, gen)
        infid = 1 - abs(np.vdot(z[:, 0], est.vector)) ** 2
        hits += infid <= 0.05
    assert hits >= 90


def test_estimate_state_ledger(rng):
    d, eps0 = 4, 0.02
    oracle = QueryOracle(haar_random(d, rng), rng)
    est = estimate_state(identity_prep(d), oracle, eps0, rng)
    expected = int(np.ceil(DEFAULT.c_state * d / eps0))
    assert est.samples_used == expected
    assert oracle.queries_used() == expected


def test_error_direction_isotropy(rng):
    # residual error component orthogonal to |z> should be Haar on the
    # orthocomplement: its covariance is proportional to the identity there
    d = 3
    z = np.eye(d, dtype=complex)
    cov = np.zeros((d - 1, d - 1), dtype=complex)
    trials = 2000
    count = 0
    for seed in range(trials):
        gen = np.random.default_rng(10_000 + seed)
        oracle = QueryOracle(z, gen)
        est = estimate_state(identity_prep(d), oracle, 0.2, gen).vector
        resid = est - np.vdot(z[:, 0], est) * z[:, 0]
        nrm = np.linalg.norm(resid)
        if nrm < 1e-9:
            continue
        w = resid[1:] / nrm
        cov += np.outer(w, w.conj())
        count += 1
    cov /= count
    target = np.eye(d - 1) / (d - 1)
    assert np.abs(cov - target).max() <= 0.1 * np.abs(target).max()


def test_sample_count_monotonicity(rng):
    meds = []
    for eps0 in (0.2, 0.1):  # doubling m via halving eps0
        infids = []
        for seed in range(50):
            gen = np.random.default_rng(777 + seed)
            z = haar_random(2, gen)
            oracle = QueryOracle(z, gen)
            est = estimate_state(identity_prep(2), oracle, eps0, gen)
            infids.append(1 - abs(np.vdot(z[:, 0], est.vector)) ** 2)
        meds.append(np.median(infids))
    assert meds[1] <= meds[0]
