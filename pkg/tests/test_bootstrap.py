import numpy as np
import pytest

from unitomo import (
    InsufficientDataError,
    QueryOracle,
    bootstrap,
    expm,
    haar_random,
    heisenberg_slope,
    lie_dist,
)
from unitomo.constants import DEFAULT
from unitomo.harness import make_real_base


def worst_case_generator(d, rng, norm):
    """Antihermitian direction with spectrum exactly {+norm, -norm}."""
    signs = np.concatenate([np.ones(d - d // 2), -np.ones(d // 2)])
    basis = haar_random(d, rng)
    return basis @ np.diag(1j * norm * signs) @ basis.conj().T


def exact_base(z):
    def base(oracle, channel, eta_j, rng):
        return channel.true_matrix(z)

    return base


def adversarial_base(z, magnitude=1.0 / 200.0):
    def base(oracle, channel, eta_j, rng):
        w = channel.true_matrix(z)
        return expm(worst_case_generator(w.shape[0], rng, magnitude)) @ w

    return base


def failing_at(z, f, magnitude=1.0 / 200.0):
    def base(oracle, channel, eta_j, rng):
        if channel.p == 2**f:
            return haar_random(w_dim(channel), rng)
        w = channel.true_matrix(z)
        return expm(worst_case_generator(w.shape[0], rng, magnitude)) @ w

    def w_dim(channel):
        return channel.dim

    return base


def test_noiseless_mock_fixed_point(rng):
    z = haar_random(2, rng)
    oracle = QueryOracle(z, rng)
    est, trace = bootstrap(oracle, 0.02, 0.1, exact_base(z), rng)
    assert lie_dist(z, est) <= 1e-9
    assert trace.final is est or np.allclose(trace.final, est)


def test_trace_schedule_invariants(rng):
    z = haar_random(2, rng)
    eps, eta = 0.013, 0.2
    oracle = QueryOracle(z, rng)
    _, trace = bootstrap(oracle, eps, eta, exact_base(z), rng)
    t = int(np.ceil(np.log2(1 / eps)))
    assert trace.t_final == t
    assert len(trace.iterates) == t + 1
    for j, it in enumerate(trace.iterates):
        assert it.j == j
        assert it.p == 2**j
        assert it.eta_j == pytest.approx(eta * 8.0 ** (j - t - 1))


def test_adversarial_mock_error_bounds(rng):
    # worst-case 1/200 perturbations: final error below 2^(-T-4), and the
    # whole error recursion delta_{k+1} < 2^(-k-4) holds along the way
    for eps in (0.05, 0.02):
        t = int(np.ceil(np.log2(1 / eps)))
        for seed in range(30):
            gen = np.random.default_rng(1000 + seed)
            z = haar_random(2, gen)
            oracle = QueryOracle(z, gen)
            est, trace = bootstrap(oracle, eps, 0.1, adversarial_base(z), gen)
            assert lie_dist(z, est) <= 2.0 ** (-t - 4)
            for it in trace.iterates:
                delta = lie_dist(z, it.estimate_after)
                assert delta < 2.0 ** (-it.j - 4)


def test_residual_containment(rng):
    # powered residuals stay well inside the principal branch: p_j delta_j < 1/16
    for seed in range(20):
        gen = np.random.default_rng(2000 + seed)
        z = haar_random(2, gen)
        oracle = QueryOracle(z, gen)
        _, trace = bootstrap(oracle, 0.02, 0.1, adversarial_base(z), gen)
        prev = np.eye(2, dtype=complex)
        for it in trace.iterates:
            if it.j >= 1:  # iteration 0 sees the raw Z, which is arbitrary
                residual_power = np.linalg.matrix_power(z @ prev.conj().T, it.p)
                assert lie_dist(residual_power, np.eye(2)) < 1.0 / 16.0
            prev = it.estimate_after


def test_graceful_failure(rng):
    eps = 0.02
    t = int(np.ceil(np.log2(1 / eps)))
    for f in range(t + 1):
        errs = []
        for seed in range(15):
            gen = np.random.default_rng(3000 + 100 * f + seed)
            z = haar_random(2, gen)
            oracle = QueryOracle(z, gen)
            est, _ = bootstrap(oracle, eps, 0.1, failing_at(z, f), gen)
            errs.append(lie_dist(z, est))
        assert max(errs) <= 2.0 ** (2 - f)


def test_expected_square_bound(rng):
    # base fails with probability eta_j (returning a Haar matrix), succeeds
    # with the worst-case perturbation otherwise
    eps, eta = 0.05, 0.1

    def flaky(z):
        inner = adversarial_base(z)

        def base(oracle, channel, eta_j, gen):
            if gen.random() < eta_j:
                return haar_random(channel.dim, gen)
            return inner(oracle, channel, eta_j, gen)

        return base

    sq = []
    for seed in range(200):
        gen = np.random.default_rng(4000 + seed)
        z = haar_random(2, gen)
        oracle = QueryOracle(z, gen)
        est, _ = bootstrap(oracle, eps, eta, flaky(z), gen)
        sq.append(lie_dist(z, est) ** 2)
    assert np.mean(sq) <= (1 + 32 * eta) * eps**2


def test_query_ledger_identity(rng):
    # measured total equals the sum over iterations of p_j times the base's
    # own per-call query count
    consts = DEFAULT.with_overrides(boost_ln_mult=0.25, c_state=0.05, base_eps=0.2)
    base = make_real_base(consts)
    calls = []

    def counting_base(oracle, channel, eta_j, gen):
        before = oracle.queries_used()
        out = base(oracle, channel, eta_j, gen)
        calls.append((channel.p, oracle.queries_used() - before))
        return out

    gen = np.random.default_rng(7)
    z = haar_random(2, gen)
    oracle = QueryOracle(z, gen)
    bootstrap(oracle, 0.05, 0.1, counting_base, gen)
    assert oracle.queries_used() == sum(spent for _, spent in calls)
    for p, spent in calls:
        assert spent % p == 0


def test_heisenberg_slope_planted_laws():
    eps_grid = [0.1, 0.05, 0.02, 0.01]
    recs = [(e, 1000.0 / e) for e in eps_grid for _ in range(5)]
    assert heisenberg_slope(recs) == pytest.approx(1.0, abs=1e-9)
    recs = [(e, 1000.0 / e**2) for e in eps_grid for _ in range(5)]
    assert heisenberg_slope(recs) == pytest.approx(2.0, abs=1e-9)


def test_heisenberg_slope_insufficient_data():
    with pytest.raises(InsufficientDataError):
        heisenberg_slope([(0.1, 10.0), (0.05, 20.0)])


def test_real_base_single_trial(rng):
    from unitomo.constants import BOOTSTRAP_BASE

    gen = np.random.default_rng(42)
    z = haar_random(2, gen)
    oracle = QueryOracle(z, gen)
    est, trace = bootstrap(oracle, 0.05, 0.1, make_real_base(BOOTSTRAP_BASE), gen)
    assert lie_dist(z, est) <= 0.05
