import numpy as np
import pytest

from unitomo import (
    BranchCutError,
    RankDeficiencyError,
    assert_unitary,
    eig_unitary,
    expm,
    frac_power,
    haar_batch,
    haar_random,
    op_norm,
    principal_log,
    project_to_unitary,
    random_generator,
)


def test_haar_d1_is_unit_phase(rng):
    u = haar_random(1, rng)
    assert abs(abs(u[0, 0]) - 1.0) <= 1e-12


def test_haar_output_unitary(rng):
    for _ in range(20):
        u = haar_random(4, rng)
        assert op_norm(u.conj().T @ u - np.eye(4)) <= 1e-10


def test_haar_first_moment_matches_analytic(rng):
    # E|<0|U|0>|^2 = 1/d for Haar U
    n = 100_000
    vals = np.abs(haar_batch(n, 2, rng)[:, 0, 0]) ** 2
    assert abs(vals.mean() - 0.5) <= 0.01
    m = 30_000
    single = np.array([abs(haar_random(2, rng)[0, 0]) ** 2 for _ in range(m)])
    assert abs(single.mean() - 0.5) <= 0.01


def test_haar_batch_matches_invariants(rng):
    for d in (1, 2, 3, 5):
        stack = haar_batch(50, d, rng)
        dev = np.abs(
            np.einsum("nij,nik->njk", stack.conj(), stack) - np.eye(d)
        ).max()
        assert dev <= 1e-10


def test_eig_unitary_diagonal_input(rng):
    eig = eig_unitary(np.diag([1.0, 1j]))
    assert sorted(np.round(eig.phases, 12)) == pytest.approx([0.0, np.pi / 2])


def test_eig_unitary_pauli_x(rng):
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    eig = eig_unitary(x)
    assert sorted(eig.phases) == pytest.approx([0.0, np.pi])
    for k in range(2):
        v = eig.vectors[:, k]
        assert abs(abs(v[0]) - 1 / np.sqrt(2)) <= 1e-10
        assert abs(abs(v[1]) - 1 / np.sqrt(2)) <= 1e-10


def test_eig_unitary_reconstruction_roundtrip(rng):
    for _ in range(100):
        u = haar_random(5, rng)
        eig = eig_unitary(u)
        assert op_norm(eig.reconstruct() - u) <= 1e-8
        assert op_norm(eig.vectors.conj().T @ eig.vectors - np.eye(5)) <= 1e-10
        assert np.all(eig.phases > -np.pi) and np.all(eig.phases <= np.pi)


def test_eig_unitary_degenerate_spectrum_orthonormal(rng):
    # repeated eigenvalues must still give an orthonormal eigenbasis
    basis = haar_random(4, rng)
    u = (basis * np.exp(1j * np.array([0.3, 0.3, 0.3, -1.2]))) @ basis.conj().T
    eig = eig_unitary(u)
    assert op_norm(eig.vectors.conj().T @ eig.vectors - np.eye(4)) <= 1e-10
    assert op_norm(eig.reconstruct() - u) <= 1e-8


def test_principal_log_scalar():
    x = principal_log(np.array([[1j]]))
    assert x[0, 0] == pytest.approx(1j * np.pi / 2)


def test_principal_log_branch_cut():
    with pytest.raises(BranchCutError):
        principal_log(np.diag([1.0, -1.0]))


def test_principal_log_near_negative_axis_raises():
    # phase -pi + tiny is also within the guard band, circularly
    with pytest.raises(BranchCutError):
        principal_log(np.diag([np.exp(1j * (-np.pi + 1e-12))]))


def test_log_exp_roundtrip_conditioned(rng):
    count = 0
    while count < 100:
        u = haar_random(4, rng)
        phases = eig_unitary(u).phases
        if np.min(np.pi - np.abs(phases)) < 0.05:
            continue
        count += 1
        x = principal_log(u)
        assert op_norm(expm(x) - u) <= 1e-8
        assert op_norm(x) < np.pi


def test_exp_log_inverse_pair(rng):
    for _ in range(50):
        x = random_generator(3, rng, norm=(np.pi - 0.1) * rng.random())
        assert op_norm(principal_log(expm(x)) - x) <= 1e-8


def test_frac_power_diagonal_phase_halving():
    u = np.diag([np.exp(1j * np.pi / 2)])
    assert frac_power(u, 0.5)[0, 0] == pytest.approx(np.exp(1j * np.pi / 4))


def test_frac_power_identity_exponent(rng):
    u = haar_random(3, rng)
    assert op_norm(frac_power(u, 1.0) - u) <= 1e-12


def test_frac_power_root_roundtrip(rng):
    for p in (2, 3, 8, 64):
        for _ in range(25):
            u = expm(random_generator(4, rng, norm=0.5 * rng.random()))
            root = frac_power(u, 1.0 / p)
            assert op_norm(np.linalg.matrix_power(root, p) - u) <= 1e-8


def test_frac_power_propagates_branch_cut():
    with pytest.raises(BranchCutError):
        frac_power(np.diag([1.0, -1.0]), 0.5)


def test_expm_zero_generator():
    assert op_norm(expm(np.zeros((3, 3))) - np.eye(3)) == 0.0


def test_expm_scalar():
    assert expm(np.array([[1j * np.pi / 3]]))[0, 0] == pytest.approx(np.exp(1j * np.pi / 3))


def test_expm_matches_truncated_series(rng):
    for _ in range(20):
        x = random_generator(4, rng, norm=rng.random())
        series = np.zeros((4, 4), dtype=complex)
        term = np.eye(4, dtype=complex)
        for k in range(1, 21):
            series += term
            term = term @ x / k
        series += term
        assert op_norm(expm(x) - series) <= 1e-12


def test_expm_output_unitary(rng):
    for _ in range(50):
        u = expm(random_generator(5, rng, norm=3 * rng.random()))
        assert op_norm(u.conj().T @ u - np.eye(5)) <= 1e-10


def test_project_to_unitary_fixed_point(rng):
    u = haar_random(4, rng)
    assert op_norm(project_to_unitary(u) - u) <= 1e-10


def test_project_to_unitary_scalar_stretch():
    assert op_norm(project_to_unitary(2 * np.eye(3)) - np.eye(3)) <= 1e-12


def test_project_to_unitary_optimality(rng):
    for _ in range(20):
        u = haar_random(4, rng)
        e = random_generator(4, rng, norm=0.1)  # any matrix of norm 0.1 works
        m = u + e
        w = project_to_unitary(m)
        # closest unitary is no farther than the known unitary u
        assert op_norm(w - m) <= op_norm(u - m) + 1e-12
        assert op_norm(w - m) <= 0.1 + 1e-12


def test_project_to_unitary_rank_deficient():
    m = np.diag([1.0, 0.0])
    with pytest.raises(RankDeficiencyError):
        project_to_unitary(m)


def test_exp_contraction_lemma(rng):
    # ||e^X - e^Y|| <= ||X - Y||
    for _ in range(300):
        x = random_generator(4, rng, norm=3 * rng.random())
        y = random_generator(4, rng, norm=3 * rng.random())
        assert op_norm(expm(x) - expm(y)) <= op_norm(x - y) + 1e-10


def test_exp_inverse_contraction_lemma(rng):
    # ||X - Y|| <= pi ||e^X - e^Y|| for ||X||, ||Y|| <= 1/pi
    for _ in range(300):
        x = random_generator(4, rng, norm=rng.random() / np.pi)
        y = random_generator(4, rng, norm=rng.random() / np.pi)
        assert op_norm(x - y) <= np.pi * op_norm(expm(x) - expm(y)) + 1e-10


def test_exp_product_commutator_bound(rng):
    # ||e^X e^Y - e^(X+Y)|| <= ||XY - YX|| / 2
    for _ in range(300):
        x = random_generator(4, rng, norm=rng.random())
        y = random_generator(4, rng, norm=rng.random())
        lhs = op_norm(expm(x) @ expm(y) - expm(x + y))
        assert lhs <= 0.5 * op_norm(x @ y - y @ x) + 1e-10


def test_assert_unitary_rejects_nonunitary():
    with pytest.raises(ValueError):
        assert_unitary(np.array([[1.0, 0.1], [0.0, 1.0]]))
