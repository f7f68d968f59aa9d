"""Dense complex linear algebra specialized to unitary matrices.

Unitaries are plain ``numpy`` arrays of shape ``(d, d)``; validity is
enforced by the checkers below at construction/entry points rather than by
a wrapper class. All operations are pure functions of their inputs;
randomness always enters through an explicit ``numpy.random.Generator``.

Conventions:

* eigenphases live on the principal branch ``(-pi, pi]``,
* the branch cut of the matrix logarithm sits at -1 (phase ``pi``),
* the operator norm is the largest singular value.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

__all__ = [
    "BranchCutError",
    "DecompositionError",
    "RankDeficiencyError",
    "UnitaryEigensystem",
    "op_norm",
    "is_unitary",
    "assert_unitary",
    "assert_antihermitian",
    "haar_random",
    "haar_batch",
    "random_generator",
    "eig_unitary",
    "expm",
    "principal_log",
    "frac_power",
    "project_to_unitary",
]


class BranchCutError(ValueError):
    """An eigenphase sits within the guard band of the -1 branch cut."""


class DecompositionError(RuntimeError):
    """The backend eigensolver failed to converge."""


class RankDeficiencyError(ValueError):
    """Input matrix has a singular value below the rank tolerance."""


def op_norm(a: np.ndarray) -> float:
    """Operator (spectral) norm: the largest singular value of ``a``."""
    return float(np.linalg.norm(np.atleast_2d(a), 2))


def is_unitary(u: np.ndarray, atol: float = 1e-8) -> bool:
    """Whether ``||U^dag U - I||_op <= atol``."""
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    d = u.shape[0]
    return op_norm(u.conj().T @ u - np.eye(d)) <= atol


def assert_unitary(u: np.ndarray, atol: float = 1e-8, what: str = "matrix") -> np.ndarray:
    """Validate a unitary and return it as a complex array."""
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1] or u.shape[0] < 1:
        raise ValueError(f"{what} must be a square matrix, got shape {u.shape}")
    d = u.shape[0]
    dev = op_norm(u.conj().T @ u - np.eye(d))
    if dev > atol:
        raise ValueError(f"{what} is not unitary: ||U^dag U - I|| = {dev:.3e} > {atol:.1e}")
    return u


def assert_antihermitian(x: np.ndarray, atol: float = 1e-8, what: str = "generator") -> np.ndarray:
    """Validate an antihermitian matrix (``X^dag = -X``) and return it."""
    x = np.asarray(x, dtype=complex)
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise ValueError(f"{what} must be a square matrix, got shape {x.shape}")
    dev = op_norm(x + x.conj().T)
    if dev > atol:
        raise ValueError(f"{what} is not antihermitian: ||X + X^dag|| = {dev:.3e} > {atol:.1e}")
    return x


@dataclass(frozen=True)
class UnitaryEigensystem:
    """Spectral decomposition of a unitary.

    ``phases`` are the eigenphases in ``(-pi, pi]`` and the columns of
    ``vectors`` are the matching orthonormal eigenvectors, so that
    ``sum_k exp(i phases[k]) |v_k><v_k|`` reconstructs the source matrix.
    """

    phases: np.ndarray
    vectors: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.phases)

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * np.exp(1j * self.phases)) @ self.vectors.conj().T


def haar_random(d: int, rng: np.random.Generator) -> np.ndarray:
    """Draw a Haar-distributed unitary from U(d).

    Uses QR of a standard complex Gaussian (Ginibre) matrix with the
    R-diagonal phase correction, which makes the distribution exactly
    left- and right-invariant.
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    q = q * (diag / np.abs(diag))
    return q


def _haar_batch_2(n: int, rng: np.random.Generator) -> np.ndarray:
    # A Haar 2x2 unitary is (Haar first column, phase * rotated conjugate).
    g = rng.standard_normal((n, 2)) + 1j * rng.standard_normal((n, 2))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    phase = np.exp(2j * np.pi * rng.random(n))
    out = np.empty((n, 2, 2), dtype=complex)
    out[:, :, 0] = g
    out[:, 0, 1] = -g[:, 1].conj() * phase
    out[:, 1, 1] = g[:, 0].conj() * phase
    return out


def haar_batch(n: int, d: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``n`` Haar unitaries as an ``(n, d, d)`` stack.

    Equivalent in distribution to ``haar_random`` but vectorized across the
    batch: Gram-Schmidt of a Ginibre stack (with a reorthogonalization pass
    for stability) yields an R factor with positive real diagonal, which is
    exactly the phase-corrected QR construction.
    """
    if d == 1:
        g = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        return (g / np.abs(g)).reshape(n, 1, 1)
    if d == 2:
        return _haar_batch_2(n, rng)
    z = rng.standard_normal((n, d, d)) + 1j * rng.standard_normal((n, d, d))
    for k in range(d):
        v = z[:, :, k]
        for _ in range(2):
            for j in range(k):
                q = z[:, :, j]
                v = v - q * np.einsum("ni,ni->n", q.conj(), v)[:, None]
        z[:, :, k] = v / np.linalg.norm(v, axis=1)[:, None]
    return z


def random_generator(d: int, rng: np.random.Generator, norm: float = 1.0) -> np.ndarray:
    """Random antihermitian matrix with operator norm exactly ``norm``.

    Direction is i times a GUE matrix, rescaled; used for perturbation
    ensembles and adversarial mocks.
    """
    h = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    h = (h + h.conj().T) / 2.0
    x = 1j * h
    current = op_norm(x)
    if current == 0.0:
        x = 1j * np.eye(d)
        current = 1.0
    return x * (norm / current)


def eig_unitary(u: np.ndarray) -> UnitaryEigensystem:
    """Eigenphases and an orthonormal eigenbasis of a unitary.

    Computed via the complex Schur form, which is diagonal for normal
    matrices and always returns an orthonormal vector set, so degenerate
    eigenvalue clusters need no separate re-orthonormalization.
    """
    u = assert_unitary(u, what="U")
    try:
        t, z = scipy.linalg.schur(u, output="complex")
    except scipy.linalg.LinAlgError as exc:  # pragma: no cover - pathological input
        raise DecompositionError("Schur decomposition did not converge") from exc
    phases = np.angle(np.diagonal(t))
    # np.angle returns (-pi, pi]; pin -pi roundoff onto the +pi branch
    phases = np.where(phases <= -np.pi, np.pi, phases)
    return UnitaryEigensystem(phases=phases, vectors=np.ascontiguousarray(z))


def expm(x: np.ndarray) -> np.ndarray:
    """Exponential of an antihermitian generator, always exactly unitary.

    Diagonalizes the Hermitian matrix ``-iX`` and exponentiates its
    eigenvalues on the unit circle.
    """
    x = assert_antihermitian(x, what="X")
    w, v = np.linalg.eigh(-1j * x)
    return (v * np.exp(1j * w)) @ v.conj().T


def principal_log(u: np.ndarray, guard: float = 1e-9) -> np.ndarray:
    """Principal logarithm of a unitary: antihermitian X with exp(X) = U.

    Eigenphases are taken in ``(-pi, pi]``; any eigenphase within ``guard``
    (circularly) of the branch cut at pi raises :class:`BranchCutError`
    because the principal root is then ill-defined.
    """
    eig = eig_unitary(u)
    gap = np.pi - np.abs(eig.phases)
    if np.any(gap <= guard):
        worst = float(eig.phases[np.argmin(gap)])
        raise BranchCutError(
            f"eigenphase {worst:.6f} lies within {guard:.1e} of the branch cut at pi"
        )
    return (eig.vectors * (1j * eig.phases)) @ eig.vectors.conj().T


def frac_power(u: np.ndarray, r: float, guard: float = 1e-9) -> np.ndarray:
    """Principal fractional power ``U^r = exp(r log U)`` for real ``r > 0``.

    Propagates :class:`BranchCutError` when U has an eigenvalue at -1.
    """
    if r <= 0:
        raise ValueError("exponent must be positive")
    return expm(r * principal_log(u, guard=guard))


def project_to_unitary(m: np.ndarray, rank_tol: float = 1e-12) -> np.ndarray:
    """Closest unitary to ``m`` in operator norm, via the SVD polar factor.

    Raises :class:`RankDeficiencyError` if any singular value is at or
    below ``rank_tol``: the projection is then non-unique.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    x, s, yh = np.linalg.svd(m)
    if np.min(s) <= rank_tol:
        raise RankDeficiencyError(f"smallest singular value {np.min(s):.3e} <= {rank_tol:.1e}")
    return x @ yh
