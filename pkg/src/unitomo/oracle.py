"""Simulated query access to a hidden unitary Z.

The only operation available to estimation algorithms is: prepare
``V2 (Z V1)^p V0 |0>`` for adaptively chosen unitaries V0, V1, V2 and a
positive integer power p, then measure in the computational basis. Each
preparation charges exactly ``p`` queries to a monotone ledger. The hidden
matrix is name-mangled and never leaves the oracle; algorithms see only
outcome indices and the ledger.
"""

from __future__ import annotations

import numpy as np

from .linalg import assert_unitary

__all__ = [
    "BudgetExceededError",
    "QueryOracle",
    "basis_flip",
    "derived_oracle_pattern",
]


class BudgetExceededError(RuntimeError):
    """A pattern run would push the ledger past the configured budget."""


def basis_flip(d: int, c: int) -> np.ndarray:
    """Permutation unitary X_c swapping |0> and |c| (identity for c = 0)."""
    if not 0 <= c < d:
        raise ValueError(f"column index {c} out of range for dimension {d}")
    x = np.eye(d, dtype=complex)
    if c != 0:
        x[[0, c]] = x[[c, 0]]
    return x


def derived_oracle_pattern(
    target_column: int,
    residual: np.ndarray,
    p: int,
    basis: np.ndarray,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Compile "measure column c of (Z V_j^dag)^p in `basis`" into a pattern.

    Returns (V0, V1, V2) with V0 = X_c, V1 = V_j^dag, V2 = basis^dag, so that
    ``V2 (Z V1)^p V0 |0> = basis^dag (Z V_j^dag)^p |c>`` as a matrix identity.
    """
    residual = assert_unitary(residual, what="residual estimate")
    basis = assert_unitary(basis, what="basis")
    d = residual.shape[0]
    v0 = basis_flip(d, target_column)
    v1 = residual.conj().T
    v2 = basis.conj().T
    return v0, v1, v2


class QueryOracle:
    """Holder of the hidden unitary with Born-rule sampling and a query ledger.

    One oracle instance belongs to one logical thread of execution (the
    ledger is not synchronized); parallel trials each construct their own
    oracle with an independent seed.
    """

    def __init__(self, hidden: np.ndarray, rng: np.random.Generator, budget: int | None = None):
        self.__hidden = assert_unitary(hidden, atol=1e-10, what="hidden unitary").copy()
        self.__hidden.setflags(write=False)
        self._rng = rng
        self._ledger = 0
        self.budget = budget

    @property
    def dim(self) -> int:
        return self.__hidden.shape[0]

    def queries_used(self) -> int:
        """Current value of the monotone query ledger."""
        return self._ledger

    def _charge(self, amount: int) -> None:
        if self.budget is not None and self._ledger + amount > self.budget:
            raise BudgetExceededError(
                f"pattern would use {amount} queries; ledger {self._ledger} of budget {self.budget}"
            )
        self._ledger += amount

    def _prepared_state(self, v0: np.ndarray, v1: np.ndarray, p: int) -> np.ndarray:
        # Apply the circuit to |0> column by column, p sequential uses of Z.
        psi = v0[:, 0].copy()
        for _ in range(p):
            psi = self.__hidden @ (v1 @ psi)
        return psi

    def run_pattern(self, v0: np.ndarray, v1: np.ndarray, v2: np.ndarray, p: int) -> int:
        """Prepare ``V2 (Z V1)^p V0|0>``, measure, return the outcome index.

        The ledger increases by exactly ``p``. Raises
        :class:`BudgetExceededError` (without charging) on budget overrun.
        """
        v0 = assert_unitary(v0, what="V0")
        v1 = assert_unitary(v1, what="V1")
        v2 = assert_unitary(v2, what="V2")
        if p < 1:
            raise ValueError("power p must be a positive integer")
        self._charge(p)
        state = v2 @ self._prepared_state(v0, v1, p)
        probs = np.abs(state) ** 2
        probs /= probs.sum()
        u = self._rng.random()
        return int(np.searchsorted(np.cumsum(probs), u, side="right").clip(0, self.dim - 1))

    def sample_uniform_povm(self, v0: np.ndarray, v1: np.ndarray, p: int, n: int) -> np.ndarray:
        """Measure the pattern state ``(Z V1)^p V0|0>`` with the uniform POVM.

        Returns the ``n`` measured unit directions as an (n, d) array.
        Identical in distribution to drawing a fresh Haar basis V per run,
        calling :meth:`run_pattern` with ``V2 = V^dag``, and keeping the
        outcome column of V: for outcome direction v, the squared overlap
        ``t = |<v|psi>|^2`` follows Beta(2, d-1) and, given t, v splits as
        ``sqrt(t) e^(i phi) psi + sqrt(1-t) w`` with phi uniform and w Haar
        in the orthocomplement of psi. Charges ``p * n`` queries.
        """
        v0 = assert_unitary(v0, what="V0")
        v1 = assert_unitary(v1, what="V1")
        if p < 1:
            raise ValueError("power p must be a positive integer")
        self._charge(p * n)
        psi = self._prepared_state(v0, v1, p)
        psi = psi / np.linalg.norm(psi)
        d = self.dim
        rng = self._rng
        if d == 1:
            phase = np.exp(2j * np.pi * rng.random(n))
            return (phase * psi[0]).reshape(n, 1)
        t = np.sqrt(rng.random(n)) if d == 2 else rng.beta(2.0, d - 1.0, n)
        ang = 2.0 * np.pi * rng.random(n)
        phase = np.cos(ang) + 1j * np.sin(ang)
        g = rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d))
        g -= np.outer(g @ psi.conj(), psi)
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        return (np.sqrt(t) * phase)[:, None] * psi[None, :] + np.sqrt(1.0 - t)[:, None] * g

    def measure_povm_moment(self, v0: np.ndarray, v1: np.ndarray, p: int, n: int) -> np.ndarray:
        """Sum of outcome projectors ``sum_k |v_k><v_k|`` over ``n`` POVM runs.

        Losslessly aggregates what :meth:`sample_uniform_povm` would return
        into the only statistic tomography consumes. For d = 2 the Haar
        orthocomplement direction is a pure phase on the fixed unit vector
        orthogonal to psi, so the projector sum reduces to three scalar
        accumulations; higher dimensions materialize the directions.
        Charges ``p * n`` queries.
        """
        if self.dim != 2:
            v = self.sample_uniform_povm(v0, v1, p, n)
            return v.T @ v.conj()
        v0 = assert_unitary(v0, what="V0")
        v1 = assert_unitary(v1, what="V1")
        if p < 1:
            raise ValueError("power p must be a positive integer")
        self._charge(p * n)
        psi = self._prepared_state(v0, v1, p)
        psi = psi / np.linalg.norm(psi)
        rng = self._rng
        t = np.sqrt(rng.random(n))
        ang = 2.0 * np.pi * rng.random(n)
        r = np.sqrt(t - t * t)
        cross = float(r @ np.cos(ang)) + 1j * float(r @ np.sin(ang))
        t_sum = float(t.sum())
        perp = np.array([-psi[1].conj(), psi[0].conj()])
        s = t_sum * np.outer(psi, psi.conj()) + (n - t_sum) * np.outer(perp, perp.conj())
        s += cross * np.outer(psi, perp.conj()) + np.conj(cross) * np.outer(perp, psi.conj())
        return s

    def run_pattern_batch(
        self, v0: np.ndarray, v1: np.ndarray, v2_stack: np.ndarray, p: int
    ) -> np.ndarray:
        """Vectorized :meth:`run_pattern` over a stack of final rotations.

        ``v2_stack`` has shape (n, d, d); the first two pattern unitaries and
        the power are shared, so the pre-measurement state is computed once.
        Charges ``p * n`` queries (all or nothing against the budget) and
        uses one uniform draw per run via inverse-CDF sampling.
        """
        v0 = assert_unitary(v0, what="V0")
        v1 = assert_unitary(v1, what="V1")
        if p < 1:
            raise ValueError("power p must be a positive integer")
        n = v2_stack.shape[0]
        self._charge(p * n)
        psi = self._prepared_state(v0, v1, p)
        amps = np.einsum("nij,j->ni", v2_stack, psi)
        probs = np.abs(amps) ** 2
        probs /= probs.sum(axis=1, keepdims=True)
        u = self._rng.random(n)
        cdf = np.cumsum(probs, axis=1)
        idx = (cdf < u[:, None]).sum(axis=1)
        return np.minimum(idx, self.dim - 1)
