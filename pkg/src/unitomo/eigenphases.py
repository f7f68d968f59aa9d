"""Eigenphase estimation without eigenvector estimation.

The spectrum of a unitary can be learned up to one global rotation by
comparing pairs of eigenvectors: a controlled-SWAP interference gadget
turns the phase *difference* between two eigenvectors into the relative
phase of one ancilla qubit, iterative phase estimation reads that
difference out bit by bit, and coupon collection over a maximally mixed
reference register visits every eigenvector. Multiplicities are invisible
by design: only the set of distinct phases is recovered.
"""

from __future__ import annotations

from math import ceil, log, log2, pi

import numpy as np

from .constants import DEFAULT, TomographyConstants
from .linalg import assert_unitary, eig_unitary

__all__ = [
    "PhaseDiffSampler",
    "EigenphaseSimulator",
    "swap_gadget_qubit_state",
    "phase_diff_estimate",
    "estimate_eigenphases",
    "cluster_phases",
]

_TWO_PI = 2.0 * pi


def swap_gadget_qubit_state(
    z: np.ndarray, a_vec: np.ndarray, b_vec: np.ndarray, power: int = 1
) -> np.ndarray:
    """Statevector simulation of the controlled-SWAP comparison gadget.

    Prepares ``|+>|a>|b>``, applies controlled-SWAP, ``Z^power`` on the
    first qudit, controlled-SWAP again, and returns the (normalized) state
    of the control qubit, which factorizes out when ``|a>``, ``|b>`` are
    eigenvectors: ``(e^(i power alpha)|0> + e^(i power beta)|1>)/sqrt(2)``.
    """
    z = assert_unitary(z, what="Z")
    d = z.shape[0]
    state = np.kron(
        np.array([1.0, 1.0]) / np.sqrt(2.0), np.kron(a_vec, b_vec)
    ).astype(complex)
    full = state.reshape(2, d, d)
    swapped = full.copy()
    swapped[1] = full[1].T  # SWAP the two qudits on the |1> branch
    zp = np.linalg.matrix_power(z, power)
    swapped = np.einsum("ij,cjk->cik", zp, swapped)
    out = swapped.copy()
    out[1] = swapped[1].T
    # Control-qubit state: overlap against the (unchanged) qudit content.
    qudits = np.kron(a_vec, b_vec).reshape(d, d)
    qubit = np.einsum("cik,ik->c", out, qudits.conj())
    return qubit / np.linalg.norm(qubit)


class PhaseDiffSampler:
    """Simulated interference measurements of one eigenphase gap.

    Holds the hidden gap ``delta = beta - alpha`` and a shared query
    ledger; each simulated round at power ``2^k`` charges ``2^k`` queries
    and returns qubit outcomes distributed as
    ``P(0) = cos^2((2^k delta + feedback)/2)``.
    """

    def __init__(self, delta: float, rng: np.random.Generator, ledger: list[int]):
        self.__delta = float(delta)
        self._rng = rng
        self._ledger = ledger

    def queries_used(self) -> int:
        return self._ledger[0]

    def sample_round(self, power: int, feedback: float, shots: int) -> np.ndarray:
        """Measure ``shots`` independent gadget repetitions at this power."""
        if power < 1 or shots < 1:
            raise ValueError("power and shots must be positive")
        self._ledger[0] += power * shots
        p0 = np.cos((power * self.__delta + feedback) / 2.0) ** 2
        return (self._rng.random(shots) >= p0).astype(int)


def phase_diff_estimate(
    sampler: PhaseDiffSampler,
    eps: float,
    eta: float,
    rng: np.random.Generator | None = None,
    constants: TomographyConstants = DEFAULT,
) -> float:
    """Iterative phase estimation of the sampler's hidden gap.

    Kitaev-style bit-by-bit readout with feedback rotations:
    ``M = ceil(log2(1/eps)) + 2`` bits, each decided by a majority vote
    over ``ceil(c_pe ln(1/eta))`` repetitions. Returns an angle within
    ``eps`` of the hidden gap (circularly) except with probability ~eta.
    """
    if not 0 < eps < pi:
        raise ValueError("eps must lie in (0, pi)")
    if not 0 < eta < 1:
        raise ValueError("eta must lie in (0, 1)")
    m_bits = ceil(log2(1.0 / eps)) + 2
    shots = max(1, ceil(constants.c_pe * log(1.0 / eta)))
    frac = 0.0  # accumulated binary fraction of delta / (2 pi)
    for k in range(m_bits - 1, -1, -1):
        # Power 2^k exposes bit k+1 of the fraction once the deeper bits
        # (already accumulated in frac) are cancelled by the feedback.
        power = 2**k
        feedback = -power * frac * _TWO_PI
        ones = int(sampler.sample_round(power, feedback, shots).sum())
        bit = 1 if 2 * ones > shots else 0
        frac += bit / (2.0 ** (k + 1))
    return float(np.mod(frac * _TWO_PI, _TWO_PI))


class EigenphaseSimulator:
    """Pairwise-comparison access to the spectrum of a hidden unitary.

    Spectral data stays private; the public surface hands out
    :class:`PhaseDiffSampler` objects for eigenindex pairs drawn uniformly
    (the maximally mixed reference) and a shared query ledger.
    """

    def __init__(self, hidden: np.ndarray, rng: np.random.Generator):
        eig = eig_unitary(assert_unitary(hidden, what="hidden unitary"))
        self.__phases = eig.phases
        self._rng = rng
        self._ledger = [0]
        self._ref: int | None = None

    @property
    def dim(self) -> int:
        return len(self.__phases)

    def queries_used(self) -> int:
        return self._ledger[0]

    def draw_reference(self) -> int:
        """Collapse the mixed reference register onto one eigenindex (once)."""
        if self._ref is None:
            self._ref = int(self._rng.integers(self.dim))
        return self._ref

    def draw_pair_sampler(self) -> PhaseDiffSampler:
        """Fresh uniformly-drawn eigenindex compared against the reference."""
        a = self.draw_reference()
        b = int(self._rng.integers(self.dim))
        delta = self.__phases[b] - self.__phases[a]
        return PhaseDiffSampler(delta, self._rng, self._ledger)


def cluster_phases(values: np.ndarray, radius: float) -> np.ndarray:
    """Single-linkage circular clustering; returns one mean angle per cluster."""
    values = np.mod(np.asarray(values, dtype=float), _TWO_PI)
    if values.size == 0:
        return values
    sorted_vals = np.sort(values)
    n = len(sorted_vals)
    gaps = np.diff(sorted_vals, append=sorted_vals[0] + _TWO_PI)
    breaks = np.nonzero(gaps > radius)[0]  # cluster boundaries on the circle

    def _mean(seg: np.ndarray) -> float:
        ref = seg[0]
        rel = np.mod(seg - ref + pi, _TWO_PI) - pi
        return float(np.mod(ref + rel.mean(), _TWO_PI))

    if len(breaks) == 0:
        return np.array([_mean(sorted_vals)])
    # walk segments between breaks, starting just after the last break
    start = (int(breaks[-1]) + 1) % n
    rolled = np.roll(sorted_vals, -start)
    sizes = np.diff(np.concatenate([[-1], np.mod(breaks - start, n)]))
    reps = []
    pos = 0
    for size in sizes:
        reps.append(_mean(rolled[pos : pos + int(size)]))
        pos += int(size)
    return np.array(sorted(reps))


def estimate_eigenphases(
    sim: EigenphaseSimulator,
    eps: float,
    rng: np.random.Generator,
    constants: TomographyConstants = DEFAULT,
) -> np.ndarray:
    """Recover the eigenphase set of the hidden unitary up to a global shift.

    Coupon collection: fix one uniformly drawn reference eigenindex, then
    ``ceil(c_cc d ln d)`` times draw a fresh eigenindex and estimate its gap
    to the reference by iterative phase estimation at accuracy eps/2.
    Recorded gaps are deduplicated by single-linkage clustering at radius
    eps. The output phase set matches the true spectrum to Hausdorff
    distance eps (after optimal global rotation) with high probability.
    """
    if not 0 < eps < pi / 4:
        raise ValueError("eps must lie in (0, pi/4)")
    d = sim.dim
    reps = ceil(constants.c_cc * d * max(log(d), 1.0))
    eta_pe = 0.001
    sim.draw_reference()
    recorded = []
    for _ in range(reps):
        sampler = sim.draw_pair_sampler()
        recorded.append(phase_diff_estimate(sampler, eps / 2.0, eta_pe, constants=constants))
    return cluster_phases(np.array(recorded), radius=eps)
