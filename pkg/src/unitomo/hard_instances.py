"""Hard-instance constructions: reflection nets and fractional-query gadgets.

A reflection (Hermitian unitary) raised to a small fractional power is
nearly the identity, yet a packing net of reflections stays pairwise far in
diamond norm. These constructions make the query lower bound's objects
concrete at desk scale: greedy rejection packing builds the net, a one-
qubit coupling gadget turns a single controlled reflection into a
postselected fractional power, and the binomial identification bound caps
the success probability of any identification strategy.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, cos, floor, fsum, pi, sin, sqrt

import numpy as np

from .bootstrap import bootstrap
from .linalg import assert_unitary, frac_power, haar_random, op_norm
from .metrics import diamond_norm
from .oracle import QueryOracle

__all__ = [
    "ReflectionNet",
    "GadgetResult",
    "IdentifyResult",
    "sample_reflection",
    "build_net",
    "frac_reflection",
    "gadget_matrix",
    "gadget_amplitude",
    "gadget_apply",
    "ancilla_truncation_error",
    "identification_bound",
    "identify_via_powering",
]


def _assert_reflection(r: np.ndarray, atol: float = 1e-10) -> np.ndarray:
    r = assert_unitary(r, atol=atol, what="reflection")
    d = r.shape[0]
    if op_norm(r @ r - np.eye(d)) > atol or op_norm(r - r.conj().T) > atol:
        raise ValueError("matrix is not a reflection (need R^2 = I and R = R^dag)")
    return r


@dataclass
class ReflectionNet:
    """Reflections that are pairwise at least ``separation`` apart in diamond norm."""

    elements: list[np.ndarray]
    separation: float
    complete: bool = True  # False when greedy packing stopped short of its target

    def __post_init__(self):
        for r in self.elements:
            _assert_reflection(r)
        n = len(self.elements)
        for i in range(n):
            for j in range(i + 1, n):
                dn = diamond_norm(self.elements[i], self.elements[j])
                if dn < self.separation - 1e-12:
                    raise ValueError(
                        f"net elements {i},{j} at diamond norm {dn:.4f} < {self.separation}"
                    )

    def __len__(self) -> int:
        return len(self.elements)


def sample_reflection(d: int, rng: np.random.Generator) -> np.ndarray:
    """Random traceless-as-possible reflection: Haar-conjugated +-1 diagonal.

    Eigenvalue pattern is floor(d/2) each of +1 and -1, plus one extra +1
    when d is odd, so |Tr R| <= 1.
    """
    if d < 2:
        raise ValueError("reflections need dimension >= 2")
    signs = np.concatenate(
        [np.ones(d // 2 + (d % 2)), -np.ones(d // 2)]
    )
    u = haar_random(d, rng)
    r = (u * signs) @ u.conj().T
    return (r + r.conj().T) / 2.0


def build_net(
    d: int,
    target_sep: float,
    target_n: int,
    max_attempts: int,
    rng: np.random.Generator,
) -> ReflectionNet:
    """Greedy rejection packing of random reflections.

    Samples reflections and accepts each one that keeps all pairwise
    diamond norms at or above ``target_sep``, until ``target_n`` elements
    are collected or ``max_attempts`` candidates have been tried. A short
    net is returned with ``complete=False`` rather than raising.
    """
    if target_sep <= 0:
        raise ValueError("target separation must be positive")
    accepted: list[np.ndarray] = []
    attempts = 0
    while len(accepted) < target_n and attempts < max_attempts:
        attempts += 1
        cand = sample_reflection(d, rng)
        if all(diamond_norm(cand, r) >= target_sep for r in accepted):
            accepted.append(cand)
    return ReflectionNet(
        elements=accepted, separation=target_sep, complete=len(accepted) >= target_n
    )


def frac_reflection(r: np.ndarray, alpha: float) -> np.ndarray:
    """Fractional power of a reflection along the negative-angle branch.

    ``R^alpha = (I + R)/2 + exp(-i pi alpha) (I - R)/2``: the +1 eigenspace
    stays fixed and the -1 eigenspace picks up the phase ``exp(-i pi alpha)``.
    """
    r = _assert_reflection(r)
    if not -1 <= alpha <= 1:
        raise ValueError("alpha must lie in [-1, 1]")
    d = r.shape[0]
    eye = np.eye(d)
    return (eye + r) / 2.0 + np.exp(-1j * pi * alpha) * (eye - r) / 2.0


def gadget_matrix(alpha: float, sign: int = +1) -> np.ndarray:
    """One-qubit pre/post rotation of the fractional-query gadget.

    ``P^+`` (sign=+1) postselects onto ``R^alpha``; ``P^-`` onto
    ``R^-alpha``. gamma = cos(alpha pi/2) / (cos(alpha pi/2) + sin(alpha pi/2)).
    """
    if not 0 < alpha <= 1:
        raise ValueError("alpha must lie in (0, 1]")
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    c, s = cos(alpha * pi / 2.0), sin(alpha * pi / 2.0)
    gamma = c / (c + s)
    sg, sb = sqrt(gamma), sqrt(1.0 - gamma)
    return np.array(
        [[sg, sign * 1j * sb], [sb, -sign * 1j * sg]], dtype=complex
    )


def gadget_amplitude(alpha: float, sign: int = +1) -> complex:
    """Postselection amplitude of one gadget application.

    ``exp(sign * i pi alpha / 2) / (cos(alpha pi/2) + sin(alpha pi/2))``;
    the minus branch (which applies ``R^-alpha``) carries the conjugate
    phase of the plus branch. The modulus is ``(1 + sin(alpha pi))^(-1/2)``
    for either sign.
    """
    return complex(
        np.exp(sign * 1j * pi * alpha / 2.0) / (cos(alpha * pi / 2.0) + sin(alpha * pi / 2.0))
    )


@dataclass
class GadgetResult:
    """State decomposition after one gadget application.

    ``full_state = nu * |0> (x) postselected + (orthogonal ancilla part)``
    with ``postselected`` normalized.
    """

    full_state: np.ndarray
    postselected: np.ndarray
    nu: complex


def gadget_apply(r: np.ndarray, alpha: float, sign: int, psi: np.ndarray) -> GadgetResult:
    """Simulate ``(P (x) I) cR (P (x) I)`` on ``|0>|psi>``.

    The ancilla-|0> branch of the output equals ``nu R^(sign*alpha) |psi>``
    with ``nu`` given by :func:`gadget_amplitude`.
    """
    r = _assert_reflection(r)
    psi = np.asarray(psi, dtype=complex)
    if abs(np.linalg.norm(psi) - 1.0) > 1e-10:
        raise ValueError("psi must be a unit vector")
    d = r.shape[0]
    p = gadget_matrix(alpha, sign)
    pext = np.kron(p, np.eye(d))
    ctrl_r = np.block(
        [[np.eye(d), np.zeros((d, d))], [np.zeros((d, d)), r]]
    ).astype(complex)
    state = np.zeros(2 * d, dtype=complex)
    state[:d] = psi
    state = pext @ (ctrl_r @ (pext @ state))
    branch = state[:d]
    weight = np.linalg.norm(branch)
    pivot = int(np.argmax(np.abs(branch)))
    phase = branch[pivot] / abs(branch[pivot]) if weight > 0 else 1.0
    post = branch / (weight * phase) if weight > 0 else branch
    return GadgetResult(full_state=state, postselected=post, nu=complex(weight * phase))


def ancilla_truncation_error(q: int, gamma: float, k: int) -> float:
    """Exact l2 error of weight-truncating the gadget ancilla product state.

    The ancilla is ``(sqrt(gamma)|0> + sqrt(1-gamma)|1>)^(x Q)``; dropping
    all bitstrings of Hamming weight above K leaves the square root of a
    binomial tail: ``sqrt(P[Bin(Q, 1-gamma) > K])``.
    """
    if q < 0 or k < 0:
        raise ValueError("Q and K must be nonnegative")
    if not 0 <= gamma <= 1:
        raise ValueError("gamma must lie in [0, 1]")
    if k >= q:
        return 0.0
    terms = [
        comb(q, w) * (1.0 - gamma) ** w * gamma ** (q - w) for w in range(k + 1, q + 1)
    ]
    return sqrt(max(0.0, fsum(terms)))


def identification_bound(q: int, d: int, n: int) -> float:
    """Best possible average identification success: ``binom(Q+d^2-1, Q)/N``.

    Evaluated as an exact rational and clamped to [0, 1].
    """
    if q < 0 or d < 1 or n < 1:
        raise ValueError("need Q >= 0, d >= 1, N >= 1")
    value = Fraction(comb(q + d * d - 1, q), n)
    return float(min(value, Fraction(1)))


@dataclass
class IdentifyResult:
    """Outcome of net-element identification."""

    index: int
    tie: bool
    estimate_power: np.ndarray
    distances: np.ndarray


def identify_via_powering(
    oracle: QueryOracle,
    net: ReflectionNet,
    eps: float,
    eta: float,
    base,
    rng: np.random.Generator,
    tie_tol: float = 1e-12,
) -> IdentifyResult:
    """Identify which net element R the oracle's hidden ``Z = R^alpha`` is.

    Runs the refinement loop to accuracy eps, powers the estimate by
    ``1/alpha = floor(1/(8 eps))``, and returns the index of the
    diamond-nearest net element. Exact distance ties break to the lowest
    index and are flagged.
    """
    if not 0 < eps < 1 / 8:
        raise ValueError("eps must lie in (0, 1/8) so that 1/alpha >= 1")
    inv_alpha = floor(1.0 / (8.0 * eps))
    est, _ = bootstrap(oracle, eps, eta, base, rng)
    powered = frac_power(est, float(inv_alpha)) if inv_alpha > 1 else est
    dists = np.array([diamond_norm(powered, r) for r in net.elements])
    best = float(dists.min())
    tied = np.nonzero(dists <= best + tie_tol)[0]
    return IdentifyResult(
        index=int(tied[0]), tie=len(tied) > 1, estimate_power=powered, distances=dists
    )
