"""Distances between unitary channels, in closed form from eigenphases.

Every worst-case metric between the channels of unitaries U and V is a
function of a single scalar: the *spread* sigma, the length of the shortest
arc of the unit circle containing the spectrum of ``U^dag V``. This module
computes the spread exactly (sort eigenphases, take 2*pi minus the largest
circular gap) and derives from it

* the diamond norm ``2 sin(sigma/2)`` (capped at 2 once sigma >= pi),
* the phase-minimized operator distance ``2 sin(sigma/4)``,
* the intrinsic (geodesic) distance ``sigma/2`` on the projective group,

plus the average-case entanglement infidelity, the Frobenius phase metric,
and a circular Hausdorff distance between eigenphase multisets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import assert_unitary, eig_unitary

__all__ = [
    "SpreadResult",
    "spread",
    "diamond_norm",
    "diamond_dist",
    "pudist",
    "lie_dist",
    "path_dist",
    "ent_infidelity",
    "frob_phase_metric",
    "circular_dist",
    "hausdorff_phase_dist",
]

_TWO_PI = 2.0 * np.pi


def circular_dist(a, b) -> np.ndarray:
    """Distance on the circle R / 2piZ, elementwise."""
    delta = np.mod(np.asarray(a) - np.asarray(b), _TWO_PI)
    return np.minimum(delta, _TWO_PI - delta)


@dataclass(frozen=True)
class SpreadResult:
    """Minimal covering arc of the eigenphases of ``U^dag V``.

    ``sigma`` is the arc length in ``[0, 2pi)`` and ``arc_center`` the
    midpoint of the arc, so every eigenphase is within ``sigma/2`` of
    ``arc_center`` circularly.
    """

    sigma: float
    arc_center: float


def _relative_phases(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    u = assert_unitary(u, what="U")
    v = assert_unitary(v, what="V")
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    return eig_unitary(u.conj().T @ v).phases


def spread(u: np.ndarray, v: np.ndarray) -> SpreadResult:
    """Spread of ``U^dag V``: 2*pi minus the largest circular eigenphase gap."""
    phases = np.sort(np.mod(_relative_phases(u, v), _TWO_PI))
    d = len(phases)
    if d == 1:
        return SpreadResult(sigma=0.0, arc_center=float(phases[0]))
    gaps = np.diff(phases, append=phases[0] + _TWO_PI)
    k = int(np.argmax(gaps))
    sigma = _TWO_PI - float(gaps[k])
    start = phases[(k + 1) % d]
    center = float(np.mod(start + sigma / 2.0, _TWO_PI))
    return SpreadResult(sigma=sigma, arc_center=center)


def diamond_norm(u: np.ndarray, v: np.ndarray) -> float:
    """Diamond norm ``||U(U) - U(V)||_diamond``: 2 sin(sigma/2), capped at 2.

    Note this is the *norm* convention; :func:`diamond_dist` returns the
    halved distance convention.
    """
    sigma = spread(u, v).sigma
    if sigma >= np.pi:
        return 2.0
    return 2.0 * float(np.sin(sigma / 2.0))


def diamond_dist(u: np.ndarray, v: np.ndarray) -> float:
    """Diamond-norm distance: half of :func:`diamond_norm`."""
    return diamond_norm(u, v) / 2.0


def pudist(u: np.ndarray, v: np.ndarray) -> float:
    """Operator-norm distance minimized over a global phase: 2 sin(sigma/4)."""
    return 2.0 * float(np.sin(spread(u, v).sigma / 4.0))


def lie_dist(u: np.ndarray, v: np.ndarray) -> float:
    """Geodesic distance on the projective unitary group: sigma/2 in [0, pi]."""
    return spread(u, v).sigma / 2.0


def path_dist(u: np.ndarray, v: np.ndarray) -> float:
    """Geodesic distance on U(d) without phase minimization.

    Equals the largest angle an eigenvalue of ``U^dag V`` makes with 1.
    """
    return float(np.max(np.abs(_relative_phases(u, v))))


def ent_infidelity(u: np.ndarray, v: np.ndarray) -> float:
    """Entanglement infidelity ``1 - |Tr(U^dag V)/d|^2`` in [0, 1]."""
    u = assert_unitary(u, what="U")
    v = assert_unitary(v, what="V")
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    d = u.shape[0]
    overlap = abs(np.trace(u.conj().T @ v)) / d
    return float(min(1.0, max(0.0, 1.0 - overlap**2)))


def frob_phase_metric(u: np.ndarray, v: np.ndarray) -> float:
    """Phase-minimized, normalized Frobenius distance.

    Equals ``min_phi ||U - phi V||_F / sqrt(2 d) = sqrt(1 - |Tr(U^dag V)|/d)``;
    unlike the infidelity this is a genuine metric on the projective group.
    """
    u = assert_unitary(u, what="U")
    v = assert_unitary(v, what="V")
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    d = u.shape[0]
    overlap = abs(np.trace(u.conj().T @ v)) / d
    return float(np.sqrt(max(0.0, 1.0 - overlap)))


def hausdorff_phase_dist(a, b) -> float:
    """Circular Hausdorff distance between phase sets, minimized over a shift.

    The objective is piecewise linear in the shift tau with slopes +-1, so
    its minima occur where two distance cones cross: at an alignment shift
    ``b - a`` or at a circular midpoint of two alignment shifts. The optimum
    is found by evaluating all such candidates.
    """
    a = np.mod(np.asarray(a, dtype=float).ravel(), _TWO_PI)
    b = np.mod(np.asarray(b, dtype=float).ravel(), _TWO_PI)
    if a.size == 0 or b.size == 0:
        raise ValueError("phase sets must be nonempty")
    shifts = np.unique(np.mod(b[None, :] - a[:, None], _TWO_PI).ravel())
    mids = np.mod((shifts[:, None] + shifts[None, :]) / 2.0, _TWO_PI).ravel()
    cands = np.unique(np.concatenate([shifts, mids, np.mod(mids + np.pi, _TWO_PI)]))
    best = np.inf
    for lo in range(0, len(cands), 2048):
        tau = cands[lo : lo + 2048]
        dist = circular_dist((a[None, :] + tau[:, None])[:, :, None], b[None, None, :])
        h = np.maximum(dist.min(axis=2).max(axis=1), dist.min(axis=1).max(axis=1))
        best = min(best, float(h.min()))
    return best
