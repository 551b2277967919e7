"""Reduced operators, entanglement measures, measurement updates, CHSH."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import Multivector
from .states import DensityOperator, _unit3


def partial_trace(rho: DensityOperator, keep) -> DensityOperator:
    """Reduced operator on the kept qubits: drop the rest, rescale by 2^d."""
    keep = sorted(set(keep))
    if not keep or len(keep) >= rho.n_qubits:
        raise ValueError("keep must be a nonempty proper subset of qubits")
    dropped = [q for q in range(rho.n_qubits) if q not in keep]
    mv = rho.mv.drop_qubits(dropped) * float(2 ** len(dropped))
    return DensityOperator(mv)


def _require_pure_2q(rho: DensityOperator, tol: float = 1e-9) -> None:
    if rho.n_qubits != 2:
        raise ValueError("expected a two-qubit state")
    if not rho.is_pure(tol):
        raise ValueError("expected a pure state")


def binary_entropy(p: float) -> float:
    """-p log2 p - (1-p) log2 (1-p) with 0 log 0 = 0."""
    s = 0.0
    for x in (p, 1.0 - p):
        if x > 0.0:
            s -= x * np.log2(x)
    return s


def entanglement_entropy(rho: DensityOperator, cut: int = 0) -> float:
    """Von Neumann entropy of one qubit of a pure two-qubit state.

    Closed form in the reduced Bloch length v: the binary entropy of
    (1 + v)/2, maximal (= 1) when the reduced vector vanishes.
    """
    _require_pure_2q(rho)
    v = float(np.linalg.norm(partial_trace(rho, [cut]).bloch_vector()))
    return binary_entropy((1.0 + min(v, 1.0)) / 2.0)


def concurrence_2q(rho: DensityOperator) -> float:
    """sqrt(2 (1 - Tr rho_a^2)) = sqrt(1 - v^2) for a pure two-qubit state."""
    _require_pure_2q(rho)
    v = float(np.linalg.norm(partial_trace(rho, [0]).bloch_vector()))
    return float(np.sqrt(max(0.0, 1.0 - v * v)))


def measure_update(
    rho: DensityOperator, qubit: int, axis, outcome: int
) -> tuple[float, DensityOperator]:
    """Projective measurement (1 +/- s)/2 on one qubit.

    Returns (probability, post-measurement state).  Raises if the outcome
    has probability below 1e-12.
    """
    if outcome not in (-1, 1):
        raise ValueError("outcome must be +1 or -1")
    n = rho.n_qubits
    e = 0.5 * (Multivector.scalar(n, 1.0) + float(outcome) * Multivector.vector(n, qubit, _unit3(axis)))
    prob = (1 << n) * (e * rho.mv).scalar_part()
    if prob < 1e-12:
        raise ValueError(f"measurement outcome has vanishing probability ({prob})")
    post = (e * rho.mv * e) * (1.0 / prob)
    return float(prob), DensityOperator(post)


@dataclass(frozen=True)
class ChshSetting:
    """Measurement axes: q, r on qubit a and s, t on qubit b."""

    q: tuple[float, float, float]
    r: tuple[float, float, float]
    s: tuple[float, float, float]
    t: tuple[float, float, float]

    def __post_init__(self) -> None:
        for v in (self.q, self.r, self.s, self.t):
            _unit3(v)


def correlator(rho: DensityOperator, axis_a, axis_b) -> float:
    """E(a, b) = 4 < a_1 b_2 rho > for a two-qubit state."""
    if rho.n_qubits != 2:
        raise ValueError("expected a two-qubit state")
    obs = Multivector.vector(2, 0, _unit3(axis_a)) * Multivector.vector(2, 1, _unit3(axis_b))
    return rho.expectation(obs)


def chsh_value(rho: DensityOperator, setting: ChshSetting) -> float:
    """E(QS) + E(RS) + E(RT) - E(QT) evaluated as one scalar part."""
    if rho.n_qubits != 2:
        raise ValueError("expected a two-qubit state")
    va = Multivector.vector
    q, r = va(2, 0, _unit3(setting.q)), va(2, 0, _unit3(setting.r))
    s, t = va(2, 1, _unit3(setting.s)), va(2, 1, _unit3(setting.t))
    obs = q * s + r * s + r * t - q * t
    return rho.expectation(obs)


def correlation_matrix(rho: DensityOperator) -> np.ndarray:
    """T[i, j] = E(e_i, e_j) over the Cartesian axes."""
    axes = (np.eye(3)[0], np.eye(3)[1], np.eye(3)[2])
    return np.array([[correlator(rho, ea, eb) for eb in axes] for ea in axes])


def _normalized(v: np.ndarray) -> np.ndarray:
    nrm = np.linalg.norm(v)
    if nrm < 1e-15:
        return np.array([0.0, 0.0, 1.0])
    return v / nrm


def chsh_maximize(
    rho: DensityOperator,
    restarts: int = 64,
    tol: float = 1e-12,
    max_iter: int = 2000,
    seed: int = 0,
) -> tuple[float, ChshSetting]:
    """Maximise the CHSH value over all four measurement axes.

    Starting from random (q, r), alternate the two analytic half-steps:
    best (s, t) for fixed (q, r) lie along T^T(q + r) and T^T(r - q), and
    best (q, r) for fixed (s, t) lie along T(s - t) and T(s + t).  Each
    restart ascends monotonically; convergence at ``tol`` improvement.
    """
    tmat = correlation_matrix(rho)
    rng = np.random.default_rng(seed)
    best_val = -np.inf
    best = None
    for _ in range(restarts):
        q = _normalized(rng.standard_normal(3))
        r = _normalized(rng.standard_normal(3))
        val = -np.inf
        for _ in range(max_iter):
            s = _normalized(tmat.T @ (q + r))
            t = _normalized(tmat.T @ (r - q))
            q = _normalized(tmat @ (s - t))
            r = _normalized(tmat @ (s + t))
            new_val = (q + r) @ tmat @ s + (r - q) @ tmat @ t
            if new_val - val < tol:
                val = new_val
                break
            val = new_val
        if val > best_val:
            best_val = val
            best = ChshSetting(tuple(q), tuple(r), tuple(s), tuple(t))
    # report the value through the same scalar-part route as chsh_value
    return chsh_value(rho, best), best
