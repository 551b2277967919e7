"""Planar vector-sum equations for three-qubit pure-state consistency.

Each qubit carries four in-plane vectors whose lengths are geometric means
of expansion-probability pairs and whose directions are tied across qubits
by the pure-state angle relations.  Writing every direction relative to the
three reference vectors leaves four free angles

    (phi_ab, phi_ab', phi_ac, phi_bc)

from which the remaining two named angles follow by the closure rules
phi_ac' = phi_ac + phi_ab' - phi_ab and phi_bc' = phi_bc + phi_ab' - phi_ab.
A pure state requires the four vectors of every qubit to sum to zero: six
scalar equations solved here by damped Gauss-Newton with multiple starts.
Solutions come in conjugate pairs (negate every angle); boundary solutions
with all angles in {0, pi} are self-conjugate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .invariants import (
    InfeasibleInvariantsError,
    InvariantSet3Q,
    expansion_probabilities,
    feasibility,
)
from .states import DensityOperator, pure_state_from_amplitudes

TWO_PI = 2.0 * np.pi

# angles of the twelve vectors as integer combinations of the four free
# parameters; row order is qubit a then b then c, each (++, +-, -+, --)
_ANGLE_MATRIX = np.array(
    [
        [0, 0, 0, 0],
        [0, 0, 1, 0],
        [1, 0, 0, 0],
        [0, 1, 1, 0],
        [0, 0, 0, 0],
        [0, 0, 0, 1],
        [1, 0, 0, 0],
        [0, 1, 0, 1],
        [0, 0, 0, 0],
        [0, 0, 0, 1],
        [0, 0, 1, 0],
        [-1, 1, 1, 1],
    ],
    dtype=float,
)


def _wrap(angle) -> np.ndarray | float:
    """Map angles to (-pi, pi]."""
    wrapped = -((-np.asarray(angle) + np.pi) % TWO_PI - np.pi)
    return wrapped


def _circ_dist(a: float, b: float) -> float:
    return abs(float(_wrap(a - b)))


@dataclass(frozen=True)
class AngleSet:
    """The six relative angles of the twelve consistency vectors.

    Only four are independent; the primed ac and bc angles satisfy the
    closure rules by construction for any solver output.
    """

    phi_ab: float
    phi_ab_prime: float
    phi_ac: float
    phi_ac_prime: float
    phi_bc: float
    phi_bc_prime: float

    @classmethod
    def from_free(cls, phi_ab: float, phi_ab_prime: float, phi_ac: float, phi_bc: float) -> "AngleSet":
        return cls(
            phi_ab=float(_wrap(phi_ab)),
            phi_ab_prime=float(_wrap(phi_ab_prime)),
            phi_ac=float(_wrap(phi_ac)),
            phi_ac_prime=float(_wrap(phi_ac + phi_ab_prime - phi_ab)),
            phi_bc=float(_wrap(phi_bc)),
            phi_bc_prime=float(_wrap(phi_bc + phi_ab_prime - phi_ab)),
        )

    @classmethod
    def zeros(cls) -> "AngleSet":
        return cls(0.0, 0.0, 0.0, 0.0, 0.0, 0.0)

    def free(self) -> np.ndarray:
        return np.array([self.phi_ab, self.phi_ab_prime, self.phi_ac, self.phi_bc])

    def as_tuple(self) -> tuple[float, ...]:
        return (
            self.phi_ab,
            self.phi_ab_prime,
            self.phi_ac,
            self.phi_ac_prime,
            self.phi_bc,
            self.phi_bc_prime,
        )

    def negated(self) -> "AngleSet":
        return AngleSet.from_free(*(-self.free()))

    def closure_residual(self) -> float:
        """Max deviation of the two closure rules, modulo 2 pi."""
        r1 = _circ_dist(self.phi_ac_prime, self.phi_ac + self.phi_ab_prime - self.phi_ab)
        r2 = _circ_dist(self.phi_bc_prime, self.phi_bc + self.phi_ab_prime - self.phi_ab)
        return max(r1, r2)

    def twelve_angles(self) -> np.ndarray:
        return _ANGLE_MATRIX @ self.free()

    def is_real_line(self, tol: float = 1e-8) -> bool:
        """True when every vector lies on the reference line (angles 0/pi)."""
        return all(
            min(_circ_dist(t, 0.0), _circ_dist(t, np.pi)) <= tol
            for t in self.twelve_angles()
        )


def vector_lengths(probs, floor: float = 1e-13) -> np.ndarray:
    """Lengths of the twelve vectors from the eight expansion probabilities.

    Order: qubit a [perp,jk], qubit b [i,perp,k], qubit c [ij,perp], each
    over sign pairs (++, +-, -+, --); every length is sqrt of the product
    of the two probabilities joined by flipping that qubit's sign.
    Probabilities below ``floor`` are treated as exact zeros: boundary
    states produce analytic zeros contaminated by rounding, and the square
    root would otherwise inflate that noise into unclosable vectors.
    """
    p = np.asarray(probs, dtype=float).ravel()
    if p.size != 8:
        raise ValueError("expected eight probabilities")
    if p.min() < -1e-10:
        raise ValueError(f"negative probability {p.min()}")
    p = np.where(p < floor, 0.0, p)
    out = np.empty(12)
    for jk in range(4):
        out[jk] = np.sqrt(p[jk] * p[4 | jk])
    for idx, (i, k) in enumerate(((0, 0), (0, 1), (1, 0), (1, 1))):
        out[4 + idx] = np.sqrt(p[(i << 2) | k] * p[(i << 2) | 2 | k])
    for ij in range(4):
        out[8 + ij] = np.sqrt(p[ij << 1] * p[(ij << 1) | 1])
    return out


def residual(lengths: np.ndarray, free_angles: np.ndarray) -> np.ndarray:
    """Six components of the three planar sums at the given free angles."""
    ang = _ANGLE_MATRIX @ free_angles
    cos, sin = np.cos(ang), np.sin(ang)
    out = np.empty(6)
    for g in range(3):
        sl = slice(4 * g, 4 * g + 4)
        out[2 * g] = lengths[sl] @ cos[sl]
        out[2 * g + 1] = lengths[sl] @ sin[sl]
    return out


def _jacobian(lengths: np.ndarray, free_angles: np.ndarray) -> np.ndarray:
    ang = _ANGLE_MATRIX @ free_angles
    cos, sin = np.cos(ang), np.sin(ang)
    jac = np.zeros((6, 4))
    for g in range(3):
        sl = slice(4 * g, 4 * g + 4)
        jac[2 * g] = -(lengths[sl] * sin[sl]) @ _ANGLE_MATRIX[sl]
        jac[2 * g + 1] = (lengths[sl] * cos[sl]) @ _ANGLE_MATRIX[sl]
    return jac


def _newton_from(
    lengths: np.ndarray,
    start: np.ndarray,
    tol: float,
    max_iter: int,
    max_halvings: int = 40,
) -> np.ndarray | None:
    x = start.astype(float)
    r = residual(lengths, x)
    rnorm = np.abs(r).max()
    for _ in range(max_iter):
        if rnorm < tol:
            return x
        jac = _jacobian(lengths, x)
        step, *_ = np.linalg.lstsq(jac, -r, rcond=None)
        lam = 1.0
        for _ in range(max_halvings):
            cand = x + lam * step
            rc = residual(lengths, cand)
            if np.abs(rc).max() < rnorm:
                x, r, rnorm = cand, rc, np.abs(rc).max()
                break
            lam *= 0.5
        else:
            return x if rnorm < tol else None
    return x if rnorm < tol else None


def solve(
    lengths,
    tol: float = 1e-11,
    restarts: int = 32,
    seed: int = 0,
    max_iter: int = 200,
) -> list[AngleSet]:
    """All distinct angle assignments closing the three vector sums.

    Multi-start damped Gauss-Newton over the four free angles.  Starts are
    the sixteen {0, pi}^4 lattice points (boundary solutions live there)
    plus uniform random draws; the random budget is enlarged once before
    giving up.  Returned solutions are deduplicated modulo 2 pi, completed
    with their sign-flipped conjugates, and deterministically ordered.  An
    empty list means no assignment closed the sums: genuinely infeasible
    lengths, or a solver failure if feasibility said a state exists.
    """
    lengths = np.asarray(lengths, dtype=float).ravel()
    if lengths.size != 12:
        raise ValueError("expected twelve lengths")
    if lengths.min() < -1e-12:
        raise ValueError("lengths must be nonnegative")
    if lengths.max() < 1e-12:
        return [AngleSet.zeros()]

    rng = np.random.default_rng(seed)
    lattice = [
        np.array([i * np.pi, j * np.pi, k * np.pi, l * np.pi])
        for i in (0, 1)
        for j in (0, 1)
        for k in (0, 1)
        for l in (0, 1)
    ]
    found: list[np.ndarray] = []

    def try_starts(starts) -> None:
        for start in starts:
            x = _newton_from(lengths, start, tol, max_iter)
            if x is None:
                continue
            # boundary solutions are exact {0, pi} lattice points with a
            # singular Jacobian; snap nearby converged iterates so the flat
            # valley around a line solution does not smear into duplicates
            snapped = np.round(np.asarray(x) / np.pi) * np.pi
            if (
                np.abs(_wrap(x - snapped)).max() < 1e-3
                and np.abs(residual(lengths, snapped)).max() < tol
            ):
                x = snapped
            x = _wrap(x)
            if not any(
                max(_circ_dist(a, b) for a, b in zip(x, prev)) < 1e-6 for prev in found
            ):
                found.append(np.asarray(x))

    try_starts(lattice)
    try_starts(rng.uniform(-np.pi, np.pi, size=(restarts, 4)))
    if not found:
        try_starts(rng.uniform(-np.pi, np.pi, size=(8 * restarts, 4)))

    # conjugate completion: negating every angle preserves the sums
    for x in list(found):
        neg = _wrap(-x)
        if not any(
            max(_circ_dist(a, b) for a, b in zip(neg, prev)) < 1e-6 for prev in found
        ):
            found.append(np.asarray(neg))

    sols = [AngleSet.from_free(*x) for x in found]
    sols.sort(key=lambda s: tuple(np.round(s.as_tuple(), 9)))
    return sols


def reconstruct(
    inv: InvariantSet3Q,
    angles: AngleSet,
    axes=None,
    tol: float = 1e-8,
) -> DensityOperator:
    """Assemble the pure state fixed by invariants plus solved angles.

    The expansion probabilities give the amplitude moduli; per-state phases
    integrate the twelve vector directions (references at phase zero), which
    is consistent exactly because the angle closure holds.  The result is
    pure by construction and reproduces the input invariants.
    """
    report = feasibility(inv)
    if not report.feasible:
        raise InfeasibleInvariantsError("; ".join(report.violations))
    closure = angles.closure_residual()
    if closure > 1e-8:
        raise ValueError(
            f"angle set violates the pure-state closure rules (residual {closure})"
        )
    probs = expansion_probabilities(inv)
    lengths = vector_lengths(probs)
    res = np.abs(residual(lengths, angles.free())).max()
    if res > tol:
        raise ValueError(f"angles do not close the vector sums (residual {res})")
    phases = np.zeros(8)
    phases[0b110] = angles.phi_ab
    phases[0b101] = angles.phi_ac
    phases[0b011] = angles.phi_bc
    phases[0b111] = angles.phi_ac + angles.phi_bc + angles.phi_ab_prime
    amps = np.sqrt(np.clip(probs, 0.0, None)) * np.exp(1j * phases)
    amps = amps / np.linalg.norm(amps)
    return pure_state_from_amplitudes(amps, axes=axes)
