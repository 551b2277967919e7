"""Local-unitary invariants of two- and three-qubit pure states.

For a three-qubit pure state the expansion over the eight product states
built from the reduced spin directions is parametrised by five invariants:
the three reduced Bloch lengths and the two correlation scalars

    vbar2 = < v_a v_b V_ab >      (equal across the three qubit pairs)
    vbar3 = < v_a v_b v_c V_abc >

The eight expansion probabilities, the Sudbery-style polynomial invariants
(including the squared 3-tangle), and the feasibility polynomials F and B
are all closed-form functions of these five numbers.  The squared 3-tangle
has an independent ground truth in the Cayley hyperdeterminant of the
amplitude tensor.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .algebra import Multivector
from .states import DensityOperator

DEGENERATE_V = 1e-8


class InfeasibleInvariantsError(ValueError):
    """Raised when no pure state exists with the requested invariants."""


@dataclass(frozen=True)
class InvariantSet3Q:
    """The five local-unitary invariants (v_a, v_b, v_c, vbar2, vbar3)."""

    v_a: float
    v_b: float
    v_c: float
    vbar2: float
    vbar3: float

    @property
    def vs(self) -> tuple[float, float, float]:
        return (self.v_a, self.v_b, self.v_c)

    @property
    def alpha(self) -> float:
        return self.v_a**2 + self.v_b**2 + self.v_c**2

    @property
    def beta(self) -> float:
        a2, b2, c2 = self.v_a**2, self.v_b**2, self.v_c**2
        return a2 * b2 + a2 * c2 + b2 * c2

    @property
    def gamma(self) -> float:
        return (self.v_a * self.v_b * self.v_c) ** 2


class SudberyInvariants(NamedTuple):
    i2: float
    i3: float
    i4: float
    i5: float
    i6: float


def _vector_mv(n: int, qubit: int, vec: np.ndarray) -> Multivector:
    return Multivector.vector(n, qubit, vec)


def _pure_or_raise(rho: DensityOperator, tol: float = 1e-8) -> None:
    if not rho.is_pure(tol):
        raise ValueError("invariant extraction requires a pure state")


def invariants_2q(rho: DensityOperator) -> float:
    """Reduced Bloch length v of a two-qubit pure state.

    Checks the pure-state consistency conditions: the two reduced lengths
    agree and < v_a v_b V_ab > equals v^2.
    """
    if rho.n_qubits != 2:
        raise ValueError("expected a two-qubit state")
    _pure_or_raise(rho)
    mv4 = rho.mv * 4.0
    va = mv4.vector_part(0)
    vb = mv4.vector_part(1)
    la, lb = float(np.linalg.norm(va)), float(np.linalg.norm(vb))
    if abs(la - lb) > 1e-9:
        raise ValueError(f"reduced Bloch lengths differ: {la} vs {lb}")
    v = 0.5 * (la + lb)
    if v > DEGENERATE_V:
        vab = mv4.support_equals([0, 1])
        corr = (_vector_mv(2, 0, va) * _vector_mv(2, 1, vb) * vab).scalar_part()
        if abs(corr - v * v) > 1e-9:
            raise ValueError(f"pair correlation {corr} inconsistent with v^2 = {v * v}")
    return v


def invariants_3q(rho: DensityOperator) -> InvariantSet3Q:
    """Extract (v_a, v_b, v_c, vbar2, vbar3) from a three-qubit pure state.

    All three reduced Bloch lengths must exceed the degenerate threshold;
    states with vanishing vectors carry no invariant expansion and are
    handled by `degenerate_limit`.
    """
    if rho.n_qubits != 3:
        raise ValueError("expected a three-qubit state")
    _pure_or_raise(rho)
    mv8 = rho.mv * 8.0
    vecs = [mv8.vector_part(q) for q in range(3)]
    lens = [float(np.linalg.norm(v)) for v in vecs]
    if min(lens) <= DEGENERATE_V:
        raise ValueError(
            "vanishing reduced Bloch vector: use degenerate_limit for this state"
        )
    vmvs = [_vector_mv(3, q, vecs[q]) for q in range(3)]
    pair_scalars = []
    for qa, qb in ((0, 1), (0, 2), (1, 2)):
        vab = mv8.support_equals([qa, qb])
        pair_scalars.append((vmvs[qa] * vmvs[qb] * vab).scalar_part())
    spread = max(pair_scalars) - min(pair_scalars)
    if spread > 1e-9:
        raise ValueError(f"pairwise invariants disagree by {spread}")
    vbar2 = float(np.mean(pair_scalars))
    vabc = mv8.support_equals([0, 1, 2])
    vbar3 = float((vmvs[0] * vmvs[1] * vmvs[2] * vabc).scalar_part())
    return InvariantSet3Q(lens[0], lens[1], lens[2], vbar2, vbar3)


def expansion_probabilities(inv: InvariantSet3Q) -> np.ndarray:
    """The eight probabilities p[ijk], indexed by sign bits (0 = +, qubit a
    most significant); sums to one identically."""
    va, vb, vc = inv.vs
    if min(va, vb, vc) < 1e-10:
        raise ValueError("expansion probabilities require nonvanishing Bloch lengths")
    vbar_ab = inv.vbar2 / (va * vb)
    vbar_ac = inv.vbar2 / (va * vc)
    vbar_bc = inv.vbar2 / (vb * vc)
    vbar_abc = inv.vbar3 / (va * vb * vc)
    out = np.empty(8)
    for idx in range(8):
        i = 1.0 if not (idx & 4) else -1.0
        j = 1.0 if not (idx & 2) else -1.0
        k = 1.0 if not (idx & 1) else -1.0
        out[idx] = (
            1.0
            + i * va
            + j * vb
            + k * vc
            + i * j * vbar_ab
            + i * k * vbar_ac
            + j * k * vbar_bc
            + i * j * k * vbar_abc
        ) / 8.0
    return out


def sudbery(inv: InvariantSet3Q) -> SudberyInvariants:
    """Polynomial invariants I2..I6; I6 is the squared 3-tangle."""
    va, vb, vc = inv.vs
    i2 = (1.0 + va * va) / 2.0
    i3 = (1.0 + vb * vb) / 2.0
    i4 = (1.0 + vc * vc) / 2.0
    i5 = (1.0 + 3.0 * inv.vbar2) / 4.0
    quartic = va**4 + vb**4 + vc**4
    i6 = (
        1.0
        - 2.0 * inv.alpha
        - 2.0 * inv.beta
        + quartic
        + 4.0 * (inv.vbar2 + inv.vbar3)
    )
    return SudberyInvariants(i2, i3, i4, i5, i6)


def three_tangle_oracle(amps) -> float:
    """Squared 3-tangle from the Cayley hyperdeterminant of the amplitudes.

    tau = 4 |d1 - 2 d2 + 4 d3| over the 2x2x2 amplitude tensor; returns
    tau^2.  Ground truth for the polynomial route: 1 on GHZ, 0 on W.
    """
    a = np.asarray(amps, dtype=complex).ravel()
    if a.size != 8:
        raise ValueError("expected eight amplitudes")
    nrm = np.linalg.norm(a)
    if abs(nrm - 1.0) > 1e-9:
        raise ValueError(f"amplitudes are not normalised (norm {nrm})")
    a = a / nrm
    d1 = (
        a[0] ** 2 * a[7] ** 2
        + a[1] ** 2 * a[6] ** 2
        + a[2] ** 2 * a[5] ** 2
        + a[4] ** 2 * a[3] ** 2
    )
    d2 = (
        a[0] * a[7] * a[3] * a[4]
        + a[0] * a[7] * a[5] * a[2]
        + a[0] * a[7] * a[6] * a[1]
        + a[3] * a[4] * a[5] * a[2]
        + a[3] * a[4] * a[6] * a[1]
        + a[5] * a[2] * a[6] * a[1]
    )
    d3 = a[0] * a[6] * a[5] * a[3] + a[7] * a[1] * a[2] * a[4]
    tau = 4.0 * abs(d1 - 2.0 * d2 + 4.0 * d3)
    return float(tau * tau)


def B_function(inv: InvariantSet3Q) -> float:
    """Boundary cubic in vbar3; pure states exist only where B <= 0."""
    a, b, g = inv.alpha, inv.beta, inv.gamma
    v2, v3 = inv.vbar2, inv.vbar3
    return (
        -(v3**3)
        + (b + v2) * v3**2
        + (a * v2**2 - 2.0 * b * v2 + g * (1.0 - a)) * v3
        + v2**4
        - a * v2**3
        + (b - 2.0 * g) * v2**2
        - g * (1.0 - a) * v2
        + g * g
    )


def F_function(inv: InvariantSet3Q) -> float:
    """Product of the eight signed length combinations of one qubit's
    consistency vectors, expressed through the invariants."""
    va, vb, vc = inv.vs
    if min(va, vb, vc) < 1e-10:
        raise ValueError("F is undefined for vanishing Bloch lengths")
    g = inv.gamma
    return (g - inv.vbar2 * inv.vbar3) ** 2 / (4096.0 * g**3) * B_function(inv)


@dataclass(frozen=True)
class FeasibilityReport:
    feasible: bool
    violations: tuple[str, ...]


def feasibility(inv: InvariantSet3Q, slack: float = 1e-10) -> FeasibilityReport:
    """Existence test: probabilities nonnegative, lengths in [0, 1], B <= 0."""
    violations: list[str] = []
    for name, v in zip("abc", inv.vs):
        if not -slack <= v <= 1.0 + slack:
            violations.append(f"v_{name} = {v} outside [0, 1]")
    va, vb, vc = inv.vs
    pair_floor = min(va * vb, va * vc, vb * vc)
    if pair_floor < 1e-10:
        # vanishing vector: both correlation invariants must vanish with it
        if abs(inv.vbar2) > slack or abs(inv.vbar3) > slack:
            violations.append("nonzero vbar with a vanishing Bloch vector")
        probs = np.full(8, 0.125)
    else:
        probs = expansion_probabilities(inv)
    bad = np.flatnonzero(probs < -slack)
    for idx in bad:
        violations.append(f"p[{idx:03b}] = {probs[idx]} < 0")
    b_val = B_function(inv)
    if b_val > slack:
        violations.append(f"B = {b_val} > 0")
    return FeasibilityReport(not violations, tuple(violations))


def _amplitudes_on_basis(probs_by_index: dict[int, float]) -> np.ndarray:
    amps = np.zeros(8)
    for idx, p in probs_by_index.items():
        # rounding can leave 1e-17 residue where a probability is an exact 0
        amps[idx] = np.sqrt(p) if p > 1e-13 else 0.0
    return amps / np.linalg.norm(amps)


def seed_probabilities(va: float, vb: float, vc: float) -> dict[int, float]:
    """The four surviving probabilities of the seed point, keyed by basis
    index ({+++} -> 000, {+--} -> 011, {-+-} -> 101, {--+} -> 110)."""
    return {
        0b000: (1.0 + va + vb + vc) / 4.0,
        0b011: (1.0 + va - vb - vc) / 4.0,
        0b101: (1.0 - va + vb - vc) / 4.0,
        0b110: (1.0 - va - vb + vc) / 4.0,
    }


def negative_seed_probabilities(va: float, vb: float, vc: float) -> dict[int, float]:
    return {
        0b001: (1.0 + va + vb - vc) / 4.0,
        0b010: (1.0 + va - vb + vc) / 4.0,
        0b100: (1.0 - va + vb + vc) / 4.0,
        0b111: (1.0 - va - vb - vc) / 4.0,
    }


def zero_tangle_point(va: float, vb: float, vc: float) -> tuple[float, float]:
    """The (vbar2, vbar3) point solving I6 = 0 on the B = 0 boundary."""
    a2, b2, c2 = va * va, vb * vb, vc * vc
    f1 = (1.0 + a2 - b2 - c2) / 2.0
    f2 = (1.0 - a2 + b2 - c2) / 2.0
    f3 = (1.0 - a2 - b2 + c2) / 2.0
    product = f1 * f2 * f3
    if product < -1e-12:
        raise InfeasibleInvariantsError("zero-3-tangle point is not real here")
    xi = float(np.sqrt(max(0.0, product)))
    vbar2 = -(1.0 - a2 - b2 - c2) / 2.0 + xi
    vbar3 = 0.25 * (
        1.0 - a2 * a2 - b2 * b2 - c2 * c2 + 2.0 * (a2 * b2 + a2 * c2 + b2 * c2)
    ) - xi
    return vbar2, vbar3


def _check_range(va: float, vb: float, vc: float) -> None:
    for v in (va, vb, vc):
        if not 0.0 <= v <= 1.0 + 1e-12:
            raise ValueError(f"Bloch length {v} outside [0, 1]")


def special_state(
    kind: str, va: float, vb: float, vc: float
) -> tuple[InvariantSet3Q, DensityOperator]:
    """Construct one of the named invariant points and a state realising it.

    kind: 'seed', 'negative_seed', 'max_tangle' or 'zero_tangle'.  Raises
    InfeasibleInvariantsError when the existence condition fails:
    seed needs 1 + 2 v_min >= sum(v); negative seed needs sum(v) <= 1;
    max tangle needs v_min^2 >= v_a v_b v_c; zero tangle needs
    1 + 2 v_min >= sum(v) >= 1.
    """
    from .states import pure_state_from_amplitudes
    from .vectorsum import reconstruct, solve, vector_lengths

    _check_range(va, vb, vc)
    vmin = min(va, vb, vc)
    vsum = va + vb + vc
    g = va * vb * vc
    tol = 1e-12

    if kind == "seed":
        if 1.0 + 2.0 * vmin < vsum - tol:
            raise InfeasibleInvariantsError(
                f"seed state needs 1 + 2 v_min >= {vsum}"
            )
        inv = InvariantSet3Q(va, vb, vc, g, g)
        amps = _amplitudes_on_basis(seed_probabilities(va, vb, vc))
        return inv, pure_state_from_amplitudes(amps)
    if kind == "negative_seed":
        if vsum > 1.0 + tol:
            raise InfeasibleInvariantsError(f"negative seed needs sum(v) = {vsum} <= 1")
        inv = InvariantSet3Q(va, vb, vc, -g, -g)
        amps = _amplitudes_on_basis(negative_seed_probabilities(va, vb, vc))
        return inv, pure_state_from_amplitudes(amps)
    if kind == "max_tangle":
        if vmin * vmin < g - tol:
            raise InfeasibleInvariantsError(
                f"maximum-3-tangle state needs v_min^2 >= {g}"
            )
        inv = InvariantSet3Q(va, vb, vc, vmin * vmin, inv_gamma_ratio(va, vb, vc))
    elif kind == "zero_tangle":
        if not (1.0 - tol <= vsum and 1.0 + 2.0 * vmin >= vsum - tol):
            raise InfeasibleInvariantsError(
                f"zero-3-tangle state needs 1 + 2 v_min >= sum(v) = {vsum} >= 1"
            )
        vbar2, vbar3 = zero_tangle_point(va, vb, vc)
        inv = InvariantSet3Q(va, vb, vc, vbar2, vbar3)
    else:
        raise ValueError(f"unknown special state kind {kind!r}")

    report = feasibility(inv, slack=1e-9)
    if not report.feasible:
        raise InfeasibleInvariantsError("; ".join(report.violations))
    lengths = vector_lengths(expansion_probabilities(inv))
    solutions = solve(lengths)
    if not solutions:
        raise RuntimeError("vector-sum solver found no solution for a feasible point")
    return inv, reconstruct(inv, solutions[0])


def inv_gamma_ratio(va: float, vb: float, vc: float) -> float:
    """gamma / v_min^2, the vbar3 coordinate of the maximum-3-tangle point."""
    vmin = min(va, vb, vc)
    return (va * vb * vc) ** 2 / (vmin * vmin)


def degenerate_limit(case: str, *, v_b: float | None = None, v_c: float | None = None) -> DensityOperator:
    """Limiting states with one or more reduced vectors vanishing.

    'two_vectors': v_a = 0, lengths (v_b, v_c) remain, needs v_b + v_c <= 1.
    'one_vector': v_a = v_b = 0, only v_c remains.
    'no_vectors': all vanish; the state is GHZ up to local rotations.
    Each is the seed-state limit with the corresponding lengths sent to 0.
    """
    from .states import pure_state_from_amplitudes

    if case == "two_vectors":
        if v_b is None or v_c is None:
            raise ValueError("two_vectors needs v_b and v_c")
        _check_range(0.0, v_b, v_c)
        if v_b + v_c > 1.0 + 1e-12:
            raise InfeasibleInvariantsError("two_vectors needs v_b + v_c <= 1")
        probs = seed_probabilities(0.0, v_b, v_c)
    elif case == "one_vector":
        if v_c is None:
            raise ValueError("one_vector needs v_c")
        _check_range(0.0, 0.0, v_c)
        probs = seed_probabilities(0.0, 0.0, v_c)
    elif case == "no_vectors":
        probs = seed_probabilities(0.0, 0.0, 0.0)
    else:
        raise ValueError(f"unknown degenerate case {case!r}")
    return pure_state_from_amplitudes(_amplitudes_on_basis(probs))


def degenerate_i6(case: str, *, v_b: float = 0.0, v_c: float = 0.0) -> float:
    """Closed-form squared 3-tangle of the degenerate limits."""
    if case == "two_vectors":
        return (1.0 - v_c * v_c) ** 2 - 2.0 * (1.0 + v_c * v_c) * v_b * v_b + v_b**4
    if case == "one_vector":
        return (1.0 - v_c * v_c) ** 2
    if case == "no_vectors":
        return 1.0
    raise ValueError(f"unknown degenerate case {case!r}")
