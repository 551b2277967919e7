"""Density-operator constructors.

A pure product state is a product of per-qubit Bloch projectors
(1 + s n)/2.  Two orthogonal product states span a projector space with
its own Pauli-like basis (P, X, Y, Z), the projector sphere; any
superposition of the pair is a point on that sphere.  The general pure
state combines the diagonal product-state expansion with one X-term per
pair of basis states, weighted by sqrt(p_i p_j) and rotated by the phase
difference of the amplitudes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import oracle
from .algebra import Multivector, exp_i

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
UNIT_TOL = 1e-12


def _unit3(v, tol: float = UNIT_TOL) -> np.ndarray:
    u = np.asarray(v, dtype=float).reshape(3)
    if abs(np.linalg.norm(u) - 1.0) > tol:
        raise ValueError(f"expected a unit 3-vector, got norm {np.linalg.norm(u)}")
    return u


def frame_for(axis) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Deterministic right-handed orthonormal frame (e1, e2, axis).

    e1 is the reference orthogonal direction used for projector-sphere X
    vectors; for the z axis the frame is (x, y, z).
    """
    n = _unit3(axis)
    k = int(np.argmin(np.abs(n)))
    e = np.zeros(3)
    e[k] = 1.0
    e1 = e - np.dot(e, n) * n
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(n, e1)
    return e1, e2, n


class DensityOperator:
    """Hermitian, unit-trace multivector describing a quantum state."""

    __slots__ = ("mv", "n_qubits")

    def __init__(self, mv: Multivector):
        if mv.hermitian_defect() > HERMITIAN_TOL:
            raise ValueError("density operator must be Hermitian")
        if abs((1 << mv.n_qubits) * mv.scalar_part() - 1.0) > TRACE_TOL:
            raise ValueError("density operator must have unit trace")
        self.mv = mv
        self.n_qubits = mv.n_qubits

    def matrix(self) -> np.ndarray:
        return oracle.to_matrix(self.mv)

    def purity(self) -> float:
        """Tr(rho^2) = 2^N <rho rho>."""
        return (1 << self.n_qubits) * (self.mv * self.mv).scalar_part()

    def is_pure(self, tol: float = 1e-9) -> bool:
        return (self.mv * self.mv - self.mv).max_abs() <= tol

    def bloch_vector(self) -> np.ndarray:
        if self.n_qubits != 1:
            raise ValueError("bloch_vector is defined for single-qubit operators")
        return 2.0 * self.mv.vector_part(0)

    def expectation(self, observable: Multivector) -> float:
        """Tr(O rho) via the scalar part."""
        return (1 << self.n_qubits) * (observable * self.mv).scalar_part()

    def __repr__(self) -> str:
        return f"DensityOperator(n={self.n_qubits}, {len(self.mv)} terms)"


@dataclass(frozen=True)
class ProductState:
    """Per-qubit spin axes and signs defining a pure product state."""

    axes: tuple[tuple[float, float, float], ...]
    signs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.axes) != len(self.signs):
            raise ValueError("axes and signs must have equal length")
        for ax in self.axes:
            _unit3(ax)
        if any(s not in (-1, 1) for s in self.signs):
            raise ValueError("signs must be +1 or -1")

    @property
    def n_qubits(self) -> int:
        return len(self.signs)

    @classmethod
    def computational(cls, bits: str | Sequence[int], axes=None) -> "ProductState":
        """Bit string to product state: bit 0 is spin up along the axis."""
        bit_list = [int(b) for b in bits]
        if axes is None:
            axes = [(0.0, 0.0, 1.0)] * len(bit_list)
        return cls(
            tuple(tuple(float(c) for c in ax) for ax in axes),
            tuple(1 if b == 0 else -1 for b in bit_list),
        )

    def flipped(self) -> "ProductState":
        return ProductState(self.axes, tuple(-s for s in self.signs))


def bloch_state(n) -> DensityOperator:
    """Single-qubit (1 + n . sigma)/2 for |n| <= 1."""
    v = np.asarray(n, dtype=float).reshape(3)
    if np.linalg.norm(v) > 1.0 + UNIT_TOL:
        raise ValueError("Bloch vector must lie inside the unit ball")
    return DensityOperator(0.5 * (Multivector.scalar(1, 1.0) + Multivector.vector(1, 0, v)))


def _product_state_mv(ps: ProductState) -> Multivector:
    n = ps.n_qubits
    mv = Multivector.scalar(n, 1.0)
    for q, (ax, s) in enumerate(zip(ps.axes, ps.signs)):
        factor = 0.5 * (Multivector.scalar(n, 1.0) + s * Multivector.vector(n, q, ax))
        mv = mv * factor
    return mv


def product_state(ps: ProductState) -> DensityOperator:
    return DensityOperator(_product_state_mv(ps))


@dataclass(frozen=True)
class ProjectorSphere:
    """Basis (P, X, Y, Z) of the two-state projector space.

    P projects onto the span of two orthogonal product states, Z separates
    them (north minus south), X is the product of the reference orthogonal
    vectors of the qubits whose signs differ, and Y = iota X Z.
    """

    p: Multivector
    x: Multivector
    y: Multivector
    z: Multivector
    differing: frozenset[int]

    @property
    def n_qubits(self) -> int:
        return self.p.n_qubits

    def axis(self, phi: float) -> Multivector:
        """In-plane unit vector cos(phi) X + sin(phi) Y."""
        return float(np.cos(phi)) * self.x + float(np.sin(phi)) * self.y

    def check(self, tol: float = 1e-10) -> None:
        """Assert the Pauli-algebra relations of the sphere basis."""
        p, x, y, z = self.p, self.x, self.y, self.z
        assert (p * p - p).max_abs() <= tol
        for v in (x, y, z):
            assert (v * v - p).max_abs() <= tol
            assert (v * p - v).max_abs() <= tol
            assert (p * v - v).max_abs() <= tol
        assert (x * y + y * x).max_abs() <= tol
        assert (x * z + z * x).max_abs() <= tol
        assert (y * z + z * y).max_abs() <= tol
        assert (x * y * z - Multivector.iota(p.n_qubits) * p).max_abs() <= tol


def _sphere_from_parts(
    mv_north: Multivector,
    mv_south: Multivector,
    differing: Iterable[int],
    axes,
) -> ProjectorSphere:
    n = mv_north.n_qubits
    p = mv_north + mv_south
    z = mv_north - mv_south
    x = p
    for q in sorted(differing):
        e1, _, _ = frame_for(axes[q])
        x = Multivector.vector(n, q, e1) * x
    y = Multivector.iota(n) * x * z
    return ProjectorSphere(p=p, x=x, y=y, z=z, differing=frozenset(differing))


def projector_sphere(s1: ProductState, s2: ProductState, north_first: bool = True) -> ProjectorSphere:
    """Sphere basis for the span of two orthogonal product states.

    The states must share per-qubit axes and differ in sign on at least one
    qubit.  ``north_first`` selects Z = s1 - s2; flipping it negates Z and Y
    and hence the handedness of the azimuthal angle.
    """
    if s1.n_qubits != s2.n_qubits:
        raise ValueError("product states must have the same qubit count")
    for a1, a2 in zip(s1.axes, s2.axes):
        if np.linalg.norm(np.subtract(a1, a2)) > 1e-9:
            raise ValueError("product states must share per-qubit axes")
    differing = {q for q in range(s1.n_qubits) if s1.signs[q] != s2.signs[q]}
    if not differing:
        raise ValueError("product states are identical, not orthogonal")
    first, second = (s1, s2) if north_first else (s2, s1)
    return _sphere_from_parts(
        _product_state_mv(first), _product_state_mv(second), differing, s1.axes
    )


def sphere_state(sph: ProjectorSphere, theta: float, phi: float) -> DensityOperator:
    """(P + cos(theta) Z + sin(theta) (cos(phi) X + sin(phi) Y)) / 2."""
    s = float(np.cos(theta)) * sph.z + float(np.sin(theta)) * sph.axis(phi)
    return DensityOperator(0.5 * (sph.p + s))


def pure_state_from_amplitudes(amps, axes=None) -> DensityOperator:
    """Density operator of sum_i alpha_i |i> built term by term.

    Diagonal part: probability-weighted product states in index order
    (qubit 0's bit is the most significant).  Off-diagonal part: for every
    pair i < j an X-term of the pair's projector sphere with weight
    sqrt(p_i p_j), rotated by arg(alpha_j) - arg(alpha_i).  Zero-probability
    basis states contribute no X-terms and arg(0) is taken as 0.
    """
    psi = np.asarray(amps, dtype=complex).ravel()
    dim = psi.size
    n = dim.bit_length() - 1
    if (1 << n) != dim:
        raise ValueError(f"amplitude count {dim} is not a power of two")
    nrm = np.linalg.norm(psi)
    if abs(nrm - 1.0) > 1e-9:
        raise ValueError(f"amplitudes are not normalised (norm {nrm})")
    psi = psi / nrm
    if axes is None:
        axes = [(0.0, 0.0, 1.0)] * n
    axes = [tuple(float(c) for c in _unit3(ax)) for ax in axes]

    probs = np.abs(psi) ** 2
    phases = np.where(np.abs(psi) > 0.0, np.angle(psi), 0.0)
    bits = [format(i, f"0{n}b") for i in range(dim)]
    basis_mvs = {
        i: _product_state_mv(ProductState.computational(bits[i], axes))
        for i in range(dim)
        if probs[i] > 0.0
    }

    mv = Multivector.zero(n)
    for i, bi in basis_mvs.items():
        mv = mv + probs[i] * bi
    for i in sorted(basis_mvs):
        for j in sorted(basis_mvs):
            if j <= i:
                continue
            weight = float(np.sqrt(probs[i] * probs[j]))
            if weight < 1e-16:
                continue
            differing = {q for q in range(n) if bits[i][q] != bits[j][q]}
            sph = _sphere_from_parts(basis_mvs[i], basis_mvs[j], differing, axes)
            psi_ij = float(phases[j] - phases[i])
            mv = mv + weight * sph.axis(psi_ij)
    return DensityOperator(mv)


_BELL_TERMS = {
    "phi+": {"II": 0.25, "ZZ": 0.25, "XX": 0.25, "YY": -0.25},
    "phi-": {"II": 0.25, "ZZ": 0.25, "XX": -0.25, "YY": 0.25},
    "psi+": {"II": 0.25, "ZZ": -0.25, "XX": 0.25, "YY": 0.25},
    "psi-": {"II": 0.25, "ZZ": -0.25, "XX": -0.25, "YY": -0.25},
}


def bell(which: str) -> DensityOperator:
    """One of the four Bell states: 'phi+', 'phi-', 'psi+', 'psi-'."""
    key = which.lower().replace("φ", "phi").replace("ψ", "psi")
    if key not in _BELL_TERMS:
        raise ValueError(f"unknown Bell state {which!r}")
    return DensityOperator(Multivector(2, _BELL_TERMS[key]))


def ghz() -> DensityOperator:
    """(|000> + |111>)/sqrt(2) in closed form."""
    terms = {
        "III": 0.125,
        "ZZI": 0.125,
        "ZIZ": 0.125,
        "IZZ": 0.125,
        "XXX": 0.125,
        "XYY": -0.125,
        "YXY": -0.125,
        "YYX": -0.125,
    }
    return DensityOperator(Multivector(3, terms))


def w_state() -> DensityOperator:
    """(|001> + |010> + |100>)/sqrt(3)."""
    amps = np.zeros(8)
    amps[[1, 2, 4]] = 1.0 / np.sqrt(3.0)
    return pure_state_from_amplitudes(amps)


@dataclass(frozen=True)
class Rotor:
    """Even unit-magnitude multivector; conjugation implements a unitary."""

    mv: Multivector

    def __post_init__(self) -> None:
        defect = (self.mv * self.mv.reverse() - 1.0).max_abs()
        if defect > 1e-10:
            raise ValueError(f"rotor is not unitary (defect {defect})")

    @classmethod
    def from_generator(cls, generator: Multivector, angle: float) -> "Rotor":
        """exp(-iota * generator * angle) for a Hermitian generator."""
        return cls(exp_i(generator, angle))

    def compose(self, other: "Rotor") -> "Rotor":
        return Rotor(self.mv * other.mv)


def local_rotor(n: int, qubit: int, axis, angle: float) -> Rotor:
    """Rotation of one qubit's Bloch sphere by ``angle`` about ``axis``."""
    generator = 0.5 * Multivector.vector(n, qubit, _unit3(axis))
    return Rotor.from_generator(generator, angle)


def apply_rotor(r: Rotor, rho: DensityOperator) -> DensityOperator:
    return DensityOperator(r.mv * rho.mv * r.mv.reverse())
