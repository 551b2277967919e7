"""Correlated Pauli tensor algebra for multi-qubit systems.

The algebra is the tensor product of N copies of the Pauli algebra G(3),
with the per-qubit pseudoscalars identified to a single correlated element
``iota`` that plays the role of the imaginary unit.  A basis blade is
labelled by a Pauli string (one letter per qubit from {I, X, Y, Z}); a
general multivector is a finite complex combination of blades where the
real part of each coefficient weights the blade itself and the imaginary
part weights the blade times iota.

Blades are encoded as integers with two bits per qubit in (x, z) form:

    I -> 00, X -> 01, Z -> 10, Y -> 11

so that the blade product is XOR on keys plus a phase in {1, i, -1, -i}
obtained from bit counts.  Vectors of different qubits commute; within one
qubit the product follows x y = iota z and cyclic permutations.  The
reverse operation conjugates coefficients (blades are invariant under
per-qubit reversal, iota flips sign).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

import numpy as np

MAX_QUBITS = 12
PRUNE_EPS = 1e-14
HERMITIAN_TOL = 1e-10

_CODE_OF = {"I": 0, "X": 1, "Z": 2, "Y": 3}
_CHAR_OF = "IXZY"
_PHASES = np.array([1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j])

# bincount-based term merging is used while the full blade space fits
# comfortably in memory; beyond that we sort and reduce.
_DENSE_MERGE_BITS = 16


def _x_mask(n: int) -> int:
    """Mask with the x-bit of every qubit set (0b...010101)."""
    return ((1 << (2 * n)) - 1) // 3


def _check_n(n: int) -> int:
    if not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"qubit count must be in 1..{MAX_QUBITS}, got {n}")
    return n


def _key_of(letters: str) -> int:
    key = 0
    for a, ch in enumerate(letters):
        try:
            key |= _CODE_OF[ch] << (2 * a)
        except KeyError:
            raise ValueError(f"invalid Pauli letter {ch!r} in {letters!r}") from None
    return key


def _letters_of(key: int, n: int) -> str:
    return "".join(_CHAR_OF[(key >> (2 * a)) & 3] for a in range(n))


@dataclass(frozen=True)
class PauliString:
    """A basis blade label: one letter per qubit from {I, X, Y, Z}."""

    letters: str

    def __post_init__(self) -> None:
        _check_n(len(self.letters))
        _key_of(self.letters)

    @property
    def n_qubits(self) -> int:
        return len(self.letters)

    @property
    def key(self) -> int:
        return _key_of(self.letters)

    @classmethod
    def from_key(cls, key: int, n_qubits: int) -> "PauliString":
        return cls(_letters_of(key, n_qubits))

    def __str__(self) -> str:
        return self.letters


def _merge_terms(n: int, keys: np.ndarray, coeffs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sum duplicate keys, prune negligible coefficients, sort ascending."""
    if keys.size == 0:
        return keys.astype(np.int64), coeffs.astype(np.complex128)
    if 2 * n <= _DENSE_MERGE_BITS:
        span = 1 << (2 * n)
        acc = np.bincount(keys, weights=coeffs.real, minlength=span).astype(np.complex128)
        acc += 1j * np.bincount(keys, weights=coeffs.imag, minlength=span)
        nz = np.flatnonzero(np.abs(acc) > PRUNE_EPS)
        return nz.astype(np.int64), acc[nz]
    order = np.argsort(keys, kind="stable")
    ks = keys[order]
    cs = coeffs[order]
    starts = np.concatenate(([0], np.flatnonzero(np.diff(ks)) + 1))
    sums = np.add.reduceat(cs, starts)
    uk = ks[starts]
    keep = np.abs(sums) > PRUNE_EPS
    return uk[keep].astype(np.int64), sums[keep].astype(np.complex128)


class Multivector:
    """Immutable element of the correlated Pauli algebra on ``n_qubits`` qubits.

    Canonical form: keys strictly increasing, no coefficient below the prune
    threshold.  Two multivectors are equal iff their canonical term maps are.
    """

    __slots__ = ("n_qubits", "_keys", "_coeffs")

    def __init__(self, n_qubits: int, terms: Mapping[str, complex] | None = None):
        _check_n(n_qubits)
        object.__setattr__(self, "n_qubits", n_qubits)
        if terms:
            keys = np.array([_key_of(self._checked_label(s)) for s in terms], dtype=np.int64)
            coeffs = np.array([complex(c) for c in terms.values()], dtype=np.complex128)
            keys, coeffs = _merge_terms(n_qubits, keys, coeffs)
        else:
            keys = np.empty(0, dtype=np.int64)
            coeffs = np.empty(0, dtype=np.complex128)
        self._set(keys, coeffs)

    def _checked_label(self, label: str | PauliString) -> str:
        s = label.letters if isinstance(label, PauliString) else label
        if len(s) != self.n_qubits:
            raise ValueError(f"label {s!r} has length {len(s)}, expected {self.n_qubits}")
        return s

    def _set(self, keys: np.ndarray, coeffs: np.ndarray) -> None:
        keys.setflags(write=False)
        coeffs.setflags(write=False)
        object.__setattr__(self, "_keys", keys)
        object.__setattr__(self, "_coeffs", coeffs)

    @classmethod
    def _raw(cls, n: int, keys: np.ndarray, coeffs: np.ndarray) -> "Multivector":
        """Internal: wrap already-canonical term arrays."""
        mv = cls.__new__(cls)
        object.__setattr__(mv, "n_qubits", n)
        mv._set(keys, coeffs)
        return mv

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "Multivector":
        return cls(n)

    @classmethod
    def scalar(cls, n: int, value: complex) -> "Multivector":
        return cls(n, {"I" * n: value})

    @classmethod
    def blade(cls, letters: str, coeff: complex = 1.0) -> "Multivector":
        return cls(len(letters), {letters: coeff})

    @classmethod
    def vector(cls, n: int, qubit: int, components) -> "Multivector":
        """v_x x + v_y y + v_z z on one qubit of an n-qubit algebra."""
        if not 0 <= qubit < n:
            raise ValueError(f"qubit {qubit} out of range for n={n}")
        vx, vy, vz = (float(c) for c in components)
        terms = {}
        for code, val in ((1, vx), (3, vy), (2, vz)):
            label = ["I"] * n
            label[qubit] = _CHAR_OF[code]
            terms["".join(label)] = val
        return cls(n, terms)

    @classmethod
    def iota(cls, n: int) -> "Multivector":
        """The correlated pseudoscalar; squares to -1."""
        return cls.scalar(n, 1j)

    # -- term access -------------------------------------------------------

    @property
    def keys_array(self) -> np.ndarray:
        return self._keys

    @property
    def coeffs_array(self) -> np.ndarray:
        return self._coeffs

    def items(self) -> Iterator[tuple[int, complex]]:
        return zip(self._keys.tolist(), self._coeffs.tolist())

    def terms(self) -> dict[str, complex]:
        return {_letters_of(k, self.n_qubits): c for k, c in self.items()}

    def coeff(self, label: str | PauliString) -> complex:
        key = _key_of(self._checked_label(label))
        idx = np.searchsorted(self._keys, key)
        if idx < self._keys.size and self._keys[idx] == key:
            return complex(self._coeffs[idx])
        return 0.0 + 0.0j

    def __len__(self) -> int:
        return int(self._keys.size)

    def __repr__(self) -> str:
        shown = dict(list(self.terms().items())[:6])
        more = "" if len(self) <= 6 else f", +{len(self) - 6} terms"
        return f"Multivector(n={self.n_qubits}, {shown}{more})"

    # -- ring operations ---------------------------------------------------

    def _require_same_n(self, other: "Multivector") -> None:
        if self.n_qubits != other.n_qubits:
            raise ValueError(
                f"qubit count mismatch: {self.n_qubits} vs {other.n_qubits}"
            )

    def __add__(self, other) -> "Multivector":
        if isinstance(other, (int, float, complex)):
            other = Multivector.scalar(self.n_qubits, other)
        self._require_same_n(other)
        keys = np.concatenate([self._keys, other._keys])
        coeffs = np.concatenate([self._coeffs, other._coeffs])
        return Multivector._raw(self.n_qubits, *_merge_terms(self.n_qubits, keys, coeffs))

    __radd__ = __add__

    def __sub__(self, other) -> "Multivector":
        if isinstance(other, (int, float, complex)):
            other = Multivector.scalar(self.n_qubits, other)
        return self + (-other)

    def __rsub__(self, other) -> "Multivector":
        return (-self) + other

    def __neg__(self) -> "Multivector":
        return Multivector._raw(self.n_qubits, self._keys, -self._coeffs)

    def __mul__(self, other) -> "Multivector":
        if isinstance(other, (int, float, complex)):
            if abs(other) == 0.0:
                return Multivector.zero(self.n_qubits)
            coeffs = self._coeffs * other
            keep = np.abs(coeffs) > PRUNE_EPS
            return Multivector._raw(self.n_qubits, self._keys[keep], coeffs[keep])
        self._require_same_n(other)
        if self._keys.size == 0 or other._keys.size == 0:
            return Multivector.zero(self.n_qubits)
        k1 = self._keys[:, None]
        k2 = other._keys[None, :]
        xm = _x_mask(self.n_qubits)
        rk = np.bitwise_xor(k1, k2)
        e = (
            np.bitwise_count(k1 & (k1 >> 1) & xm).astype(np.int64)
            + np.bitwise_count(k2 & (k2 >> 1) & xm).astype(np.int64)
            - np.bitwise_count(rk & (rk >> 1) & xm).astype(np.int64)
            + 2 * np.bitwise_count((k1 >> 1) & k2 & xm).astype(np.int64)
        ) & 3
        coeffs = (self._coeffs[:, None] * other._coeffs[None, :]) * _PHASES[e]
        keys, coeffs = _merge_terms(self.n_qubits, rk.ravel(), coeffs.ravel())
        return Multivector._raw(self.n_qubits, keys, coeffs)

    def __rmul__(self, other) -> "Multivector":
        if isinstance(other, (int, float, complex)):
            return self * other
        return NotImplemented

    def __truediv__(self, other) -> "Multivector":
        return self * (1.0 / other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Multivector):
            return NotImplemented
        return (
            self.n_qubits == other.n_qubits
            and np.array_equal(self._keys, other._keys)
            and np.array_equal(self._coeffs, other._coeffs)
        )

    __hash__ = None  # mutable-looking container semantics

    # -- algebra-specific operations ---------------------------------------

    def reverse(self) -> "Multivector":
        """Per-qubit reversal of vector factors; the matrix-side adjoint."""
        return Multivector._raw(self.n_qubits, self._keys, np.conj(self._coeffs))

    def scalar_part(self) -> float:
        """Real coefficient of the identity blade."""
        if self._keys.size and self._keys[0] == 0:
            return float(self._coeffs[0].real)
        return 0.0

    def drop_qubits(self, qubits: Iterable[int]) -> "Multivector":
        """Discard every term touching the given qubits; reindex the rest.

        This is the unnormalised partial trace: the caller multiplies by
        2**len(qubits) to recover the reduced operator.
        """
        dropped = sorted(set(qubits))
        if not dropped:
            raise ValueError("subset of qubits to drop must be nonempty")
        if dropped[0] < 0 or dropped[-1] >= self.n_qubits:
            raise ValueError(f"qubits {dropped} out of range for n={self.n_qubits}")
        kept = [q for q in range(self.n_qubits) if q not in dropped]
        if not kept:
            raise ValueError("cannot drop every qubit")
        dmask = 0
        for q in dropped:
            dmask |= 3 << (2 * q)
        sel = (self._keys & dmask) == 0
        keys = self._keys[sel]
        coeffs = self._coeffs[sel]
        new_keys = np.zeros_like(keys)
        for i, q in enumerate(kept):
            new_keys |= ((keys >> (2 * q)) & 3) << (2 * i)
        return Multivector._raw(len(kept), *_merge_terms(len(kept), new_keys, coeffs))

    def support_equals(self, qubits: Iterable[int]) -> "Multivector":
        """Sub-multivector of terms acting non-trivially on exactly ``qubits``."""
        target = 0
        for q in set(qubits):
            if not 0 <= q < self.n_qubits:
                raise ValueError(f"qubit {q} out of range")
            target |= 1 << q
        sup = np.zeros_like(self._keys)
        for q in range(self.n_qubits):
            sup |= (((self._keys >> (2 * q)) & 3) != 0).astype(np.int64) << q
        sel = sup == target
        return Multivector._raw(self.n_qubits, self._keys[sel], self._coeffs[sel])

    def vector_part(self, qubit: int) -> np.ndarray:
        """Real (v_x, v_y, v_z) of the grade-one terms on one qubit."""
        sub = self.support_equals([qubit])
        out = np.zeros(3)
        comp = {1: 0, 3: 1, 2: 2}
        for key, c in sub.items():
            out[comp[(key >> (2 * qubit)) & 3]] = c.real
        return out

    # -- norms and predicates ----------------------------------------------

    def norm1(self) -> float:
        return float(np.abs(self._coeffs).sum()) if self._coeffs.size else 0.0

    def max_abs(self) -> float:
        return float(np.abs(self._coeffs).max()) if self._coeffs.size else 0.0

    def hermitian_defect(self) -> float:
        """Max coefficient deviation between self and its reverse."""
        if not self._coeffs.size:
            return 0.0
        return float(2.0 * np.abs(self._coeffs.imag).max())


# -- module-level operation surface ---------------------------------------


def single_letter_product(p: str, q: str) -> tuple[str, complex]:
    """Product of two single-qubit letters: (letter, phase).

    Same letters square to one; distinct non-identity letters give the third
    with phase +/- iota following x y = iota z.
    """
    for ch in (p, q):
        if ch not in _CODE_OF:
            raise ValueError(f"invalid Pauli letter {ch!r}")
    a = Multivector.blade(p) * Multivector.blade(q)
    ((key, coeff),) = a.items()
    return _CHAR_OF[key & 3], coeff


def geometric_product(a: Multivector, b: Multivector) -> Multivector:
    return a * b


def reverse(a: Multivector) -> Multivector:
    return a.reverse()


def scalar_part(a: Multivector) -> float:
    return a.scalar_part()


def partial_drop(a: Multivector, qubits: Iterable[int]) -> Multivector:
    return a.drop_qubits(qubits)


def exp_i(a: Multivector, t: float) -> Multivector:
    """exp(-iota * a * t) for Hermitian a, by scaling and squaring.

    The series on the halved generator is truncated once a term's norm
    falls below 1e-16 (norm = sum of coefficient magnitudes).
    """
    if a.hermitian_defect() > HERMITIAN_TOL:
        raise ValueError("exp_i requires a Hermitian generator (reverse(a) == a)")
    gen = a * (-1j * float(t))
    nrm = gen.norm1()
    squarings = max(0, math.ceil(math.log2(nrm / 0.5))) if nrm > 0.5 else 0
    g = gen * (0.5**squarings)
    result = Multivector.scalar(a.n_qubits, 1.0)
    term = result
    for k in range(1, 64):
        term = term * g * (1.0 / k)
        result = result + term
        if term.norm1() < 1e-16:
            break
    for _ in range(squarings):
        result = result * result
    return result


def allclose(a: Multivector, b: Multivector, tol: float = 1e-12) -> bool:
    return (a - b).max_abs() <= tol
