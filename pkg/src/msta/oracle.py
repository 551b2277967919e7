"""Dense-matrix ground truth for the multivector algebra.

Everything here works on plain 2^N x 2^N complex arrays and is kept
independent of the multivector code paths it verifies: eigenvalues come
from a self-contained cyclic Jacobi sweep rather than a library solver.
"""

from __future__ import annotations

import math

import numpy as np

from .algebra import MAX_QUBITS, Multivector, _merge_terms

# single-qubit basis in blade-code order I, X, Z, Y
_SIGMA = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
)


def _n_from_dim(dim: int) -> int:
    n = dim.bit_length() - 1
    if dim <= 0 or (1 << n) != dim:
        raise ValueError(f"matrix dimension {dim} is not a power of two")
    if n > MAX_QUBITS:
        raise ValueError(f"dimension {dim} exceeds the {MAX_QUBITS}-qubit bound")
    return n


def to_matrix(a: Multivector) -> np.ndarray:
    """Map a multivector to its matrix: blades to Kronecker products of
    Pauli matrices, iota to the imaginary unit."""
    n = a.n_qubits
    dim = 1 << n
    out = np.zeros((dim, dim), dtype=complex)
    for key, coeff in a.items():
        m = _SIGMA[key & 3]
        for q in range(1, n):
            m = np.kron(m, _SIGMA[(key >> (2 * q)) & 3])
        out += coeff * m
    return out


def from_matrix(m: np.ndarray) -> Multivector:
    """Inverse of `to_matrix` by recursive block decomposition.

    Qubit 0 is the most significant index bit, so the top-level 2x2 block
    structure of the matrix is qubit 0's Pauli expansion.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("expected a square matrix")
    n = _n_from_dim(m.shape[0])
    work: dict[int, np.ndarray] = {0: m}
    for q in range(n):
        nxt: dict[int, np.ndarray] = {}
        for key, blk in work.items():
            h = blk.shape[0] // 2
            a, b = blk[:h, :h], blk[:h, h:]
            c, d = blk[h:, :h], blk[h:, h:]
            comps = ((a + d) / 2, (b + c) / 2, (a - d) / 2, 0.5j * (b - c))
            for code, sub in enumerate(comps):
                if np.any(sub):
                    nxt[key | (code << (2 * q))] = sub
        work = nxt
    keys = np.fromiter(work.keys(), dtype=np.int64, count=len(work))
    coeffs = np.array([blk[0, 0] for blk in work.values()], dtype=complex)
    return Multivector._raw(n, *_merge_terms(n, keys, coeffs))


def jacobi_eigh(h: np.ndarray, tol: float = 1e-13, max_sweeps: int = 60):
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Returns (eigenvalues ascending, eigenvector columns).  Convergence is
    declared when the off-diagonal Frobenius norm drops below ``tol``
    (scaled by the matrix norm for badly scaled inputs).
    """
    m = np.array(h, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("expected a square matrix")
    if np.abs(m - m.conj().T).max() > 1e-8:
        raise ValueError("matrix is not Hermitian")
    d = m.shape[0]
    v = np.eye(d, dtype=complex)
    if d == 1:
        return m.real.ravel(), v
    scale = max(1.0, float(np.linalg.norm(m)))
    for _ in range(max_sweeps):
        off = math.sqrt(float((np.abs(m - np.diag(np.diag(m))) ** 2).sum()))
        if off < tol * scale:
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                g = m[p, q]
                absg = abs(g)
                if absg < 1e-300:
                    continue
                w = (g / absg).conjugate()  # e^{-i arg g}
                zeta = (m[q, q].real - m[p, p].real) / (2.0 * absg)
                if zeta == 0.0:
                    t = 1.0
                else:
                    t = math.copysign(1.0, zeta) / (abs(zeta) + math.hypot(1.0, zeta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # columns: [p q] <- [p q] @ [[c, s], [-s w, c w]]
                col_p = c * m[:, p] - (s * w) * m[:, q]
                col_q = s * m[:, p] + (c * w) * m[:, q]
                m[:, p], m[:, q] = col_p, col_q
                wc = w.conjugate()
                row_p = c * m[p, :] - (s * wc) * m[q, :]
                row_q = s * m[p, :] + (c * wc) * m[q, :]
                m[p, :], m[q, :] = row_p, row_q
                m[p, q] = 0.0
                m[q, p] = 0.0
                vcol_p = c * v[:, p] - (s * w) * v[:, q]
                vcol_q = s * v[:, p] + (c * w) * v[:, q]
                v[:, p], v[:, q] = vcol_p, vcol_q
    vals = np.diag(m).real
    order = np.argsort(vals)
    return vals[order], v[:, order]


def expm_minus_i(h: np.ndarray, t: float) -> np.ndarray:
    """exp(-i h t) for Hermitian h via the Jacobi eigendecomposition."""
    w, v = jacobi_eigh(h)
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def oracle_entropy(rho: np.ndarray) -> float:
    """Von Neumann entropy -sum(lam log2 lam) of a density matrix."""
    rho = np.asarray(rho, dtype=complex)
    if np.abs(rho - rho.conj().T).max() > 1e-10:
        raise ValueError("density matrix is not Hermitian")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > 1e-10:
        raise ValueError(f"density matrix trace {tr} differs from 1")
    w, _ = jacobi_eigh(rho)
    if w.min() < -1e-10:
        raise ValueError(f"density matrix has negative eigenvalue {w.min()}")
    w = np.clip(w, 0.0, None)
    w = w[w > 1e-12]
    return float(-(w * np.log2(w)).sum())


def statevector_density(amps) -> np.ndarray:
    """Outer product |psi><psi| of a normalised amplitude vector."""
    psi = np.asarray(amps, dtype=complex).ravel()
    _n_from_dim(psi.size)
    nrm = np.linalg.norm(psi)
    if abs(nrm - 1.0) > 1e-12:
        raise ValueError(f"statevector norm {nrm} differs from 1")
    return np.outer(psi, psi.conj())


def partial_trace_matrix(m: np.ndarray, keep, n: int) -> np.ndarray:
    """Partial trace of a 2^n x 2^n matrix onto the kept qubits (sorted)."""
    keep = sorted(set(keep))
    if not keep or len(keep) >= n:
        raise ValueError("keep must be a nonempty proper subset")
    t = np.asarray(m, dtype=complex).reshape((2,) * (2 * n))
    # contract row/col axes of each dropped qubit
    dropped = [q for q in range(n) if q not in keep]
    for q in sorted(dropped, reverse=True):
        t = np.trace(t, axis1=q, axis2=q + t.ndim // 2)
    dim = 1 << len(keep)
    return t.reshape(dim, dim)


def random_statevector(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-ish uniform pure state: normalised standard complex Gaussians."""
    z = rng.standard_normal(1 << n) + 1j * rng.standard_normal(1 << n)
    return z / np.linalg.norm(z)
