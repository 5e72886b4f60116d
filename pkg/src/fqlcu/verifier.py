"""Dense brute-force oracles at desk scale, plus log-log power-law fitting."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .diagonal_lcu import DiagonalLcu
from .hamiltonians import DiagonalHamiltonian, GeneralHamiltonian
from .pauli_lcu import CanonicalLcu
from .sparse_assembly import SparseLcu

MAX_QUBITS = 12

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)


class GuardError(ValueError):
    """Requested dense operator exceeds the qubit guard."""


@dataclass(frozen=True)
class DenseOperator:
    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def is_hermitian(self, tol: float = 1e-10) -> bool:
        return bool(np.abs(self.matrix - self.matrix.conj().T).max(initial=0.0) <= tol)

    def eigvalsh(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)


def _guard(D: int, N: int) -> int:
    if N < 2:
        raise ValueError("N must be >= 2")
    M = D.bit_length() - 1
    if N * M > MAX_QUBITS:
        raise GuardError(f"N*M = {N * M} qubits exceeds the guard of {MAX_QUBITS}")
    return M


def pauli_string(x: int, z: int, M: int) -> np.ndarray:
    """Literal product of ``X^x_k Z^z_k`` factors, most significant bit first."""
    out = np.ones((1, 1), dtype=complex)
    for k in reversed(range(M)):
        f = _I2
        if (x >> k) & 1:
            f = f @ _X
        if (z >> k) & 1:
            f = f @ _Z
        out = np.kron(out, f)
    return out


def _embed_one(op: np.ndarray, N: int) -> np.ndarray:
    """``sum_i op_i`` on N registers, electron 0 leftmost."""
    d = op.shape[0]
    total = np.zeros((d**N, d**N), dtype=complex)
    for i in range(N):
        total += np.kron(np.kron(np.eye(d**i), op), np.eye(d ** (N - 1 - i)))
    return total


def _embed_two(op: np.ndarray, N: int) -> np.ndarray:
    """``sum_{i != j} op_{ij}`` where ``op`` acts on (C^D)_i x (C^D)_j."""
    d = int(round(np.sqrt(op.shape[0])))
    # registers ordered (i, j, spectators...) in both row and column axes
    base = np.kron(op, np.eye(d ** (N - 2))).reshape((d,) * (2 * N))
    total = np.zeros((d**N, d**N), dtype=complex)
    for i in range(N):
        for j in range(N):
            if i == j:
                continue
            pos = [i, j] + [k for k in range(N) if k not in (i, j)]
            inv = np.argsort(pos)
            order = list(inv) + [N + a for a in inv]
            total += base.transpose(order).reshape(d**N, d**N)
    return total


def build_first_quantized(h, N: int) -> DenseOperator:
    """Direct matrix of the N-electron Hamiltonian on (C^D)^N."""
    if isinstance(h, DiagonalHamiltonian):
        h = h.to_general()
    if not isinstance(h, GeneralHamiltonian):
        raise TypeError("expected a GeneralHamiltonian or DiagonalHamiltonian")
    _guard(h.D, N)
    d = h.D
    one = np.asarray(h.h1, dtype=complex)
    # (|p><q|)_i (|r><s|)_j -> matrix indexed [(p, r), (q, s)]
    two = np.asarray(h.h2, dtype=complex).transpose(0, 2, 1, 3).reshape(d * d, d * d)
    return DenseOperator(_embed_one(one, N) + 0.5 * _embed_two(two, N))


def _one_body_operator(keys, vals, M: int) -> np.ndarray:
    d = 2**M
    op = np.zeros((d, d), dtype=complex)
    for (x, z), v in zip(keys, vals):
        op += v * pauli_string(x, z, M)
    return op


def reconstruct_from_lcu(lcu) -> DenseOperator:
    """Rebuild the operator from stored Pauli strings plus the identity shift."""
    N, d = lcu.N, lcu.D
    M = _guard(d, N)
    one = _one_body_operator(lcu.one.idx.tolist(), lcu.one.val, M)
    two = np.zeros((d * d, d * d), dtype=complex)
    if isinstance(lcu, CanonicalLcu):
        for (p, q, r, s), v in lcu.two:
            term = np.kron(pauli_string(p, q, M), pauli_string(r, s, M))
            two += v * term
            if (p, q) != (r, s):
                two += v * np.kron(pauli_string(r, s, M), pauli_string(p, q, M))
    elif isinstance(lcu, DiagonalLcu):
        for (p, r), v in lcu.two:
            two += v * np.kron(pauli_string(0, p, M), pauli_string(0, r, M))
    else:
        raise TypeError("expected a CanonicalLcu or DiagonalLcu")
    mat = _embed_one(one, N) + 0.5 * _embed_two(two, N)
    mat += lcu.identity_shift * np.eye(d**N)
    return DenseOperator(mat)


def reconstruct_sparse(s: SparseLcu) -> DenseOperator:
    """``sum_{i != j} sum_l a_l U_l`` with no identity shift."""
    d, N, M = s.D, s.N, s.M
    _guard(d, N)
    two = np.zeros((d * d, d * d), dtype=complex)
    for key, a in s.entries:
        if s.kind == "general":
            p, q, r, t = key
            two += a * np.kron(pauli_string(p, q, M), pauli_string(r, t, M))
        else:
            p, q, r = key
            two += a * np.kron(pauli_string(p, q, M), pauli_string(0, r, M))
    return DenseOperator(_embed_two(two, N))


def power_law_fit(xs, ys) -> tuple[float, float]:
    """Least-squares line through (log x, log y); returns (slope, exp(intercept))."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.shape != ys.shape or xs.size < 2:
        raise ValueError("need at least two (x, y) points")
    if np.any(xs <= 0) or np.any(ys <= 0):
        raise ValueError("power-law fit needs positive data")
    slope, intercept = np.polyfit(np.log(xs), np.log(ys), 1)
    return float(slope), float(np.exp(intercept))
