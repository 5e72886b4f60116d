"""Pauli LCU of first-quantized Hamiltonians: transforms, canonicalization, one-norm.

Strings use the phase-free convention ``prod_k X^{p_k} Z^{q_k}`` on each
electron register, so a one-body key ``(p, q)`` with overlapping set bits
stands for a product containing ``XZ = -iY`` factors.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coeffs import CoeffMap
from .hamiltonians import GeneralHamiltonian
from .walsh import fwht, log2_exact, xor_table

ZERO_CUTOFF = 1e-10


def _one_body_dense(h1: np.ndarray) -> np.ndarray:
    h1 = np.asarray(h1, dtype=float)
    d = h1.shape[0]
    log2_exact(d)
    a = np.arange(d)
    # row p holds h1[p ^ a, a]
    return fwht(h1[xor_table(d), a[None, :]], axis=1) / d


def decompose_one_body(h1, zero_cutoff: float = ZERO_CUTOFF) -> CoeffMap:
    """``omega[p, q] = (1/D) sum_a h1[p ^ a, a] H[a, q]`` with small entries dropped."""
    return CoeffMap.from_dense(_one_body_dense(h1), zero_cutoff)


def inverse_one_body(coeffs, D: int | None = None) -> np.ndarray:
    cmap = CoeffMap.from_dict(coeffs, arity=2)
    d = D or _dim_for(cmap.max_index())
    omega = cmap.to_dense(d)
    rows = fwht(omega, axis=1)  # rows[p, a] = h1[p ^ a, a]
    out = np.empty((d, d))
    a = np.arange(d)
    out[xor_table(d), a[None, :]] = rows
    return out


def _dim_for(max_index: int) -> int:
    d = 2
    while d <= max_index:
        d *= 2
    return d


def _two_body_dense(h2: np.ndarray) -> np.ndarray:
    """Dense ``omega[g, u, f, v]`` via the reshaped ``D^2 x D^2`` Walsh-Hadamard transform.

    Processed one ``g`` block at a time, so peak extra memory is ``O(D^3)``.
    """
    h2 = np.asarray(h2, dtype=float)
    d = h2.shape[0]
    log2_exact(d)
    x = xor_table(d)
    q = np.arange(d)
    out = np.empty((d, d, d, d))
    for g in range(d):
        # block[f, q, s] = h2[g ^ q, q, f ^ s, s]
        block = h2[(g ^ q)[None, :, None], q[None, :, None], x[:, None, :], q[None, None, :]]
        t = fwht(block.reshape(d, d * d), axis=1).reshape(d, d, d) / (d * d)
        out[g] = t.transpose(1, 0, 2)
    if np.array_equal(h2, h2.transpose(2, 3, 0, 1)):
        # the transform commutes with the (pq)<->(rs) swap; mirror one half so
        # the output symmetry is exact rather than exact-up-to-rounding
        lower = _composite_lower(d)
        out = np.where(lower, out.transpose(2, 3, 0, 1), out)
    return out


def _composite_lower(d: int) -> np.ndarray:
    """Mask of keys with (p, q) > (r, s) as composite indices ``D*p + q``."""
    c = np.arange(d * d).reshape(d, d)
    return c[:, :, None, None] > c[None, None, :, :]


def decompose_two_body(h2, zero_cutoff: float = ZERO_CUTOFF) -> CoeffMap:
    return CoeffMap.from_dense(_two_body_dense(h2), zero_cutoff)


def inverse_two_body(coeffs, D: int | None = None) -> np.ndarray:
    cmap = CoeffMap.from_dict(coeffs, arity=4)
    d = D or _dim_for(cmap.max_index())
    omega = cmap.to_dense(d)
    x = xor_table(d)
    q = np.arange(d)
    out = np.empty((d,) * 4)
    for g in range(d):
        t = fwht(omega[g].transpose(1, 0, 2).reshape(d, d * d), axis=1).reshape(d, d, d)
        out[(g ^ q)[None, :, None], q[None, :, None], x[:, None, :], q[None, None, :]] = t
    return out


@dataclass(frozen=True)
class CanonicalLcu:
    """Canonicalized coefficients.

    ``two`` keeps only representatives with ``(p, q) <= (r, s)``; the value
    stored for an off-diagonal representative is the per-string coefficient,
    shared with its ``(r, s, p, q)`` partner.
    """

    one: CoeffMap
    two: CoeffMap
    identity_terms: tuple[float, float]
    N: int
    D: int
    zero_cutoff: float = ZERO_CUTOFF

    @property
    def identity_shift(self) -> float:
        c1, c2 = self.identity_terms
        return self.N * c1 + 0.5 * self.N * (self.N - 1) * c2


@dataclass(frozen=True)
class LcuSummary:
    lambda_one: float
    lambda_two: float
    nnz_one: int
    nnz_two_unique: int

    @property
    def lambda_total(self) -> float:
        return self.lambda_one + self.lambda_two


def _canonicalize_dense(w1, w2, N, zero_cutoff, assume_symmetric=None) -> CanonicalLcu:
    if N < 2:
        raise ValueError("canonicalization needs N >= 2 electrons")
    d = w1.shape[0]
    w1 = np.where(np.abs(w1) > zero_cutoff, w1, 0.0)
    w2 = np.where(np.abs(w2) > zero_cutoff, w2, 0.0)
    swapped = w2.transpose(2, 3, 0, 1)
    symmetric = np.array_equal(w2, swapped) if assume_symmetric is None else assume_symmetric
    identity = (float(w1[0, 0]), float(w2[0, 0, 0, 0]))

    one = w1.copy()
    if symmetric:
        one += (N - 1) * w2[:, :, 0, 0]
    else:
        one += 0.5 * (N - 1) * (w2[:, :, 0, 0] + w2[0, 0, :, :])
    one[0, 0] = 0.0

    two = w2 if symmetric else 0.5 * (w2 + swapped)
    keep = ~_composite_lower(d)
    keep[0, 0, :, :] = False
    keep[:, :, 0, 0] = False
    return CanonicalLcu(
        one=CoeffMap.from_dense(one, zero_cutoff),
        two=CoeffMap.from_dense(two, zero_cutoff, mask=keep),
        identity_terms=identity,
        N=N,
        D=d,
        zero_cutoff=zero_cutoff,
    )


def canonicalize(one_raw, two_raw, N: int, zero_cutoff: float = ZERO_CUTOFF,
                 D: int | None = None, assume_symmetric: bool | None = None) -> CanonicalLcu:
    """Merge one-body duplicates out of the two-body LCU and strip identity terms.

    Symmetry of the two-body map under ``(p,q) <-> (r,s)`` is detected by exact
    comparison unless ``assume_symmetric`` is given; asymmetric input uses the
    averaged one-body correction.
    """
    one_raw = CoeffMap.from_dict(one_raw, arity=2)
    two_raw = CoeffMap.from_dict(two_raw, arity=4)
    d = D or _dim_for(max(one_raw.max_index(), two_raw.max_index()))
    return _canonicalize_dense(one_raw.to_dense(d), two_raw.to_dense(d), N,
                               zero_cutoff, assume_symmetric)


def decompose(ham: GeneralHamiltonian, N: int, zero_cutoff: float = ZERO_CUTOFF) -> CanonicalLcu:
    """Full pipeline on dense arrays; same result as canonicalize(decompose_*(...))."""
    return _canonicalize_dense(_one_body_dense(ham.h1), _two_body_dense(ham.h2), N, zero_cutoff)


def one_norm(lcu: CanonicalLcu) -> LcuSummary:
    n = lcu.N
    idx = lcu.two.idx
    diag = (idx[:, 0] == idx[:, 2]) & (idx[:, 1] == idx[:, 3])
    mags = np.abs(lcu.two.val)
    # each off-diagonal representative stands for itself and its swapped partner
    expanded = mags[diag].sum() + 2.0 * mags[~diag].sum()
    return LcuSummary(
        lambda_one=n * lcu.one.abs_sum(),
        lambda_two=0.5 * n * (n - 1) * float(expanded),
        nnz_one=len(lcu.one),
        nnz_two_unique=len(lcu.two),
    )


def one_body_nnz_bound(D: int) -> int:
    return D * (D + 1) // 2


def two_body_nnz_bound(D: int) -> int:
    return D * (D + 1) * (D - 1) * (D + 2) // 8
