"""Pauli LCU for Hamiltonians whose pair interaction is diagonal in the basis."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coeffs import CoeffMap
from .hamiltonians import DiagonalHamiltonian
from .pauli_lcu import ZERO_CUTOFF, _one_body_dense
from .walsh import fwht


@dataclass(frozen=True)
class DiagonalLcu:
    """``one`` maps (p, q) -> omega'; ``two`` maps (p, r), p, r >= 1 -> gamma' (Z^p Z^r strings).

    ``two`` stores both (p, r) and (r, p).
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
class NormBreakdown:
    lambda_T: float
    lambda_U: float
    lambda_V: float
    lambda_1: float
    lambda_2: float

    @property
    def lambda_total(self) -> float:
        return self.lambda_1 + self.lambda_2


def zz_coefficients(V: np.ndarray) -> np.ndarray:
    """``gamma = H V H / D^2`` by two Walsh-Hadamard passes; exactly symmetric for symmetric V."""
    V = np.asarray(V, dtype=float)
    d = V.shape[0]
    g = fwht(fwht(V, axis=1), axis=0) / (d * d)
    if np.array_equal(V, V.T):
        g = np.triu(g) + np.triu(g, 1).T
    return g


def _canonical(omega, gamma, N, cutoff):
    omega = np.where(np.abs(omega) > cutoff, omega, 0.0)
    gamma = np.where(np.abs(gamma) > cutoff, gamma, 0.0)
    one = omega.copy()
    one[0, 1:] += (N - 1) * gamma[0, 1:]
    one[0, 0] = 0.0
    two = gamma.copy()
    two[0, :] = 0.0
    two[:, 0] = 0.0
    return one, two, (float(omega[0, 0]), float(gamma[0, 0]))


def decompose_diagonal(h: DiagonalHamiltonian, N: int, zero_cutoff: float = ZERO_CUTOFF) -> DiagonalLcu:
    if N < 2:
        raise ValueError("canonicalization needs N >= 2 electrons")
    one, two, ident = _canonical(_one_body_dense(h.T), zz_coefficients(h.V), N, zero_cutoff)
    return DiagonalLcu(
        one=CoeffMap.from_dense(one, zero_cutoff),
        two=CoeffMap.from_dense(two, zero_cutoff),
        identity_terms=ident,
        N=N,
        D=h.D,
        zero_cutoff=zero_cutoff,
    )


def norm_breakdown(h: DiagonalHamiltonian, N: int, zero_cutoff: float = ZERO_CUTOFF) -> NormBreakdown:
    """One-norm split by origin; the (N-1) gamma_0q cross term is booked under V."""
    lcu = decompose_diagonal(h, N, zero_cutoff)

    def one_body_norm(mat):
        w = _one_body_dense(mat)
        w[0, 0] = 0.0
        return N * float(np.abs(w[np.abs(w) > zero_cutoff]).sum())

    gamma = zz_coefficients(h.V)
    gamma = np.where(np.abs(gamma) > zero_cutoff, gamma, 0.0)
    pair = 0.5 * N * (N - 1) * np.abs(gamma[1:, 1:]).sum()
    cross = N * (N - 1) * np.abs(gamma[0, 1:]).sum()
    return NormBreakdown(
        lambda_T=one_body_norm(h.T_kin),
        lambda_U=one_body_norm(h.U_ext),
        lambda_V=float(pair + cross),
        lambda_1=N * lcu.one.abs_sum(),
        lambda_2=0.5 * N * (N - 1) * lcu.two.abs_sum(),
    )


def diagonal_L_bound(D: int) -> int:
    return D * D + D * (D + 1) // 2


def count_diagonal_L(lcu: DiagonalLcu) -> int:
    """Number of nonzero block-encoding coefficients after pairing gamma'(q, r) with q <= r."""
    idx = np.sort(lcu.two.idx, axis=1)
    n = len(lcu.one) + len(np.unique(idx, axis=0))
    assert n <= diagonal_L_bound(lcu.D)
    return n
