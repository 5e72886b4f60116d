"""Flat block-encoding coefficient lists, truncation, and the binary handoff format.

General kind entries are ``(p, q, r, s)``: string ``X^p Z^q`` on electron i and
``X^r Z^s`` on electron j, summed over ordered pairs i != j. One-body terms use
``(r, s) = (0, 0)``. Diagonal kind entries are ``(p, q, r)`` with ``Z^r`` on j.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .coeffs import lex_order
from .diagonal_lcu import DiagonalLcu
from .pauli_lcu import CanonicalLcu

MAGIC = b"FQLCU1\x00\x00"
KINDS = {"general": 0, "diagonal": 1}
_HEADER = struct.Struct("<8sBBiH")


@dataclass(frozen=True)
class SparseLcu:
    indices: np.ndarray
    coeffs: np.ndarray
    kind: str
    N: int
    M: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        width = 4 if self.kind == "general" else 3
        idx = np.asarray(self.indices, dtype=np.int64).reshape(-1, width)
        val = np.asarray(self.coeffs, dtype=float)
        if len(idx) != len(val):
            raise ValueError("indices and coeffs differ in length")
        order = lex_order(idx)
        idx, val = idx[order], val[order]
        idx.flags.writeable = False
        val.flags.writeable = False
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "coeffs", val)

    @property
    def L(self) -> int:
        return len(self.coeffs)

    @property
    def D(self) -> int:
        return 2**self.M

    @property
    def sum_abs(self) -> float:
        return float(np.abs(self.coeffs).sum())

    @property
    def lambda_block(self) -> float:
        return self.N * (self.N - 1) * self.sum_abs

    @property
    def entries(self) -> list[tuple[tuple[int, ...], float]]:
        return [(tuple(k), v) for k, v in zip(self.indices.tolist(), self.coeffs.tolist())]


def _merge(idx: np.ndarray, val: np.ndarray):
    """Sum coefficients sharing an index tuple; drop exact zeros."""
    if len(idx) == 0:
        return idx, val
    uniq, inv = np.unique(idx, axis=0, return_inverse=True)
    summed = np.zeros(len(uniq))
    np.add.at(summed, inv.ravel(), val)
    keep = summed != 0.0
    return uniq[keep], summed[keep]


def assemble_general(lcu: CanonicalLcu) -> SparseLcu:
    n = lcu.N
    if n < 2:
        raise ValueError("assembly needs N >= 2")
    one_idx = np.zeros((len(lcu.one), 4), dtype=np.int64)
    one_idx[:, :2] = lcu.one.idx
    one_val = lcu.one.val / (n - 1)

    t = lcu.two.idx
    diag = (t[:, 0] == t[:, 2]) & (t[:, 1] == t[:, 3])
    two_val = np.where(diag, lcu.two.val / 2.0, lcu.two.val)

    idx, val = _merge(np.concatenate([one_idx, t]), np.concatenate([one_val, two_val]))
    return SparseLcu(idx, val, "general", n, lcu.D.bit_length() - 1)


def assemble_diagonal(lcu: DiagonalLcu) -> SparseLcu:
    n = lcu.N
    if n < 2:
        raise ValueError("assembly needs N >= 2")
    one_idx = np.zeros((len(lcu.one), 3), dtype=np.int64)
    one_idx[:, :2] = lcu.one.idx
    one_val = lcu.one.val / (n - 1)

    t = lcu.two.idx
    lo, hi = np.minimum(t[:, 0], t[:, 1]), np.maximum(t[:, 0], t[:, 1])
    two_idx = np.stack([np.zeros_like(lo), lo, hi], axis=1)
    # (q, r) and (r, q) merge into one q < r entry at weight 1/2 each;
    # a q == r key is stored once and keeps the 1/2
    two_val = lcu.two.val / 2.0

    idx, val = _merge(np.concatenate([one_idx, two_idx]), np.concatenate([one_val, two_val]))
    return SparseLcu(idx, val, "diagonal", n, lcu.D.bit_length() - 1)


def truncate(s: SparseLcu, norm_budget: float) -> SparseLcu:
    """Drop the smallest coefficients while their N(N-1)-weighted sum stays within budget."""
    if norm_budget < 0:
        raise ValueError("norm_budget must be >= 0")
    if s.L == 0 or norm_budget == 0:
        return s
    if norm_budget >= s.lambda_block:
        return SparseLcu(s.indices[:0], s.coeffs[:0], s.kind, s.N, s.M)
    mags = np.abs(s.coeffs)
    order = np.lexsort((*s.indices.T[::-1], mags))
    weighted = np.cumsum(s.N * (s.N - 1) * mags[order])
    n_drop = int(np.searchsorted(weighted, norm_budget, side="right"))
    keep = np.sort(order[n_drop:])
    return SparseLcu(s.indices[keep], s.coeffs[keep], s.kind, s.N, s.M)


# ------------------------------------------------------------ binary handoff

def pack_indices(indices: np.ndarray, M: int) -> np.ndarray:
    packed = np.zeros(len(indices), dtype=np.uint64)
    for col in indices.T:
        packed = (packed << np.uint64(M)) | col.astype(np.uint64)
    return packed


def unpack_indices(packed: np.ndarray, M: int, width: int) -> np.ndarray:
    mask = np.uint64((1 << M) - 1)
    cols = []
    p = packed.astype(np.uint64)
    for _ in range(width):
        cols.append(p & mask)
        p = p >> np.uint64(M)
    return np.stack(cols[::-1], axis=1).astype(np.int64)


_RECORD = np.dtype([("key", "<u8"), ("value", "<f8")])


def write_binary(s: SparseLcu, path) -> None:
    width = s.indices.shape[1]
    if width * s.M > 64:
        raise ValueError("packed index exceeds 64 bits")
    rec = np.empty(s.L, dtype=_RECORD)
    rec["key"] = pack_indices(s.indices, s.M)
    rec["value"] = s.coeffs
    with open(path, "wb") as f:
        f.write(_HEADER.pack(MAGIC, KINDS[s.kind], s.M, s.N, 0))
        f.write(rec.tobytes())


def read_binary(path) -> SparseLcu:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise ValueError("file too short for FQLCU header")
    magic, kind, M, N, _ = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise ValueError("bad magic; not an FQLCU coefficient file")
    kind_name = {v: k for k, v in KINDS.items()}[kind]
    body = raw[_HEADER.size:]
    if len(body) % _RECORD.itemsize:
        raise ValueError("truncated record")
    rec = np.frombuffer(body, dtype=_RECORD)
    width = 4 if kind_name == "general" else 3
    return SparseLcu(unpack_indices(rec["key"], M, width), rec["value"].copy(), kind_name, N, M)
