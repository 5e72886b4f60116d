"""Sparse maps from Pauli-string index tuples to real coefficients.

A ``CoeffMap`` stores an ``(n, arity)`` integer index array and a value array,
kept in lexicographic order of the index tuples. For arity 2 a row ``(p, q)``
denotes the single-register string ``X^p Z^q``; for arity 4 a row
``(p, q, r, s)`` denotes ``X^p Z^q (x) X^r Z^s`` on two registers.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterator, Mapping

import numpy as np


def lex_order(idx: np.ndarray) -> np.ndarray:
    if len(idx) == 0:
        return np.zeros(0, dtype=np.int64)
    return np.lexsort(idx.T[::-1])


@dataclass(frozen=True)
class CoeffMap:
    idx: np.ndarray
    val: np.ndarray

    def __post_init__(self):
        idx = np.asarray(self.idx, dtype=np.int64)
        val = np.asarray(self.val, dtype=float)
        if idx.ndim != 2 or len(idx) != len(val):
            raise ValueError("idx must be (n, arity) and match val")
        order = lex_order(idx)
        idx, val = idx[order], val[order]
        idx.flags.writeable = False
        val.flags.writeable = False
        object.__setattr__(self, "idx", idx)
        object.__setattr__(self, "val", val)

    @classmethod
    def empty(cls, arity: int) -> "CoeffMap":
        return cls(np.zeros((0, arity), dtype=np.int64), np.zeros(0))

    @classmethod
    def from_dict(cls, d: Mapping[tuple, float], arity: int | None = None) -> "CoeffMap":
        if isinstance(d, CoeffMap):
            return d
        if not d:
            return cls.empty(arity or 2)
        keys = list(d)
        return cls(np.array(keys, dtype=np.int64), np.array([d[k] for k in keys]))

    @classmethod
    def from_dense(cls, arr: np.ndarray, cutoff: float, mask: np.ndarray | None = None) -> "CoeffMap":
        keep = np.abs(arr) > cutoff
        if mask is not None:
            keep &= mask
        nz = np.nonzero(keep)
        return cls(np.stack(nz, axis=1).astype(np.int64), arr[nz])

    @property
    def arity(self) -> int:
        return self.idx.shape[1]

    def __len__(self) -> int:
        return len(self.val)

    def __iter__(self) -> Iterator[tuple[tuple[int, ...], float]]:
        for row, v in zip(self.idx.tolist(), self.val.tolist()):
            yield tuple(row), v

    def to_dict(self) -> dict[tuple[int, ...], float]:
        return dict(iter(self))

    def get(self, key, default: float = 0.0) -> float:
        hit = np.nonzero((self.idx == np.asarray(key)).all(axis=1))[0]
        return float(self.val[hit[0]]) if len(hit) else default

    def abs_sum(self) -> float:
        return float(np.abs(self.val).sum())

    def max_index(self) -> int:
        return int(self.idx.max()) if len(self) else 0

    def to_dense(self, d: int) -> np.ndarray:
        out = np.zeros((d,) * self.arity)
        out[tuple(self.idx.T)] = self.val
        return out


def dump_csv(sections: Mapping[str, CoeffMap], out: io.TextIOBase) -> None:
    """Write ``p,q,value`` / ``p,q,r,s,value`` lines, one ``# name`` comment per section."""
    w = csv.writer(out, lineterminator="\n")
    for name, cmap in sections.items():
        out.write(f"# {name}\n")
        for key, v in cmap:
            w.writerow([*key, repr(v)])


def load_csv(src: io.TextIOBase) -> dict[str, CoeffMap]:
    sections: dict[str, dict] = {}
    current = None
    for line in src:
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            current = line[1:].strip()
            sections[current] = {}
            continue
        *key, v = line.split(",")
        sections[current][tuple(int(k) for k in key)] = float(v)
    return {k: CoeffMap.from_dict(v) for k, v in sections.items()}
