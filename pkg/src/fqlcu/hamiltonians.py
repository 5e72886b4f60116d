"""Hamiltonian containers, FCIDUMP I/O and synthetic generators.

All energies are in Hartree. Two-body tensors use chemists' index order,
``h2[p, q, r, s] = (pq|rs)``.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .walsh import is_power_of_two


class FCIDumpError(ValueError):
    """Malformed FCIDUMP content."""


class UnsupportedDimensionError(ValueError):
    """Basis size is not a power of two."""


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.flags.writeable = False
    return a


def _check_dim(d: int) -> None:
    if not is_power_of_two(d) or d < 2:
        raise UnsupportedDimensionError(
            f"basis size {d} is not a power of two >= 2; padding is not performed"
        )


@dataclass(frozen=True)
class GeneralHamiltonian:
    h1: np.ndarray
    h2: np.ndarray
    core_energy: float = 0.0
    n_electrons: int | None = None

    def __post_init__(self):
        h1, h2 = _frozen(self.h1), _frozen(self.h2)
        d = h1.shape[0]
        _check_dim(d)
        if h1.shape != (d, d) or h2.shape != (d,) * 4:
            raise ValueError("h1 must be DxD and h2 DxDxDxD")
        object.__setattr__(self, "h1", h1)
        object.__setattr__(self, "h2", h2)

    @property
    def D(self) -> int:
        return self.h1.shape[0]

    @property
    def M(self) -> int:
        return self.D.bit_length() - 1

    def symmetry_violations(self) -> list[str]:
        """Names of the exact symmetries that fail; empty for real-orbital integrals."""
        bad = []
        if not np.array_equal(self.h1, self.h1.T):
            bad.append("h1 symmetric")
        h = self.h2
        for name, perm in EIGHTFOLD_PERMS.items():
            if not np.array_equal(h, h.transpose(perm)):
                bad.append(name)
        return bad


# transpositions of (p, q, r, s) generating the 8-fold group
EIGHTFOLD_PERMS = {
    "qprs": (1, 0, 2, 3),
    "pqsr": (0, 1, 3, 2),
    "qpsr": (1, 0, 3, 2),
    "rspq": (2, 3, 0, 1),
    "srpq": (3, 2, 0, 1),
    "rsqp": (2, 3, 1, 0),
    "srqp": (3, 2, 1, 0),
}


@dataclass(frozen=True)
class DiagonalHamiltonian:
    """One-body ``T = T_kin + U_ext`` plus a diagonal pair interaction ``V``."""

    T_kin: np.ndarray
    U_ext: np.ndarray
    V: np.ndarray

    def __post_init__(self):
        arrs = [_frozen(a) for a in (self.T_kin, self.U_ext, self.V)]
        d = arrs[0].shape[0]
        _check_dim(d)
        for name, a in zip(("T_kin", "U_ext", "V"), arrs):
            if a.shape != (d, d):
                raise ValueError(f"{name} must be {d}x{d}")
            object.__setattr__(self, name, a)

    @property
    def D(self) -> int:
        return self.V.shape[0]

    @property
    def M(self) -> int:
        return self.D.bit_length() - 1

    @property
    def T(self) -> np.ndarray:
        return self.T_kin + self.U_ext

    def to_general(self) -> GeneralHamiltonian:
        d = self.D
        h2 = np.zeros((d,) * 4)
        p = np.arange(d)
        h2[p[:, None], p[:, None], p[None, :], p[None, :]] = self.V
        return GeneralHamiltonian(self.T, h2)


# ---------------------------------------------------------------- FCIDUMP

_HEADER_KEY = re.compile(r"([A-Za-z_0-9]+)\s*=\s*([^=]*?)(?=,?\s*[A-Za-z_0-9]+\s*=|$)")


def _parse_header(text: str) -> dict[str, str]:
    body = re.sub(r"&FCI|&END|/", " ", text, flags=re.IGNORECASE)
    return {k.upper(): v.strip().rstrip(",") for k, v in _HEADER_KEY.findall(body.strip())}


def load_fcidump(path) -> GeneralHamiltonian:
    """Read an FCIDUMP file (1-based chemists' notation) with full 8-fold expansion."""
    lines = Path(path).read_text().splitlines()
    header, start = {}, 0
    if lines and lines[0].lstrip().upper().startswith("&FCI"):
        buf = []
        for i, line in enumerate(lines):
            buf.append(line)
            s = line.strip().upper()
            if s.endswith("&END") or s == "/" or s.endswith("/"):
                start = i + 1
                break
        else:
            raise FCIDumpError("unterminated &FCI header")
        header = _parse_header("\n".join(buf))
    if "NORB" not in header:
        raise FCIDumpError("header does not declare NORB")
    try:
        norb = int(header["NORB"])
    except ValueError:
        raise FCIDumpError(f"bad NORB value {header['NORB']!r}") from None
    _check_dim(norb)
    nelec = int(header["NELEC"]) if header.get("NELEC", "").lstrip("-").isdigit() else None

    h1 = np.zeros((norb, norb))
    h2 = np.zeros((norb,) * 4)
    core = 0.0
    for lineno, line in enumerate(lines[start:], start=start + 1):
        fields = line.split()
        if not fields:
            continue
        if len(fields) != 5:
            raise FCIDumpError(f"line {lineno}: expected 'value i j k l', got {line!r}")
        try:
            v = float(fields[0].replace("D", "E").replace("d", "e"))
            i, j, k, l = (int(f) for f in fields[1:])
        except ValueError:
            raise FCIDumpError(f"line {lineno}: cannot parse {line!r}") from None
        if not all(0 <= x <= norb for x in (i, j, k, l)):
            raise FCIDumpError(f"line {lineno}: index out of range 0..{norb}")
        if i == j == k == l == 0:
            core = v
        elif k == l == 0:
            if i == 0 or j == 0:
                continue  # orbital energy records carry no integrals
            h1[i - 1, j - 1] = h1[j - 1, i - 1] = v
        else:
            if 0 in (i, j, k, l):
                raise FCIDumpError(f"line {lineno}: zero index in two-electron record")
            p, q, r, s = i - 1, j - 1, k - 1, l - 1
            for a, b, c, e in ((p, q, r, s), (r, s, p, q)):
                h2[a, b, c, e] = h2[b, a, c, e] = h2[a, b, e, c] = h2[b, a, e, c] = v
    return GeneralHamiltonian(h1, h2, core_energy=core, n_electrons=nelec)


def write_fcidump(ham: GeneralHamiltonian, path, nelec: int | None = None, tol: float = 0.0) -> None:
    """Write the unique nonzero integrals; values use shortest round-trip repr."""
    d = ham.D
    nelec = nelec if nelec is not None else (ham.n_electrons or 0)
    out = [f" &FCI NORB={d},NELEC={nelec},MS2=0,", " &END"]
    h1, h2 = ham.h1, ham.h2
    pairs = [(i, j) for i in range(d) for j in range(i + 1)]
    for a, (i, j) in enumerate(pairs):
        for k, l in pairs[: a + 1]:
            v = float(h2[i, j, k, l])
            if abs(v) > tol:
                out.append(f"{v!r} {i + 1} {j + 1} {k + 1} {l + 1}")
    for i, j in pairs:
        v = float(h1[i, j])
        if abs(v) > tol:
            out.append(f"{v!r} {i + 1} {j + 1} 0 0")
    out.append(f"{float(ham.core_energy)!r} 0 0 0 0")
    Path(path).write_text("\n".join(out) + "\n")


# ------------------------------------------------------- random dense model

def _pair_index(d: int) -> np.ndarray:
    p = np.arange(d)
    hi, lo = np.maximum.outer(p, p), np.minimum.outer(p, p)
    return hi * (hi + 1) // 2 + lo


def gen_random_dense(D: int, seed: int) -> GeneralHamiltonian:
    """Dense real Hamiltonian with uniform(-1, 1) values on every symmetry orbit.

    One value is drawn per orbit of the 2-fold (one-body) and 8-fold (two-body)
    groups, so every symmetry holds bit-exactly.
    """
    _check_dim(D)
    rng = np.random.default_rng(seed)
    k = D * (D + 1) // 2
    pair = _pair_index(D)
    r1 = rng.uniform(-1.0, 1.0, size=k)
    r2 = rng.uniform(-1.0, 1.0, size=(k, k))
    r2 = np.where(np.arange(k)[:, None] >= np.arange(k)[None, :], r2, r2.T)
    h1 = r1[pair]
    h2 = r2[pair[:, :, None, None], pair[None, None, :, :]]
    return GeneralHamiltonian(h1, h2)


def count_eightfold_orbits(D: int) -> int:
    """Brute-force orbit count of the 8-fold group on D^4 index tuples."""
    seen, orbits = set(), 0
    for t in itertools.product(range(D), repeat=4):
        if t in seen:
            continue
        orbits += 1
        p, q, r, s = t
        seen.update({(p, q, r, s), (q, p, r, s), (p, q, s, r), (q, p, s, r),
                     (r, s, p, q), (s, r, p, q), (r, s, q, p), (s, r, q, p)})
    return orbits


# --------------------------------------------------------- dual plane waves

@dataclass(frozen=True)
class CellSpec:
    """Cubic simulation cell sampled on a ``grid_side**3`` real-space grid.

    ``nuclei`` holds ``(charge, (x, y, z))`` point charges in Bohr; empty for
    the uniform electron gas.
    """

    N: int
    volume: float
    grid_side: int
    r_s: float | None = None
    nuclei: tuple = field(default_factory=tuple)

    @classmethod
    def ueg(cls, N: int, r_s: float, grid_side: int) -> "CellSpec":
        return cls(N=N, volume=4.0 * math.pi / 3.0 * r_s**3 * N, grid_side=grid_side, r_s=r_s)

    @property
    def D(self) -> int:
        return self.grid_side**3

    @property
    def length(self) -> float:
        return self.volume ** (1.0 / 3.0)


def _momentum_grid(n: int, length: float) -> np.ndarray:
    # integer frequencies -floor(n/2) .. n-1-floor(n/2); the Nyquist row is
    # real-valued, so the cosine sums equal the full complex DPW sums
    nu = np.arange(n) - n // 2
    nus = np.stack(np.meshgrid(nu, nu, nu, indexing="ij"), axis=-1).reshape(-1, 3)
    return 2.0 * np.pi * nus / length


def _grid_points(n: int) -> np.ndarray:
    x = np.arange(n)
    return np.stack(np.meshgrid(x, x, x, indexing="ij"), axis=-1).reshape(-1, 3)


def gen_ueg_dpw(cell: CellSpec) -> DiagonalHamiltonian:
    """Dual-plane-wave matrices on a cubic grid; orbital p sits at grid point p.

    Orbital index is ``p = (x * n + y) * n + z``. Conventions::

        T_kin[p, q] = (1/D) sum_nu (k_nu^2 / 2) cos(k_nu . (r_p - r_q))
        V[p, r]     = (2 pi / Omega) sum_{nu != 0} cos(k_nu . (r_p - r_r)) / k_nu^2
        U_ext[p, p] = -(4 pi / Omega) sum_j Z_j sum_{nu != 0} cos(k_nu . (R_j - r_p)) / k_nu^2
    """
    n = cell.grid_side
    if n < 2:
        raise ValueError("grid_side must be >= 2")
    if cell.volume <= 0:
        raise ValueError("cell volume must be positive")
    d = cell.D
    length = cell.length
    k = _momentum_grid(n, length)
    k2 = (k**2).sum(axis=1)
    nz = k2 > 0
    pts = _grid_points(n)
    spacing = length / n

    # every matrix depends on r_p - r_q only through the displacement mod n
    disp = np.where(pts > n // 2, pts - n, pts) * spacing
    phase = np.cos(disp @ k.T)
    t_disp = phase @ (k2 / 2.0) / d
    v_disp = (2.0 * np.pi / cell.volume) * (phase[:, nz] @ (1.0 / k2[nz]))
    delta = (pts[:, None, :] - pts[None, :, :]) % n
    flat = (delta[..., 0] * n + delta[..., 1]) * n + delta[..., 2]
    # +d and -d differ when a component sits on the Nyquist plane; averaging
    # the pair makes both matrices exactly symmetric
    T_kin = 0.5 * (t_disp[flat] + t_disp[flat.T])
    V = 0.5 * (v_disp[flat] + v_disp[flat.T])

    U = np.zeros((d, d))
    if cell.nuclei:
        r = pts * spacing
        diag = np.zeros(d)
        for charge, pos in cell.nuclei:
            c = np.cos((np.asarray(pos, dtype=float)[None, :] - r) @ k[nz].T)
            diag -= charge * (4.0 * np.pi / cell.volume) * (c @ (1.0 / k2[nz]))
        U[np.arange(d), np.arange(d)] = diag
    return DiagonalHamiltonian(T_kin, U, V)
