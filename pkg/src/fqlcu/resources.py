"""Toffoli and logical-qubit cost of qubitized QPE over a sparse first-quantized LCU.

Counts are per walk-operator step, multiplied by the number of QPE
repetitions. One-off costs paid once outside the walk loop are excluded.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .sparse_assembly import SparseLcu

SPLITS = {
    "molecular": (Fraction(10, 16), Fraction(3, 16), Fraction(3, 16)),
    "dpw": (Fraction(158, 160), Fraction(0), Fraction(2, 160)),
}
MODES = ("min-T", "min-Qu")


def ceil_log2(n: int) -> int:
    if n < 1:
        raise ValueError("ceil_log2 needs n >= 1")
    return (n - 1).bit_length()


def largest_pow2_factor(n: int) -> int:
    return n & -n


def _is_pow2(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


def split_error_budget(eps_tot: float, scheme: str = "molecular") -> tuple[float, float, float]:
    """Return ``(eps_qpe, eps_trunc, eps_prep)``; the QPE share absorbs rounding."""
    if eps_tot <= 0:
        raise ValueError("eps_tot must be positive")
    try:
        _, f_trunc, f_prep = SPLITS[scheme]
    except KeyError:
        raise ValueError(f"unknown scheme {scheme!r}") from None
    trunc = float(eps_tot * f_trunc)
    prep = float(eps_tot * f_prep)
    qpe = eps_tot - trunc - prep
    # search a few ulps around (qpe, prep) so the float sum in this order is
    # exactly eps_tot; the QPE share absorbs the rounding
    for dp in (0, 1, -1, 2, -2, 3, -3):
        p = _ulp_step(prep, dp)
        for dq in (0, 1, -1, 2, -2, 3, -3, 4, -4):
            q = _ulp_step(qpe, dq)
            if q + trunc + p == eps_tot:
                return q, trunc, p
    return qpe, trunc, prep


def _ulp_step(x: float, k: int) -> float:
    for _ in range(abs(k)):
        x = math.nextafter(x, math.inf if k > 0 else -math.inf)
    return x


def equal_superposition_cost(L: int, b_L: int = 8) -> tuple[int, int]:
    if L < 1:
        raise ValueError("L must be >= 1")
    if _is_pow2(L):
        return 0, ceil_log2(L)
    return 3 * ceil_log2(L) - 3 * largest_pow2_factor(L) + 2 * b_L - 9, b_L + 2


def pair_superposition_cost(N: int, b_N: int = 8) -> tuple[int, int]:
    """Cost of the uniform superposition over ordered electron pairs i != j.

    The closed form goes negative for large power-of-two factors of N; it is
    clamped at the equality-test cost, itself floored at zero.
    """
    if N < 2:
        raise ValueError("N must be >= 2")
    n = ceil_log2(N)
    eta = largest_pow2_factor(N)
    tof = 8 * n - 4 * eta + 2 * b_N - 7
    if tof < 0:
        tof = max(0, 3 * n - eta)
    return tof, b_N + 2


def beta_angle(N: int) -> float:
    """Ancilla rotation angle that makes one Grover step land on the i != j superposition."""
    if N < 2:
        raise ValueError("N must be >= 2")
    overlap = math.sqrt(N * (N - 1) / 2 ** (2 * ceil_log2(N)))
    return 2.0 * math.acos(-0.5 / overlap)


def qroam_cost(L: int, m: int, kappa: int) -> tuple[int, int]:
    if not _is_pow2(kappa):
        raise ValueError("kappa must be a power of two")
    if m < 1:
        raise ValueError("m must be >= 1")
    blocks = -(-L // kappa)
    return blocks + m * (kappa - 1), m * kappa + max(0, ceil_log2(L) - ceil_log2(kappa))


def qroam_uncompute_cost(L: int, kappa: int) -> int:
    if not _is_pow2(kappa):
        raise ValueError("kappa must be a power of two")
    return -(-L // kappa) + kappa


def optimize_kappa(L: int, m: int, mode: str = "min-T") -> tuple[int, int]:
    mode = _mode(mode)
    candidates = [2**e for e in range(ceil_log2(L) + 1)]
    # min() keeps the first (smallest) kappa on ties
    k2 = min(candidates, key=lambda k: qroam_uncompute_cost(L, k))
    if mode == "min-Qu":
        return 1, k2
    k1 = min(candidates, key=lambda k: qroam_cost(L, m, k)[0])
    return k1, k2


def select_cost(N: int, M: int, kind: str = "general") -> int:
    if N < 2 or M < 1:
        raise ValueError("SELECT needs N >= 2 and M >= 1")
    if kind == "general":
        return 2 * (N - 1 + 2 * N * M + 1)
    if kind == "diagonal":
        return 2 * N + 3 * N * M
    raise ValueError(f"unknown kind {kind!r}")


def alias_sampling_cost(m: int, aleph: int) -> int:
    gap = m - aleph - 2
    if gap <= 0:
        raise ValueError("alias sampling needs m > aleph + 2")
    return aleph + -(-gap // 2)


def qroam_output_size(aleph: int, M: int, kind: str) -> int:
    return aleph + 2 * ((4 if kind == "general" else 3) * M + 1)


def qpe_repetitions(lam: float, eps_qpe: float) -> int:
    if lam <= 0:
        raise ValueError("lambda must be positive")
    if eps_qpe <= 0:
        raise ValueError("eps_qpe must be positive")
    return math.ceil(math.pi * lam / (2.0 * eps_qpe))


def choose_aleph(lam: float, eps_prep: float) -> int:
    """Smallest aleph >= 1 with lam * 2**-aleph <= eps_prep."""
    if eps_prep <= 0:
        raise ValueError("eps_prep must be positive to choose aleph; pass aleph explicitly")
    aleph = max(1, math.ceil(math.log2(lam / eps_prep)))
    while lam * 2.0**-aleph > eps_prep:
        aleph += 1
    while aleph > 1 and lam * 2.0 ** -(aleph - 1) <= eps_prep:
        aleph -= 1
    return aleph


def _mode(mode: str) -> str:
    m = {"min-t": "min-T", "min-qu": "min-Qu"}.get(mode.lower())
    if m is None:
        raise ValueError(f"unknown mode {mode!r}")
    return m


@dataclass(frozen=True)
class CostParams:
    eps_tot: float
    eps_qpe: float
    eps_trunc: float
    eps_prep: float
    mode: str = "min-T"
    kind: str | None = None
    b_L: int = 8
    b_N: int = 8
    aleph: int | None = None
    kappa1: int | None = None
    kappa2: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "mode", _mode(self.mode))
        parts = self.eps_qpe + self.eps_trunc + self.eps_prep
        if not math.isclose(parts, self.eps_tot, rel_tol=1e-12, abs_tol=0.0):
            raise ValueError("eps_qpe + eps_trunc + eps_prep must equal eps_tot")
        if self.aleph is not None and self.aleph < 1:
            raise ValueError("aleph must be >= 1")
        for k in (self.kappa1, self.kappa2):
            if k is not None and not _is_pow2(k):
                raise ValueError("kappa values must be powers of two")

    @classmethod
    def from_budget(cls, eps_tot: float, scheme: str = "molecular", **kw) -> "CostParams":
        qpe, trunc, prep = split_error_budget(eps_tot, scheme)
        return cls(eps_tot=eps_tot, eps_qpe=qpe, eps_trunc=trunc, eps_prep=prep, **kw)


@dataclass(frozen=True)
class CostRow:
    label: str
    toffoli: int | None
    qubits: int | None
    section: str = "walk"


@dataclass(frozen=True)
class ResourceEstimate:
    rows: list[CostRow]
    iterations: int
    lam: float
    L: int
    m: int
    aleph: int
    kappa1: int
    kappa2: int
    N: int
    M: int
    kind: str
    mode: str
    physical_qubit_multiplier: float | None = None
    extras: dict = field(default_factory=dict)

    @property
    def walk_toffoli(self) -> int:
        return sum(r.toffoli or 0 for r in self.rows if r.section == "walk")

    @property
    def step_toffoli(self) -> int:
        return sum(r.toffoli or 0 for r in self.rows)

    @property
    def total_toffoli(self) -> int:
        return self.step_toffoli * self.iterations

    @property
    def logical_qubits(self) -> int:
        return sum(r.qubits or 0 for r in self.rows)

    @property
    def physical_qubits(self) -> float | None:
        if self.physical_qubit_multiplier is None:
            return None
        return self.logical_qubits * self.physical_qubit_multiplier

    def to_dict(self) -> dict:
        d = asdict(self)
        d.update(walk_toffoli=self.walk_toffoli, step_toffoli=self.step_toffoli,
                 total_toffoli=self.total_toffoli, logical_qubits=self.logical_qubits,
                 physical_qubits=self.physical_qubits)
        return d


def cost_model(lam: float, L: int, N: int, M: int, kind: str, params: CostParams,
               physical_qubit_multiplier: float | None = None) -> ResourceEstimate:
    """Evaluate every walk-operator row and the QPE overhead for given lambda and L."""
    if L < 1:
        raise ValueError("the LCU has no coefficients")
    if params.kind is not None and params.kind != kind:
        raise ValueError(f"params are for {params.kind!r}, LCU is {kind!r}")
    iters = qpe_repetitions(lam, params.eps_qpe)
    aleph = params.aleph if params.aleph is not None else choose_aleph(lam, params.eps_prep)
    m = qroam_output_size(aleph, M, kind)
    k1, k2 = optimize_kappa(L, m, params.mode)
    k1 = params.kappa1 or k1
    k2 = params.kappa2 or k2

    eq_l = equal_superposition_cost(L, params.b_L)
    eq_n = pair_superposition_cost(N, params.b_N)
    qroam = qroam_cost(L, m, k1)
    qpe_bits = ceil_log2(iters + 1)
    rows = [
        CostRow("system register", None, N * M),
        CostRow("PREP equal superposition over l", eq_l[0], eq_l[1]),
        CostRow("PREP equal superposition over i != j", eq_n[0], eq_n[1]),
        CostRow("PREP data lookup via QROAM", qroam[0], qroam[1]),
        CostRow("PREP coherent alias sampling", alias_sampling_cost(m, aleph), 0),
        CostRow("SELECT", select_cost(N, M, kind), 0),
        CostRow("UNPREP coherent alias sampling", 0, 0),
        CostRow("UNPREP data lookup via QROAM", qroam_uncompute_cost(L, k2), 0),
        CostRow("UNPREP equal superpositions", eq_l[0] + eq_n[0], 0),
        CostRow("reflection", ceil_log2(L) + 2 * ceil_log2(N) + 2, 0),
        CostRow("phase estimation ancillas", None, qpe_bits, "qpe"),
        CostRow("unary iteration over walk operator", 1, qpe_bits - 1, "qpe"),
        CostRow("make reflection controlled", 1, 0, "qpe"),
    ]
    return ResourceEstimate(rows=rows, iterations=iters, lam=lam, L=L, m=m, aleph=aleph,
                            kappa1=k1, kappa2=k2, N=N, M=M, kind=kind, mode=params.mode,
                            physical_qubit_multiplier=physical_qubit_multiplier)


def estimate(s: SparseLcu, params: CostParams, **kw) -> ResourceEstimate:
    if s.L == 0:
        raise ValueError("the LCU has no coefficients")
    lam = s.lambda_block
    if lam == 0:
        raise ValueError("lambda is zero")
    return cost_model(lam, s.L, s.N, s.M, s.kind, params, **kw)
