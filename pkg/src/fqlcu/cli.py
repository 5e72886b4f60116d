"""Command-line front end: decompose, estimate, scan, verify.

Data goes to stdout (or ``--out``); diagnostics go to stderr.
Exit codes: 0 ok, 1 a verify check failed, 2 usage or input error,
3 zero one-norm, 4 dense-size guard exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from .coeffs import dump_csv
from .diagonal_lcu import decompose_diagonal, norm_breakdown
from .hamiltonians import (CellSpec, DiagonalHamiltonian, FCIDumpError, UnsupportedDimensionError,
                           gen_random_dense, gen_ueg_dpw, load_fcidump)
from .pauli_lcu import ZERO_CUTOFF, decompose, one_norm
from .resources import CostParams, estimate
from .sparse_assembly import assemble_diagonal, assemble_general, read_binary, truncate, write_binary
from .verifier import (MAX_QUBITS, GuardError, build_first_quantized, power_law_fit,
                       reconstruct_from_lcu, reconstruct_sparse)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_ZERO_LAMBDA, EXIT_GUARD = 0, 1, 2, 3, 4
SCAN_HEADER = "# fqlcu-scan v1"
SCAN_COLUMNS = ("system", "D", "seed", "N", "lambda_1", "lambda_2", "lambda_T", "lambda_U",
                "lambda_V", "L", "nnz", "toffoli", "qubits")
FIT_COLUMNS = ("lambda_1", "lambda_2", "lambda_T", "lambda_U", "lambda_V", "L", "nnz", "toffoli")
DEFAULT_N = 4
DEFAULT_RS = 5.0


class CliError(Exception):
    def __init__(self, msg: str, code: int = EXIT_USAGE):
        super().__init__(msg)
        self.code = code


# ------------------------------------------------------------------ sources

def _parse_nucleus(text: str):
    try:
        z, x, y, w = (float(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"nucleus must be 'Z,x,y,z', got {text!r}") from None
    return z, (x, y, w)


def _add_source(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--fcidump", metavar="PATH", help="load integrals from an FCIDUMP file")
    g.add_argument("--random", action="store_true", help="random dense Hamiltonian (default)")
    g.add_argument("--ueg", "--diag", dest="ueg", action="store_true",
                   help="uniform electron gas in dual plane waves")
    g.add_argument("--material", action="store_true",
                   help="dual plane waves with point-charge nuclei (needs --volume)")
    p.add_argument("--dim", type=int, default=4, help="basis size D for --random")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid", type=int, default=2, help="grid side n, D = n^3")
    p.add_argument("--rs", type=float, default=DEFAULT_RS, help="Wigner-Seitz radius (Bohr)")
    p.add_argument("--volume", type=float, help="cell volume (Bohr^3) for --material")
    p.add_argument("--nucleus", type=_parse_nucleus, action="append", default=[],
                   metavar="Z,x,y,z", help="point charge for --material, repeatable")
    p.add_argument("--n", type=int, help=f"electron count (default: FCIDUMP NELEC or {DEFAULT_N})")
    p.add_argument("--cutoff", type=float, default=ZERO_CUTOFF, help="drop |coefficients| at or below")


@dataclass
class Source:
    ham: object
    N: int
    system: str

    @property
    def diagonal(self) -> bool:
        return isinstance(self.ham, DiagonalHamiltonian)


def _electrons(args, fallback=None) -> int:
    n = args.n if args.n is not None else (fallback or DEFAULT_N)
    if n < 2:
        raise CliError("--n must be >= 2")
    return n


def _source_dims(args) -> tuple[int, int]:
    """(D, N) without building anything, for guard checks."""
    if args.fcidump:
        ham = _load(args.fcidump)
        return ham.D, _electrons(args, ham.n_electrons)
    if args.ueg or args.material:
        return args.grid**3, _electrons(args)
    return args.dim, _electrons(args)


def _load(path):
    try:
        return load_fcidump(path)
    except FileNotFoundError:
        raise CliError(f"no such file: {path}") from None
    except (FCIDumpError, UnsupportedDimensionError, OSError) as e:
        raise CliError(f"{path}: {e}") from None


def _build_source(args) -> Source:
    try:
        if args.fcidump:
            ham = _load(args.fcidump)
            return Source(ham, _electrons(args, ham.n_electrons), "fcidump")
        if args.ueg:
            n = _electrons(args)
            return Source(gen_ueg_dpw(CellSpec.ueg(n, args.rs, args.grid)), n, "ueg")
        if args.material:
            if args.volume is None:
                raise CliError("--material needs --volume")
            n = _electrons(args)
            cell = CellSpec(N=n, volume=args.volume, grid_side=args.grid, nuclei=tuple(args.nucleus))
            return Source(gen_ueg_dpw(cell), n, "material")
        return Source(gen_random_dense(args.dim, args.seed), _electrons(args), "random-dense")
    except ValueError as e:
        raise CliError(str(e)) from None


def _decompose(src: Source, cutoff: float):
    if src.diagonal:
        lcu = decompose_diagonal(src.ham, src.N, cutoff)
        return lcu, assemble_diagonal(lcu)
    lcu = decompose(src.ham, src.N, cutoff)
    return lcu, assemble_general(lcu)


def _summary(src: Source, lcu, sparse, cutoff: float) -> dict:
    out = {"system": src.system, "N": src.N, "D": src.ham.D, "M": src.ham.M,
           "kind": sparse.kind, "identity_shift": lcu.identity_shift,
           "nnz_one": len(lcu.one), "L": sparse.L, "lambda_block": sparse.lambda_block}
    if src.diagonal:
        nb = norm_breakdown(src.ham, src.N, cutoff)
        out.update(lambda_1=nb.lambda_1, lambda_2=nb.lambda_2, lambda_total=nb.lambda_total,
                   lambda_T=nb.lambda_T, lambda_U=nb.lambda_U, lambda_V=nb.lambda_V,
                   nnz_two_unique=len(np.unique(np.sort(lcu.two.idx, axis=1), axis=0)))
    else:
        s = one_norm(lcu)
        out.update(lambda_1=s.lambda_one, lambda_2=s.lambda_two, lambda_total=s.lambda_total,
                   nnz_two_unique=s.nnz_two_unique)
    return out


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


# ---------------------------------------------------------------- decompose

def cmd_decompose(args) -> int:
    src = _build_source(args)
    lcu, sparse = _decompose(src, args.cutoff)
    if args.coeffs:
        with open(args.coeffs, "w", encoding="utf-8", newline="") as f:
            dump_csv({"one": lcu.one, "two": lcu.two}, f)
    if args.binary:
        write_binary(sparse, args.binary)
    _emit(_dumps(_summary(src, lcu, sparse, args.cutoff)), args.out)
    return EXIT_OK


# ----------------------------------------------------------------- estimate

def _cost_params(args, kind: str) -> CostParams:
    if args.eps_tot <= 0:
        raise CliError("--eps-tot must be positive")
    scheme = args.scheme or ("dpw" if kind == "diagonal" else "molecular")
    try:
        return CostParams.from_budget(args.eps_tot, scheme, mode=args.mode, b_L=args.b_l,
                                      b_N=args.b_n, aleph=args.aleph, kappa1=args.kappa1,
                                      kappa2=args.kappa2)
    except ValueError as e:
        raise CliError(str(e)) from None


def _run_estimate(sparse, params: CostParams, trunc_budget, multiplier=None):
    budget = params.eps_trunc if trunc_budget is None else trunc_budget
    if sparse.lambda_block == 0:
        raise CliError("one-norm is zero; nothing to estimate", EXIT_ZERO_LAMBDA)
    cut = truncate(sparse, budget)
    if cut.L == 0 or cut.lambda_block == 0:
        raise CliError("truncation removed every coefficient", EXIT_ZERO_LAMBDA)
    return cut, budget, estimate(cut, params, physical_qubit_multiplier=multiplier)


def _report(est, params: CostParams, budget: float, sparse_before, extra: dict) -> dict:
    doc = dict(extra)
    doc.update(
        N=est.N, M=est.M, D=2**est.M, kind=est.kind, mode=est.mode,
        eps={"tot": params.eps_tot, "qpe": params.eps_qpe, "trunc": params.eps_trunc,
             "prep": params.eps_prep},
        truncation_budget=budget, L_before_truncation=sparse_before.L,
        lambda_before_truncation=sparse_before.lambda_block,
        **{"lambda": est.lam}, L=est.L, m=est.m, aleph=est.aleph,
        kappa1=est.kappa1, kappa2=est.kappa2,
        rows=[{"element": r.label, "toffoli": r.toffoli, "qubits": r.qubits, "section": r.section}
              for r in est.rows],
        iterations=est.iterations, step_toffoli=est.step_toffoli,
        total_toffoli=est.total_toffoli, logical_qubits=est.logical_qubits,
        physical_qubits=est.physical_qubits,
    )
    return doc


def cmd_estimate(args) -> int:
    if args.eps_tot <= 0:
        raise CliError("--eps-tot must be positive")
    if args.lcu_in:
        try:
            sparse = read_binary(args.lcu_in)
        except FileNotFoundError:
            raise CliError(f"no such file: {args.lcu_in}") from None
        except ValueError as e:
            raise CliError(f"{args.lcu_in}: {e}") from None
        extra = {"source": args.lcu_in}
    else:
        src = _build_source(args)
        lcu, sparse = _decompose(src, args.cutoff)
        extra = _summary(src, lcu, sparse, args.cutoff)
    params = _cost_params(args, sparse.kind)
    _, budget, est = _run_estimate(sparse, params, args.trunc_budget, args.physical_multiplier)
    _emit(_dumps(_report(est, params, budget, sparse, extra)), args.out)
    return EXIT_OK


# --------------------------------------------------------------------- scan

@dataclass(frozen=True)
class ScanConfig:
    system: str
    dims: tuple[int, ...] = ()
    grids: tuple[int, ...] = ()
    files: tuple[str, ...] = ()
    N: int = DEFAULT_N
    r_s: float = DEFAULT_RS
    volume: float | None = None
    nuclei: tuple = ()
    seeds: tuple[int, ...] = (0,)
    eps_tot: float = 1.6e-3
    scheme: str | None = None
    mode: str = "min-T"
    cutoff: float = ZERO_CUTOFF
    estimate: bool = True
    out: str | None = None

    def __post_init__(self):
        if self.system not in ("random-dense", "ueg", "material", "fcidump"):
            raise CliError(f"unknown scan system {self.system!r}")
        if self.system == "random-dense":
            if not self.dims:
                raise CliError("random-dense scan needs --dims")
            if any(d < 2 or d & (d - 1) for d in self.dims):
                raise CliError("every D must be a power of two >= 2")
        elif self.system in ("ueg", "material"):
            if not self.grids:
                raise CliError(f"{self.system} scan needs --grids")
            if self.system == "material" and self.volume is None:
                raise CliError("material scan needs --volume")
        elif not self.files:
            raise CliError("fcidump scan needs --files")

    def jobs(self) -> list[tuple]:
        if self.system == "random-dense":
            return [(d, s) for d in sorted(self.dims) for s in self.seeds]
        if self.system == "fcidump":
            return [(f, 0) for f in self.files]
        return [(g, 0) for g in sorted(self.grids)]


def _scan_point(cfg: ScanConfig, job) -> dict:
    key, seed = job
    if cfg.system == "random-dense":
        src = Source(gen_random_dense(key, seed), cfg.N, cfg.system)
    elif cfg.system == "fcidump":
        ham = _load(key)
        src = Source(ham, ham.n_electrons or cfg.N, cfg.system)
    else:
        cell = (CellSpec.ueg(cfg.N, cfg.r_s, key) if cfg.system == "ueg"
                else CellSpec(N=cfg.N, volume=cfg.volume, grid_side=key, nuclei=cfg.nuclei))
        src = Source(gen_ueg_dpw(cell), cfg.N, cfg.system)
    lcu, sparse = _decompose(src, cfg.cutoff)
    s = _summary(src, lcu, sparse, cfg.cutoff)
    row = {"system": cfg.system, "D": s["D"], "seed": seed, "N": src.N,
           "lambda_1": s["lambda_1"], "lambda_2": s["lambda_2"],
           "lambda_T": s.get("lambda_T", ""), "lambda_U": s.get("lambda_U", ""),
           "lambda_V": s.get("lambda_V", ""), "L": sparse.L, "nnz": s["nnz_two_unique"],
           "toffoli": "", "qubits": ""}
    if cfg.estimate and sparse.lambda_block > 0:
        scheme = cfg.scheme or ("dpw" if sparse.kind == "diagonal" else "molecular")
        params = CostParams.from_budget(cfg.eps_tot, scheme, mode=cfg.mode)
        _, _, est = _run_estimate(sparse, params, None)
        row.update(toffoli=est.total_toffoli, qubits=est.logical_qubits)
    return row


def _threads() -> int:
    env = os.environ.get("FQLCU_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise CliError(f"FQLCU_THREADS must be an integer, got {env!r}") from None
        return max(1, n)
    return os.cpu_count() or 1


def fit_rows(rows: list[dict], last: int = 3) -> list[tuple[str, float, float]]:
    """Fit each column against D over the final ``last`` distinct D values."""
    ds = sorted({r["D"] for r in rows})[-last:]
    sel = [r for r in rows if r["D"] in ds]
    fits = []
    if len(ds) < 2:
        return fits
    for col in FIT_COLUMNS:
        vals = [r[col] for r in sel]
        if any(v == "" for v in vals) or any(float(v) <= 0 for v in vals):
            continue
        fits.append((col, *power_law_fit([r["D"] for r in sel], [float(v) for v in vals])))
    return fits


def run_scan(cfg: ScanConfig) -> str:
    jobs = cfg.jobs()
    with ThreadPoolExecutor(max_workers=min(_threads(), len(jobs))) as pool:
        rows = list(pool.map(lambda j: _scan_point(cfg, j), jobs))
    buf = io.StringIO()
    buf.write(SCAN_HEADER + "\n")
    w = csv.DictWriter(buf, fieldnames=SCAN_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in r.items()})
    if len({r["D"] for r in rows}) < 2:
        print("warning: fewer than two distinct D values; fit skipped", file=sys.stderr)
    elif len({r["D"] for r in rows}) < 3:
        print("warning: fewer than three distinct D values; fit uses what is there", file=sys.stderr)
    for col, exponent, prefactor in fit_rows(rows):
        buf.write(f"# fit {col} exponent={exponent!r} prefactor={prefactor!r}\n")
    return buf.getvalue()


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def cmd_scan(args) -> int:
    if args.eps_tot <= 0:
        raise CliError("--eps-tot must be positive")
    cfg = ScanConfig(system=args.system, dims=args.dims, grids=args.grids, files=tuple(args.files),
                     N=args.n or DEFAULT_N, r_s=args.rs, volume=args.volume,
                     nuclei=tuple(args.nucleus), seeds=args.seeds, eps_tot=args.eps_tot,
                     scheme=args.scheme, mode=args.mode, cutoff=args.cutoff,
                     estimate=not args.no_estimate, out=args.out)
    _emit(run_scan(cfg), cfg.out)
    return EXIT_OK


# ------------------------------------------------------------------- verify

def cmd_verify(args) -> int:
    D, N = _source_dims(args)
    M = D.bit_length() - 1
    if N * M > MAX_QUBITS:
        raise CliError(f"N*M = {N * M} qubits exceeds the guard of {MAX_QUBITS}", EXIT_GUARD)
    src = _build_source(args)
    lcu, sparse = _decompose(src, args.cutoff)
    direct = build_first_quantized(src.ham, src.N).matrix
    rebuilt = reconstruct_from_lcu(lcu).matrix
    shift = lcu.identity_shift * np.eye(direct.shape[0])
    block = reconstruct_sparse(sparse).matrix + shift
    ev_direct = np.linalg.eigvalsh(direct)
    kept = truncate(sparse, args.trunc_budget)
    ev_block = np.linalg.eigvalsh(reconstruct_sparse(sparse).matrix)
    ev_cut = np.linalg.eigvalsh(reconstruct_sparse(kept).matrix)

    checks = [
        ("hermitian", float(np.abs(direct - direct.conj().T).max()), args.tol),
        ("lcu reconstruction", float(np.abs(rebuilt - direct).max()), args.tol),
        ("spectrum", float(np.abs(np.linalg.eigvalsh(rebuilt) - ev_direct).max()), args.tol),
        ("block assembly", float(np.abs(block - direct).max()), args.tol),
        ("norm identity", abs(sparse.lambda_block - _lcu_norm(src, lcu, args.cutoff))
         / max(1.0, sparse.lambda_block), args.tol),
        ("truncation", float(np.abs(ev_cut - ev_block).max()), args.trunc_budget + args.tol),
    ]
    ok = True
    for name, dev, limit in checks:
        passed = dev <= limit
        ok &= passed
        print(f"{'PASS' if passed else 'FAIL'} {name}: deviation={dev:.3e} limit={limit:.3e}")
    return EXIT_OK if ok else EXIT_FAIL


def _lcu_norm(src: Source, lcu, cutoff: float) -> float:
    if src.diagonal:
        return norm_breakdown(src.ham, src.N, cutoff).lambda_total
    return one_norm(lcu).lambda_total


# --------------------------------------------------------------------- main

def _add_cost(p: argparse.ArgumentParser) -> None:
    p.add_argument("--eps-tot", type=float, default=1.6e-3, help="total error budget (Hartree)")
    p.add_argument("--scheme", choices=("molecular", "dpw"),
                   help="error split (default: dpw for grid systems, else molecular)")
    p.add_argument("--mode", type=str.lower, choices=("min-t", "min-qu"), default="min-t")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fqlcu", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="Pauli LCU coefficients and one-norm summary")
    _add_source(p)
    p.add_argument("--coeffs", metavar="PATH", help="write canonical coefficients as CSV")
    p.add_argument("--binary", metavar="PATH", help="write the assembled LCU in binary form")
    p.add_argument("--out", metavar="PATH", help="summary destination (default stdout)")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("estimate", help="Toffoli and logical-qubit estimate")
    _add_source(p)
    _add_cost(p)
    p.add_argument("--lcu-in", metavar="PATH", help="read an assembled LCU written by decompose --binary")
    p.add_argument("--trunc-budget", type=float, help="one-norm budget for truncation (default eps_trunc)")
    p.add_argument("--aleph", type=int, help="keep-probability bits (default: from eps_prep)")
    p.add_argument("--kappa1", type=int)
    p.add_argument("--kappa2", type=int)
    p.add_argument("--b-l", type=int, default=8)
    p.add_argument("--b-n", type=int, default=8)
    p.add_argument("--physical-multiplier", type=float, help="physical qubits per logical qubit")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("scan", help="scaling scan with power-law fits")
    p.add_argument("--system", choices=("random-dense", "ueg", "material", "fcidump"),
                   default="random-dense")
    p.add_argument("--dims", type=_int_list, default=(), help="comma-separated D values")
    p.add_argument("--grids", type=_int_list, default=(), help="comma-separated grid sides")
    p.add_argument("--files", nargs="*", default=[], help="FCIDUMP files")
    p.add_argument("--seeds", type=_int_list, default=(0,))
    p.add_argument("--n", type=int)
    p.add_argument("--rs", type=float, default=DEFAULT_RS)
    p.add_argument("--volume", type=float)
    p.add_argument("--nucleus", type=_parse_nucleus, action="append", default=[])
    p.add_argument("--cutoff", type=float, default=ZERO_CUTOFF)
    p.add_argument("--no-estimate", action="store_true", help="skip cost columns")
    _add_cost(p)
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("verify", help="dense oracle checks at small size")
    _add_source(p)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--trunc-budget", type=float, default=1e-2)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        print(f"fqlcu: error: {e}", file=sys.stderr)
        return e.code
    except GuardError as e:
        print(f"fqlcu: error: {e}", file=sys.stderr)
        return EXIT_GUARD


if __name__ == "__main__":
    sys.exit(main())
