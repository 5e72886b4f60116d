"""Toffoli and logical-qubit estimates for electron-gas instances in both QROAM modes.

    python3 scripts/ueg_estimate.py --n 14 --grid 8 --rs 5 --eps-tot 1.6e-3

``--eps-per-electron`` multiplies the budget by N, for comparing against
estimates quoted at a per-electron accuracy.
"""
import argparse

from fqlcu import (CellSpec, CostParams, assemble_diagonal, decompose_diagonal, estimate,
                   gen_ueg_dpw, truncate)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=14)
    ap.add_argument("--grid", type=int, default=8)
    ap.add_argument("--rs", type=float, default=5.0)
    ap.add_argument("--eps-tot", type=float, default=1.6e-3)
    ap.add_argument("--eps-per-electron", action="store_true")
    args = ap.parse_args()

    eps = args.eps_tot * (args.n if args.eps_per_electron else 1)
    h = gen_ueg_dpw(CellSpec.ueg(args.n, args.rs, args.grid))
    sparse = assemble_diagonal(decompose_diagonal(h, args.n))
    print(f"N={args.n} D={h.D} r_s={args.rs} eps_tot={eps:g} Ha  lambda={sparse.lambda_block:.4f}  L={sparse.L}")
    for mode in ("min-Qu", "min-T"):
        p = CostParams.from_budget(eps, "dpw", mode=mode)
        e = estimate(truncate(sparse, p.eps_trunc), p)
        print(f"\n{mode}: aleph={e.aleph} m={e.m} kappa1={e.kappa1} kappa2={e.kappa2} I={e.iterations}")
        for r in e.rows:
            tof = "n.a." if r.toffoli is None else r.toffoli
            print(f"  {r.label:<40} {tof!s:>8} {r.qubits if r.qubits is not None else 0:>6}")
        print(f"  {'total':<40} {e.total_toffoli:>8.3e} {e.logical_qubits:>6}")


if __name__ == "__main__":
    main()
