"""Kinetic and interaction one-norms of the electron gas as the grid is refined.

    python3 scripts/ueg_scaling.py --grids 2 4 8 --n 14 --rs 5
"""
import argparse

from fqlcu import CellSpec, count_diagonal_L, decompose_diagonal, gen_ueg_dpw, norm_breakdown
from fqlcu.verifier import power_law_fit


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grids", type=int, nargs="+", default=[2, 4, 8])
    ap.add_argument("--n", type=int, default=14)
    ap.add_argument("--rs", type=float, default=5.0)
    args = ap.parse_args()

    Ds, nbs = [], []
    print(f"{'grid':>4} {'D':>6} {'lambda_T':>10} {'lambda_V':>10} {'lambda':>10} {'L':>8}")
    for g in args.grids:
        h = gen_ueg_dpw(CellSpec.ueg(args.n, args.rs, g))
        nb = norm_breakdown(h, args.n)
        L = count_diagonal_L(decompose_diagonal(h, args.n))
        Ds.append(h.D)
        nbs.append(nb)
        print(f"{g:>4} {h.D:>6} {nb.lambda_T:>10.4f} {nb.lambda_V:>10.4f} "
              f"{nb.lambda_total:>10.4f} {L:>8}")

    if len(Ds) >= 2:
        for name in ("lambda_T", "lambda_V", "lambda_total"):
            e, c = power_law_fit(Ds[-3:], [getattr(nb, name) for nb in nbs[-3:]])
            print(f"fit {name}: {c:.3g} * D^{e:.3f}")


if __name__ == "__main__":
    main()
