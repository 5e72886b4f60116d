"""One-norm and sparsity scaling of random dense Hamiltonians.

    python3 scripts/random_dense_scan.py --dims 8 16 32 64 --n 4
"""
import argparse
import time

from fqlcu import decompose, gen_random_dense, one_norm
from fqlcu.verifier import power_law_fit


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dims", type=int, nargs="+", default=[8, 16, 32, 64])
    ap.add_argument("--n", type=int, default=4)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rows = []
    print(f"{'D':>5} {'lambda_1':>12} {'lambda_2':>14} {'nnz_one':>8} {'nnz_two':>10} {'sec':>6}")
    for d in args.dims:
        t0 = time.perf_counter()
        s = one_norm(decompose(gen_random_dense(d, args.seed), args.n))
        rows.append((d, s))
        print(f"{d:>5} {s.lambda_one:>12.4f} {s.lambda_two:>14.4f} {s.nnz_one:>8} "
              f"{s.nnz_two_unique:>10} {time.perf_counter() - t0:>6.2f}")

    tail = rows[-3:]
    if len(tail) >= 2:
        ds = [d for d, _ in tail]
        for name, get in [("lambda_2", lambda s: s.lambda_two),
                          ("nnz_two", lambda s: s.nnz_two_unique)]:
            e, c = power_law_fit(ds, [get(s) for _, s in tail])
            print(f"fit {name}: {c:.3g} * D^{e:.3f}  (last {len(tail)} points)")


if __name__ == "__main__":
    main()
