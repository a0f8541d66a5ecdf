"""Table of exchange residuals against truncation depth.

    python scripts/exchange_residuals.py [--n 3] [--q 1/3]
"""

import argparse
from fractions import Fraction

from afqkit import qeval


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--q", default="1/3")
    ap.add_argument("--terms", type=int, nargs="+", default=[8, 10, 12, 14, 16])
    args = ap.parse_args()
    qv = Fraction(args.q)
    n = args.n
    print(f"{'pair':>8} {'u':>5} " + " ".join(f"{t:>10}" for t in args.terms) + "   (residual / p^terms)")
    for kp in (1, n - 1):
        for u in qeval.PROBE_POINTS:
            cells = []
            for t in args.terms:
                lhs, rhs, bound = qeval.exchange_sides(n, 1, kp, 0, qv, u, t)
                err, _ = qeval._compare(lhs, rhs, bound)
                cells.append(f"{float(err / qv ** (2 * n * t)):10.2f}")
            print(f"{f'(1,{kp})':>8} {str(u):>5} " + " ".join(cells))


if __name__ == "__main__":
    main()
