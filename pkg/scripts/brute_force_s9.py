"""Unpruned count over all 9^9 maps TA -> S9 for the terminal S9-semimodule algebra.

Every assignment is tallied by its pair (sum v(c) c, sum v(c)); the 9x9 table
must total 9^9, and the cells for (1, X), (1, 2) and (2, X) are compared with
the pruned search in the package.

    python3 scripts/brute_force_s9.py
"""
import argparse
import sys
import time

import numpy as np

from pevbar.counterexamples import TA_COEFFS, s9_exhaustive
from pevbar.semirings import S9

ELEMS = [(a, b) for a in range(3) for b in range(3)]   # a + bX, encoded as 3a + b


def _cap(v: int) -> int:
    return min(v, 2)


ADD = np.array([[3 * _cap(a + c) + _cap(b + d) for c, d in ELEMS] for a, b in ELEMS], dtype=np.int64)
MUL = np.array([[3 * _cap(a * c + 2 * b * d) + _cap(a * d + b * c) for c, d in ELEMS]
                for a, b in ELEMS], dtype=np.int64)


def count_table(head: int = 3) -> np.ndarray:
    """table[mu, te] = number of assignments with those two sums."""
    coeffs = [3 * a + b for a, b in TA_COEFFS]
    tail = len(coeffs) - head
    grid = np.indices((9,) * tail).reshape(tail, -1)
    mu_tail = np.zeros(grid.shape[1], dtype=np.int64)
    te_tail = np.zeros(grid.shape[1], dtype=np.int64)
    for k in range(tail):
        mu_tail = ADD[mu_tail, MUL[grid[k], coeffs[head + k]]]
        te_tail = ADD[te_tail, grid[k]]
    heads = np.zeros((9, 9), dtype=np.int64)
    for vals in np.ndindex(*(9,) * head):
        mu = te = 0
        for v, c in zip(vals, coeffs):
            mu, te = ADD[mu, MUL[v, c]], ADD[te, v]
        heads[mu, te] += 1
    table = np.zeros(81, dtype=np.int64)
    for mu, te in zip(*np.nonzero(heads)):
        table += heads[mu, te] * np.bincount(ADD[mu, mu_tail] * 9 + ADD[te, te_tail], minlength=81)
    return table.reshape(9, 9)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--head", type=int, default=3, help="coordinates looped in Python (rest vectorised)")
    args = ap.parse_args()
    t0 = time.perf_counter()
    table = count_table(args.head)
    print(f"counted {table.sum()} assignments in {time.perf_counter() - t0:.2f}s")
    ok = int(table.sum()) == 9 ** 9
    for src, dst in (("1", "X"), ("1", "2"), ("2", "X")):
        a, b = S9.parse(src), S9.parse(dst)
        brute = int(table[3 * a[0] + a[1], 3 * b[0] + b[1]])
        found, covered = s9_exhaustive(a, b)
        agree = brute == len(found) and covered == 9 ** 9
        ok &= agree
        print(f"  {src} -> {dst}: brute force {brute}, pruned search {len(found)}  {'ok' if agree else 'MISMATCH'}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
