"""Stability of ({basepoint} x x) in P^2 x P^n under SL(2) acting through sums of Sym^k.

Compares each verdict with torus tests at x and at random SU(2) conjugates of x;
OutsideHull anywhere in the scan proves instability.

    python3 scripts/cplus_pn.py --blocks 1 --blocks 2 --blocks 1,0 --points 5
"""
import argparse

import numpy as np

from implode import git
from implode import moment as mm


def scan(action, x, samples, seed):
    rng = np.random.default_rng(seed)
    tags = {git.product_torus_test(action, x).tag}
    for _ in range(samples):
        y = mm.apply(mm.from_sl2(action, mm.random_su(2, rng)), x)
        tags.add(git.product_torus_test(action, y).tag)
    return tags


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--blocks", action="append", default=None)
    ap.add_argument("--points", type=int, default=3, help="random points per block list")
    ap.add_argument("--level", type=int, default=None)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    block_lists = [[int(b) for b in s.split(",")] for s in (args.blocks or ["1", "2"])]
    rng = np.random.default_rng(args.seed)

    for blocks in block_lists:
        n = sum(k + 1 for k in blocks)
        level = args.level or git.default_level(blocks)
        action = git.cplus_action(blocks, level)
        pts = [np.eye(n)[0], np.eye(n)[-1]] + [rng.standard_normal(n) + 1j * rng.standard_normal(n) for _ in range(args.points)]
        print(f"blocks {blocks}, level {level}")
        for x in pts:
            v = git.cplus_pn_semistable(blocks, x, level, git.Budget(seed=args.seed))
            tags = scan(action, mm.normalize((git.CPLUS_BASEPOINT, np.asarray(x, complex))), 200, args.seed)
            label = np.array2string(np.asarray(x), precision=2, suppress_small=True, max_line_width=60)
            print(f"  {label:<60} {v.tag:<13} scan {sorted(tags)}")
        print()


if __name__ == "__main__":
    main()
