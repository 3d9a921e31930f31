"""Sweep random four-point configurations on P^1 and tabulate verdicts per coincidence pattern.

    python3 scripts/p1p4_sweep.py --count 2000 --seed 1
"""
import argparse
import collections
import time

import numpy as np

from implode import git

EXPECTED = {"stable": git.STABLE, "strictly_semistable": git.SEMISTABLE, "unstable": git.UNSTABLE}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--samples", type=int, default=git.Budget().samples)
    args = ap.parse_args()

    action = git.p1p4_action()
    patterns = git.set_partitions(4)
    rng = np.random.default_rng(args.seed)
    table = collections.defaultdict(collections.Counter)
    wrong = 0
    t0 = time.perf_counter()
    for i in range(args.count):
        pat = patterns[i % len(patterns)]
        x = git.random_p1_config(pat, rng)
        v = git.reductive_semistability(action, x, git.Budget(samples=args.samples, seed=args.seed * 100_003 + i))
        table[pat][v.tag] += 1
        if v.tag != git.INCONCLUSIVE and v.tag != EXPECTED[git.p1p4_oracle(x)]:
            wrong += 1
    elapsed = time.perf_counter() - t0

    tags = [git.STABLE, git.SEMISTABLE, git.UNSTABLE, git.INCONCLUSIVE]
    print(f"{'pattern':<10}{'rule':<22}" + "".join(f"{t:>14}" for t in tags))
    for pat in patterns:
        rule = git.p1p4_oracle([[0, 1, "inf", 2][lab] for lab in pat])
        print(f"{''.join(map(str, pat)):<10}{rule:<22}" + "".join(f"{table[pat][t]:>14}" for t in tags))
    total = collections.Counter()
    for c in table.values():
        total.update(c)
    print(f"\n{args.count} configurations in {elapsed:.2f}s, {wrong} disagreements, "
          f"inconclusive {total[git.INCONCLUSIVE] / args.count:.2%}")


if __name__ == "__main__":
    main()
