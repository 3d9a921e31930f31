"""Residuals of the type-A matrix model for ranks 1..4 over several seeds.

    python3 scripts/verify_model.py --seeds 0 1 2 --trials 200
"""
import argparse
import time

from implode.cli import property_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, nargs="+", default=[0])
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--max-rank", type=int, default=4)
    args = ap.parse_args()

    cols = ["section", "moment_left", "moment_right", "round_trip"]
    print(f"{'rank':>4}{'seed':>6}" + "".join(f"{c:>14}" for c in cols) + f"{'stab table':>12}{'time':>8}")
    for r in range(1, args.max_rank + 1):
        for seed in args.seeds:
            t0 = time.perf_counter()
            out = property_suite(r, seed, args.trials)
            res = out["max_residuals"]
            table_ok = all(row["oracle"] == row["expected"] for row in out["stabilizer_table"])
            print(f"{r:>4}{seed:>6}" + "".join(f"{res[c]:>14.2e}" for c in cols)
                  + f"{'ok' if table_ok else 'MISMATCH':>12}{time.perf_counter() - t0:>7.2f}s")


if __name__ == "__main__":
    main()
