"""Print the strata of the GL(r)-parabolic implosion and its epsilon-shifted version.

    python3 scripts/strata_tables.py --max-rank 4 --epsilon 1/100
"""
import argparse
from fractions import Fraction

from implode import implosion as imp


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-rank", type=int, default=3)
    ap.add_argument("--epsilon", default="1/100")
    ap.add_argument("--levi", default=None, help="comma separated simple roots; default 1..r-1")
    args = ap.parse_args()
    eps = Fraction(args.epsilon)

    for r in range(1, args.max_rank + 1):
        if args.levi is None:
            pd = imp.gl_r_parabolic(r)
        else:
            pd = imp.parabolic(r, [int(j) for j in args.levi.split(",") if j and int(j) <= r])
        print(f"rank {r}, Levi simple roots {sorted(pd.levi_simple_roots)}")
        print(f"  {'face':<14}{'m':>3}  {'pi':<10}{'commutator':<14}{'shifted':<10}")
        for s, d in zip(imp.strata_enumerate(pd), imp.desing_strata(pd, eps)):
            face = "{" + ",".join(map(str, sorted(s.face.vanishing))) + "}"
            pi = "(" + ",".join(map(str, s.group_type.upper_composition)) + ")"
            print(f"  {face:<14}{s.group_type.bottom_multiplicity:>3}  {pi:<10}{s.group_type.commutator_type:<14}{d.quotient_group:<10}")
        print()


if __name__ == "__main__":
    main()
