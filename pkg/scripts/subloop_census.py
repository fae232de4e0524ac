"""Subloop census of the catalog: lattice size, associativity, normality and classes.

    python scripts/subloop_census.py [--max-order 243]
"""

import argparse
from collections import Counter

from cmloops.constructions import catalog
from cmloops.series import nilpotency_class, solvability_class
from cmloops.subloops import all_subloops, is_associative_subloop, is_normal


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--max-order", type=int, default=243)
    args = parser.parse_args()

    header = f"{'loop':<10} {'order':>5} {'subloops':>8} {'normal':>6} {'nonassoc':>8} {'nil':>3} {'solv':>4}  sizes"
    print(header)
    print("-" * len(header))
    for name, L in catalog(args.max_order).items():
        subs = all_subloops(L, L.order)
        normal = sum(is_normal(L, H) for H in subs)
        nonassoc = sum(not is_associative_subloop(L, H) for H in subs)
        sizes = dict(sorted(Counter(H.size for H in subs).items()))
        print(f"{name:<10} {L.order:>5} {len(subs):>8} {normal:>6} {nonassoc:>8} "
              f"{nilpotency_class(L):>3} {solvability_class(L):>4}  {sizes}")


if __name__ == "__main__":
    main()
