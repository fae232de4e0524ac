"""Time each property check on a catalog loop and print a small table.

    python scripts/profile_cml81.py [--construction cml81]
"""

import argparse
import time

from cmloops.associators import check_identities, check_inner_automorphism
from cmloops.constructions import build
from cmloops.series import bruck_slaby_check, lemma_1_7_check, lemma_3_1_check, series
from cmloops.subloops import all_subloops, p_components


def timed(label, fn):
    start = time.perf_counter()
    out = fn()
    print(f"{label:<24} {time.perf_counter() - start:8.3f}s  {out}")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--construction", default="cml81")
    args = parser.parse_args()

    start = time.perf_counter()
    L = build(args.construction)
    print(f"{L.name}: order {L.order}, built and verified in {time.perf_counter() - start:.3f}s")
    timed("identities", lambda: "ok" if check_identities(L).ok else "violated")
    timed("inner automorphisms", lambda: "ok" if check_inner_automorphism(L).ok else "violated")
    timed("bruck-slaby n=3", lambda: bruck_slaby_check(L, 3).detail)
    timed("lower central", lambda: series(L, "lower").sizes)
    timed("derived", lambda: series(L, "derived").sizes)
    timed("upper central", lambda: series(L, "upper").sizes)
    timed("subloop lattice", lambda: len(all_subloops(L, L.order)))
    timed("p-components", lambda: {p: c.size for p, c in p_components(L).items()})
    timed("cubes central", lambda: lemma_1_7_check(L).holds)
    timed("normal order 3", lambda: lemma_3_1_check(L).holds)


if __name__ == "__main__":
    main()
