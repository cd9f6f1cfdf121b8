#!/usr/bin/env python3
"""Bounded two-term silting counts for the bundled Brauer graph algebras.

Their Cartan matrices are singular, so the g-vector search needs an explicit
bound; counts at a fixed bound are compared across multiplicities.
"""

import argparse
import logging

from siltwork.oracles import oracle_two_term_silting_count
from siltwork.verify import algebra


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--bound", type=int, default=2)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("names", nargs="*", default=["brauer_1_1", "brauer_2_1"])
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO)
    for name in args.names:
        alg = algebra(name)
        res = oracle_two_term_silting_count(alg, bound=args.bound, seed=args.seed, max_dim=alg.dim)
        print(f"{name} (dim {alg.dim}): {res.value}")
        for g in sorted(res.witnesses):
            print(f"  g = {g}")


if __name__ == "__main__":
    main()
