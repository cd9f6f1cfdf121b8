#!/usr/bin/env python3
"""Lift every node of a level-1 mutation graph up a t-adic tower and report each step."""

import argparse

from siltwork.complexes import minimal
from siltwork.lifting import check_round_trip, lift_full
from siltwork.silting import explore, is_presilting
from siltwork.verify import tower


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--algebra", default="a2")
    ap.add_argument("--level", type=int, default=3)
    ap.add_argument("--depth", type=int, default=3)
    args = ap.parse_args()
    top = tower(args.algebra, args.level)
    g1 = explore(top.level_algebra(1), args.depth)
    gm = explore(top, args.depth)
    for node in g1.nodes:
        rep = lift_full(node.complex, top, args.level)
        hit = gm.find(minimal(rep.lifted))
        print(f"node {node.id:3d} {str(node.complex.terms):40s} -> level {args.level} node {hit}; "
              f"round trip {check_round_trip(rep, node.complex)}, "
              f"presilting {is_presilting(rep.lifted)}")


if __name__ == "__main__":
    main()
