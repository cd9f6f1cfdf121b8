#!/usr/bin/env python3
"""Explore the mutation graph of kA2 ⊗ k[t]/t^m for several m and compare each with m = 1."""

import argparse

from siltwork.reduction import reduction_context
from siltwork.silting import explore, poset_compare
from siltwork.verify import tower


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--algebra", default="a2", help="bundled algebra name")
    ap.add_argument("--levels", type=int, nargs="+", default=[1, 2, 3])
    ap.add_argument("--depth", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    base = explore(tower(args.algebra, 1), args.depth, seed=args.seed)
    print(f"level 1: {len(base.nodes)} nodes, {len(base.edges)} edges, "
          f"{len(base.two_term_nodes())} two-term")
    for m in args.levels:
        if m == 1:
            continue
        g = explore(tower(args.algebra, m), args.depth, seed=args.seed)
        rep = poset_compare(g, base, reduction_context(g.algebra, base.algebra))
        print(f"level {m}: {len(g.nodes)} nodes; {rep.summary()}")


if __name__ == "__main__":
    main()
