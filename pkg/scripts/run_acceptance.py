#!/usr/bin/env python3
"""Run acceptance criteria 1-9 and print one pass/fail line per criterion."""

import argparse
import sys

from siltwork.verify import CRITERIA, run_suite


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--only", type=int, nargs="*", help="criterion numbers to run")
    ap.add_argument("--details", action="store_true", help="print suite detail lines")
    args = ap.parse_args()
    failed = []
    for k in args.only or sorted(CRITERIA):
        res = run_suite(CRITERIA[k], seed=args.seed)
        print(f"criterion {k} {CRITERIA[k]}: {'PASS' if res.ok else 'FAIL'} ({res.seconds:.1f}s)")
        if args.details or not res.ok:
            for line in res.lines:
                print(f"    {line}")
        if not res.ok:
            failed.append(k)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
