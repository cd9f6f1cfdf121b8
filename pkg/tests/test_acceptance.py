"""Acceptance criteria 1-9, one pass/fail line each.

Every comparison is an exact integer or isomorphism check.  Run directly
(``python tests/test_acceptance.py``) or through pytest.
"""

import sys

import pytest

from siltwork.verify import CRITERIA, run_suite

TITLES = {
    1: "Hom dimensions agree with the brute-force oracle",
    2: "reduction matches the kA2 mutation graphs at levels 1, 2, 3",
    3: "every depth-3 kA2 node lifts to level 3 and round-trips",
    4: "Kunneth and end-ring identities over kA2 ⊗ k[t]/t^2",
    5: "mutation postconditions and partial order on explored graphs",
    6: "two-term silting counts agree with the enumeration oracle",
    7: "Brauer graph algebras B(1,1) and B(2,1) have equal bounded counts",
    8: "Tor identity and endo-freeness on pretilting nodes",
    9: "random lifts either succeed or carry a certified obstruction",
}


def criterion_line(k: int, res) -> str:
    status = "PASS" if res.ok else "FAIL"
    return f"criterion {k} [{CRITERIA[k]}] {status} ({res.seconds:.1f}s): {TITLES[k]}"


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k, capsys):
    res = run_suite(CRITERIA[k])
    with capsys.disabled():
        sys.stdout.write("\n" + criterion_line(k, res) + "\n")
        for line in res.lines:
            sys.stdout.write(f"    {line}\n")
    assert res.ok, "\n".join(res.lines)


if __name__ == "__main__":
    failed = 0
    for k in sorted(CRITERIA):
        res = run_suite(CRITERIA[k])
        print(criterion_line(k, res))
        failed += not res.ok
    sys.exit(1 if failed else 0)
