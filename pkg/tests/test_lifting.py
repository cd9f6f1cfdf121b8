import random

import pytest
from hypothesis import given, settings, strategies as st

from siltwork.complexes import ProjComplex, direct_sum, stalk, validate
from siltwork.decomposition import iso_test
from siltwork.generate import random_complex
from siltwork.lifting import (LiftingError, ModuleData, check_round_trip, conormal_check,
                              lift_full, lift_module, lift_step, projective_resolution,
                              simple_module)
from siltwork.reduction import reduction_context
from siltwork.silting import is_presilting
from siltwork.verify import tower

from conftest import cx, el


def test_conormal_layers(a2t3, kt2, kfield):
    layers = conormal_check(a2t3)
    assert [c.level for c in layers] == [0, 1, 2]
    assert all(c.dim == 3 and c.free for c in layers)
    assert [(c.dim, c.free) for c in conormal_check(kt2)] == [(1, True), (1, True)]
    assert conormal_check(kfield) == []


def test_stalk_lifts(a2t3):
    a1 = a2t3.level_algebra(1)
    for m in (1, 2, 3):
        rep = lift_full(stalk(a1), a2t3, m)
        assert rep.ok and rep.lifted.terms == stalk(a2t3.level_algebra(m)).terms


def test_zero_differential_lifts(a2t2):
    a1 = a2t2.level_algebra(1)
    c = cx(a1, {-1: "12", 0: "2"})
    rep = lift_step(c, reduction_context(a2t2, a1))
    assert rep.outcome == "lifted"
    assert rep.lifted.terms == c.terms
    assert all(not x for d in rep.lifted.diffs.values() for row in d for x in row)


def test_two_term_lift(a2t2):
    a1 = a2t2.level_algebra(1)
    x = cx(a1, {-1: "1", 0: "2"}, {-1: [[el(a1, "alpha")]]})
    p = direct_sum(x, stalk(a1, [1]))
    rep = lift_full(p, a2t2, 2)
    assert rep.ok and check_round_trip(rep, p)
    assert rep.lifted.diffs[-1][0][0] == el(a2t2, "alpha")
    assert is_presilting(rep.lifted)


def test_obstruction_certificate(kfield):
    kt3 = tower("k", 3)
    k2 = kt3.level_algebra(2)
    c = ProjComplex(k2, {-1: (0,), 0: (0,), 1: (0,)}, {-1: [[k2.t]], 0: [[k2.t]]})
    rep = lift_step(c, reduction_context(kt3, k2))
    assert rep.outcome == "obstructed"
    ob = rep.obstruction
    assert ob.is_cocycle() and ob.is_unsolvable() and ob.h2_dim == 1
    assert not lift_full(c, kt3, 3, require=False).ok
    with pytest.raises(LiftingError):
        lift_full(c, kt3, 3, require=True)


def test_lift_full_preconditions(a2, a2t2, dual):
    with pytest.raises(LiftingError):
        lift_full(stalk(a2t2), a2t2, 5)
    with pytest.raises(LiftingError):
        lift_full(stalk(dual), a2t2, 2)


def test_resolutions_of_simples(a2):
    for v in range(2):
        res = projective_resolution(simple_module(a2, v), 3)
        validate(res)
        assert res.size == (1 if v == 0 else 2)


def test_module_lifts(a2, a2t2):
    for v in range(2):
        rep = lift_module(simple_module(a2, v), 3, a2t2, 2)
        assert rep.ok and rep.module_dim == 2 and rep.base_dim == 1
        assert rep.caveat
    proj = ModuleData(a2, (1, 1), {"alpha": [[a2.field.one]]})
    rep = lift_module(proj, 3, a2t2, 2)
    assert rep.ok and rep.module_dim == 4
    bad = ModuleData(a2, (1, 1), {"alpha": [[a2.field.one]]})
    with pytest.raises(LiftingError):
        lift_module(bad, 0, a2t2, 2)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from([("k", 3), ("a2", 3), ("dual_numbers", 2)]))
def test_lift_or_certified_obstruction(seed, spec):
    name, m = spec
    top = tower(name, m)
    rng = random.Random(seed)
    n = rng.randint(1, m - 1)
    low, high = top.level_algebra(n), top.level_algebra(n + 1)
    c = random_complex(low, rng, max_summands=3)
    rep = lift_step(c, reduction_context(high, low))
    if rep.outcome == "lifted":
        validate(rep.lifted)
        assert iso_test(reduction_context(high, low).reduce(rep.lifted), c)
        if is_presilting(c):
            assert is_presilting(rep.lifted)
    else:
        assert rep.outcome == "obstructed" and not is_presilting(c)
        assert rep.obstruction.is_cocycle() and rep.obstruction.is_unsolvable()
