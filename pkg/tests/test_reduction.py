import random

import pytest
from hypothesis import given, settings, strategies as st

from siltwork.complexes import ChainMap, cone, direct_sum, minimal, stalk
from siltwork.decomposition import iso_test
from siltwork.generate import random_complex
from siltwork.homspaces import HomComplex, relation
from siltwork.reduction import (ReductionError, end_ring_comparison, endo_free_test,
                                kunneth_check, pretilting_tor_check, quotient_cohomology,
                                reduce_complex, reduction_context)
from siltwork.silting import is_presilting, is_pretilting
from siltwork.verify import graph, tower

from conftest import cx, el


def test_context_is_algebra_map(a2t2, a2t3):
    assert reduction_context(a2t2, a2t2.level_algebra(1)).is_morphism()
    assert reduction_context(a2t3, a2t3.level_algebra(2)).is_morphism()


def test_reduce_examples(a2t2):
    a1 = a2t2.level_algebra(1)
    assert reduce_complex(stalk(a2t2), a1).terms == stalk(a1).terms
    zero_diff = cx(a2t2, {-1: "12", 0: "2"})
    r = reduce_complex(zero_diff, a1)
    assert r.terms == zero_diff.terms
    assert all(not x for d in r.diffs.values() for row in d for x in row)
    d = a2t2.add(el(a2t2, "alpha"), el(a2t2, "alpha", tpow=1))
    c = cx(a2t2, {-1: "1", 0: "2"}, {-1: [[d]]})
    assert reduce_complex(c, a1).diffs == {-1: [[el(a1, "alpha")]]}


def test_reduction_composes(a2t3):
    a2, a1 = a2t3.level_algebra(2), a2t3.level_algebra(1)
    rng = random.Random(3)
    for _ in range(10):
        c = random_complex(a2t3, rng)
        direct = reduce_complex(c, a1)
        twostep = reduce_complex(reduce_complex(c, a2), a1)
        assert direct.terms == twostep.terms and direct.diffs == twostep.diffs


def test_precondition_errors(a2, a2t2, dual):
    with pytest.raises(ReductionError):
        reduction_context(a2t2, dual)
    with pytest.raises(ReductionError):
        reduction_context(a2t2.level_algebra(1), a2t2)


def test_kunneth_examples(kt2):
    ctx = reduction_context(kt2, kt2.level_algebra(1))
    rep = kunneth_check(ctx, stalk(kt2), stalk(kt2))
    assert rep.ok and rep.data["quotient"][0] == kt2.level_algebra(1).dim
    L = cx(kt2, {-1: "1", 0: "1"}, {-1: [[kt2.t]]})
    assert kunneth_check(ctx, L, L).ok
    assert not relation(L, L, "geq") and not is_presilting(ctx.reduce(L))


def test_end_ring_examples(a2t2, kt3):
    for alg in (a2t2, kt3):
        ctx = reduction_context(alg, alg.level_algebra(1))
        rep = end_ring_comparison(ctx, stalk(alg))
        assert rep.ok
        assert rep.data["dim_end_reduced"] == alg.dim // alg.t_nilpotency
    ctx = reduction_context(a2t2, a2t2.level_algebra(1))
    x = cx(a2t2, {-1: "1", 0: "2"}, {-1: [[el(a2t2, "alpha")]]})
    one = end_ring_comparison(ctx, x)
    two = end_ring_comparison(ctx, direct_sum(x, x))
    assert one.ok and two.ok
    assert two.data["dim_end"] == 4 * one.data["dim_end"]
    assert two.data["dim_end_reduced"] == 4 * one.data["dim_end_reduced"]
    with pytest.raises(ReductionError):
        end_ring_comparison(ctx, direct_sum(stalk(a2t2), stalk(a2t2, degree=-1)))


def test_tor_and_endo_free_on_stalk(a2t3):
    ctx = reduction_context(a2t3, a2t3.level_algebra(1))
    rep = pretilting_tor_check(ctx, stalk(a2t3), extra=4)
    assert rep.ok and all(a == b == 0 for i, (a, b) in rep.data.items() if i > 0)
    ef = endo_free_test(ctx, stalk(a2t3))
    assert ef.free and ef.t_free and ef.hom_minus_one == 0
    with pytest.raises(ReductionError):
        endo_free_test(reduction_context(a2t3, a2t3.level_algebra(2)), stalk(a2t3))


def test_graph_nodes_satisfy_identities():
    g = graph("a2", 2, 2)
    ctx = reduction_context(g.algebra, g.algebra.level_algebra(1))
    pretilting = 0
    for node in g.nodes:
        assert kunneth_check(ctx, node.complex, node.complex).ok
        assert end_ring_comparison(ctx, node.complex).ok
        if is_pretilting(node.complex):
            pretilting += 1
            ef = endo_free_test(ctx, node.complex)
            assert ef.free == ef.t_free
    assert pretilting >= 1


def test_quotient_cohomology_at_full_level(a2t2):
    rng = random.Random(7)
    for _ in range(5):
        l, m = random_complex(a2t2, rng), random_complex(a2t2, rng)
        K = HomComplex(l, m)
        assert quotient_cohomology(K, 2) == {p: K.cohomology_dim(p) for p in K.degrees}


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from([2, 3]))
def test_reduction_is_functorial(seed, m):
    alg = tower("a2", m)
    ctx = reduction_context(alg, alg.level_algebra(1))
    rng = random.Random(seed)
    l, x = random_complex(alg, rng), random_complex(alg, rng)
    K = HomComplex(l, x)
    Z = K.cocycles(0)
    if not Z:
        return
    f = K.chain_map(Z[rng.randrange(len(Z))])
    c1, c2 = ctx.reduce(cone(f)), cone(ctx.reduce_map(f))
    assert c1.terms == c2.terms and c1.diffs == c2.diffs
    assert ctx.reduce_map(f).is_chain_map()
    assert kunneth_check(ctx, l, x).ok
    if iso_test(l, l):
        assert iso_test(ctx.reduce(minimal(l)), ctx.reduce(l))
