import random

from hypothesis import given, settings, strategies as st

from siltwork.complexes import direct_sum, identity_map, minimal, permute, stalk, vertex_multiset
from siltwork.decomposition import (basic, decompose, decompose_with_maps, iso_test,
                                    summand_count)
from siltwork.generate import random_complex
from siltwork.homspaces import EndAlgebra, hom_table
from siltwork.verify import algebra

from conftest import cx, el


def two_term(a2):
    return cx(a2, {-1: "1", 0: "2"}, {-1: [[el(a2, "alpha")]]})


def test_stalk_splits_into_vertices(a2):
    parts = decompose(stalk(a2))
    assert sorted(p.terms[0] for p in parts) == [(0,), (1,)]


def test_indecomposable_is_singleton(a2):
    x = two_term(a2)
    assert len(decompose(x)) == 1
    assert EndAlgebra(x).semisimple_dim() == 1


def test_x_plus_x(a2):
    x = two_term(a2)
    parts = decompose(direct_sum(x, x))
    assert len(parts) == 2 and iso_test(parts[0], parts[1])
    assert summand_count(basic(direct_sum(x, x))) == 1
    assert iso_test(basic(direct_sum(x, x)), x)


def test_mixed_differential_needs_splitting(a2, a2_f5):
    for alg in (a2, a2_f5):
        a = el(alg, "alpha")
        c = cx(alg, {-1: "11", 0: "2"}, {-1: [[a, a]]})
        parts = decompose(c)
        assert len(parts) == 2
        assert iso_test(direct_sum(*parts), c)
        assert sorted(p.size for p in parts) == [1, 2]


def test_iso_examples(a2):
    x = two_term(a2)
    contractible = cx(a2, {-1: "1", 0: "1"}, {-1: [[a2.e(0)]]})
    assert iso_test(x, minimal(direct_sum(x, contractible)))
    assert not iso_test(stalk(a2, [0]), stalk(a2, [1]))
    y = direct_sum(x, stalk(a2, [1]))
    py, f = permute(y, {0: [1, 0]})
    res = iso_test(y, py)
    assert res and res.witness.is_chain_map()


def test_basic_keeps_basic_input(a2):
    b = basic(stalk(a2))
    assert summand_count(b) == 2 and iso_test(b, stalk(a2))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from(["a2", "dual_numbers", "a2_t2"]))
def test_decompose_recovers_input(seed, name):
    alg = algebra(name)
    c = minimal(random_complex(alg, random.Random(seed), max_summands=3))
    total, parts = decompose_with_maps(c, seed)
    pieces = [p.complex for p in parts]
    assert iso_test(direct_sum(*pieces), c) if pieces else c.is_zero()
    for p in pieces:
        assert len(decompose(p)) == 1
    for p in parts:
        assert (p.proj.compose(p.incl) - identity_map(p.complex)).is_zero()


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_iso_implies_matching_invariants(seed):
    alg = algebra("a2")
    rng = random.Random(seed)
    a = minimal(random_complex(alg, rng))
    b, _ = permute(a, {i: list(reversed(range(len(t)))) for i, t in a.terms.items()})
    assert iso_test(a, b)
    assert vertex_multiset(a) == vertex_multiset(b)
    assert hom_table(a, a) == hom_table(b, b)
