import random

import pytest
from hypothesis import given, settings, strategies as st

from siltwork.complexes import (ChainMap, ComplexError, ProjComplex, cone, direct_sum,
                                identity_map, is_minimal, minimal, minimize, permute, shift,
                                stalk, validate, vertex_multiset, zero_map)
from siltwork.generate import random_complex
from siltwork.homspaces import HomComplex

from conftest import cx, el


def homotopic(f: ChainMap, g: ChainMap) -> bool:
    K = HomComplex(f.source, f.target)
    return K.is_coboundary(0, K.vector(0, (f - g).comps))


def test_validation_examples(a2, kt2):
    rep = validate(stalk(a2))
    assert rep.minimal
    ident = cx(a2, {-1: "1", 0: "1"}, {-1: [[a2.e(0)]]})
    assert not validate(ident).minimal
    t = kt2.t
    chain = cx(kt2, {-2: "1", -1: "1", 0: "1"}, {-2: [[t]], -1: [[t]]})
    assert validate(chain).minimal


def test_validation_rejects_bad_input(a2, kt3):
    with pytest.raises(ComplexError):  # entry outside e2 A e1
        validate(cx(a2, {-1: "1", 0: "2"}, {-1: [[a2.e(0)]]}))
    t = kt3.t
    with pytest.raises(ComplexError):  # t * t != 0 over k[t]/t^3
        validate(cx(kt3, {-2: "1", -1: "1", 0: "1"}, {-2: [[t]], -1: [[t]]}))
    with pytest.raises(ComplexError):
        ProjComplex(a2, {0: (0,), 1: (1,)}, {0: [[{}, {}]]})


def test_shift(a2):
    s = stalk(a2)
    assert shift(s, 0).terms == s.terms
    assert shift(s, 1).terms == {-1: (0, 1)}
    c = cx(a2, {-1: "1", 0: "2"}, {-1: [[el(a2, "alpha")]]})
    once = shift(shift(c, 1), 1)
    twice = shift(c, 2)
    assert once.terms == twice.terms and once.diffs == twice.diffs
    assert shift(c, 1).diffs[-2] == [[el(a2, "alpha", coeff=-1)]]


def test_cone_examples(a2):
    s = stalk(a2)
    assert minimal(cone(identity_map(s))).terms == {}
    zero = ProjComplex(a2, {})
    c = cone(zero_map(s, zero))
    assert c.terms == shift(s, 1).terms
    p1, p2 = stalk(a2, [0]), stalk(a2, [1])
    f = ChainMap(p1, p2, {0: [[el(a2, "alpha")]]})
    c = cone(f)
    assert c.terms == {-1: (0,), 0: (1,)} and is_minimal(c)


def test_cone_rejects_non_chain_maps(a2):
    c = cx(a2, {-1: "1", 0: "2"}, {-1: [[el(a2, "alpha")]]})
    bad = ChainMap(c, c, {0: [[a2.e(1)]]})
    assert not bad.is_chain_map()
    with pytest.raises(ComplexError):
        cone(bad)


def test_minimize_examples(a2, kt2):
    ident = cx(a2, {-1: "1", 0: "1"}, {-1: [[a2.e(0)]]})
    assert minimize(ident).complex.terms == {}
    c = cx(a2, {-1: "1", 0: "2"}, {-1: [[el(a2, "alpha")]]})
    m = minimize(c).complex
    assert m.terms == c.terms and m.diffs == c.diffs
    # (Λ ⊕ Λ -> Λ) with differential (1, t) over k[t]/t^2
    d = cx(kt2, {-1: "11", 0: "1"}, {-1: [[kt2.e(0), kt2.t]]})
    model = minimize(d)
    assert model.complex.terms == {-1: (0,)}
    assert model.complex.diffs == {}
    f, g = model.to_min, model.from_min
    assert f.is_chain_map() and g.is_chain_map()
    assert homotopic(f.compose(g), identity_map(model.complex))
    assert homotopic(g.compose(f), identity_map(d))


def test_permute_and_vertex_multiset(a2):
    c = cx(a2, {-1: "1", 0: "12"}, {-1: [[{}], [el(a2, "alpha")]]})
    validate(c)
    p, iso = permute(c, {0: [1, 0]})
    assert p.terms[0] == (1, 0) and iso.is_chain_map()
    assert vertex_multiset(p) == vertex_multiset(c)


def test_direct_sum_support(a2):
    s = direct_sum(stalk(a2, [0]), shift(stalk(a2, [1]), 2))
    assert s.support() == (-2, 0)
    assert s.k0_class() == (1, 1)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from(["a2_t2", "dual_numbers", "k"]))
def test_minimize_is_homotopy_equivalence(seed, name):
    from siltwork.verify import algebra
    alg = algebra(name)
    c = random_complex(alg, random.Random(seed))
    model = minimize(c)
    validate(model.complex)
    assert is_minimal(model.complex)
    f, g = model.to_min, model.from_min
    assert f.is_chain_map() and g.is_chain_map()
    assert homotopic(f.compose(g), identity_map(model.complex))
    assert homotopic(g.compose(f), identity_map(c))
    # minimal models of shifted complexes are shifted minimal models
    assert minimal(shift(c, 1)).terms == shift(model.complex, 1).terms
