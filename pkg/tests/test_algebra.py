import random

import pytest
from hypothesis import given, settings, strategies as st

from siltwork.algebra import (AlgebraError, AlgebraPresentation, PathExpr, Quiver,
                              build_algebra, projection_is_morphism, quotient_by_central_power,
                              structurally_isomorphic, tensor_trivial_extension)
from siltwork.linalg import QQ
from siltwork.oracles import oracle_path_count

from conftest import el, term


def test_a2_basis(a2):
    assert a2.dim == 3
    assert sorted(a2.label_str(b) for b in range(a2.dim)) == ["alpha", "e1", "e2"]
    assert not a2.t


def test_loop_modulo_square(dual):
    assert dual.dim == 2
    x = el(dual, "x")
    assert dual.mul(x, x) == {}


def test_brauer_dimension_matches_path_oracle(b11):
    from siltwork.io import bundled_path, presentation_from_json, read_json
    pres, _ = presentation_from_json(read_json(bundled_path("brauer_1_1")))
    assert b11.dim == oracle_path_count(pres).value == 18


def test_composition_convention(a2):
    alpha = el(a2, "alpha")
    e1, e2 = a2.e(0), a2.e(1)
    assert a2.mul(a2.mul(e1, alpha), e2) == {}
    assert a2.mul(a2.mul(e2, alpha), e1) == alpha
    one = a2.add(e1, e2)
    for b in range(a2.dim):
        assert a2.mul(one, {b: QQ(1)}) == {b: QQ(1)} == a2.mul({b: QQ(1)}, one)


def test_tensor_extension(a2, kfield):
    a = tensor_trivial_extension(a2, 2)
    assert (a.dim, a.t_nilpotency) == (6, 2)
    k3 = tensor_trivial_extension(kfield, 3)
    assert (k3.dim, k3.t_nilpotency) == (3, 3)
    a1 = tensor_trivial_extension(a2, 1)
    assert a1.dim == 3 and not a1.t and structurally_isomorphic(a1, a2)


def test_t_is_central_and_nilpotent(a2t3):
    t = a2t3.t
    for b in range(a2t3.dim):
        x = {b: QQ(1)}
        assert a2t3.mul(t, x) == a2t3.mul(x, t)
    assert a2t3.t_power(3) == {} and a2t3.t_power(2)
    assert a2t3.is_t_free()


def test_quotients(a2t2, kt3):
    same, proj = quotient_by_central_power(a2t2, 2)
    assert same is a2t2 and proj == [{b: QQ(1)} for b in range(a2t2.dim)]
    q1, proj1 = quotient_by_central_power(a2t2, 1)
    assert q1.dim == 3 and not q1.t
    assert projection_is_morphism(a2t2, q1, proj1)
    q2, _ = quotient_by_central_power(kt3, 2)
    assert (q2.dim, q2.t_nilpotency) == (2, 2)
    assert a2t2.level_algebra(1) == q1


def test_levels_are_cached_on_the_root(a2t3):
    assert a2t3.level_algebra(2) is a2t3.level_algebra(2)
    assert a2t3.level_algebra(2).level_algebra(1) is a2t3.level_algebra(1)
    assert a2t3.level_algebra(3) is a2t3


def test_loewy_length(a2, b11, dual):
    assert a2.loewy_length() == 2
    assert dual.loewy_length() == 2
    assert b11.loewy_length() == 4


def test_bad_presentations():
    q = Quiver(("1", "2"), (("a", "1", "2"), ("b", "2", "1")))
    with pytest.raises(AlgebraError):
        Quiver(("1", "1"), ())
    with pytest.raises(AlgebraError):
        Quiver(("1",), (("a", "1", "3"),))
    with pytest.raises(AlgebraError):  # a then a is not composable
        build_algebra(AlgebraPresentation(QQ, q, (PathExpr((term(1, "a", "a"),)),), 3))
    with pytest.raises(AlgebraError):  # terms not parallel
        build_algebra(AlgebraPresentation(QQ, q, (PathExpr((term(1, "a"), term(1, "b"))),), 3))
    with pytest.raises(AlgebraError):
        build_algebra(AlgebraPresentation(QQ, q, (), 0))


def test_prime_field_algebra(a2_f5):
    assert a2_f5.field.p == 5 and a2_f5.dim == 3
    x = a2_f5.scale(el(a2_f5, "alpha"), 3)
    assert a2_f5.add(x, a2_f5.scale(x, 4)) == {}


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from(["a2_t2", "dual_numbers", "brauer_1_1"]))
def test_associativity_and_unit(seed, name):
    from siltwork.verify import algebra
    a = algebra(name)
    rng = random.Random(seed)
    x, y, z = (a.random_element(rng) for _ in range(3))
    assert a.mul(a.mul(x, y), z) == a.mul(x, a.mul(y, z))
    assert a.mul(a.one(), x) == x == a.mul(x, a.one())
    assert a.sub(a.add(x, y), y) == x
