import random

from hypothesis import given, settings, strategies as st

from siltwork.complexes import direct_sum, shift, stalk
from siltwork.decomposition import decompose
from siltwork.generate import random_complex
from siltwork.homspaces import (EndAlgebra, HomComplex, hom_dim, hom_table, is_free_t_module,
                                relation, tor_base, tor_profile)
from siltwork.linalg import QQ
from siltwork.oracles import oracle_hom_dim
from siltwork.verify import algebra

from conftest import cx, el


def t_complex(alg):
    return cx(alg, {-1: "1", 0: "1"}, {-1: [[alg.t]]})


def test_stalk_hom_complex(a2):
    K = HomComplex(stalk(a2), stalk(a2))
    assert [K.dim(p) for p in (-1, 0, 1)] == [0, 3, 0]
    assert all(hom_dim(stalk(a2), stalk(a2), i) == (3 if i == 0 else 0) for i in range(-2, 3))


def test_t_complex_dimensions(kt2):
    L = t_complex(kt2)
    K = HomComplex(L, L)
    assert [K.dim(p) for p in (-1, 0, 1)] == [2, 4, 2]
    assert hom_dim(L, L, 1) == 1
    assert oracle_hom_dim(L, L, 1).value == 1


def test_support_window(a2):
    L = cx(a2, {1: "1", 2: "2"}, {1: [[el(a2, "alpha")]]})
    M = cx(a2, {-3: "1", -1: "2"})
    K = HomComplex(L, M)
    assert (K.lo, K.hi) == (-3 - 2, -1 - 1)


def test_relations(a2, kt2):
    s = stalk(a2)
    assert relation(s, s, "geq")
    assert not relation(t_complex(kt2), t_complex(kt2), "geq")
    assert not relation(s, shift(s, 1), "perp")
    assert relation(s, shift(s, 1), "geq")


def test_end_algebra(a2, dual):
    E = EndAlgebra(stalk(a2))
    assert E.dim == 3 and E.semisimple_dim() == 2
    unit = E.unit
    for a in range(E.dim):
        assert E.mul(unit, {a: QQ(1)}) == {a: QQ(1)}
    x = cx(a2, {-1: "1", 0: "2"}, {-1: [[el(a2, "alpha")]]})
    ex = EndAlgebra(x)
    assert EndAlgebra(direct_sum(x, x)).dim == 4 * ex.dim == hom_dim(direct_sum(x, x), direct_sum(x, x), 0)
    assert ex.semisimple_dim() == 1 and len(decompose(x)) == 1
    assert EndAlgebra(stalk(dual)).semisimple_dim() == 1


def test_tor_over_truncated_polynomials():
    assert tor_profile([{}], 2, QQ, upto=5) == {i: 1 for i in range(6)}
    free = [{1: QQ(1)}, {}]  # k[t]/t^2 on the basis 1, t
    assert tor_profile(free, 2, QQ, upto=4) == {0: 1, 1: 0, 2: 0, 3: 0, 4: 0}
    assert is_free_t_module(free, 2, QQ) and not is_free_t_module([{}], 2, QQ)
    # Tor_0 = dim N - rank(t)
    n = [{1: QQ(1)}, {2: QQ(1)}, {}]  # k[t]/t^3 viewed over k[t]/t^3
    assert tor_base(n, 3, 0, QQ) == 1


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from(["a2", "a2_t2", "dual_numbers", "k"]),
       st.integers(-2, 2))
def test_hom_dim_against_oracle(seed, name, shift_by):
    alg = algebra(name)
    rng = random.Random(seed)
    l, m = random_complex(alg, rng), random_complex(alg, rng)
    table = hom_table(l, m)
    K = HomComplex(l, m)
    for i in range(K.lo - 1, K.hi + 2):
        assert table.get(i, 0) == oracle_hom_dim(l, m, i).value
        assert hom_dim(shift(l, shift_by), shift(m, shift_by), i) == table.get(i, 0)
