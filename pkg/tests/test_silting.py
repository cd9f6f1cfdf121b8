import pytest
from hypothesis import given, settings, strategies as st

from siltwork.complexes import direct_sum, shift, stalk
from siltwork.decomposition import basic_summands, iso_test
from siltwork.reduction import ReductionError, reduction_context
from siltwork.silting import (MutationError, Rejection, SiltingCertificate, certify_silting,
                              check_edges, check_partial_order, explore, fingerprint,
                              is_presilting, is_pretilting, is_two_term, k0_matrix, mutate,
                              poset_compare, replay_word)
from siltwork.verify import graph

from conftest import cx, el


def summand_index(c, vertex):
    parts = basic_summands(c)
    return next(k for k, p in enumerate(parts) if p.terms == {0: (vertex,)})


def test_presilting_examples(a2, kt2):
    s = stalk(a2)
    assert is_presilting(s) and is_pretilting(s)
    L = cx(kt2, {-1: "1", 0: "1"}, {-1: [[kt2.t]]})
    assert not is_presilting(L)
    both = direct_sum(s, shift(s, 1))
    assert not is_presilting(both) and not is_pretilting(both)


def test_k0_matrix(a2):
    rows, ok = k0_matrix(stalk(a2))
    assert sorted(rows) == [[0, 1], [1, 0]] and ok
    rows, ok = k0_matrix(shift(stalk(a2), 5))
    assert sorted(rows) == [[-1, 0], [0, -1]] and ok
    rows, ok = k0_matrix(stalk(a2, [0]))
    assert len(rows) == 1 and not ok


def test_certificates(a2):
    cert = certify_silting(stalk(a2), provenance=())
    assert isinstance(cert, SiltingCertificate) and cert.level == "mutation-provenance"
    x = cx(a2, {-1: "1", 0: "2"}, {-1: [[el(a2, "alpha")]]})
    cert = certify_silting(direct_sum(x, stalk(a2, [1])))
    assert cert.level == "two-term-criterion" and not cert.caveat()
    rej = certify_silting(stalk(a2, [0]))
    assert isinstance(rej, Rejection) and not rej
    assert not certify_silting(direct_sum(stalk(a2), shift(stalk(a2), 1)))
    far = direct_sum(stalk(a2, [0]), stalk(a2, [1], degree=-2))
    assert certify_silting(far).level == "heuristic"
    assert certify_silting(far).caveat()


def test_mutation_examples(a2, dual):
    mu = mutate(stalk(dual), 0, "right")
    assert iso_test(mu.result, shift(stalk(dual), 1))
    x = cx(a2, {-1: "1", 0: "2"}, {-1: [[el(a2, "alpha")]]})
    mu = mutate(stalk(a2), summand_index(stalk(a2), 0), "right")
    assert iso_test(mu.result, direct_sum(x, stalk(a2, [1])))
    assert iso_test(mu.new_summand, x) and is_two_term(mu.result)
    assert certify_silting(mu.result).level == "two-term-criterion"
    mu = mutate(stalk(a2), summand_index(stalk(a2), 1), "right")
    assert iso_test(mu.result, direct_sum(shift(stalk(a2, [1]), 1), stalk(a2, [0])))
    with pytest.raises(MutationError):
        mutate(stalk(a2), 5)
    with pytest.raises(ValueError):
        mutate(stalk(a2), 0, "up")


def test_left_inverts_right(a2):
    c = stalk(a2)
    for i in range(2):
        mu = mutate(c, i, "right")
        back = mutate(mu.result, mu.new_index, "left")
        assert iso_test(back.result, c)


def test_explore_small_cases(a2, dual):
    g = explore(a2, 0)
    assert len(g.nodes) == 1 and iso_test(g.nodes[0].complex, stalk(a2))
    g = explore(dual, 2, sides=("right",))
    assert len(g.nodes) == 3 and len(g.edges) == 2
    for k, node in enumerate(g.nodes):
        assert iso_test(node.complex, shift(stalk(dual), k))


def test_explore_a2_two_term_count():
    g = graph("a2", 1, 3)
    assert len(g.two_term_nodes()) == 5
    assert not check_edges(g) and not check_partial_order(g)
    for node in g.nodes:
        assert node.certificate.level == "mutation-provenance"
        assert iso_test(replay_word(g.algebra, node.word), node.complex)


def test_explore_is_deterministic_across_workers(a2):
    g1 = explore(a2, 2, jobs=1)
    g2 = explore(a2, 2, jobs=2)
    assert [n.fingerprint for n in g1.nodes] == [n.fingerprint for n in g2.nodes]
    assert g1.edges == g2.edges


def test_poset_compare():
    g = graph("a2", 1, 2)
    rep = poset_compare(g, g, reduction_context(g.algebra, g.algebra))
    assert rep.ok and rep.matching == {n.id: n.id for n in g.nodes}
    g2 = graph("a2", 2, 2)
    assert poset_compare(g2, g, reduction_context(g2.algebra, g.algebra)).ok
    other = graph("dual_numbers", 1, 1)
    with pytest.raises(ReductionError):
        poset_compare(g, other, reduction_context(g.algebra, g.algebra))


def test_symmetric_algebra_nodes_are_pretilting():
    g = graph("brauer_1_1", 1, 1)
    assert all(is_pretilting(n.complex) for n in g.nodes)


@settings(max_examples=15, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 1), st.sampled_from(["right", "left"])),
                min_size=1, max_size=3))
def test_random_words_give_silting(word):
    from siltwork.verify import algebra
    alg = algebra("a2")
    c = replay_word(alg, word)
    assert is_presilting(c)
    assert certify_silting(c, provenance=word).level == "mutation-provenance"
    assert fingerprint(c) == fingerprint(replay_word(alg, word))
