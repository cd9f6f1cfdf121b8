import pytest

from siltwork.complexes import direct_sum, shift, stalk
from siltwork.io import bundled_path, presentation_from_json, read_json
from siltwork.oracles import (cartan_bound, oracle_hom_dim, oracle_path_count,
                              oracle_two_term_silting_count)
from siltwork.verify import algebra

from conftest import cx


@pytest.mark.parametrize("name, dim", [("a2", 3), ("dual_numbers", 2), ("k", 1),
                                       ("brauer_1_1", 18), ("brauer_2_1", 27)])
def test_path_count(name, dim):
    pres, _ = presentation_from_json(read_json(bundled_path(name)))
    assert oracle_path_count(pres).value == dim == algebra(name).dim


def test_hom_examples(a2, kt2):
    assert oracle_hom_dim(stalk(a2), stalk(a2), 0).value == a2.dim
    L = cx(kt2, {-1: "1", 0: "1"}, {-1: [[kt2.t]]})
    assert oracle_hom_dim(L, L, 1).value == 1
    for i in (-3, 3, 5):
        assert oracle_hom_dim(L, L, i).value == 0
    both = direct_sum(stalk(a2), shift(stalk(a2), 1))
    assert oracle_hom_dim(both, both, 1).value == a2.dim


@pytest.mark.parametrize("name, count", [("a2", 5), ("dual_numbers", 2), ("k", 2)])
def test_two_term_counts(name, count):
    res = oracle_two_term_silting_count(algebra(name))
    assert res.value == count == len(res.witnesses)


def test_two_term_witnesses_for_a2():
    res = oracle_two_term_silting_count(algebra("a2"))
    assert sorted(res.witnesses) == [(-2, 1), (-1, -1), (-1, 2), (1, -1), (1, 1)]


def test_tensor_extension_keeps_count(kt2):
    assert oracle_two_term_silting_count(algebra("a2_t2")).value == 5
    assert oracle_two_term_silting_count(kt2).value == 2


def test_cartan_bound_and_refusals():
    assert cartan_bound(algebra("a2")) == 2
    assert cartan_bound(algebra("brauer_1_1")) is None
    with pytest.raises(ValueError):
        oracle_two_term_silting_count(algebra("brauer_1_1"))
    with pytest.raises(ValueError):
        oracle_two_term_silting_count(algebra("brauer_1_1"), bound=1, max_dim=12)
