from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from siltwork.linalg import (QQ, Coordinates, Echelon, Field, det, extend_basis, identity, inverse,
                             kernel_basis, matmul, quotient_dims, rank, solve, zeros)

F7 = Field(7)


def q(rows):
    return [[QQ(x) for x in r] for r in rows]


def test_rank_examples():
    assert rank(identity(2)) == 2
    assert rank(zeros(3, 4)) == 0
    assert rank(q([[1, 2], [2, 4]])) == 1


def test_solve_examples():
    b = q([[1, 5], [-2, 3]])
    assert solve(identity(2), b) == b
    assert solve(q([[1], [0]]), q([[0], [1]])) is None
    assert solve(q([[2]]), q([[1]])) == [[QQ("1/2")]]


def test_kernel_examples():
    assert kernel_basis(identity(3)) == []
    assert len(kernel_basis(zeros(2, 3), cols=3)) == 3
    (v,) = kernel_basis(q([[1, 1]]))
    assert v[0] == -v[1] != 0


def test_quotient_dims_examples():
    assert quotient_dims([], 5) == 5
    assert quotient_dims(identity(3), 3) == 0
    assert quotient_dims(q([[1, 3]]), 2) == 1


def test_prime_field_arithmetic():
    assert F7("1/3") == 5
    assert F7.inv(3) == 5
    assert rank([[1, 2], [3, 6]], F7) == 1
    assert det([[1, 2], [3, 4]], F7) == (1 * 4 - 2 * 3) % 7
    with pytest.raises(ValueError):
        Field(6)


def test_echelon_tracks_combinations():
    ech = Echelon(QQ, track=True)
    assert ech.add({0: QQ(1), 1: QQ(1)}) is None
    assert ech.add({1: QQ(1)}) is None
    dep = ech.add({0: QQ(2), 1: QQ(5)})
    assert dep == {0: QQ(-2), 1: QQ(-3), 2: QQ(1)}
    assert ech.express({0: QQ(1)}) == {0: QQ(1), 1: QQ(-1)}


def test_extend_basis_and_coordinates():
    sub = [{0: QQ(1)}]
    picked = extend_basis(sub, [{0: QQ(3)}, {1: QQ(1)}, {0: QQ(1), 1: QQ(1)}])
    assert picked == [1]
    coords = Coordinates([{0: QQ(1), 1: QQ(1)}, {1: QQ(1)}])
    assert coords.coords({0: QQ(2), 1: QQ(5)}) == {0: QQ(2), 1: QQ(3)}
    assert coords.try_coords({2: QQ(1)}) is None


small = st.integers(min_value=-4, max_value=4)


@st.composite
def matrices(draw, max_rows=5, max_cols=5):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    return [[draw(small) for _ in range(c)] for _ in range(r)]


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_nullity(m):
    mq = q(m)
    ker = kernel_basis(mq)
    assert rank(mq) + len(ker) == len(m[0])
    for v in ker:
        assert all(x == 0 for row in matmul(mq, [[x] for x in v]) for x in row)


@settings(max_examples=60, deadline=None)
@given(matrices(4, 4))
def test_inverse_when_square_and_nonsingular(m):
    n = min(len(m), len(m[0]))
    sq = q([row[:n] for row in m[:n]])
    d = det(sq)
    assert (d != 0) == (rank(sq) == n)
    if d:
        assert matmul(inverse(sq), sq) == identity(n)


@settings(max_examples=60, deadline=None)
@given(matrices(), st.sampled_from([QQ, F7]))
def test_rank_matches_fraction_elimination(m, fld):
    # independent dense elimination over Fractions / ints mod p
    rows = [[Fraction(x) if not fld.p else x % fld.p for x in r] for r in m]
    r = 0
    for col in range(len(rows[0])):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                if fld.p:
                    f = rows[i][col] * pow(rows[r][col], fld.p - 2, fld.p)
                    rows[i] = [(a - f * b) % fld.p for a, b in zip(rows[i], rows[r])]
                else:
                    f = rows[i][col] / rows[r][col]
                    rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
    assert rank([[fld(x) for x in row] for row in m], fld) == r
