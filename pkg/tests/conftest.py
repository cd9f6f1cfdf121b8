import pytest

from siltwork.algebra import (AlgebraPresentation, PathExpr, Quiver, Term, build_algebra,
                              tensor_trivial_extension)
from siltwork.complexes import ProjComplex
from siltwork.linalg import QQ, Field
from siltwork.verify import algebra as bundled


def term(coeff, *path, vertex=None):
    return Term(coeff, tuple(path), vertex)


def el(alg, *arrows, coeff=1, tpow=0, vertex=None):
    """coeff * t^tpow * (path of named arrows, written order)."""
    names = {a[0]: i for i, a in enumerate(alg.arrows)}
    v = alg.vertices.index(vertex) if vertex is not None else None
    x = alg.path_element([names[a] for a in arrows], v)
    if tpow:
        x = alg.mul(alg.t_power(tpow), x)
    return alg.scale(x, alg.field(coeff))


def cx(alg, terms, diffs=None):
    """Complex from vertex-name terms {degree: "12"} and matrix diffs."""
    return ProjComplex(alg, {i: tuple(alg.vertices.index(v) for v in vs) for i, vs in terms.items()},
                       diffs or {})


@pytest.fixture(scope="session")
def a2():
    return bundled("a2")


@pytest.fixture(scope="session")
def a2t2():
    return bundled("a2_t2")


@pytest.fixture(scope="session")
def a2t3():
    return bundled("a2_t3")


@pytest.fixture(scope="session")
def dual():
    return bundled("dual_numbers")


@pytest.fixture(scope="session")
def kfield():
    return bundled("k")


@pytest.fixture(scope="session")
def kt2(kfield):
    return tensor_trivial_extension(kfield, 2, name="k[t]/t^2")


@pytest.fixture(scope="session")
def kt3(kfield):
    return tensor_trivial_extension(kfield, 3, name="k[t]/t^3")


@pytest.fixture(scope="session")
def b11():
    return bundled("brauer_1_1")


@pytest.fixture(scope="session")
def a2_f5():
    q = Quiver(("1", "2"), (("alpha", "1", "2"),))
    return build_algebra(AlgebraPresentation(Field(5), q, (), 2), "A2/F5")
