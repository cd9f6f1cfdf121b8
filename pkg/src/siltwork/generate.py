"""Seeded random bounded complexes of projectives, used by tests and scripts."""

from __future__ import annotations

import random
from typing import Optional

from .algebra import Algebra
from .complexes import Mat, ProjComplex, mat_mul, mat_zero
from .linalg import kernel_sparse


def _units(alg: Algebra, src: tuple, tgt: tuple) -> list[tuple[int, int, int]]:
    return [(r, s, b) for r, w in enumerate(tgt) for s, v in enumerate(src)
            for b in alg.block_basis[(w, v)]]


def _unit_matrix(alg: Algebra, unit, src: tuple, tgt: tuple, coeff) -> Mat:
    m = mat_zero(len(tgt), len(src))
    r, s, b = unit
    m[r][s] = {b: coeff}
    return m


def random_differential(alg: Algebra, rng: random.Random, src: tuple, tgt: tuple,
                        prev: Optional[Mat] = None, prev_src: tuple = (),
                        density: float = 0.7) -> Mat:
    """Random map ``src -> tgt`` whose composite with ``prev`` vanishes."""
    units = _units(alg, src, tgt)
    if not units:
        return mat_zero(len(tgt), len(src))
    one = alg.field.one
    if prev is None or not prev_src:
        allowed = [{i: one} for i in range(len(units))]
    else:
        cols = []
        for u in units:
            prod = mat_mul(alg, _unit_matrix(alg, u, src, tgt, one), prev,
                           inner=len(src), cols=len(prev_src))
            vec = {}
            for r, row in enumerate(prod):
                for s, x in enumerate(row):
                    for b, c in x.items():
                        vec[(r * len(prev_src) + s) * alg.dim + b] = c
            cols.append(vec)
        allowed = kernel_sparse(cols, alg.field)
    d = mat_zero(len(tgt), len(src))
    for vec in allowed:
        if rng.random() > density:
            continue
        k = alg.field(rng.choice((-2, -1, 1, 1, 2)))
        for i, c in vec.items():
            r, s, b = units[i]
            x = d[r][s]
            x[b] = alg.field.add(x.get(b, alg.field.zero), alg.field.mul(k, c))
            if not x[b]:
                del x[b]
    return d


def random_complex(alg: Algebra, rng: random.Random, max_summands: int = 4,
                   max_width: int = 3, low: int = -2) -> ProjComplex:
    """A complex with at most ``max_summands`` summands per term and support width
    at most ``max_width``, starting in a degree between ``low`` and 0."""
    width = rng.randint(1, max_width)
    start = rng.randint(low, 0)
    n = alg.n_vertices
    terms = {}
    for i in range(start, start + width):
        k = rng.randint(1 if i == start else 0, max_summands)
        terms[i] = tuple(sorted(rng.randrange(n) for _ in range(k)))
    diffs = {}
    prev, prev_src = None, ()
    for i in range(start, start + width - 1):
        src, tgt = terms[i], terms[i + 1]
        d = random_differential(alg, rng, src, tgt, prev, prev_src)
        diffs[i] = d
        prev, prev_src = d, src
    return ProjComplex(alg, terms, diffs)


def random_complexes(alg: Algebra, count: int, seed: int = 0, **kw) -> list[ProjComplex]:
    rng = random.Random(seed)
    return [random_complex(alg, rng, **kw) for _ in range(count)]
