"""Krull-Schmidt decomposition and isomorphism tests in the homotopy category.

Indecomposable summands are split off with idempotents of the endomorphism
algebra ``E = H^0(Hom(c, c))``.  An idempotent of E is found by factoring
the minimal polynomial of a suitable element, lifted to an honest chain
idempotent by Newton iteration, and split degreewise by a rank
factorization whose pivots are read off the top (mod radical) matrices.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product
from typing import Optional

import sympy

from .algebra import Algebra
from .complexes import (ChainMap, ComplexError, Mat, ProjComplex, direct_sum, identity_map,
                        mat_mul, mat_zero, minimize, minimal, permute, vertex_multiset)
from .homspaces import EndAlgebra, HomComplex
from .linalg import Echelon, Field, inverse, independent_rows, independent_vectors

DEFAULT_SEED = 0
RANDOM_TRIES = 32
ISO_TRIES = 16


class DecompositionError(RuntimeError):
    pass


@dataclass
class Summand:
    """An indecomposable piece with its split inclusion and projection."""

    complex: ProjComplex
    incl: ChainMap  # piece -> whole
    proj: ChainMap  # whole -> piece


# --- top matrices ---------------------------------------------------------

def top_blocks(alg: Algebra, m: Mat, rows: tuple, cols: tuple) -> dict[int, tuple]:
    """Per vertex v: (row indices, col indices, k-matrix of e_v coefficients)."""
    out = {}
    for v in set(rows) | set(cols):
        ri = [r for r, w in enumerate(rows) if w == v]
        ci = [s for s, w in enumerate(cols) if w == v]
        k = [[alg.top_coeff(m[r][s], v) for s in ci] for r in ri]
        out[v] = (ri, ci, k)
    return out


def is_top_invertible(f: ChainMap) -> bool:
    """Degreewise invertibility of a chain map modulo the radical."""
    alg = f.source.algebra
    fld = alg.field
    degs = set(f.source.terms) | set(f.target.terms)
    for i in degs:
        src, tgt = f.source.term(i), f.target.term(i)
        if sorted(src) != sorted(tgt):
            return False
        for ri, ci, k in top_blocks(alg, f.comp(i), tgt, src).values():
            if len(independent_rows(k, fld)) != len(ri):
                return False
    return True


def _lift_top(alg: Algebra, km: list, verts: tuple) -> Mat:
    return [[{alg.idem[verts[s]]: x} if x else {} for s, x in enumerate(row)] for row in km]


def mat_inverse(alg: Algebra, m: Mat, row_verts: tuple, col_verts: tuple) -> Mat:
    """Inverse of a square matrix over the algebra that is invertible mod radical.

    ``m`` maps ``⊕ e_{col_verts}`` to ``⊕ e_{row_verts}``; the inverse goes back.
    """
    fld = alg.field
    n = len(m)
    top = [[fld.zero] * n for _ in range(n)]
    for r in range(n):
        for s in range(n):
            if row_verts[r] == col_verts[s]:
                top[r][s] = alg.top_coeff(m[r][s], row_verts[r])
    tinv = inverse(top, fld)  # raises when singular
    n0 = [[{alg.idem[col_verts[a]]: tinv[a][b]} if tinv[a][b] else {} for b in range(n)]
          for a in range(n)]
    prod = mat_mul(alg, m, n0)  # = 1 - z with z radical
    z = [[alg.sub(alg.e(row_verts[r]) if r == s else {}, prod[r][s]) for s in range(n)]
         for r in range(n)]
    total = [[alg.e(row_verts[r]) if r == s else {} for s in range(n)] for r in range(n)]
    power = total
    for _ in range(alg.dim + 1):
        power = mat_mul(alg, power, z)
        if all(not x for row in power for x in row):
            break
        total = [[alg.add(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(total, power)]
    else:
        raise ComplexError("radical matrix failed to be nilpotent")
    return mat_mul(alg, n0, total)


# --- idempotents in E -----------------------------------------------------

def _minimal_polynomial(E: EndAlgebra, a: dict) -> list:
    """Coefficients c_0..c_k (monic) of the minimal polynomial of a in E."""
    ech = Echelon(E.field, track=True)
    cur = E.unit
    while True:
        dep = ech.add(cur)
        if dep is not None:
            k = max(dep)
            lead = dep[k]
            inv = E.field.inv(lead)
            return [E.field.mul(dep.get(i, 0), inv) for i in range(k + 1)]
        cur = E.mul(cur, a)


def _poly_eval(E: EndAlgebra, coeffs: list, a: dict) -> dict:
    fld = E.field
    out: dict = {}
    for c in reversed(coeffs):
        out = E.mul(out, a)
        if c:
            for k, v in E.unit.items():
                out[k] = fld.add(out.get(k, 0), fld.mul(c, v))
            out = {k: v for k, v in out.items() if v}
    return out


def _to_sympy(field: Field, coeffs: list):
    x = sympy.Symbol("x")
    if field.p:
        return sympy.Poly(list(reversed([int(c) for c in coeffs])), x, modulus=field.p)
    rat = [sympy.Rational(int(c.numerator), int(c.denominator)) for c in coeffs]
    return sympy.Poly(list(reversed(rat)), x, domain=sympy.QQ)


def _from_sympy(field: Field, poly) -> list:
    out = []
    for c in reversed(poly.all_coeffs()):
        if field.p:
            out.append(int(c) % field.p)
        else:
            r = sympy.Rational(c)
            out.append(field(f"{r.p}/{r.q}"))
    return out


def _split_idempotent(E: EndAlgebra, a: dict) -> Optional[dict]:
    """A nontrivial idempotent in the subalgebra k[a], if k[a] has one."""
    coeffs = _minimal_polynomial(E, a)
    if len(coeffs) <= 2:
        return None
    poly = _to_sympy(E.field, coeffs)
    factors = poly.factor_list()[1]
    if len(factors) < 2:
        return None
    f, mult = factors[0]
    g = f ** mult
    h = sympy.div(poly, g)[0]
    s, _, one = sympy.gcdex(h, g)
    if one.degree() != 0:
        return None
    e_poly = (s * h).rem(poly) if hasattr(s * h, "rem") else sympy.rem(s * h, poly)
    e = _poly_eval(E, _from_sympy(E.field, e_poly), a)
    if not e or e == E.unit or E.mul(e, e) != e:
        return None
    return e


def find_idempotent(E: EndAlgebra, rng: random.Random) -> Optional[dict]:
    """A nontrivial idempotent of E, or None when E is local."""
    if E.semisimple_dim() <= 1:
        return None
    n = E.dim
    fld = E.field
    for b in range(n):
        e = _split_idempotent(E, {b: fld.one})
        if e is not None:
            return e
    for _ in range(RANDOM_TRIES):
        a = {b: fld(rng.randint(-3, 3)) for b in range(n)}
        a = {b: c for b, c in a.items() if c}
        if a:
            e = _split_idempotent(E, a)
            if e is not None:
                return e
    u = {b: fld(rng.randint(-5, 5)) for b in range(n)}
    w = {b: fld(rng.randint(-5, 5)) for b in range(n)}
    for x, y in product(range(-4, 5), repeat=2):
        a = {}
        for b in range(n):
            c = fld.add(fld.mul(fld(x), u.get(b, 0)), fld.mul(fld(y), w.get(b, 0)))
            if c:
                a[b] = c
        if a:
            e = _split_idempotent(E, a)
            if e is not None:
                return e
    raise DecompositionError("no idempotent found although E/rad E is not a division algebra")


def lift_idempotent(f: ChainMap, max_iter: int = 64) -> ChainMap:
    """Newton iteration ``e -> 3e^2 - 2e^3`` until e is a chain idempotent."""
    alg = f.source.algebra
    three, two = alg.field(3), alg.field(2)
    e = f
    for _ in range(max_iter):
        e2 = e.compose(e)
        if (e2 - e).is_zero():
            return e
        e3 = e2.compose(e)
        e = e2.scaled(three) - e3.scaled(two)
    raise DecompositionError("Newton iteration for the idempotent did not converge")


def split_by_idempotent(e: ChainMap) -> tuple[ProjComplex, ChainMap, ChainMap]:
    """Image of a chain idempotent with its inclusion and projection."""
    c = e.source
    alg = c.algebra
    fld = alg.field
    S_of, R_of = {}, {}
    for i, verts in c.terms.items():
        m = e.comp(i)
        S, R = [], []
        for v, (ri, ci, k) in sorted(top_blocks(alg, m, verts, verts).items()):
            cols = [{r: k[r][s] for r in range(len(ri)) if k[r][s]} for s in range(len(ci))]
            cs = independent_vectors(cols, fld)
            sub = [[k[r][s] for s in cs] for r in range(len(ri))]
            rs = independent_rows(sub, fld)
            S.extend(ci[s] for s in cs)
            R.extend(ri[r] for r in rs)
        S_of[i], R_of[i] = S, R
    terms = {i: tuple(c.terms[i][s] for s in S_of[i]) for i in c.terms}
    incl, proj = {}, {}
    for i, verts in c.terms.items():
        S, R = S_of[i], R_of[i]
        if not S:
            continue
        m = e.comp(i)
        iota = [[dict(m[r][s]) for s in S] for r in range(len(verts))]
        core = [[m[r][s] for s in S] for r in R]
        core_inv = mat_inverse(alg, core, tuple(verts[r] for r in R), tuple(verts[s] for s in S))
        proj[i] = mat_mul(alg, core_inv, [m[r] for r in R], inner=len(R), cols=len(verts))
        incl[i] = iota
    diffs = {}
    for i in c.diffs:
        if terms.get(i) and terms.get(i + 1):
            inner = mat_mul(alg, c.diffs[i], incl[i], inner=len(c.terms[i]))
            diffs[i] = mat_mul(alg, proj[i + 1], inner, inner=len(c.terms[i + 1]))
    piece = ProjComplex(alg, terms, diffs)
    return piece, ChainMap(piece, c, incl), ChainMap(c, piece, proj)


# --- decomposition --------------------------------------------------------

def _components(c: ProjComplex) -> list[dict]:
    """Connected components of the nonzero-entry graph on summands."""
    nodes = [(i, k) for i, v in c.terms.items() for k in range(len(v))]
    parent = {n: n for n in nodes}

    def find(n):
        while parent[n] != n:
            parent[n] = parent[parent[n]]
            n = parent[n]
        return n

    for i, d in c.diffs.items():
        for r, row in enumerate(d):
            for s, x in enumerate(row):
                if x:
                    parent[find((i, s))] = find((i + 1, r))
    groups: dict = {}
    for n in nodes:
        groups.setdefault(find(n), []).append(n)
    out = []
    for members in groups.values():
        perm: dict = {}
        for i, k in sorted(members):
            perm.setdefault(i, []).append(k)
        out.append(perm)
    out.sort(key=lambda p: sorted((i, k) for i, ks in p.items() for k in ks))
    return out


def _restrict(c: ProjComplex, sel: dict) -> Summand:
    alg = c.algebra
    terms = {i: tuple(c.terms[i][k] for k in ks) for i, ks in sel.items()}
    diffs = {}
    for i in sel:
        if i + 1 in sel and i in c.diffs:
            diffs[i] = [[dict(c.diffs[i][r][s]) for s in sel[i]] for r in sel[i + 1]]
    piece = ProjComplex(alg, terms, diffs)
    incl, proj = {}, {}
    for i, ks in sel.items():
        n = len(c.terms[i])
        inc = mat_zero(n, len(ks))
        pr = mat_zero(len(ks), n)
        for a, k in enumerate(ks):
            inc[k][a] = alg.e(c.terms[i][k])
            pr[a][k] = alg.e(c.terms[i][k])
        incl[i], proj[i] = inc, pr
    return Summand(piece, ChainMap(piece, c, incl), ChainMap(c, piece, proj))


def _split_rec(s: Summand, rng: random.Random, out: list) -> None:
    c = s.complex
    E = EndAlgebra(c)
    idem = find_idempotent(E, rng)
    if idem is None:
        out.append(s)
        return
    e = lift_idempotent(E.element_map(idem))
    f = identity_map(c) - e
    for g in (e, f):
        piece, inc, pr = split_by_idempotent(g)
        _split_rec(Summand(piece, s.incl.compose(inc), pr.compose(s.proj)), rng, out)


def decompose_with_maps(c: ProjComplex, seed: int = DEFAULT_SEED) -> tuple[ProjComplex, list[Summand]]:
    """Minimal model of c and its indecomposable summands with split maps into it."""
    c = minimal(c)
    rng = random.Random(seed)
    out: list[Summand] = []
    if c.is_zero():
        return c, out
    for sel in _components(c):
        _split_rec(_restrict(c, sel), rng, out)
    return c, out


def decompose(c: ProjComplex, seed: int = DEFAULT_SEED) -> list[ProjComplex]:
    """Indecomposable summands of c (up to homotopy), in canonical order."""
    return canonical_order([s.complex for s in decompose_with_maps(c, seed)[1]])


def summand_key(c: ProjComplex) -> tuple:
    sup = c.support() or (0, 0)
    return (sup[0], sup[1], c.signature())


def canonical_order(cs: list[ProjComplex]) -> list[ProjComplex]:
    return sorted(cs, key=summand_key)


# --- isomorphism ------------------------------------------------------------

@dataclass
class IsoResult:
    isomorphic: bool
    witness: Optional[ChainMap] = None  # minimal(a) -> minimal(b)
    reason: str = ""

    def __bool__(self):
        return self.isomorphic


def _random_cocycle(K: HomComplex, Z: list[dict], rng: random.Random) -> dict:
    fld = K.field
    vec: dict = {}
    for z in Z:
        c = fld(rng.randint(-7, 7))
        if not c:
            continue
        for k, v in z.items():
            vec[k] = fld.add(vec.get(k, 0), fld.mul(c, v))
    return {k: v for k, v in vec.items() if v}


def _search_iso(a: ProjComplex, b: ProjComplex, rng: random.Random, tries: int) -> Optional[ChainMap]:
    K = HomComplex(a, b)
    Z = K.cocycles(0)
    if not Z:
        return None
    for z in Z:
        f = K.chain_map(z)
        if is_top_invertible(f):
            return f
    for _ in range(tries):
        f = K.chain_map(_random_cocycle(K, Z, rng))
        if is_top_invertible(f):
            return f
    return None


def _indecomposables_isomorphic(a: ProjComplex, b: ProjComplex) -> Optional[ChainMap]:
    """For indecomposable minimal a, b: an isomorphism a -> b or None."""
    if vertex_multiset(a) != vertex_multiset(b):
        return None
    Kab, Kba = HomComplex(a, b), HomComplex(b, a)
    fs = [Kab.chain_map(z) for z in Kab.cocycles(0)]
    gs = [Kba.chain_map(z) for z in Kba.cocycles(0)]
    for f in fs:
        for g in gs:
            if is_top_invertible(g.compose(f)):
                return f
    return None


def iso_test(a: ProjComplex, b: ProjComplex, seed: int = DEFAULT_SEED) -> IsoResult:
    """Decide ``a ≅ b`` in the homotopy category; the witness acts on minimal models."""
    if a.algebra != b.algebra:
        raise ComplexError("complexes over different algebras")
    a, b = minimal(a), minimal(b)
    if vertex_multiset(a) != vertex_multiset(b):
        return IsoResult(False, reason="degreewise vertex multisets differ")
    if a.is_zero():
        return IsoResult(True, identity_map(a), "both zero")
    rng = random.Random(seed)
    f = _search_iso(a, b, rng, ISO_TRIES)
    if f is not None:
        return IsoResult(True, f, "random cocycle")
    _, pa = decompose_with_maps(a, seed)
    _, pb = decompose_with_maps(b, seed)
    if len(pa) != len(pb):
        return IsoResult(False, reason="different numbers of indecomposable summands")
    used = set()
    total = None
    for sa in pa:
        hit = None
        for j, sb in enumerate(pb):
            if j in used:
                continue
            g = _indecomposables_isomorphic(sa.complex, sb.complex)
            if g is not None:
                hit = (j, g)
                break
        if hit is None:
            return IsoResult(False, reason="indecomposable summands do not match")
        j, g = hit
        used.add(j)
        piece = pb[j].incl.compose(g.compose(sa.proj))
        total = piece if total is None else total + piece
    if not is_top_invertible(total):
        raise DecompositionError("assembled isomorphism is not invertible")
    return IsoResult(True, total, "summand matching")


def is_isomorphic(a: ProjComplex, b: ProjComplex, seed: int = DEFAULT_SEED) -> bool:
    return iso_test(a, b, seed).isomorphic


def dedupe(cs: list[ProjComplex], seed: int = DEFAULT_SEED) -> list[ProjComplex]:
    reps: list[ProjComplex] = []
    for x in cs:
        if not any(vertex_multiset(x) == vertex_multiset(r) and iso_test(x, r, seed) for r in reps):
            reps.append(x)
    return reps


def basic_summands(c: ProjComplex, seed: int = DEFAULT_SEED) -> list[ProjComplex]:
    """Representatives of the iso-classes of indecomposable summands, canonically ordered."""
    return canonical_order(dedupe(decompose(c, seed), seed))


def basic(c: ProjComplex, seed: int = DEFAULT_SEED) -> ProjComplex:
    parts = basic_summands(c, seed)
    if not parts:
        return minimal(c)
    return direct_sum(*parts)


def summand_count(c: ProjComplex, seed: int = DEFAULT_SEED) -> int:
    """Number of pairwise non-isomorphic indecomposable summands, ``|c|``."""
    return len(basic_summands(c, seed))
