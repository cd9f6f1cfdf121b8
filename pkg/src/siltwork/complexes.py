"""Bounded complexes of finitely generated projective right modules.

A term is a tuple of vertex indices standing for ``⊕ e_v A``.  A morphism
``P -> Q`` is a matrix whose ``(r, s)`` entry lies in ``e_{Q[r]} A e_{P[s]}``
and acts by left multiplication.  ``diffs[i]`` maps ``terms[i]`` to
``terms[i + 1]``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional

from .algebra import Algebra


class ComplexError(ValueError):
    pass


Mat = list  # list of rows, each a list of sparse algebra elements


# --- matrices over the algebra -------------------------------------------

def mat_zero(rows: int, cols: int) -> Mat:
    return [[{} for _ in range(cols)] for _ in range(rows)]


def mat_identity(alg: Algebra, verts: tuple) -> Mat:
    m = mat_zero(len(verts), len(verts))
    for i, v in enumerate(verts):
        m[i][i] = alg.e(v)
    return m


def mat_mul(alg: Algebra, a: Mat, b: Mat, inner: Optional[int] = None,
            cols: Optional[int] = None) -> Mat:
    n = len(b) if inner is None else inner
    if cols is None:
        cols = len(b[0]) if b else 0
    out = mat_zero(len(a), cols)
    p = alg.field.p
    for r, row in enumerate(a):
        orow = out[r]
        for k in range(n):
            x = row[k]
            if not x:
                continue
            for c in range(cols):
                y = b[k][c]
                if y:
                    prod = alg.mul(x, y)
                    if prod:
                        cur = orow[c]
                        for key, val in prod.items():
                            cur[key] = cur.get(key, 0) + val
        for c in range(cols):
            cur = orow[c]
            if cur:
                if p:
                    orow[c] = {k: v % p for k, v in cur.items() if v % p}
                else:
                    orow[c] = {k: v for k, v in cur.items() if v}
    return out


def mat_add(alg: Algebra, a: Mat, b: Mat) -> Mat:
    return [[alg.add(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(alg: Algebra, a: Mat, b: Mat) -> Mat:
    return [[alg.sub(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(alg: Algebra, a: Mat, c) -> Mat:
    return [[alg.scale(x, c) for x in row] for row in a]


def mat_is_zero(a: Mat) -> bool:
    return all(not x for row in a for x in row)


def mat_copy(a: Mat) -> Mat:
    return [[dict(x) for x in row] for row in a]


def mat_map(f, a: Mat) -> Mat:
    return [[f(x) for x in row] for row in a]


def block_diag(blocks: list[tuple[Mat, int, int]]) -> Mat:
    """Block-diagonal matrix from ``(matrix, rows, cols)`` triples."""
    R = sum(b[1] for b in blocks)
    C = sum(b[2] for b in blocks)
    out = mat_zero(R, C)
    r0 = c0 = 0
    for m, r, c in blocks:
        for i in range(r):
            for j in range(c):
                out[r0 + i][c0 + j] = dict(m[i][j])
        r0 += r
        c0 += c
    return out


def submatrix(a: Mat, rows: Iterable[int], cols: Iterable[int]) -> Mat:
    cols = list(cols)
    return [[dict(a[r][c]) for c in cols] for r in rows]


# --- complexes -------------------------------------------------------------

class ProjComplex:
    """Bounded complex of projectives with explicit finite support."""

    def __init__(self, algebra: Algebra, terms: dict, diffs: Optional[dict] = None):
        self.algebra = algebra
        self.terms = {int(i): tuple(v) for i, v in sorted(terms.items()) if len(v)}
        diffs = diffs or {}
        self.diffs = {}
        for i, verts in self.terms.items():
            nxt = self.terms.get(i + 1)
            if nxt is None:
                continue
            d = diffs.get(i)
            if d is None:
                d = mat_zero(len(nxt), len(verts))
            if len(d) != len(nxt) or any(len(row) != len(verts) for row in d):
                raise ComplexError(f"differential in degree {i} has the wrong shape")
            self.diffs[i] = d

    def __repr__(self):
        body = ", ".join(f"{i}: {self.term_str(i)}" for i in self.terms)
        return f"ProjComplex({{{body}}})"

    def term_str(self, i: int) -> str:
        return "+".join(f"P{self.algebra.vertices[v]}" for v in self.terms.get(i, ()))

    @property
    def degrees(self) -> list[int]:
        return list(self.terms)

    def support(self) -> Optional[tuple[int, int]]:
        if not self.terms:
            return None
        return min(self.terms), max(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def term(self, i: int) -> tuple:
        return self.terms.get(i, ())

    def diff(self, i: int) -> Mat:
        d = self.diffs.get(i)
        if d is not None:
            return d
        return mat_zero(len(self.term(i + 1)), len(self.term(i)))

    @property
    def size(self) -> int:
        return sum(len(v) for v in self.terms.values())

    def signature(self) -> tuple:
        """Degreewise vertex multisets."""
        return tuple((i, tuple(sorted(v))) for i, v in self.terms.items())

    def k0_class(self) -> tuple:
        n = self.algebra.n_vertices
        out = [0] * n
        for i, verts in self.terms.items():
            for v in verts:
                out[v] += -1 if i % 2 else 1
        return tuple(out)

    def same_shape(self, other: "ProjComplex") -> bool:
        return self.terms == other.terms


def stalk(alg: Algebra, vertices: Optional[Iterable[int]] = None, degree: int = 0) -> ProjComplex:
    verts = tuple(range(alg.n_vertices)) if vertices is None else tuple(vertices)
    return ProjComplex(alg, {degree: verts})


def zero_complex(alg: Algebra) -> ProjComplex:
    return ProjComplex(alg, {})


@dataclass
class ValidationReport:
    minimal: bool
    nonminimal_at: Optional[tuple[int, int, int]] = None


def validate(c: ProjComplex) -> ValidationReport:
    """Check block membership and d∘d = 0; report minimality."""
    alg = c.algebra
    for i, d in c.diffs.items():
        src, tgt = c.terms[i], c.terms[i + 1]
        for r, row in enumerate(d):
            for s, x in enumerate(row):
                for b in x:
                    if alg.block_of[b] != (tgt[r], src[s]):
                        raise ComplexError(f"degree {i}, entry ({r},{s}) leaves block "
                                           f"e{alg.vertices[tgt[r]]}Ae{alg.vertices[src[s]]}")
    for i in c.diffs:
        if i + 1 in c.diffs:
            sq = mat_mul(alg, c.diffs[i + 1], c.diffs[i])
            for r, row in enumerate(sq):
                for s, x in enumerate(row):
                    if x:
                        raise ComplexError(f"d∘d nonzero: degree {i}, entry ({r},{s}) = "
                                           f"{alg.element_str(x)}")
    loc = nonminimal_entry(c)
    return ValidationReport(loc is None, loc)


def nonminimal_entry(c: ProjComplex) -> Optional[tuple[int, int, int]]:
    """First (degree, row, col) whose entry is invertible modulo the radical."""
    alg = c.algebra
    for i, d in c.diffs.items():
        src, tgt = c.terms[i], c.terms[i + 1]
        for s, v in enumerate(src):
            for r, w in enumerate(tgt):
                if v == w and alg.top_coeff(d[r][s], v):
                    return i, r, s
    return None


def is_minimal(c: ProjComplex) -> bool:
    return nonminimal_entry(c) is None


def shift(c: ProjComplex, n: int) -> ProjComplex:
    """``c[n]``: degree i holds degree i+n of c, differentials times (-1)^n."""
    alg = c.algebra
    sign = alg.field(-1) if n % 2 else None
    terms = {i - n: v for i, v in c.terms.items()}
    diffs = {}
    for i, d in c.diffs.items():
        diffs[i - n] = mat_scale(alg, d, sign) if sign is not None else mat_copy(d)
    return ProjComplex(alg, terms, diffs)


def direct_sum(*cs: ProjComplex) -> ProjComplex:
    if not cs:
        raise ComplexError("empty direct sum")
    alg = cs[0].algebra
    for c in cs[1:]:
        if c.algebra != alg:
            raise ComplexError("complexes over different algebras")
    degs = sorted(set().union(*(c.terms for c in cs)))
    terms = {i: sum((c.term(i) for c in cs), ()) for i in degs}
    diffs = {}
    for i in degs:
        if i + 1 in terms:
            diffs[i] = block_diag([(c.diff(i), len(c.term(i + 1)), len(c.term(i))) for c in cs])
    return ProjComplex(alg, terms, diffs)


def summand_offsets(cs: list[ProjComplex], degree: int) -> list[int]:
    out, k = [], 0
    for c in cs:
        out.append(k)
        k += len(c.term(degree))
    return out


# --- chain maps ------------------------------------------------------------

class ChainMap:
    """Degree-0 chain map; ``comps[i]`` maps source term i to target term i."""

    def __init__(self, source: ProjComplex, target: ProjComplex, comps: Optional[dict] = None):
        self.source = source
        self.target = target
        comps = comps or {}
        self.comps = {}
        for i in sorted(set(source.terms) & set(target.terms)):
            m = comps.get(i)
            if m is None:
                m = mat_zero(len(target.term(i)), len(source.term(i)))
            self.comps[i] = m

    def comp(self, i: int) -> Mat:
        m = self.comps.get(i)
        if m is not None:
            return m
        return mat_zero(len(self.target.term(i)), len(self.source.term(i)))

    def is_chain_map(self) -> bool:
        alg = self.source.algebra
        degs = set(self.source.terms) | set(self.target.terms)
        for i in degs:
            ncols = len(self.source.term(i))
            lhs = mat_mul(alg, self.comp(i + 1), self.source.diff(i),
                          inner=len(self.source.term(i + 1)), cols=ncols)
            rhs = mat_mul(alg, self.target.diff(i), self.comp(i),
                          inner=len(self.target.term(i)), cols=ncols)
            if not _mat_equal(lhs, rhs):
                return False
        return True

    def compose(self, before: "ChainMap") -> "ChainMap":
        """``self ∘ before``."""
        alg = self.source.algebra
        comps = {}
        for i in set(before.source.terms) & set(self.target.terms):
            comps[i] = mat_mul(alg, self.comp(i), before.comp(i), inner=len(self.source.term(i)),
                               cols=len(before.source.term(i)))
        return ChainMap(before.source, self.target, comps)

    def __add__(self, other: "ChainMap") -> "ChainMap":
        alg = self.source.algebra
        return ChainMap(self.source, self.target,
                        {i: mat_add(alg, self.comp(i), other.comp(i)) for i in self.comps})

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        alg = self.source.algebra
        return ChainMap(self.source, self.target,
                        {i: mat_sub(alg, self.comp(i), other.comp(i)) for i in self.comps})

    def scaled(self, c) -> "ChainMap":
        alg = self.source.algebra
        return ChainMap(self.source, self.target, {i: mat_scale(alg, m, c) for i, m in self.comps.items()})

    def is_zero(self) -> bool:
        return all(mat_is_zero(m) for m in self.comps.values())


def _mat_equal(a: Mat, b: Mat) -> bool:
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def identity_map(c: ProjComplex) -> ChainMap:
    return ChainMap(c, c, {i: mat_identity(c.algebra, v) for i, v in c.terms.items()})


def zero_map(source: ProjComplex, target: ProjComplex) -> ChainMap:
    return ChainMap(source, target)


def cone(f: ChainMap, check: bool = True) -> ProjComplex:
    """``cone(f)^i = L^{i+1} ⊕ M^i`` with differential ``[[-d_L, 0], [f, d_M]]``."""
    if check and not f.is_chain_map():
        raise ComplexError("cone of a map that is not a chain map")
    L, M = f.source, f.target
    alg = L.algebra
    minus = alg.field(-1)
    degs = sorted(set(i - 1 for i in L.terms) | set(M.terms))
    terms = {i: L.term(i + 1) + M.term(i) for i in degs}
    diffs = {}
    for i in degs:
        if i + 1 not in terms:
            continue
        a, b = len(L.term(i + 1)), len(M.term(i))
        a2, b2 = len(L.term(i + 2)), len(M.term(i + 1))
        d = mat_zero(a2 + b2, a + b)
        dl = L.diff(i + 1)
        for r in range(a2):
            for s in range(a):
                d[r][s] = alg.scale(dl[r][s], minus)
        fm = f.comp(i + 1)
        for r in range(b2):
            for s in range(a):
                d[a2 + r][s] = dict(fm[r][s])
        dm = M.diff(i)
        for r in range(b2):
            for s in range(b):
                d[a2 + r][a + s] = dict(dm[r][s])
        diffs[i] = d
    out = ProjComplex(alg, terms, diffs)
    if check:
        validate(out)
    return out


# --- minimization ------------------------------------------------------------

@dataclass
class MinimalModel:
    complex: ProjComplex
    to_min: Optional[ChainMap]  # original -> minimal
    from_min: Optional[ChainMap]  # minimal -> original


def _eliminate(c: ProjComplex, i: int, r: int, s: int):
    """One Gaussian elimination at the invertible entry d^i[r][s].

    Returns the smaller complex and the maps F (c -> small), G (small -> c)
    as degreewise matrices on the degrees i, i+1 (identity elsewhere).
    """
    alg = c.algebra
    d = c.diffs[i]
    src, tgt = c.terms[i], c.terms[i + 1]
    v = src[s]
    phi_inv = alg.inverse_local(d[r][s], v)
    keep_s = [k for k in range(len(src)) if k != s]
    keep_r = [k for k in range(len(tgt)) if k != r]
    terms = dict(c.terms)
    terms[i] = tuple(src[k] for k in keep_s)
    terms[i + 1] = tuple(tgt[k] for k in keep_r)
    # gamma: column s without row r; delta: row r without column s
    gamma_phi = [alg.mul(d[k][s], phi_inv) for k in keep_r]
    phi_delta = [alg.mul(phi_inv, d[r][k]) for k in keep_s]
    new_d = mat_zero(len(keep_r), len(keep_s))
    for a, kr in enumerate(keep_r):
        for b, ks in enumerate(keep_s):
            new_d[a][b] = alg.sub(d[kr][ks], alg.mul(d[kr][s], phi_delta[b]))
    diffs = dict(c.diffs)
    diffs[i] = new_d
    if i - 1 in diffs:
        diffs[i - 1] = [diffs[i - 1][k] for k in keep_s]
    if i + 1 in diffs:
        diffs[i + 1] = [[row[k] for k in keep_r] for row in diffs[i + 1]]
    small = ProjComplex(alg, terms, diffs)
    F = {}
    F[i] = [[alg.e(src[ks]) if k == ks else {} for k in range(len(src))] for ks in keep_s]
    Fi1 = []
    for a, kr in enumerate(keep_r):
        row = []
        for k in range(len(tgt)):
            if k == r:
                row.append(alg.neg(gamma_phi[a]))
            elif k == kr:
                row.append(alg.e(tgt[kr]))
            else:
                row.append({})
        Fi1.append(row)
    F[i + 1] = Fi1
    G = {}
    Gi = []
    for k in range(len(src)):
        if k == s:
            Gi.append([alg.neg(x) for x in phi_delta])
        else:
            Gi.append([alg.e(src[k]) if k == ks else {} for ks in keep_s])
    G[i] = Gi
    G[i + 1] = [[alg.e(tgt[k]) if k == kr else {} for kr in keep_r] for k in range(len(tgt))]
    return small, F, G


def minimize(c: ProjComplex, track: bool = True) -> MinimalModel:
    """Gaussian-eliminate every entry invertible modulo the radical.

    The result is minimal and homotopy equivalent to ``c``; with ``track``
    the two chain maps realising the equivalence are returned as well.
    """
    cur = c
    to_min = identity_map(c) if track else None
    from_min = identity_map(c) if track else None
    while True:
        loc = nonminimal_entry(cur)
        if loc is None:
            break
        i, r, s = loc
        small, F, G = _eliminate(cur, i, r, s)
        if track:
            Fmap = ChainMap(cur, small, {k: (F[k] if k in F else mat_identity(cur.algebra, cur.term(k)))
                                         for k in small.terms})
            Gmap = ChainMap(small, cur, {k: (G[k] if k in G else mat_identity(cur.algebra, small.term(k)))
                                         for k in small.terms})
            to_min = Fmap.compose(to_min)
            from_min = from_min.compose(Gmap)
        cur = small
    return MinimalModel(cur, to_min, from_min)


def minimal(c: ProjComplex) -> ProjComplex:
    return c if is_minimal(c) else minimize(c, track=False).complex


def permute(c: ProjComplex, perms: dict) -> tuple[ProjComplex, ChainMap]:
    """Reorder summands: ``perms[i][k]`` is the old index placed at new position k."""
    alg = c.algebra
    terms = {i: tuple(v[k] for k in perms.get(i, range(len(v)))) for i, v in c.terms.items()}
    diffs = {}
    for i, d in c.diffs.items():
        pr = perms.get(i + 1, range(len(c.terms[i + 1])))
        ps = perms.get(i, range(len(c.terms[i])))
        diffs[i] = [[dict(d[a][b]) for b in ps] for a in pr]
    new = ProjComplex(alg, terms, diffs)
    comps = {}
    for i, v in c.terms.items():
        p = list(perms.get(i, range(len(v))))
        m = mat_zero(len(v), len(v))
        for k, old in enumerate(p):
            m[k][old] = alg.e(v[old])
        comps[i] = m
    return new, ChainMap(c, new, comps)


def vertex_multiset(c: ProjComplex) -> Counter:
    return Counter((i, v) for i, verts in c.terms.items() for v in verts)
