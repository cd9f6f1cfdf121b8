"""Slow brute-force oracles used to cross-check the main algorithms.

Nothing here calls the Hom-complex, echelon, minimization or decomposition
code.  Scalars are ``fractions.Fraction`` (or ints mod p) and all linear
algebra is a plain dense Gaussian elimination written out below.  Module
maps are realised as k-matrices on the underlying vector spaces of free
modules, so the only shared input is the algebra's multiplication table.
"""

from __future__ import annotations

import itertools
import logging
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .algebra import Algebra, AlgebraPresentation

MAX_ORACLE_DIM = 12

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class OracleResult:
    name: str
    value: int
    method: str
    witnesses: tuple = ()


class _Scalars:
    def __init__(self, p: int):
        self.p = p

    def conv(self, x):
        if self.p:
            if isinstance(x, Fraction) or hasattr(x, "denominator"):
                num, den = int(x.numerator), int(x.denominator)
                return num * pow(den, self.p - 2, self.p) % self.p
            return int(x) % self.p
        return Fraction(int(x.numerator), int(x.denominator)) if hasattr(x, "denominator") \
            else Fraction(x)

    def norm(self, x):
        return x % self.p if self.p else x

    def inv(self, x):
        return pow(x, self.p - 2, self.p) if self.p else 1 / x


class _Reducer:
    """Incremental sparse row reduction; each row remembers how it was built.

    Rows are dicts ``{column: value}`` whose pivot is their least column and
    is normalised to 1, so eliminating a pivot only touches later columns.
    """

    def __init__(self, sc: _Scalars):
        self.sc = sc
        self.rows: dict = {}  # pivot -> (row, tag)

    def reduce(self, v: dict, tag: dict | None = None):
        sc = self.sc
        v = {k: x for k, x in v.items() if x}
        tag = dict(tag or {})
        while True:
            hits = [k for k in v if k in self.rows]
            if not hits:
                return v, tag
            k = min(hits)
            row, rtag = self.rows[k]
            f = v[k]
            for c, x in row.items():
                y = sc.norm(v.get(c, 0) - f * x)
                if y:
                    v[c] = y
                else:
                    v.pop(c, None)
            for c, x in rtag.items():
                y = sc.norm(tag.get(c, 0) - f * x)
                if y:
                    tag[c] = y
                else:
                    tag.pop(c, None)

    def add(self, v: dict, tag: dict | None = None):
        """Insert v; returns None if independent, else the dependency tag."""
        r, t = self.reduce(v, tag)
        if not r:
            return t
        k = min(r)
        inv = self.sc.inv(r[k])
        self.rows[k] = ({c: self.sc.norm(x * inv) for c, x in r.items()},
                        {c: self.sc.norm(x * inv) for c, x in t.items()})
        return None

    @property
    def rank(self) -> int:
        return len(self.rows)


def _rank(vectors, sc: _Scalars) -> int:
    red = _Reducer(sc)
    for v in vectors:
        red.add(v)
    return red.rank


def _kernel(columns, sc: _Scalars) -> list[dict]:
    """Basis of relations sum x_i columns[i] = 0."""
    red = _Reducer(sc)
    out = []
    for i, col in enumerate(columns):
        dep = red.add(col, {i: 1})
        if dep is not None:
            out.append(dep)
    return out


# --- path counting -----------------------------------------------------------

def oracle_path_count(pres: AlgebraPresentation) -> OracleResult:
    """dim kQ / (<relations> + paths of length >= N), by enumerating all paths."""
    q = pres.quiver
    sc = _Scalars(pres.field.p)
    N = pres.nilpotency_bound
    arrows = {name: (s, t) for name, s, t in q.arrows}
    # a path is (tuple of arrow names in written order, source vertex)
    paths = [((), v) for v in q.vertices]
    layer = list(paths)
    for _ in range(N - 1):
        nxt = []
        for word, src in layer:
            tgt = arrows[word[0]][1] if word else src
            for name, (s, t) in arrows.items():
                if s == tgt:
                    nxt.append(((name,) + word, src))
        paths.extend(nxt)
        layer = nxt
    index = {p: i for i, p in enumerate(paths)}

    def ends(word, src):
        return src, (arrows[word[0]][1] if word else src)

    rows = []
    for rel in pres.relations:
        terms = []
        for term in rel.terms:
            word = tuple(term.path)
            if term.tpow:
                raise ValueError("path-count oracle takes relations without t")
            src = arrows[word[-1]][0] if word else term.vertex
            terms.append((sc.conv(Fraction(str(term.coeff))), word, src))
        rs, rt = ends(terms[0][1], terms[0][2])
        for uw, us in paths:  # left factor, must start at rt
            if us != rt:
                continue
            for ww, ws in paths:  # right factor, must end at rs
                if ends(ww, ws)[1] != rs:
                    continue
                row: dict = {}
                for c, word, _ in terms:
                    full = uw + word + ww
                    if len(full) < N:
                        k = index[(full, ws)]
                        row[k] = sc.norm(row.get(k, 0) + c)
                rows.append(row)
    r = _rank(rows, sc)
    return OracleResult("path-count", len(paths) - r, f"{len(paths)} paths, relation rank {r}")


# --- Hom in the homotopy category via k-matrices --------------------------------

class _Underlying:
    """k-bases of free modules and k-matrices of module maps between them."""

    def __init__(self, alg: Algebra):
        self.alg = alg
        self.sc = _Scalars(alg.field.p)
        self.rows_of = {v: [b for b in range(alg.dim) if alg.block_of[b][0] == v]
                        for v in range(alg.n_vertices)}
        self.table = [[{k: self.sc.conv(c) for k, c in alg.mult[a][b]} for b in range(alg.dim)]
                      for a in range(alg.dim)]

    def basis(self, verts) -> list[tuple[int, int]]:
        return [(k, b) for k, v in enumerate(verts) for b in self.rows_of[v]]

    def left_mult(self, x: dict, src_v: int, tgt_v: int) -> list[list]:
        """k-matrix of e_{src}A -> e_{tgt}A, y -> x y."""
        rows, cols = self.rows_of[tgt_v], self.rows_of[src_v]
        pos = {b: i for i, b in enumerate(rows)}
        out = [[0] * len(cols) for _ in rows]
        for j, b in enumerate(cols):
            for a, c in x.items():
                for k, v in self.table[a][b].items():
                    out[pos[k]][j] = self.sc.norm(out[pos[k]][j] + self.sc.conv(c) * v)
        return out

    def matrix(self, m, src, tgt) -> list[list]:
        """k-matrix of the module map with algebra-matrix m (rows = target summands)."""
        B_src, B_tgt = self.basis(src), self.basis(tgt)
        out = [[0] * len(B_src) for _ in B_tgt]
        ro, co = self._offsets(tgt), self._offsets(src)
        for r in range(len(tgt)):
            for s in range(len(src)):
                if m and m[r][s]:
                    blk = self.left_mult(m[r][s], src[s], tgt[r])
                    for i, row in enumerate(blk):
                        for j, x in enumerate(row):
                            if x:
                                out[ro[r] + i][co[s] + j] = x
        return out

    def unit_matrix(self, b: int, r: int, s: int, src, tgt) -> list[list]:
        m = [[{} for _ in src] for _ in tgt]
        m[r][s] = {b: 1}
        return self.matrix(m, src, tgt)

    def _offsets(self, verts) -> list[int]:
        out, k = [], 0
        for v in verts:
            out.append(k)
            k += len(self.rows_of[v])
        return out

    def hom_units(self, src, tgt) -> list[tuple]:
        """All (r, s, b) spanning module maps src -> tgt."""
        return [(r, s, b) for r, w in enumerate(tgt) for s, v in enumerate(src)
                for b in self.alg.block_basis[(w, v)]]


def _mm(a: list[list], b: list[list], sc: _Scalars) -> list[list]:
    m = len(b[0]) if b else 0
    if not a or not b:
        return [[0] * m for _ in a]
    sparse_b = [[(j, y) for j, y in enumerate(row) if y] for row in b]
    out = []
    for row in a:
        acc = [0] * m
        for x, bk in zip(row, sparse_b):
            if x:
                for j, y in bk:
                    acc[j] += x * y
        out.append([sc.norm(v) for v in acc] if sc.p else acc)
    return out


def _flat(blocks: list[list[list]]) -> dict:
    """Concatenate k-matrices into one sparse vector."""
    out, pos = {}, 0
    for m in blocks:
        for row in m:
            for x in row:
                if x:
                    out[pos] = x
                pos += 1
    return out


def _zero(rows: int, cols: int) -> list[list]:
    return [[0] * cols for _ in range(rows)]


class _GradedMaps:
    """Degreewise k-matrices for maps ``l -> m[shift]`` and their differentials."""

    def __init__(self, U: _Underlying, l, m, shift: int):
        self.U, self.l, self.m, self.shift = U, l, m, shift
        sc = U.sc
        sign = -1 if shift % 2 else 1
        span = sorted(set(l.terms) | {j - shift for j in m.terms})
        self.degs = list(range(span[0] - 1, span[-1] + 2)) if span else []
        self.size_l = {j: len(U.basis(self.lt(j))) for j in self.degs}
        self.size_m = {j: len(U.basis(self.mt(j))) for j in self.degs}
        self.dl = {j: U.matrix(l.diffs.get(j), self.lt(j), self.lt(j + 1)) for j in self.degs}
        self.dm = {}
        for j in self.degs:
            mat = U.matrix(m.diffs.get(j + shift), self.mt(j), self.mt(j + 1))
            self.dm[j] = [[sc.norm(sign * x) for x in row] for row in mat]

    def lt(self, j):
        return self.l.terms.get(j, ())

    def mt(self, j):
        return self.m.terms.get(j + self.shift, ())

    def units(self, offset: int = 0):
        """(degree, unit, k-matrix) spanning maps l^j -> m[shift]^{j+offset}."""
        U = self.U
        for j in self.degs:
            src, tgt = self.lt(j), self.mt(j + offset)
            for (r, s, b) in U.hom_units(src, tgt):
                yield j, (r, s, b), U.unit_matrix(b, r, s, src, tgt)

    def boundary_of_map(self, j: int, f) -> dict:
        """Flattened (f d_l - d_m f) for f concentrated in degree j."""
        sc = self.U.sc
        blocks = []
        for k in self.degs:
            rows = self.size_m.get(k + 1, 0)
            if k == j - 1:
                blocks.append(_mm(f, self.dl[k], sc))
            elif k == j and rows:
                blocks.append([[sc.norm(-x) for x in row] for row in _mm(self.dm[k], f, sc)])
            else:
                blocks.append(_zero(rows, self.size_l[k]))
        return _flat(blocks)

    def homotopy_image(self, j: int, h) -> dict:
        """Flattened (h d_l + d_m h) for h: l^j -> m[shift]^{j-1}."""
        sc = self.U.sc
        blocks = []
        for k in self.degs:
            if k == j - 1:
                blocks.append(_mm(h, self.dl[k], sc))
            elif k == j and k - 1 in self.dm:
                blocks.append(_mm(self.dm[k - 1], h, sc))
            else:
                blocks.append(_zero(self.size_m[k], self.size_l[k]))
        return _flat(blocks)

    def as_vector(self, per_degree: dict) -> dict:
        return _flat([per_degree.get(k) or _zero(self.size_m[k], self.size_l[k])
                      for k in self.degs])


def oracle_hom_dim(l, m, i: int) -> OracleResult:
    """dim Hom_K(l, m[i]) = dim(chain maps l -> m[i]) - dim(null-homotopic ones)."""
    if l.algebra != m.algebra:
        raise ValueError("complexes over different algebras")
    G = _GradedMaps(_Underlying(l.algebra), l, m, i)
    sc = G.U.sc
    conds = [G.boundary_of_map(j, f) for j, _, f in G.units(0)]
    z_dim = len(conds) - _rank(conds, sc)
    b_dim = _rank((G.homotopy_image(j, h) for j, _, h in G.units(-1)), sc)
    return OracleResult("hom-dim", z_dim - b_dim, f"cycles {z_dim}, boundaries {b_dim}")


# --- two-term silting count ---------------------------------------------------------

def _end_semisimple_profile(c, U: _Underlying):
    """(dim E, dim E/rad E, E/rad E commutative) for E = End_K(c), all by k-matrices."""
    sc = U.sc
    G = _GradedMaps(U, c, c, 0)
    units = list(G.units(0))
    kernel = _kernel([G.boundary_of_map(j, f) for j, _, f in units], sc)

    def combine(coeffs: dict) -> dict:
        out = {j: _zero(G.size_m[j], G.size_l[j]) for j in G.degs}
        for idx, x in coeffs.items():
            j, _, m = units[idx]
            o = out[j]
            for r, row in enumerate(m):
                for s, y in enumerate(row):
                    if y:
                        o[r][s] = sc.norm(o[r][s] + x * y)
        return out

    red = _Reducer(sc)
    for j, _, h in G.units(-1):
        red.add(G.homotopy_image(j, h))
    reps = []
    for v in kernel:
        z = combine(v)
        if red.add(G.as_vector(z), {len(reps): 1}) is None:
            reps.append(z)
    dim_e = len(reps)
    if dim_e == 0:
        return 0, 0, True

    def coords(per_degree) -> list:
        res, tag = red.reduce(G.as_vector(per_degree))
        if res:
            raise ArithmeticError("product is not a cocycle class")
        return [sc.norm(-tag.get(a, 0)) for a in range(dim_e)]

    struct = [[coords({j: _mm(reps[a][j], reps[b][j], sc) for j in G.degs})
               for b in range(dim_e)] for a in range(dim_e)]

    basis_trace = [sum(struct[k][d][d] for d in range(dim_e)) for k in range(dim_e)]

    def trace_left(x: list):
        return sc.norm(sum(xk * tk for xk, tk in zip(x, basis_trace)))

    gram = [{b: trace_left(struct[a][b]) for b in range(dim_e)} for a in range(dim_e)]
    rad = _kernel(gram, sc)
    ss = dim_e - len(rad)
    rad_red = _Reducer(sc)
    for v in rad:
        rad_red.add(v)
    commutative = True
    for a in range(dim_e):
        for b in range(a + 1, dim_e):
            comm = {k: sc.norm(x - y) for k, (x, y) in
                    enumerate(zip(struct[a][b], struct[b][a])) if x != y}
            if comm and rad_red.reduce(comm)[0]:
                commutative = False
    return dim_e, ss, commutative


def _generic_two_term(alg: Algebra, g: tuple, rng: random.Random):
    from .complexes import ProjComplex
    p0 = tuple(v for v, x in enumerate(g) for _ in range(max(x, 0)))
    p1 = tuple(v for v, x in enumerate(g) for _ in range(max(-x, 0)))
    d = []
    for w in p0:
        row = []
        for v in p1:
            el = {}
            for b in alg.block_basis[(w, v)]:
                c = rng.randint(-9, 9)
                if c:
                    el[b] = alg.field(c)
            row.append(el)
        d.append(row)
    terms = {}
    if p1:
        terms[-1] = p1
    if p0:
        terms[0] = p0
    return ProjComplex(alg, terms, {-1: d} if p0 and p1 else {})


def cartan_bound(alg: Algebra) -> Optional[int]:
    """n times the largest |entry| of the inverse Cartan matrix, rounded up.

    None when the Cartan matrix is singular (no a priori bound exists then).
    """
    n = alg.n_vertices
    cart = [[Fraction(len(alg.block_basis[(i, j)])) for j in range(n)] for i in range(n)]
    aug = [row + [Fraction(int(i == k)) for k in range(n)] for i, row in enumerate(cart)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    biggest = max(abs(x) for row in aug for x in row[n:])
    return n * max(1, math.ceil(biggest))


def oracle_two_term_silting_count(alg: Algebra, bound: Optional[int] = None, seed: int = 0,
                                  attempts: int = 2,
                                  max_dim: int = MAX_ORACLE_DIM) -> OracleResult:
    """Count two-term silting complexes with g-vector in ``[-bound, bound]^n``.

    A two-term presilting complex is determined by its g-vector and is the
    generic complex with those terms, so the search runs over g-vectors,
    forms a random (generic) differential and keeps g when the complex is
    rigid and has exactly n pairwise non-isomorphic indecomposable summands
    with residue field k, i.e. End/rad End is commutative of dimension n.
    """
    if alg.dim > max_dim:
        raise ValueError(f"oracle refuses algebras of dimension > {max_dim}")
    if bound is None:
        bound = cartan_bound(alg)
        if bound is None:
            raise ValueError("singular Cartan matrix: pass an explicit multiplicity bound")
    log.info("two-term oracle: multiplicity bound %d", bound)
    n = alg.n_vertices
    U = _Underlying(alg)
    rng = random.Random(seed)
    found = []
    for g in itertools.product(range(-bound, bound + 1), repeat=n):
        if not any(g):
            continue
        for _ in range(attempts):
            c = _generic_two_term(alg, g, rng)
            if oracle_hom_dim(c, c, 1).value != 0:
                continue
            _, ss, commutative = _end_semisimple_profile(c, U)
            if ss == n and commutative:
                found.append(g)
            break
    return OracleResult("two-term-silting", len(found),
                        f"g-vectors in [-{bound}, {bound}]^{n}, generic rigid with {n} summands",
                        tuple(found))
