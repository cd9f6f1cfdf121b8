"""Hom-complexes between complexes of projectives and what they compute.

For complexes L, M the space ``K^p = ⊕_j Hom(L^j, M^{j+p})`` has a basis
indexed by ``(j, r, s, b)``: source degree j, target summand r of M^{j+p},
source summand s of L^j and a basis element b of the block
``e_{M[r]} A e_{L[s]}``.  The differential is

    D(φ)^j = φ^{j+1} d_L^j - (-1)^p d_M^{j+p} φ^j

so that degree-0 cocycles are chain maps and ``H^p(K) = Hom_K(L, M[p])``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional

from .algebra import Algebra
from .complexes import ChainMap, ComplexError, ProjComplex, mat_zero, minimal
from .linalg import Coordinates, Echelon, Field, extend_basis, kernel_sparse, rank_sparse


class HomComplex:
    def __init__(self, L: ProjComplex, M: ProjComplex):
        if L.algebra != M.algebra:
            raise ComplexError("complexes over different algebras")
        self.L, self.M = L, M
        self.algebra = alg = L.algebra
        self.field: Field = alg.field
        sl, sm = L.support(), M.support()
        if sl is None or sm is None:
            self.lo, self.hi = 0, -1
        else:
            self.lo, self.hi = sm[0] - sl[1], sm[1] - sl[0]
        self._index: dict[int, dict] = {}
        self._basis: dict[int, list] = {}
        self._diff: dict[int, list] = {}

    @property
    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def _layout(self, p: int):
        if p in self._basis:
            return self._basis[p], self._index[p]
        alg = self.algebra
        basis, index = [], {}
        if self.lo <= p <= self.hi:
            for j, src in self.L.terms.items():
                tgt = self.M.term(j + p)
                for r, w in enumerate(tgt):
                    for s, v in enumerate(src):
                        blk = alg.block_basis[(w, v)]
                        index[(j, r, s)] = len(basis)
                        basis.extend((j, r, s, b) for b in blk)
        self._basis[p], self._index[p] = basis, index
        return basis, index

    def dim(self, p: int) -> int:
        return len(self._layout(p)[0])

    def basis(self, p: int) -> list:
        return self._layout(p)[0]

    def vector(self, p: int, comps: dict) -> dict:
        """Sparse K^p coordinates of the map family ``{j: matrix}``."""
        alg = self.algebra
        _, index = self._layout(p)
        out = {}
        for j, m in comps.items():
            for r, row in enumerate(m):
                for s, x in enumerate(row):
                    if not x:
                        continue
                    off = index.get((j, r, s))
                    if off is None:
                        raise ComplexError("map component outside the Hom-complex")
                    for b, c in x.items():
                        out[off + alg.pos_in_block[b]] = c
        return out

    def maps(self, p: int, vec: dict) -> dict:
        """Inverse of :meth:`vector`: map family ``{j: matrix}``."""
        basis, _ = self._layout(p)
        out = {}
        for j, src in self.L.terms.items():
            tgt = self.M.term(j + p)
            if tgt:
                out[j] = mat_zero(len(tgt), len(src))
        for k, c in vec.items():
            j, r, s, b = basis[k]
            out[j][r][s][b] = c
        return out

    def chain_map(self, vec: dict) -> ChainMap:
        return ChainMap(self.L, self.M, self.maps(0, vec))

    def differential(self, p: int) -> list[dict]:
        """Columns of ``D^p: K^p -> K^{p+1}`` as sparse vectors."""
        if p in self._diff:
            return self._diff[p]
        alg = self.algebra
        fld = self.field
        basis, _ = self._layout(p)
        _, index1 = self._layout(p + 1)
        sign = fld.one if p % 2 else fld.neg(fld.one)  # -(-1)^p
        L, M = self.L, self.M
        pos = alg.pos_in_block
        mult = alg.mult
        fp = fld.p
        cols = []
        for (j, r, s, b) in basis:
            col: dict = {}
            # φ^{j+1} d_L^j contributes to source degree j-1
            if j - 1 in L.diffs:
                dl = L.diffs[j - 1]
                for s2 in range(len(L.terms[j - 1])):
                    y = dl[s][s2]
                    if not y:
                        continue
                    off = index1[(j - 1, r, s2)]
                    row = mult[b]
                    for g, cg in y.items():
                        for k, ck in row[g]:
                            key = off + pos[k]
                            col[key] = col.get(key, 0) + cg * ck
            # -(-1)^p d_M^{j+p} φ^j contributes to source degree j
            if j + p in M.diffs:
                dm = M.diffs[j + p]
                for r2 in range(len(M.terms[j + p + 1])):
                    y = dm[r2][r]
                    if not y:
                        continue
                    off = index1[(j, r2, s)]
                    for g, cg in y.items():
                        for k, ck in mult[g][b]:
                            key = off + pos[k]
                            col[key] = col.get(key, 0) + sign * cg * ck
            if fp:
                col = {k: v % fp for k, v in col.items() if v % fp}
            else:
                col = {k: v for k, v in col.items() if v}
            cols.append(col)
        self._diff[p] = cols
        return cols

    def apply(self, p: int, vec: dict) -> dict:
        cols = self.differential(p)
        out: dict = {}
        fp = self.field.p
        for k, c in vec.items():
            for key, v in cols[k].items():
                out[key] = out.get(key, 0) + c * v
        if fp:
            return {k: v % fp for k, v in out.items() if v % fp}
        return {k: v for k, v in out.items() if v}

    def rank(self, p: int) -> int:
        if self.dim(p) == 0 or self.dim(p + 1) == 0:
            return 0
        return self._ranks.setdefault(p, rank_sparse(self.differential(p), self.field))

    @cached_property
    def _ranks(self) -> dict:
        return {}

    def cohomology_dim(self, p: int) -> int:
        return self.dim(p) - self.rank(p) - self.rank(p - 1)

    def cocycles(self, p: int) -> list[dict]:
        if self.dim(p + 1) == 0:
            return [{k: self.field.one} for k in range(self.dim(p))]
        return kernel_sparse(self.differential(p), self.field)

    def coboundaries(self, p: int) -> list[dict]:
        """A basis of ``im D^{p-1}``."""
        if self.dim(p - 1) == 0:
            return []
        cols = self.differential(p - 1)
        ech = Echelon(self.field)
        return [c for c in cols if ech.add(c) is None]

    def cohomology_basis(self, p: int) -> tuple[list[dict], list[dict]]:
        """(representative cocycles of a basis of H^p, basis of coboundaries)."""
        Z = self.cocycles(p)
        B = self.coboundaries(p)
        picks = extend_basis(B, Z, self.field)
        return [Z[i] for i in picks], B

    def is_coboundary(self, p: int, vec: dict) -> bool:
        if not vec:
            return True
        ech = Echelon(self.field)
        for c in self.coboundaries(p):
            ech.add(c)
        return ech.contains(vec)

    def solve_homotopy(self, p: int, vec: dict) -> Optional[dict]:
        """Some h in K^{p-1} with D(h) = vec, or None."""
        if not vec:
            return {}
        if self.dim(p - 1) == 0:
            return None
        ech = Echelon(self.field, track=True)
        for c in self.differential(p - 1):
            ech.add(c)
        return ech.express(vec)

    def t_action(self, p: int, power: int = 1) -> list[dict]:
        """Columns of post-composition with t^power on K^p."""
        alg = self.algebra
        tp = alg.t_power(power)
        basis, index = self._layout(p)
        cols = []
        for (j, r, s, b) in basis:
            y = alg.mul(tp, {b: self.field.one})
            off = index[(j, r, s)]
            cols.append({off + alg.pos_in_block[k]: c for k, c in y.items()})
        return cols

    def t_action_right(self, p: int, power: int = 1) -> list[dict]:
        alg = self.algebra
        tp = alg.t_power(power)
        basis, index = self._layout(p)
        cols = []
        for (j, r, s, b) in basis:
            y = alg.mul({b: self.field.one}, tp)
            off = index[(j, r, s)]
            cols.append({off + alg.pos_in_block[k]: c for k, c in y.items()})
        return cols


def hom_complex(l: ProjComplex, m: ProjComplex) -> HomComplex:
    return HomComplex(l, m)


def hom_dim(l: ProjComplex, m: ProjComplex, i: int) -> int:
    """``dim_k Hom_K(l, m[i])``."""
    return HomComplex(l, m).cohomology_dim(i)


def hom_table(l: ProjComplex, m: ProjComplex) -> dict[int, int]:
    K = HomComplex(l, m)
    return {p: K.cohomology_dim(p) for p in K.degrees}


RELATIONS = ("geq", "teq", "perp")


def relation(l: ProjComplex, m: ProjComplex, which: str, table: Optional[dict] = None) -> bool:
    """``geq``: Hom(l, m[i]) = 0 for i > 0; ``teq``: for i != 0; ``perp``: all i.

    The finite window is the support of the Hom-complex between minimal
    models, outside which every Hom vanishes.
    """
    if which not in RELATIONS:
        raise ValueError(f"unknown relation {which!r}; expected one of {RELATIONS}")
    if table is None:
        table = hom_table(minimal(l), minimal(m))
    if which == "geq":
        return all(d == 0 for i, d in table.items() if i > 0)
    if which == "teq":
        return all(d == 0 for i, d in table.items() if i != 0)
    return all(d == 0 for d in table.values())


# --- endomorphism algebras ----------------------------------------------------

class EndAlgebra:
    """``E = H^0(Hom(l, l))`` with composition product and t-action.

    ``reps`` are cocycle representatives of a basis of E;
    ``structure[a][b]`` is the coordinate dict of ``reps[a] ∘ reps[b]``.
    """

    def __init__(self, l: ProjComplex):
        self.complex = l
        self.K = K = HomComplex(l, l)
        self.algebra = l.algebra
        self.field = l.algebra.field
        reps, B = K.cohomology_basis(0)
        self.reps = reps
        self.coboundary_basis = B
        self.dim = len(reps)
        self._coords = Coordinates(B + reps, self.field)
        self._nb = len(B)
        self._rep_maps = [K.chain_map(z) for z in reps]
        self.structure = [[self.coords(self.compose_vectors(a, b)) for b in range(self.dim)]
                          for a in range(self.dim)]

    def coords(self, vec: dict) -> dict:
        """E-coordinates of a degree-0 cocycle."""
        c = self._coords.coords(vec)
        nb = self._nb
        return {k - nb: v for k, v in c.items() if k >= nb}

    def compose_vectors(self, a: int, b: int) -> dict:
        return self.K.vector(0, self._rep_maps[a].compose(self._rep_maps[b]).comps)

    def compose_maps(self, f: ChainMap, g: ChainMap) -> ChainMap:
        return f.compose(g)

    def element_map(self, x: dict) -> ChainMap:
        """Chain-level representative of the E-element with coordinates x."""
        vec: dict = {}
        fp = self.field.p
        for a, c in x.items():
            for k, v in self.reps[a].items():
                vec[k] = vec.get(k, 0) + c * v
        if fp:
            vec = {k: v % fp for k, v in vec.items() if v % fp}
        else:
            vec = {k: v for k, v in vec.items() if v}
        return self.K.chain_map(vec)

    def map_coords(self, f: ChainMap) -> dict:
        return self.coords(self.K.vector(0, f.comps))

    def mul(self, x: dict, y: dict) -> dict:
        out: dict = {}
        fp = self.field.p
        for a, ca in x.items():
            for b, cb in y.items():
                for k, v in self.structure[a][b].items():
                    out[k] = out.get(k, 0) + ca * cb * v
        if fp:
            return {k: v % fp for k, v in out.items() if v % fp}
        return {k: v for k, v in out.items() if v}

    @cached_property
    def unit(self) -> dict:
        from .complexes import identity_map
        return self.map_coords(identity_map(self.complex))

    def t_action(self, power: int = 1) -> list[dict]:
        """Columns of multiplication by t^power on E (post-composition)."""
        cols = []
        tcols = self.K.t_action(0, power)
        for z in self.reps:
            vec: dict = {}
            for k, c in z.items():
                for key, v in tcols[k].items():
                    vec[key] = vec.get(key, 0) + c * v
            fp = self.field.p
            if fp:
                vec = {k: v % fp for k, v in vec.items() if v % fp}
            else:
                vec = {k: v for k, v in vec.items() if v}
            cols.append(self.coords(vec))
        return cols

    def radical(self) -> list[dict]:
        """Basis of rad E via the trace form (char 0 or p > dim E)."""
        p = self.field.p
        if p and p <= self.dim:
            raise ValueError(f"trace-form radical needs characteristic 0 or p > {self.dim}")
        n = self.dim
        tau = []
        for c in range(n):
            tr = 0
            for d in range(n):
                tr += self.structure[c][d].get(d, 0)
            tau.append(tr % p if p else tr)
        cols = []
        for a in range(n):
            col = {}
            for b in range(n):
                val = sum(v * tau[k] for k, v in self.structure[a][b].items())
                if p:
                    val %= p
                if val:
                    col[b] = val
            cols.append(col)
        return kernel_sparse(cols, self.field)

    def semisimple_dim(self) -> int:
        return self.dim - len(self.radical())


def end_algebra(l: ProjComplex) -> EndAlgebra:
    return EndAlgebra(l)


# --- Tor over k[t]/(t^m) -----------------------------------------------------

def _mat_power_cols(cols: list[dict], n: int, power: int, field: Field) -> list[dict]:
    """Columns of ``T^power`` from the columns of T (an n x n matrix)."""
    cur = [{k: field.one} for k in range(n)]
    fp = field.p
    for _ in range(power):
        nxt = []
        for v in cur:
            out: dict = {}
            for k, c in v.items():
                for key, x in cols[k].items():
                    out[key] = out.get(key, 0) + c * x
            if fp:
                out = {k: x % fp for k, x in out.items() if x % fp}
            else:
                out = {k: x for k, x in out.items() if x}
            nxt.append(out)
        cur = nxt
    return cur


def tor_base(t_cols: list[dict], m: int, i: int, field: Field, j: int = 1) -> int:
    """``dim Tor_i^{k[t]/(t^m)}(N, k[t]/(t^j))`` for N given by its t-action.

    Uses the two-periodic resolution ``... -> R --t^{m-j}--> R --t^j--> R``.
    """
    n = len(t_cols)
    if not 1 <= j <= m:
        raise ValueError("second argument must be k[t]/(t^j) with 1 <= j <= m")
    tm = _mat_power_cols(t_cols, n, m, field)
    if any(tm):
        raise ValueError(f"t-action is not annihilated by t^{m}")
    if i < 0:
        return 0
    tj = _mat_power_cols(t_cols, n, j, field)
    tmj = _mat_power_cols(t_cols, n, m - j, field)
    rj, rmj = rank_sparse(tj, field), rank_sparse(tmj, field)
    if i == 0:
        return n - rj
    if i % 2:
        return (n - rj) - rmj  # ker t^j / im t^{m-j}
    return (n - rmj) - rj  # ker t^{m-j} / im t^j


def tor_profile(t_cols: list[dict], m: int, field: Field, upto: int = 6, j: int = 1) -> dict[int, int]:
    return {i: tor_base(t_cols, m, i, field, j) for i in range(upto + 1)}


def is_free_t_module(t_cols: list[dict], m: int, field: Field) -> bool:
    """All Jordan blocks of t have size m."""
    n = len(t_cols)
    if n % m:
        return False
    return rank_sparse(_mat_power_cols(t_cols, n, m - 1, field), field) == n // m
