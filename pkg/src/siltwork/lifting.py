"""Lifting complexes of projectives from ``Λ_n`` to ``Λ_{n+1}``.

One step: lift the differential entrywise along the basis section to get
δ, so that ``δ∘δ`` lies in ``t^n Λ_{n+1}``.  Dividing by ``t^n`` gives a
degree-2 cocycle ε of ``Hom(P̄, P̄)`` over ``Λ_1``.  When ``ε = s d̄ + d̄ s``
is solvable, ``δ - t^n s`` squares to zero (``t^{2n} = 0`` at level n+1);
otherwise ε represents a nonzero class in ``H^2`` and the step is obstructed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .algebra import Algebra
from .complexes import (Mat, ProjComplex, direct_sum, mat_mul, mat_zero, minimal, stalk, validate)
from .decomposition import iso_test
from .homspaces import HomComplex, is_free_t_module, tor_base
from .linalg import Coordinates, Echelon, extend_basis, rank_sparse
from .reduction import ReductionContext, reduction_context


class LiftingError(RuntimeError):
    pass


# --- conormal layers --------------------------------------------------------

@dataclass(frozen=True)
class ConormalData:
    level: int
    dim: int
    rank: int
    free: bool


def conormal_check(a: Algebra) -> list[ConormalData]:
    """Layers ``t^n A / t^{n+1} A`` for 0 <= n < m, each compared with ``Λ_1``."""
    if not a.t:
        return []
    m = a.t_nilpotency
    dims = [a.mult_rank(a.t_power(n)) for n in range(m + 1)]
    base = dims[0] - dims[1]
    out = []
    for n in range(m):
        d = dims[n] - dims[n + 1]
        out.append(ConormalData(n, d, d // base if base else 0, d == base))
    return out


# --- one step ----------------------------------------------------------------

@dataclass
class Obstruction:
    level: int
    epsilon: dict  # degree -> matrix over Λ_1, maps P̄^i -> P̄^{i+2}
    h2_dim: int
    base: ProjComplex  # P̄ over Λ_1

    def is_cocycle(self) -> bool:
        K = HomComplex(self.base, self.base)
        return not K.apply(2, K.vector(2, self.epsilon))

    def is_unsolvable(self) -> bool:
        K = HomComplex(self.base, self.base)
        return K.solve_homotopy(2, K.vector(2, self.epsilon)) is None


@dataclass
class LiftReport:
    outcome: str  # "lifted" or "obstructed"
    lifted: Optional[ProjComplex] = None
    obstruction: Optional[Obstruction] = None
    steps: list = field(default_factory=list)
    chain: list = field(default_factory=list)  # complexes at levels 1..reached

    @property
    def ok(self) -> bool:
        return self.outcome == "lifted"


class _TopLayer:
    """The injective bimodule map ``Λ_1 -> Λ_{n+1}``, ``x -> t^n sec(x)``."""

    def __init__(self, high: Algebra, n: int):
        self.high = high
        self.low1 = high.root.level_algebra(1)
        self.ctx1 = reduction_context(high, self.low1)
        tn = high.t_power(n)
        self.images = [high.mul(tn, self.ctx1.section[b]) for b in range(self.low1.dim)]
        self.coords = Coordinates(self.images, high.field)

    def divide(self, x: dict) -> Optional[dict]:
        """The preimage of x, or None when x is outside ``t^n Λ_{n+1}``."""
        return self.coords.try_coords(x)

    def embed(self, x: dict) -> dict:
        fld = self.high.field
        out: dict = {}
        for b, c in x.items():
            for k, v in self.images[b].items():
                out[k] = fld.add(out.get(k, 0), fld.mul(c, v))
        return {k: v for k, v in out.items() if v}


def lift_step(low: ProjComplex, ctx: ReductionContext) -> LiftReport:
    """Lift a complex over ``ctx.target = Λ_n`` to ``ctx.source = Λ_{n+1}``."""
    high, lowalg = ctx.source, ctx.target
    if low.algebra != lowalg:
        raise LiftingError("complex is not over the target of the context")
    n = lowalg.t_nilpotency
    if high.t_nilpotency != n + 1:
        raise LiftingError("lift_step goes up exactly one level")
    low = minimal(low)
    layer = _TopLayer(high, n)
    delta = ctx.lift_terms(low)
    steps = [{"level": n, "lifted_differentials": len(delta.diffs)}]
    eps = {}
    for i in delta.diffs:
        if i + 1 not in delta.diffs:
            continue
        sq = mat_mul(high, delta.diffs[i + 1], delta.diffs[i])
        e = mat_zero(len(sq), len(sq[0]) if sq else 0)
        for r, row in enumerate(sq):
            for s, x in enumerate(row):
                if x:
                    y = layer.divide(x)
                    if y is None:
                        raise LiftingError(f"δ∘δ in degree {i} is not divisible by t^{n}")
                    e[r][s] = y
        eps[i] = e
    base = low if n == 1 else ProjComplex(
        layer.low1, dict(low.terms), {i: layer.ctx1.reduce_matrix(d) for i, d in delta.diffs.items()})
    K = HomComplex(base, base)
    evec = K.vector(2, eps) if eps else {}
    if evec and K.apply(2, evec):
        raise LiftingError("obstruction is not a cocycle")
    s = K.solve_homotopy(2, evec)
    if s is None:
        h2 = K.cohomology_dim(2)
        steps[-1]["outcome"] = "obstructed"
        return LiftReport("obstructed", obstruction=Obstruction(n, eps, h2, base), steps=steps)
    smaps = K.maps(1, s)
    diffs = {}
    for i, d in delta.diffs.items():
        corr = smaps.get(i)
        if corr is None:
            diffs[i] = d
            continue
        diffs[i] = [[high.sub(x, layer.embed(y)) for x, y in zip(ra, rb)] for ra, rb in zip(d, corr)]
    lifted = ProjComplex(high, dict(low.terms), diffs)
    validate(lifted)  # d∘d = 0 re-verified exactly
    if ctx.reduce(lifted).diffs != {i: d for i, d in low.diffs.items()}:
        raise LiftingError("corrected lift does not reduce to the input")
    steps[-1].update(outcome="lifted", homotopy_support=len(s))
    return LiftReport("lifted", lifted=lifted, steps=steps)


def lift_full(p: ProjComplex, tower: Algebra, m: int, require: Optional[bool] = None) -> LiftReport:
    """Lift p step by step from its own level to level m of the tower of ``tower.root``.

    With ``require`` (default: p presilting) an obstruction raises.
    """
    root = tower.root
    if not 1 <= m <= root.t_nilpotency:
        raise LiftingError(f"target level {m} outside 1..{root.t_nilpotency}")
    start = p.algebra.t_nilpotency
    if start > m or p.algebra != root.level_algebra(start):
        raise LiftingError(f"complex is not over a level 1..{m} of the tower")
    if require is None:
        from .silting import is_presilting
        require = is_presilting(p)
    base = root.level_algebra(start)
    cur = minimal(ProjComplex(base, dict(p.terms), dict(p.diffs)))
    report = LiftReport("lifted", lifted=cur, chain=[cur])
    for n in range(start, m):
        ctx = reduction_context(root.level_algebra(n + 1), root.level_algebra(n))
        step = lift_step(cur, ctx)
        report.steps.extend(step.steps)
        if not step.ok:
            if require:
                raise LiftingError(f"presilting complex obstructed at level {n}")
            report.outcome = "obstructed"
            report.obstruction = step.obstruction
            report.lifted = None
            return report
        cur = step.lifted
        report.chain.append(cur)
    report.lifted = cur
    return report


def check_round_trip(report: LiftReport, p: ProjComplex) -> bool:
    """reduce(lift) ≅ p and every level reduces to the previous one."""
    if not report.ok:
        return False
    for lo, hi in zip(report.chain, report.chain[1:]):
        ctx = reduction_context(hi.algebra, lo.algebra)
        if not iso_test(ctx.reduce(hi), lo):
            return False
    top = report.lifted
    ctx = reduction_context(top.algebra, p.algebra)
    return bool(iso_test(ctx.reduce(top), p))


# --- modules ---------------------------------------------------------------------

@dataclass
class ModuleData:
    """A finite-dimensional right module: a space per vertex and arrow matrices.

    ``arrows[name]`` for an arrow i -> j is a ``dim N_i x dim N_j`` matrix:
    right multiplication by the arrow sends ``N e_j`` to ``N e_i``.
    """

    algebra: Algebra
    dims: tuple
    arrows: dict

    @property
    def offsets(self) -> list[int]:
        out, k = [], 0
        for d in self.dims:
            out.append(k)
            k += d
        return out

    @property
    def dim(self) -> int:
        return sum(self.dims)

    def act(self, vec: dict, b: int) -> dict:
        """``vec · b`` for a basis element b of the algebra."""
        alg = self.algebra
        fld = alg.field
        lab = alg.labels[b]
        if lab.tpow:
            return {}
        off = self.offsets
        if not lab.arrows:
            v = lab.src
            return {k: c for k, c in vec.items() if off[v] <= k < off[v] + self.dims[v]}
        cur = {k: c for k, c in vec.items()
               if off[lab.tgt] <= k < off[lab.tgt] + self.dims[lab.tgt]}
        for a in lab.arrows:
            name, s, t = alg.arrows[a]
            mat = self.arrows[name]
            nxt: dict = {}
            for k, c in cur.items():
                col = k - off[t]
                for r in range(self.dims[s]):
                    x = mat[r][col]
                    if x:
                        nxt[off[s] + r] = fld.add(nxt.get(off[s] + r, 0), fld.mul(c, x))
            cur = {k: v for k, v in nxt.items() if v}
        return cur

    def act_element(self, vec: dict, x: dict) -> dict:
        fld = self.algebra.field
        out: dict = {}
        for b, c in x.items():
            for k, v in self.act(vec, b).items():
                out[k] = fld.add(out.get(k, 0), fld.mul(c, v))
        return {k: v for k, v in out.items() if v}

    def check(self) -> None:
        """Module axioms on all pairs of basis elements."""
        alg = self.algebra
        one = alg.field.one
        for k in range(self.dim):
            v = {k: one}
            if self.act_element(v, alg.one()) != v:
                raise LiftingError("identity does not act as identity")
            for b1 in range(alg.dim):
                w = self.act(v, b1)
                for b2 in range(alg.dim):
                    lhs = self.act_element(v, dict(alg.mult[b1][b2]))
                    if lhs != self.act(w, b2):
                        raise LiftingError("arrow matrices do not satisfy the relations")


def simple_module(alg: Algebra, v: int) -> ModuleData:
    dims = tuple(1 if w == v else 0 for w in range(alg.n_vertices))
    arrows = {}
    for name, s, t in alg.arrows:
        arrows[name] = [[alg.field.zero] * dims[t] for _ in range(dims[s])]
    return ModuleData(alg, dims, arrows)


def _proj_basis(alg: Algebra, verts: tuple) -> list[tuple[int, int]]:
    """Basis (summand, algebra basis element) of ``⊕ e_v A``."""
    return [(k, b) for k, v in enumerate(verts) for b in range(alg.dim) if alg.block_of[b][0] == v]


def _top_generators(alg: Algebra, verts: tuple, kernel: list[dict], basis: list):
    """Minimal generators of a submodule of ``⊕ e_v A`` given by a vector basis."""
    index = {kb: i for i, kb in enumerate(basis)}
    rad = [b for b in range(alg.dim) if b not in alg.idem]

    def times(vec: dict, r: int) -> dict:
        out: dict = {}
        for i, c in vec.items():
            k, b = basis[i]
            for key, v in alg.mult[b][r]:
                j = index[(k, key)]
                out[j] = alg.field.add(out.get(j, 0), alg.field.mul(c, v))
        return {k: v for k, v in out.items() if v}

    subs = {}
    for v in range(alg.n_vertices):
        homog = [h for h in (times(x, alg.idem[v]) for x in kernel) if h]
        ech = Echelon(alg.field)
        subs[v] = [y for y in homog if ech.add(y) is None]
    radpart = [z for ys in subs.values() for y in ys for r in rad for z in [times(y, r)] if z]
    gens = []
    for v in range(alg.n_vertices):
        rad_v = [z for z in (times(y, alg.idem[v]) for y in radpart) if z]
        for i in extend_basis(rad_v, subs[v], alg.field):
            gens.append((v, subs[v][i]))
    return gens


def _generator_column(alg: Algebra, verts: tuple, vec: dict, basis: list) -> list:
    col = [{} for _ in verts]
    for i, c in vec.items():
        k, b = basis[i]
        col[k][b] = c
    return col


def projective_resolution(mod: ModuleData, depth: int) -> ProjComplex:
    """Minimal projective resolution ``P^{-depth} -> ... -> P^0`` of the module."""
    alg = mod.algebra
    fld = alg.field
    off = mod.offsets
    # generators of N: a basis of N / N rad, vertex by vertex
    rad = [b for b in range(alg.dim) if b not in alg.idem]
    nrad = Echelon(fld)
    for k in range(mod.dim):
        for r in rad:
            y = mod.act({k: fld.one}, r)
            if y:
                nrad.add(y)
    top_verts, top_vecs = [], []
    for v in range(alg.n_vertices):
        for k in range(off[v], off[v] + mod.dims[v]):
            if nrad.add({k: fld.one}) is None:
                top_verts.append(v)
                top_vecs.append({k: fld.one})
    terms = {0: tuple(top_verts)}
    diffs = {}
    verts = tuple(top_verts)
    basis = _proj_basis(alg, verts)
    cols = [mod.act(top_vecs[k], b) for k, b in basis]
    for deg in range(0, -depth, -1):
        kernel = [{i: c for i, c in x.items()} for x in _kernel(cols, fld)]
        if not kernel:
            break
        gens = _top_generators(alg, verts, kernel, basis)
        new_verts = tuple(v for v, _ in gens)
        d = [[{} for _ in gens] for _ in verts]
        for s, (_, vec) in enumerate(gens):
            col = _generator_column(alg, verts, vec, basis)
            for r in range(len(verts)):
                d[r][s] = col[r]
        terms[deg - 1] = new_verts
        diffs[deg - 1] = d
        new_basis = _proj_basis(alg, new_verts)
        index = {kb: i for i, kb in enumerate(basis)}
        cols = []
        for s, b in new_basis:
            out: dict = {}
            for r in range(len(verts)):
                for key, c in alg.mul(d[r][s], {b: fld.one}).items():
                    j = index[(r, key)]
                    out[j] = fld.add(out.get(j, 0), c)
            cols.append({k: v for k, v in out.items() if v})
        verts, basis = new_verts, new_basis
    return ProjComplex(alg, terms, diffs)


def _kernel(cols: list[dict], fld) -> list[dict]:
    from .linalg import kernel_sparse
    return kernel_sparse(cols, fld)


def _linear_map(c: ProjComplex, i: int) -> tuple[list, list, list[dict]]:
    """Columns of ``d^i`` as a linear map between the underlying vector spaces."""
    alg = c.algebra
    src, tgt = c.term(i), c.term(i + 1)
    bs, bt = _proj_basis(alg, src), _proj_basis(alg, tgt)
    index = {kb: j for j, kb in enumerate(bt)}
    d = c.diff(i)
    cols = []
    for s, b in bs:
        out: dict = {}
        for r in range(len(tgt)):
            if d[r][s]:
                for key, v in alg.mul(d[r][s], {b: alg.field.one}).items():
                    j = index[(r, key)]
                    out[j] = alg.field.add(out.get(j, 0), v)
        cols.append({k: v for k, v in out.items() if v})
    return bs, bt, cols


def complex_cohomology(c: ProjComplex, i: int) -> int:
    """``dim_k H^i`` of a complex of projectives as vector spaces."""
    alg = c.algebra
    n = len(_proj_basis(alg, c.term(i)))
    r_out = rank_sparse(_linear_map(c, i)[2], alg.field) if c.term(i + 1) and n else 0
    r_in = rank_sparse(_linear_map(c, i - 1)[2], alg.field) if c.term(i - 1) and n else 0
    return n - r_out - r_in


@dataclass
class ModuleLiftReport:
    outcome: str
    depth: int
    level: int
    resolution: ProjComplex
    lifted: Optional[ProjComplex] = None
    module_dim: int = 0
    base_dim: int = 0
    reduction_matches: bool = False
    tor_over_algebra: dict = field(default_factory=dict)
    tor_over_base: dict = field(default_factory=dict)
    obstruction: Optional[Obstruction] = None
    caveat: str = ""

    @property
    def ok(self) -> bool:
        return (self.outcome == "lifted" and self.reduction_matches
                and all(v == 0 for v in self.tor_over_algebra.values())
                and all(v == 0 for v in self.tor_over_base.values()))


def lift_module(mod: ModuleData, depth: int, tower: Algebra, m: int) -> ModuleLiftReport:
    """Lift a module over ``Λ_1`` to ``Λ_m`` through a truncated resolution."""
    if depth < 1:
        raise LiftingError("depth must be at least 1")
    mod.check()
    res = projective_resolution(mod, depth)
    rep = lift_full(res, tower, m, require=False)
    caveat = (f"resolution truncated at depth {depth}; vanishing of Tor is certified only in "
              f"degrees 1..{depth - 1}")
    out = ModuleLiftReport("obstructed", depth, m, res, caveat=caveat, base_dim=mod.dim)
    if not rep.ok:
        out.obstruction = rep.obstruction
        return out
    L = rep.lifted
    alg = L.algebra
    fld = alg.field
    b0 = _proj_basis(alg, L.term(0))
    if L.term(-1):
        _, _, cols = _linear_map(L, -1)
    else:
        cols = []
    ech = Echelon(fld)
    for c in cols:
        ech.add(c)
    out.outcome = "lifted"
    out.lifted = L
    out.module_dim = len(b0) - ech.rank
    # M ⊗ Λ_1 is the cokernel of the reduced presentation, which is the input's
    out.reduction_matches = complex_cohomology(res, 0) == mod.dim and \
        all(complex_cohomology(res, -i) == 0 for i in range(1, depth))
    # Tor_i(M, Λ_1) = H^{-i}(L ⊗ Λ_1) once L resolves M in degrees > -depth
    resolves = all(complex_cohomology(L, -i) == 0 for i in range(1, depth))
    for i in range(1, depth):
        out.tor_over_algebra[i] = complex_cohomology(res, -i) if resolves else -1
    # t-action on M = L^0 / im d^{-1}
    index = {kb: j for j, kb in enumerate(b0)}
    free_coords = [j for j in range(len(b0)) if j not in ech.rows]
    pos = {j: a for a, j in enumerate(free_coords)}
    tcols = []
    for j in free_coords:
        k, b = b0[j]
        img = {}
        for key, c in alg.mul({b: fld.one}, alg.t).items():
            img[index[(k, key)]] = c
        r, _ = ech.reduce(img)
        tcols.append({pos[q]: c for q, c in r.items()})
    mm = alg.t_nilpotency
    for i in range(1, depth):
        out.tor_over_base[i] = tor_base(tcols, mm, i, fld) if mm > 1 else 0
    return out
