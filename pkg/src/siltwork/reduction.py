"""Reduction along ``Λ_m -> Λ_n`` and the dimension identities it satisfies.

On complexes of projectives the derived tensor with ``Λ_n`` is entrywise
projection of the differentials.  The checks here compare Hom data over
``Λ_m`` with Hom data over ``Λ_n``, computing ``H(K / t^n K)`` directly
from the t-action on the Hom-complex K.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .algebra import Algebra, AlgebraError
from .complexes import ChainMap, ComplexError, Mat, ProjComplex, minimal
from .homspaces import EndAlgebra, HomComplex, hom_table, is_free_t_module, relation, tor_base
from .linalg import Echelon, rank_sparse


class ReductionError(ValueError):
    pass


def _root_index_map(a: Algebra) -> list[int]:
    """Basis index of a -> basis index of its root."""
    return list(range(a.dim)) if a.root_section is None else list(a.root_section)


def _root_image(a: Algebra, r: int) -> dict:
    """Image in a of the root basis element r."""
    return {r: a.field.one} if a.root_proj is None else a.root_proj[r]


@dataclass
class ReductionContext:
    """Projection ``source -> target`` with a fixed basis section back."""

    source: Algebra
    target: Algebra
    proj: list  # source basis index -> target element
    section: list  # target basis index -> source element

    @property
    def levels(self) -> tuple[int, int]:
        return self.source.t_nilpotency, self.target.t_nilpotency

    def reduce_element(self, x: dict) -> dict:
        fld = self.target.field
        out: dict = {}
        for b, c in x.items():
            for k, v in self.proj[b].items():
                out[k] = fld.add(out.get(k, 0), fld.mul(c, v))
        return {k: v for k, v in out.items() if v}

    def lift_element(self, x: dict) -> dict:
        fld = self.source.field
        out: dict = {}
        for b, c in x.items():
            for k, v in self.section[b].items():
                out[k] = fld.add(out.get(k, 0), fld.mul(c, v))
        return {k: v for k, v in out.items() if v}

    def reduce_matrix(self, m: Mat) -> Mat:
        return [[self.reduce_element(x) for x in row] for row in m]

    def lift_matrix(self, m: Mat) -> Mat:
        return [[self.lift_element(x) for x in row] for row in m]

    def reduce(self, c: ProjComplex) -> ProjComplex:
        if c.algebra != self.source:
            raise ReductionError("complex is not over the source algebra")
        return ProjComplex(self.target, dict(c.terms),
                           {i: self.reduce_matrix(d) for i, d in c.diffs.items()})

    def lift_terms(self, c: ProjComplex) -> ProjComplex:
        """Same terms over the source with section-lifted differentials (d² may fail)."""
        return ProjComplex(self.source, dict(c.terms),
                           {i: self.lift_matrix(d) for i, d in c.diffs.items()})

    def reduce_map(self, f: ChainMap) -> ChainMap:
        return ChainMap(self.reduce(f.source), self.reduce(f.target),
                        {i: self.reduce_matrix(m) for i, m in f.comps.items()})

    def is_morphism(self) -> bool:
        s, t = self.source, self.target
        for b1 in range(s.dim):
            for b2 in range(s.dim):
                lhs = self.reduce_element(dict(s.mult[b1][b2]))
                if lhs != t.mul(self.proj[b1], self.proj[b2]):
                    return False
        return True


def reduction_context(source: Algebra, target: Algebra) -> ReductionContext:
    """Context for ``source -> target`` where both are levels of one t-adic tower."""
    if source.field != target.field or source.vertices != target.vertices:
        raise ReductionError("algebras are not levels of a common tower")
    n = target.t_nilpotency
    if n > source.t_nilpotency:
        raise ReductionError(f"target level {n} exceeds source level {source.t_nilpotency}")
    if source == target:
        ident = [{b: source.field.one} for b in range(source.dim)]
        return ReductionContext(source, target, ident, [dict(x) for x in ident])
    if not source.has_t:
        raise ReductionError("source algebra has no central element")
    try:
        level = source.root.level_algebra(n)
    except AlgebraError as exc:
        raise ReductionError(str(exc)) from exc
    if level != target:
        raise ReductionError("target is not the quotient of the source by a power of t")
    src_root = _root_index_map(source)
    proj = [_root_image(level, r) for r in src_root]
    section = [_root_image(source, r) for r in _root_index_map(level)]
    return ReductionContext(source, target, proj, section)


def reduce_complex(c: ProjComplex, target: Algebra) -> ProjComplex:
    return reduction_context(c.algebra, target).reduce(c)


# --- H(K / t^n K) ----------------------------------------------------------

def quotient_cohomology(K: HomComplex, n: int) -> dict[int, int]:
    """``dim H^p(K / t^n K)`` for every p in the window of K."""
    fld = K.field
    tn = {p: K.t_action(p, n) for p in range(K.lo - 1, K.hi + 2)}
    tn_dim = {p: rank_sparse(cols, fld) for p, cols in tn.items()}

    def rank_bar(p: int) -> int:
        # rank of D^p on K^p / t^n K^p into K^{p+1} / t^n K^{p+1}
        if K.dim(p) == 0 or K.dim(p + 1) == 0:
            return 0
        ech = Echelon(fld)
        for v in tn[p + 1]:
            ech.add(v)
        base = ech.rank
        for v in K.differential(p):
            ech.add(v)
        return ech.rank - base

    out = {}
    for p in K.degrees:
        out[p] = K.dim(p) - tn_dim[p] - rank_bar(p) - rank_bar(p - 1)
    return out


@dataclass
class CheckReport:
    ok: bool
    name: str
    failures: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok

    def line(self) -> str:
        status = "pass" if self.ok else "FAIL"
        extra = "" if self.ok else ": " + "; ".join(map(str, self.failures))
        return f"{self.name}: {status}{extra}"


def _require_free(ctx: ReductionContext) -> None:
    if ctx.source.has_t and not ctx.source.is_t_free():
        raise ReductionError("source algebra is not free over k[t]/(t^m); check refused")


def kunneth_check(ctx: ReductionContext, l: ProjComplex, m: ProjComplex) -> CheckReport:
    """``H^i(Hom(l, m) / t^n) = Hom(l̄, m̄[i])`` and descent of ≥ and ⊥."""
    _require_free(ctx)
    n = ctx.target.t_nilpotency
    l, m = minimal(l), minimal(m)
    K = HomComplex(l, m)
    lbar, mbar = ctx.reduce(l), ctx.reduce(m)
    Kbar = HomComplex(lbar, mbar)
    left = quotient_cohomology(K, n)
    right = {p: Kbar.cohomology_dim(p) for p in Kbar.degrees}
    failures = []
    for p in sorted(set(left) | set(right)):
        a, b = left.get(p, 0), right.get(p, 0)
        if a != b:
            failures.append(f"degree {p}: H(K/t^nK) = {a}, Hom over quotient = {b}")
    up = {p: K.cohomology_dim(p) for p in K.degrees}
    for which in ("geq", "perp"):
        r1 = relation(l, m, which, table=up)
        r2 = relation(lbar, mbar, which, table=right)
        if r1 != r2:
            failures.append(f"{which}: {r1} over source, {r2} over target")
    return CheckReport(not failures, "kunneth", failures, {"quotient": left, "reduced": right})


def end_ring_comparison(ctx: ReductionContext, l: ProjComplex) -> CheckReport:
    """``End(l) ⊗ Λ_n -> End(l̄)``: dimension count, multiplicativity, surjectivity."""
    _require_free(ctx)
    n = ctx.target.t_nilpotency
    l = minimal(l)
    failures = []
    if not relation(l, l, "geq"):
        raise ReductionError("end_ring_comparison needs a presilting complex")
    E = EndAlgebra(l)
    lbar = ctx.reduce(l)
    Ebar = EndAlgebra(lbar)
    tn_rank = rank_sparse(E.t_action(n), E.field) if E.dim else 0
    expect = E.dim - tn_rank
    if Ebar.dim != expect:
        failures.append(f"dim End(reduced) = {Ebar.dim}, dim E - rank t^n = {expect}")
    images = [Ebar.map_coords(ctx.reduce_map(E.element_map({a: E.field.one})))
              for a in range(E.dim)]
    if rank_sparse(images, E.field) != Ebar.dim:
        failures.append("reduction map on endomorphisms is not surjective")
    for a in range(E.dim):
        for b in range(E.dim):
            lhs = Ebar.mul(images[a], images[b])
            ab = E.structure[a][b]
            rhs: dict = {}
            for k, c in ab.items():
                for key, v in images[k].items():
                    rhs[key] = E.field.add(rhs.get(key, 0), E.field.mul(c, v))
            rhs = {k: v for k, v in rhs.items() if v}
            if lhs != rhs:
                failures.append(f"not multiplicative on basis pair ({a}, {b})")
                break
    return CheckReport(not failures, "end-ring", failures,
                       {"dim_end": E.dim, "rank_t^n": tn_rank, "dim_end_reduced": Ebar.dim})


def pretilting_tor_check(ctx: ReductionContext, t_cplx: ProjComplex,
                         extra: int = 2) -> CheckReport:
    """``Tor_i^R(End T, R/t^n) = Hom(T̄, T̄[-i])`` for i over the window."""
    _require_free(ctx)
    t_cplx = minimal(t_cplx)
    if not relation(t_cplx, t_cplx, "teq"):
        raise ReductionError("pretilting_tor_check needs a pretilting complex")
    m, n = ctx.levels
    E = EndAlgebra(t_cplx)
    cols = E.t_action(1) if m > 1 else [{} for _ in range(E.dim)]
    tbar = ctx.reduce(t_cplx)
    Kbar = HomComplex(tbar, tbar)
    top = max(0, -Kbar.lo) + extra
    failures, data = [], {}
    for i in range(top + 1):
        a = tor_base(cols, m, i, E.field, j=n)
        b = Kbar.cohomology_dim(-i) if Kbar.lo <= -i <= Kbar.hi else 0
        data[i] = (a, b)
        if a != b:
            failures.append(f"i = {i}: Tor = {a}, Hom(T̄, T̄[-{i}]) = {b}")
    return CheckReport(not failures, "pretilting-tor", failures, data)


@dataclass
class EndoFreeResult:
    free: bool
    hom_minus_one: int
    t_free: bool

    def __bool__(self):
        return self.free


def endo_free_test(ctx: ReductionContext, t_cplx: ProjComplex) -> EndoFreeResult:
    """End(T) is free over k[t]/(t^m) iff Hom(T̄, T̄[-1]) = 0 (reduction to level 1)."""
    if ctx.target.t_nilpotency != 1:
        raise ReductionError("endo_free_test reduces to level 1")
    _require_free(ctx)
    t_cplx = minimal(t_cplx)
    if not relation(t_cplx, t_cplx, "teq"):
        raise ReductionError("endo_free_test needs a pretilting complex")
    m = ctx.source.t_nilpotency
    tbar = ctx.reduce(t_cplx)
    Kbar = HomComplex(tbar, tbar)
    h = Kbar.cohomology_dim(-1) if Kbar.lo <= -1 <= Kbar.hi else 0
    E = EndAlgebra(t_cplx)
    cols = E.t_action(1) if m > 1 else [{} for _ in range(E.dim)]
    free = is_free_t_module(cols, m, E.field)
    if free != (h == 0):
        raise ReductionError(f"endo-freeness computations disagree: Hom[-1] = {h}, free = {free}")
    return EndoFreeResult(h == 0, h, free)
