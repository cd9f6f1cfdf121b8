"""Finite-dimensional basic algebras kQ/(I + J^N) with a central nilpotent t.

Paths compose right-to-left: the written path ``(a3, a2, a1)`` means
``a3 * a2 * a1`` and runs a1 first.  An arrow ``alpha: i -> j`` satisfies
``alpha = e_j alpha e_i``, so ``Hom(e_i A, e_j A) = e_j A e_i`` acting by left
multiplication on right modules.

Elements are sparse dicts ``{basis index: coefficient}``.  Every basis
element is a monomial ``path * t^k`` lying in a single block ``e_j A e_i``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field
from typing import Optional, Sequence

from .linalg import Echelon, Field, QQ, axpy, rank_sparse, sparse_scale


class AlgebraError(ValueError):
    pass


# --- presentations --------------------------------------------------------

@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[tuple[str, str, str], ...]  # (name, source, target)

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise AlgebraError("vertex names must be unique")
        names = [a[0] for a in self.arrows]
        if len(set(names)) != len(names):
            raise AlgebraError("arrow names must be unique")
        if set(names) & set(self.vertices):
            raise AlgebraError("arrow and vertex names must differ")
        vs = set(self.vertices)
        for name, s, t in self.arrows:
            if s not in vs or t not in vs:
                raise AlgebraError(f"arrow {name} references an unknown vertex")

    def vertex_index(self, name: str) -> int:
        try:
            return self.vertices.index(name)
        except ValueError:
            raise AlgebraError(f"unknown vertex {name!r}") from None

    def arrow_index(self, name: str) -> int:
        for i, a in enumerate(self.arrows):
            if a[0] == name:
                return i
        raise AlgebraError(f"unknown arrow {name!r}")


@dataclass(frozen=True)
class Term:
    """``coeff * path * t^tpow``; an empty path needs ``vertex``."""

    coeff: object
    path: tuple[str, ...]
    vertex: Optional[str] = None
    tpow: int = 0


@dataclass(frozen=True)
class PathExpr:
    terms: tuple[Term, ...]


@dataclass(frozen=True)
class AlgebraPresentation:
    field: Field
    quiver: Quiver
    relations: tuple[PathExpr, ...]
    nilpotency_bound: int
    central_element: Optional[PathExpr] = None


def _path_ends(q: Quiver, term: Term) -> tuple[int, int]:
    """(source, target) vertex indices of a written path; checks composability."""
    if not term.path:
        if term.vertex is None:
            raise AlgebraError("empty path needs a vertex")
        v = q.vertex_index(term.vertex)
        return v, v
    idx = [q.arrow_index(a) for a in term.path]
    # written order: leftmost arrow is applied last
    for left, right in zip(idx, idx[1:]):
        if q.arrows[right][2] != q.arrows[left][1]:
            raise AlgebraError(f"path {'*'.join(term.path)} is not composable")
    return q.vertex_index(q.arrows[idx[-1]][1]), q.vertex_index(q.arrows[idx[0]][2])


def _expr_ends(q: Quiver, expr: PathExpr) -> tuple[int, int]:
    ends = {_path_ends(q, t) for t in expr.terms}
    if len(ends) != 1:
        raise AlgebraError("relation terms are not parallel")
    return ends.pop()


# --- the algebra ----------------------------------------------------------

@dataclass(frozen=True)
class Label:
    arrows: tuple[int, ...]  # written order
    src: int
    tgt: int
    tpow: int = 0

    @property
    def length(self) -> int:
        return len(self.arrows)


class Algebra:
    """A finite-dimensional basic algebra with structure constants.

    Attributes of note: ``mult[a][b]`` is the product of basis elements as a
    tuple of ``(index, coeff)``; ``idem[v]`` is the basis index of ``e_v``;
    ``t`` is the central element (possibly zero) and ``t_nilpotency`` the
    least ``m`` with ``t^m = 0``.
    """

    def __init__(self, field: Field, vertices, arrows, labels, mult, idem, arrow_el,
                 t=None, has_t=False, root=None, root_proj=None, root_section=None,
                 name: str = ""):
        self.field = field
        self.vertices = tuple(vertices)
        self.arrows = tuple(arrows)
        self.labels = tuple(labels)
        self.mult = mult
        self.idem = tuple(idem)
        self.arrow_el = tuple(arrow_el)
        self.t = dict(t or {})
        self.has_t = has_t
        self.name = name
        self.spec = None  # JSON presentation when loaded from a file
        self.dim = len(self.labels)
        self.block_of = [(lab.tgt, lab.src) for lab in self.labels]
        self.block_basis: dict[tuple[int, int], list[int]] = {
            (j, i): [] for j in range(len(self.vertices)) for i in range(len(self.vertices))}
        self.pos_in_block = [0] * self.dim
        for b, key in enumerate(self.block_of):
            self.pos_in_block[b] = len(self.block_basis[key])
            self.block_basis[key].append(b)
        self.t_nilpotency = self._nilpotency(self.t)
        # lineage for reductions between truncation levels
        self.root = root if root is not None else self
        self.root_proj = root_proj  # root basis index -> element of self
        self.root_section = root_section  # self basis index -> root basis index
        self._levels: dict[int, "Algebra"] = {}
        self._sig = None

    # -- identity ---------------------------------------------------------
    def signature(self):
        if self._sig is None:
            self._sig = (self.field.p, self.vertices, self.labels,
                         tuple(tuple(tuple(sorted((k, str(c)) for k, c in row)) for row in r)
                               for r in self.mult),
                         tuple(sorted((k, str(c)) for k, c in self.t.items())))
        return self._sig

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Algebra):
            return NotImplemented
        return self.signature() == other.signature()

    def __hash__(self):
        return hash(self.signature())

    def __repr__(self):
        return f"Algebra({self.name or 'unnamed'}, dim={self.dim}, t_nilpotency={self.t_nilpotency})"

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def level(self) -> int:
        return self.t_nilpotency

    # -- element operations -------------------------------------------------
    def zero(self) -> dict:
        return {}

    def one(self) -> dict:
        return {i: self.field.one for i in self.idem}

    def basis_element(self, b: int) -> dict:
        return {b: self.field.one}

    def e(self, v: int) -> dict:
        return {self.idem[v]: self.field.one}

    def add(self, x: dict, y: dict) -> dict:
        out = dict(x)
        axpy(out, -1 if not self.field.p else self.field.p - 1, y, self.field.p)
        return out

    def sub(self, x: dict, y: dict) -> dict:
        out = dict(x)
        axpy(out, 1, y, self.field.p)
        return out

    def scale(self, x: dict, c) -> dict:
        return sparse_scale(x, c, self.field.p)

    def neg(self, x: dict) -> dict:
        return self.scale(x, self.field.neg(self.field.one))

    def mul(self, x: dict, y: dict) -> dict:
        if not x or not y:
            return {}
        p = self.field.p
        out: dict = {}
        mult = self.mult
        for a, ca in x.items():
            row = mult[a]
            for b, cb in y.items():
                prod = row[b]
                if not prod:
                    continue
                c = ca * cb
                for k, ck in prod:
                    out[k] = out.get(k, 0) + c * ck
        if p:
            return {k: v % p for k, v in out.items() if v % p}
        return {k: v for k, v in out.items() if v}

    def power(self, x: dict, n: int) -> dict:
        out = self.one()
        for _ in range(n):
            out = self.mul(out, x)
        return out

    def idempotent_component(self, x: dict, i: int, j: int) -> dict:
        """``e_j x e_i``: the part of x in the block e_j A e_i."""
        return {b: c for b, c in x.items() if self.block_of[b] == (j, i)}

    def top_coeff(self, x: dict, v: int):
        """Coefficient of ``e_v`` in x (x taken modulo the radical)."""
        return x.get(self.idem[v], self.field.zero)

    def is_radical(self, x: dict) -> bool:
        return not any(b in x for b in self.idem)

    def path_element(self, path: Sequence[int], vertex: Optional[int] = None) -> dict:
        if not path:
            return self.e(vertex)
        out = self.arrow_el[path[0]]
        for a in path[1:]:
            out = self.mul(out, self.arrow_el[a])
        return out

    def random_element(self, rng: random.Random, block=None, lo=-3, hi=3) -> dict:
        basis = self.block_basis[block] if block is not None else range(self.dim)
        out = {}
        for b in basis:
            c = self.field(rng.randint(lo, hi))
            if c:
                out[b] = c
        return out

    def inverse_local(self, x: dict, v: int) -> dict:
        """Inverse of x in ``e_v A e_v``, assuming its e_v coefficient is nonzero."""
        c = self.top_coeff(x, v)
        if not c:
            raise AlgebraError("element is not invertible modulo the radical")
        ci = self.field.inv(c)
        ev = self.e(v)
        n = self.sub(ev, self.scale(x, ci))  # x = c (e - n)
        out, term = dict(ev), dict(ev)
        for _ in range(self.dim + 1):
            term = self.mul(term, n)
            if not term:
                break
            out = self.add(out, term)
        else:
            raise AlgebraError("radical element failed to be nilpotent")
        return self.scale(out, ci)

    def label_str(self, b: int) -> str:
        lab = self.labels[b]
        if lab.arrows:
            s = "*".join(self.arrows[a][0] for a in lab.arrows)
        else:
            s = f"e{self.vertices[lab.src]}"
        if lab.tpow:
            s += "*t" if lab.tpow == 1 else f"*t^{lab.tpow}"
        return s

    def element_str(self, x: dict) -> str:
        if not x:
            return "0"
        return " + ".join(f"{c}*{self.label_str(b)}" for b, c in sorted(x.items()))

    # -- structure -----------------------------------------------------------
    def _nilpotency(self, x: dict) -> int:
        m, cur = 1, dict(x)
        while cur:
            cur = self.mul(cur, x)
            m += 1
            if m > self.dim + 2:
                raise AlgebraError("central element is not nilpotent")
        return m

    def t_power(self, j: int) -> dict:
        return self.power(self.t, j) if j else self.one()

    def mult_rank(self, x: dict, block=None) -> int:
        """Rank of left multiplication by x on A (or on one block)."""
        basis = self.block_basis[block] if block is not None else range(self.dim)
        return rank_sparse([self.mul(x, {b: self.field.one}) for b in basis], self.field)

    def loewy_length(self) -> int:
        rad = [b for b in range(self.dim) if b not in self.idem]
        cur = [{b: self.field.one} for b in rad]
        length = 1
        while True:
            ech = Echelon(self.field)
            for v in cur:
                ech.add(v)
            if ech.rank == 0:
                return length
            cur = [self.mul(row, {r: self.field.one}) for row in ech.rows.values() for r in rad]
            length += 1
            if length > self.dim + 2:
                raise AlgebraError("radical is not nilpotent")

    def check(self, assoc_cap: int = 64, samples: int = 10_000, seed: int = 0) -> None:
        """Verify the structural invariants; raises AlgebraError on failure."""
        one = self.one()
        ids = [self.e(v) for v in range(self.n_vertices)]
        for v, ev in enumerate(ids):
            if self.mul(ev, ev) != ev:
                raise AlgebraError(f"e_{self.vertices[v]} is not idempotent")
            for w, ew in enumerate(ids):
                if v != w and self.mul(ev, ew):
                    raise AlgebraError("vertex idempotents are not orthogonal")
        for b in range(self.dim):
            x = {b: self.field.one}
            if self.mul(one, x) != x or self.mul(x, one) != x:
                raise AlgebraError("vertex idempotents do not sum to 1")
            j, i = self.block_of[b]
            if self.mul(self.mul(ids[j], x), ids[i]) != x:
                raise AlgebraError(f"basis element {self.label_str(b)} is not block-homogeneous")
        if self.dim <= assoc_cap:
            triples = itertools.product(range(self.dim), repeat=3)
        else:
            rng = random.Random(seed)
            triples = ((rng.randrange(self.dim), rng.randrange(self.dim), rng.randrange(self.dim))
                       for _ in range(samples))
        for a, b, c in triples:
            x, y, z = ({a: self.field.one}, {b: self.field.one}, {c: self.field.one})
            if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)):
                raise AlgebraError("multiplication is not associative")
        if self.has_t:
            for b in range(self.dim):
                x = {b: self.field.one}
                if self.mul(self.t, x) != self.mul(x, self.t):
                    raise AlgebraError(f"t does not commute with {self.label_str(b)}")
            self.check_t_free()

    def check_t_free(self) -> None:
        m = self.t_nilpotency
        if self.dim % m:
            raise AlgebraError(f"dim {self.dim} is not divisible by t-nilpotency {m}")
        for j in range(1, m):
            tj = self.t_power(j)
            want = (m - j) * self.dim // m
            got = self.mult_rank(tj)
            if got != want:
                raise AlgebraError(f"t-freeness fails: rank t^{j} = {got}, expected {want}")
            for key, basis in self.block_basis.items():
                if len(basis) % m:
                    raise AlgebraError(f"t-freeness fails on block e{self.vertices[key[0]]}"
                                       f"Ae{self.vertices[key[1]]}: dim {len(basis)}")
                want_b = (m - j) * len(basis) // m
                got_b = self.mult_rank(tj, key)
                if got_b != want_b:
                    raise AlgebraError(
                        f"t-freeness fails on block e{self.vertices[key[0]]}Ae{self.vertices[key[1]]}:"
                        f" rank t^{j} = {got_b}, expected {want_b}")

    def is_t_free(self) -> bool:
        try:
            self.check_t_free()
        except AlgebraError:
            return False
        return True

    # -- truncation levels --------------------------------------------------
    def level_algebra(self, n: int) -> "Algebra":
        """Cached ``root / t^n root``; the top level is the root itself."""
        root = self.root
        if n == root.t_nilpotency:
            return root
        if n not in root._levels:
            root._levels[n] = quotient_by_central_power(root, n)[0]
        return root._levels[n]


def _ordered_paths(q: Quiver, bound: int) -> list[Label]:
    nv = len(q.vertices)
    arrows = [(q.vertex_index(s), q.vertex_index(t)) for _, s, t in q.arrows]
    paths = [Label((), v, v) for v in range(nv)]
    frontier = list(paths)
    length = 0
    while frontier and length + 1 < bound:
        nxt = []
        for p in frontier:
            for a, (s, t) in enumerate(arrows):
                if s == p.tgt:
                    nxt.append(Label((a,) + p.arrows, p.src, t))
        paths.extend(nxt)
        frontier = nxt
        length += 1
    return paths


def build_algebra(pres: AlgebraPresentation, name: str = "", check: bool = True) -> Algebra:
    """``kQ / (<relations> + J^N)`` with the multiplication table by normal forms."""
    q, N, fld = pres.quiver, pres.nilpotency_bound, pres.field
    if N < 1:
        raise AlgebraError("nilpotency bound must be at least 1")
    rel_data = []
    for r in pres.relations:
        s, t = _expr_ends(q, r)
        terms = []
        for term in r.terms:
            _path_ends(q, term)
            if term.tpow:
                raise AlgebraError("relations may not mention t")
            terms.append((fld(term.coeff), tuple(q.arrow_index(a) for a in term.path)))
        rel_data.append((s, t, terms))
    central = None
    if pres.central_element is not None:
        for term in pres.central_element.terms:
            s, t = _path_ends(q, term)
            if s != t:
                raise AlgebraError("central element must be a sum of cycles")
        central = pres.central_element

    paths = _ordered_paths(q, N)
    # longest paths first so that they become pivots of the relation span
    order = sorted(range(len(paths)), key=lambda i: (-paths[i].length, paths[i].arrows, paths[i].src))
    col = {}
    for c, i in enumerate(order):
        col[(paths[i].arrows, paths[i].src)] = c
    by_src = {}
    by_tgt = {}
    for p in paths:
        by_src.setdefault(p.src, []).append(p)
        by_tgt.setdefault(p.tgt, []).append(p)

    def key(arrows, src):
        return (arrows, src)

    ideal = Echelon(fld)
    for s, t, terms in rel_data:
        for u in by_src.get(t, []):
            for w in by_tgt.get(s, []):
                vec = {}
                for c, arr in terms:
                    full = u.arrows + arr + w.arrows
                    if len(full) >= N:
                        continue
                    k = col[key(full, w.src)]
                    vec[k] = fld.add(vec.get(k, fld.zero), c)
                vec = {k: v for k, v in vec.items() if v}
                if vec:
                    ideal.add(vec)

    basis_cols = sorted((c for c in range(len(order)) if c not in ideal.rows),
                        key=lambda c: (paths[order[c]].length, paths[order[c]].src, paths[order[c]].arrows))
    labels = [paths[order[c]] for c in basis_cols]
    col_to_basis = {c: b for b, c in enumerate(basis_cols)}
    idem = []
    for v in range(len(q.vertices)):
        c = col[key((), v)]
        if c not in col_to_basis:
            raise AlgebraError(f"idempotent of vertex {q.vertices[v]} vanishes")
        idem.append(col_to_basis[c])

    def normal_form(arrows, src) -> dict:
        if len(arrows) >= N:
            return {}
        r, _ = ideal.reduce({col[key(arrows, src)]: fld.one})
        return {col_to_basis[c]: v for c, v in r.items()}

    mult = []
    for a in labels:
        row = []
        for b in labels:
            if b.tgt != a.src:
                row.append(())
                continue
            row.append(tuple(sorted(normal_form(a.arrows + b.arrows, b.src).items())))
        mult.append(row)
    arrow_el = []
    for ai, (_, s, _t) in enumerate(q.arrows):
        arrow_el.append(normal_form((ai,), q.vertex_index(s)))
    alg = Algebra(fld, q.vertices, [(a, q.vertex_index(s), q.vertex_index(t)) for a, s, t in q.arrows],
                  labels, mult, idem, arrow_el, name=name)
    if central is not None:
        tel = {}
        for term in central.terms:
            s, _ = _path_ends(q, term)
            el = alg.path_element([q.arrow_index(a) for a in term.path], s)
            tel = alg.add(tel, alg.scale(el, fld(term.coeff)))
        alg.t = tel
        alg.has_t = True
        alg.t_nilpotency = alg._nilpotency(tel)
    if check:
        alg.check()
    return alg


def tensor_trivial_extension(base: Algebra, m: int, name: str = "") -> Algebra:
    """``base ⊗ k[t]/(t^m)`` with t the new central generator."""
    if m < 1:
        raise AlgebraError("t-power must be at least 1")
    if base.has_t and base.t:
        raise AlgebraError("base algebra already carries a central element")
    D = base.dim
    labels = [Label(lab.arrows, lab.src, lab.tgt, j) for j in range(m) for lab in base.labels]
    mult = []
    for j1 in range(m):
        for a in range(D):
            row = []
            for j2 in range(m):
                for b in range(D):
                    if j1 + j2 >= m:
                        row.append(())
                    else:
                        off = (j1 + j2) * D
                        row.append(tuple((off + k, c) for k, c in base.mult[a][b]))
            mult.append(row)
    idem = list(base.idem)
    arrow_el = [dict(x) for x in base.arrow_el]
    t = {D + i: base.field.one for i in base.idem} if m > 1 else {}
    alg = Algebra(base.field, base.vertices, base.arrows, labels, mult, idem, arrow_el,
                  t=t, has_t=True, name=name or f"{base.name}⊗k[t]/t^{m}")
    alg.check()
    return alg


def quotient_by_central_power(a: Algebra, n: int):
    """``(A / t^n A, projection)``; the projection maps basis index -> element."""
    if not a.has_t:
        raise AlgebraError("algebra has no central element")
    if not 1 <= n <= a.t_nilpotency:
        raise AlgebraError(f"level {n} outside 1..{a.t_nilpotency}")
    if n == a.t_nilpotency:
        proj = [{b: a.field.one} for b in range(a.dim)]
        return a, proj
    fld, D = a.field, a.dim
    tn = a.t_power(n)
    ech = Echelon(fld)
    # reversed columns: pivots land on the highest-indexed (longest) monomials
    for b in range(D):
        v = a.mul(tn, {b: fld.one})
        ech.add({D - 1 - k: c for k, c in v.items()})
    keep = [b for b in range(D) if (D - 1 - b) not in ech.rows]
    new_index = {b: i for i, b in enumerate(keep)}

    def proj_el(x: dict) -> dict:
        r, _ = ech.reduce({D - 1 - k: c for k, c in x.items()})
        return {new_index[D - 1 - k]: c for k, c in r.items()}

    proj = [proj_el({b: fld.one}) for b in range(D)]
    mult = []
    for b1 in keep:
        row = []
        for b2 in keep:
            prod = dict(a.mult[b1][b2])
            row.append(tuple(sorted(proj_el(prod).items())))
        mult.append(row)
    for v, i in enumerate(a.idem):
        if i not in new_index:
            raise AlgebraError("vertex idempotent lies in t^n A")
    idem = [new_index[i] for i in a.idem]
    arrow_el = [proj_el(x) for x in a.arrow_el]
    labels = [a.labels[b] for b in keep]
    root = a.root
    if a.root_proj is None:
        root_proj = proj
        root_section = list(keep)
    else:
        root_proj = []
        for x in a.root_proj:
            y = {}
            for b, c in x.items():
                for k, ck in proj[b].items():
                    y[k] = fld.add(y.get(k, fld.zero), fld.mul(c, ck))
            root_proj.append({k: v for k, v in y.items() if v})
        root_section = [a.root_section[b] for b in keep]
    q = Algebra(fld, a.vertices, a.arrows, labels, mult, idem, arrow_el, t=proj_el(a.t),
                has_t=True, root=root, root_proj=root_proj, root_section=root_section,
                name=f"{a.name}/t^{n}" if a.name else "")
    if q.t_nilpotency != n and q.dim:
        raise AlgebraError(f"quotient has t-nilpotency {q.t_nilpotency}, expected {n}")
    return q, proj


def projection_is_morphism(a: Algebra, q: Algebra, proj: list[dict]) -> bool:
    """π(xy) = π(x)π(y) on all basis pairs."""
    fld = a.field

    def apply(x):
        y = {}
        for b, c in x.items():
            for k, ck in proj[b].items():
                y[k] = fld.add(y.get(k, fld.zero), fld.mul(c, ck))
        return {k: v for k, v in y.items() if v}

    for b1 in range(a.dim):
        for b2 in range(a.dim):
            lhs = apply(dict(a.mult[b1][b2]))
            rhs = q.mul(proj[b1], proj[b2])
            if lhs != rhs:
                return False
    return True


def structurally_isomorphic(a: Algebra, b: Algebra) -> bool:
    """Same multiplication table up to relabelling through path labels."""
    if a.dim != b.dim or a.vertices != b.vertices:
        return False
    pos = {lab: i for i, lab in enumerate(b.labels)}
    if set(pos) != set(a.labels):
        return False
    perm = [pos[lab] for lab in a.labels]
    for x in range(a.dim):
        for y in range(a.dim):
            lhs = sorted((perm[k], str(c)) for k, c in a.mult[x][y])
            rhs = sorted((k, str(c)) for k, c in b.mult[perm[x]][perm[y]])
            if lhs != rhs:
                return False
    return True
