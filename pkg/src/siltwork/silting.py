"""Presilting predicates, irreducible mutation and mutation-graph exploration."""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .algebra import Algebra
from .complexes import (ChainMap, ComplexError, ProjComplex, cone, direct_sum, minimal, shift,
                        stalk)
from .decomposition import DEFAULT_SEED, basic_summands, iso_test
from .homspaces import HomComplex, hom_table, relation
from .linalg import QQ, det
from .reduction import ReductionContext, ReductionError

log = logging.getLogger(__name__)

SIDES = ("right", "left")


class MutationError(RuntimeError):
    pass


def is_presilting(c: ProjComplex) -> bool:
    return relation(c, c, "geq")


def is_pretilting(c: ProjComplex) -> bool:
    return relation(c, c, "teq")


def is_two_term(c: ProjComplex) -> bool:
    sup = c.support()
    return sup is not None and sup[1] - sup[0] <= 1


def in_standard_window(c: ProjComplex) -> bool:
    """Support inside degrees -1 and 0 (the window used for two-term counts)."""
    sup = minimal(c).support()
    return sup is None or (sup[0] >= -1 and sup[1] <= 0)


def k0_matrix(c: ProjComplex, seed: int = DEFAULT_SEED) -> tuple[list[list[int]], bool]:
    """Classes of the indecomposable summands in K_0; flag = square and det ±1."""
    rows = [list(x.k0_class()) for x in basic_summands(c, seed)]
    n = c.algebra.n_vertices
    if len(rows) != n:
        return rows, False
    d = det([[QQ(x) for x in row] for row in rows], QQ)
    return rows, d in (1, -1)


# --- certificates -----------------------------------------------------------

LEVELS = ("mutation-provenance", "two-term-criterion", "heuristic")


@dataclass(frozen=True)
class SiltingCertificate:
    level: str
    details: str = ""
    word: Optional[tuple] = None

    def caveat(self) -> str:
        if self.level == "heuristic":
            return "generation is not independently certified"
        return ""


@dataclass
class Rejection:
    reason: str

    def __bool__(self):
        return False


def certify_silting(c: ProjComplex, provenance: Optional[Sequence] = None,
                    seed: int = DEFAULT_SEED):
    """A SiltingCertificate at the strongest applicable level, or a Rejection."""
    c = minimal(c)
    if not is_presilting(c):
        return Rejection("not presilting")
    rows, unimodular = k0_matrix(c, seed)
    n = c.algebra.n_vertices
    if len(rows) != n:
        return Rejection(f"{len(rows)} indecomposable summands, expected {n}")
    if not unimodular:
        return Rejection("K0 classes are not a basis")
    if provenance is not None:
        word = tuple((int(i), str(s)) for i, s in provenance)
        replay = replay_word(c.algebra, word, seed)
        if iso_test(replay, c, seed):
            return SiltingCertificate("mutation-provenance", "replayed from the stalk complex", word)
        return Rejection("provenance word does not replay to the complex")
    if is_two_term(c):
        return SiltingCertificate("two-term-criterion",
                                  "two-term presilting with as many summands as vertices")
    return SiltingCertificate("heuristic", "presilting, full summand count, unimodular K0")


# --- mutation ------------------------------------------------------------------

@dataclass
class Mutation:
    source: ProjComplex
    index: int
    side: str
    result: ProjComplex  # basic, canonical order
    new_summand: ProjComplex
    new_index: int  # position of new_summand in the canonical order of result


def _approximation_data(x: ProjComplex, others: list[ProjComplex], side: str):
    """Full-basis approximation of x by add(others)."""
    alg = x.algebra
    copies, maps = [], []
    for mj in others:
        K = HomComplex(x, mj) if side == "right" else HomComplex(mj, x)
        reps, _ = K.cohomology_basis(0)
        for z in reps:
            copies.append(mj)
            maps.append(K.chain_map(z))
    return copies, maps


def _stack(x: ProjComplex, copies: list, maps: list, side: str) -> ChainMap:
    """Combine maps x -> M_k (right) or M_k -> x (left) into one map."""
    m0 = direct_sum(*copies)
    comps = {}
    degs = set(x.terms) | set(m0.terms)
    for i in degs:
        rows = []
        if side == "right":
            for f in maps:
                rows.extend(f.comp(i))
        else:
            nrows = len(x.term(i))
            rows = [[] for _ in range(nrows)]
            for f in maps:
                blk = f.comp(i)
                for r in range(nrows):
                    rows[r].extend(blk[r])
        comps[i] = rows
    if side == "right":
        return ChainMap(x, m0, comps)
    return ChainMap(m0, x, comps)


def _find_index(parts: list[ProjComplex], y: ProjComplex, seed: int) -> int:
    for k, p in enumerate(parts):
        if p.signature() == y.signature() and iso_test(p, y, seed):
            return k
    raise MutationError("new summand missing from the mutated complex")


def mutate(c: ProjComplex, index: int, side: str = "right", seed: int = DEFAULT_SEED,
           check: bool = True) -> Mutation:
    """Irreducible right or left mutation at the summand with this canonical index."""
    if side not in SIDES:
        raise ValueError(f"side must be one of {SIDES}")
    parts = basic_summands(c, seed)
    if not 0 <= index < len(parts):
        raise MutationError(f"summand index {index} out of range 0..{len(parts) - 1}")
    x = parts[index]
    others = parts[:index] + parts[index + 1:]
    copies, maps = _approximation_data(x, others, side)
    if not copies:
        y = shift(x, 1 if side == "right" else -1)
    else:
        g = _stack(x, copies, maps, side)
        y = minimal(cone(g) if side == "right" else shift(cone(g), -1))
    new_parts = basic_summands(direct_sum(y, *others), seed)
    result = direct_sum(*new_parts)
    fresh = [p for p in new_parts if not any(p.signature() == o.signature() and iso_test(p, o, seed)
                                             for o in others)]
    if len(fresh) != 1:
        raise MutationError(f"mutation produced {len(fresh)} new summands, expected 1")
    new_summand = fresh[0]
    mu = Mutation(c, index, side, result, new_summand, _find_index(new_parts, new_summand, seed))
    if check:
        problems = mutation_postconditions(c, mu.result, side, len(parts), len(new_parts), seed)
        if problems:
            raise MutationError("; ".join(problems))
    return mu


def mutation_postconditions(c: ProjComplex, mu: ProjComplex, side: str, n_before: int,
                            n_after: int, seed: int = DEFAULT_SEED) -> list[str]:
    problems = []
    if iso_test(mu, c, seed):
        problems.append("mutation is isomorphic to the input")
    if side == "right":
        if not relation(c, mu, "geq"):
            problems.append("c >= mu fails")
        if not relation(mu, shift(c, 1), "geq"):
            problems.append("mu >= c[1] fails")
    else:
        if not relation(mu, c, "geq"):
            problems.append("mu >= c fails")
        if not relation(shift(c, -1), mu, "geq"):
            problems.append("c[-1] >= mu fails")
    if n_before != n_after:
        problems.append(f"summand count changed from {n_before} to {n_after}")
    return problems


def replay_word(alg: Algebra, word: Sequence, seed: int = DEFAULT_SEED) -> ProjComplex:
    c = stalk(alg)
    for index, side in word:
        c = mutate(c, int(index), str(side), seed).result
    return c


# --- exploration -----------------------------------------------------------------

def fingerprint(c: ProjComplex) -> tuple:
    table = hom_table(c, c)
    return (c.signature(), tuple(sorted(table.items())))


@dataclass
class Node:
    id: int
    complex: ProjComplex
    fingerprint: tuple
    word: tuple
    certificate: SiltingCertificate
    depth: int


@dataclass(frozen=True)
class Edge:
    source: int
    index: int
    side: str
    target: int
    new_index: int


@dataclass
class MutationGraph:
    algebra: Algebra
    nodes: list[Node] = field(default_factory=list)
    edges: list[Edge] = field(default_factory=list)
    order_cache: dict = field(default_factory=dict)  # (i, j) -> node_i >= node_j
    depth: int = 0
    sides: tuple = SIDES
    seed: int = DEFAULT_SEED

    def find(self, c: ProjComplex, fp: Optional[tuple] = None) -> Optional[int]:
        fp = fingerprint(c) if fp is None else fp
        for node in self.nodes:
            if node.fingerprint == fp and iso_test(node.complex, c, self.seed):
                return node.id
        return None

    def two_term_nodes(self, standard: bool = True) -> list[Node]:
        """Nodes with two adjacent nonzero degrees; ``standard`` pins them to -1, 0."""
        test = in_standard_window if standard else is_two_term
        return [n for n in self.nodes if test(n.complex)]

    def neighbours(self, i: int) -> list[Edge]:
        return [e for e in self.edges if e.source == i]


def _mutation_task(args):
    c, index, side, seed = args
    mu = mutate(c, index, side, seed)
    return mu.result, mu.new_summand


def _run_tasks(tasks: list, jobs: int) -> list:
    if jobs <= 1 or len(tasks) <= 1:
        return [_mutation_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_mutation_task, tasks))


def explore(alg: Algebra, depth: int, sides: Sequence[str] = SIDES, seed: int = DEFAULT_SEED,
            jobs: int = 1, order: bool = True) -> MutationGraph:
    """Breadth-first mutation graph from the stalk complex, up to ``depth`` steps."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    sides = tuple(s for s in SIDES if s in set(sides))
    g = MutationGraph(alg, depth=depth, sides=sides, seed=seed)
    root = stalk(alg)
    g.nodes.append(Node(0, root, fingerprint(root), (), SiltingCertificate(
        "mutation-provenance", "stalk complex", ()), 0))
    frontier = [0]
    for level in range(depth):
        tasks, owners = [], []
        for nid in frontier:
            node = g.nodes[nid]
            n = len(basic_summands(node.complex, seed))
            for index in range(n):
                for side in sides:
                    tasks.append((node.complex, index, side, seed))
                    owners.append((nid, index, side))
        results = _run_tasks(tasks, jobs)
        nxt = []
        for (nid, index, side), (mu, new_summand) in zip(owners, results):
            fp = fingerprint(mu)
            target = g.find(mu, fp)
            if target is not None:
                new_index = _find_index(basic_summands(g.nodes[target].complex, seed), new_summand, seed)
            else:
                new_index = _find_index(basic_summands(mu, seed), new_summand, seed)
                target = len(g.nodes)
                word = g.nodes[nid].word + ((index, side),)
                g.nodes.append(Node(target, mu, fp, word, SiltingCertificate(
                    "mutation-provenance", f"{len(word)} mutations from the stalk complex", word),
                    level + 1))
                nxt.append(target)
            g.edges.append(Edge(nid, index, side, target, new_index))
        log.info("depth %d: %d nodes, %d edges", level + 1, len(g.nodes), len(g.edges))
        frontier = nxt
    if order:
        fill_order_cache(g)
    return g


def fill_order_cache(g: MutationGraph) -> None:
    for a in g.nodes:
        for b in g.nodes:
            if (a.id, b.id) not in g.order_cache:
                g.order_cache[(a.id, b.id)] = relation(a.complex, b.complex, "geq")


def check_edges(g: MutationGraph) -> list[str]:
    """Mutation postconditions and left-inverts-right on every edge."""
    problems = []
    inverse_side = {"right": "left", "left": "right"}
    for e in g.edges:
        c, mu = g.nodes[e.source].complex, g.nodes[e.target].complex
        n = len(basic_summands(c, g.seed))
        m = len(basic_summands(mu, g.seed))
        for p in mutation_postconditions(c, mu, e.side, n, m, g.seed):
            problems.append(f"edge {e}: {p}")
        back = mutate(mu, e.new_index, inverse_side[e.side], g.seed).result
        if not iso_test(back, c, g.seed):
            problems.append(f"edge {e}: inverse mutation does not return")
    return problems


def check_partial_order(g: MutationGraph) -> list[str]:
    problems = []
    oc = g.order_cache
    ids = [n.id for n in g.nodes]
    for a in ids:
        if not oc[(a, a)]:
            problems.append(f"node {a} is not presilting")
        for b in ids:
            if a < b and oc[(a, b)] and oc[(b, a)]:
                problems.append(f"antisymmetry fails for distinct nodes {a}, {b}")
            if oc[(a, b)]:
                for c in ids:
                    if oc[(b, c)] and not oc[(a, c)]:
                        problems.append(f"transitivity fails on {a} >= {b} >= {c}")
    return problems


# --- comparison along reduction ---------------------------------------------------

@dataclass
class PosetReport:
    matching: dict
    unmatched_source: list
    unmatched_target: list
    injective: bool
    edges_preserved: bool
    order_preserved: bool
    problems: list

    @property
    def bijective(self) -> bool:
        return self.injective and not self.unmatched_source and not self.unmatched_target

    @property
    def ok(self) -> bool:
        return self.bijective and self.edges_preserved and self.order_preserved

    def summary(self) -> str:
        return (f"matched {len(self.matching)}, unmatched {len(self.unmatched_source)}/"
                f"{len(self.unmatched_target)}, injective {self.injective}, edges "
                f"{self.edges_preserved}, order {self.order_preserved}")


def poset_compare(g1: MutationGraph, g2: MutationGraph, ctx: ReductionContext) -> PosetReport:
    """Match reductions of g1 nodes against g2 nodes and compare edges and order."""
    if ctx.source != g1.algebra or ctx.target != g2.algebra:
        raise ReductionError("reduction context does not connect the two graphs")
    matching, unmatched1 = {}, []
    for node in g1.nodes:
        red = minimal(ctx.reduce(node.complex))
        hit = g2.find(red)
        if hit is None:
            unmatched1.append(node.id)
        else:
            matching[node.id] = hit
    hits = list(matching.values())
    injective = len(set(hits)) == len(hits)
    unmatched2 = [n.id for n in g2.nodes if n.id not in set(hits)]
    problems = []
    edges2 = {(e.source, e.side, e.target) for e in g2.edges}
    edges_ok = True
    for e in g1.edges:
        if e.source in matching and e.target in matching:
            if (matching[e.source], e.side, matching[e.target]) not in edges2:
                edges_ok = False
                problems.append(f"edge {e} has no image")
    order_ok = True
    for (a, b), val in g1.order_cache.items():
        if a in matching and b in matching:
            other = g2.order_cache.get((matching[a], matching[b]))
            if other is None:
                other = relation(g2.nodes[matching[a]].complex, g2.nodes[matching[b]].complex, "geq")
            if other != val:
                order_ok = False
                problems.append(f"order differs on ({a}, {b})")
    return PosetReport(matching, unmatched1, unmatched2, injective, edges_ok, order_ok, problems)
