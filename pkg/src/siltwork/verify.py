"""Verification suites: module invariants and the acceptance criteria.

Each suite returns a :class:`SuiteResult` whose ``lines`` are byte-stable for
a fixed seed.  Explorations are cached per process so suites can share them.
"""

from __future__ import annotations

import functools
import json
import random
import time
from dataclasses import dataclass, field
from typing import Callable

from .algebra import Algebra, tensor_trivial_extension
from .complexes import ProjComplex, minimal, validate
from .decomposition import DEFAULT_SEED, iso_test
from .generate import random_complex, random_complexes
from .homspaces import HomComplex, hom_dim
from .io import (BUNDLED, bundled_algebra, bundled_path, complex_from_json, complex_to_json,
                 presentation_from_json, presentation_to_json, read_json)
from .lifting import check_round_trip, lift_full, lift_step
from .oracles import oracle_hom_dim, oracle_path_count, oracle_two_term_silting_count
from .reduction import (ReductionError, end_ring_comparison, endo_free_test, kunneth_check,
                        pretilting_tor_check, reduction_context)
from .silting import (MutationGraph, check_edges, check_partial_order, explore, is_presilting,
                      is_pretilting, poset_compare)


@dataclass
class SuiteResult:
    name: str
    ok: bool = True
    lines: list = field(default_factory=list)
    seconds: float = 0.0

    def check(self, cond: bool, message: str) -> bool:
        if not cond:
            self.ok = False
            self.lines.append(f"FAIL {message}")
        return cond

    def note(self, message: str) -> None:
        self.lines.append(message)

    def summary(self) -> str:
        return f"{self.name}: {'pass' if self.ok else 'FAIL'}"


# --- shared fixtures ---------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def algebra(name: str) -> Algebra:
    return bundled_algebra(name)


@functools.lru_cache(maxsize=None)
def tower(name: str, m: int) -> Algebra:
    """``bundled(name) ⊗ k[t]/t^m``; the bundled kA₂ towers are reused."""
    if name == "a2" and m in (2, 3):
        return algebra(f"a2_t{m}")
    if m == 1:
        return algebra(name)
    return tensor_trivial_extension(algebra(name), m, name=f"{name}⊗k[t]/t^{m}")


@functools.lru_cache(maxsize=None)
def graph(name: str, m: int, depth: int, seed: int = DEFAULT_SEED) -> MutationGraph:
    return explore(tower(name, m), depth, seed=seed)


def _timed(fn: Callable[..., SuiteResult]) -> Callable[..., SuiteResult]:
    @functools.wraps(fn)
    def wrapper(*args, **kw):
        t0 = time.perf_counter()
        res = fn(*args, **kw)
        res.seconds = time.perf_counter() - t0
        return res
    return wrapper


# --- suites --------------------------------------------------------------------------

HOM_ORACLE_ALGEBRAS = ("a2", "dual_numbers", "k", "a2_t2", "a2_t3", "brauer_1_1", "brauer_2_1")


@_timed
def suite_hom_oracle(seed: int = DEFAULT_SEED, count: int = 200) -> SuiteResult:
    """hom_dim against the brute-force oracle on random pairs over every bundled algebra."""
    res = SuiteResult("hom-oracle")
    rng = random.Random(seed)
    compared = 0
    for k in range(count):
        alg = algebra(HOM_ORACLE_ALGEBRAS[k % len(HOM_ORACLE_ALGEBRAS)])
        l = random_complex(alg, rng)
        m = random_complex(alg, rng)
        K = HomComplex(l, m)
        for i in range(K.lo - 1, K.hi + 2):
            a, b = hom_dim(l, m, i), oracle_hom_dim(l, m, i).value
            compared += 1
            res.check(a == b, f"complex pair {k} over {alg.name}, degree {i}: {a} != oracle {b}")
    res.note(f"{count} random pairs, {compared} degree comparisons")
    return res


@_timed
def suite_bijection(seed: int = DEFAULT_SEED, depth: int = 3, levels=(1, 2, 3)) -> SuiteResult:
    res = SuiteResult("bijection")
    base = graph("a2", 1, depth, seed)
    for m in levels:
        g = graph("a2", m, depth, seed)
        ctx = reduction_context(g.algebra, base.algebra)
        rep = poset_compare(g, base, ctx)
        res.note(f"m={m}: {len(g.nodes)} nodes; {rep.summary()}")
        res.check(rep.ok, f"m={m}: " + "; ".join(rep.problems[:5]))
        res.check(not rep.unmatched_source and not rep.unmatched_target,
                  f"m={m}: unmatched nodes {rep.unmatched_source} / {rep.unmatched_target}")
    return res


@_timed
def suite_lifting(seed: int = DEFAULT_SEED, depth: int = 3, m: int = 3) -> SuiteResult:
    res = SuiteResult("lifting")
    top = tower("a2", m)
    g1 = explore(top.level_algebra(1), depth, seed=seed)
    gm = graph("a2", m, depth, seed)
    for node in g1.nodes:
        rep = lift_full(node.complex, top, m)
        tag = f"node {node.id}"
        if not res.check(rep.ok, f"{tag}: obstructed"):
            continue
        res.check(check_round_trip(rep, node.complex), f"{tag}: round trip fails")
        res.check(is_presilting(rep.lifted), f"{tag}: lift is not presilting")
        res.check(gm.find(minimal(rep.lifted)) is not None,
                  f"{tag}: lift matches no node of the level-{m} graph")
    res.note(f"{len(g1.nodes)} nodes lifted to level {m}")
    return res


@_timed
def suite_kunneth(seed: int = DEFAULT_SEED, pairs: int = 100, depth: int = 3) -> SuiteResult:
    res = SuiteResult("kunneth")
    g = graph("a2", 2, depth, seed)
    ctx = reduction_context(g.algebra, g.algebra.level_algebra(1))
    for node in g.nodes:
        r1 = kunneth_check(ctx, node.complex, node.complex)
        res.check(r1.ok, f"node {node.id}: {r1.line()}")
        r2 = end_ring_comparison(ctx, node.complex)
        res.check(r2.ok, f"node {node.id}: {r2.line()}")
    cs = random_complexes(g.algebra, 2 * pairs, seed=seed)
    for k in range(pairs):
        r = kunneth_check(ctx, cs[2 * k], cs[2 * k + 1])
        res.check(r.ok, f"random pair {k}: {r.line()}")
    res.note(f"{len(g.nodes)} nodes, {pairs} random pairs over {g.algebra.name}")
    return res


@_timed
def suite_mutation_axioms(seed: int = DEFAULT_SEED, depth: int = 3) -> SuiteResult:
    res = SuiteResult("mutation-axioms")
    for name, m, d in (("a2", 1, depth), ("a2", 2, depth), ("dual_numbers", 1, depth),
                       ("brauer_1_1", 1, 2)):
        g = graph(name, m, d, seed)
        problems = check_edges(g) + check_partial_order(g)
        for p in problems[:10]:
            res.check(False, f"{g.algebra.name}: {p}")
        res.note(f"{g.algebra.name} depth {d}: {len(g.nodes)} nodes, {len(g.edges)} edges, "
                 f"{len(problems)} problems")
    return res


TWO_TERM_EXPECTED = {"a2": 5, "dual_numbers": 2, "k": 2}


@_timed
def suite_two_term_counts(seed: int = DEFAULT_SEED, depth: int = 3) -> SuiteResult:
    res = SuiteResult("two-term-counts")
    values = {}
    for name, m in (("a2", 1), ("dual_numbers", 1), ("k", 1), ("a2", 2)):
        g = graph(name, m, depth, seed)
        nodes = g.two_term_nodes()
        main = sorted(n.complex.k0_class() for n in nodes)
        orc = oracle_two_term_silting_count(g.algebra, seed=seed)
        label = f"{name}" + (f"⊗t^{m}" if m > 1 else "")
        values[label] = len(main)
        res.note(f"{label}: exploration {len(main)}, oracle {orc.value} ({orc.method})")
        res.check(len(main) == orc.value, f"{label}: counts differ")
        res.check(main == sorted(orc.witnesses), f"{label}: g-vectors differ")
        if name in TWO_TERM_EXPECTED and m == 1:
            res.check(orc.value == TWO_TERM_EXPECTED[name],
                      f"{label}: oracle {orc.value}, expected {TWO_TERM_EXPECTED[name]}")
    res.check(values["a2⊗t^2"] == values["a2"], "tensor extension changes the count")
    return res


@_timed
def suite_brauer(seed: int = DEFAULT_SEED, bound: int = 2, depth: int = 2) -> SuiteResult:
    res = SuiteResult("brauer")
    counts = {}
    for name in ("brauer_1_1", "brauer_2_1"):
        alg = algebra(name)
        orc = oracle_two_term_silting_count(alg, bound=bound, seed=seed, max_dim=alg.dim)
        counts[name] = orc
        res.note(f"{name} (dim {alg.dim}): {orc.value} two-term silting complexes with "
                 f"g-vector in [-{bound}, {bound}]^3")
    a, b = counts["brauer_1_1"], counts["brauer_2_1"]
    res.check(a.value == b.value, f"counts differ: {a.value} vs {b.value}")
    res.check(sorted(a.witnesses) == sorted(b.witnesses), "g-vector sets differ")
    g = graph("brauer_1_1", 1, depth, seed)
    bad = [n.id for n in g.nodes if not is_pretilting(n.complex)]
    res.check(not bad, f"nodes not pretilting: {bad}")
    res.note(f"brauer_1_1 depth {depth}: {len(g.nodes)} nodes, all pretilting: {not bad}")
    return res


@_timed
def suite_tor_endo_free(seed: int = DEFAULT_SEED, depth: int = 3) -> SuiteResult:
    res = SuiteResult("tor-endo-free")
    for m in (2, 3):
        g = graph("a2", m, depth, seed)
        alg = g.algebra
        checked = 0
        for node in g.nodes:
            if not is_pretilting(node.complex):
                continue
            checked += 1
            for n in range(1, m):
                ctx = reduction_context(alg, alg.level_algebra(n))
                rep = pretilting_tor_check(ctx, node.complex)
                res.check(rep.ok, f"m={m} n={n} node {node.id}: {rep.line()}")
            try:
                ef = endo_free_test(reduction_context(alg, alg.level_algebra(1)), node.complex)
                res.check(ef.free == ef.t_free, f"m={m} node {node.id}: endo-free mismatch")
            except ReductionError as exc:
                res.check(False, f"m={m} node {node.id}: {exc}")
        res.note(f"m={m}: {checked} pretilting nodes checked")
    return res


OBSTRUCTION_TOWERS = (("k", 3), ("a2", 3), ("dual_numbers", 2))


@_timed
def suite_obstruction(seed: int = DEFAULT_SEED, count: int = 100) -> SuiteResult:
    res = SuiteResult("obstruction")
    rng = random.Random(seed)
    tally = {"lifted": 0, "obstructed": 0}
    seen = 0
    while seen < count:
        name, m = OBSTRUCTION_TOWERS[seen % len(OBSTRUCTION_TOWERS)]
        top = tower(name, m)
        n = rng.randint(1, m - 1)
        low, high = top.level_algebra(n), top.level_algebra(n + 1)
        c = random_complex(low, rng, max_summands=3)
        if is_presilting(c):
            continue
        seen += 1
        rep = lift_step(c, reduction_context(high, low))
        tag = f"complex {seen} over level {n} of {top.name}"
        if rep.outcome == "lifted":
            validate(rep.lifted)
            ctx = reduction_context(high, low)
            res.check(bool(iso_test(ctx.reduce(rep.lifted), c, seed)), f"{tag}: lift does not reduce back")
        elif rep.outcome == "obstructed":
            ob = rep.obstruction
            res.check(ob.is_cocycle(), f"{tag}: obstruction is not a cocycle")
            res.check(ob.is_unsolvable(), f"{tag}: obstruction is solvable")
            res.check(ob.h2_dim > 0, f"{tag}: obstruction reported with H^2 = 0")
        else:
            res.check(False, f"{tag}: unexpected outcome {rep.outcome!r}")
        tally[rep.outcome] = tally.get(rep.outcome, 0) + 1
    res.note(f"{count} non-presilting complexes: {tally['lifted']} lifted, "
             f"{tally['obstructed']} obstructed")
    return res


@_timed
def suite_roundtrip(seed: int = DEFAULT_SEED) -> SuiteResult:
    """Bundled files parse, serialize and re-parse to identical structures."""
    res = SuiteResult("roundtrip")
    for name in BUNDLED:
        doc = read_json(bundled_path(name))
        pres, tp = presentation_from_json(doc)
        again = presentation_to_json(pres, tp, doc.get("name", ""))
        res.check(presentation_from_json(again) == (pres, tp), f"{name}: presentation differs")
        alg = algebra(name)
        res.check(alg.spec == again, f"{name}: stored spec differs")
        for c in random_complexes(alg, 5, seed=seed):
            d = complex_to_json(c, f"bundled:{name}")
            c2 = complex_from_json(json.loads(json.dumps(d)), algebra=alg)
            res.check(c2.terms == c.terms and c2.diffs == c.diffs, f"{name}: complex differs")
            res.check(complex_to_json(c2, f"bundled:{name}") == d, f"{name}: JSON differs")
    res.note(f"{len(BUNDLED)} bundled algebras")
    return res


@_timed
def suite_path_count(seed: int = DEFAULT_SEED) -> SuiteResult:
    res = SuiteResult("path-count")
    for name in BUNDLED:
        pres, tp = presentation_from_json(read_json(bundled_path(name)))
        orc = oracle_path_count(pres).value * (tp or 1)
        alg = algebra(name)
        res.check(alg.dim == orc, f"{name}: dim {alg.dim}, oracle {orc}")
        res.note(f"{name}: dim {alg.dim}")
    return res


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "hom-oracle": suite_hom_oracle,
    "bijection": suite_bijection,
    "lifting": suite_lifting,
    "kunneth": suite_kunneth,
    "mutation-axioms": suite_mutation_axioms,
    "two-term-counts": suite_two_term_counts,
    "brauer": suite_brauer,
    "tor-endo-free": suite_tor_endo_free,
    "obstruction": suite_obstruction,
    "roundtrip": suite_roundtrip,
    "path-count": suite_path_count,
}

# acceptance criterion number -> suite
CRITERIA = {1: "hom-oracle", 2: "bijection", 3: "lifting", 4: "kunneth", 5: "mutation-axioms",
            6: "two-term-counts", 7: "brauer", 8: "tor-endo-free", 9: "obstruction"}


def run_suite(name: str, seed: int = DEFAULT_SEED, **kw) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; available: {', '.join(SUITES)}")
    return SUITES[name](seed=seed, **kw)
