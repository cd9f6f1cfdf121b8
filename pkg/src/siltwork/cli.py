"""Command-line interface: ``siltwork <command> ...``.

Exit codes: 0 success, 1 a check or verification failed, 2 bad input or a
violated precondition.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional

from . import io
from .complexes import ComplexError, minimize, validate
from .decomposition import DEFAULT_SEED, decompose
from .homspaces import RELATIONS, hom_table, relation
from .lifting import LiftingError, check_round_trip, lift_full, lift_module, simple_module
from .reduction import ReductionError, endo_free_test, reduction_context
from .silting import SIDES, MutationError, certify_silting, explore, mutate, poset_compare


class CommandFailed(Exception):
    """A check ran to completion and came out negative."""


def _out(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _write_or_print(doc: dict, path: Optional[str]) -> None:
    text = io.write_json(doc, path)
    if path is None:
        _out(text)
    else:
        _out(f"wrote {path}")


def _algebra_ref(args_path: str) -> str:
    return args_path if args_path.startswith("bundled:") else str(Path(args_path).resolve())


def _load_algebra(ref: str):
    return io.resolve_algebra(ref)


def _load_complex(path: str):
    return io.load_complex(path)


def _complex_doc(c, like_path: str) -> dict:
    """Serialize c, pointing at the same algebra reference as the input file."""
    src = io.read_json(like_path)
    ref = src.get("algebra")
    if isinstance(ref, str) and not ref.startswith("bundled:"):
        ref = str((Path(like_path).parent / ref).resolve()) if not Path(ref).is_absolute() else ref
    return io.complex_to_json(c, ref)


# --- algebra -----------------------------------------------------------------------

def cmd_algebra_build(args) -> None:
    alg = _load_algebra(args.path)
    lines = [f"algebra {alg.name or args.path}", f"dim {alg.dim}",
             f"vertices {alg.n_vertices}, arrows {len(alg.arrows)}",
             f"radical length {alg.loewy_length()}"]
    for (j, i), basis in sorted(alg.block_basis.items()):
        lines.append(f"  e{alg.vertices[j]} A e{alg.vertices[i]}: {len(basis)}")
    if not alg.has_t or not alg.t:
        lines.append("t absent")
    else:
        lines.append(f"t nilpotent of order {alg.t_nilpotency}; "
                     f"{'free' if alg.is_t_free() else 'NOT free'} over k[t]/t^{alg.t_nilpotency}")
    spec = alg.spec or {}
    lines.append(f"NOTE: computed kQ/(I + J^{spec.get('nilpotency_bound', '?')}); whether this "
                 "bound is large enough for the intended algebra is not checked")
    _out("\n".join(lines))


def cmd_algebra_quotient(args) -> None:
    src = io.bundled_path(args.path.split(":", 1)[1]) if args.path.startswith("bundled:") \
        else args.path
    doc = io.quotient_spec(io.read_json(src), args.level)
    alg = io.algebra_from_json(doc)
    _write_or_print(doc, args.out)
    _out(f"dim {alg.dim}")


# --- complexes -----------------------------------------------------------------------

def cmd_complex_check(args) -> None:
    c = _load_complex(args.path)
    rep = validate(c)
    sup = c.support()
    _out(f"valid: d∘d = 0\nsupport {sup}\nminimal {rep.minimal}")
    if rep.nonminimal_at is not None:
        _out(f"non-radical entry at (degree, row, column) {rep.nonminimal_at}")
    _out(f"K0 class {list(c.k0_class())}")
    cert = certify_silting(c, seed=args.seed)
    _out(f"silting: {cert.level if cert else 'no (' + cert.reason + ')'}")


def cmd_complex_minimize(args) -> None:
    c = _load_complex(args.path)
    model = minimize(c)
    _out(f"eliminated {sum(len(v) for v in c.terms.values()) - sum(len(v) for v in model.complex.terms.values())} summands")
    _write_or_print(_complex_doc(model.complex, args.path), args.out)


def cmd_complex_decompose(args) -> None:
    c = _load_complex(args.path)
    parts = decompose(c, args.seed)
    _out(f"{len(parts)} indecomposable summands")
    for k, p in enumerate(parts):
        terms = ", ".join(f"{i}: {p.term_str(i)}" for i in p.terms)
        _out(f"  [{k}] {terms}")
        if args.out_dir:
            Path(args.out_dir).mkdir(parents=True, exist_ok=True)
            io.write_json(_complex_doc(p, args.path), Path(args.out_dir) / f"summand_{k}.json")


# --- Hom and relations -------------------------------------------------------------

def _table_text(table: dict) -> str:
    return "\n".join(f"  H^{i} = {d}" for i, d in sorted(table.items()))


def cmd_hom(args) -> None:
    l, m = _load_complex(args.l), _load_complex(args.m)
    table = hom_table(l, m)
    if args.degree is not None:
        _out(str(table.get(args.degree, 0)))
    else:
        _out(f"dim Hom(L, M[i]):\n{_table_text(table) or '  all zero'}")


def cmd_relation(args) -> None:
    l, m = _load_complex(args.l), _load_complex(args.m)
    table = hom_table(l, m)
    verdict = relation(l, m, args.which, table=table)
    _out(f"{args.which}: {str(verdict).lower()}\n{_table_text(table)}")


# --- reduction, mutation, exploration ------------------------------------------------

def cmd_reduce(args) -> None:
    c = _load_complex(args.path)
    target = c.algebra.root.level_algebra(args.level)
    red = reduction_context(c.algebra, target).reduce(c)
    _write_or_print(_complex_doc(red, args.path), args.out)


def cmd_mutate(args) -> None:
    c = _load_complex(args.path)
    mu = mutate(c, args.index, args.side, args.seed)
    _out(f"{args.side} mutation at summand {args.index}: new summand index {mu.new_index}")
    _write_or_print(_complex_doc(mu.result, args.path), args.out)


def cmd_explore(args) -> None:
    alg = _load_algebra(args.algebra)
    sides = SIDES if args.sides == "both" else (args.sides,)
    g = explore(alg, args.depth, sides, args.seed, jobs=args.jobs)
    ref = _algebra_ref(args.algebra)
    _out(f"{len(g.nodes)} nodes, {len(g.edges)} edges, "
         f"{len(g.two_term_nodes())} in degrees -1..0")
    if args.out:
        io.write_json(io.graph_to_json(g, ref), args.out)
        _out(f"wrote {args.out}")
    if args.dot:
        Path(args.dot).write_text(io.graph_to_dot(g), encoding="utf-8")
        _out(f"wrote {args.dot}")


def cmd_compare_posets(args) -> None:
    g1, g2 = io.load_graph(args.graph1), io.load_graph(args.graph2)
    try:
        ctx = reduction_context(g1.algebra, g2.algebra)
    except ReductionError as exc:
        raise ReductionError(f"graphs are not over compatible algebras: {exc}") from None
    rep = poset_compare(g1, g2, ctx)
    _out(rep.summary())
    for p in rep.problems:
        _out(f"  {p}")
    if not rep.ok:
        raise CommandFailed("poset comparison failed")


# --- lifting -------------------------------------------------------------------------

def cmd_lift(args) -> None:
    c = _load_complex(args.path)
    tower = _load_algebra(args.tower)
    rep = lift_full(c, tower, args.level, require=False)
    doc = {"format_version": io.FORMAT_VERSION, "outcome": rep.outcome, "steps": rep.steps}
    if rep.ok:
        doc["round_trip"] = check_round_trip(rep, c)
        doc["lifted"] = io.complex_to_json(rep.lifted, _algebra_ref(args.tower))
    else:
        ob = rep.obstruction
        doc["obstruction"] = {"level": ob.level, "h2_dim": ob.h2_dim,
                              "cocycle": ob.is_cocycle(), "unsolvable": ob.is_unsolvable()}
    _write_or_print(doc, args.out)
    if not rep.ok:
        raise CommandFailed(f"obstructed at level {rep.obstruction.level}")
    if not doc["round_trip"]:
        raise CommandFailed("round trip failed")


def cmd_lift_module(args) -> None:
    tower = _load_algebra(args.tower)
    base = tower.root.level_algebra(1)
    if args.module:
        mod = io.module_from_json(io.read_json(args.module), base)
    else:
        mod = simple_module(base, base.vertices.index(args.simple))
    rep = lift_module(mod, args.depth, tower, args.level)
    _out(f"outcome {rep.outcome}\nmodule dim over level 1: {rep.base_dim}\n"
         f"lifted module dim: {rep.module_dim}\nreduction matches: {rep.reduction_matches}\n"
         f"Tor over the algebra: {rep.tor_over_algebra}\nTor over k[t]: {rep.tor_over_base}\n"
         f"caveat: {rep.caveat}")
    if not rep.ok:
        raise CommandFailed("module lift failed")


def cmd_endo_free(args) -> None:
    c = _load_complex(args.path)
    alg = c.algebra
    ef = endo_free_test(reduction_context(alg, alg.root.level_algebra(1)), c)
    _out(f"End(T) free over k[t]/t^{alg.t_nilpotency}: {str(ef.free).lower()} "
         f"(dim Hom(T̄, T̄[-1]) = {ef.hom_minus_one})")


def cmd_verify(args) -> None:
    from .verify import SUITES, run_suite
    names = list(SUITES) if args.suite == "all" else [args.suite]
    if args.suite != "all" and args.suite not in SUITES:
        raise KeyError(f"unknown suite {args.suite!r}; available: {', '.join(SUITES)}, all")
    failed = []
    for name in names:
        res = run_suite(name, seed=args.seed)
        _out(res.summary())
        for line in res.lines:
            _out(f"  {line}")
        if not res.ok:
            failed.append(name)
    if failed:
        raise CommandFailed(f"failed suites: {', '.join(failed)}")


# --- parser --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="siltwork", description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=DEFAULT_SEED,
                   help=f"seed for every randomized step (default {DEFAULT_SEED})")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for exploration")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    alg = sub.add_parser("algebra", help="build or truncate an algebra")
    asub = alg.add_subparsers(dest="action", required=True)
    b = asub.add_parser("build", help="report on an algebra spec")
    b.add_argument("path")
    b.set_defaults(func=cmd_algebra_build)
    q = asub.add_parser("quotient", help="spec of A / t^n A")
    q.add_argument("path")
    q.add_argument("--level", type=int, required=True)
    q.add_argument("--out")
    q.set_defaults(func=cmd_algebra_quotient)

    cx = sub.add_parser("complex", help="inspect a complex")
    csub = cx.add_subparsers(dest="action", required=True)
    for name, fn in (("check", cmd_complex_check), ("minimize", cmd_complex_minimize),
                     ("decompose", cmd_complex_decompose)):
        s = csub.add_parser(name)
        s.add_argument("path")
        if name == "minimize":
            s.add_argument("--out")
        if name == "decompose":
            s.add_argument("--out-dir")
        s.set_defaults(func=fn)

    h = sub.add_parser("hom", help="dim Hom(L, M[i])")
    h.add_argument("l")
    h.add_argument("m")
    h.add_argument("--degree", type=int)
    h.set_defaults(func=cmd_hom)

    r = sub.add_parser("relation", help="geq / teq / perp between complexes")
    r.add_argument("l")
    r.add_argument("m")
    r.add_argument("which", choices=RELATIONS)
    r.set_defaults(func=cmd_relation)

    rd = sub.add_parser("reduce", help="reduce a complex to a lower level")
    rd.add_argument("path")
    rd.add_argument("--level", type=int, required=True)
    rd.add_argument("--out")
    rd.set_defaults(func=cmd_reduce)

    mu = sub.add_parser("mutate", help="irreducible mutation at one summand")
    mu.add_argument("path")
    mu.add_argument("--index", type=int, required=True)
    mu.add_argument("--side", choices=SIDES, default="right")
    mu.add_argument("--out")
    mu.set_defaults(func=cmd_mutate)

    ex = sub.add_parser("explore", help="breadth-first mutation graph")
    ex.add_argument("algebra", help="spec path or bundled:<name>")
    ex.add_argument("--depth", type=int, default=2)
    ex.add_argument("--sides", choices=("both",) + SIDES, default="both")
    ex.add_argument("--out")
    ex.add_argument("--dot")
    ex.set_defaults(func=cmd_explore)

    lf = sub.add_parser("lift", help="lift a complex up a t-adic tower")
    lf.add_argument("path")
    lf.add_argument("--tower", required=True)
    lf.add_argument("--level", type=int, required=True)
    lf.add_argument("--out")
    lf.set_defaults(func=cmd_lift)

    lm = sub.add_parser("lift-module", help="lift a module through its resolution")
    lm.add_argument("--tower", required=True)
    grp = lm.add_mutually_exclusive_group(required=True)
    grp.add_argument("--simple", help="vertex name of a simple module")
    grp.add_argument("--module", help="module JSON file")
    lm.add_argument("--depth", type=int, default=3)
    lm.add_argument("--level", type=int, required=True)
    lm.set_defaults(func=cmd_lift_module)

    cp = sub.add_parser("compare-posets", help="match two graphs along reduction")
    cp.add_argument("graph1")
    cp.add_argument("graph2")
    cp.set_defaults(func=cmd_compare_posets)

    ef = sub.add_parser("endo-free", help="is End(T) free over k[t]/t^m")
    ef.add_argument("path")
    ef.set_defaults(func=cmd_endo_free)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", help="suite name or 'all'")
    v.set_defaults(func=cmd_verify)
    return p


INPUT_ERRORS = (io.FormatError, ReductionError, LiftingError, MutationError, ComplexError,
                KeyError, FileNotFoundError, ValueError)


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except CommandFailed as exc:
        sys.stderr.write(f"failed: {exc}\n")
        return 1
    except INPUT_ERRORS as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        sys.stderr.write(f"error: {msg}\n")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
