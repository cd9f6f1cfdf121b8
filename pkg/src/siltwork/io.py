"""JSON interchange for algebras, complexes, mutation graphs and reports.

Every document carries ``"format_version": 1``.  Coefficients are written
as strings so rationals survive exactly.  A complex names its algebra
either inline or by a file path (resolved relative to the complex file),
plus an optional ``level`` selecting ``A / t^level A``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Optional, Union

from .algebra import (Algebra, AlgebraPresentation, PathExpr, Quiver, Term, build_algebra,
                      tensor_trivial_extension)
from .complexes import ProjComplex
from .linalg import Field

FORMAT_VERSION = 1
BUNDLED = ("a2", "a2_t2", "a2_t3", "dual_numbers", "k", "brauer_1_1", "brauer_2_1")


class FormatError(ValueError):
    """Malformed input; the message names the offending location."""


def _need(doc: dict, key: str, where: str):
    if key not in doc:
        raise FormatError(f"{where}: missing key {key!r}")
    return doc[key]


def _check_version(doc: dict, where: str) -> None:
    v = doc.get("format_version", FORMAT_VERSION)
    if v != FORMAT_VERSION:
        raise FormatError(f"{where}: unsupported format_version {v}")


# --- algebras ---------------------------------------------------------------

def field_from_json(doc: dict, where: str = "field") -> Field:
    kind = _need(doc, "kind", where)
    if kind == "Q":
        return Field(0)
    if kind == "Fp":
        try:
            return Field(int(_need(doc, "p", where)))
        except ValueError as exc:
            raise FormatError(f"{where}: {exc}") from None
    raise FormatError(f"{where}: unknown field kind {kind!r}")


def field_to_json(fld: Field) -> dict:
    return {"kind": "Q"} if not fld.p else {"kind": "Fp", "p": fld.p}


def _term_from_json(t: dict, where: str) -> Term:
    if not isinstance(t, dict):
        raise FormatError(f"{where}: expected an object")
    path = tuple(t.get("path", ()))
    vertex = t.get("vertex")
    if not path and vertex is None:
        raise FormatError(f"{where}: an empty path needs a vertex")
    return Term(str(t.get("coeff", "1")), path, vertex, int(t.get("tpow", 0)))


def _term_to_json(t: Term) -> dict:
    out: dict = {"coeff": str(t.coeff), "path": list(t.path)}
    if t.vertex is not None:
        out["vertex"] = t.vertex
    if t.tpow:
        out["tpow"] = t.tpow
    return out


def _expr_from_json(terms: list, where: str) -> PathExpr:
    if not isinstance(terms, list) or not terms:
        raise FormatError(f"{where}: expected a non-empty list of terms")
    return PathExpr(tuple(_term_from_json(t, f"{where}[{k}]") for k, t in enumerate(terms)))


def presentation_from_json(doc: dict) -> tuple[AlgebraPresentation, Optional[int]]:
    """Presentation plus the optional ``tensor_power``."""
    _check_version(doc, "algebra")
    fld = field_from_json(_need(doc, "field", "algebra"))
    vertices = tuple(str(v) for v in _need(doc, "vertices", "algebra"))
    arrows = []
    for k, a in enumerate(doc.get("arrows", [])):
        where = f"algebra.arrows[{k}]"
        arrows.append((_need(a, "name", where), _need(a, "src", where), _need(a, "tgt", where)))
    try:
        quiver = Quiver(vertices, tuple(arrows))
    except ValueError as exc:
        raise FormatError(f"algebra: {exc}") from None
    rels = tuple(_expr_from_json(r, f"algebra.relations[{k}]")
                 for k, r in enumerate(doc.get("relations", [])))
    bound = _need(doc, "nilpotency_bound", "algebra")
    if not isinstance(bound, int):
        raise FormatError("algebra.nilpotency_bound: expected an integer")
    central = doc.get("central")
    central = _expr_from_json(central, "algebra.central") if central else None
    tp = doc.get("tensor_power")
    if tp is not None and (not isinstance(tp, int) or tp < 1):
        raise FormatError("algebra.tensor_power: expected a positive integer")
    return AlgebraPresentation(fld, quiver, rels, bound, central), tp


def presentation_to_json(pres: AlgebraPresentation, tensor_power: Optional[int] = None,
                         name: str = "") -> dict:
    out: dict = {"format_version": FORMAT_VERSION}
    if name:
        out["name"] = name
    out["field"] = field_to_json(pres.field)
    out["vertices"] = list(pres.quiver.vertices)
    out["arrows"] = [{"name": n, "src": s, "tgt": t} for n, s, t in pres.quiver.arrows]
    out["relations"] = [[_term_to_json(t) for t in r.terms] for r in pres.relations]
    out["nilpotency_bound"] = pres.nilpotency_bound
    if pres.central_element is not None:
        out["central"] = [_term_to_json(t) for t in pres.central_element.terms]
    if tensor_power is not None:
        out["tensor_power"] = tensor_power
    return out


def algebra_from_json(doc: dict) -> Algebra:
    pres, tp = presentation_from_json(doc)
    name = str(doc.get("name", ""))
    try:
        alg = build_algebra(pres, name=name if tp is None else f"{name}_base")
        if tp is not None:
            alg = tensor_trivial_extension(alg, tp, name=name)
    except ValueError as exc:
        raise FormatError(f"algebra: {exc}") from None
    alg.spec = presentation_to_json(pres, tp, name)
    return alg


def read_json(path: Union[str, Path]) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def write_json(doc: Any, path: Union[str, Path, None] = None) -> str:
    text = json.dumps(doc, indent=2, sort_keys=False, ensure_ascii=False) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def load_algebra(path: Union[str, Path]) -> Algebra:
    return algebra_from_json(read_json(path))


def bundled_path(name: str) -> Path:
    if name not in BUNDLED:
        raise FormatError(f"no bundled example {name!r}; available: {', '.join(BUNDLED)}")
    return Path(str(resources.files("siltwork") / "data" / f"{name}.json"))


def bundled_algebra(name: str) -> Algebra:
    return load_algebra(bundled_path(name))


def resolve_algebra(ref: Union[str, Path], base_dir: Optional[Path] = None) -> Algebra:
    """A file path, or ``bundled:<name>``."""
    ref = str(ref)
    if ref.startswith("bundled:"):
        return bundled_algebra(ref.split(":", 1)[1])
    p = Path(ref)
    if not p.is_absolute() and base_dir is not None and not p.exists():
        p = base_dir / p
    return load_algebra(p)


# --- elements and complexes ---------------------------------------------------

def element_to_json(alg: Algebra, x: dict) -> list:
    out = []
    for b in sorted(x):
        lab = alg.labels[b]
        term: dict = {"coeff": str(x[b]), "path": [alg.arrows[a][0] for a in lab.arrows]}
        if not lab.arrows:
            term["vertex"] = alg.vertices[lab.src]
        if lab.tpow:
            term["tpow"] = lab.tpow
        out.append(term)
    return out


def element_from_json(alg: Algebra, terms: list, where: str = "element") -> dict:
    if not isinstance(terms, list):
        raise FormatError(f"{where}: expected a list of terms")
    names = {a[0]: i for i, a in enumerate(alg.arrows)}
    out: dict = {}
    for k, t in enumerate(terms):
        w = f"{where}[{k}]"
        try:
            path = [names[a] for a in t.get("path", [])]
            vertex = t.get("vertex")
            v = alg.vertices.index(vertex) if vertex is not None else None
        except (KeyError, ValueError) as exc:
            raise FormatError(f"{w}: unknown arrow or vertex {exc}") from None
        try:
            el = alg.path_element(path, v)
            tp = int(t.get("tpow", 0))
            if tp:
                el = alg.mul(alg.t_power(tp), el)
            out = alg.add(out, alg.scale(el, alg.field(str(t.get("coeff", "1")))))
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"{w}: {exc}") from None
    return out


def complex_to_json(c: ProjComplex, algebra: Union[str, dict, None] = None,
                    level: Optional[int] = None) -> dict:
    alg = c.algebra
    if algebra is None:
        algebra = getattr(alg.root, "spec", None)
        if algebra is None:
            raise FormatError("complex: algebra has no recorded spec; pass a reference")
    out: dict = {"format_version": FORMAT_VERSION, "algebra": algebra}
    if level is None and alg.has_t and alg is not alg.root:
        level = alg.t_nilpotency
    if level is not None:
        out["level"] = level
    out["terms"] = {str(i): [alg.vertices[v] for v in vs] for i, vs in c.terms.items()}
    out["differentials"] = {str(i): [[element_to_json(alg, x) for x in row] for row in d]
                            for i, d in c.diffs.items()}
    return out


def complex_from_json(doc: dict, base_dir: Optional[Path] = None,
                      algebra: Optional[Algebra] = None) -> ProjComplex:
    from .complexes import ComplexError, validate
    _check_version(doc, "complex")
    if algebra is None:
        ref = _need(doc, "algebra", "complex")
        algebra = algebra_from_json(ref) if isinstance(ref, dict) else resolve_algebra(ref, base_dir)
    level = doc.get("level")
    if level is not None and level != algebra.t_nilpotency:
        if not algebra.has_t:
            raise FormatError("complex.level: algebra has no central element")
        try:
            algebra = algebra.level_algebra(int(level))
        except ValueError as exc:
            raise FormatError(f"complex.level: {exc}") from None
    terms = {}
    for deg, names in _need(doc, "terms", "complex").items():
        try:
            terms[int(deg)] = tuple(algebra.vertices.index(v) for v in names)
        except ValueError:
            raise FormatError(f"complex.terms[{deg}]: unknown vertex in {names}") from None
    diffs = {}
    for deg, rows in doc.get("differentials", {}).items():
        where = f"complex.differentials[{deg}]"
        if not isinstance(rows, list):
            raise FormatError(f"{where}: expected a matrix")
        diffs[int(deg)] = [[element_from_json(algebra, x, f"{where}[{r}][{s}]")
                            for s, x in enumerate(row)] for r, row in enumerate(rows)]
    try:
        c = ProjComplex(algebra, terms, diffs)
        validate(c)
    except (ComplexError, ValueError) as exc:
        raise FormatError(f"complex: {exc}") from None
    return c


def load_complex(path: Union[str, Path], algebra: Optional[Algebra] = None) -> ProjComplex:
    path = Path(path)
    return complex_from_json(read_json(path), path.parent, algebra)


# --- graphs -------------------------------------------------------------------

def graph_to_json(g, algebra: Union[str, dict, None] = None) -> dict:
    ref = algebra if algebra is not None else getattr(g.algebra.root, "spec", None)
    nodes = []
    for n in g.nodes:
        cert = n.certificate
        nodes.append({
            "id": n.id,
            "depth": n.depth,
            "word": [list(w) for w in n.word],
            "certificate": getattr(cert, "level", None),
            "fingerprint": _fingerprint_label(n.fingerprint),
            "complex": complex_to_json(n.complex, ref),
        })
    edges = [{"source": e.source, "index": e.index, "side": e.side, "target": e.target,
              "new_index": e.new_index} for e in g.edges]
    order = [[i, j, bool(v)] for (i, j), v in sorted(g.order_cache.items())]
    return {"format_version": FORMAT_VERSION, "algebra": ref, "depth": g.depth,
            "sides": list(g.sides), "seed": g.seed, "nodes": nodes, "edges": edges,
            "order": order}


def graph_from_json(doc: dict, base_dir: Optional[Path] = None):
    from .silting import Edge, MutationGraph, Node, fingerprint
    from .silting import SiltingCertificate
    _check_version(doc, "graph")
    ref = _need(doc, "algebra", "graph")
    alg = algebra_from_json(ref) if isinstance(ref, dict) else resolve_algebra(ref, base_dir)
    g = MutationGraph(alg, depth=int(doc.get("depth", 0)), sides=tuple(doc.get("sides", ())),
                      seed=int(doc.get("seed", 0)))
    for k, nd in enumerate(_need(doc, "nodes", "graph")):
        c = complex_from_json(nd["complex"], base_dir, alg)
        word = tuple(tuple(w) for w in nd.get("word", []))
        cert = SiltingCertificate(nd["certificate"], word=word) if nd.get("certificate") else None
        g.nodes.append(Node(int(nd.get("id", k)), c, fingerprint(c), word, cert,
                            int(nd.get("depth", 0))))
    for e in doc.get("edges", []):
        g.edges.append(Edge(e["source"], e["index"], e["side"], e["target"], e.get("new_index")))
    for i, j, v in doc.get("order", []):
        g.order_cache[(i, j)] = bool(v)
    return g


def load_graph(path: Union[str, Path]):
    path = Path(path)
    return graph_from_json(read_json(path), path.parent)


def _fingerprint_label(fp) -> str:
    """Readable fingerprint: term signature and the self-Hom table."""
    sig, table = fp
    homs = ",".join(f"{i}:{d}" for i, d in table)
    return f"{sig} hom[{homs}]"


def _node_label(g, n) -> str:
    parts = [f"{i}:{n.complex.term_str(i)}" for i in n.complex.terms]
    cert = getattr(n.certificate, "level", "none")
    homs = ",".join(f"{i}:{d}" for i, d in n.fingerprint[1])
    return f"#{n.id} " + " | ".join(parts) + f"\\nhom[{homs}]\\n{cert}"


def graph_to_dot(g) -> str:
    lines = ["digraph mutations {", "  node [shape=box, fontname=monospace];"]
    for n in g.nodes:
        lines.append(f'  n{n.id} [label="{_node_label(g, n)}"];')
    for e in g.edges:
        lines.append(f'  n{e.source} -> n{e.target} [label="{e.index},{e.side}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# --- quotients and modules --------------------------------------------------------

def quotient_spec(doc: dict, n: int) -> dict:
    """Spec of ``A / t^n A`` for a spec carrying a tensor power or a central element."""
    pres, tp = presentation_from_json(doc)
    name = f"{doc.get('name', 'algebra')}_level{n}"
    if tp is not None:
        if not 1 <= n <= tp:
            raise FormatError(f"level {n} outside 1..{tp}")
        return presentation_to_json(pres, n, name)
    if pres.central_element is None:
        raise FormatError("algebra has no central element to quotient by")
    # expand central^n and split it into parallel pieces, one relation each
    power = [((), None, Fraction(1))]
    for _ in range(n):
        power = [(ta.path + path, ta.vertex if not ta.path and not path else None,
                  Fraction(str(ta.coeff)) * coeff)
                 for ta in pres.central_element.terms for path, vertex, coeff in power
                 if _composable(pres.quiver, ta, path, vertex)]
    groups: dict = {}
    for path, vertex, coeff in power:
        groups.setdefault(_ends(pres.quiver, path, vertex), []).append(
            Term(str(coeff), path, vertex))
    rels = pres.relations + tuple(PathExpr(tuple(g)) for g in groups.values())
    return presentation_to_json(AlgebraPresentation(pres.field, pres.quiver, rels,
                                                    pres.nilpotency_bound,
                                                    pres.central_element), None, name)


def _ends(q: Quiver, path: tuple, vertex) -> tuple:
    if not path:
        return (vertex, vertex)
    arrows = {a[0]: a for a in q.arrows}
    return (arrows[path[-1]][1], arrows[path[0]][2])


def _composable(q: Quiver, ta: Term, path: tuple, vertex) -> bool:
    """Whether ``ta`` times the path (or the empty product) is a path."""
    if not path and vertex is None:
        return True
    return _ends(q, ta.path, ta.vertex)[0] == _ends(q, path, vertex)[1]


def module_from_json(doc: dict, algebra: Algebra):
    from .lifting import ModuleData
    _check_version(doc, "module")
    dims_doc = _need(doc, "dims", "module")
    dims = tuple(int(dims_doc.get(v, 0)) for v in algebra.vertices)
    arrows = {}
    for name, s, t in algebra.arrows:
        mat = doc.get("arrows", {}).get(name)
        rows, cols = dims[s], dims[t]
        if mat is None:
            mat = [["0"] * cols for _ in range(rows)]
        if len(mat) != rows or any(len(r) != cols for r in mat):
            raise FormatError(f"module.arrows[{name}]: expected a {rows} x {cols} matrix")
        arrows[name] = [[algebra.field(str(x)) for x in row] for row in mat]
    return ModuleData(algebra, dims, arrows)


def module_to_json(mod, algebra_ref: Union[str, dict]) -> dict:
    alg = mod.algebra
    return {"format_version": FORMAT_VERSION, "algebra": algebra_ref,
            "dims": {v: d for v, d in zip(alg.vertices, mod.dims)},
            "arrows": {name: [[str(x) for x in row] for row in m] for name, m in mod.arrows.items()}}
