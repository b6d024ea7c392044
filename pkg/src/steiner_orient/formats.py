"""Text and structured (JSON) serializations for every record type.

Text records are line based: the first token names the line kind, ``#``
starts a comment, blank lines are ignored, vertex ids are 0-based and
edges are numbered by line order. The structured form is one JSON object
per record with a ``"type"`` field; field names are listed in the README.
"""
from __future__ import annotations

import json
from typing import Iterable, Optional, Sequence

from .connectivity import SteinerInstance
from .graph import DiGraph, GraphError, MultiGraph, canonical_code
from .hardness import ColoredTwoCnf, FormulaError, ModifiedInstance, NaeFormula, TwoCnf
from .minors import Catalog, CatalogEntry
from .solver import RInstance


class FormatError(ValueError):
    def __init__(self, msg: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].split()
        if body:
            yield no, body


def _ints(tokens, no, count=None) -> list:
    try:
        vals = [int(x) for x in tokens]
    except ValueError:
        raise FormatError(f"expected integers, got {' '.join(tokens)!r}", no) from None
    if count is not None and len(vals) != count:
        raise FormatError(f"expected {count} integers, got {len(vals)}", no)
    return vals


def _header(lines, kind: str, nums: int):
    if not lines:
        raise FormatError(f"empty input, expected 'p {kind}' header")
    no, tok = lines[0]
    if tok[0] != "p" or len(tok) < 2 or tok[1] != kind:
        raise FormatError(f"expected 'p {kind}' header", no)
    return _ints(tok[2:], no, nums)


def _end_line(lines) -> int:
    return lines[-1][0] + 1 if lines else 1


def _wrap(fn, no):
    try:
        return fn()
    except (GraphError, FormulaError) as exc:
        raise FormatError(str(exc), no) from None


# ---------------------------------------------------------------------------
# Steiner instance (and its directed sibling)


def _parse_graph_record(text: str, kind: str, edge_tag: str):
    lines = list(_lines(text))
    n, m, k = _header(lines, kind, 3)
    root, terms, edges, extra = None, None, [], {}
    for no, tok in lines[1:]:
        tag = tok[0]
        if tag == "r":
            if root is not None:
                raise FormatError("duplicate 'r' line", no)
            (root,) = _ints(tok[1:], no, 1)
        elif tag == "s":
            if terms is not None:
                raise FormatError("duplicate 's' line", no)
            terms = tuple(_ints(tok[1:], no))
        elif tag == edge_tag:
            if len(edges) == m:
                raise FormatError(f"more than {m} '{edge_tag}' lines", no)
            u, v = _ints(tok[1:], no, 2)
            if u == v:
                raise FormatError(f"loop at vertex {u}", no)
            if not (0 <= u < n and 0 <= v < n):
                raise FormatError(f"endpoint out of range 0..{n - 1}", no)
            edges.append((u, v))
        elif tag in ("y",) and kind == "modified":
            if "y" in extra:
                raise FormatError("duplicate 'y' line", no)
            extra["y"] = (no, _ints(tok[1:], no))
        else:
            raise FormatError(f"unknown line kind {tag!r}", no)
    end = _end_line(lines)
    if len(edges) != m:
        raise FormatError(f"header declares {m} '{edge_tag}' lines, found {len(edges)}", end)
    if root is None:
        raise FormatError("missing 'r' line", end)
    if terms is None:
        terms = ()
    return n, k, root, terms, edges, extra, end


def parse_instance(text: str) -> SteinerInstance:
    n, k, root, terms, edges, _, end = _parse_graph_record(text, "steiner", "e")
    return _wrap(lambda: SteinerInstance(MultiGraph(n, tuple(edges)), root, terms, k), end)


def _graph_lines(kind, n, edges, k, root, terms, tag) -> list:
    out = [f"p {kind} {n} {len(edges)} {k}", f"r {root}", "s" + "".join(f" {s}" for s in terms)]
    out += [f"{tag} {u} {v}" for u, v in edges]
    return out


def serialize_instance(inst: SteinerInstance) -> str:
    g = inst.graph
    return "\n".join(_graph_lines("steiner", g.n, g.edges, inst.k, inst.root, inst.terminals, "e")) + "\n"


def parse_sdigraph(text: str):
    """Directed record: returns (DiGraph, root, terminals, k)."""
    n, k, root, terms, arcs, _, end = _parse_graph_record(text, "sdigraph", "a")
    d = _wrap(lambda: DiGraph(n, tuple(arcs)), end)
    if not 0 <= root < n or any(not 0 <= s < n for s in terms):
        raise FormatError("root or terminal out of range", end)
    return d, root, terms, k


def serialize_sdigraph(d: DiGraph, root: int, terminals: Sequence[int], k: int) -> str:
    return "\n".join(_graph_lines("sdigraph", d.n, d.arcs, k, root, terminals, "a")) + "\n"


def parse_modified(text: str) -> ModifiedInstance:
    n, k, root, terms, edges, extra, end = _parse_graph_record(text, "modified", "e")
    if "y" not in extra:
        raise FormatError("missing 'y' line", end)
    yno, ys = extra["y"]
    inst = _wrap(lambda: SteinerInstance(MultiGraph(n, tuple(edges)), root, terms, k), end)
    return _wrap(lambda: ModifiedInstance(inst, frozenset(ys)), yno)


def serialize_modified(mi: ModifiedInstance) -> str:
    inst = mi.instance
    g = inst.graph
    lines = _graph_lines("modified", g.n, g.edges, inst.k, inst.root, inst.terminals, "e")
    lines.insert(3, "y" + "".join(f" {v}" for v in sorted(mi.Y)))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Orientation


def parse_orientation(text: str, m: Optional[int] = None) -> tuple:
    """Reads an ``o`` line; ``v``/``c`` report lines around it are skipped, so
    solver reports can be fed back in directly."""
    lines = [x for x in _lines(text) if x[1][0] not in ("v", "c")]
    if len(lines) != 1 or lines[0][1][0] != "o":
        no = lines[0][0] if lines else 1
        raise FormatError("expected a single 'o' line", no)
    no, tok = lines[0]
    bits = "".join(tok[1:])
    if any(c not in "01" for c in bits):
        raise FormatError("orientation characters must be 0 or 1", no)
    if m is not None and len(bits) != m:
        raise FormatError(f"orientation has {len(bits)} entries, instance has {m} edges", no)
    return tuple(int(c) for c in bits)


def serialize_orientation(o: Sequence[int]) -> str:
    return "o " + "".join(str(int(x)) for x in o) + "\n" if len(o) else "o\n"


# ---------------------------------------------------------------------------
# R-orientation instance


def parse_rinstance(text: str) -> RInstance:
    lines = list(_lines(text))
    n, m = _header(lines, "rorient", 2)
    edges, demands = [], {}
    for no, tok in lines[1:]:
        if tok[0] == "e":
            if len(edges) == m:
                raise FormatError(f"more than {m} 'e' lines", no)
            u, v = _ints(tok[1:], no, 2)
            if u == v or not (0 <= u < n and 0 <= v < n):
                raise FormatError(f"bad edge ({u}, {v})", no)
            edges.append((u, v))
        elif tok[0] == "d":
            u, v, req = _ints(tok[1:], no, 3)
            if (u, v) in demands:
                raise FormatError(f"duplicate demand for ({u}, {v})", no)
            if req < 0:
                raise FormatError("negative demand", no)
            demands[(u, v)] = req
            _wrap(lambda: RInstance(MultiGraph(n, ()), {(u, v): req}), no)
        else:
            raise FormatError(f"unknown line kind {tok[0]!r}", no)
    end = _end_line(lines)
    if len(edges) != m:
        raise FormatError(f"header declares {m} 'e' lines, found {len(edges)}", end)
    return _wrap(lambda: RInstance(MultiGraph(n, tuple(edges)), demands), end)


def serialize_rinstance(ri: RInstance) -> str:
    g = ri.graph
    out = [f"p rorient {g.n} {g.m}"] + [f"e {u} {v}" for u, v in g.edges]
    out += [f"d {u} {v} {req}" for (u, v), req in ri.demands]
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Formulas


def _clause_lines(lines, count, width):
    clauses = []
    rest = []
    for no, tok in lines[1:]:
        if tok[0] == "c":
            if len(clauses) == count:
                raise FormatError(f"more than {count} clause lines", no)
            clauses.append((no, tuple(_ints(tok[1:], no, width))))
        else:
            rest.append((no, tok))
    end = _end_line(lines)
    if len(clauses) != count:
        raise FormatError(f"header declares {count} clauses, found {len(clauses)}", end)
    return clauses, rest, end


def parse_nae(text: str) -> NaeFormula:
    lines = list(_lines(text))
    nv, nc = _header(lines, "nae3", 2)
    clauses, rest, end = _clause_lines(lines, nc, 3)
    if rest:
        raise FormatError(f"unknown line kind {rest[0][1][0]!r}", rest[0][0])
    for no, c in clauses:
        _wrap(lambda: NaeFormula(nv, (c,)), no)
    return NaeFormula(nv, tuple(c for _, c in clauses))


def serialize_nae(f: NaeFormula) -> str:
    out = [f"p nae3 {f.variable_count} {len(f.clauses)}"] + ["c " + " ".join(map(str, c)) for c in f.clauses]
    return "\n".join(out) + "\n"


def _single(rest, tag, width):
    found = None
    for no, tok in rest:
        if tok[0] != tag:
            raise FormatError(f"unknown line kind {tok[0]!r}", no)
        if found is not None:
            raise FormatError(f"duplicate '{tag}' line", no)
        found = (no, _ints(tok[1:], no, width))
    return found


def parse_cnf2(text: str) -> TwoCnf:
    lines = list(_lines(text))
    nv, nc = _header(lines, "cnf2", 2)
    clauses, rest, end = _clause_lines(lines, nc, 2)
    for no, c in clauses:
        _wrap(lambda: TwoCnf(nv, (c,)), no)
    kline = _single(rest, "k", 1)
    k = kline[1][0] if kline else 0
    return TwoCnf(nv, tuple(c for _, c in clauses), k)


def serialize_cnf2(f: TwoCnf) -> str:
    out = [f"p cnf2 {f.variable_count} {len(f.clauses)}", f"k {f.k}"]
    out += ["c " + " ".join(map(str, c)) for c in f.clauses]
    return "\n".join(out) + "\n"


def parse_cnf2col(text: str) -> ColoredTwoCnf:
    lines = list(_lines(text))
    nv, nc = _header(lines, "cnf2col", 2)
    clauses, rest, end = _clause_lines(lines, nc, 2)
    for no, c in clauses:
        _wrap(lambda: TwoCnf(nv, (c,)), no)
    col = _single([x for x in rest if x[1][0] == "col"], "col", nc)
    ks = _single([x for x in rest if x[1][0] != "col"], "k", 3)
    if col is None:
        raise FormatError("missing 'col' line", end)
    if ks is None:
        raise FormatError("missing 'k' line", end)
    return _wrap(lambda: ColoredTwoCnf(nv, tuple(c for _, c in clauses), tuple(col[1]), tuple(ks[1])), col[0])


def serialize_cnf2col(f: ColoredTwoCnf) -> str:
    out = [f"p cnf2col {f.variable_count} {len(f.clauses)}",
           "k " + " ".join(map(str, f.thresholds)),
           "col " + " ".join(map(str, f.coloring))]
    out += ["c " + " ".join(map(str, c)) for c in f.clauses]
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Catalog: a header followed by instance records in code order


def serialize_catalog(cat: Catalog) -> str:
    out = [f"p catalog {cat.k} {cat.t} {cat.max_vertices} {len(cat.entries)} {int(cat.complete)}"]
    for entry in cat.entries:
        out.append(serialize_instance(entry.instance).rstrip("\n"))
    return "\n".join(out) + "\n"


def parse_catalog(text: str) -> Catalog:
    lines = list(_lines(text))
    k, t, maxv, count, complete = _header(lines, "catalog", 5)
    raw = text.splitlines()
    starts = [no for no, tok in lines[1:] if tok[0] == "p"]
    if len(starts) != count:
        line = starts[count] if len(starts) > count else _end_line(lines)
        raise FormatError(f"header declares {count} entries, found {len(starts)}", line)
    entries = []
    for i, start in enumerate(starts):
        stop = starts[i + 1] - 1 if i + 1 < len(starts) else len(raw)
        # keep line numbers meaningful by padding with blank lines
        chunk = "\n" * (start - 1) + "\n".join(raw[start - 1:stop])
        inst = parse_instance(chunk)
        if inst.k != k or inst.t != t:
            raise FormatError("entry does not match the catalog's k and t", start)
        entries.append(CatalogEntry(inst, canonical_code(inst.graph, [inst.root, *inst.terminals])))
    return Catalog(k, t, maxv, entries, bool(complete))


# ---------------------------------------------------------------------------
# Structured (JSON) mirror


def _inst_fields(inst: SteinerInstance) -> dict:
    return {"n": inst.graph.n, "k": inst.k, "root": inst.root, "terminals": list(inst.terminals),
            "edges": [list(e) for e in inst.graph.edges]}


def _inst_from(d: dict) -> SteinerInstance:
    return SteinerInstance(MultiGraph(d["n"], tuple(tuple(e) for e in d["edges"])), d["root"],
                           tuple(d["terminals"]), d["k"])


def to_structured(obj, kind: Optional[str] = None) -> dict:
    """JSON-ready dict for any record. ``kind`` disambiguates directed tuples."""
    if isinstance(obj, SteinerInstance):
        return {"type": "steiner", **_inst_fields(obj)}
    if isinstance(obj, ModifiedInstance):
        return {"type": "modified", **_inst_fields(obj.instance), "y": sorted(obj.Y)}
    if isinstance(obj, RInstance):
        return {"type": "rorient", "n": obj.graph.n, "edges": [list(e) for e in obj.graph.edges],
                "demands": [[u, v, req] for (u, v), req in obj.demands]}
    if isinstance(obj, NaeFormula):
        return {"type": "nae3", "variables": obj.variable_count, "clauses": [list(c) for c in obj.clauses]}
    if isinstance(obj, TwoCnf):
        return {"type": "cnf2", "variables": obj.variable_count, "clauses": [list(c) for c in obj.clauses],
                "k": obj.k}
    if isinstance(obj, ColoredTwoCnf):
        return {"type": "cnf2col", "variables": obj.variable_count, "clauses": [list(c) for c in obj.clauses],
                "coloring": list(obj.coloring), "thresholds": list(obj.thresholds)}
    if isinstance(obj, Catalog):
        return {"type": "catalog", "k": obj.k, "t": obj.t, "max_vertices": obj.max_vertices,
                "complete": obj.complete, "entries": [_inst_fields(e.instance) for e in obj.entries]}
    if kind == "sdigraph":
        d, root, terms, k = obj
        return {"type": "sdigraph", "n": d.n, "k": k, "root": root, "terminals": list(terms),
                "arcs": [list(a) for a in d.arcs]}
    if kind == "orientation":
        return {"type": "orientation", "bits": "".join(str(int(x)) for x in obj)}
    raise TypeError(f"no structured form for {type(obj).__name__}")


def from_structured(d: dict):
    try:
        kind = d["type"]
        if kind == "steiner":
            return _inst_from(d)
        if kind == "modified":
            return ModifiedInstance(_inst_from(d), frozenset(d["y"]))
        if kind == "rorient":
            return RInstance(MultiGraph(d["n"], tuple(tuple(e) for e in d["edges"])),
                             {(u, v): req for u, v, req in d["demands"]})
        if kind == "nae3":
            return NaeFormula(d["variables"], tuple(tuple(c) for c in d["clauses"]))
        if kind == "cnf2":
            return TwoCnf(d["variables"], tuple(tuple(c) for c in d["clauses"]), d.get("k", 0))
        if kind == "cnf2col":
            return ColoredTwoCnf(d["variables"], tuple(tuple(c) for c in d["clauses"]),
                                 tuple(d["coloring"]), tuple(d["thresholds"]))
        if kind == "catalog":
            entries = []
            for e in d["entries"]:
                inst = _inst_from(e)
                entries.append(CatalogEntry(inst, canonical_code(inst.graph, [inst.root, *inst.terminals])))
            return Catalog(d["k"], d["t"], d["max_vertices"], entries, bool(d["complete"]))
        if kind == "sdigraph":
            return DiGraph(d["n"], tuple(tuple(a) for a in d["arcs"])), d["root"], tuple(d["terminals"]), d["k"]
        if kind in ("orientation", "verdict"):
            bits = d["bits"] if kind == "orientation" else d["orientation"]
            if any(c not in "01" for c in bits):
                raise FormatError("orientation characters must be 0 or 1")
            return tuple(int(c) for c in bits)
    except (KeyError, TypeError) as exc:
        raise FormatError(f"malformed structured record: {exc}") from None
    except (GraphError, FormulaError) as exc:
        raise FormatError(str(exc)) from None
    raise FormatError(f"unknown record type {kind!r}")


# ---------------------------------------------------------------------------
# Dispatch

TEXT_PARSERS = {
    "steiner": parse_instance,
    "sdigraph": parse_sdigraph,
    "modified": parse_modified,
    "rorient": parse_rinstance,
    "nae3": parse_nae,
    "cnf2": parse_cnf2,
    "cnf2col": parse_cnf2col,
    "catalog": parse_catalog,
}


def record_kind(text: str) -> str:
    """Record type of ``text`` in either serialization."""
    s = text.lstrip()
    if s.startswith("{"):
        try:
            kind = json.loads(text)["type"]
            return "orientation" if kind == "verdict" else kind
        except (ValueError, KeyError, TypeError):
            raise FormatError("malformed structured record") from None
    for no, tok in _lines(text):
        if tok[0] == "o":
            return "orientation"
        if tok[0] in ("v", "c"):
            continue
        if tok[0] == "p" and len(tok) > 1:
            return tok[1]
        raise FormatError("missing 'p' header", no)
    raise FormatError("empty input")


def loads(text: str, expect: Optional[Iterable[str]] = None):
    """Parse a record in either serialization; returns (kind, object)."""
    kind = record_kind(text)
    if expect is not None and kind not in set(expect):
        raise FormatError(f"expected a {' or '.join(expect)} record, got {kind!r}")
    if text.lstrip().startswith("{"):
        return kind, from_structured(json.loads(text))
    if kind == "orientation":
        return kind, parse_orientation(text)
    if kind not in TEXT_PARSERS:
        raise FormatError(f"unknown record type {kind!r}", 1)
    return kind, TEXT_PARSERS[kind](text)


_SERIALIZERS = {
    SteinerInstance: serialize_instance,
    ModifiedInstance: serialize_modified,
    RInstance: serialize_rinstance,
    NaeFormula: serialize_nae,
    TwoCnf: serialize_cnf2,
    ColoredTwoCnf: serialize_cnf2col,
    Catalog: serialize_catalog,
}


def dumps(obj, fmt: str = "text", kind: Optional[str] = None) -> str:
    if fmt == "structured":
        return json.dumps(to_structured(obj, kind), sort_keys=True) + "\n"
    if kind == "orientation":
        return serialize_orientation(obj)
    if kind == "sdigraph":
        return serialize_sdigraph(*obj)
    return _SERIALIZERS[type(obj)](obj)
