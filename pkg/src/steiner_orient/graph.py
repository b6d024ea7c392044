"""Multigraph and digraph value types.

Edges carry identity: edge ``i`` of a :class:`MultiGraph` is the ``i``-th pair
in ``edges``, parallel edges included. Orientations are tuples of 0/1 indexed
by edge id, where 0 means the edge is directed as listed (``u -> v``) and 1
means reversed.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

AS_LISTED = 0
REVERSED = 1
UNDECIDED = -1

Orientation = tuple  # tuple[int, ...] of AS_LISTED / REVERSED
PartialOrientation = tuple  # tuple[int, ...] of AS_LISTED / REVERSED / UNDECIDED


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class MultiGraph:
    n: int
    edges: tuple

    def __post_init__(self):
        for i, (u, v) in enumerate(self.edges):
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge {i}: endpoint out of range ({u}, {v}) for n={self.n}")
            if u == v:
                raise GraphError(f"edge {i}: loop at vertex {u}")

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def incidence(self) -> tuple:
        """Per vertex, the ascending tuple of incident edge ids."""
        inc = [[] for _ in range(self.n)]
        for i, (u, v) in enumerate(self.edges):
            inc[u].append(i)
            inc[v].append(i)
        return tuple(tuple(x) for x in inc)

    def degree(self, v: int) -> int:
        return len(self.incidence[v])

    def other(self, e: int, v: int) -> int:
        u, w = self.edges[e]
        return w if u == v else u

    def neighbors(self, v: int) -> set:
        return {self.other(e, v) for e in self.incidence[v]}

    def multiplicity(self) -> dict:
        """Map unordered pair ``(min, max)`` to its number of parallel edges."""
        mult: dict = {}
        for u, v in self.edges:
            key = (u, v) if u < v else (v, u)
            mult[key] = mult.get(key, 0) + 1
        return mult

    def delete_edges(self, drop: Iterable[int]) -> "MultiGraph":
        drop = set(drop)
        return MultiGraph(self.n, tuple(e for i, e in enumerate(self.edges) if i not in drop))

    def add_edges(self, pairs: Iterable) -> "MultiGraph":
        return build_multigraph(self.n, list(self.edges) + list(pairs))

    def add_vertices(self, count: int) -> "MultiGraph":
        return MultiGraph(self.n + count, self.edges)


@dataclass(frozen=True)
class DiGraph:
    n: int
    arcs: tuple

    def __post_init__(self):
        for i, (u, v) in enumerate(self.arcs):
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"arc {i}: endpoint out of range ({u}, {v}) for n={self.n}")
            if u == v:
                raise GraphError(f"arc {i}: loop at vertex {u}")

    @property
    def m(self) -> int:
        return len(self.arcs)

    @cached_property
    def out_arcs(self) -> tuple:
        out = [[] for _ in range(self.n)]
        for i, (u, _) in enumerate(self.arcs):
            out[u].append(i)
        return tuple(tuple(x) for x in out)

    @cached_property
    def in_arcs(self) -> tuple:
        inn = [[] for _ in range(self.n)]
        for i, (_, v) in enumerate(self.arcs):
            inn[v].append(i)
        return tuple(tuple(x) for x in inn)

    def out_degree(self, v: int) -> int:
        return len(self.out_arcs[v])

    def in_degree(self, v: int) -> int:
        return len(self.in_arcs[v])

    def out_degree_of_set(self, side) -> int:
        side = set(side)
        return sum(1 for u, v in self.arcs if u in side and v not in side)

    def delete_arcs(self, drop: Iterable[int]) -> "DiGraph":
        drop = set(drop)
        return DiGraph(self.n, tuple(a for i, a in enumerate(self.arcs) if i not in drop))

    def add_arcs(self, pairs: Iterable) -> "DiGraph":
        return DiGraph(self.n, self.arcs + tuple(tuple(p) for p in pairs))

    def underlying(self) -> MultiGraph:
        return MultiGraph(self.n, self.arcs)


def build_multigraph(n: int, endpoint_list: Iterable) -> MultiGraph:
    """Build a multigraph with edge ids in input order.

    Raises :class:`GraphError` naming the offending index on loops or
    out-of-range endpoints.
    """
    return MultiGraph(n, tuple((int(u), int(v)) for u, v in endpoint_list))


def build_digraph(n: int, arc_list: Iterable) -> DiGraph:
    return DiGraph(n, tuple((int(u), int(v)) for u, v in arc_list))


def orient(g: MultiGraph, o: Sequence[int]) -> DiGraph:
    if len(o) != g.m:
        raise GraphError(f"orientation has length {len(o)}, graph has {g.m} edges")
    arcs = tuple((u, v) if d == AS_LISTED else (v, u) for (u, v), d in zip(g.edges, o))
    return DiGraph(g.n, arcs)


def induced_orientation(g: MultiGraph, d: DiGraph) -> Orientation:
    """Recover the orientation of ``g`` whose arcs are ``d`` (same ids)."""
    o = []
    for (u, v), (a, b) in zip(g.edges, d.arcs):
        if (a, b) == (u, v):
            o.append(AS_LISTED)
        elif (a, b) == (v, u):
            o.append(REVERSED)
        else:
            raise GraphError(f"arc ({a}, {b}) does not orient edge ({u}, {v})")
    return tuple(o)


# ---------------------------------------------------------------------------
# Ancestor bookkeeping for deletions and suppressions


@dataclass(frozen=True)
class AncestorMap:
    """Relates a derived graph to the graph it was derived from.

    ``edges[f]`` is the sequence of ``(source_edge, sense)`` forming the path
    that derived edge ``f`` replaces, read from the derived edge's first
    listed endpoint to its second; ``sense`` is 1 when the source edge is
    traversed against its listing. ``vertices[v]`` is the source vertex of
    derived vertex ``v``.
    """

    edges: tuple
    vertices: tuple

    @staticmethod
    def identity(n: int, m: int) -> "AncestorMap":
        return AncestorMap(tuple(((i, 0),) for i in range(m)), tuple(range(n)))

    def then(self, later: "AncestorMap") -> "AncestorMap":
        """Compose: ``self`` maps B->A, ``later`` maps C->B; result maps C->A."""
        edges = []
        for seq in later.edges:
            path = []
            for f, sense in seq:
                inner = self.edges[f]
                if sense:
                    inner = tuple((e, 1 - s) for e, s in reversed(inner))
                path.extend(inner)
            edges.append(tuple(path))
        vertices = tuple(self.vertices[v] for v in later.vertices)
        return AncestorMap(tuple(edges), vertices)

    def lift_orientation(self, o: Sequence[int], source_m: int, default: int = AS_LISTED) -> Orientation:
        """Direct every source edge along the derived edge that contains it."""
        out = [default] * source_m
        for f, seq in enumerate(self.edges):
            for e, sense in seq:
                out[e] = o[f] ^ sense
        return tuple(out)


def _compact(n: int, removed: set) -> tuple:
    """Order-preserving renumbering: returns (old->new list, new->old tuple)."""
    old_to_new = [-1] * n
    new_to_old = []
    for v in range(n):
        if v not in removed:
            old_to_new[v] = len(new_to_old)
            new_to_old.append(v)
    return old_to_new, tuple(new_to_old)


def delete_vertices(g: MultiGraph, vs: Iterable[int]) -> tuple:
    """Delete vertices and their incident edges; returns (graph, AncestorMap)."""
    removed = set(vs)
    old_to_new, new_to_old = _compact(g.n, removed)
    kept = [i for i, (u, v) in enumerate(g.edges) if u not in removed and v not in removed]
    h = MultiGraph(len(new_to_old), tuple((old_to_new[g.edges[i][0]], old_to_new[g.edges[i][1]]) for i in kept))
    return h, AncestorMap(tuple(((i, 0),) for i in kept), new_to_old)


def delete_edges(g: MultiGraph, es: Iterable[int]) -> tuple:
    drop = set(es)
    kept = [i for i in range(g.m) if i not in drop]
    h = MultiGraph(g.n, tuple(g.edges[i] for i in kept))
    return h, AncestorMap(tuple(((i, 0),) for i in kept), tuple(range(g.n)))


def suppress_vertex(g: MultiGraph, v: int) -> tuple:
    """Suppress a degree-2 vertex.

    The two incident edges ``e1 < e2`` are replaced by one edge appended after
    the surviving edges, listed from the far end of ``e1`` to the far end of
    ``e2``. When both far ends coincide the pair is deleted together with
    ``v``. Vertex ids above ``v`` shift down by one.
    """
    inc = g.incidence[v]
    if len(inc) != 2:
        raise GraphError(f"vertex {v} has degree {len(inc)}, expected 2")
    e1, e2 = inc
    u, w = g.other(e1, v), g.other(e2, v)
    old_to_new, new_to_old = _compact(g.n, {v})
    kept = [i for i in range(g.m) if i not in (e1, e2)]
    new_edges = [(old_to_new[g.edges[i][0]], old_to_new[g.edges[i][1]]) for i in kept]
    anc = [((i, 0),) for i in kept]
    if u != w:
        new_edges.append((old_to_new[u], old_to_new[w]))
        s1 = 0 if g.edges[e1] == (u, v) else 1
        s2 = 0 if g.edges[e2] == (v, w) else 1
        anc.append(((e1, s1), (e2, s2)))
    return MultiGraph(len(new_to_old), tuple(new_edges)), AncestorMap(tuple(anc), new_to_old)


def suppress_vertex_directed(d: DiGraph, v: int) -> tuple:
    """Suppress a vertex with in-degree and out-degree one.

    Arcs ``u->v`` and ``v->w`` become ``u->w`` (appended last), or vanish
    when ``u == w``.
    """
    if d.in_degree(v) != 1 or d.out_degree(v) != 1:
        raise GraphError(f"vertex {v} has in/out degree {d.in_degree(v)}/{d.out_degree(v)}, expected 1/1")
    a_in, a_out = d.in_arcs[v][0], d.out_arcs[v][0]
    u, w = d.arcs[a_in][0], d.arcs[a_out][1]
    old_to_new, new_to_old = _compact(d.n, {v})
    kept = [i for i in range(d.m) if i not in (a_in, a_out)]
    arcs = [(old_to_new[d.arcs[i][0]], old_to_new[d.arcs[i][1]]) for i in kept]
    anc = [((i, 0),) for i in kept]
    if u != w:
        arcs.append((old_to_new[u], old_to_new[w]))
        anc.append(((a_in, 0), (a_out, 0)))
    return DiGraph(len(new_to_old), tuple(arcs)), AncestorMap(tuple(anc), new_to_old)


# ---------------------------------------------------------------------------
# Isomorphism with fixed vertices


def _pair_counts(edges, directed: bool) -> dict:
    cnt: dict = {}
    for u, v in edges:
        key = (u, v) if directed or u < v else (v, u)
        cnt[key] = cnt.get(key, 0) + 1
    return cnt


def fixed_isomorphic(g1, g2, fixed: Iterable[int]):
    """Search a bijection ``V(g1) -> V(g2)`` fixing ``fixed`` pointwise.

    Works for two MultiGraphs or two DiGraphs. Returns the bijection as a
    dict, or ``None``. Plain backtracking with degree pruning; intended for
    small graphs.
    """
    directed = isinstance(g1, DiGraph)
    e1 = g1.arcs if directed else g1.edges
    e2 = g2.arcs if directed else g2.edges
    if g1.n != g2.n or len(e1) != len(e2):
        return None
    fixed = sorted(set(fixed))
    if any(w >= g1.n for w in fixed):
        return None
    c1, c2 = _pair_counts(e1, directed), _pair_counts(e2, directed)

    def degs(n, edges):
        out, inn = [0] * n, [0] * n
        for u, v in edges:
            out[u] += 1
            inn[v] += 1
        if directed:
            return [(a, b) for a, b in zip(out, inn)]
        return [a + b for a, b in zip(out, inn)]

    d1, d2 = degs(g1.n, e1), degs(g2.n, e2)

    def mult(cnt, u, v):
        if directed:
            return cnt.get((u, v), 0)
        return cnt.get((u, v) if u < v else (v, u), 0)

    mapping = {}
    for w in fixed:
        if d1[w] != d2[w]:
            return None
        mapping[w] = w
    for a in fixed:
        for b in fixed:
            if mult(c1, a, b) != mult(c2, a, b):
                return None
    order = [v for v in range(g1.n) if v not in mapping]
    order.sort(key=lambda v: -len([1 for w in fixed if mult(c1, v, w) or mult(c1, w, v)]))
    used = set(mapping.values())

    def extend(i):
        if i == len(order):
            return True
        v = order[i]
        for x in range(g2.n):
            if x in used or d1[v] != d2[x]:
                continue
            ok = True
            for a, b in mapping.items():
                if mult(c1, v, a) != mult(c2, x, b) or (directed and mult(c1, a, v) != mult(c2, b, x)):
                    ok = False
                    break
            if ok:
                mapping[v] = x
                used.add(x)
                if extend(i + 1):
                    return True
                del mapping[v]
                used.discard(x)
        return False

    return dict(mapping) if extend(0) else None


def canonical_code(g, fixed: Sequence[int] = ()) -> bytes:
    """Canonical form of a multigraph or digraph with an ordered fixed prefix.

    ``fixed[i]`` receives canonical label ``i``; the remaining vertices are
    labelled by individualisation-refinement, taking the lexicographically
    smallest adjacency string over all leaves of the search tree. Two graphs
    get equal codes iff a bijection maps ``fixed`` positionally and preserves
    all edge multiplicities.
    """
    directed = isinstance(g, DiGraph)
    edges = g.arcs if directed else g.edges
    n = g.n
    cnt = _pair_counts(edges, directed)
    out_adj = [dict() for _ in range(n)]
    in_adj = [dict() for _ in range(n)]
    for (u, v), c in cnt.items():
        out_adj[u][v] = c
        in_adj[v][u] = c
        if not directed:
            out_adj[v][u] = c
            in_adj[u][v] = c
    fixed = list(fixed)
    if len(set(fixed)) != len(fixed):
        raise GraphError("fixed sequence has repeated vertices")

    # initial colouring: fixed vertices individually first, then the rest
    colour = [len(fixed)] * n
    for i, w in enumerate(fixed):
        colour[w] = i

    def refine(col):
        while True:
            sig = []
            for v in range(n):
                outs = tuple(sorted((col[x], c) for x, c in out_adj[v].items()))
                ins = tuple(sorted((col[x], c) for x, c in in_adj[v].items())) if directed else ()
                sig.append((col[v], outs, ins))
            ranks = {s: i for i, s in enumerate(sorted(set(sig)))}
            new = [ranks[s] for s in sig]
            if len(ranks) == len(set(col)):
                return new
            col = new

    def code_for(perm):
        # perm[v] = canonical label
        inv = [0] * n
        for v, p in enumerate(perm):
            inv[p] = v
        out = bytearray()
        for i in range(n):
            for j in range(n if directed else i + 1):
                if directed:
                    c = out_adj[inv[i]].get(inv[j], 0)
                else:
                    c = out_adj[inv[i]].get(inv[j], 0) if j < i else 0
                    if j == i:
                        continue
                out.append(min(c, 255))
        return bytes(out)

    best = [None]

    def search(col):
        col = refine(col)
        cells: dict = {}
        for v, c in enumerate(col):
            cells.setdefault(c, []).append(v)
        target = None
        for c in sorted(cells):
            if len(cells[c]) > 1:
                target = c
                break
        if target is None:
            code = code_for(col)
            if best[0] is None or code < best[0]:
                best[0] = code
            return
        for v in cells[target]:
            child = [2 * c + (1 if c >= target else 0) for c in col]
            child[v] = 2 * target
            search(child)

    search(colour)
    header = bytes([1 if directed else 0]) + n.to_bytes(2, "big") + len(fixed).to_bytes(2, "big") + len(edges).to_bytes(2, "big")
    return header + (best[0] or b"")
