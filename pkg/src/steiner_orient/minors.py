"""Fixed topological minors, minimal-instance enumeration and catalog decisions."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Optional

from .connectivity import SteinerInstance, lam
from .graph import (
    DiGraph,
    GraphError,
    MultiGraph,
    build_multigraph,
    canonical_code,
    delete_edges,
    delete_vertices,
    suppress_vertex,
    suppress_vertex_directed,
)
from .solver import DEFAULT_BUDGET, solve


class BudgetExceeded(RuntimeError):
    """A search ran out of its step budget; the answer is unknown."""


@dataclass(frozen=True)
class Embedding:
    vertex_map: dict  # pattern vertex -> host vertex
    path_map: tuple  # per pattern edge: (host vertex sequence, host edge ids)


def _w_mapping(W) -> dict:
    if isinstance(W, dict):
        return dict(W)
    return {w: w for w in W}


def _adjacency(g, directed: bool):
    if directed:
        adj = [[] for _ in range(g.n)]
        for i, (u, v) in enumerate(g.arcs):
            adj[u].append((i, v))
        return adj
    adj = [[] for _ in range(g.n)]
    for i, (u, v) in enumerate(g.edges):
        adj[u].append((i, v))
        adj[v].append((i, u))
    return adj


def _degrees(g, directed: bool):
    if directed:
        return [(g.out_degree(v), g.in_degree(v)) for v in range(g.n)]
    return [g.degree(v) for v in range(g.n)]


def _fits(hdeg, pdeg, directed):
    if directed:
        return hdeg[0] >= pdeg[0] and hdeg[1] >= pdeg[1]
    return hdeg >= pdeg


def _find_embedding(host, pattern, W, budget, directed):
    wmap = _w_mapping(W)
    pedges = pattern.arcs if directed else pattern.edges
    for p, h in wmap.items():
        if not (0 <= p < pattern.n and 0 <= h < host.n):
            raise GraphError(f"fixed vertex pair ({p}, {h}) out of range")
    if len(set(wmap.values())) != len(wmap):
        raise GraphError("fixed vertices must map injectively")
    if pattern.n > host.n or len(pedges) > (host.m):
        return None
    hadj = _adjacency(host, directed)
    hdeg, pdeg = _degrees(host, directed), _degrees(pattern, directed)
    for p, h in wmap.items():
        if not _fits(hdeg[h], pdeg[p], directed):
            return None
    free = [v for v in range(pattern.n) if v not in wmap]
    free.sort(key=lambda v: (-(sum(pdeg[v]) if directed else pdeg[v]), v))
    # route edges touching already-placed vertices first
    steps = [0]

    def tick():
        steps[0] += 1
        if steps[0] > budget:
            raise BudgetExceeded(f"minor search exceeded {budget} steps")

    psi = dict(wmap)
    used_host = set(psi.values())
    order = sorted(range(len(pedges)), key=lambda e: pedges[e])
    paths = [None] * len(pedges)
    used_edges = set()
    used_inner = set()

    def reachable(a, b):
        seen = {a}
        stack = [a]
        while stack:
            x = stack.pop()
            for e, y in hadj[x]:
                if e in used_edges:
                    continue
                if y == b:
                    return True
                if y in seen or y in used_host or y in used_inner:
                    continue
                seen.add(y)
                stack.append(y)
        return False

    def route(idx):
        if idx == len(order):
            return True
        e = order[idx]
        u, v = pedges[e]
        a, b = psi[u], psi[v]
        for j in order[idx:]:
            x, y = pedges[j]
            if not reachable(psi[x], psi[y]):
                return False
        # parallel pattern edges are interchangeable: route them in
        # increasing edge-sequence order
        prev = None
        if idx > 0 and pedges[order[idx - 1]] == pedges[e]:
            prev = paths[order[idx - 1]][1]
        path_v = [a]
        path_e = []
        on_path = {a}

        def extend(x):
            tick()
            for ed, y in hadj[x]:
                if ed in used_edges:
                    continue
                if y == b:
                    cand = tuple(path_e + [ed])
                    if prev is not None and cand <= prev:
                        continue
                    paths[e] = (tuple(path_v + [b]), cand)
                    used_edges.update(cand)
                    inner = path_v[1:]
                    used_inner.update(inner)
                    if route(idx + 1):
                        return True
                    used_edges.difference_update(cand)
                    used_inner.difference_update(inner)
                    paths[e] = None
                    continue
                if y in on_path or y in used_host or y in used_inner:
                    continue
                on_path.add(y)
                path_v.append(y)
                path_e.append(ed)
                if extend(y):
                    return True
                on_path.discard(y)
                path_v.pop()
                path_e.pop()
            return False

        return extend(a)

    def place(i):
        if i == len(free):
            return route(0)
        p = free[i]
        for h in range(host.n):
            if h in used_host or not _fits(hdeg[h], pdeg[p], directed):
                continue
            tick()
            psi[p] = h
            used_host.add(h)
            if place(i + 1):
                return True
            used_host.discard(h)
            del psi[p]
        return False

    if place(0):
        return Embedding(dict(psi), tuple(paths))
    return None


def fixed_topo_minor(host: MultiGraph, pattern: MultiGraph, W, budget: int = 1_000_000) -> Optional[Embedding]:
    """Embed ``pattern`` as a W-fixed topological minor of ``host``.

    ``W`` is a set of shared vertex ids or a dict pattern vertex -> host
    vertex. Paths are internally vertex-disjoint and their interiors avoid
    every branch vertex (hence W). Raises :class:`BudgetExceeded`.
    """
    return _find_embedding(host, pattern, W, budget, directed=False)


def fixed_topo_minor_directed(host: DiGraph, pattern: DiGraph, W, budget: int = 1_000_000) -> Optional[Embedding]:
    return _find_embedding(host, pattern, W, budget, directed=True)


def validate_embedding(host, pattern, W, emb: Embedding) -> list:
    """Structural problems with an embedding (empty list when valid)."""
    directed = isinstance(host, DiGraph)
    hedges = host.arcs if directed else host.edges
    pedges = pattern.arcs if directed else pattern.edges
    errs = []
    psi = emb.vertex_map
    for p, h in _w_mapping(W).items():
        if psi.get(p) != h:
            errs.append(f"fixed vertex {p} not mapped to {h}")
    if len(set(psi.values())) != len(psi) or set(psi) != set(range(pattern.n)):
        errs.append("vertex map not injective or not total")
    image = set(psi.values())
    seen_inner, seen_edges = set(), set()
    for e, (u, v) in enumerate(pedges):
        verts, eids = emb.path_map[e]
        if verts[0] != psi[u] or verts[-1] != psi[v] or len(eids) != len(verts) - 1:
            errs.append(f"path {e} has wrong ends")
            continue
        for i, ed in enumerate(eids):
            a, b = hedges[ed]
            x, y = verts[i], verts[i + 1]
            if not ((a, b) == (x, y) or (not directed and (a, b) == (y, x))):
                errs.append(f"path {e} step {i} does not follow edge {ed}")
        inner = set(verts[1:-1])
        if len(inner) != len(verts) - 2 or inner & image or inner & seen_inner:
            errs.append(f"path {e} is not internally disjoint")
        if set(eids) & seen_edges:
            errs.append(f"path {e} reuses an edge")
        seen_inner |= inner
        seen_edges |= set(eids)
    return errs


# ---------------------------------------------------------------------------
# Delete/suppress closure (oracle)


def _successors(g, wpos, directed):
    """All graphs one deletion or suppression away, with tracked W positions."""
    m = g.m
    for e in range(m):
        if directed:
            yield g.delete_arcs([e]), wpos
        else:
            yield delete_edges(g, [e])[0], wpos
    wset = set(wpos)
    for v in range(g.n):
        if v in wset:
            continue
        shift = tuple(w - (w > v) for w in wpos)
        if directed:
            yield _delete_vertex_directed(g, v), shift
            if g.in_degree(v) == 1 and g.out_degree(v) == 1:
                yield suppress_vertex_directed(g, v)[0], shift
        else:
            yield delete_vertices(g, [v])[0], shift
            if g.degree(v) == 2:
                yield suppress_vertex(g, v)[0], shift


def _delete_vertex_directed(d: DiGraph, v: int) -> DiGraph:
    arcs = tuple((a - (a > v), b - (b > v)) for a, b in d.arcs if a != v and b != v)
    return DiGraph(d.n - 1, arcs)


def suppression_reachable(g1, g2, W: Iterable[int], budget: int = 200_000) -> bool:
    """Breadth-first search over delete/suppress sequences from ``g1``.

    True iff some reachable graph is W-isomorphic to ``g2``. ``W`` holds
    vertex ids common to both graphs.
    """
    directed = isinstance(g1, DiGraph)
    wl = sorted(set(W))
    target = canonical_code(g2, wl)
    g2m = g2.m
    start = canonical_code(g1, wl)
    if start == target:
        return True
    seen = {start}
    q = deque([(g1, tuple(wl))])
    steps = 0
    while q:
        g, wpos = q.popleft()
        for h, hw in _successors(g, wpos, directed):
            if h.m < g2m or h.n < g2.n:
                continue
            code = canonical_code(h, hw)
            if code in seen:
                continue
            if code == target:
                return True
            steps += 1
            if steps > budget:
                raise BudgetExceeded(f"suppression search exceeded {budget} states")
            seen.add(code)
            q.append((h, hw))
    return False


# ---------------------------------------------------------------------------
# Minimal instances


def is_minimal_feasible(inst: SteinerInstance, budget: int = DEFAULT_BUDGET) -> bool:
    res = solve(inst, budget)
    if res.is_unknown:
        raise BudgetExceeded("solver budget exhausted on the instance")
    if res.is_no:
        return False
    for e in range(inst.graph.m):
        sub = solve(inst.with_graph(inst.graph.delete_edges([e])), budget)
        if sub.is_unknown:
            raise BudgetExceeded(f"solver budget exhausted after deleting edge {e}")
        if sub.is_yes:
            return False
    return True


def is_minimal_digraph(d: DiGraph, root: int, terminals, k: int) -> bool:
    """Steiner rooted k-arc-connected, and every arc deletion breaks it."""
    if not all(lam(d, root, s, k) >= k for s in terminals):
        return False
    for a in range(d.m):
        dd = d.delete_arcs([a])
        if all(lam(dd, root, s, k) >= k for s in terminals):
            return False
    return True


@dataclass(frozen=True)
class CatalogEntry:
    instance: SteinerInstance
    code: bytes


@dataclass
class Catalog:
    k: int
    t: int
    max_vertices: int
    entries: list
    complete: bool  # False when the generation budget cut enumeration short
    stats: dict = field(default_factory=dict)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)


def _degree_profile(k, t, n):
    return [k] * (t + 1) + [3] * (n - t - 1)


def _multigraphs_with_degrees(deg, cap, budget_box):
    """Yield edge lists of loopless multigraphs with the given degree sequence.

    Pairs are filled in lexicographic order; multiplicities are at most
    ``cap``. Interchangeable vertices (equal degree, beyond the fixed prefix)
    are not symmetry-reduced here; callers deduplicate by canonical code.
    """
    n = len(deg)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    res = list(deg)
    chosen = []
    # suffix capacity check: remaining degree of i must fit in later pairs
    last_pair_of = {}
    for idx, (i, j) in enumerate(pairs):
        last_pair_of[i] = idx
        last_pair_of[j] = idx

    def rec(idx):
        budget_box[0] -= 1
        if budget_box[0] < 0:
            raise BudgetExceeded("generation budget exhausted")
        if idx == len(pairs):
            if all(r == 0 for r in res):
                yield list(chosen)
            return
        i, j = pairs[idx]
        hi = min(res[i], res[j], cap)
        for mult in range(hi, -1, -1):
            res[i] -= mult
            res[j] -= mult
            if (last_pair_of[i] == idx and res[i]) or (last_pair_of[j] == idx and res[j]):
                res[i] += mult
                res[j] += mult
                continue
            chosen.append(((i, j), mult))
            yield from rec(idx + 1)
            chosen.pop()
            res[i] += mult
            res[j] += mult

    for sel in rec(0):
        edges = []
        for (i, j), mult in sel:
            edges += [(i, j)] * mult
        yield edges


def _connected(n, edges) -> bool:
    if n == 0:
        return True
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        parent[find(u)] = find(v)
    return len({find(v) for v in range(n)}) == 1


def _candidate_graphs(k, t, max_vertices, budget_box):
    """Distinct (up to fixing r, s_1..s_t) connected 3-regular candidates."""
    fixed = list(range(t + 1))
    seen = set()
    for n in range(t + 1, max_vertices + 1):
        deg = _degree_profile(k, t, n)
        if sum(deg) % 2:
            continue
        for edges in _multigraphs_with_degrees(deg, 2 * k, budget_box):
            if not _connected(n, edges):
                continue
            g = build_multigraph(n, edges)
            code = canonical_code(g, fixed)
            if code in seen:
                continue
            seen.add(code)
            yield g, code


def enumerate_minimal(k: int, t: int, max_vertices: int, budget: int = 5_000_000,
                      solve_budget: int = DEFAULT_BUDGET) -> Catalog:
    """Minimal feasible 3-regular instances with root 0 and terminals 1..t."""
    if max_vertices < t + 1:
        raise GraphError("max_vertices must be at least t+1")
    box = [budget]
    entries = []
    complete = True
    max_mult = 0
    candidates = 0
    try:
        for g, code in _candidate_graphs(k, t, max_vertices, box):
            candidates += 1
            inst = SteinerInstance(g, 0, tuple(range(1, t + 1)), k)
            if is_minimal_feasible(inst, solve_budget):
                entries.append(CatalogEntry(inst, code))
                max_mult = max([max_mult] + list(g.multiplicity().values()))
    except BudgetExceeded:
        complete = False
    entries.sort(key=lambda e: e.code)
    return Catalog(k, t, max_vertices, entries, complete,
                   {"candidates": candidates, "max_multiplicity": max_mult})


@dataclass(frozen=True)
class DigraphRecord:
    digraph: DiGraph
    root: int
    terminals: tuple
    k: int
    code: bytes


def enumerate_minimal_digraphs(k: int, t: int, max_vertices: int, budget: int = 5_000_000) -> list:
    """Minimally Steiner rooted k-arc-connected 3-regular digraphs, by code."""
    if max_vertices < t + 1:
        raise GraphError("max_vertices must be at least t+1")
    box = [budget]
    fixed = list(range(t + 1))
    terminals = tuple(range(1, t + 1))
    found = {}
    for g, _ in _candidate_graphs(k, t, max_vertices, box):
        # root arcs point out, terminal arcs point in; inner vertices need
        # both an in-arc and an out-arc or their arcs would be useless
        forced = []
        free = []
        for e, (u, v) in enumerate(g.edges):
            if u == 0 or v in terminals:
                forced.append((e, 0))
            elif v == 0 or u in terminals:
                forced.append((e, 1))
            else:
                free.append(e)
        if any(u in terminals and v in terminals for u, v in g.edges):
            continue
        for bits in product((0, 1), repeat=len(free)):
            box[0] -= 1
            if box[0] < 0:
                raise BudgetExceeded("generation budget exhausted")
            o = [0] * g.m
            for e, d in forced:
                o[e] = d
            for e, d in zip(free, bits):
                o[e] = d
            arcs = tuple((u, v) if d == 0 else (v, u) for (u, v), d in zip(g.edges, o))
            d = DiGraph(g.n, arcs)
            if any(d.in_degree(v) == 0 or d.out_degree(v) == 0 for v in range(t + 1, g.n)):
                continue
            if not is_minimal_digraph(d, 0, terminals, k):
                continue
            code = canonical_code(d, fixed)
            if code not in found:
                found[code] = DigraphRecord(d, 0, terminals, k, code)
    return [found[c] for c in sorted(found)]


def catalog_decide(inst: SteinerInstance, catalog: Iterable[CatalogEntry], complete: bool = False,
                   budget: int = 1_000_000) -> str:
    """Return "yes", "no" or "no-within-catalog" for a 3-regular instance."""
    for entry in catalog:
        pat = entry.instance
        if pat.k != inst.k or pat.t != inst.t:
            continue
        W = {pat.root: inst.root}
        W.update(zip(pat.terminals, inst.terminals))
        if fixed_topo_minor(inst.graph, pat.graph, W, budget) is not None:
            return "yes"
    return "no" if complete else "no-within-catalog"
