"""Cycle and cut diagnostics for Steiner rooted k-arc-connected digraphs."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .connectivity import (
    FlowNetwork,
    arc_in_some_min_cut,
    constrained_min_cut,
    lam,
    scc,
)
from .graph import DiGraph, GraphError


@dataclass(frozen=True)
class FeedbackResult:
    items: frozenset
    exact: bool

    def __len__(self):
        return len(self.items)


def _cyclic_arcs(d: DiGraph, removed_arcs=frozenset(), removed_vertices=frozenset()) -> list:
    """Arcs whose endpoints share a nontrivial strongly connected component."""
    out = [[] for _ in range(d.n)]
    for i, (u, v) in enumerate(d.arcs):
        if i not in removed_arcs and u not in removed_vertices and v not in removed_vertices:
            out[u].append(v)
    comp = scc(d.n, lambda u: out[u])
    return [i for i, (u, v) in enumerate(d.arcs)
            if i not in removed_arcs and u not in removed_vertices and v not in removed_vertices
            and comp[u] == comp[v]]


def _shortest_cycle(d: DiGraph, arcs: Sequence[int]) -> Optional[list]:
    """A shortest directed cycle among ``arcs``, as arc ids, or None."""
    out = {}
    for i in arcs:
        out.setdefault(d.arcs[i][0], []).append(i)
    best = None
    for start in sorted(out):
        # BFS from start back to start
        prev = {start: None}
        frontier = [start]
        found = None
        while frontier and found is None:
            nxt = []
            for u in frontier:
                for a in out.get(u, ()):
                    v = d.arcs[a][1]
                    if v == start:
                        found = (u, a)
                        break
                    if v not in prev:
                        prev[v] = (u, a)
                        nxt.append(v)
                if found:
                    break
            frontier = nxt
        if found is None:
            continue
        u, a = found
        cyc = [a]
        while u != start:
            pu, pa = prev[u]
            cyc.append(pa)
            u = pu
        cyc.reverse()
        if best is None or len(cyc) < len(best):
            best = cyc
            if len(best) <= 2:
                break
    return best


def _arc_packing_bound(d: DiGraph, arcs: list) -> int:
    """Greedy count of arc-disjoint cycles (a lower bound for FAS)."""
    left = list(arcs)
    count = 0
    while True:
        cyc = _shortest_cycle(d, left)
        if cyc is None:
            return count
        count += 1
        drop = set(cyc)
        left = [a for a in left if a not in drop]
        left = _cyclic_arcs(DiGraph(d.n, d.arcs), frozenset(set(range(d.m)) - set(left)))


def min_feedback_arc_set(d: DiGraph, exact_limit: int = 20) -> FeedbackResult:
    """Minimum feedback arc set; exact when the cyclic core is small enough."""
    core = _cyclic_arcs(d)
    if not core:
        return FeedbackResult(frozenset(), True)
    if len(core) > exact_limit:
        chosen = set()
        while True:
            cyc = _shortest_cycle(d, _cyclic_arcs(d, frozenset(chosen)))
            if cyc is None:
                return FeedbackResult(frozenset(chosen), False)
            chosen.add(cyc[0])
    best = [set(core)]

    def rec(removed: frozenset):
        live = _cyclic_arcs(d, removed)
        if not live:
            if len(removed) < len(best[0]):
                best[0] = set(removed)
            return
        if len(removed) + max(1, _arc_packing_bound(d, live)) >= len(best[0]):
            return
        cyc = _shortest_cycle(d, live)
        for a in cyc:
            rec(removed | {a})

    rec(frozenset())
    return FeedbackResult(frozenset(best[0]), True)


def _vertex_packing_greedy(d: DiGraph, removed: frozenset) -> int:
    count = 0
    gone = set(removed)
    while True:
        live = _cyclic_arcs(d, removed_vertices=frozenset(gone))
        cyc = _shortest_cycle(d, live)
        if cyc is None:
            return count
        count += 1
        gone.update(d.arcs[a][0] for a in cyc)


def min_feedback_vertex_set(d: DiGraph, exact_limit: int = 20) -> FeedbackResult:
    core = _cyclic_arcs(d)
    if not core:
        return FeedbackResult(frozenset(), True)
    core_vertices = {d.arcs[a][0] for a in core}
    if len(core) > exact_limit:
        chosen = set()
        while True:
            cyc = _shortest_cycle(d, _cyclic_arcs(d, removed_vertices=frozenset(chosen)))
            if cyc is None:
                return FeedbackResult(frozenset(chosen), False)
            chosen.add(d.arcs[cyc[0]][0])
    best = [set(core_vertices)]

    def rec(removed: frozenset):
        live = _cyclic_arcs(d, removed_vertices=removed)
        if not live:
            if len(removed) < len(best[0]):
                best[0] = set(removed)
            return
        if len(removed) + max(1, _vertex_packing_greedy(d, removed)) >= len(best[0]):
            return
        cyc = _shortest_cycle(d, live)
        for a in cyc:
            rec(removed | {d.arcs[a][0]})

    rec(frozenset())
    return FeedbackResult(frozenset(best[0]), True)


def simple_cycles(d: DiGraph, vertices=None, limit: Optional[int] = None) -> list:
    """All directed simple cycles as arc-id tuples.

    Each cycle starts at its smallest vertex; parallel arcs give distinct
    cycles. Restricted to ``vertices`` when given.
    """
    allowed = set(range(d.n)) if vertices is None else set(vertices)
    out = [[] for _ in range(d.n)]
    for i, (u, v) in enumerate(d.arcs):
        if u in allowed and v in allowed:
            out[u].append(i)
    cycles = []
    for start in sorted(allowed):
        path = []
        on = {start}

        def rec(u):
            for a in out[u]:
                v = d.arcs[a][1]
                if v == start:
                    cycles.append(tuple(path + [a]))
                    if limit is not None and len(cycles) > limit:
                        raise GraphError("too many cycles")
                elif v > start and v not in on:
                    on.add(v)
                    path.append(a)
                    rec(v)
                    path.pop()
                    on.discard(v)

        rec(start)
    return cycles


def cycle_vertices(d: DiGraph, cycle) -> frozenset:
    return frozenset(d.arcs[a][0] for a in cycle)


def max_disjoint_cycles(d: DiGraph, exact_limit: int = 20):
    """Maximum family of vertex-disjoint directed cycles; (cycles, exact)."""
    core = _cyclic_arcs(d)
    if not core:
        return [], True
    if len(core) > exact_limit:
        chosen, gone = [], set()
        while True:
            cyc = _shortest_cycle(d, _cyclic_arcs(d, removed_vertices=frozenset(gone)))
            if cyc is None:
                return chosen, False
            chosen.append(tuple(cyc))
            gone |= cycle_vertices(d, cyc)
    best = [[]]

    def rec(gone: frozenset, picked: list):
        live = _cyclic_arcs(d, removed_vertices=gone)
        if not live:
            if len(picked) > len(best[0]):
                best[0] = list(picked)
            return
        live_vertices = {d.arcs[a][0] for a in live}
        # each cycle uses at least 2 vertices
        if len(picked) + len(live_vertices) // 2 <= len(best[0]):
            return
        v = min(live_vertices)
        keep = live_vertices
        for cyc in simple_cycles(d, keep):
            if d.arcs[cyc[0]][0] != v:
                continue
            rec(gone | cycle_vertices(d, cyc), picked + [cyc])
        rec(gone | {v}, picked)

    rec(frozenset(), [])
    return best[0], True


# ---------------------------------------------------------------------------
# Flow supports


@dataclass(frozen=True)
class FlowSupport:
    terminal: int
    arcs: frozenset
    decomposition: tuple  # k tuples of arc ids


def _flow_arcs(d: DiGraph, r, s, k, allowed) -> set:
    net = FlowNetwork(d.n)
    idx = {}
    for a in sorted(allowed):
        u, v = d.arcs[a]
        idx[a] = net.add_arc(u, v)
    val = net.max_flow(r, s, k)
    if val < k:
        return None
    return {a for a, i in idx.items() if net.flow_on(i)}


def minimal_flow_support(d: DiGraph, r: int, s: int, k: int) -> FlowSupport:
    """Inclusionwise minimal union of k arc-disjoint r-s paths."""
    supp = _flow_arcs(d, r, s, k, range(d.m))
    if supp is None:
        raise GraphError(f"lambda({r},{s}) < {k}")
    # flow cycles carry no r-s value: drop them until acyclic
    while True:
        cyc = _shortest_cycle(d, sorted(supp))
        if cyc is None:
            break
        supp -= set(cyc)
    changed = True
    while changed:
        changed = False
        for a in sorted(supp):
            rest = supp - {a}
            if _flow_arcs(d, r, s, k, rest) is not None:
                supp = rest
                changed = True
    paths = _decompose(d, r, s, supp)
    if len(paths) != k or _shortest_cycle(d, sorted(supp)) is not None:
        raise AssertionError("support is not an acyclic union of k paths")
    return FlowSupport(s, frozenset(supp), tuple(paths))


def _decompose(d: DiGraph, r, s, arcs) -> list:
    out = {}
    for a in sorted(arcs):
        out.setdefault(d.arcs[a][0], []).append(a)
    paths = []
    while out.get(r):
        path = []
        u = r
        while u != s:
            a = out[u].pop(0)
            path.append(a)
            u = d.arcs[a][1]
        paths.append(tuple(path))
    return paths


# ---------------------------------------------------------------------------
# Tight cuts and cycle orderings


def _require_lambda(d, r, s, k):
    val = lam(d, r, s)
    if val != k:
        raise GraphError(f"lambda({r},{s}) = {val}, expected {k}")


def out_degree(d: DiGraph, side) -> int:
    return d.out_degree_of_set(side)


def is_s_essential(d: DiGraph, r: int, s: int, cycle: Sequence[int], k: int) -> bool:
    """Some tight s-cut contains part, but not all, of the cycle's vertices."""
    _require_lambda(d, r, s, k)
    return any(arc_in_some_min_cut(d, r, s, a) for a in cycle)


def all_tight_cuts(d: DiGraph, r: int, s: int, k: int) -> list:
    """Every vertex set U with r in U, s outside and out-degree exactly k."""
    others = [v for v in range(d.n) if v not in (r, s)]
    cuts = []
    for bits in range(1 << len(others)):
        side = {r} | {v for j, v in enumerate(others) if bits >> j & 1}
        if d.out_degree_of_set(side) == k:
            cuts.append(frozenset(side))
    return cuts


@dataclass(frozen=True)
class OrderedCycleWitness:
    cycles: tuple
    cuts: tuple  # CutCertificate per cycle


def find_s_ordered_witness(d: DiGraph, r: int, s: int, cycles: Sequence[Sequence[int]], k: int):
    """Tight cuts witnessing that the cycles form an s-ordered sequence."""
    _require_lambda(d, r, s, k)
    vsets = [cycle_vertices(d, c) for c in cycles]
    for i in range(len(vsets)):
        for j in range(i + 1, len(vsets)):
            if vsets[i] & vsets[j]:
                raise GraphError(f"cycles {i} and {j} share a vertex")
    cuts = []
    for i, cyc in enumerate(cycles):
        before = set().union(*vsets[:i]) if i else set()
        after = set().union(*vsets[i + 1:]) if i + 1 < len(vsets) else set()
        hit = None
        for a in cyc:
            u, v = d.arcs[a]
            if (r in after | {v}) or (s in before | {u}):
                continue
            cut = constrained_min_cut(d, r, s, before | {u}, after | {v})
            if cut is not None and cut.out_degree == k:
                hit = cut
                break
        if hit is None:
            return None
        cuts.append(hit)
    return OrderedCycleWitness(tuple(tuple(c) for c in cycles), tuple(cuts))


@dataclass
class CycleCoverReport:
    cycles_checked: int
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations


def check_lemma_minimality(d: DiGraph, k: int, terminals: Sequence[int], root: int = 0,
                           cycle_limit: int = 10_000) -> CycleCoverReport:
    """Every cycle lies in the union of the flow supports, and no single
    support contains a whole cycle."""
    supports = {s: minimal_flow_support(d, root, s, k).arcs for s in terminals}
    union = set().union(*supports.values()) if supports else set()
    cycles = simple_cycles(d, limit=cycle_limit)
    rep = CycleCoverReport(len(cycles))
    for cyc in cycles:
        cs = set(cyc)
        if not cs <= union:
            rep.violations.append(("uncovered", cyc, tuple(sorted(cs - union))))
        for s, q in supports.items():
            if cs <= q:
                rep.violations.append(("inside-support", cyc, s))
    return rep


@dataclass
class LatticeReport:
    cuts_found: int
    pairs_checked: int
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations


def tight_cut_lattice_check(d: DiGraph, r: int, s: int, k: int, samples: int = 50,
                            seed: int = 0) -> LatticeReport:
    """Sample tight s-cuts from random side constraints; check that unions
    and intersections of pairs are tight too."""
    _require_lambda(d, r, s, k)
    rng = random.Random(seed)
    others = [v for v in range(d.n) if v not in (r, s)]
    cuts = {frozenset(constrained_min_cut(d, r, s).side)}
    for _ in range(samples):
        inside = {v for v in others if rng.random() < 0.3}
        outside = {v for v in others if v not in inside and rng.random() < 0.3}
        c = constrained_min_cut(d, r, s, inside, outside)
        if c is not None and c.out_degree == k:
            cuts.add(frozenset(c.side))
    cuts = sorted(cuts, key=lambda c: sorted(c))
    rep = LatticeReport(len(cuts), 0)
    for i in range(len(cuts)):
        for j in range(i + 1, len(cuts)):
            a, b = cuts[i], cuts[j]
            rep.pairs_checked += 1
            for name, side in (("union", a | b), ("intersection", a & b)):
                if d.out_degree_of_set(side) != k:
                    rep.violations.append((name, tuple(sorted(a)), tuple(sorted(b))))
    return rep
