"""Exact decision procedures for Steiner rooted k-arc-connected orientations."""
from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .connectivity import (
    SteinerInstance,
    FlowNetwork,
    necessary_cut_check,
    residual_components,
    verify,
)
from .graph import AS_LISTED, REVERSED, UNDECIDED, GraphError, MultiGraph

DEFAULT_BUDGET = 200_000
BRUTE_FORCE_LIMIT = 24


@dataclass(frozen=True)
class SolveResult:
    kind: str  # "yes" | "no" | "unknown"
    orientation: Optional[tuple] = None
    nodes: int = 0

    @property
    def is_yes(self):
        return self.kind == "yes"

    @property
    def is_no(self):
        return self.kind == "no"

    @property
    def is_unknown(self):
        return self.kind == "unknown"


def _yes(o, nodes=0):
    return SolveResult("yes", tuple(o), nodes)


def _no(nodes=0):
    return SolveResult("no", None, nodes)


# ---------------------------------------------------------------------------
# Parallel-edge capping


def _cap(inst: SteinerInstance, fixed: Optional[Sequence[int]]):
    g, k = inst.graph, inst.k
    if fixed is None:
        fixed = [UNDECIDED] * g.m
    groups: dict = {}
    for i, (u, v) in enumerate(g.edges):
        groups.setdefault((min(u, v), max(u, v)), []).append(i)
    keep = set()
    for (a, b), ids in groups.items():
        # arcs beyond k in one direction between a pair never help any cut
        fa = sum(1 for i in ids if fixed[i] != UNDECIDED and _tail(g, i, fixed[i]) == a)
        fb = sum(1 for i in ids if fixed[i] != UNDECIDED and _tail(g, i, fixed[i]) == b)
        und = [i for i in ids if fixed[i] == UNDECIDED]
        room = max(0, k - fa) + max(0, k - fb)
        keep.update(i for i in ids if fixed[i] != UNDECIDED)
        keep.update(und[:room])
    kept = sorted(keep)
    new_id = {e: j for j, e in enumerate(kept)}
    back = [None] * g.m
    for e in range(g.m):
        if e in new_id:
            back[e] = (new_id[e], 0)
    for (a, b), ids in groups.items():
        survivors = [i for i in ids if i in new_id and fixed[i] == UNDECIDED]
        for i in ids:
            if i in new_id:
                continue
            if survivors:
                sib = survivors[0]
                back[i] = (new_id[sib], 0 if g.edges[sib] == g.edges[i] else 1)
    ng = MultiGraph(g.n, tuple(g.edges[i] for i in kept))
    nfixed = tuple(fixed[i] for i in kept)
    return inst.with_graph(ng), back, nfixed


def _tail(g: MultiGraph, e: int, d: int) -> int:
    u, v = g.edges[e]
    return u if d == AS_LISTED else v


def cap_parallel(inst: SteinerInstance):
    """Keep at most 2k edges between any vertex pair (lowest ids survive).

    Returns ``(capped_instance, back)`` where ``back[e]`` is ``(edge, sense)``
    in the capped instance whose direction edge ``e`` copies (``sense`` 1 when
    listed the other way round).
    """
    capped, back, _ = _cap(inst, None)
    return capped, back


def uncap_orientation(back, o: Sequence[int]) -> tuple:
    return tuple(AS_LISTED if b is None else o[b[0]] ^ b[1] for b in back)


# ---------------------------------------------------------------------------
# Brute force


def _cut_masks(inst: SteinerInstance):
    g, r = inst.graph, inst.root
    seen = set()
    out = []
    for s in inst.terminals:
        others = [v for v in range(g.n) if v != r and v != s]
        for bits in range(1 << len(others)):
            side = [False] * g.n
            side[r] = True
            for j, v in enumerate(others):
                if bits >> j & 1:
                    side[v] = True
            fwd = bwd = 0
            for i, (u, v) in enumerate(g.edges):
                if side[u] and not side[v]:
                    fwd |= 1 << i
                elif side[v] and not side[u]:
                    bwd |= 1 << i
            if (fwd, bwd) not in seen:
                seen.add((fwd, bwd))
                out.append((fwd, bwd))
    return out


def _bits_to_orientation(g: int, m: int) -> tuple:
    return tuple((g >> i) & 1 for i in range(m))


def brute_force_solve(inst: SteinerInstance, limit: int = BRUTE_FORCE_LIMIT, chunk: int = 1 << 15) -> SolveResult:
    """Try all 2^m orientations in Gray-code order; first feasible one wins."""
    m, k = inst.graph.m, inst.k
    if m > limit:
        raise GraphError(f"brute force limited to {limit} edges, instance has {m}")
    if inst.t == 0:
        return _yes((0,) * m, 1)
    cuts_needed = inst.t * (1 << max(0, inst.graph.n - 2))
    if cuts_needed > 4096:
        for i in range(1 << m):
            o = _bits_to_orientation(i ^ (i >> 1), m)
            if verify(inst, o):
                return _yes(o, i + 1)
        return _no(1 << m)
    cuts = _cut_masks(inst)
    if any(bin(f | b).count("1") < k for f, b in cuts):
        return _no(0)
    fs = [np.uint64(f) for f, _ in cuts]
    bs = [np.uint64(b) for _, b in cuts]
    total = 1 << m
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.uint64)
        gray = idx ^ (idx >> np.uint64(1))
        ngray = ~gray
        ok = np.ones(len(idx), dtype=bool)
        for f, b in zip(fs, bs):
            cnt = np.bitwise_count(ngray & f).astype(np.int16) + np.bitwise_count(gray & b).astype(np.int16)
            ok &= cnt >= k
            if not ok.any():
                break
        hits = np.flatnonzero(ok)
        if len(hits):
            i = start + int(hits[0])
            return _yes(_bits_to_orientation(i ^ (i >> 1), m), i + 1)
    return _no(total)


# ---------------------------------------------------------------------------
# Branch and bound


class _BudgetOut(Exception):
    pass


class _Abort(Exception):
    pass


@dataclass
class _Search:
    inst: SteinerInstance
    budget: int
    nodes: int = 0
    abort: Optional[callable] = None

    def tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise _BudgetOut()
        if self.abort is not None and self.abort():
            raise _Abort()

    def propagate(self, p: list) -> bool:
        """Force edges whose other direction would break some terminal's bound.

        Mutates ``p``; returns False on conflict.
        """
        g, r, k = self.inst.graph, self.inst.root, self.inst.k
        changed = True
        while changed:
            changed = False
            for s in self.inst.terminals:
                net = FlowNetwork(g.n)
                arcs = []  # (edge, direction the arc represents, arc index)
                for e, ((u, v), d) in enumerate(zip(g.edges, p)):
                    if d == AS_LISTED:
                        net.add_arc(u, v)
                    elif d == REVERSED:
                        net.add_arc(v, u)
                    else:
                        arcs.append((e, AS_LISTED, net.add_arc(u, v)))
                        arcs.append((e, REVERSED, net.add_arc(v, u)))
                val = net.max_flow(r, s, k + 1)
                if val < k:
                    return False
                if val > k or not arcs:
                    continue
                comp = residual_components(net)
                forced: dict = {}
                for e, d, a in arcs:
                    if net.flow_on(a) == 1:
                        tail = net.head[2 * a + 1]
                        head = net.head[2 * a]
                        if comp[tail] != comp[head]:
                            if e in forced and forced[e] != d:
                                return False
                            forced[e] = d
                for e, d in forced.items():
                    p[e] = d
                    changed = True
        return True

    def deficient_cut(self, p: list):
        """First terminal the decided arcs alone fail, with its min-cut side."""
        g, r, k = self.inst.graph, self.inst.root, self.inst.k
        for s in self.inst.terminals:
            net = FlowNetwork(g.n)
            for (u, v), d in zip(g.edges, p):
                if d == AS_LISTED:
                    net.add_arc(u, v)
                elif d == REVERSED:
                    net.add_arc(v, u)
            if net.max_flow(r, s, k) < k:
                return net.reachable(r)
        return None

    def children(self, p: list):
        """Expand one node: returns ("yes", o) / ("no", None) / ("branch", [p1, p2])."""
        self.tick()
        if not self.propagate(p):
            return "no", None
        side = self.deficient_cut(p)
        if side is None:
            return "yes", tuple(AS_LISTED if d == UNDECIDED else d for d in p)
        g = self.inst.graph
        for e, (u, v) in enumerate(g.edges):
            if p[e] == UNDECIDED and ((u in side) != (v in side)):
                leaving = AS_LISTED if u in side else REVERSED
                a, b = list(p), list(p)
                a[e] = leaving
                b[e] = 1 - leaving
                return "branch", [a, b]
        # no undecided edge crosses a deficient cut: the relaxation would have
        # caught this, so it cannot happen after successful propagation
        return "no", None

    def dfs(self, p: list):
        stack = [p]
        while stack:
            cur = stack.pop()
            kind, payload = self.children(cur)
            if kind == "yes":
                return payload
            if kind == "branch":
                stack.extend(reversed(payload))
        return None


def _frontier(search: _Search, root: list, width: int):
    """Breadth-first expansion into at most ``width`` open subproblems.

    Returns (witness or None, open list). Expansion is deterministic and
    independent of how the subproblems are later executed.
    """
    level = [root]
    while level and len(level) * 2 <= width:
        nxt = []
        for p in level:
            kind, payload = search.children(p)
            if kind == "yes":
                return payload, []
            if kind == "branch":
                nxt.extend(payload)
        level = nxt
    return None, level


FRONTIER_WIDTH = 8


def solve_with_preoriented(inst: SteinerInstance, fixed: Optional[Sequence[int]] = None,
                           budget: int = DEFAULT_BUDGET, threads: int = 1) -> SolveResult:
    """Search completions of ``fixed`` (``UNDECIDED`` entries are free).

    The tree is first split into a fixed frontier of subtrees; each subtree
    runs with its own ``budget`` and the first witness in frontier order is
    returned, so the outcome does not depend on ``threads``.
    """
    g = inst.graph
    if fixed is None:
        fixed = [UNDECIDED] * g.m
    fixed = list(fixed)
    if len(fixed) != g.m:
        raise GraphError("partial orientation length mismatch")
    if inst.t == 0:
        return _yes(tuple(AS_LISTED if d == UNDECIDED else d for d in fixed), 0)
    capped, back, cfixed = _cap(inst, fixed)
    if necessary_cut_check(capped) is not None:
        return _no(0)

    def finish(o, nodes):
        full = list(uncap_orientation(back, o))
        for e, d in enumerate(fixed):
            if d != UNDECIDED:
                full[e] = d
        full = tuple(full)
        if not verify(inst, full):
            raise AssertionError("solver produced an infeasible orientation")
        return _yes(full, nodes)

    top = _Search(capped, budget)
    try:
        witness, open_nodes = _frontier(top, list(cfixed), FRONTIER_WIDTH)
    except _BudgetOut:
        return SolveResult("unknown", None, top.nodes)
    if witness is not None:
        return finish(witness, top.nodes)
    if not open_nodes:
        return _no(top.nodes)

    found = [len(open_nodes)]
    lock = threading.Lock()

    def run(i):
        s = _Search(capped, budget, abort=lambda: found[0] < i)
        try:
            w = s.dfs(open_nodes[i])
        except _BudgetOut:
            return "unknown", None, s.nodes
        except _Abort:
            return "aborted", None, s.nodes
        if w is not None:
            with lock:
                found[0] = min(found[0], i)
            return "yes", w, s.nodes
        return "no", None, s.nodes

    if threads <= 1:
        results = []
        for i in range(len(open_nodes)):
            res = run(i)
            results.append(res)
            if res[0] == "yes":
                break
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, range(len(open_nodes))))
    nodes = top.nodes + sum(r[2] for r in results)
    # combine in frontier order: an earlier unknown masks later answers
    for kind, w, _ in results:
        if kind == "yes":
            return finish(w, nodes)
        if kind == "unknown":
            return SolveResult("unknown", None, nodes)
    return _no(nodes)


def solve(inst: SteinerInstance, budget: int = DEFAULT_BUDGET, threads: int = 1) -> SolveResult:
    return solve_with_preoriented(inst, None, budget, threads)


# ---------------------------------------------------------------------------
# R-orientation


@dataclass(frozen=True)
class RInstance:
    graph: MultiGraph
    demands: tuple  # sorted tuple of ((u, v), req)

    def __post_init__(self):
        items = dict(self.demands).items() if not isinstance(self.demands, dict) else self.demands.items()
        clean = []
        for (u, v), req in sorted(items):
            if u == v:
                raise GraphError(f"demand pair ({u}, {v}) has equal endpoints")
            if not (0 <= u < self.graph.n and 0 <= v < self.graph.n):
                raise GraphError(f"demand pair ({u}, {v}) out of range")
            if req < 0:
                raise GraphError("negative demand")
            if req > 0:
                clean.append(((int(u), int(v)), int(req)))
        object.__setattr__(self, "demands", tuple(clean))

    @property
    def alpha(self) -> int:
        return sum(req for _, req in self.demands)


def solve_r(rinst: RInstance, budget: int = DEFAULT_BUDGET, threads: int = 1) -> SolveResult:
    from .reductions import reduce_r

    if rinst.alpha == 0:
        return _yes((AS_LISTED,) * rinst.graph.m, 0)
    red = reduce_r(rinst)
    res = solve(red.instance, budget, threads)
    if not res.is_yes:
        return res
    return _yes(res.orientation[: rinst.graph.m], res.nodes)


def r_feasible(rinst: RInstance, o: Sequence[int]) -> bool:
    from .connectivity import lam
    from .graph import orient

    d = orient(rinst.graph, o)
    return all(lam(d, u, v, req) >= req for (u, v), req in rinst.demands)


def maximize_k(inst: SteinerInstance, budget: int = DEFAULT_BUDGET, threads: int = 1):
    """Largest k with a Yes answer, scanning upward from 1.

    Returns (best_k, result_for_best_k, stopped_on) where ``stopped_on`` is
    the result that ended the scan (No or Unknown).
    """
    if inst.t == 0:
        raise GraphError("maximize-k needs at least one terminal")
    best, best_res = 0, None
    k = 1
    while True:
        res = solve(inst.with_k(k), budget, threads)
        if not res.is_yes:
            return best, best_res, res
        best, best_res = k, res
        k += 1
