"""Max-flow, cuts and orientation verification."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .graph import AS_LISTED, REVERSED, DiGraph, GraphError, MultiGraph, orient


class FlowNetwork:
    """Dinic max-flow on an integer-capacity network.

    Arcs are stored in pairs (forward at ``2i``, residual at ``2i+1``), so
    ``add_arc`` returns ``i`` and ``flow_on(i)`` reads the flow on it.
    """

    def __init__(self, n: int):
        self.n = n
        self.head = []
        self.cap = []
        self.adj = [[] for _ in range(n)]

    def add_arc(self, u: int, v: int, c: int = 1) -> int:
        i = len(self.head) // 2
        self.adj[u].append(len(self.head))
        self.head.append(v)
        self.cap.append(c)
        self.adj[v].append(len(self.head))
        self.head.append(u)
        self.cap.append(0)
        return i

    def flow_on(self, i: int) -> int:
        return self.cap[2 * i + 1]

    def _bfs(self, s, t):
        level = [-1] * self.n
        level[s] = 0
        q = deque([s])
        head, cap, adj = self.head, self.cap, self.adj
        while q:
            u = q.popleft()
            for e in adj[u]:
                if cap[e] > 0 and level[head[e]] < 0:
                    level[head[e]] = level[u] + 1
                    q.append(head[e])
        return level if level[t] >= 0 else None

    def max_flow(self, s: int, t: int, limit: Optional[int] = None) -> int:
        """Push flow from ``s`` to ``t``; stop early once ``limit`` is reached."""
        if s == t:
            raise GraphError("source equals sink")
        total = 0
        head, cap, adj = self.head, self.cap, self.adj
        while limit is None or total < limit:
            level = self._bfs(s, t)
            if level is None:
                break
            it = [0] * self.n
            while limit is None or total < limit:
                # iterative DFS for one augmenting path in the level graph
                path = []
                u = s
                while u != t:
                    lst = adj[u]
                    while it[u] < len(lst):
                        e = lst[it[u]]
                        v = head[e]
                        if cap[e] > 0 and level[v] == level[u] + 1:
                            break
                        it[u] += 1
                    if it[u] == len(lst):
                        if not path:
                            u = None
                            break
                        level[u] = -1
                        e = path.pop()
                        u = head[e ^ 1]
                        it[u] += 1
                        continue
                    e = lst[it[u]]
                    path.append(e)
                    u = head[e]
                if u is None:
                    break
                push = min(cap[e] for e in path)
                if limit is not None:
                    push = min(push, limit - total)
                for e in path:
                    cap[e] -= push
                    cap[e ^ 1] += push
                total += push
        return total

    def reachable(self, s: int) -> set:
        seen = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            for e in self.adj[u]:
                v = self.head[e]
                if self.cap[e] > 0 and v not in seen:
                    seen.add(v)
                    stack.append(v)
        return seen


def _network(d: DiGraph) -> FlowNetwork:
    net = FlowNetwork(d.n)
    for u, v in d.arcs:
        net.add_arc(u, v, 1)
    return net


def _check_pair(n, u, v):
    if u == v:
        raise GraphError(f"source and sink coincide ({u})")
    if not (0 <= u < n and 0 <= v < n):
        raise GraphError("vertex out of range")


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SteinerInstance:
    graph: MultiGraph
    root: int
    terminals: tuple
    k: int

    def __post_init__(self):
        object.__setattr__(self, "terminals", tuple(int(s) for s in self.terminals))
        n = self.graph.n
        if self.k < 1:
            raise GraphError(f"k must be positive, got {self.k}")
        if not 0 <= self.root < n:
            raise GraphError(f"root {self.root} out of range")
        if len(set(self.terminals)) != len(self.terminals):
            raise GraphError("terminals are not distinct")
        for s in self.terminals:
            if not 0 <= s < n:
                raise GraphError(f"terminal {s} out of range")
            if s == self.root:
                raise GraphError("root is listed as a terminal")

    @property
    def t(self) -> int:
        return len(self.terminals)

    def with_graph(self, g: MultiGraph) -> "SteinerInstance":
        return SteinerInstance(g, self.root, self.terminals, self.k)

    def with_k(self, k: int) -> "SteinerInstance":
        return SteinerInstance(self.graph, self.root, self.terminals, k)


@dataclass(frozen=True)
class CutCertificate:
    side: frozenset
    separated_terminal: int
    out_degree: int


@dataclass(frozen=True)
class Verdict:
    ok: bool
    certificate: Optional[CutCertificate] = None

    def __bool__(self):
        return self.ok


OK = Verdict(True)


def lam(d: DiGraph, u: int, v: int, limit: Optional[int] = None) -> int:
    """Number of pairwise arc-disjoint directed ``u``-``v`` paths."""
    _check_pair(d.n, u, v)
    return _network(d).max_flow(u, v, limit)


def min_cut(d: DiGraph, u: int, v: int) -> CutCertificate:
    """Minimum ``u``-``v`` cut, taking the side residual-reachable from ``u``."""
    _check_pair(d.n, u, v)
    net = _network(d)
    val = net.max_flow(u, v)
    return CutCertificate(frozenset(net.reachable(u)), v, val)


def verify(inst: SteinerInstance, o: Sequence[int]) -> Verdict:
    d = orient(inst.graph, o)
    for s in inst.terminals:
        net = _network(d)
        val = net.max_flow(inst.root, s, inst.k)
        if val < inst.k:
            return Verdict(False, CutCertificate(frozenset(net.reachable(inst.root)), s, val))
    return OK


def _undirected_network(g: MultiGraph) -> FlowNetwork:
    net = FlowNetwork(g.n)
    for u, v in g.edges:
        net.add_arc(u, v, 1)
        net.add_arc(v, u, 1)
    return net


def undirected_lambda(g: MultiGraph, u: int, v: int, limit: Optional[int] = None) -> int:
    _check_pair(g.n, u, v)
    return _undirected_network(g).max_flow(u, v, limit)


def nash_williams_sufficient(inst: SteinerInstance) -> bool:
    """Pairwise edge-connectivity at least 2k over the root and terminals."""
    pts = [inst.root] + list(inst.terminals)
    need = 2 * inst.k
    # pairwise connectivity >= c over a set follows from connectivity >= c
    # between one fixed point and every other (undirected cuts are symmetric)
    return all(undirected_lambda(inst.graph, pts[0], x, need) >= need for x in pts[1:])


def necessary_cut_check(inst: SteinerInstance) -> Optional[CutCertificate]:
    """An undirected cut of size < k separating root from a terminal, if any."""
    for s in inst.terminals:
        net = _undirected_network(inst.graph)
        val = net.max_flow(inst.root, s, inst.k)
        if val < inst.k:
            return CutCertificate(frozenset(net.reachable(inst.root)), s, val)
    return None


def relaxation_network(g: MultiGraph, p: Sequence[int]) -> FlowNetwork:
    net = FlowNetwork(g.n)
    for (u, v), d in zip(g.edges, p):
        if d == AS_LISTED:
            net.add_arc(u, v, 1)
        elif d == REVERSED:
            net.add_arc(v, u, 1)
        else:
            net.add_arc(u, v, 1)
            net.add_arc(v, u, 1)
    return net


def mixed_upper_bound(inst: SteinerInstance, p: Sequence[int], s: int, limit: Optional[int] = None) -> int:
    """Max r-s flow when undecided edges may be used in either direction."""
    if s not in inst.terminals:
        raise GraphError(f"{s} is not a terminal")
    return relaxation_network(inst.graph, p).max_flow(inst.root, s, limit)


def arc_in_some_min_cut(d: DiGraph, r: int, s: int, a: int, k: Optional[int] = None) -> bool:
    """True iff deleting arc ``a`` lowers the r-s connectivity by one.

    When ``k`` is given the current connectivity must equal it.
    """
    base = lam(d, r, s)
    if k is not None and base != k:
        raise GraphError(f"lambda(r,s)={base}, expected {k}")
    return lam(d.delete_arcs([a]), r, s) == base - 1


BIG = 1 << 30


def constrained_min_cut(d: DiGraph, r: int, s: int, must_inside: Iterable[int] = (),
                        must_outside: Iterable[int] = ()) -> Optional[CutCertificate]:
    """Minimum cut with forced vertices on each side; None if constraints clash."""
    inside, outside = set(must_inside) | {r}, set(must_outside) | {s}
    if inside & outside:
        return None
    net = _network(d)
    for x in sorted(inside - {r}):
        net.add_arc(r, x, BIG)
    for y in sorted(outside - {s}):
        net.add_arc(y, s, BIG)
    val = net.max_flow(r, s)
    return CutCertificate(frozenset(net.reachable(r)), s, val)


def scc(n: int, succ) -> list:
    """Strongly connected component index per vertex (iterative Tarjan).

    ``succ(u)`` yields successors of ``u``.
    """
    index = [-1] * n
    low = [0] * n
    on = [False] * n
    comp = [-1] * n
    stack = []
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] >= 0:
            continue
        work = [(root, iter(succ(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on[root] = True
        while work:
            u, it = work[-1]
            advanced = False
            for v in it:
                if index[v] < 0:
                    index[v] = low[v] = counter
                    counter += 1
                    stack.append(v)
                    on[v] = True
                    work.append((v, iter(succ(v))))
                    advanced = True
                    break
                if on[v]:
                    low[u] = min(low[u], index[v])
            if advanced:
                continue
            work.pop()
            if work:
                p = work[-1][0]
                low[p] = min(low[p], low[u])
            if low[u] == index[u]:
                while True:
                    w = stack.pop()
                    on[w] = False
                    comp[w] = ncomp
                    if w == u:
                        break
                ncomp += 1
    return comp


def residual_components(net: FlowNetwork) -> list:
    head, cap, adj = net.head, net.cap, net.adj
    return scc(net.n, lambda u: (head[e] for e in adj[u] if cap[e] > 0))
