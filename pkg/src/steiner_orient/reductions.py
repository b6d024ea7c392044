"""Instance normalizations with orientation back-maps."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

from .connectivity import SteinerInstance, verify
from .graph import AS_LISTED, AncestorMap, GraphError, MultiGraph, delete_vertices, suppress_vertex
from .solver import RInstance, cap_parallel, r_feasible


@dataclass(frozen=True)
class ReducedInstance:
    """A reduced instance plus the map back to the original edges.

    ``edge_source[e]`` is ``(edge_of_reduced, sense)`` for original edge
    ``e``; the original edge takes the reduced edge's direction XOR
    ``sense``. ``None`` means the edge vanished and may be oriented freely.
    """

    instance: SteinerInstance
    original: Union[SteinerInstance, RInstance]
    edge_source: tuple
    registry: dict = field(default_factory=dict, compare=False)

    def lift(self, o: Sequence[int]) -> tuple:
        return tuple(AS_LISTED if src is None else o[src[0]] ^ src[1] for src in self.edge_source)


def identity_reduction(inst: SteinerInstance) -> ReducedInstance:
    return ReducedInstance(inst, inst, tuple((e, 0) for e in range(inst.graph.m)), {"kind": "identity"})


def compose(first: ReducedInstance, second: ReducedInstance) -> ReducedInstance:
    """Chain ``first`` (original -> mid) with ``second`` (mid -> final)."""
    src = []
    for item in first.edge_source:
        if item is None or second.edge_source[item[0]] is None:
            src.append(None)
        else:
            f, s2 = second.edge_source[item[0]]
            src.append((f, item[1] ^ s2))
    reg = {"kind": "compose", "parts": [first.registry, second.registry]}
    return ReducedInstance(second.instance, first.original, tuple(src), reg)


def lift_orientation(red: ReducedInstance, o: Sequence[int]) -> tuple:
    """Map a feasible orientation of the reduced instance to the original."""
    v = verify(red.instance, o)
    if not v:
        raise GraphError(f"orientation is not feasible on the reduced instance (terminal {v.certificate.separated_terminal})")
    lifted = red.lift(o)
    orig = red.original
    ok = verify(orig, lifted).ok if isinstance(orig, SteinerInstance) else r_feasible(orig, lifted)
    if not ok:
        raise AssertionError("lifted orientation fails on the original instance")
    return lifted


def cap_reduction(inst: SteinerInstance) -> ReducedInstance:
    capped, back = cap_parallel(inst)
    return ReducedInstance(capped, inst, tuple(back), {"kind": "cap"})


# ---------------------------------------------------------------------------


def reduce_degree_k(inst: SteinerInstance) -> ReducedInstance:
    """Hang a fresh copy off the root and each terminal by k parallel edges.

    New vertices: root copy ``n``, then terminal copies ``n+1..n+t`` in
    terminal order. Gadget edges follow the original ones.
    """
    g, k, n = inst.graph, inst.k, inst.graph.n
    edges = list(g.edges)
    new_root = n
    edges += [(new_root, inst.root)] * k
    copies = []
    for i, s in enumerate(inst.terminals):
        c = n + 1 + i
        copies.append(c)
        edges += [(s, c)] * k
    h = MultiGraph(n + 1 + inst.t, tuple(edges))
    red = SteinerInstance(h, new_root, tuple(copies), k)
    reg = {"kind": "degree-k", "root_copy": new_root, "terminal_copies": dict(zip(inst.terminals, copies))}
    return ReducedInstance(red, inst, tuple((e, 0) for e in range(g.m)), reg)


def build_binary_tree(d: int):
    """Rooted tree with ``d`` leaves and ``2d-1`` vertices.

    Starts from a root with two leaf children and repeatedly splits the
    oldest leaf. Returns ``(tree, root, leaves)`` with ``leaves`` ascending.
    """
    if d < 2:
        raise GraphError(f"binary tree needs at least 2 leaves, got {d}")
    edges = [(0, 1), (0, 2)]
    leaves = [1, 2]
    nxt = 3
    while len(leaves) < d:
        leaf = leaves.pop(0)
        edges += [(leaf, nxt), (leaf, nxt + 1)]
        leaves += [nxt, nxt + 1]
        nxt += 2
    return MultiGraph(nxt, tuple(edges)), 0, sorted(leaves)


def _cleanup(g: MultiGraph, keep: set):
    """Delete dead-end vertices and suppress degree-2 vertices to fixpoint.

    A vertex outside ``keep`` with at most one distinct neighbour is deleted;
    one with degree 2 and two distinct neighbours is suppressed. Scans in
    ascending vertex id. Returns (graph, AncestorMap relative to ``g``).
    """
    anc = AncestorMap.identity(g.n, g.m)
    v = 0
    while v < g.n:
        if anc.vertices[v] in keep:
            v += 1
            continue
        nb = g.neighbors(v)
        if len(nb) <= 1:
            g, step = delete_vertices(g, [v])
        elif g.degree(v) == 2:
            g, step = suppress_vertex(g, v)
        else:
            v += 1
            continue
        anc = anc.then(step)
        # only v's old neighbours can change status; vertices below them
        # were already found ineligible
        v = min([v] + [x if x < v else x - 1 for x in nb])
    return g, anc


def three_regularize(inst: SteinerInstance, cleanup: bool = True) -> ReducedInstance:
    """Replace every non-terminal vertex by the binary-tree gadget.

    The root and terminals must already have degree ``k``. Port ``i`` of a
    vertex receives its ``i``-th incident edge in ascending edge id. Tree
    ``T_i`` reserves its ``j``-th leaf for the ``j``-th other tree in
    ascending order, so each pair of trees is joined by one leaf edge.
    """
    g, k = inst.graph, inst.k
    special = {inst.root, *inst.terminals}
    for v in sorted(special):
        if g.degree(v) != k:
            raise GraphError(f"vertex {v} in S+r has degree {g.degree(v)}, expected {k}; apply reduce_degree_k first")
    new_n = 0
    port_of = {}  # (v, incident position) -> new vertex
    origin = []  # new vertex -> original vertex
    single = {}
    gadget_edges = []
    for v in range(g.n):
        d = g.degree(v)
        if v in special or d <= 1:
            single[v] = new_n
            origin.append(v)
            new_n += 1
            continue
        ports = list(range(new_n, new_n + d))
        origin += [v] * d
        new_n += d
        for i, p in enumerate(ports):
            port_of[(v, i)] = p
        if d == 2:
            gadget_edges.append((ports[0], ports[1]))
            continue
        tree, troot, tleaves = build_binary_tree(d - 1)
        leaves_of = []
        for i, p in enumerate(ports):
            # tree vertices: root -> port, others -> fresh ids
            ids = {troot: p}
            for x in range(tree.n):
                if x != troot:
                    ids[x] = new_n
                    origin.append(v)
                    new_n += 1
            gadget_edges += [(ids[a], ids[b]) for a, b in tree.edges]
            leaves_of.append([ids[x] for x in tleaves])
        for i in range(d):
            for j in range(i + 1, d):
                gadget_edges.append((leaves_of[i][j - 1], leaves_of[j][i]))
    edges = []
    for e, (u, w) in enumerate(g.edges):
        ends = []
        for x in (u, w):
            if x in single:
                ends.append(single[x])
            else:
                ends.append(port_of[(x, g.incidence[x].index(e))])
        edges.append(tuple(ends))
    expanded = MultiGraph(new_n, tuple(edges + gadget_edges))
    keep_new = {single[v] for v in special}
    if cleanup:
        final, anc = _cleanup(expanded, keep_new)
    else:
        final, anc = expanded, AncestorMap.identity(expanded.n, expanded.m)
    where = {}
    for f, seq in enumerate(anc.edges):
        for e, sense in seq:
            where[e] = (f, sense)
    relabel = {old: new for new, old in enumerate(anc.vertices)}
    red = SteinerInstance(final, relabel[single[inst.root]], tuple(relabel[single[s]] for s in inst.terminals), k)
    src = tuple(where.get(e) for e in range(g.m))
    reg = {"kind": "three-regular", "vertex_origin": tuple(origin[x] for x in anc.vertices),
           "expanded_vertices": expanded.n, "expanded_edges": expanded.m}
    return ReducedInstance(red, inst, src, reg)


def degree_audit(inst: SteinerInstance) -> list:
    """Vertices violating the 3-regular degree profile, as (vertex, degree)."""
    bad = []
    special = {inst.root, *inst.terminals}
    for v in range(inst.graph.n):
        want = inst.k if v in special else 3
        if inst.graph.degree(v) != want:
            bad.append((v, inst.graph.degree(v)))
    return bad


def normalize(inst: SteinerInstance) -> ReducedInstance:
    """Cap, hang degree-k copies and 3-regularize."""
    capped = cap_reduction(inst)
    hung = reduce_degree_k(capped.instance)
    return compose(compose(capped, hung), three_regularize(hung.instance))


# ---------------------------------------------------------------------------


def reduce_r(rinst: RInstance) -> ReducedInstance:
    """Turn an R-orientation instance into a Steiner instance with k = alpha.

    Demand pairs are processed in sorted order; pair ``i`` gets vertices
    ``r_P = n+2i`` and ``s_P = n+2i+1``; the new root is the last vertex.
    """
    pairs = list(rinst.demands)
    if not pairs:
        raise GraphError("no positive demand; the instance is trivially feasible")
    g, n = rinst.graph, rinst.graph.n
    rp = {P: n + 2 * i for i, (P, _) in enumerate(pairs)}
    sp = {P: n + 2 * i + 1 for i, (P, _) in enumerate(pairs)}
    root = n + 2 * len(pairs)
    edges = list(g.edges)
    for P, req in pairs:
        u, v = P
        edges += [(rp[P], u)] * req
        edges += [(v, sp[P])] * req
    for P, req in pairs:
        for Q, _ in pairs:
            if Q != P:
                edges += [(rp[P], sp[Q])] * req
    for P, req in pairs:
        edges += [(root, rp[P])] * req
    h = MultiGraph(root + 1, tuple(edges))
    inst = SteinerInstance(h, root, tuple(sp[P] for P, _ in pairs), rinst.alpha)
    reg = {"kind": "r-orientation", "pair_vertices": {P: (rp[P], sp[P]) for P, _ in pairs}}
    return ReducedInstance(inst, rinst, tuple((e, 0) for e in range(g.m)), reg)
