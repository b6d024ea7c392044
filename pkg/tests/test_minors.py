import itertools
import random

import pytest

from helpers import inst
from steiner_orient.connectivity import arc_in_some_min_cut, lam, verify
from steiner_orient.generators import random_three_regular
from steiner_orient.graph import DiGraph, MultiGraph, canonical_code, orient
from steiner_orient.minors import (
    BudgetExceeded,
    catalog_decide,
    enumerate_minimal,
    enumerate_minimal_digraphs,
    fixed_topo_minor,
    fixed_topo_minor_directed,
    is_minimal_digraph,
    is_minimal_feasible,
    suppression_reachable,
    validate_embedding,
)
from steiner_orient.reductions import three_regularize
from steiner_orient.solver import solve

FIG2A = inst(4, [(0, 1), (0, 2), (1, 3), (2, 3), (1, 2), (1, 2)], 0, [3], 2)


@pytest.fixture(scope="module")
def catalog_k1t2():
    return enumerate_minimal(1, 2, 6)


def test_identity_embedding():
    g = MultiGraph(4, ((0, 1), (1, 2), (2, 3), (3, 0), (0, 2)))
    W = set(range(4))
    emb = fixed_topo_minor(g, g, W)
    assert emb is not None and emb.vertex_map == {v: v for v in range(4)}
    assert validate_embedding(g, g, W, emb) == []


def test_single_edge_pattern_needs_clean_path():
    edge = MultiGraph(2, ((0, 1),))
    host = MultiGraph(4, ((0, 2), (2, 3), (3, 1)))
    emb = fixed_topo_minor(host, edge, {0: 0, 1: 1})
    assert emb is not None and emb.path_map[0][0] == (0, 2, 3, 1)
    # the only route passes through a fixed vertex
    host = MultiGraph(3, ((0, 2), (2, 1)))
    assert fixed_topo_minor(host, MultiGraph(3, ((0, 1),)), {0: 0, 1: 1, 2: 2}) is None


def test_directed_examples():
    d = DiGraph(3, ((0, 2), (2, 1)))
    assert fixed_topo_minor_directed(d, d, {0: 0, 1: 1, 2: 2}) is not None
    emb = fixed_topo_minor_directed(d, DiGraph(2, ((0, 1),)), {0: 0, 1: 1})
    assert emb is not None and emb.path_map[0][0] == (0, 2, 1)
    assert fixed_topo_minor_directed(d, DiGraph(2, ((1, 0),)), {0: 0, 1: 1}) is None


def test_fig2_host_contains_minimal_k2_pattern():
    host = three_regularize(FIG2A).instance
    cat = enumerate_minimal(2, 1, 4)
    assert cat.entries
    assert catalog_decide(host, cat.entries) == "yes"
    assert solve(host).is_yes


def test_budget_exhaustion():
    g = MultiGraph(6, tuple(itertools.combinations(range(6), 2)))
    pat = MultiGraph(6, tuple(itertools.combinations(range(6), 2)))
    with pytest.raises(BudgetExceeded):
        fixed_topo_minor(g, pat, {0: 0}, budget=3)


def test_suppression_examples():
    g = MultiGraph(3, ((0, 2), (2, 1)))
    assert suppression_reachable(g, g, [0, 1])
    assert suppression_reachable(g, MultiGraph(2, ((0, 1),)), [0, 1])
    assert not suppression_reachable(MultiGraph(2, ((0, 1),)), MultiGraph(2, ((0, 1), (0, 1))), [0, 1])


def test_minor_oracles_agree_on_random_tiny_graphs():
    rng = random.Random(1)
    pats = [MultiGraph(2, ((0, 1),)), MultiGraph(2, ((0, 1), (0, 1))), MultiGraph(3, ((0, 2), (1, 2), (0, 1)))]
    for _ in range(120):
        n = rng.randint(2, 5)
        host = MultiGraph(n, tuple(tuple(rng.sample(range(n), 2)) for _ in range(rng.randint(1, 7))))
        for p in pats:
            if p.n > host.n:
                continue
            emb = fixed_topo_minor(host, p, {0: 0, 1: 1})
            assert (emb is not None) == suppression_reachable(host, p, [0, 1])
            if emb is not None:
                assert validate_embedding(host, p, {0: 0, 1: 1}, emb) == []


def test_minimality_examples():
    assert is_minimal_feasible(inst(2, [(0, 1)], 0, [1], 1))
    assert not is_minimal_feasible(inst(2, [(0, 1), (0, 1)], 0, [1], 1))
    assert is_minimal_feasible(inst(4, [(0, 3), (1, 3), (2, 3)], 0, [1, 2], 1))


def test_enumerate_examples(catalog_k1t2):
    c1 = enumerate_minimal(1, 1, 4)
    assert len(c1) == 1 and c1.entries[0].instance.graph.edges == ((0, 1),)
    assert len(catalog_k1t2) == 1 and catalog_k1t2.complete
    g = catalog_k1t2.entries[0].instance.graph
    assert g.n == 4 and sorted(g.degree(v) for v in range(4)) == [1, 1, 1, 3]
    for entry in catalog_k1t2:
        assert is_minimal_feasible(entry.instance)
        assert entry.code == canonical_code(entry.instance.graph, [0, 1, 2])


def test_enumerate_minimal_digraph_examples():
    recs = enumerate_minimal_digraphs(1, 1, 4)
    assert len(recs) == 1 and recs[0].digraph.arcs == ((0, 1),)
    recs = enumerate_minimal_digraphs(1, 2, 6)
    assert len(recs) == 1
    d = recs[0].digraph
    assert d.n == 4 and d.out_degree(3) == 2 and d.in_degree(3) == 1
    for rec in recs + enumerate_minimal_digraphs(2, 1, 6):
        for a in range(rec.digraph.m):
            dd = rec.digraph.delete_arcs([a])
            assert any(lam(dd, rec.root, s) < rec.k for s in rec.terminals)
        assert is_minimal_digraph(rec.digraph, rec.root, rec.terminals, rec.k)


def test_catalog_decide_matches_solve(catalog_k1t2):
    rng = random.Random(2)
    verdicts = set()
    for _ in range(40):
        i = random_three_regular(rng, rng.choice([4, 6, 8, 10]), 1, 2, connected=rng.random() < 0.3)
        want = "yes" if solve(i).is_yes else "no"
        assert catalog_decide(i, catalog_k1t2.entries, complete=True) == want
        verdicts.add(want)
    assert verdicts == {"yes", "no"}


def test_catalog_decide_empty_catalog():
    i = inst(4, [(0, 3), (1, 3), (2, 3)], 0, [1, 2], 1)
    assert catalog_decide(i, [], complete=False) == "no-within-catalog"


def test_directed_catalog_equivalence():
    # a 3-regular digraph is Steiner rooted 1-arc-connected iff a minimal
    # one embeds as a fixed directed topological minor
    pats = enumerate_minimal_digraphs(1, 2, 6)
    rng = random.Random(3)
    for _ in range(60):
        i = random_three_regular(rng, rng.choice([4, 6, 8]), 1, 2)
        o = [rng.randint(0, 1) for _ in range(i.graph.m)]
        d = orient(i.graph, o)
        ok = verify(i, o).ok
        found = any(fixed_topo_minor_directed(d, p.digraph, {0: 0, 1: 1, 2: 2}) is not None for p in pats)
        assert ok == found


def test_same_direction_tight_arcs_keep_their_vertex():
    # r->a, a->b, b->a, b->v, v->s1, v->s2 with k=1: v has two out-arcs,
    # v->s1 leaves a tight s1-cut and v->s2 a tight s2-cut, so every
    # embedding of the minimal star must use v
    d = DiGraph(6, ((0, 3), (3, 4), (4, 3), (4, 5), (5, 1), (5, 2)))
    assert arc_in_some_min_cut(d, 0, 1, 4, k=1) and arc_in_some_min_cut(d, 0, 2, 5, k=1)
    star = enumerate_minimal_digraphs(1, 2, 6)[0].digraph
    emb = fixed_topo_minor_directed(d, star, {0: 0, 1: 1, 2: 2})
    assert emb is not None and 5 in emb.vertex_map.values()
