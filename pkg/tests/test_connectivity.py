import itertools
import random

import pytest

from helpers import CYCLE4, all_cuts, brute_disjoint_paths, brute_min_cut, brute_undirected_cut, cycle4, inst
from steiner_orient.connectivity import (
    arc_in_some_min_cut,
    constrained_min_cut,
    lam,
    min_cut,
    mixed_upper_bound,
    nash_williams_sufficient,
    necessary_cut_check,
    undirected_lambda,
    verify,
)
from steiner_orient.generators import random_digraph, random_multigraph, random_small_instance
from steiner_orient.graph import UNDECIDED, DiGraph, GraphError, MultiGraph, orient
from steiner_orient.solver import brute_force_solve


def test_lambda_examples():
    assert lam(DiGraph(2, ((0, 1), (0, 1))), 0, 1) == 2
    assert lam(orient(MultiGraph(4, CYCLE4), [0, 0, 0, 0]), 0, 2) == 1
    assert lam(DiGraph(3, ((0, 2), (2, 1))), 0, 1) == 1
    with pytest.raises(GraphError):
        lam(DiGraph(2, ()), 1, 1)


def test_min_cut_policy():
    c = min_cut(DiGraph(2, ((0, 1), (0, 1))), 0, 1)
    assert c.side == {0} and c.out_degree == 2
    # path r->a->s: the saturated arc r->a leaves nothing residual-reachable
    # from r, so the source-minimal side is {r}
    c = min_cut(DiGraph(3, ((0, 1), (1, 2))), 0, 2)
    assert c.side == {0} and c.out_degree == 1


def test_flow_matches_cut_enumeration_and_path_packing():
    rng = random.Random(1)
    for _ in range(300):
        n = rng.randint(2, 7)
        d = random_digraph(rng, n, rng.randint(0, 12))
        c = min_cut(d, 0, 1)
        assert c.out_degree == lam(d, 0, 1) == brute_min_cut(d, 0, 1)
        assert d.out_degree_of_set(c.side) == c.out_degree and 0 in c.side and 1 not in c.side
    for _ in range(80):
        d = random_digraph(rng, rng.randint(2, 5), rng.randint(0, 7))
        assert lam(d, 0, 1) == brute_disjoint_paths(d, 0, 1)


def test_verify_examples():
    assert verify(cycle4(2), [0, 0, 1, 1]).ok  # r->a->s, r->b->s
    v = verify(cycle4(2), [0, 0, 0, 0])
    assert not v.ok and v.certificate.side == {0} and v.certificate.out_degree == 1
    v = verify(inst(2, [(0, 1)], 0, [1], 1), [1])
    assert not v and v.certificate.out_degree == 0


def test_verify_reports_first_failing_terminal():
    i = inst(3, [(0, 1), (0, 2)], 0, [1, 2], 1)
    assert verify(i, [1, 1]).certificate.separated_terminal == 1
    assert verify(i, [0, 1]).certificate.separated_terminal == 2


def test_undirected_lambda():
    g = MultiGraph(4, CYCLE4)
    assert undirected_lambda(g, 0, 2) == 2
    assert undirected_lambda(MultiGraph(2, ((0, 1),)), 0, 1) == 1
    rng = random.Random(2)
    for _ in range(200):
        n = rng.randint(2, 7)
        g = random_multigraph(rng, n, rng.randint(0, 12))
        assert undirected_lambda(g, 0, 1) == brute_undirected_cut(g, 0, 1)


def test_nash_williams_examples():
    assert nash_williams_sufficient(cycle4(1))
    assert not nash_williams_sufficient(inst(2, [(0, 1)], 0, [1], 1))
    k5 = [(i, j) for i in range(5) for j in range(i + 1, 5)]
    for terms in ([1], [1, 2], [1, 2, 3, 4]):
        assert nash_williams_sufficient(inst(5, k5, 0, terms, 2))


def test_nash_williams_pairwise_equivalence():
    # the implementation checks only root-to-point pairs; compare with all pairs
    rng = random.Random(3)
    for _ in range(200):
        i = random_small_instance(rng)
        pts = [i.root, *i.terminals]
        full = all(undirected_lambda(i.graph, x, y) >= 2 * i.k for x, y in itertools.combinations(pts, 2))
        assert nash_williams_sufficient(i) == full


def test_necessary_cut_check():
    c = necessary_cut_check(cycle4(3))
    assert c is not None and c.out_degree == 2 and c.side == {0}
    assert necessary_cut_check(inst(2, [(0, 1), (0, 1)], 0, [1], 2)) is None
    rng = random.Random(4)
    for _ in range(150):
        i = random_small_instance(rng, max_m=10)
        if necessary_cut_check(i) is not None:
            assert brute_force_solve(i).is_no


def test_mixed_upper_bound():
    rng = random.Random(5)
    for _ in range(150):
        i = random_small_instance(rng, max_m=10)
        g, s = i.graph, i.terminals[0]
        assert mixed_upper_bound(i, [UNDECIDED] * g.m, s) == undirected_lambda(g, 0, s)
        o = [rng.randint(0, 1) for _ in range(g.m)]
        assert mixed_upper_bound(i, o, s) == lam(orient(g, o), 0, s)
        p = [x if rng.random() < 0.5 else UNDECIDED for x in o]
        bound = mixed_upper_bound(i, p, s)
        for _ in range(5):
            comp = [x if x != UNDECIDED else rng.randint(0, 1) for x in p]
            assert lam(orient(g, comp), 0, s) <= bound
        # deciding one more edge never raises the bound
        und = [e for e in range(g.m) if p[e] == UNDECIDED]
        if und:
            q = list(p)
            q[und[0]] = rng.randint(0, 1)
            assert mixed_upper_bound(i, q, s) <= bound


def test_arc_in_some_min_cut_examples():
    assert arc_in_some_min_cut(DiGraph(2, ((0, 1),)), 0, 1, 0)
    assert arc_in_some_min_cut(DiGraph(2, ((0, 1), (0, 1))), 0, 1, 1, k=2)
    # r=0, a=1, s=2, b=3 with arcs r->a, a->s, a->b, b->a: the only tight
    # cuts are {r} and {r,a,b}, so b->a leaves none of them
    d = DiGraph(4, ((0, 1), (1, 2), (1, 3), (3, 1)))
    tight = [U for U in all_cuts(4, 0, 2) if d.out_degree_of_set(U) == 1]
    assert sorted(map(sorted, tight)) == [[0], [0, 1, 3]]
    assert not arc_in_some_min_cut(d, 0, 2, 3, k=1)
    assert arc_in_some_min_cut(d, 0, 2, 0, k=1)
    with pytest.raises(GraphError):
        arc_in_some_min_cut(d, 0, 2, 0, k=2)


def test_arc_in_some_min_cut_matches_enumeration():
    rng = random.Random(6)
    for _ in range(200):
        d = random_digraph(rng, rng.randint(2, 6), rng.randint(1, 10))
        k = lam(d, 0, 1)
        if k == 0:
            continue
        tight = [U for U in all_cuts(d.n, 0, 1) if d.out_degree_of_set(U) == k]
        for a, (u, v) in enumerate(d.arcs):
            assert arc_in_some_min_cut(d, 0, 1, a, k) == any(u in U and v not in U for U in tight)


def test_constrained_min_cut():
    rng = random.Random(7)
    for _ in range(300):
        n = rng.randint(3, 7)
        d = random_digraph(rng, n, rng.randint(0, 12))
        assert constrained_min_cut(d, 0, 1).out_degree == min_cut(d, 0, 1).out_degree
        inside = {v for v in range(2, n) if rng.random() < 0.3}
        outside = {v for v in range(2, n) if v not in inside and rng.random() < 0.3}
        c = constrained_min_cut(d, 0, 1, inside, outside)
        best = min(d.out_degree_of_set(U) for U in all_cuts(n, 0, 1) if inside <= U and not (outside & U))
        assert c.out_degree == best == d.out_degree_of_set(c.side)
        assert inside <= c.side and not (outside & c.side)
    d = DiGraph(4, ((0, 1), (1, 2), (2, 3), (0, 3)))
    c = constrained_min_cut(d, 0, 3, {1, 2})
    assert c.side == {0, 1, 2} and c.out_degree == d.in_degree(3)
    assert constrained_min_cut(d, 0, 3, {1}, {1}) is None


def test_adding_path_through_v_raises_lambda_by_one():
    rng = random.Random(8)
    for _ in range(300):
        n = rng.randint(3, 7)
        d = random_digraph(rng, n, rng.randint(0, 12))
        v = rng.randrange(2, n)
        assert lam(d.add_arcs([(0, v), (v, 1)]), 0, 1) == lam(d, 0, 1) + 1
