import itertools
import random

import pytest

from steiner_orient.connectivity import lam
from steiner_orient.generators import random_digraph, random_small_instance, random_three_regular
from steiner_orient.graph import DiGraph, GraphError, orient
from steiner_orient.minors import enumerate_minimal_digraphs
from steiner_orient.solver import solve
from steiner_orient.structure import (
    all_tight_cuts,
    check_lemma_minimality,
    cycle_vertices,
    find_s_ordered_witness,
    is_s_essential,
    max_disjoint_cycles,
    min_feedback_arc_set,
    min_feedback_vertex_set,
    minimal_flow_support,
    simple_cycles,
    tight_cut_lattice_check,
)

TWO_TWO_CYCLES = DiGraph(4, ((0, 1), (1, 0), (2, 3), (3, 2)))


def _acyclic_after(d, arcs=(), vertices=()):
    keep = [a for a in range(d.m) if a not in arcs and d.arcs[a][0] not in vertices and d.arcs[a][1] not in vertices]
    return not simple_cycles(DiGraph(d.n, tuple(d.arcs[a] for a in keep)))


def brute_fas(d):
    for r in range(d.m + 1):
        for sub in itertools.combinations(range(d.m), r):
            if _acyclic_after(d, arcs=set(sub)):
                return r


def brute_fvs(d):
    for r in range(d.n + 1):
        for sub in itertools.combinations(range(d.n), r):
            if _acyclic_after(d, vertices=set(sub)):
                return r


def brute_packing(d):
    cyc = simple_cycles(d)
    best = 0
    for r in range(1, d.n // 2 + 1):
        for sub in itertools.combinations(cyc, r):
            vs = [cycle_vertices(d, c) for c in sub]
            if sum(map(len, vs)) == len(frozenset().union(*vs)):
                best = r
                break
    return best


def test_feedback_trivial_cases():
    acyclic = DiGraph(3, ((0, 1), (1, 2), (0, 2)))
    assert len(min_feedback_arc_set(acyclic)) == 0 and min_feedback_arc_set(acyclic).exact
    assert len(min_feedback_vertex_set(acyclic)) == 0
    assert max_disjoint_cycles(acyclic) == ([], True)
    assert len(min_feedback_arc_set(DiGraph(2, ((0, 1), (1, 0))))) == 1
    assert len(min_feedback_vertex_set(TWO_TWO_CYCLES)) == 2
    cycles, exact = max_disjoint_cycles(TWO_TWO_CYCLES)
    assert len(cycles) == 2 and exact


def test_feedback_sets_match_brute_force():
    rng = random.Random(1)
    for _ in range(120):
        d = random_digraph(rng, rng.randint(2, 6), rng.randint(1, 10))
        fas, fvs = min_feedback_arc_set(d), min_feedback_vertex_set(d)
        assert fas.exact and fvs.exact
        assert len(fas) == brute_fas(d) and _acyclic_after(d, arcs=fas.items)
        assert len(fvs) == brute_fvs(d) and _acyclic_after(d, vertices=fvs.items)
        cycles, _ = max_disjoint_cycles(d)
        assert len(cycles) == brute_packing(d) <= len(fvs)


def test_greedy_fallback_is_flagged():
    rng = random.Random(2)
    d = random_digraph(rng, 8, 30)
    fas = min_feedback_arc_set(d, exact_limit=3)
    assert not fas.exact and _acyclic_after(d, arcs=fas.items)
    fvs = min_feedback_vertex_set(d, exact_limit=3)
    assert not fvs.exact and _acyclic_after(d, vertices=fvs.items)


def test_fas_equals_fvs_on_feasible_three_regular_orientations():
    rng = random.Random(3)
    checked = 0
    while checked < 25:
        k = rng.choice([1, 2])
        i = random_three_regular(rng, rng.choice([6, 8, 10]) - (k - 1), k, 2)
        r = solve(i)
        if not r.is_yes:
            continue
        d = orient(i.graph, r.orientation)
        assert len(min_feedback_arc_set(d)) == len(min_feedback_vertex_set(d))
        checked += 1


def test_flow_support_examples():
    s = minimal_flow_support(DiGraph(2, ((0, 1), (0, 1))), 0, 1, 2)
    assert s.arcs == {0, 1} and sorted(s.decomposition) == [(0,), (1,)]
    # r=0, s=1, a=2, b=3: r->a->s plus detour a->b->s
    d = DiGraph(4, ((0, 2), (2, 1), (2, 3), (3, 1)))
    s = minimal_flow_support(d, 0, 1, 1)
    assert len(s.decomposition) == 1 and s.arcs in ({0, 1}, {0, 2, 3})
    with pytest.raises(GraphError):
        minimal_flow_support(d, 0, 1, 2)


def test_flow_support_is_minimal_and_acyclic():
    rng = random.Random(4)
    for _ in range(150):
        d = random_digraph(rng, rng.randint(2, 7), rng.randint(1, 14))
        k = lam(d, 0, 1)
        if k == 0:
            continue
        s = minimal_flow_support(d, 0, 1, k)
        assert not simple_cycles(DiGraph(d.n, tuple(d.arcs[a] for a in sorted(s.arcs))))
        assert set().union(*map(set, s.decomposition)) == s.arcs and len(s.decomposition) == k
        for a in s.arcs:
            sub = DiGraph(d.n, tuple(d.arcs[b] for b in sorted(s.arcs - {a})))
            assert lam(sub, 0, 1) < k


def _brute_essential(d, r, s, cycle, k):
    vs = cycle_vertices(d, cycle)
    return any(vs & U and not vs <= U for U in all_tight_cuts(d, r, s, k))


def test_essential_examples():
    # r=0, a=1, s=2, b=3; tight cuts are {r} and {r,a,b}, neither splits {a,b}
    d = DiGraph(4, ((0, 1), (1, 2), (1, 3), (3, 1)))
    assert not is_s_essential(d, 0, 2, (2, 3), 1)
    assert not _brute_essential(d, 0, 2, (2, 3), 1)
    # the same cycle becomes essential once b feeds s
    d2 = DiGraph(4, ((0, 1), (1, 3), (3, 1), (3, 2)))
    assert is_s_essential(d2, 0, 2, (1, 2), 1)
    with pytest.raises(GraphError):
        is_s_essential(d, 0, 2, (2, 3), 2)


def test_essential_matches_cut_enumeration():
    rng = random.Random(5)
    checked = 0
    for _ in range(400):
        d = random_digraph(rng, rng.randint(3, 7), rng.randint(3, 14))
        k = lam(d, 0, 1)
        if k == 0:
            continue
        for c in simple_cycles(d, limit=200)[:10]:
            assert is_s_essential(d, 0, 1, c, k) == _brute_essential(d, 0, 1, c, k)
            checked += 1
    assert checked > 200


def _chain():
    # r=0, x1..x4 = 1..4, s=5; path r->x1->x2->x3->x4->s plus back arcs
    arcs = ((0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (2, 1), (4, 3))
    return DiGraph(6, arcs), (1, 5), (3, 6)


def _brute_ordered(d, r, s, cycles, k):
    vs = [cycle_vertices(d, c) for c in cycles]
    tight = all_tight_cuts(d, r, s, k)
    for i, v in enumerate(vs):
        if not any(all(vs[j] <= U for j in range(i)) and all(not (vs[j] & U) for j in range(i + 1, len(vs)))
                   and v & U and not v <= U for U in tight):
            return False
    return True


def test_ordered_witness_chain():
    d, c1, c2 = _chain()
    w = find_s_ordered_witness(d, 0, 5, [c1, c2], 1)
    assert w is not None and _brute_ordered(d, 0, 5, [c1, c2], 1)
    assert w.cuts[0].side == {0, 1} or (1 in w.cuts[0].side and 2 not in w.cuts[0].side)
    for i, cut in enumerate(w.cuts):
        assert cut.out_degree == 1 and d.out_degree_of_set(cut.side) == 1
    assert find_s_ordered_witness(d, 0, 5, [c2, c1], 1) is None
    assert not _brute_ordered(d, 0, 5, [c2, c1], 1)
    assert find_s_ordered_witness(d, 0, 5, [], 1).cycles == ()


def test_ordered_single_cycle_is_essential():
    rng = random.Random(6)
    for _ in range(200):
        d = random_digraph(rng, rng.randint(3, 6), rng.randint(3, 12))
        k = lam(d, 0, 1)
        if k == 0:
            continue
        cycles = simple_cycles(d, limit=200)
        for c in cycles[:5]:
            assert (find_s_ordered_witness(d, 0, 1, [c], k) is not None) == is_s_essential(d, 0, 1, c, k)
        # disjoint pairs against enumeration
        for c1, c2 in itertools.combinations(cycles[:6], 2):
            if cycle_vertices(d, c1) & cycle_vertices(d, c2):
                continue
            got = find_s_ordered_witness(d, 0, 1, [c1, c2], k) is not None
            assert got == _brute_ordered(d, 0, 1, [c1, c2], k)


def test_ordered_rejects_overlapping_cycles():
    d, c1, _ = _chain()
    with pytest.raises(GraphError):
        find_s_ordered_witness(d, 0, 5, [c1, c1], 1)


def _arc_minimal(d, root, terms, k):
    i = 0
    while i < d.m:
        dd = d.delete_arcs([i])
        if all(lam(dd, root, s) >= k for s in terms):
            d = dd
        else:
            i += 1
    return d


def test_lemma_sweep_on_enumerated_digraphs():
    for k, t in ((1, 1), (1, 2), (1, 3), (2, 1), (2, 2)):
        for rec in enumerate_minimal_digraphs(k, t, 6):
            assert check_lemma_minimality(rec.digraph, k, rec.terminals, rec.root).ok


def test_lemma_sweep_on_arc_minimal_digraphs():
    rng = random.Random(7)
    cycles = 0
    for _ in range(150):
        i = random_small_instance(rng, max_n=8, max_m=20, k_range=(1, 2))
        r = solve(i)
        if not r.is_yes:
            continue
        d = _arc_minimal(orient(i.graph, r.orientation), 0, i.terminals, i.k)
        rep = check_lemma_minimality(d, i.k, i.terminals, 0)
        assert rep.ok, rep.violations
        cycles += rep.cycles_checked
    assert cycles > 0


def test_lemma_negative_control():
    # r->s plus a redundant 2-cycle hanging off r: the cycle is in no support
    d = DiGraph(3, ((0, 1), (0, 2), (2, 0)))
    rep = check_lemma_minimality(d, 1, (1,), 0)
    assert not rep.ok and rep.violations[0][0] == "uncovered"


def test_tight_lattice_examples():
    rep = tight_cut_lattice_check(DiGraph(2, ((0, 1),)), 0, 1, 1)
    assert rep.ok and rep.cuts_found == 1
    # r=0, s=1, midpoints 2 and 3
    d = DiGraph(4, ((0, 2), (2, 1), (0, 3), (3, 1)))
    assert sorted(map(sorted, all_tight_cuts(d, 0, 1, 2))) == [[0], [0, 2], [0, 2, 3], [0, 3]]
    rep = tight_cut_lattice_check(d, 0, 1, 2, samples=40)
    assert rep.ok and rep.cuts_found == 4


def test_tight_lattice_random_orientations():
    rng = random.Random(8)
    for _ in range(120):
        i = random_small_instance(rng)
        r = solve(i)
        if not r.is_yes:
            continue
        d = orient(i.graph, r.orientation)
        for s in i.terminals:
            k = lam(d, 0, s)
            rep = tight_cut_lattice_check(d, 0, s, k, samples=20, seed=1)
            assert rep.ok
            tight = set(all_tight_cuts(d, 0, s, k))
            for a, b in itertools.combinations(tight, 2):
                assert a | b in tight and a & b in tight
