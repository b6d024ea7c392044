"""Small builders and brute-force oracles shared by the test modules."""
import itertools

from steiner_orient.connectivity import SteinerInstance
from steiner_orient.graph import DiGraph, MultiGraph


def inst(n, edges, root, terms, k):
    return SteinerInstance(MultiGraph(n, tuple(edges)), root, tuple(terms), k)


# r=0, a=1, s=2, b=3
CYCLE4 = ((0, 1), (1, 2), (2, 3), (3, 0))


def cycle4(k):
    return inst(4, CYCLE4, 0, (2,), k)


def all_cuts(n, u, v):
    others = [x for x in range(n) if x not in (u, v)]
    for bits in range(1 << len(others)):
        yield frozenset({u} | {x for j, x in enumerate(others) if bits >> j & 1})


def brute_min_cut(d: DiGraph, u, v):
    return min(d.out_degree_of_set(U) for U in all_cuts(d.n, u, v))


def brute_undirected_cut(g: MultiGraph, u, v):
    return min(sum(1 for a, b in g.edges if (a in U) != (b in U)) for U in all_cuts(g.n, u, v))


def brute_disjoint_paths(d: DiGraph, u, v):
    """Largest number of arc-disjoint u-v paths by enumerating simple paths."""
    paths = []

    def rec(x, seen, used):
        if x == v:
            paths.append(frozenset(used))
            return
        for i, (a, b) in enumerate(d.arcs):
            if a == x and b not in seen:
                rec(b, seen | {b}, used + [i])

    rec(u, {u}, [])
    best = 0
    for r in range(1, len(paths) + 1):
        ok = any(all(not (p & q) for p, q in itertools.combinations(c, 2))
                 for c in itertools.combinations(paths, r))
        if not ok:
            break
        best = r
    return best
