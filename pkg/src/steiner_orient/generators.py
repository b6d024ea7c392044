"""Seeded random corpora for tests, benchmarks and the CLI."""
from __future__ import annotations

import random
from typing import Optional

from .connectivity import SteinerInstance
from .graph import DiGraph, GraphError, MultiGraph
from .solver import RInstance


def _rng(seed_or_rng) -> random.Random:
    return seed_or_rng if isinstance(seed_or_rng, random.Random) else random.Random(seed_or_rng)


def random_multigraph(rng, n: int, m: int) -> MultiGraph:
    rng = _rng(rng)
    if n < 2 and m:
        raise GraphError("need two vertices for an edge")
    return MultiGraph(n, tuple(tuple(rng.sample(range(n), 2)) for _ in range(m)))


def random_instance(rng, n: int, m: int, k: int, t: int) -> SteinerInstance:
    """Uniform random edges; root 0 and ``t`` distinct random terminals."""
    rng = _rng(rng)
    if not 1 <= t <= n - 1:
        raise GraphError(f"t={t} needs 1 <= t <= n-1")
    terms = tuple(sorted(rng.sample(range(1, n), t)))
    return SteinerInstance(random_multigraph(rng, n, m), 0, terms, k)


def random_small_instance(rng, max_n: int = 7, max_m: int = 14, k_range=(1, 3), t_range=(1, 3)) -> SteinerInstance:
    rng = _rng(rng)
    n = rng.randint(2, max_n)
    m = rng.randint(1, max_m)
    k = rng.randint(*k_range)
    t = rng.randint(t_range[0], min(t_range[1], n - 1))
    return random_instance(rng, n, m, k, t)


def random_three_regular(rng, n: int, k: int, t: int, tries: int = 1000,
                         connected: bool = True) -> SteinerInstance:
    """Root 0 and terminals 1..t of degree k, all others of degree 3.

    Configuration model with rejection of loops (parallel edges allowed).
    """
    rng = _rng(rng)
    deg = [k] * (t + 1) + [3] * (n - t - 1)
    if sum(deg) % 2:
        raise GraphError("degree sum is odd")
    stubs = [v for v, d in enumerate(deg) for _ in range(d)]
    for _ in range(tries):
        rng.shuffle(stubs)
        edges = [(stubs[i], stubs[i + 1]) for i in range(0, len(stubs), 2)]
        if any(u == v for u, v in edges):
            continue
        g = MultiGraph(n, tuple((min(u, v), max(u, v)) for u, v in edges))
        if connected and not _is_connected(g):
            continue
        return SteinerInstance(g, 0, tuple(range(1, t + 1)), k)
    raise GraphError(f"no loopless sample after {tries} tries")


def _is_connected(g: MultiGraph) -> bool:
    seen, stack = {0}, [0]
    while stack:
        u = stack.pop()
        for w in g.neighbors(u):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == g.n


def random_digraph(rng, n: int, m: int) -> DiGraph:
    rng = _rng(rng)
    return DiGraph(n, tuple(tuple(rng.sample(range(n), 2)) for _ in range(m)))


def random_rinstance(rng, n: int, m: int, alpha_max: int = 4, pairs: Optional[int] = None) -> RInstance:
    """Random graph plus demands whose total is at most ``alpha_max``."""
    rng = _rng(rng)
    g = random_multigraph(rng, n, m)
    budget = rng.randint(1, alpha_max)
    dem = {}
    count = pairs if pairs is not None else rng.randint(1, budget)
    for _ in range(count):
        if budget == 0:
            break
        u, v = rng.sample(range(n), 2)
        req = rng.randint(1, budget)
        dem[(u, v)] = dem.get((u, v), 0) + req
        budget -= req
    return RInstance(g, dem)
