"""Generators for the NP-hardness constructions, with assignment converters.

Literals in 2-CNF formulas are nonzero ints: ``+(v+1)`` for variable ``v``
and ``-(v+1)`` for its negation. Assignments are tuples of bools.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .connectivity import SteinerInstance, verify
from .graph import AS_LISTED, REVERSED, UNDECIDED, GraphError, MultiGraph

SAT_LIMIT = 20


class FormulaError(ValueError):
    pass


@dataclass(frozen=True)
class NaeFormula:
    variable_count: int
    clauses: tuple

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(int(x) for x in c) for c in self.clauses))
        for i, c in enumerate(self.clauses):
            if len(c) != 3:
                raise FormulaError(f"clause {i} has {len(c)} variables, expected 3")
            if any(not 0 <= x < self.variable_count for x in c):
                raise FormulaError(f"clause {i} refers to a variable out of range")

    @property
    def has_repeats(self) -> bool:
        return any(len(set(c)) < 3 for c in self.clauses)

    def satisfied_by(self, a: Sequence[bool]) -> bool:
        return self.first_violated(a) is None

    def first_violated(self, a) -> Optional[int]:
        for i, c in enumerate(self.clauses):
            if len({bool(a[x]) for x in c}) == 1:
                return i
        return None


def _var(lit: int) -> int:
    return abs(lit) - 1


def _lit_true(lit: int, a) -> bool:
    return bool(a[_var(lit)]) == (lit > 0)


@dataclass(frozen=True)
class TwoCnf:
    variable_count: int
    clauses: tuple
    k: int = 0

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(int(l) for l in c) for c in self.clauses))
        for i, c in enumerate(self.clauses):
            if len(c) != 2:
                raise FormulaError(f"clause {i} has {len(c)} literals, expected 2")
            if any(l == 0 or not 0 <= _var(l) < self.variable_count for l in c):
                raise FormulaError(f"clause {i} has a literal out of range")

    def satisfied_count(self, a) -> int:
        return sum(1 for c in self.clauses if any(_lit_true(l, a) for l in c))

    def satisfied_by(self, a) -> bool:
        return self.satisfied_count(a) >= self.k


def intersection_conflicts(clauses, coloring) -> list:
    """Pairs of same-coloured clauses sharing a variable."""
    bad = []
    for i in range(len(clauses)):
        vi = {_var(l) for l in clauses[i]}
        for j in range(i + 1, len(clauses)):
            if coloring[i] == coloring[j] and vi & {_var(l) for l in clauses[j]}:
                bad.append((i, j))
    return bad


@dataclass(frozen=True)
class ColoredTwoCnf:
    variable_count: int
    clauses: tuple
    coloring: tuple
    thresholds: tuple

    def __post_init__(self):
        TwoCnf(self.variable_count, self.clauses)  # literal checks
        object.__setattr__(self, "clauses", tuple(tuple(int(l) for l in c) for c in self.clauses))
        object.__setattr__(self, "coloring", tuple(int(c) for c in self.coloring))
        object.__setattr__(self, "thresholds", tuple(int(k) for k in self.thresholds))
        if len(self.coloring) != len(self.clauses):
            raise FormulaError("coloring length differs from clause count")
        if any(c not in (1, 2, 3) for c in self.coloring):
            raise FormulaError("colours must be 1, 2 or 3")
        if len(self.thresholds) != 3:
            raise FormulaError("need three thresholds")
        bad = intersection_conflicts(self.clauses, self.coloring)
        if bad:
            raise FormulaError(f"coloring not proper: clauses {bad[0]} share a variable")
        for i, k in enumerate(self.thresholds, start=1):
            if not 0 <= k <= self.class_size(i):
                raise FormulaError(f"threshold k{i}={k} outside [0, {self.class_size(i)}]")

    def class_size(self, i: int) -> int:
        return sum(1 for c in self.coloring if c == i)

    def class_counts(self, a) -> tuple:
        cnt = [0, 0, 0]
        for c, col in zip(self.clauses, self.coloring):
            if any(_lit_true(l, a) for l in c):
                cnt[col - 1] += 1
        return tuple(cnt)

    def satisfied_by(self, a) -> bool:
        return all(c >= k for c, k in zip(self.class_counts(a), self.thresholds))


@dataclass(frozen=True)
class ModifiedInstance:
    """Steiner instance with three terminals where every edge leaving Y must
    be directed away from Y."""

    instance: SteinerInstance
    Y: frozenset

    def __post_init__(self):
        object.__setattr__(self, "Y", frozenset(self.Y))
        if self.instance.root not in self.Y:
            raise GraphError("root must lie in Y")
        if self.Y & set(self.instance.terminals):
            raise GraphError("Y must avoid the terminals")

    def boundary(self) -> list:
        """Edge ids with exactly one endpoint in Y, ascending."""
        return [e for e, (u, v) in enumerate(self.instance.graph.edges) if (u in self.Y) != (v in self.Y)]

    def preoriented(self) -> tuple:
        p = [UNDECIDED] * self.instance.graph.m
        for e in self.boundary():
            u, v = self.instance.graph.edges[e]
            p[e] = AS_LISTED if u in self.Y else REVERSED
        return tuple(p)

    def respects(self, o) -> bool:
        return all(o[e] == d for e, d in enumerate(self.preoriented()) if d != UNDECIDED)


# ---------------------------------------------------------------------------
# Brute-force satisfiability


def _assignment_bits(n: int):
    idx = np.arange(1 << n, dtype=np.int64)
    return [((idx >> v) & 1).astype(bool) for v in range(n)]


def _lit_array(bits, lit):
    x = bits[_var(lit)]
    return x if lit > 0 else ~x


def brute_force_sat(f) -> Optional[tuple]:
    """First satisfying assignment in binary counting order, or None."""
    n = f.variable_count
    if n > SAT_LIMIT:
        raise FormulaError(f"brute force limited to {SAT_LIMIT} variables, formula has {n}")
    bits = _assignment_bits(n)
    size = 1 << n
    if isinstance(f, NaeFormula):
        ok = np.ones(size, dtype=bool)
        for c in f.clauses:
            a, b, d = (bits[x] for x in c)
            ok &= ~((a == b) & (b == d))
    elif isinstance(f, TwoCnf):
        cnt = np.zeros(size, dtype=np.int32)
        for c in f.clauses:
            cnt += _lit_array(bits, c[0]) | _lit_array(bits, c[1])
        ok = cnt >= f.k
    elif isinstance(f, ColoredTwoCnf):
        cnts = [np.zeros(size, dtype=np.int32) for _ in range(3)]
        for c, col in zip(f.clauses, f.coloring):
            cnts[col - 1] += _lit_array(bits, c[0]) | _lit_array(bits, c[1])
        ok = np.ones(size, dtype=bool)
        for cnt, k in zip(cnts, f.thresholds):
            ok &= cnt >= k
    else:
        raise TypeError(f"unsupported formula type {type(f).__name__}")
    hits = np.flatnonzero(ok)
    if not len(hits):
        return None
    i = int(hits[0])
    return tuple(bool(i >> v & 1) for v in range(n))


def max2sat_optimum(f: TwoCnf) -> int:
    n = f.variable_count
    if n > SAT_LIMIT:
        raise FormulaError("too many variables")
    bits = _assignment_bits(n)
    cnt = np.zeros(1 << n, dtype=np.int32)
    for c in f.clauses:
        cnt += _lit_array(bits, c[0]) | _lit_array(bits, c[1])
    return int(cnt.max()) if len(f.clauses) else 0


# ---------------------------------------------------------------------------
# MNAE-3-SAT -> k = 2


@dataclass(frozen=True)
class NaeLayout:
    """Vertex and edge ids of the generated k=2 instance."""

    u: tuple  # u[x] = (u_x^1, u_x^2)
    s_var: tuple
    occ: dict  # (clause, side, position) -> vertex
    uu_edge: tuple  # per variable, edge u_x^1 -- u_x^2


def nae_layout(f: NaeFormula) -> NaeLayout:
    nx = f.variable_count
    u = tuple((3 + 2 * x, 4 + 2 * x) for x in range(nx))
    s_var = tuple(3 + 2 * nx + x for x in range(nx))
    occ = {}
    nxt = 3 + 3 * nx
    for c in range(len(f.clauses)):
        for side in (0, 1):
            for p in range(3):
                occ[(c, side, p)] = nxt
                nxt += 1
    uu_start = 2 + 2 * nx
    return NaeLayout(u, s_var, occ, tuple(uu_start + x for x in range(nx)))


def _triangle_order(clause) -> list:
    """Occurrence positions in ascending (variable, position) order."""
    return sorted(range(3), key=lambda p: (clause[p], p))


def gen_mnae_to_k2(f: NaeFormula) -> SteinerInstance:
    lay = nae_layout(f)
    nx, ncl = f.variable_count, len(f.clauses)
    r, z = 0, (1, 2)
    edges = [(r, z[0]), (r, z[1])]
    for i in (0, 1):
        edges += [(z[i], lay.u[x][i]) for x in range(nx)]
    edges += [(lay.u[x][0], lay.u[x][1]) for x in range(nx)]
    for i in (0, 1):
        edges += [(lay.u[x][i], lay.s_var[x]) for x in range(nx)]
    for i in (0, 1):
        for c, clause in enumerate(f.clauses):
            edges += [(lay.u[x][i], lay.occ[(c, i, p)]) for p, x in enumerate(clause)]
    for i in (0, 1):
        for c, clause in enumerate(f.clauses):
            a, b, d = (lay.occ[(c, i, p)] for p in _triangle_order(clause))
            edges += [(a, b), (b, d), (d, a)]
    n = 3 + 3 * nx + 6 * ncl
    terminals = list(lay.s_var) + [lay.occ[key] for key in sorted(lay.occ)]
    inst = SteinerInstance(MultiGraph(n, tuple(edges)), r, tuple(terminals), 2)
    if not side_condition(inst):
        raise AssertionError("degree identity violated by construction")
    return inst


def side_condition(inst: SteinerInstance, k: Optional[int] = None) -> bool:
    """Check d(S) + |E(G[S])| = k|S| (k defaults to the instance's)."""
    k = inst.k if k is None else k
    S = set(inst.terminals)
    cut = inside = 0
    for u, v in inst.graph.edges:
        if (u in S) != (v in S):
            cut += 1
        elif u in S:
            inside += 1
    return cut + inside == k * len(S)


def nae_assignment_to_orientation(f: NaeFormula, a: Sequence[bool]) -> tuple:
    bad = f.first_violated(a)
    if bad is not None:
        raise FormulaError(f"clause {bad} is all-equal under the assignment")
    inst_m = 2 + 2 * f.variable_count + f.variable_count + 2 * f.variable_count + 12 * len(f.clauses)
    o = [AS_LISTED] * inst_m
    lay = nae_layout(f)
    for x, e in enumerate(lay.uu_edge):
        o[e] = AS_LISTED if a[x] else REVERSED
    return tuple(o)


def orientation_to_nae_assignment(f: NaeFormula, o: Sequence[int], check: bool = True) -> tuple:
    if check:
        inst = gen_mnae_to_k2(f)
        if not verify(inst, o):
            raise GraphError("orientation is not feasible for the generated instance")
    lay = nae_layout(f)
    return tuple(o[e] == AS_LISTED for e in lay.uu_edge)


def lift_k(inst: SteinerInstance, k_target: int) -> SteinerInstance:
    """Add k_target-2 hub vertices, each joined to the root and every terminal."""
    if inst.k != 2:
        raise GraphError("lift_k expects a k=2 instance")
    if k_target < 2:
        raise GraphError("k_target must be at least 2")
    if not side_condition(inst):
        raise GraphError("side condition d(S)+|E(G[S])| = 2|S| fails")
    g = inst.graph
    edges = list(g.edges)
    for j in range(k_target - 2):
        w = g.n + j
        edges.append((inst.root, w))
        edges += [(w, s) for s in inst.terminals]
    return SteinerInstance(MultiGraph(g.n + k_target - 2, tuple(edges)), inst.root, inst.terminals, k_target)


def lift_k_orientation(o: Sequence[int], lifted: SteinerInstance) -> tuple:
    return tuple(o) + (AS_LISTED,) * (lifted.graph.m - len(o))


def unlift_k_orientation(inst: SteinerInstance, o: Sequence[int]) -> tuple:
    return tuple(o[: inst.graph.m])


# ---------------------------------------------------------------------------
# MAX-2-SAT -> 3-COL-MAX-2-SAT


@dataclass(frozen=True)
class ColoredLayout:
    copies: tuple  # copies[i] = variable ids x_{i,1..m'_i}
    rewritten: int  # number of leading rewritten clauses


def gen_max2sat_to_3col(f: TwoCnf):
    """Return ``(colored_formula, layout)``.

    Clause order: rewritten clauses first (input order), then each
    variable's chain in variable order. Chain clause ``j`` gets colour 1
    for even ``j`` and 2 for odd ``j``.
    """
    for i, c in enumerate(f.clauses):
        if _var(c[0]) == _var(c[1]):
            raise FormulaError(f"clause {i} mentions a variable twice")
    if f.k > len(f.clauses):
        raise FormulaError(f"k={f.k} exceeds the clause count {len(f.clauses)}")
    n = f.variable_count
    occ = [0] * n
    for c in f.clauses:
        for l in c:
            occ[_var(l)] += 1
    copies = []
    nxt = 0
    for i in range(n):
        mi = occ[i] + (occ[i] % 2)
        copies.append(tuple(range(nxt, nxt + mi)))
        nxt += mi
    seen = [0] * n
    rewritten = []
    for c in f.clauses:
        new = []
        for l in c:
            v = _var(l)
            cp = copies[v][seen[v]]
            seen[v] += 1
            new.append(cp + 1 if l > 0 else -(cp + 1))
        rewritten.append(tuple(new))
    clauses = list(rewritten)
    coloring = [3] * len(rewritten)
    for i in range(n):
        cp = copies[i]
        for j in range(len(cp)):
            clauses.append((cp[j] + 1, -(cp[(j + 1) % len(cp)] + 1)))
            coloring.append(1 if j % 2 == 0 else 2)
    k1, k2 = coloring.count(1), coloring.count(2)
    out = ColoredTwoCnf(nxt, tuple(clauses), tuple(coloring), (k1, k2, max(0, f.k)))
    return out, ColoredLayout(tuple(copies), len(rewritten))


def max2sat_assignment_to_colored(lay: ColoredLayout, a) -> tuple:
    total = sum(len(c) for c in lay.copies)
    out = [False] * total
    for i, cp in enumerate(lay.copies):
        for v in cp:
            out[v] = bool(a[i])
    return tuple(out)


def colored_assignment_to_max2sat(lay: ColoredLayout, a) -> tuple:
    return tuple(bool(a[cp[0]]) if cp else False for cp in lay.copies)


# ---------------------------------------------------------------------------
# 3-COL-MAX-2-SAT -> modified three-terminal instance


@dataclass(frozen=True)
class ModifiedLayout:
    u: tuple  # u[x] = (u_x, u_notx)
    v: tuple  # per clause
    s: tuple  # (s1, s2, s3)
    uu_edge: tuple  # per variable, edge listed u_x -> u_notx


def gen_3col_to_modified(f: ColoredTwoCnf):
    """Return ``(modified_instance, layout)``; every edge is listed in the
    direction a satisfying assignment orients it, except the u_x--u_notx
    edges (listed u_x first)."""
    if not f.clauses:
        raise FormulaError("need at least one clause")
    for i, c in enumerate(f.clauses):
        if _var(c[0]) == _var(c[1]):
            raise FormulaError(f"clause {i} mentions a variable twice")
    nx, nc = f.variable_count, len(f.clauses)
    r = 0
    u = tuple((1 + 2 * x, 2 + 2 * x) for x in range(nx))
    v = tuple(1 + 2 * nx + j for j in range(nc))
    s = tuple(1 + 2 * nx + nc + i for i in range(3))
    k = 3 * nc

    def lit_vertex(l):
        return u[_var(l)][0 if l > 0 else 1]

    edges = []
    for x in range(nx):
        edges += [(r, u[x][0]), (r, u[x][1])]
    uu = []
    for x in range(nx):
        uu.append(len(edges))
        edges.append((u[x][0], u[x][1]))
    for j, c in enumerate(f.clauses):
        for l in c:
            edges += [(lit_vertex(l), v[j])] * 2
    for j, col in enumerate(f.coloring):
        edges += [(v[j], s[col - 1])] * 3
    for i in range(3):
        edges += [(r, s[i])] * (k - (2 * f.class_size(i + 1) + f.thresholds[i]))
    n = 1 + 2 * nx + nc + 3
    inst = SteinerInstance(MultiGraph(n, tuple(edges)), r, s, k)
    Y = {r} | {w for pair in u for w in pair}
    return ModifiedInstance(inst, frozenset(Y)), ModifiedLayout(u, v, s, tuple(uu))


def colored_assignment_to_modified_orientation(f: ColoredTwoCnf, lay: ModifiedLayout, a) -> tuple:
    if not f.satisfied_by(a):
        raise FormulaError(f"assignment misses a threshold: counts {f.class_counts(a)}, need {f.thresholds}")
    mi, _ = gen_3col_to_modified(f)
    o = [AS_LISTED] * mi.instance.graph.m
    for x, e in enumerate(lay.uu_edge):
        o[e] = REVERSED if a[x] else AS_LISTED  # True: u_notx -> u_x
    return tuple(o)


def modified_orientation_to_colored_assignment(lay: ModifiedLayout, o) -> tuple:
    return tuple(o[e] == REVERSED for e in lay.uu_edge)


# ---------------------------------------------------------------------------
# modified three-terminal -> four terminals


@dataclass(frozen=True)
class FourTermLayout:
    boundary: tuple  # edge ids of delta(Y) in the modified instance
    a: tuple
    b: tuple
    s_prime: tuple
    s_star: int
    kept: tuple  # kept[e] = new id of a non-boundary edge, else -1
    path_edges: tuple  # per boundary edge: (y-a, a-b, b-y') ids


def gen_modified_to_4term(mi: ModifiedInstance):
    inst = mi.instance
    if inst.t != 3:
        raise GraphError(f"modified instance needs 3 terminals, has {inst.t}")
    g, r, k, Y = inst.graph, inst.root, inst.k, mi.Y
    bnd = mi.boundary()
    n = g.n
    a = tuple(n + 2 * j for j in range(len(bnd)))
    b = tuple(n + 2 * j + 1 for j in range(len(bnd)))
    base = n + 2 * len(bnd)
    sp = (base, base + 1, base + 2)
    star = base + 3
    edges = []
    kept = [-1] * g.m
    bset = set(bnd)
    for e, uv in enumerate(g.edges):
        if e not in bset:
            kept[e] = len(edges)
            edges.append(uv)
    paths = []
    for j, e in enumerate(bnd):
        u, w = g.edges[e]
        y, y2 = (u, w) if u in Y else (w, u)
        paths.append((len(edges), len(edges) + 1, len(edges) + 2))
        edges += [(y, a[j]), (a[j], b[j]), (b[j], y2), (b[j], star)]
    edges += [(r, star)] * k
    for i, s in enumerate(inst.terminals):
        edges += [(s, sp[i])] * k
    for j in range(len(bnd)):
        edges.append((r, a[j]))
        edges += [(a[j], sp[i]) for i in range(3)]
    kp = k + len(bnd)
    out = SteinerInstance(MultiGraph(star + 1, tuple(edges)), r, sp + (star,), kp)
    return out, FourTermLayout(tuple(bnd), a, b, sp, star, tuple(kept), tuple(paths))


def modified_to_4term_orientation(mi: ModifiedInstance, lay: FourTermLayout, o, four: SteinerInstance) -> tuple:
    """Carry an orientation of the modified instance to the 4-terminal one."""
    g = mi.instance.graph
    r = mi.instance.root
    out = [AS_LISTED] * four.graph.m
    for e, ne in enumerate(lay.kept):
        if ne >= 0:
            d = o[e]
            u, v = g.edges[e]
            if r in (u, v):
                d = AS_LISTED if u == r else REVERSED
            out[ne] = d
    return tuple(out)


def four_to_modified_orientation(mi: ModifiedInstance, lay: FourTermLayout, o) -> tuple:
    pre = mi.preoriented()
    return tuple(pre[e] if ne < 0 else o[ne] for e, ne in enumerate(lay.kept))


def pad_terminals(inst: SteinerInstance, t_target: int) -> SteinerInstance:
    if t_target < inst.t:
        raise GraphError(f"t_target={t_target} below current t={inst.t}")
    g = inst.graph
    extra = t_target - inst.t
    edges = list(g.edges)
    for j in range(extra):
        edges += [(inst.root, g.n + j)] * inst.k
    return SteinerInstance(MultiGraph(g.n + extra, tuple(edges)), inst.root,
                           inst.terminals + tuple(g.n + j for j in range(extra)), inst.k)


# ---------------------------------------------------------------------------
# Small fixed examples


def nae_example() -> tuple:
    """Five variables, one clause on the first three; assignment F,T,T,F,T."""
    return NaeFormula(5, ((0, 1, 2),)), (False, True, True, False, True)


def colored_example() -> ColoredTwoCnf:
    x = lambda i: i  # noqa: E731  1-based positive literal
    classes = [
        [(x(1), x(2)), (x(3), -x(4)), (-x(5), x(6))],
        [(x(1), -x(3)), (-x(2), x(4)), (-x(5), -x(6))],
        [(-x(2), -x(4)), (x(5), -x(6))],
    ]
    clauses, coloring = [], []
    for col, cl in enumerate(classes, start=1):
        clauses += cl
        coloring += [col] * len(cl)
    return ColoredTwoCnf(6, tuple(clauses), tuple(coloring), (2, 3, 2))


COLORED_EXAMPLE_ASSIGNMENT = (True, False, False, True, False, False)
