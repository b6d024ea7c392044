"""Solve a small instance, check the witness, and show a failing certificate."""
from steiner_orient import SteinerInstance, MultiGraph, orient, solve, verify
from steiner_orient.connectivity import lam
from steiner_orient.solver import maximize_k

# root 0, terminal 3; two routes plus a doubled middle edge
g = MultiGraph(4, ((0, 1), (0, 2), (1, 3), (2, 3), (1, 2), (1, 2)))
inst = SteinerInstance(g, 0, (3,), 2)

res = solve(inst)
print("verdict:", res.kind, "search nodes:", res.nodes)
d = orient(g, res.orientation)
print("arcs:", d.arcs)
print("arc-disjoint 0->3 paths:", lam(d, 0, 3))
print("verify:", verify(inst, res.orientation).ok)

bad = tuple(1 - x for x in res.orientation)
v = verify(inst, bad)
c = v.certificate
print("reversed orientation ok?", v.ok, "| cut side", sorted(c.side), "out-degree", c.out_degree,
      "separates terminal", c.separated_terminal)

best, _, stop = maximize_k(SteinerInstance(g, 0, (3,), 1))
print("largest feasible k:", best, "(exact)" if stop.is_no else "(budget)")
