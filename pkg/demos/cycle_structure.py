"""Cycle and cut diagnostics on a small digraph."""
from steiner_orient import DiGraph
from steiner_orient.structure import (
    all_tight_cuts,
    find_s_ordered_witness,
    is_s_essential,
    min_feedback_arc_set,
    min_feedback_vertex_set,
    minimal_flow_support,
    simple_cycles,
)

# r=0 -> 1 -> 2 -> 3 -> 4 -> s=5 with back arcs 2->1 and 4->3
d = DiGraph(6, ((0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (2, 1), (4, 3)))
cycles = simple_cycles(d)
print("cycles (arc ids):", cycles)
print("min feedback arc set:", sorted(min_feedback_arc_set(d).items))
print("min feedback vertex set:", sorted(min_feedback_vertex_set(d).items))
print("tight cuts for s=5:", sorted(sorted(c) for c in all_tight_cuts(d, 0, 5, 1)))
for c in cycles:
    print("cycle", c, "essential:", is_s_essential(d, 0, 5, c, 1))
w = find_s_ordered_witness(d, 0, 5, cycles, 1)
print("ordered witness cuts:", [sorted(c.side) for c in w.cuts])
print("reverse order has a witness:", find_s_ordered_witness(d, 0, 5, cycles[::-1], 1) is not None)
print("minimal flow support:", sorted(minimal_flow_support(d, 0, 5, 1).arcs))
