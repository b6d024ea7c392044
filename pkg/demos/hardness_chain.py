"""Walk the hardness constructions on small formulas."""
from steiner_orient import solve, verify
from steiner_orient.hardness import (
    COLORED_EXAMPLE_ASSIGNMENT,
    TwoCnf,
    brute_force_sat,
    colored_assignment_to_modified_orientation,
    colored_example,
    gen_3col_to_modified,
    gen_max2sat_to_3col,
    gen_mnae_to_k2,
    gen_modified_to_4term,
    lift_k,
    modified_to_4term_orientation,
    nae_assignment_to_orientation,
    nae_example,
    orientation_to_nae_assignment,
)

f, a = nae_example()
inst = gen_mnae_to_k2(f)
print(f"NAE formula with {f.variable_count} variables -> k=2 instance, "
      f"{inst.graph.n} vertices, {inst.graph.m} edges, {inst.t} terminals")
o = nae_assignment_to_orientation(f, a)
print("assignment", a, "-> orientation feasible:", verify(inst, o).ok)
res = solve(inst)
print("solver:", res.kind, "-> extracted assignment", orientation_to_nae_assignment(f, res.orientation))
up = lift_k(inst, 3)
print("lifted to k=3:", up.graph.n, "vertices,", up.graph.m, "edges")

col = colored_example()
mi, lay = gen_3col_to_modified(col)
four, fl = gen_modified_to_4term(mi)
print(f"colored formula: class sizes {[col.class_size(i) for i in (1, 2, 3)]}, thresholds {col.thresholds}")
print(f"three-terminal instance: {mi.instance.graph.n} vertices, {mi.instance.graph.m} edges, k={mi.instance.k}")
print(f"four-terminal instance: {four.graph.n} vertices, {four.graph.m} edges, k={four.k}")
om = colored_assignment_to_modified_orientation(col, lay, COLORED_EXAMPLE_ASSIGNMENT)
o4 = modified_to_4term_orientation(mi, fl, om, four)
print("example assignment carried through both steps, feasible:", verify(mi.instance, om).ok, verify(four, o4).ok)

m2 = TwoCnf(2, ((1, 2), (-1, 2), (1, -2), (-1, -2)), 3)
c2, _ = gen_max2sat_to_3col(m2)
print("MAX-2-SAT with 4 clauses, k=3 ->", len(c2.clauses), "colored clauses; satisfiable:",
      brute_force_sat(c2) is not None)
