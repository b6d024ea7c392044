"""Build the catalog of minimal k=1, t=2 instances and decide random 3-regular inputs with it."""
import random

from steiner_orient import solve
from steiner_orient.generators import random_three_regular
from steiner_orient.minors import catalog_decide, enumerate_minimal

for t in (1, 2, 3):
    cat = enumerate_minimal(1, t, 2 * t + 2)
    print(f"k=1 t={t}: {len(cat)} minimal instances, vertex counts {sorted({e.instance.graph.n for e in cat})}")

cat = enumerate_minimal(1, 2, 6)
print("the t=2 catalog entry:", cat.entries[0].instance.graph.edges)
rng = random.Random(4)
agree = 0
for _ in range(20):
    inst = random_three_regular(rng, rng.choice([6, 8, 10]), 1, 2, connected=rng.random() < 0.5)
    a = catalog_decide(inst, cat.entries, complete=True)
    b = solve(inst).kind
    agree += a == b
    print(f"n={inst.graph.n:2d} catalog={a:3s} solver={b}")
print(f"{agree}/20 agree")
