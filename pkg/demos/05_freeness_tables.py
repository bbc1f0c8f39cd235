"""When is a free incomplete Tambara functor free as a Mackey functor?

Prints the regenerated freeness tables, the counts behind the depth bound,
and a group whose quotient is not solvable, where the verdict stays open.

Run: python3 demos/05_freeness_tables.py
"""
from eqalg.classify import TABLE_GROUPS, appendix_table, classify, compare_with_golden, stats
from eqalg.groups import build_group
from eqalg.transfer import trivial_system

for name in TABLE_GROUPS:
    G = build_group(name)
    print(appendix_table(G).render("txt"))
    print(f"matches stored table: {compare_with_golden(G).ok}\n")

print("group   n    T    P   d   P/T <= 1/d")
for name in ("C2", "C4", "C8", "C6", "D6", "C12", "A4"):
    s = stats(build_group(name))
    print(f"{name:<6}{s.n:3d}{s.T:5d}{s.P:5d}{s.d:4d}   {s.bound_holds}")

A5 = build_group("A5")
v = classify(A5, trivial_system(A5), A5.trivial)
print(f"\nA5, trivial system, generator at A5/e: {v.status}")
for c in v.reasons:
    print(f"  {c.name}: {c.holds}")
