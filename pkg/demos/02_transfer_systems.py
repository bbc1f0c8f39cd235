"""Transfer systems on small groups.

For cyclic p-groups the counts are Catalan numbers; for other groups the
lattice shape matters.  Each system is printed as its strict pairs K -> H.

Run: python3 demos/02_transfer_systems.py
"""
from math import comb

from eqalg.groups import build_group
from eqalg.transfer import count_systems, enumerate_systems, o_gen

for n in range(1, 5):
    G = build_group(f"C{2 ** n}")
    catalan = comb(2 * (n + 1), n + 1) // (n + 2)
    print(f"C{2 ** n:<3} {count_systems(G):4d} systems   Catalan({n + 1}) = {catalan}")

for name in ("C6", "D6", "C2xC2", "Q8"):
    print(f"{name:<6} {count_systems(build_group(name)):4d} systems")

G = build_group("D6")
orders = [s.order for s in G.subgroups]
print("\nD6 subgroup orders by id:", orders)
for i, O in enumerate(enumerate_systems(G)):
    pairs = ", ".join(f"{k}->{h}" for k, h in O.nontrivial_pairs()) or "(trivial)"
    print(f"  #{i}: {pairs}")

C3 = next(s for s in G.subgroups if s.order == 3)
# the largest system in which any norm landing in a subgroup containing C3 also starts in one
print("\nLargest system compatible with passing to the quotient by C3:", sorted(o_gen(G, C3).nontrivial_pairs()))
