"""Burnside rings: marks, the C_p transfer class, and norms as coinduction.

Run: python3 demos/01_burnside_rings.py
"""
from eqalg.burnside import burnside_ring, cp_norm_closed_form, cp_transfer_class, table_of_marks
from eqalg.groups import build_group

G = build_group("D6")
print("Table of marks of D6 (rows: orbits G/J, columns: fixed points under K):")
print(table_of_marks(G))

R = burnside_ring(G)
print(f"\nA(D6) has rank {R.rank}; the product of two free orbits is", R.basis(0) * R.basis(0))

for p in (2, 3, 5):
    t = cp_transfer_class(p)
    print(f"\nC{p}: t = [C{p}/e] satisfies t*t == {p}*t:", t * t == t * p)
    C = build_group(f"C{p}")
    base = burnside_ring(C, C.trivial)
    for a in (0, 1, 2, 3):
        coinduced = base.scalar(a).nm(C.whole)
        print(f"  norm of {a}: by coinduction {coinduced}, closed form agrees: "
              f"{coinduced == cp_norm_closed_form(C, a)}")
