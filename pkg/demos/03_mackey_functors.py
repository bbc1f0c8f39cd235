"""Free Mackey functors, their base change to cohomological functors, and
the two exact sequences over C_p.

Run: python3 demos/03_mackey_functors.py
"""
from eqalg.groups import build_group
from eqalg.gsets import make_orbit
from eqalg.mackey import double_coset_count, free_mackey, verify_cp_resolutions, z_base_change_free

G = build_group("D6")
C3 = next(s for s in G.subgroups if s.order == 3)
T = make_orbit(G, C3)
M = free_mackey(T)
print("Free Mackey functor on D6/C3, ranks per level:", M.ranks())
print("Restrictions and transfers compose correctly:", M.check_functoriality())

print("\nBase change to the constant functor Z (free of rank #(K\\G/C3) at G/K):")
for K, pres in z_base_change_free(T).items():
    print(f"  level {K} (order {G.subgroups[K].order}): rank {pres.free_rank}, torsion {pres.torsion}, "
          f"double cosets {double_coset_count(G, K, C3.id)}")

for p in (2, 3, 5):
    report = verify_cp_resolutions(p)
    print(f"\nC{p}: both four-term sequences exact at every level: {report.ok}")
