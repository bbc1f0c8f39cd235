"""Bispans X <- A -> B -> Y: composition, the exponential rule, and graded bases.

Run: python3 demos/04_polynomial_calculus.py
"""
import numpy as np

from eqalg.burnside import burnside_ring, cp_norm_closed_form
from eqalg.groups import build_group
from eqalg.gsets import GMap, disjoint_union, make_orbit, orbit_map, point
from eqalg.polynomials import (
    Polynomial, compose, count_poly_basis, evaluate_on_burnside, over_orbit_to_burnside, poly_basis,
    underlying_ring_check,
)
from eqalg.transfer import complete_system, enumerate_systems, trivial_system

G = build_group("C3")
free = make_orbit(G, G.trivial)
two, _ = disjoint_union(free, free)
fold = GMap(two, free, np.concatenate([np.arange(3)] * 2))
norm = Polynomial.norm(orbit_map(G, G.trivial, point(G), 0))

# norm after transfer: the exponential rule turns the word into a single bispan
word = compose(norm, Polynomial.transfer(fold))
print("N o T along the fold, in the transitive basis:", word)

# evaluating on the Burnside functor recovers the norm of a sum
ring = burnside_ring(G)
U, _ = disjoint_union(free, free, free)
u = GMap(U, two, [0, 1, 2, 3, 4, 5, 0, 1, 2])
V, v = evaluate_on_burnside(word.realize(), U, u)
print("norm(2 + 1) =", over_orbit_to_burnside(V, v, ring), "expected", cp_norm_closed_form(G, 3))

# graded basis of the free Tambara functor on one underlying generator
for name, O in (("trivial", trivial_system(G)), ("complete", complete_system(G))):
    keys = poly_basis(O, free, G.whole.id, 3)
    counts = count_poly_basis(O, free, G.whole.id, 6)
    print(f"{name:>8}: {len(keys)} classes with |A| <= 3; counts by |A| up to 6: {counts}")

# at the underlying level every system gives a polynomial ring on [G:H] variables
C4 = build_group("C4")
for O in enumerate_systems(C4):
    r = underlying_ring_check(O, 1, 3)
    print(f"C4 system {sorted(O.nontrivial_pairs())}: classes per degree {r.counts}, ok {r.ok}")
