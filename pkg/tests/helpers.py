"""Shared fixtures-by-function and random generators for the property tests."""
from functools import lru_cache

import numpy as np

from eqalg.groups import SMALL_CATALOG, build_group
from eqalg.gsets import disjoint_union, empty_gset, make_orbit, orbit_map
from eqalg.polynomials import Polynomial

# enumerating every transfer system of C2xC2xC2 takes minutes
SWEEP_CATALOG = tuple(name for name in SMALL_CATALOG if name != "C2xC2xC2")


@lru_cache(maxsize=None)
def group(name):
    """One shared instance per catalog name, so per-group caches are reused."""
    return build_group(name)


def gset_from_orbits(G, subs):
    if not subs:
        return empty_gset(G)
    return disjoint_union(*(make_orbit(G, s) for s in subs))[0]


def random_gset(rng, G, max_orbits=2, allow_empty=True):
    k = int(rng.integers(0 if allow_empty else 1, max_orbits + 1))
    return gset_from_orbits(G, [int(rng.integers(len(G.subgroups))) for _ in range(k)])


def random_orbits_over(rng, G, target, count, allowed=None):
    """``count`` orbits each with a random equivariant map into ``target``."""
    parts, maps = [], []
    for _ in range(count):
        if target.size == 0:
            break
        y = int(rng.integers(target.size))
        cands = [L for L in G.lattice.subgroups_of(target.stabilizer(y))
                 if allowed is None or allowed(L, target.stabilizer(y))]
        L = cands[int(rng.integers(len(cands)))]
        parts.append(make_orbit(G, L))
        maps.append(orbit_map(G, L, target, y).f)
    if not parts:
        return empty_gset(G), np.zeros(0, dtype=np.int64), []
    S, _ = disjoint_union(*parts)
    return S, np.concatenate(maps), parts


def random_polynomial(rng, G, X, Y, max_b=2, max_a=2, system=None):
    B, h, _ = random_orbits_over(rng, G, Y, int(rng.integers(0, max_b + 1)))
    allowed = None if system is None else (lambda L, J: (L, J) in system.rel)
    A, g, _ = random_orbits_over(rng, G, B, int(rng.integers(0, max_a + 1)) if X.size else 0, allowed)
    # each A-orbit sends its base point to an X point fixed by its stabiliser
    f = np.zeros(A.size, dtype=np.int64)
    for rep in A.orbit_reps:
        pts = X.fixed_by(A.stabilizer(rep))
        if len(pts) == 0:
            return random_polynomial(rng, G, X, Y, max_b, max_a, system)
        x = int(pts[int(rng.integers(len(pts)))])
        for gg in range(G.order):
            f[A.action[gg, rep]] = X.action[gg, x]
    return Polynomial(X, A, B, Y, f, g, h)
