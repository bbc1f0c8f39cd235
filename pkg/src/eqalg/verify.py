"""The identity suite behind ``eqalg verify``: every check returns a boolean."""
from __future__ import annotations

import random

from .burnside import burnside_ring, localization_checks
from .classify import FREE, classify
from .groups import FiniteGroup, is_prime, is_solvable
from .gsets import make_orbit
from .mackey import double_coset_count, gfp_free, verify_cp_resolutions, z_base_change_free
from .polynomials import gfp_free_tambara_counts, underlying_ring_check
from .transfer import _index, enumerate_systems, generated_by, o_gen, validate


def _sample(rng: random.Random, items: list, k: int) -> list:
    return list(items) if len(items) <= k else rng.sample(list(items), k)


# lattices larger than this are sampled instead of enumerated
ENUMERATION_LIMIT = 12


def sample_systems(G: FiniteGroup, rng: random.Random, k: int) -> list:
    """Transfer systems generated by random sets of strict pairs, deduplicated."""
    pairs = _index(G).pairs
    found = {}
    for _ in range(4 * k):
        density = rng.choice((0.05, 0.15, 0.3))
        O = generated_by(G, [p for p in pairs if rng.random() < density])
        found.setdefault(O.mask, O)
        if len(found) >= k:
            break
    return [found[m] for m in sorted(found)]


def frobenius_reciprocity(G: FiniteGroup, rng: random.Random, trials: int = 20) -> bool:
    """tr(a)·b = tr(a·res b) for random a at a subgroup K ≤ H and b at H."""
    L = G.lattice
    pairs = [(k, h) for h in range(len(L)) for k in L.subgroups_of(h)]
    for _ in range(trials):
        k, h = rng.choice(pairs)
        RK, RH = burnside_ring(G, k), burnside_ring(G, h)
        a = RK.element([rng.randint(-3, 3) for _ in range(RK.rank)])
        b = RH.element([rng.randint(-3, 3) for _ in range(RH.rank)])
        if a.tr(h) * b != (a * b.res(k)).tr(h):
            return False
    return True


def classifier_coherence(G: FiniteGroup, systems) -> bool:
    L = G.lattice
    top = G.whole.id
    for O in systems:
        free = []
        for H in range(len(L)):
            v = classify(G, O, H)
            expected = v.holds("H-normal") and v.holds("G/H-admissible") and v.holds("restriction-trivial")
            if (v.status == FREE) != expected:
                return False
            if v.status == FREE:
                free.append(H)
        if len(free) > 1:
            return False
        if free and free[0] != O.minimal_admissible_normal():
            return False
        # admissibility plus trivial restriction already forces normality
        for H in range(len(L)):
            trivial = all(not L.inclusion[h, H] for k, h in O.rel if k != h)
            if trivial and (H, top) in O.rel and not L.normal[H]:
                return False
    return True


def run_verification(G: FiniteGroup, seed: int = 0, max_systems: int = 12) -> dict:
    rng = random.Random(seed)
    L = G.lattice
    report = {}
    report["burnside localization"] = localization_checks(G).ok
    report["frobenius reciprocity"] = frobenius_reciprocity(G, rng)
    if is_prime(G.order):
        report["C_p resolutions exact"] = verify_cp_resolutions(G.order).ok
    if len(L) <= ENUMERATION_LIMIT:
        systems = enumerate_systems(G)
        sampled = _sample(rng, systems, max_systems)
    else:
        systems = sampled = sample_systems(G, rng, max_systems)
    report["transfer systems valid"] = all(validate(G, O.rel) is None for O in sampled)
    report["underlying level is polynomial"] = all(
        underlying_ring_check(O, H, 2).ok for O in sampled for H in L.class_reps)
    z_ok = True
    for H in L.class_reps:
        pres = z_base_change_free(make_orbit(G, H))
        z_ok &= all(p.free_rank == double_coset_count(G, K, H) for K, p in pres.items())
    report["Z base change of frees"] = z_ok
    normals = [n for n in range(len(L)) if L.normal[n]]
    report["Mackey geometric fixed points"] = all(
        w.is_bijection for N in normals for H in L.class_reps
        for w in gfp_free(make_orbit(G, H), G.subgroups[N]).values())
    tam_ok = True
    for N in normals:
        bound = o_gen(G, G.subgroups[N])
        inside = [O for O in systems if O.rel <= bound.rel] or [bound]
        for O in _sample(rng, inside, 3):
            H = rng.choice(L.class_reps)
            tam_ok &= all(w.matches for w in gfp_free_tambara_counts(
                O, make_orbit(G, H), G.subgroups[N], 2 * G.order).values())
    report["Tambara geometric fixed points"] = tam_ok
    if is_solvable(G):
        report["classifier coherence"] = classifier_coherence(G, sampled)
    return report
