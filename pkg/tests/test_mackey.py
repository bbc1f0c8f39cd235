import itertools

import pytest
from hypothesis import given, settings, strategies as st

from eqalg.gsets import make_orbit, point
from eqalg.mackey import (
    MackeyError, burnside_mackey, change_of_group_free, constant_z, double_coset_count, dual_z, ef_levels,
    fixed_point_functor, free_mackey, geometric_fixed_point_ranks, gfp_free, inflate, span_basis,
    span_basis_brute_force, span_structure_map, verify_cp_resolutions, z_base_change, z_base_change_free,
)
from eqalg.burnside import burnside_ring
from helpers import SWEEP_CATALOG, group, gset_from_orbits

ORDER_12 = tuple(n for n in SWEEP_CATALOG if group(n).order <= 12)


@given(st.sampled_from(("C2", "C4", "C6", "D6", "C2xC2", "Q8")), st.data())
@settings(max_examples=40, deadline=None)
def test_span_basis_size_matches_orbit_count(name, data):
    G = group(name)
    subs = data.draw(st.lists(st.integers(0, len(G.subgroups) - 1), max_size=3))
    T = gset_from_orbits(G, subs)
    for K in range(len(G.subgroups)):
        assert len(span_basis(T, K)) == span_basis_brute_force(T, K)


def test_burnside_functor_levels_are_burnside_rings():
    G = group("D6")
    A = burnside_mackey(G)
    for H in range(len(G.subgroups)):
        assert A.rank(H) == burnside_ring(G, H).rank


@pytest.mark.parametrize("name", ["C4", "D6", "C2xC2", "Q8"])
def test_free_functors_satisfy_functoriality(name):
    G = group(name)
    for subs in ([0], [len(G.subgroups) - 1], [0, 1]):
        M = free_mackey(gset_from_orbits(G, subs))
        assert M.check_functoriality()


def test_structure_maps_on_a_single_level():
    G = group("C4")
    T = make_orbit(G, 0)
    tr = span_structure_map(T, 0, 2, "tr")
    res = span_structure_map(T, 2, 0, "res")
    assert len(tr) == len(span_basis(T, 2)) and len(tr[0]) == len(span_basis(T, 0))
    assert len(res) == len(span_basis(T, 0)) and len(res[0]) == len(span_basis(T, 2))
    conj = span_structure_map(T, 0, 0, "conj", gamma=1)
    assert sorted(map(sum, conj)) == [1] * len(conj)
    with pytest.raises(MackeyError):
        span_structure_map(T, 0, 2, "bogus")


@pytest.mark.parametrize("name", ["C2", "C6", "D6", "Q8", "A4"])
def test_fixed_point_functors_are_cohomological(name):
    G = group(name)
    for subs in ([0], [1], [0, len(G.subgroups) - 1]):
        M = fixed_point_functor(gset_from_orbits(G, subs))
        assert M.check_functoriality() and M.is_cohomological()
    Z = constant_z(G)
    assert Z.is_cohomological() and all(r == 1 for r in Z.ranks().values())


def test_fixed_points_of_the_point_are_the_constant_functor():
    G = group("C6")
    FP = fixed_point_functor(point(G))
    Z = constant_z(G)
    assert FP.res == Z.res and FP.tr == Z.tr


def test_dual_z_only_for_prime_order():
    assert dual_z(group("C5")).check_functoriality()
    with pytest.raises(MackeyError):
        dual_z(group("C4"))


@pytest.mark.parametrize("name", ORDER_12)
def test_base_change_of_free_functors(name):
    G = group(name)
    for H in range(len(G.subgroups)):
        pres = z_base_change_free(make_orbit(G, H))
        for K, p in pres.items():
            assert p.is_free and p.free_rank == double_coset_count(G, K, H)


@pytest.mark.parametrize("name", ["C4", "D6", "Q8"])
def test_base_change_of_the_constant_functor_is_itself(name):
    G = group(name)
    pres = z_base_change(constant_z(G))
    assert all(p.free_rank == 1 and not p.torsion for p in pres.values())


@pytest.mark.parametrize("name", ["C4", "D6", "C2xC2", "Q8"])
def test_ef_levels_split_burnside_classes(name):
    G = group(name)
    L = G.lattice
    for N in range(len(L)):
        if not L.normal[N]:
            continue
        for H, (inside, above) in ef_levels(G, G.subgroups[N]).items():
            assert len(inside) + len(above) == burnside_ring(G, H).rank


@pytest.mark.parametrize("name", ["C4", "C6", "D6", "C2xC2", "Q8", "C12"])
def test_geometric_fixed_points_of_burnside_functor(name):
    # Φ^N A_G is A_{G/N}: ranks are the numbers of subgroup classes of each quotient level
    G = group(name)
    L = G.lattice
    A = burnside_mackey(G)
    for N in range(len(L)):
        if not L.normal[N]:
            continue
        ranks = geometric_fixed_point_ranks(A, G.subgroups[N])
        W = gfp_free(point(G), G.subgroups[N])
        for qH, (free, tors) in ranks.items():
            assert not tors and free == len(W[qH].q_side)


def test_inflation_then_fixed_points_is_the_identity_on_ranks():
    G = group("D6")
    N = next(s for s in G.subgroups if s.order == 3)
    Wq = gfp_free(point(G), N)
    Q = next(iter(Wq.values()))
    from eqalg.groups import quotient_group
    Qg, _ = quotient_group(G, N)
    M = free_mackey(point(Qg))
    I = inflate(M, G, N)
    assert I.check_functoriality()
    ranks = geometric_fixed_point_ranks(I, N)
    assert sorted(r for r, _ in ranks.values()) == sorted(M.ranks().values())
    assert Q.is_bijection


def _orbit_combos(G, k):
    reps = G.lattice.class_reps
    for n in range(k + 1):
        yield from itertools.combinations_with_replacement(reps, n)


@pytest.mark.parametrize("name", ["C2", "C4", "C6", "D6", "C2xC2", "Q8", "C9"])
def test_geometric_fixed_point_bijection(name):
    G = group(name)
    L = G.lattice
    for N in range(len(L)):
        if not L.normal[N]:
            continue
        for subs in _orbit_combos(G, 2):
            T = gset_from_orbits(G, list(subs))
            assert all(w.is_bijection for w in gfp_free(T, G.subgroups[N]).values())


@pytest.mark.parametrize("p", [2, 3, 5])
def test_cp_resolutions(p):
    report = verify_cp_resolutions(p)
    assert report.ok, report


def test_cp_resolutions_reject_composite_orders():
    with pytest.raises(MackeyError):
        verify_cp_resolutions(4)


@pytest.mark.parametrize("name", ["C4", "D6", "C2xC2", "Q8"])
def test_restriction_of_a_free_functor_is_free(name):
    G = group(name)
    for H in G.subgroups:
        for subs in ([0], [len(G.subgroups) - 1]):
            assert change_of_group_free(gset_from_orbits(G, subs), H, "restrict").ok


@pytest.mark.parametrize("name", ["C2", "C4", "D6"])
def test_norm_of_a_free_functor_is_free_on_the_coinduced_set(name):
    G = group(name)
    for H in G.subgroups:
        Hg, _ = G.subgroup_group(H)
        for subs in ([0], [len(Hg.subgroups) - 1]):
            result = change_of_group_free(gset_from_orbits(Hg, subs), H, "norm", ambient=G)
            assert result.ok
    with pytest.raises(MackeyError):
        change_of_group_free(make_orbit(G, 0), G.whole, "norm")
