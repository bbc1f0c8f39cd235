from collections import Counter

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from eqalg.burnside import burnside_ring, cp_norm_closed_form
from eqalg.gsets import GMap, disjoint_union, make_orbit, orbit_map, point, pullback, dependent_product
from eqalg.polynomials import (
    InadmissibleNormError, Polynomial, PolynomialError, PolyVector, compose, count_poly_basis, decompose,
    diagrams_isomorphic, evaluate_on_burnside, gfp_free_tambara, gfp_free_tambara_counts, key_grade,
    over_orbit_to_burnside, poly_basis, realize_key, restrict_vector, transfer_vector, underlying_ring_check,
    weyl_action, weyl_permutes_basis,
)
from eqalg.transfer import complete_system, enumerate_systems, o_gen, trivial_system
from helpers import group, gset_from_orbits, random_gset, random_orbits_over, random_polynomial

SMALL = ("C2", "C3", "C4")
seeds = st.integers(0, 2 ** 32 - 1)


def _nonconstant(rng, G, X, Y, max_b=1, max_a=2):
    """A random polynomial with at least one exponent orbit, so products and norms do real work."""
    while True:
        P = random_polynomial(rng, G, X, Y, max_b=max_b, max_a=max_a)
        if P.A.size:
            return P


def _sections(outer, over):
    """Size of the dependent product formed when ``outer`` is applied to something with
    ``over[x]`` points above each x in outer.X: one point per section over each b."""
    total = 0
    for b in range(outer.B.size):
        prod = 1
        for a in np.nonzero(outer.g == b)[0]:
            prod *= int(over[outer.f[a]])
        total += prod
    return total


def _small_composite(outer, inner, limit=3000):
    """``compose(outer, inner)``, or a rejected example when the norm step would be large."""
    if isinstance(inner, PolyVector):
        inner = inner.realize()
    assume(_sections(outer, np.bincount(inner.h, minlength=inner.Y.size)) <= limit)
    return compose(outer, inner)


def _random_map(rng, G, target, count=2):
    S, f, _ = random_orbits_over(rng, G, target, count)
    return GMap(S, target, f)


# ---------------------------------------------------------------------------
# canonical keys
# ---------------------------------------------------------------------------

def test_isomorphism_through_an_automorphism_of_the_middle():
    # over C2 with B = G/e and Y = pt, f = id and f = swap differ pointwise but are
    # identified by swapping both A and B, which is an automorphism of B over Y
    G = group("C2")
    X = A = B = make_orbit(G, 0)
    Y = point(G)
    P = Polynomial(X, A, B, Y, [0, 1], [0, 1], [0, 0])
    Q = Polynomial(X, A, B, Y, [1, 0], [0, 1], [0, 0])
    assert not np.array_equal(P.f, Q.f)
    assert diagrams_isomorphic(P, Q)
    assert decompose(P) == decompose(Q)


def test_distinct_diagrams_have_distinct_keys():
    G = group("C2")
    X = make_orbit(G, 0)
    Y = point(G)
    # one free orbit over the point versus two points of a free orbit over G/e
    P = Polynomial(X, X, Y, Y, [0, 1], [0, 0], [0])
    B = make_orbit(G, 0)
    Q = Polynomial(X, X, B, Y, [0, 1], [0, 1], [0, 0])
    assert not diagrams_isomorphic(P, Q)
    assert decompose(P) != decompose(Q)


@given(st.sampled_from(("C2", "C3", "C4", "C2xC2", "D6")), seeds)
@settings(max_examples=60, deadline=None)
def test_keys_agree_with_diagram_isomorphism(name, seed):
    rng = np.random.default_rng(seed)
    G = group(name)
    X = random_gset(rng, G, 2, allow_empty=False)
    Y = random_gset(rng, G, 2, allow_empty=False)
    P = random_polynomial(rng, G, X, Y)
    Q = random_polynomial(rng, G, X, Y)
    P.validate()
    Q.validate()
    assert (decompose(P) == decompose(Q)) == diagrams_isomorphic(P, Q)
    # a relabelled copy of P always has the same key
    assert decompose(PolyVector(X, Y, decompose(P)).realize()) == decompose(P)


@given(st.sampled_from(("C2", "C4", "D6")), seeds)
@settings(max_examples=30, deadline=None)
def test_realized_keys_round_trip(name, seed):
    rng = np.random.default_rng(seed)
    G = group(name)
    X = random_gset(rng, G, 2, allow_empty=False)
    Y = random_gset(rng, G, 1, allow_empty=False)
    P = random_polynomial(rng, G, X, Y)
    for key in decompose(P):
        R = realize_key(key, X, Y)
        R.validate()
        assert decompose(R) == Counter({key: 1})
        assert R.grade == key_grade(G, key)


# ---------------------------------------------------------------------------
# composition
# ---------------------------------------------------------------------------

def test_identity_is_neutral_for_composition():
    G = group("C4")
    rng = np.random.default_rng(7)
    X, Y = make_orbit(G, 0), make_orbit(G, 1)
    for _ in range(10):
        P = random_polynomial(rng, G, X, Y)
        assert compose(Polynomial.identity(Y), P) == P.vector()
        assert compose(P, Polynomial.identity(X)) == P.vector()


@given(st.sampled_from(SMALL), seeds)
@settings(max_examples=40, deadline=None)
def test_composition_is_associative(name, seed):
    rng = np.random.default_rng(seed)
    G = group(name)
    X, Y, Z, W = (random_gset(rng, G, 1, allow_empty=False) for _ in range(4))
    P1 = _nonconstant(rng, G, X, Y)
    P2 = _nonconstant(rng, G, Y, Z)
    P3 = _nonconstant(rng, G, Z, W)
    P21 = _small_composite(P2, P1)
    P32 = _small_composite(P3, P2)
    left = _small_composite(P3, P21)
    assume(_sections(P32.realize(), np.bincount(P1.h, minlength=Y.size)) <= 3000)
    assert left == compose(P32, P1)


@given(st.sampled_from(SMALL), seeds)
@settings(max_examples=40, deadline=None)
def test_composition_is_additive_in_the_outer_factor(name, seed):
    rng = np.random.default_rng(seed)
    G = group(name)
    X, Y, Z = (random_gset(rng, G, 1, allow_empty=False) for _ in range(3))
    inner = random_polynomial(rng, G, X, Y, max_b=1)
    a = random_polynomial(rng, G, Y, Z).vector()
    b = random_polynomial(rng, G, Y, Z).vector()
    ca, cb = _small_composite(a.realize(), inner), _small_composite(b.realize(), inner)
    assert compose(a + b, inner) == ca + cb
    assert compose(a - b, inner) == ca - cb


def test_pullback_rule_on_all_orbit_pairs():
    # R_f T_h = T_f' R_h' for every pair of orbit maps into a common orbit
    G = group("C4")
    for Yid in range(len(G.subgroups)):
        Y = make_orbit(G, Yid)
        for a in G.lattice.subgroups_of(Yid):
            for b in G.lattice.subgroups_of(Yid):
                f = orbit_map(G, a, Y, 0)
                h = orbit_map(G, b, Y, 0)
                P, p1, p2 = pullback(f, h)
                lhs = compose(Polynomial.restriction(f), Polynomial.transfer(h))
                rhs = compose(Polynomial.transfer(p1), Polynomial.restriction(p2))
                assert lhs == rhs


@given(st.sampled_from(("C2", "C3", "C4", "C2xC2")), seeds)
@settings(max_examples=40, deadline=None)
def test_restriction_commutes_past_norms(name, seed):
    # R_f N_g = N_g' R_f' for the pullback of f along g
    rng = np.random.default_rng(seed)
    G = group(name)
    B = random_gset(rng, G, 2, allow_empty=False)
    g = _random_map(rng, G, B)
    f = _random_map(rng, G, B)
    P, p1, p2 = pullback(f, g)
    lhs = compose(Polynomial.restriction(f), Polynomial.norm(g))
    rhs = compose(Polynomial.norm(p1), Polynomial.restriction(p2))
    assert lhs == rhs


@given(st.sampled_from(("C2", "C3", "C4")), seeds)
@settings(max_examples=40, deadline=None)
def test_exponential_diagram(name, seed):
    # N_h T_u = T_h' N_g' R_f' where the right side is read off the dependent product
    rng = np.random.default_rng(seed)
    G = group(name)
    T = random_gset(rng, G, 1, allow_empty=False)
    h = _random_map(rng, G, T, 2)
    u = _random_map(rng, G, h.source, 2)
    D = dependent_product(u, h)
    expected = Polynomial(u.source, D.pullback, D.gset, T, D.evaluation.f, D.projection.f, D.to_base.f)
    expected.validate()
    assert compose(Polynomial.norm(h), Polynomial.transfer(u)) == expected.vector()


@pytest.mark.parametrize("p", [2, 3, 5])
def test_norm_of_a_fold_matches_the_closed_form(p):
    # transfer along the fold 2·C_p/e -> C_p/e, then norm along C_p/e -> pt: the input
    # a ⊔ b over the two copies is summed first, so the result is the norm of a + b
    G = group(f"C{p}")
    free = make_orbit(G, 0)
    two, _ = disjoint_union(free, free)
    fold = GMap(two, free, np.concatenate([np.arange(p)] * 2))
    to_point = orbit_map(G, 0, point(G), 0)
    word = compose(Polynomial.norm(to_point), Polynomial.transfer(fold)).realize()
    ring = burnside_ring(G)
    for a in range(3):
        for b in range(3):
            U = gset_from_orbits(G, [0] * (a + b))
            side = np.repeat([0] * a + [p] * b, p).astype(np.int64)
            u = GMap(U, two, side + np.tile(np.arange(p), a + b))
            V, v = evaluate_on_burnside(word, U, u)
            assert over_orbit_to_burnside(V, v, ring) == cp_norm_closed_form(G, a + b)


@given(st.sampled_from(("C2", "C3", "C4")), seeds)
@settings(max_examples=30, deadline=None)
def test_evaluation_on_burnside_is_functorial(name, seed):
    rng = np.random.default_rng(seed)
    G = group(name)
    X, Y, Z = (random_gset(rng, G, 1, allow_empty=False) for _ in range(3))
    P1 = _nonconstant(rng, G, X, Y)
    P2 = _nonconstant(rng, G, Y, Z, max_a=1)
    U, uf, _ = random_orbits_over(rng, G, X, 2)
    u = GMap(U, X, uf)
    assume(_sections(P1, np.bincount(uf, minlength=X.size)) <= 3000)
    V1, v1 = evaluate_on_burnside(P1, U, u)
    assume(_sections(P2, np.bincount(v1.f, minlength=Y.size)) <= 3000)
    V2, v2 = evaluate_on_burnside(P2, V1, v1)
    P21 = _small_composite(P2, P1).realize()
    assume(_sections(P21, np.bincount(uf, minlength=X.size)) <= 3000)
    W, w = evaluate_on_burnside(P21, U, u)
    def fibre_sizes(s):
        return [int(np.sum(s.f == z)) for z in range(Z.size)]

    assert fibre_sizes(w) == fibre_sizes(v2)
    assert W.is_isomorphic(V2)


def test_inadmissible_norms_are_rejected():
    G = group("C2")
    g = orbit_map(G, 0, point(G), 0)
    N = Polynomial.norm(g)
    with pytest.raises(InadmissibleNormError):
        compose(Polynomial.identity(point(G)), N, system=trivial_system(G))
    assert compose(Polynomial.identity(point(G)), N, system=complete_system(G)) == N.vector()
    with pytest.raises(PolynomialError):
        compose(N, N)


# ---------------------------------------------------------------------------
# semiring structure
# ---------------------------------------------------------------------------

@given(st.sampled_from(("C2", "C3", "C4")), seeds)
@settings(max_examples=60, deadline=None)
def test_semiring_laws(name, seed):
    rng = np.random.default_rng(seed)
    G = group(name)
    X, Y = make_orbit(G, 0), point(G)
    a, b, c = (_nonconstant(rng, G, X, Y, max_b=1, max_a=1).vector() for _ in range(3))
    one = Polynomial.one(X, Y).vector()
    zero = Polynomial.zero(X, Y).vector()
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert (a + b) * c == a * c + b * c
    assert a * one == a and (a * zero).is_zero() and a + zero == a


def test_multiplication_rejects_mismatched_targets():
    G = group("C2")
    a = Polynomial.one(point(G), point(G)).vector()
    b = Polynomial.one(point(G), make_orbit(G, 0)).vector()
    with pytest.raises(PolynomialError):
        a * b


# ---------------------------------------------------------------------------
# restriction, transfer and the Weyl action
# ---------------------------------------------------------------------------

@given(st.sampled_from(("C2", "C4", "D6", "C2xC2")), seeds)
@settings(max_examples=40, deadline=None)
def test_transfer_and_restriction_match_composition(name, seed):
    rng = np.random.default_rng(seed)
    G = group(name)
    X = random_gset(rng, G, 1, allow_empty=False)
    Y = random_gset(rng, G, 1, allow_empty=False)
    v = random_polynomial(rng, G, X, Y).vector()
    j = GMap(Y, point(G), np.zeros(Y.size, dtype=np.int64))
    assert transfer_vector(v, j) == compose(Polynomial.transfer(j), v.realize())
    k = _random_map(rng, G, Y, 1)
    assert restrict_vector(v, k) == compose(Polynomial.restriction(k), v.realize())


def test_transfer_along_the_identity():
    G = group("D6")
    X = make_orbit(G, 2)
    v = Polynomial.identity(X).vector()
    assert transfer_vector(v, GMap(X, X, np.arange(X.size))) == v


@pytest.mark.parametrize("name", ["C4", "D6", "C2xC2"])
def test_restricting_the_generator_to_the_free_level(name):
    G = group(name)
    for H in range(len(G.subgroups)):
        X = make_orbit(G, H)
        k = orbit_map(G, 0, X, 0)
        out = restrict_vector(Polynomial.identity(X).vector(), k)
        assert list(out.terms.values()) == [1]
        key = next(iter(out.terms))
        assert key[0] == 0 and key_grade(G, key) == G.order


@pytest.mark.parametrize("name", ["C4", "D6", "Q8"])
def test_weyl_action_permutes_the_basis(name):
    G = group(name)
    for O in (trivial_system(G), complete_system(G)):
        for K in range(len(G.subgroups)):
            assert weyl_permutes_basis(O, make_orbit(G, 0), K, G.order)


def test_weyl_action_of_the_identity_is_trivial():
    G = group("C4")
    v = Polynomial.identity(make_orbit(G, 0)).vector()
    assert weyl_action(v, G.identity, 0) == v


# ---------------------------------------------------------------------------
# bases
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("name", ["C2", "C4", "C6", "D6", "C2xC2"])
def test_counting_agrees_with_enumeration(name):
    G = group(name)
    for O in (trivial_system(G), complete_system(G)):
        for subs in ([0], [len(G.subgroups) - 1], [0, 1]):
            X = gset_from_orbits(G, subs)
            for K in range(len(G.subgroups)):
                m = 2 * G.order
                keys = poly_basis(O, X, K, m)
                grades = Counter(key_grade(G, k) for k in keys)
                assert count_poly_basis(O, X, K, m) == [grades.get(d, 0) for d in range(m + 1)]


@pytest.mark.parametrize("name", ["C4", "D6"])
def test_constant_slice_is_the_burnside_ring(name):
    G = group(name)
    X = make_orbit(G, 0)
    for K in range(len(G.subgroups)):
        keys = poly_basis(complete_system(G), X, K, 0)
        assert len(keys) == burnside_ring(G, K).rank
        assert all(not k[2] for k in keys)


@pytest.mark.parametrize("name", ["C2", "C4", "C6"])
def test_trivial_system_on_a_fixed_generator(name):
    # each basis class is n copies of G/J over one constant class
    G = group(name)
    m = 3 * G.order
    for K in range(len(G.subgroups)):
        keys = poly_basis(trivial_system(G), point(G), K, m)
        constants = [k for k in keys if not k[2]]
        for k in keys:
            assert all(t == (k[0], 0) for t in k[2])
        expected = sum(1 + m // (G.order // G.subgroups[k[0]].order) for k in constants)
        assert len(keys) == expected


@pytest.mark.parametrize("name", ["C4", "D6", "C2xC2"])
def test_basis_grows_with_the_system(name):
    G = group(name)
    X = gset_from_orbits(G, [0, 1])
    systems = enumerate_systems(G)
    for O in systems:
        for P in systems:
            if O.rel <= P.rel:
                for K in (0, len(G.subgroups) - 1):
                    assert set(poly_basis(O, X, K, G.order)) <= set(poly_basis(P, X, K, G.order))


@pytest.mark.parametrize("p", [2, 3, 5])
def test_norm_class_exists_exactly_for_the_complete_system(p):
    G = group(f"C{p}")
    X = make_orbit(G, 0)
    norm = Polynomial.norm(orbit_map(G, 0, point(G), 0))
    key = next(iter(decompose(norm)))
    assert key in poly_basis(complete_system(G), X, G.whole.id, p)
    assert key not in poly_basis(trivial_system(G), X, G.whole.id, p)


# ---------------------------------------------------------------------------
# underlying level and geometric fixed points
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("name", ["C2", "C3", "C4"])
def test_underlying_level_is_a_polynomial_ring(name):
    G = group(name)
    for O in enumerate_systems(G):
        for H in range(len(G.subgroups)):
            report = underlying_ring_check(O, H, 3)
            assert report.ok, report


def test_underlying_level_small_cases():
    G = group("C3")
    report = underlying_ring_check(complete_system(G), 0, 1)
    assert report.counts == [1, 3]
    G = group("C4")
    report = underlying_ring_check(trivial_system(G), 1, 2)
    assert report.counts == [1, 2, 3]


@pytest.mark.parametrize("name", ["C2", "C4", "C6", "D6", "C2xC2"])
def test_tambara_fixed_points_explicit_and_counted(name):
    G = group(name)
    L = G.lattice
    for N in range(len(L)):
        if not L.normal[N]:
            continue
        Nsub = G.subgroups[N]
        for O in enumerate_systems(G):
            if not O.rel <= o_gen(G, Nsub).rel:
                continue
            for subs in ([0], [N]):
                T = gset_from_orbits(G, subs)
                explicit = gfp_free_tambara(O, T, Nsub, G.order)
                counted = gfp_free_tambara_counts(O, T, Nsub, G.order)
                assert explicit.keys() == counted.keys()
                for qH, w in explicit.items():
                    assert w.is_bijection
                    c = counted[qH]
                    assert c.matches
                    assert sum(c.g_counts) == len(w.g_side)


def test_tambara_fixed_points_need_a_small_system():
    G = group("C2")
    with pytest.raises(PolynomialError):
        gfp_free_tambara(complete_system(G), point(G), G.whole, 2)
    with pytest.raises(PolynomialError):
        gfp_free_tambara_counts(complete_system(G), point(G), G.whole, 2)
