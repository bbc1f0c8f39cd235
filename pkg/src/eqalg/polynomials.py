"""Bispans X <- A -> B -> Y and their composition calculus.

A concrete :class:`Polynomial` stores the three maps on explicit G-sets.
Isomorphism classes with B transitive are encoded by hashable keys

    (J, y, ((L1, x1), (L2, x2), ...))

where B = G/J, y is the image of the base point of B, and each pair (L, x)
describes one J-orbit J/L of the fibre of A over the base point together with
the image x of its base point.  Keys are canonical: J is the chosen
representative of its conjugacy class, every pair is minimal under
J-conjugation, and the whole key is minimal over the elements of G that fix J
after conjugating it to its representative.  A :class:`PolyVector` is an
integer combination of such keys.
"""
from __future__ import annotations

from collections import Counter

import numpy as np

from .groups import FiniteGroup, Subgroup
from .gsets import (
    GMap, GSet, _coset_data, dependent_product, disjoint_union, empty_gset,
    make_orbit, orbit_map, pullback,
)


class PolynomialError(ValueError):
    pass


class InadmissibleNormError(PolynomialError):
    pass


# ---------------------------------------------------------------------------
# concrete polynomials
# ---------------------------------------------------------------------------

class Polynomial:
    """The bispan X <-f- A -g-> B -h-> Y."""

    __slots__ = ("X", "Y", "A", "B", "f", "g", "h")

    def __init__(self, X: GSet, A: GSet, B: GSet, Y: GSet, f, g, h):
        self.X, self.A, self.B, self.Y = X, A, B, Y
        self.f = np.asarray(f, dtype=np.int64).reshape(-1)
        self.g = np.asarray(g, dtype=np.int64).reshape(-1)
        self.h = np.asarray(h, dtype=np.int64).reshape(-1)

    @property
    def group(self) -> FiniteGroup:
        return self.X.group

    def __repr__(self):
        return f"Polynomial(|X|={self.X.size}, |A|={self.A.size}, |B|={self.B.size}, |Y|={self.Y.size})"

    def validate(self) -> None:
        for src, tgt, m in ((self.A, self.X, self.f), (self.A, self.B, self.g), (self.B, self.Y, self.h)):
            GMap(src, tgt, m).validate()

    @property
    def grade(self) -> int:
        return self.A.size

    # generators ---------------------------------------------------------

    @staticmethod
    def transfer(h: GMap) -> "Polynomial":
        """T_h = [S <- S = S -> T]"""
        S = h.source
        ident = np.arange(S.size)
        return Polynomial(S, S, S, h.target, ident, ident, h.f)

    @staticmethod
    def norm(g: GMap) -> "Polynomial":
        """N_g = [A <- A -> B = B]"""
        A, B = g.source, g.target
        return Polynomial(A, A, B, B, np.arange(A.size), g.f, np.arange(B.size))

    @staticmethod
    def restriction(f: GMap) -> "Polynomial":
        """R_f = [X <- A = A = A] for f: A -> X"""
        A = f.source
        ident = np.arange(A.size)
        return Polynomial(f.target, A, A, A, f.f, ident, ident)

    @staticmethod
    def identity(X: GSet) -> "Polynomial":
        ident = np.arange(X.size)
        return Polynomial(X, X, X, X, ident, ident, ident)

    @staticmethod
    def zero(X: GSet, Y: GSet) -> "Polynomial":
        E = empty_gset(X.group)
        return Polynomial(X, E, E, Y, [], [], [])

    @staticmethod
    def one(X: GSet, Y: GSet) -> "Polynomial":
        """[X <- ∅ -> Y = Y], the multiplicative unit."""
        E = empty_gset(X.group)
        return Polynomial(X, E, Y, Y, [], [], np.arange(Y.size))

    # structure ------------------------------------------------------------

    def is_admissible(self, system) -> bool:
        A, B = self.A, self.B
        for a in A.orbit_reps:
            if (A.stabilizer(a), B.stabilizer(int(self.g[a]))) not in system.rel:
                return False
        return True

    def then(self, outer: "Polynomial") -> "Polynomial":
        return compose_concrete(outer, self)

    def keys(self) -> Counter:
        return decompose(self)

    def vector(self) -> "PolyVector":
        return PolyVector(self.X, self.Y, decompose(self))


def disjoint_sum(*polys: Polynomial) -> Polynomial:
    """Sum in the Burnside-style additive structure: union of the middles."""
    X, Y = polys[0].X, polys[0].Y
    A, _ = disjoint_union(*(p.A for p in polys))
    B, _ = disjoint_union(*(p.B for p in polys))
    ao = np.cumsum([0] + [p.A.size for p in polys])
    bo = np.cumsum([0] + [p.B.size for p in polys])
    f = np.concatenate([p.f for p in polys]) if ao[-1] else []
    g = np.concatenate([p.g + o for p, o in zip(polys, bo)]) if ao[-1] else []
    h = np.concatenate([p.h for p in polys]) if bo[-1] else []
    return Polynomial(X, A, B, Y, f, g, h)


def juxtapose(P: Polynomial, Q: Polynomial) -> Polynomial:
    """P ⊔ Q as a polynomial X ⊔ X' -> Y ⊔ Y'."""
    X, ix = disjoint_union(P.X, Q.X)
    Y, iy = disjoint_union(P.Y, Q.Y)
    A, _ = disjoint_union(P.A, Q.A)
    B, _ = disjoint_union(P.B, Q.B)
    f = np.concatenate([P.f, Q.f + P.X.size])
    g = np.concatenate([P.g, Q.g + P.B.size])
    h = np.concatenate([P.h, Q.h + P.Y.size])
    return Polynomial(X, A, B, Y, f, g, h)


# ---------------------------------------------------------------------------
# composition
# ---------------------------------------------------------------------------

def compose_concrete(outer: Polynomial, inner: Polynomial, system=None) -> Polynomial:
    """outer ∘ inner as one concrete bispan.

    With inner = T_h1 N_g1 R_f1 and outer = T_h2 N_g2 R_f2 the word
    T_h2 N_g2 R_f2 T_h1 N_g1 R_f1 is normalised by two pullback moves, one
    exponential diagram and a final pullback.
    """
    if outer.X.size != inner.Y.size:
        raise PolynomialError("polynomials are not composable")
    if system is not None:
        for P in (outer, inner):
            if not P.is_admissible(system):
                raise InadmissibleNormError("a norm leg is not admissible for the given system")
    Y = inner.Y
    # R_f2 T_h1 = T_h1' R_f2'
    P, h1p, f2p = pullback(GMap(outer.A, Y, outer.f), GMap(inner.B, Y, inner.h))
    # R_f2' N_g1 = N_g1' R_f2''
    P2, g1p, f2pp = pullback(f2p, GMap(inner.A, inner.B, inner.g))
    # N_g2 T_h1' = T_h' N_g' R_f'
    D = dependent_product(h1p, GMap(outer.A, outer.B, outer.g))
    # R_f' N_g1' = N_g1'' R_f''
    E2, g1pp, fpp = pullback(D.evaluation, g1p)
    f = inner.f[f2pp.f[fpp.f]] if E2.size else []
    g = D.projection.f[g1pp.f] if E2.size else []
    h = outer.h[D.to_base.f] if D.gset.size else []
    return Polynomial(inner.X, E2, D.gset, outer.Y, f, g, h)


def compose(outer, inner, system=None) -> "PolyVector":
    """Composite outer ∘ inner expanded in the transitive basis.

    ``outer`` may be a PolyVector with integer coefficients: composition is
    additive in the outer factor.  ``inner`` must be a concrete polynomial or
    an effective PolyVector.
    """
    if isinstance(inner, PolyVector):
        inner = inner.realize()
    if isinstance(outer, Polynomial):
        return PolyVector(inner.X, outer.Y, decompose(compose_concrete(outer, inner, system)))
    total = Counter()
    for key, c in outer.terms.items():
        piece = realize_key(key, outer.X, outer.Y)
        for k2, c2 in decompose(compose_concrete(piece, inner, system)).items():
            total[k2] += c * c2
    return PolyVector(inner.X, outer.Y, total)


# ---------------------------------------------------------------------------
# canonical keys
# ---------------------------------------------------------------------------

def _group_cache(G: FiniteGroup, name: str) -> dict:
    return G.__dict__.setdefault(name, {})


def _movers(G: FiniteGroup, J: int) -> tuple[int, list[int]]:
    """Class representative Jr of J and all g with g J g^-1 = Jr."""
    cache = _group_cache(G, "_poly_movers")
    if J not in cache:
        L = G.lattice
        Jr = L.class_reps[L.conj_class[J]]
        cache[J] = (Jr, [g for g in range(G.order) if L.conj_table[g, J] == Jr])
    return cache[J]


def _canonical_type(G: FiniteGroup, X: GSet, J: int, L: int, x: int) -> tuple[int, int]:
    cache = X.__dict__.setdefault("_type_cache", {})
    k = (J, L, x)
    if k not in cache:
        ct = G.lattice.conj_table
        cache[k] = min((int(ct[j, L]), int(X.action[j, x])) for j in G.subgroups[J].elements)
    return cache[k]


def canonical_key(G: FiniteGroup, X: GSet, Y: GSet, J: int, y: int, types) -> tuple:
    Jr, movers = _movers(G, J)
    ct = G.lattice.conj_table
    best = None
    for m in movers:
        cand_types = tuple(sorted(
            _canonical_type(G, X, Jr, int(ct[m, L]), int(X.action[m, x])) for L, x in types))
        cand = (Jr, int(Y.action[m, y]), cand_types)
        if best is None or cand < best:
            best = cand
    return best


def orbit_key(P: Polynomial, b0: int) -> tuple:
    G = P.group
    A = P.A
    J = P.B.stabilizer(b0)
    fiber = np.nonzero(P.g == b0)[0]
    seen = set()
    types = []
    Jelems = list(G.subgroups[J].elements)
    for a in fiber:
        a = int(a)
        if a in seen:
            continue
        seen.update(int(v) for v in A.action[Jelems, a])
        types.append((A.stabilizer(a), int(P.f[a])))
    return canonical_key(G, P.X, P.Y, J, int(P.h[b0]), types)


def decompose(P: Polynomial) -> Counter:
    out = Counter()
    for b0 in P.B.orbit_reps:
        out[orbit_key(P, b0)] += 1
    return out


def realize_key(key, X: GSet, Y: GSet) -> Polynomial:
    G = X.group
    J, y, types = key
    B = make_orbit(G, J)
    if types:
        parts = [make_orbit(G, L) for L, _ in types]
        A, _ = disjoint_union(*parts)
        f = np.concatenate([orbit_map(G, L, X, x).f for L, x in types])
        g = np.concatenate([orbit_map(G, L, B, 0).f for L, _ in types])
    else:
        A, f, g = empty_gset(G), [], []
    h = orbit_map(G, J, Y, y).f
    return Polynomial(X, A, B, Y, f, g, h)


def key_grade(G: FiniteGroup, key) -> int:
    """|A| for the realized polynomial."""
    return sum(G.order // G.subgroups[L].order for L, _ in key[2])


def key_fiber_size(G: FiniteGroup, key) -> int:
    J = G.subgroups[key[0]].order
    return sum(J // G.subgroups[L].order for L, _ in key[2])


def key_admissible(key, system) -> bool:
    J = key[0]
    return all((L, J) in system.rel for L, _ in key[2])


# ---------------------------------------------------------------------------
# vectors
# ---------------------------------------------------------------------------

class PolyVector:
    """Integer combination of basis keys between fixed G-sets X and Y."""

    def __init__(self, X: GSet, Y: GSet, terms=None):
        self.X, self.Y = X, Y
        self.terms = Counter({k: int(v) for k, v in (terms or {}).items() if v})

    def __repr__(self):
        return f"PolyVector({dict(self.terms)})"

    def _same(self, other):
        if other.X is not self.X or other.Y is not self.Y:
            if other.X.size != self.X.size or other.Y.size != self.Y.size:
                raise PolynomialError("vectors live between different G-sets")

    def __eq__(self, other):
        if not isinstance(other, PolyVector):
            return NotImplemented
        return dict(self.terms) == dict(other.terms)

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        self._same(other)
        t = Counter(self.terms)
        for k, v in other.terms.items():
            t[k] += v
        return PolyVector(self.X, self.Y, t)

    def __neg__(self):
        return PolyVector(self.X, self.Y, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: int) -> "PolyVector":
        return PolyVector(self.X, self.Y, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._same(other)
        total = Counter()
        for k1, c1 in self.terms.items():
            P1 = realize_key(k1, self.X, self.Y)
            for k2, c2 in other.terms.items():
                P2 = realize_key(k2, self.X, self.Y)
                for k, c in decompose(multiply_concrete(P1, P2)).items():
                    total[k] += c1 * c2 * c
        return PolyVector(self.X, self.Y, total)

    __rmul__ = __mul__

    def is_effective(self) -> bool:
        return all(v > 0 for v in self.terms.values())

    def is_zero(self) -> bool:
        return not self.terms

    def realize(self) -> Polynomial:
        if not self.is_effective():
            raise PolynomialError("only effective vectors have a concrete realization")
        pieces = [realize_key(k, self.X, self.Y) for k in sorted(self.terms) for _ in range(self.terms[k])]
        if not pieces:
            return Polynomial.zero(self.X, self.Y)
        return disjoint_sum(*pieces)

    def grades(self, G: FiniteGroup) -> Counter:
        out = Counter()
        for k, v in self.terms.items():
            out[key_grade(G, k)] += v
        return out


def add_concrete(P: Polynomial, Q: Polynomial) -> Polynomial:
    return disjoint_sum(P, Q)


def multiply_concrete(P: Polynomial, Q: Polynomial) -> Polynomial:
    """Product over B ×_Y B' with exponent (A ×_Y B') ⊔ (B ×_Y A')."""
    Y = P.Y
    hP, hQ = GMap(P.B, Y, P.h), GMap(Q.B, Y, Q.h)
    BB, pb, qb = pullback(hP, hQ)
    index = {(int(a), int(b)): i for i, (a, b) in enumerate(zip(pb.f, qb.f))}
    # A ×_Y B'
    A1, pa, qb1 = pullback(GMap(P.A, Y, P.h[P.g] if P.A.size else []), hQ)
    # B ×_Y A'
    A2, pb2, qa = pullback(hP, GMap(Q.A, Y, Q.h[Q.g] if Q.A.size else []))
    A, _ = disjoint_union(A1, A2)
    f = np.concatenate([P.f[pa.f] if A1.size else np.zeros(0, np.int64),
                        Q.f[qa.f] if A2.size else np.zeros(0, np.int64)])
    g = [index[int(P.g[a]), int(b)] for a, b in zip(pa.f, qb1.f)]
    g += [index[int(b), int(Q.g[a])] for b, a in zip(pb2.f, qa.f)]
    h = P.h[pb.f] if BB.size else []
    return Polynomial(P.X, A, BB, Y, f, g, h)


def fold_map(Y: GSet) -> tuple[GSet, GMap]:
    YY, _ = disjoint_union(Y, Y)
    return YY, GMap(YY, Y, np.concatenate([np.arange(Y.size)] * 2))


# ---------------------------------------------------------------------------
# structure maps on the free functor
# ---------------------------------------------------------------------------

def transfer_vector(v: PolyVector, j: GMap) -> PolyVector:
    """Post-compose with T_j: replace h by j∘h."""
    out = Counter()
    for key, c in v.terms.items():
        P = realize_key(key, v.X, v.Y)
        Q = Polynomial(P.X, P.A, P.B, j.target, P.f, P.g, j.f[P.h])
        for k, m in decompose(Q).items():
            out[k] += c * m
    return PolyVector(v.X, j.target, out)


def restrict_vector(v: PolyVector, k: GMap) -> PolyVector:
    """Post-compose with R_k for k: Z -> Y, by the pullback formula."""
    Z = k.source
    out = Counter()
    for key, c in v.terms.items():
        P = realize_key(key, v.X, v.Y)
        BZ, pb, pz = pullback(GMap(P.B, P.Y, P.h), k)
        AZ, pa, pbz = pullback(GMap(P.A, P.B, P.g), pb)
        Q = Polynomial(P.X, AZ, BZ, Z, P.f[pa.f] if AZ.size else [], pbz.f, pz.f)
        for kk, m in decompose(Q).items():
            out[kk] += c * m
    return PolyVector(v.X, Z, out)


def coset_conjugation(G: FiniteGroup, K: int, gamma: int) -> GMap:
    """The map G/K -> G/K, gK -> g γ^{-1} K, for γ normalising K."""
    if G.lattice.conj_table[gamma, K] != K:
        raise PolynomialError("conjugating element must normalise the subgroup")
    Y = make_orbit(G, K)
    reps, which = _coset_data(G, K)
    return GMap(Y, Y, [int(which[G.mul[r, G.inverse[gamma]]]) for r in reps])


def weyl_action(v: PolyVector, gamma: int, K: int) -> PolyVector:
    G = v.X.group
    return transfer_vector(v, coset_conjugation(G, K, gamma))


# ---------------------------------------------------------------------------
# enumeration of bases
# ---------------------------------------------------------------------------

def _normalizer_orbit_reps(G: FiniteGroup, Y: GSet, J: int) -> list[int]:
    """Points of Y^J up to the normaliser of J."""
    L = G.lattice
    nz = G.subgroups[L.normalizer[J]].elements
    reps, seen = [], set()
    for y in Y.fixed_by(J):
        y = int(y)
        if y in seen:
            continue
        reps.append(y)
        seen.update(int(Y.action[n, y]) for n in nz)
    return reps


def type_classes(G: FiniteGroup, X: GSet, J: int, allowed=None) -> list[tuple[int, int]]:
    """J-classes of pairs (L ≤ J, x ∈ X^L), optionally filtered by ``allowed(L)``."""
    out = set()
    for L in G.lattice.subgroups_of(J):
        if allowed is not None and not allowed(L):
            continue
        for x in X.fixed_by(L):
            out.add(_canonical_type(G, X, J, L, int(x)))
    return sorted(out)


def _multisets(items, costs, budget):
    """All multisets of ``items`` with total cost ≤ budget, as sorted tuples."""
    n = len(items)

    def rec(start, remaining):
        yield ()
        for i in range(start, n):
            if costs[i] <= remaining:
                for rest in rec(i, remaining - costs[i]):
                    yield (items[i],) + rest

    yield from rec(0, budget)


def poly_basis(system, X: GSet, K: int, max_size: int, J_filter=None, type_filter=None) -> list[tuple]:
    """Canonical keys [X <- A -> G/J -> G/K] with A admissible over G/J and |A| ≤ max_size.

    Keys are sorted by (grade, key).
    """
    G = X.group
    Y = make_orbit(G, K)
    L = G.lattice
    found = set()
    for J in L.class_reps:
        if J_filter is not None and not J_filter(J):
            continue
        ys = _normalizer_orbit_reps(G, Y, J)
        if not ys:
            continue

        def ok(Lsub, J=J):
            if system is not None and (Lsub, J) not in system.rel:
                return False
            return type_filter is None or type_filter(Lsub)

        types = type_classes(G, X, J, ok)
        costs = [G.order // G.subgroups[t[0]].order for t in types]
        for y in ys:
            for ms in _multisets(types, costs, max_size):
                found.add(canonical_key(G, X, Y, J, y, ms))
    return sorted(found, key=lambda k: (key_grade(G, k), k))


def graded_counts(G: FiniteGroup, keys, by: str = "grade") -> Counter:
    fn = key_grade if by == "grade" else key_fiber_size
    return Counter(fn(G, k) for k in keys)


# ---------------------------------------------------------------------------
# evaluation on the Burnside Tambara functor
# ---------------------------------------------------------------------------

def evaluate_on_burnside(P: Polynomial, U: GSet, u: GMap) -> tuple[GSet, GMap]:
    """Apply T_h N_g R_f to a G-set over X, returning a G-set over Y."""
    # R_f: pull back along f
    V, pv, pa = pullback(u, GMap(P.A, P.X, P.f))
    # N_g: dependent product of V -> A along g
    D = dependent_product(pa, GMap(P.A, P.B, P.g))
    return D.gset, GMap(D.gset, P.Y, P.h[D.to_base.f] if D.gset.size else [])


def over_orbit_to_burnside(U: GSet, p: GMap, ring) -> "object":
    """Class in A(K) of a G-set over G/K, read off from the fibre over the base coset."""
    coeffs = [0] * ring.rank
    for x in U.orbit_reps:
        # move the representative into the base fibre
        y = int(p.f[x])
        col = p.target.action[:, y]
        g = int(np.nonzero(col == 0)[0][0])
        z = int(U.action[g, x])
        coeffs[ring.class_of[U.stabilizer(z)]] += 1
    return ring.element(coeffs)


def diagrams_isomorphic(P: Polynomial, Q: Polynomial) -> bool:
    """Backtracking search for (α: A ≅ A', β: B ≅ B') commuting with f, g, h."""
    if P.A.size != Q.A.size or P.B.size != Q.B.size:
        return False
    G = P.group
    B1, B2 = P.B, Q.B
    A1, A2 = P.A, Q.A

    def try_extend(assign, rep, X1, X2, image, constraint):
        """Extend ``assign`` by sending orbit rep -> image equivariantly."""
        new = dict(assign)
        for g in range(G.order):
            a, b = int(X1.action[g, rep]), int(X2.action[g, image])
            if new.get(a, b) != b:
                return None
            new[a] = b
        if len(set(new.values())) != len(new):
            return None
        return new if all(constraint(a, b) for a, b in new.items()) else None

    def search_beta(i, beta):
        if i == len(B1.orbit_reps):
            return search_alpha(0, {}, beta)
        rep = B1.orbit_reps[i]
        for cand in range(B2.size):
            if cand in beta.values() or B2.stabilizer(cand) != B1.stabilizer(rep):
                continue
            if Q.h[cand] != P.h[rep]:
                continue
            ext = try_extend(beta, rep, B1, B2, cand, lambda a, b: Q.h[b] == P.h[a])
            if ext is not None and search_beta(i + 1, ext):
                return True
        return False

    def search_alpha(i, alpha, beta):
        if i == len(A1.orbit_reps):
            return True
        rep = A1.orbit_reps[i]
        for cand in range(A2.size):
            if cand in alpha.values() or A2.stabilizer(cand) != A1.stabilizer(rep):
                continue
            if Q.f[cand] != P.f[rep] or Q.g[cand] != beta[int(P.g[rep])]:
                continue
            ext = try_extend(alpha, rep, A1, A2, cand,
                             lambda a, b: Q.f[b] == P.f[a] and Q.g[b] == beta[int(P.g[a])])
            if ext is not None and search_alpha(i + 1, ext, beta):
                return True
        return False

    return search_beta(0, {})


# ---------------------------------------------------------------------------
# geometric fixed points of free incomplete Tambara functors
# ---------------------------------------------------------------------------

class TambaraGFPWitness:
    def __init__(self, level, g_side, q_side, image, fixed_ok):
        self.level = level
        self.g_side = g_side
        self.q_side = q_side
        self.image = image
        self.fixed_ok = fixed_ok

    @property
    def is_bijection(self) -> bool:
        vals = list(self.image.values())
        return (self.fixed_ok and len(set(vals)) == len(vals) == len(self.g_side) == len(self.q_side)
                and set(vals) == set(self.g_side))


def gfp_free_tambara(system, T: GSet, N: Subgroup, max_size: int) -> dict:
    """Compare the G-basis [T <- A -> G/J -> G/H] with N ≤ J against the
    Q-basis of the free q_*O-Tambara functor on T^N, level by level, up to
    |A| ≤ max_size.  Requires O ⊆ O^N_gen."""
    from .gsets import fixed_points
    from .transfer import o_gen

    G = T.group
    L = G.lattice
    if not system.rel <= o_gen(G, N).rel:
        raise PolynomialError("the system must be contained in O^N_gen")
    qsys = system.quotient_along(N)
    fp = fixed_points(T, N)
    Q, proj = fp.quotient, fp.projection
    TN = fp.as_qset
    pts = fp.points
    if qsys.group is not Q:
        # quotient_along builds its own copy of Q; carry the relation over by ids
        from .transfer import TransferSystem
        qsys = TransferSystem(Q, qsys.rel, check=False)
    up = {}
    for H in range(len(L)):
        if L.inclusion[N.id, H]:
            up[Q.subgroup({int(proj[e]) for e in G.subgroups[H].elements}).id] = H
    contains_n = L.inclusion[N.id]
    out = {}
    for qH, H in sorted(up.items()):
        g_side = poly_basis(system, T, H, max_size, J_filter=lambda J: bool(contains_n[J]))
        fixed_ok = all(contains_n[Lsub] and int(x) in set(pts.tolist())
                       for key in g_side for Lsub, x in key[2])
        q_side = poly_basis(qsys, TN, qH, max_size)
        greps, _ = _coset_data(G, H)
        _, qwhich = _coset_data(Q, qH)
        q_to_g = {int(qwhich[proj[r]]): i for i, r in enumerate(greps)}
        YG = make_orbit(G, H)
        image = {}
        for key in q_side:
            qJ, qy, types = key
            gtypes = [(up[ql], int(pts[qx])) for ql, qx in types]
            image[key] = canonical_key(G, T, YG, up[qJ], q_to_g[qy], gtypes)
        out[qH] = TambaraGFPWitness(qH, g_side, q_side, image, fixed_ok)
    return out


def _type_permutation(G: FiniteGroup, X: GSet, J: int, types, s: int) -> list[int]:
    L = G.lattice
    pos = {t: i for i, t in enumerate(types)}
    return [pos[_canonical_type(G, X, J, int(L.conj_table[s, Ls]), int(X.action[s, x]))] for Ls, x in types]


def count_poly_basis(system, X: GSet, K: int, max_size: int, J_filter=None) -> list[int]:
    """Number of basis keys of each grade 0..max_size, without listing them.

    For each J and each normaliser orbit of y, keys are multisets of J-types
    modulo the stabiliser S of y in N_G(J); Burnside's lemma over S turns the
    count into an average of products of 1/(1 - x^(cycle length · cost)).
    """
    G = X.group
    Y = make_orbit(G, K)
    L = G.lattice
    total = [0] * (max_size + 1)
    for J in L.class_reps:
        if J_filter is not None and not J_filter(J):
            continue
        ys = _normalizer_orbit_reps(G, Y, J)
        if not ys:
            continue
        allowed = None if system is None else (lambda Ls, J=J: (Ls, J) in system.rel)
        types = type_classes(G, X, J, allowed)
        costs = [G.order // G.subgroups[t[0]].order for t in types]
        nz = G.subgroups[L.normalizer[J]].elements
        for y in ys:
            stab = [int(s) for s in nz if int(Y.action[s, y]) == y]
            acc = [0] * (max_size + 1)
            for s in stab:
                perm = _type_permutation(G, X, J, types, s)
                series = [1] + [0] * max_size
                seen = [False] * len(types)
                for i in range(len(types)):
                    if seen[i]:
                        continue
                    length, j = 0, i
                    while not seen[j]:
                        seen[j] = True
                        j = perm[j]
                        length += 1
                    step = length * costs[i]
                    # multiply by 1/(1 - x^step)
                    for d in range(step, max_size + 1):
                        series[d] += series[d - step]
                for d in range(max_size + 1):
                    acc[d] += series[d]
            for d in range(max_size + 1):
                assert acc[d] % len(stab) == 0
                total[d] += acc[d] // len(stab)
    return total


class TambaraGFPCount:
    def __init__(self, level, g_counts, q_counts, types_fixed):
        self.level = level
        self.g_counts = g_counts
        self.q_counts = q_counts
        self.types_fixed = types_fixed

    @property
    def matches(self) -> bool:
        return self.types_fixed and self.g_counts == self.q_counts


def gfp_free_tambara_counts(system, T: GSet, N: Subgroup, max_size: int) -> dict:
    """Graded-count form of :func:`gfp_free_tambara`, usable at large grades.

    ``types_fixed`` records that every admissible type over a J containing N
    already has N ≤ L, so the G-side keys lie in the image of the Q-side.
    """
    from .gsets import fixed_points
    from .transfer import TransferSystem, o_gen

    G = T.group
    L = G.lattice
    if not system.rel <= o_gen(G, N).rel:
        raise PolynomialError("the system must be contained in O^N_gen")
    fp = fixed_points(T, N)
    Q, proj = fp.quotient, fp.projection
    qsys = TransferSystem(Q, system.quotient_along(N).rel, check=False)
    contains_n = L.inclusion[N.id]
    types_fixed = all(contains_n[Ls] for J in range(len(L)) if contains_n[J]
                      for Ls in L.subgroups_of(J) if (Ls, J) in system.rel)
    out = {}
    for H in range(len(L)):
        if not contains_n[H]:
            continue
        qH = Q.subgroup({int(proj[e]) for e in G.subgroups[H].elements}).id
        g_counts = count_poly_basis(system, T, H, max_size, J_filter=lambda J: bool(contains_n[J]))
        q_counts = count_poly_basis(qsys, fp.as_qset, qH, max_size)
        out[qH] = TambaraGFPCount(qH, g_counts, q_counts, types_fixed)
    return out


# ---------------------------------------------------------------------------
# the underlying level
# ---------------------------------------------------------------------------

def weyl_permutes_basis(system, X: GSet, K: int, max_size: int) -> bool:
    """Every Weyl element sends basis keys at level G/K to basis keys, bijectively."""
    G = X.group
    keys = poly_basis(system, X, K, max_size)
    keyset = set(keys)
    Y = make_orbit(G, K)
    for gamma in G.subgroups[G.lattice.normalizer[K]].elements:
        images = []
        for key in keys:
            out = weyl_action(PolyVector(X, Y, {key: 1}), int(gamma), K)
            if len(out.terms) != 1 or next(iter(out.terms.values())) != 1:
                return False
            images.append(next(iter(out.terms)))
        if set(images) != keyset or len(images) != len(keyset):
            return False
    return True


class UnderlyingReport:
    def __init__(self, index, counts, expected, permuted):
        self.index = index
        self.counts = counts
        self.expected = expected
        self.permuted = permuted

    @property
    def ok(self) -> bool:
        return self.counts == self.expected and self.permuted

    def __repr__(self):
        return f"UnderlyingReport(index={self.index}, counts={self.counts}, expected={self.expected}, permuted={self.permuted})"


def underlying_ring_check(system, H, dmax: int) -> UnderlyingReport:
    """At level G/e the free functor on G/H is a polynomial ring on [G:H] generators.

    Classes are graded by the number d of free orbits in A and compared with
    the monomial counts C(m+d-1, d); the G-action must permute them.
    """
    from .burnside import multiset_count

    G = system.group
    H = G.subgroups[H] if isinstance(H, (int, np.integer)) else H
    X = make_orbit(G, H)
    keys = poly_basis(system, X, G.trivial.id, dmax * G.order)
    by_degree = Counter(key_grade(G, k) // G.order for k in keys)
    m = G.order // H.order
    counts = [by_degree.get(d, 0) for d in range(dmax + 1)]
    expected = [multiset_count(m, d) for d in range(dmax + 1)]
    permuted = weyl_permutes_basis(system, X, G.trivial.id, dmax * G.order)
    return UnderlyingReport(m, counts, expected, permuted)
