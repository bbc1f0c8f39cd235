"""Burnside rings A(G/H) = A(H), computed exactly through tables of marks."""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd

import numpy as np

from .groups import FiniteGroup, Subgroup, build_group, is_prime
from .gsets import GSet, coinduce, disjoint_union, empty_gset, make_orbit
from .intlin import rank_gaussian


class BurnsideError(ValueError):
    pass


_CACHE_LOCK = threading.Lock()


def _sub(G: FiniteGroup, H) -> Subgroup:
    return G.subgroups[H] if isinstance(H, (int, np.integer)) else H


class BurnsideRing:
    """A(H) for a subgroup H of G, with basis the H-classes of subgroups of H.

    Classes are sorted by subgroup order, so the table of marks
    ``marks[J, K] = |(H/J)^K|`` is lower triangular.
    """

    def __init__(self, G: FiniteGroup, H: Subgroup):
        self.group, self.level = G, H
        L = G.lattice
        inside = [s for s in L.subgroups_of(H.id)]
        class_of = {}
        reps = []
        for s in inside:
            if s in class_of:
                continue
            for h in H.elements:
                class_of[int(L.conj_table[h, s])] = len(reps)
            reps.append(s)
        order = sorted(range(len(reps)), key=lambda i: (G.subgroups[reps[i]].order, reps[i]))
        relabel = {old: new for new, old in enumerate(order)}
        self.reps = [reps[i] for i in order]
        self.class_of = {s: relabel[c] for s, c in class_of.items()}
        n = len(self.reps)
        self.rank = n
        inv = G.inverse
        m = np.zeros((n, n), dtype=object)
        for i, J in enumerate(self.reps):
            jord = G.subgroups[J].order
            for k, K in enumerate(self.reps):
                hits = sum(1 for h in H.elements if L.inclusion[L.conj_table[inv[h], K], J])
                m[i, k] = hits // jord
        self.marks = m

    def __repr__(self):
        return f"BurnsideRing({self.group.name}, level={self.level.id}, rank={self.rank})"

    # -- elements ---------------------------------------------------------

    def element(self, coeffs) -> "BurnsideElement":
        coeffs = tuple(coeffs)
        if len(coeffs) != self.rank:
            raise BurnsideError(f"expected {self.rank} coefficients")
        return BurnsideElement(self, coeffs)

    def basis(self, sub) -> "BurnsideElement":
        """The class [H/J] of a subgroup J ≤ H (given by id)."""
        c = [0] * self.rank
        c[self.class_of[int(sub)]] = 1
        return self.element(c)

    @property
    def one(self) -> "BurnsideElement":
        return self.basis(self.level.id)

    @property
    def zero(self) -> "BurnsideElement":
        return self.element([0] * self.rank)

    def scalar(self, n) -> "BurnsideElement":
        return self.one * n

    def free_orbit(self) -> "BurnsideElement":
        return self.basis(self.group.trivial.id)

    def from_marks(self, v) -> "BurnsideElement":
        c = [Fraction(0)] * self.rank
        for k in range(self.rank - 1, -1, -1):
            acc = Fraction(v[k]) - sum(c[j] * self.marks[j, k] for j in range(k + 1, self.rank))
            c[k] = acc / self.marks[k, k]
        return self.element(_simplify(c))

    def from_gset(self, X: GSet, embedding=None) -> "BurnsideElement":
        """Class of an H-set.  ``X`` is over G when H = G, otherwise over the
        standalone group of H with ``embedding`` its element embedding."""
        G = self.group
        c = [0] * self.rank
        for x in X.orbit_reps:
            stab = X.group.subgroups[X.stabilizer(x)]
            elems = stab.elements if embedding is None else [int(embedding[e]) for e in stab.elements]
            c[self.class_of[G.subgroup(elems).id]] += 1
        return self.element(c)

    def to_hset(self, a: "BurnsideElement"):
        """Realize an effective element as an H-set over the standalone group of H."""
        if not a.is_effective():
            raise BurnsideError("only effective elements are represented by H-sets")
        Hg, emb = self.group.subgroup_group(self.level)
        pos = {int(g): i for i, g in enumerate(emb)}
        parts = []
        for J, n in zip(self.reps, a.coeffs):
            Jl = Hg.subgroup([pos[e] for e in self.group.subgroups[J].elements])
            parts += [make_orbit(Hg, Jl)] * int(n)
        if not parts:
            return empty_gset(Hg), emb
        return disjoint_union(*parts)[0], emb


def _simplify(c):
    return [int(x) if Fraction(x).denominator == 1 else Fraction(x) for x in c]


def burnside_ring(G: FiniteGroup, H=None) -> BurnsideRing:
    H = G.whole if H is None else _sub(G, H)
    with _CACHE_LOCK:
        cache = G.__dict__.setdefault("_burnside", {})
        if H.id not in cache:
            cache[H.id] = BurnsideRing(G, H)
        return cache[H.id]


def table_of_marks(G: FiniteGroup, H=None) -> np.ndarray:
    return burnside_ring(G, H).marks.copy()


@dataclass(frozen=True)
class BurnsideElement:
    ring: BurnsideRing
    coeffs: tuple

    def __repr__(self):
        return f"BurnsideElement(level={self.ring.level.id}, {list(self.coeffs)})"

    def _check(self, other):
        if not isinstance(other, BurnsideElement):
            return self.ring.scalar(other)
        if other.ring is not self.ring:
            raise BurnsideError("elements live at different levels")
        return other

    def __eq__(self, other):
        if not isinstance(other, BurnsideElement):
            return NotImplemented
        return self.ring is other.ring and list(self.coeffs) == list(other.coeffs)

    def __hash__(self):
        return hash((id(self.ring), self.coeffs))

    def __add__(self, other):
        other = self._check(other)
        return self.ring.element(_simplify([a + b for a, b in zip(self.coeffs, other.coeffs)]))

    __radd__ = __add__

    def __neg__(self):
        return self.ring.element([-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, BurnsideElement):
            return self.ring.element(_simplify([a * other for a in self.coeffs]))
        other = self._check(other)
        return self.ring.from_marks([a * b for a, b in zip(self.marks(), other.marks())])

    __rmul__ = __mul__

    def __truediv__(self, n):
        return self.ring.element(_simplify([Fraction(a) / n for a in self.coeffs]))

    def __pow__(self, k: int):
        out = self.ring.one
        for _ in range(k):
            out = out * self
        return out

    def marks(self) -> list:
        m = self.ring.marks
        n = self.ring.rank
        return [sum(self.coeffs[j] * m[j, k] for j in range(n)) for k in range(n)]

    def is_integral(self) -> bool:
        return all(Fraction(a).denominator == 1 for a in self.coeffs)

    def is_effective(self) -> bool:
        return self.is_integral() and all(a >= 0 for a in self.coeffs)

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coeffs)

    # -- structure maps ---------------------------------------------------

    def res(self, K) -> "BurnsideElement":
        G = self.ring.group
        K = _sub(G, K)
        if not G.lattice.inclusion[K.id, self.ring.level.id]:
            raise BurnsideError("restriction needs a subgroup of the current level")
        target = burnside_ring(G, K)
        mk = self.marks()
        return target.from_marks([mk[self.ring.class_of[L]] for L in target.reps])

    def tr(self, H) -> "BurnsideElement":
        G = self.ring.group
        H = _sub(G, H)
        if not G.lattice.inclusion[self.ring.level.id, H.id]:
            raise BurnsideError("transfer goes up to a supergroup of the current level")
        target = burnside_ring(G, H)
        c = [0] * target.rank
        for L, a in zip(self.ring.reps, self.coeffs):
            c[target.class_of[L]] += a
        return target.element(_simplify(c))

    def nm(self, H) -> "BurnsideElement":
        """Norm by coinduction of the represented set (effective elements only)."""
        G = self.ring.group
        H = _sub(G, H)
        K = self.ring.level
        if not G.lattice.inclusion[K.id, H.id]:
            raise BurnsideError("norm goes up to a supergroup of the current level")
        if not self.is_effective():
            raise BurnsideError("norms are only defined here on effective elements")
        target = burnside_ring(G, H)
        Hg, emb = G.subgroup_group(H)
        pos = {int(g): i for i, g in enumerate(emb)}
        K_in_H = Hg.subgroup([pos[e] for e in K.elements])
        Kg, kemb = Hg.subgroup_group(K_in_H)
        kpos = {int(g): i for i, g in enumerate(kemb)}
        parts = []
        for J, n in zip(self.ring.reps, self.coeffs):
            Jl = Kg.subgroup([kpos[pos[e]] for e in G.subgroups[J].elements])
            parts += [make_orbit(Kg, Jl)] * int(n)
        S = disjoint_union(*parts)[0] if parts else empty_gset(Kg)
        return target.from_gset(coinduce(S, Hg, K_in_H), embedding=emb)


def _cp_group(p_or_group) -> FiniteGroup:
    if isinstance(p_or_group, FiniteGroup):
        G = p_or_group
        if not (is_prime(G.order) and len(G.subgroups) == 2):
            raise BurnsideError("expected a cyclic group of prime order")
        return G
    if not is_prime(int(p_or_group)):
        raise BurnsideError("the closed form is for cyclic groups of prime order")
    return build_group(f"C{int(p_or_group)}")


def cp_norm_closed_form(p_or_group, a: int) -> BurnsideElement:
    """nm_e^{C_p}(a) = a + ((a^p - a)/p)·t, valid for every integer a."""
    G = _cp_group(p_or_group)
    p = G.order
    return burnside_ring(G).element([(a ** p - a) // p, a])


def cp_transfer_class(p_or_group) -> BurnsideElement:
    """t = [C_p/e] in A(C_p)."""
    return burnside_ring(_cp_group(p_or_group)).free_orbit()


def trivial_idempotent(G: FiniteGroup) -> BurnsideElement:
    """e = [G/e]/|G|, the idempotent supported at the trivial subgroup."""
    R = burnside_ring(G)
    return R.free_orbit() / G.order


@dataclass
class LocalizationReport:
    group: str
    index_identity: bool
    idempotent: bool
    idempotent_marks: bool
    summand_rank_one: bool
    failures: list

    @property
    def ok(self) -> bool:
        return self.index_identity and self.idempotent and self.idempotent_marks and self.summand_rank_one


def localization_checks(G: FiniteGroup) -> LocalizationReport:
    failures = []
    L = G.lattice
    index_ok = True
    for H in G.subgroups:
        R = burnside_ring(G, H)
        free = R.free_orbit()
        for K in L.subgroups_of(H.id):
            idx = H.order // G.subgroups[K].order
            if not (free * (R.basis(K) - idx)).is_zero():
                index_ok = False
                failures.append(("index", H.id, K))
    e = trivial_idempotent(G)
    idem = e * e == e
    if not idem:
        failures.append(("idempotent",))
    R = e.ring
    mk = e.marks()
    marks_ok = all((mk[R.class_of[J]] == 1) == (J == G.trivial.id) for J in R.reps)
    if not marks_ok:
        failures.append(("marks",))
    summand = True
    for H in G.subgroups:
        RH = burnside_ring(G, H)
        eh = e.res(H)
        rows = [(eh * RH.basis(J)).coeffs for J in RH.reps]
        denom = 1
        for row in rows:
            for v in row:
                denom = denom * Fraction(v).denominator // gcd(denom, Fraction(v).denominator)
        scaled = [[int(Fraction(v) * denom) for v in row] for row in rows]
        if rank_gaussian(scaled) != 1:
            summand = False
            failures.append(("summand", H.id))
    return LocalizationReport(G.name, index_ok, idem, marks_ok, summand, failures)


def multiset_count(m: int, d: int) -> int:
    """Number of degree-d monomials in m variables."""
    return comb(m + d - 1, d) if m else int(d == 0)
