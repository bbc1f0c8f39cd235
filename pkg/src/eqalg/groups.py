"""Finite groups as multiplication tables, with their subgroup lattices.

Elements are integers ``0 .. order-1`` and ``0`` is always the identity.
Groups are built from permutation generators and renumbered so that
elements appear in shortlex order of their generator words.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property
from math import gcd

import numpy as np


class GroupError(ValueError):
    pass


class ParseError(GroupError):
    pass


class UnsupportedGroupError(GroupError):
    pass


class NotNormalError(GroupError):
    pass


@dataclass(frozen=True, eq=False)
class Subgroup:
    id: int
    elements: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def element_set(self) -> frozenset[int]:
        return frozenset(self.elements)

    def __contains__(self, g) -> bool:
        return g in self.element_set

    def __repr__(self):
        return f"Subgroup(id={self.id}, order={self.order})"


class FiniteGroup:
    """A finite group given by its full multiplication table.

    ``mul[a, b]`` is the index of the product ``a*b``.
    """

    def __init__(self, mul, name: str = "G"):
        mul = np.asarray(mul, dtype=np.int64)
        if mul.ndim != 2 or mul.shape[0] != mul.shape[1]:
            raise GroupError("multiplication table must be square")
        self.mul = mul
        self.mul.setflags(write=False)
        self.order = int(mul.shape[0])
        self.name = name
        self.identity = 0
        inv = np.empty(self.order, dtype=np.int64)
        for a in range(self.order):
            hits = np.nonzero(mul[a] == 0)[0]
            if len(hits) != 1:
                raise GroupError(f"element {a} has no unique inverse")
            inv[a] = hits[0]
        self.inverse = inv
        self.inverse.setflags(write=False)

    def __repr__(self):
        return f"FiniteGroup({self.name!r}, order={self.order})"

    # -- validation -------------------------------------------------------

    def validate(self) -> None:
        n, m = self.order, self.mul
        if not (np.array_equal(m[0], np.arange(n)) and np.array_equal(m[:, 0], np.arange(n))):
            raise GroupError("element 0 is not the identity")
        for row in m:
            if sorted(row.tolist()) != list(range(n)):
                raise GroupError("multiplication table is not a Latin square")
        # (ab)c == a(bc) for all triples, vectorised over c
        for a in range(n):
            for b in range(n):
                if not np.array_equal(m[m[a, b]], m[a][m[b]]):
                    raise GroupError(f"associativity fails at ({a}, {b}, -)")
        if not np.all(m[np.arange(n), self.inverse] == 0):
            raise GroupError("inverse table is inconsistent")

    # -- element helpers --------------------------------------------------

    def conj(self, g: int, x: int) -> int:
        """g x g^-1"""
        return int(self.mul[self.mul[g, x], self.inverse[g]])

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != 0:
            x = int(self.mul[x, g])
            k += 1
        return k

    def closure(self, gens) -> frozenset[int]:
        """Subgroup generated by ``gens``."""
        seen = {0}
        frontier = [0]
        gens = [int(g) for g in gens]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = int(self.mul[x, g])
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    # -- subgroup lattice -------------------------------------------------

    @cached_property
    def lattice(self) -> "SubgroupLattice":
        return SubgroupLattice(self)

    @property
    def subgroups(self) -> list[Subgroup]:
        return self.lattice.subgroups

    def subgroup(self, elements) -> Subgroup:
        return self.lattice.by_elements[frozenset(int(x) for x in elements)]

    @property
    def trivial(self) -> Subgroup:
        return self.subgroups[0]

    @property
    def whole(self) -> Subgroup:
        return self.subgroups[-1]

    # -- derived constructions --------------------------------------------

    def commutator_subgroup(self, H: Subgroup | None = None) -> frozenset[int]:
        elems = self.whole.elements if H is None else H.elements
        m, inv = self.mul, self.inverse
        comms = {int(m[m[a, b], m[inv[a], inv[b]]]) for a in elems for b in elems}
        return self.closure(comms)

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    def subgroup_group(self, H: Subgroup) -> tuple["FiniteGroup", np.ndarray]:
        """H as a standalone group, with the embedding ``emb[i] -> element of G``."""
        return _subgroup_group(self, H.id)

    def quotient(self, N: Subgroup):
        return quotient_group(self, N)

    # -- serialization ----------------------------------------------------

    def to_text(self) -> str:
        lines = ["format: eqalg-group/1", f"name: {self.name}", f"order: {self.order}", "mul:"]
        lines += [" ".join(str(int(v)) for v in row) for row in self.mul]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "FiniteGroup":
        meta, rows, in_table = {}, [], False
        for line in text.splitlines():
            if not line.strip():
                continue
            if in_table:
                rows.append([int(v) for v in line.split()])
            elif line.startswith("mul:"):
                in_table = True
            else:
                key, _, value = line.partition(":")
                meta[key.strip()] = value.strip()
        if meta.get("format") != "eqalg-group/1":
            raise ParseError(f"unsupported group document format {meta.get('format')!r}")
        G = cls(rows, name=meta.get("name", "G"))
        if G.order != int(meta["order"]):
            raise ParseError("order does not match table size")
        G.validate()
        return G


def _subgroup_group(G: FiniteGroup, hid: int):
    cache = G.__dict__.setdefault("_subgroup_groups", {})
    if hid not in cache:
        H = G.subgroups[hid]
        emb = np.array(H.elements, dtype=np.int64)
        pos = {int(g): i for i, g in enumerate(emb)}
        mul = [[pos[int(G.mul[a, b])] for b in emb] for a in emb]
        name = G.name if H.order == G.order else f"{G.name}|{hid}"
        cache[hid] = (FiniteGroup(mul, name=name), emb)
    return cache[hid]


class SubgroupLattice:
    """All subgroups of a group, sorted by (order, sorted element list)."""

    def __init__(self, G: FiniteGroup):
        self.group = G
        found = {frozenset([0])}
        cyclic = {G.closure([g]) for g in range(G.order)}
        found |= cyclic
        # every subgroup is a join of cyclic subgroups
        frontier = set(found)
        while frontier:
            new = set()
            for A in frontier:
                for C in cyclic:
                    if not C <= A:
                        J = G.closure(A | C)
                        if J not in found:
                            new.add(J)
            found |= new
            frontier = new
        ordered = sorted(found, key=lambda s: (len(s), sorted(s)))
        self.subgroups = [Subgroup(i, tuple(sorted(s))) for i, s in enumerate(ordered)]
        self.by_elements = {s.element_set: s for s in self.subgroups}
        n = len(self.subgroups)

        self.inclusion = np.zeros((n, n), dtype=bool)
        for a in self.subgroups:
            for b in self.subgroups:
                self.inclusion[a.id, b.id] = a.element_set <= b.element_set

        # conj_table[g, H] = id of g H g^-1
        self.conj_table = np.empty((G.order, n), dtype=np.int64)
        for g in range(G.order):
            for s in self.subgroups:
                img = frozenset(G.conj(g, x) for x in s.elements)
                self.conj_table[g, s.id] = self.by_elements[img].id

        self.conj_class = np.full(n, -1, dtype=np.int64)
        self.class_reps: list[int] = []
        for s in self.subgroups:
            if self.conj_class[s.id] < 0:
                cls_id = len(self.class_reps)
                self.class_reps.append(s.id)
                for t in set(self.conj_table[:, s.id].tolist()):
                    self.conj_class[t] = cls_id
        self.normal = np.array([len(set(self.conj_table[:, s.id].tolist())) == 1 for s in self.subgroups])
        self.normalizer = np.empty(n, dtype=np.int64)
        for s in self.subgroups:
            nz = [g for g in range(G.order) if self.conj_table[g, s.id] == s.id]
            self.normalizer[s.id] = self.by_elements[frozenset(nz)].id
        self.weyl_order = np.array(
            [self.subgroups[self.normalizer[s.id]].order // s.order for s in self.subgroups])

        # longest chain e = H0 < ... < G, counting subgroups
        longest = [1] * n
        for b in range(n):
            for a in range(b):
                if self.inclusion[a, b] and a != b:
                    longest[b] = max(longest[b], longest[a] + 1)
        self.depth = longest[-1]

    def __len__(self):
        return len(self.subgroups)

    def class_members(self, cls_id: int) -> list[int]:
        return [i for i in range(len(self.subgroups)) if self.conj_class[i] == cls_id]

    def subconjugate(self, a: int, b: int) -> bool:
        """Is subgroup ``a`` contained in some conjugate of ``b``?"""
        return any(self.inclusion[a, c] for c in set(self.conj_table[:, b].tolist()))

    def intersect(self, a: int, b: int) -> int:
        s = self.subgroups[a].element_set & self.subgroups[b].element_set
        return self.by_elements[s].id

    def subgroups_of(self, h: int) -> list[int]:
        return [i for i in range(len(self.subgroups)) if self.inclusion[i, h]]

    def supergroups_of(self, k: int) -> list[int]:
        return [i for i in range(len(self.subgroups)) if self.inclusion[k, i]]


def subgroup_lattice(G: FiniteGroup) -> SubgroupLattice:
    return G.lattice


def quotient_group(G: FiniteGroup, N: Subgroup):
    """Return ``(Q, proj)`` with ``proj[g]`` the image of ``g`` in Q = G/N."""
    if not G.lattice.normal[N.id]:
        raise NotNormalError(f"subgroup {N.id} is not normal in {G.name}")
    coset_of = np.full(G.order, -1, dtype=np.int64)
    reps = []
    for g in range(G.order):
        if coset_of[g] < 0:
            for n in N.elements:
                coset_of[int(G.mul[g, n])] = len(reps)
            reps.append(g)
    mul = [[int(coset_of[G.mul[a, b]]) for b in reps] for a in reps]
    name = f"{G.name}/{N.id}" if N.order > 1 else G.name
    if N.order == G.order:
        name = "C1"
    return FiniteGroup(mul, name=name), coset_of


def is_solvable(G: FiniteGroup) -> bool:
    current = frozenset(range(G.order))
    while len(current) > 1:
        H = G.subgroup(current)
        nxt = G.commutator_subgroup(H)
        if nxt == current:
            return False
        current = nxt
    return True


# ---------------------------------------------------------------------------
# construction from permutations
# ---------------------------------------------------------------------------

def _generate(gens, compose, identity, name):
    """Enumerate the group generated by ``gens`` in shortlex order of words.

    ``compose(a, b)`` is the product ``a*b`` of two raw elements.
    """
    elements = [identity]
    index = {identity: 0}
    frontier = [identity]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = compose(x, s)
                if y not in index:
                    index[y] = len(elements)
                    elements.append(y)
                    nxt.append(y)
        frontier = nxt
    n = len(elements)
    mul = np.empty((n, n), dtype=np.int64)
    for a, ea in enumerate(elements):
        for b, eb in enumerate(elements):
            mul[a, b] = index[compose(ea, eb)]
    return FiniteGroup(mul, name=name)


def _from_permutations(gens, name):
    degree = len(gens[0])
    # a*b is "apply b, then a"
    return _generate(gens, lambda a, b: tuple(a[b[i]] for i in range(degree)),
                     tuple(range(degree)), name)


def _cycle(n, offset=0, degree=None):
    degree = degree or n
    p = list(range(degree))
    for i in range(n):
        p[offset + i] = offset + (i + 1) % n
    return tuple(p)


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise UnsupportedGroupError("cyclic order must be positive")
    if n == 1:
        return FiniteGroup([[0]], name="C1")
    return _from_permutations([_cycle(n)], f"C{n}")


def direct_product(orders) -> FiniteGroup:
    degree = sum(orders)
    gens, off = [], 0
    for n in orders:
        if n > 1:
            gens.append(_cycle(n, off, degree))
        off += n
    name = "x".join(f"C{n}" for n in orders)
    if not gens:
        return FiniteGroup([[0]], name=name)
    return _from_permutations(gens, name)


def dihedral(order: int) -> FiniteGroup:
    if order < 4 or order % 2:
        raise UnsupportedGroupError("dihedral order must be even and at least 4")
    m = order // 2
    rot = _cycle(m)
    refl = tuple((-i) % m for i in range(m))
    if m == 2:
        # the symmetries of a 2-gon act on 4 points to stay faithful
        rot, refl = (1, 0, 3, 2), (2, 3, 0, 1)
    return _from_permutations([rot, refl], f"D{order}")


_QUAT = {  # unit products: (u, v) -> (sign, w) over units 1, i, j, k = 0..3
    (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
    (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
    (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
    (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
}


def quaternion8() -> FiniteGroup:
    def compose(a, b):
        sign, w = _QUAT[a[1], b[1]]
        return (a[0] * b[0] * sign, w)
    return _generate([(1, 1), (1, 2)], compose, (1, 0), "Q8")


def symmetric(n: int) -> FiniteGroup:
    if n < 1 or n > 4:
        raise UnsupportedGroupError("symmetric groups are supported for n <= 4")
    if n == 1:
        return FiniteGroup([[0]], name="S1")
    if n == 2:
        return _from_permutations([(1, 0)], "S2")
    return _from_permutations([_cycle(2, 0, n), _cycle(n)], f"S{n}")


def alternating(n: int) -> FiniteGroup:
    if n < 3 or n > 5:
        raise UnsupportedGroupError("alternating groups are supported for 3 <= n <= 5")
    gens = [_cycle(3, i, n) for i in range(n - 2)]
    return _from_permutations(gens, f"A{n}")


_SIMPLE = re.compile(r"^([CDSA])(\d+)$")
_PRODUCT = re.compile(r"^C\d+(xC\d+)+$")


def build_group(descriptor: str) -> FiniteGroup:
    """Build a catalog group from a descriptor such as ``C4``, ``C2xC2``, ``D6``, ``Q8``, ``S4``."""
    descriptor = descriptor.strip()
    if descriptor == "Q8":
        G = quaternion8()
    elif _PRODUCT.match(descriptor):
        G = direct_product([int(t[1:]) for t in descriptor.split("x")])
    else:
        m = _SIMPLE.match(descriptor)
        if not m:
            raise ParseError(f"cannot parse group descriptor {descriptor!r}")
        kind, n = m.group(1), int(m.group(2))
        if kind == "C":
            G = cyclic(n)
        elif kind == "D":
            G = dihedral(n)
        elif kind == "S":
            G = symmetric(n)
        else:
            G = alternating(n)
    if G.order > 120:
        raise UnsupportedGroupError(f"{descriptor} has order {G.order}; the catalog stops at 120")
    G.name = descriptor
    return G


#: Catalog groups of order at most 12, used by sweeps and property tests.
SMALL_CATALOG = (
    "C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C10", "C11", "C12",
    "C2xC2", "C2xC4", "C2xC2xC2", "C3xC3", "C2xC6", "D6", "D8", "D10", "D12", "Q8", "A4",
)


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def is_prime(n: int) -> bool:
    return n > 1 and all(n % d for d in range(2, int(n ** 0.5) + 1))


def coprime(a: int, b: int) -> bool:
    return gcd(a, b) == 1


def brute_force_subgroups(G: FiniteGroup) -> set[frozenset[int]]:
    """Every subset containing the identity and closed under multiplication.

    Exponential; only meant as a test oracle for groups of order <= 8.
    """
    out = set()
    rest = list(range(1, G.order))
    for r in range(len(rest) + 1):
        for combo in itertools.combinations(rest, r):
            s = {0, *combo}
            if all(int(G.mul[a, b]) in s for a in s for b in s):
                out.add(frozenset(s))
    return out
