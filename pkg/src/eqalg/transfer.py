"""Transfer systems: admissibility relations on the subgroup lattice.

A relation is a set of subgroup-id pairs ``(K, H)`` with ``K ≤ H``.  It is a
transfer system when it is reflexive, transitive, closed under conjugation
and closed under restriction: ``(K, H)`` and ``L ≤ H`` give ``(K ∩ L, L)``.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property

from .groups import FiniteGroup, NotNormalError, Subgroup, quotient_group


class TransferSystemError(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple[int, int]


class _PairIndex:
    """Bit positions for the strict pairs K < H, plus closure helpers."""

    def __init__(self, G: FiniteGroup):
        L = G.lattice
        n = len(L)
        self.group = G
        self.pairs = [(k, h) for k in range(n) for h in range(n) if k != h and L.inclusion[k, h]]
        self.bit = {p: i for i, p in enumerate(self.pairs)}
        # conjugation and restriction closure of each single pair
        self.cr = []
        for (k, h) in self.pairs:
            mask = 0
            for g in range(G.order):
                kg, hg = int(L.conj_table[g, k]), int(L.conj_table[g, h])
                for sub in L.subgroups_of(hg):
                    q = (L.intersect(kg, sub), sub)
                    if q[0] != q[1]:
                        mask |= 1 << self.bit[q]
            self.cr.append(mask)
        # pairs (k, h) indexed by their middle for transitivity
        self.starting_at = {}
        self.ending_at = {}
        for i, (k, h) in enumerate(self.pairs):
            self.starting_at.setdefault(k, 0)
            self.starting_at[k] |= 1 << i
            self.ending_at.setdefault(h, 0)
            self.ending_at[h] |= 1 << i

    def close(self, mask: int) -> int:
        while True:
            new = mask
            m = mask
            while m:
                low = m & -m
                i = low.bit_length() - 1
                new |= self.cr[i]
                m ^= low
            # transitivity
            m = new
            comp = 0
            while m:
                low = m & -m
                i = low.bit_length() - 1
                k, h = self.pairs[i]
                nxt = new & self.starting_at.get(h, 0)
                while nxt:
                    lo2 = nxt & -nxt
                    j = lo2.bit_length() - 1
                    comp |= 1 << self.bit[(k, self.pairs[j][1])]
                    nxt ^= lo2
                m ^= low
            new |= comp
            if new == mask:
                return mask
            mask = new

    def to_pairs(self, mask: int) -> list[tuple[int, int]]:
        return [p for i, p in enumerate(self.pairs) if mask >> i & 1]

    def to_mask(self, pairs) -> int:
        mask = 0
        for p in pairs:
            if p[0] != p[1]:
                mask |= 1 << self.bit[tuple(p)]
        return mask


def _index(G: FiniteGroup) -> _PairIndex:
    cache = G.__dict__
    if "_pair_index" not in cache:
        cache["_pair_index"] = _PairIndex(G)
    return cache["_pair_index"]


class TransferSystem:
    def __init__(self, group: FiniteGroup, pairs, check: bool = True):
        self.group = group
        n = len(group.subgroups)
        rel = {(int(k), int(h)) for k, h in pairs}
        for k, h in rel:
            if not (0 <= k < n and 0 <= h < n) or not group.lattice.inclusion[k, h]:
                raise TransferSystemError(f"pair ({k}, {h}) is not a subgroup inclusion")
        rel |= {(h, h) for h in range(n)}
        self.rel = frozenset(rel)
        if check:
            bad = validate(group, self.rel)
            if bad is not None:
                raise TransferSystemError(f"{bad.axiom} fails at {bad.witness}")

    @classmethod
    def _from_mask(cls, G: FiniteGroup, mask: int) -> "TransferSystem":
        return cls(G, _index(G).to_pairs(mask), check=False)

    @cached_property
    def mask(self) -> int:
        return _index(self.group).to_mask(self.rel)

    def __eq__(self, other):
        return isinstance(other, TransferSystem) and other.group is self.group and other.rel == self.rel

    def __hash__(self):
        return hash(self.rel)

    def __le__(self, other: "TransferSystem") -> bool:
        return self.rel <= other.rel

    def __repr__(self):
        return f"TransferSystem({self.group.name}, {self.nontrivial_pairs()})"

    def nontrivial_pairs(self) -> list[tuple[int, int]]:
        return sorted(p for p in self.rel if p[0] != p[1])

    def is_admissible(self, K, H) -> bool:
        return (_id(K), _id(H)) in self.rel

    def intersect(self, other: "TransferSystem") -> "TransferSystem":
        return TransferSystem(self.group, self.rel & other.rel, check=False)

    # -- change of group --------------------------------------------------

    def restrict_to(self, H: Subgroup) -> "TransferSystem":
        """Pairs inside H, re-indexed over the standalone group of H."""
        G = self.group
        Hg, emb = G.subgroup_group(H)
        pos = {int(g): i for i, g in enumerate(emb)}

        def local(sid):
            return Hg.subgroup([pos[e] for e in G.subgroups[sid].elements]).id

        inside = G.lattice.inclusion[:, H.id]
        pairs = [(local(k), local(l)) for k, l in self.rel if inside[l]]
        return TransferSystem(Hg, pairs, check=False)

    def quotient_along(self, N: Subgroup) -> "TransferSystem":
        G = self.group
        Q, proj = quotient_group(G, N)
        inc = G.lattice.inclusion

        def image(sid):
            return Q.subgroup({int(proj[e]) for e in G.subgroups[sid].elements}).id

        pairs = [(image(k), image(h)) for k, h in self.rel if inc[N.id, k]]
        return TransferSystem(Q, pairs, check=False)

    # -- admissibility data ------------------------------------------------

    def family(self) -> list[int]:
        """Subgroups H with (e, H) admissible."""
        fam = [h for h in range(len(self.group.subgroups)) if (0, h) in self.rel]
        L = self.group.lattice
        for h in fam:
            for k in L.subgroups_of(h):
                assert (0, k) in self.rel, "family is not closed under subgroups"
            for g in range(self.group.order):
                assert (0, int(L.conj_table[g, h])) in self.rel, "family is not conjugation closed"
        return fam

    def minimal_admissible_normal(self) -> int:
        """N = ∩{H : (H, G) admissible}; it is normal and (N, G) is admissible."""
        G = self.group
        top = G.whole.id
        elems = set(range(G.order))
        for k, h in self.rel:
            if h == top:
                elems &= set(G.subgroups[k].elements)
        N = G.subgroup(elems).id
        L = G.lattice
        assert L.normal[N], "minimal admissible subgroup is not normal"
        assert (N, top) in self.rel, "minimal admissible subgroup is not admissible"
        for k, h in self.rel:
            if h == top:
                assert L.inclusion[N, k]
        return N

    def to_json(self) -> str:
        return json.dumps({"group": self.group.name, "pairs": [list(p) for p in self.nontrivial_pairs()]})

    @classmethod
    def from_json(cls, G: FiniteGroup, text: str) -> "TransferSystem":
        data = json.loads(text)
        if data.get("group", G.name) != G.name:
            raise TransferSystemError(f"system is for {data['group']}, not {G.name}")
        return cls(G, [tuple(p) for p in data["pairs"]])


def _id(s) -> int:
    return s.id if isinstance(s, Subgroup) else int(s)


def validate(G: FiniteGroup, rel) -> Violation | None:
    """First violated axiom with a witness pair, or None when ``rel`` is a transfer system.

    Witnesses: for reflexivity the missing (H, H); for the closure axioms the
    pair that is required but absent.
    """
    L = G.lattice
    n = len(L)
    rel = {(int(k), int(h)) for k, h in rel}
    for k, h in sorted(rel):
        if not (0 <= k < n and 0 <= h < n) or not L.inclusion[k, h]:
            raise TransferSystemError(f"pair ({k}, {h}) is not a subgroup inclusion")
    for h in range(n):
        if (h, h) not in rel:
            return Violation("reflexive", (h, h))
    for (k, h), (h2, m) in itertools.product(sorted(rel), repeat=2):
        if h == h2 and (k, m) not in rel:
            return Violation("transitive", (k, m))
    for k, h in sorted(rel):
        for g in range(G.order):
            q = (int(L.conj_table[g, k]), int(L.conj_table[g, h]))
            if q not in rel:
                return Violation("conjugation", q)
    for k, h in sorted(rel):
        for sub in L.subgroups_of(h):
            q = (L.intersect(k, sub), sub)
            if q not in rel:
                return Violation("restriction", q)
    return None


def is_valid(G: FiniteGroup, rel) -> bool:
    return validate(G, rel) is None


def trivial_system(G: FiniteGroup) -> TransferSystem:
    return TransferSystem(G, [], check=False)


def complete_system(G: FiniteGroup) -> TransferSystem:
    L = G.lattice
    n = len(L)
    return TransferSystem(G, [(k, h) for k in range(n) for h in range(n) if L.inclusion[k, h]], check=False)


def o_gen(G: FiniteGroup, N: Subgroup) -> TransferSystem:
    """Pairs (K, H) with N ≤ K or N not contained in H."""
    L = G.lattice
    if not L.normal[N.id]:
        raise NotNormalError(f"subgroup {N.id} is not normal")
    n = len(L)
    inc = L.inclusion
    pairs = [(k, h) for k in range(n) for h in range(n)
             if inc[k, h] and (inc[N.id, k] or not inc[N.id, h])]
    return TransferSystem(G, pairs, check=False)


def canonical_systems(G: FiniteGroup, which: str, N: Subgroup | None = None) -> TransferSystem:
    if which == "trivial":
        return trivial_system(G)
    if which == "complete":
        return complete_system(G)
    if which == "o_gen":
        if N is None:
            raise TransferSystemError("o_gen needs a normal subgroup")
        return o_gen(G, N)
    raise TransferSystemError(f"unknown canonical system {which!r}")


def generated_by(G: FiniteGroup, pairs) -> TransferSystem:
    idx = _index(G)
    return TransferSystem._from_mask(G, idx.close(idx.to_mask(pairs)))


def enumerate_systems(G: FiniteGroup) -> list[TransferSystem]:
    """All transfer systems, sorted by their relation read as a bitset.

    Transfer systems are the closed sets of a closure operator on strict
    pairs, so NextClosure lists each exactly once.
    """
    cache = G.__dict__
    if "_transfer_systems" in cache:
        return list(cache["_transfer_systems"])
    idx = _index(G)
    m = len(idx.pairs)
    close = idx.close
    found = []
    current = close(0)
    found.append(current)
    full = (1 << m) - 1
    while current != full:
        for i in range(m - 1, -1, -1):
            bit = 1 << i
            if current & bit:
                continue
            lower = current & (bit - 1)
            cand = close(lower | bit)
            # accept when the closure adds nothing below position i
            if cand & ((1 << i) - 1) == lower:
                current = cand
                break
        else:
            break
        found.append(current)
    systems = [TransferSystem._from_mask(G, mask) for mask in sorted(found)]
    cache["_transfer_systems"] = tuple(systems)
    return systems


def enumerate_brute_force(G: FiniteGroup) -> list[TransferSystem]:
    """Validate every subset of strict pairs.  Exponential; an oracle for tiny lattices."""
    idx = _index(G)
    out = []
    for mask in range(1 << len(idx.pairs)):
        pairs = idx.to_pairs(mask)
        if is_valid(G, pairs + [(h, h) for h in range(len(G.subgroups))]):
            out.append(mask)
    return [TransferSystem._from_mask(G, m) for m in sorted(out)]


def count_systems(G: FiniteGroup) -> int:
    return len(enumerate_systems(G))
