"""Finite G-sets and equivariant maps.

A G-set stores its full action table ``action[g, x]``; a map stores the
image of every point.  All constructions accept the empty G-set.
"""
from __future__ import annotations

import itertools
from functools import cached_property

import numpy as np

from .groups import FiniteGroup, GroupError, NotNormalError, Subgroup, quotient_group


class GSetError(ValueError):
    pass


def _frozen(a) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int64)
    a.setflags(write=False)
    return a


class GSet:
    def __init__(self, group: FiniteGroup, action):
        action = np.asarray(action, dtype=np.int64)
        if action.ndim != 2:
            action = action.reshape(group.order, -1)
        if action.shape[0] != group.order:
            raise GSetError("action table needs one row per group element")
        self.group = group
        self.action = _frozen(action)
        self.size = int(action.shape[1])

    def __repr__(self):
        return f"GSet({self.group.name}, size={self.size}, orbits={len(self.orbits)})"

    def __len__(self):
        return self.size

    def validate(self) -> None:
        G, act, n = self.group, self.action, self.size
        if not np.array_equal(act[0], np.arange(n)):
            raise GSetError("identity does not act trivially")
        for row in act:
            if n and sorted(row.tolist()) != list(range(n)):
                raise GSetError("some element does not act by a permutation")
        for a in range(G.order):
            for b in range(G.order):
                if not np.array_equal(act[G.mul[a, b]], act[a][act[b]]):
                    raise GSetError(f"action is not compatible with the product at ({a}, {b})")

    # -- orbit structure --------------------------------------------------

    @cached_property
    def orbit_ids(self) -> np.ndarray:
        ids = np.full(self.size, -1, dtype=np.int64)
        k = 0
        for x in range(self.size):
            if ids[x] < 0:
                ids[np.unique(self.action[:, x])] = k
                k += 1
        return _frozen(ids)

    @cached_property
    def orbits(self) -> list[np.ndarray]:
        """Orbits ordered by their smallest point; each is a sorted array."""
        ids = self.orbit_ids
        count = int(ids.max()) + 1 if self.size else 0
        return [np.nonzero(ids == k)[0] for k in range(count)]

    @cached_property
    def orbit_reps(self) -> list[int]:
        return [int(o[0]) for o in self.orbits]

    def stabilizer(self, x: int) -> int:
        """Subgroup id of the stabilizer of point ``x``."""
        cache = self._stab_cache
        if x not in cache:
            elems = np.nonzero(self.action[:, x] == x)[0]
            cache[x] = self.group.subgroup(elems.tolist()).id
        return cache[x]

    @cached_property
    def _stab_cache(self) -> dict:
        return {}

    @cached_property
    def stabilizer_class(self) -> list[int]:
        """Conjugacy class id of the stabilizers of each orbit."""
        cc = self.group.lattice.conj_class
        return [int(cc[self.stabilizer(x)]) for x in self.orbit_reps]

    def fixed_by(self, sub: Subgroup | int) -> np.ndarray:
        """Points fixed by every element of the subgroup."""
        sub = self.group.subgroups[sub] if isinstance(sub, (int, np.integer)) else sub
        rows = self.action[list(sub.elements)]
        return np.nonzero(np.all(rows == np.arange(self.size), axis=0))[0]

    @cached_property
    def canonical_form(self) -> tuple[int, ...]:
        return tuple(sorted(self.stabilizer_class))

    def is_isomorphic(self, other: "GSet") -> bool:
        return self.group is other.group and self.canonical_form == other.canonical_form

    def is_transitive(self) -> bool:
        return len(self.orbits) == 1

    # -- serialization ----------------------------------------------------

    def to_text(self) -> str:
        lines = ["format: eqalg-gset/1", f"group: {self.group.name}", f"size: {self.size}", "action:"]
        lines += [" ".join(str(int(v)) for v in row) for row in self.action]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, group: FiniteGroup) -> "GSet":
        meta, rows, in_table = {}, [], False
        for line in text.splitlines():
            if in_table:
                if line.strip() or meta.get("size") == "0":
                    rows.append([int(v) for v in line.split()])
            elif line.startswith("action:"):
                in_table = True
            elif line.strip():
                key, _, value = line.partition(":")
                meta[key.strip()] = value.strip()
        if meta.get("format") != "eqalg-gset/1":
            raise GSetError(f"unsupported G-set document format {meta.get('format')!r}")
        if meta.get("group") != group.name:
            raise GSetError(f"document is for group {meta.get('group')!r}, not {group.name!r}")
        size = int(meta["size"])
        table = np.array(rows, dtype=np.int64).reshape(group.order, size) if size else \
            np.zeros((group.order, 0), dtype=np.int64)
        X = cls(group, table)
        X.validate()
        return X


class GMap:
    """An equivariant map, stored pointwise."""

    def __init__(self, source: GSet, target: GSet, f):
        self.source = source
        self.target = target
        self.f = _frozen(np.asarray(f, dtype=np.int64).reshape(-1))
        if len(self.f) != source.size:
            raise GSetError("map must send every source point somewhere")

    def __repr__(self):
        return f"GMap({self.source.size} -> {self.target.size})"

    def __call__(self, x: int) -> int:
        return int(self.f[x])

    def is_equivariant(self) -> bool:
        if self.source.size == 0:
            return True
        return bool(np.array_equal(self.f[self.source.action], self.target.action[:, self.f]))

    def validate(self) -> None:
        if self.source.group is not self.target.group:
            raise GSetError("source and target live over different groups")
        if self.source.size and (self.f.min() < 0 or self.f.max() >= self.target.size):
            raise GSetError("map has out-of-range values")
        if not self.is_equivariant():
            raise GSetError("map is not equivariant")

    def compose(self, inner: "GMap") -> "GMap":
        """``self ∘ inner``"""
        return GMap(inner.source, self.target, self.f[inner.f] if inner.source.size else [])

    def fiber(self, y: int) -> np.ndarray:
        return np.nonzero(self.f == y)[0]


# ---------------------------------------------------------------------------
# basic objects
# ---------------------------------------------------------------------------

def empty_gset(G: FiniteGroup) -> GSet:
    return GSet(G, np.zeros((G.order, 0), dtype=np.int64))


def point(G: FiniteGroup) -> GSet:
    return make_orbit(G, G.whole)


def identity_map(X: GSet) -> GMap:
    return GMap(X, X, np.arange(X.size))


def terminal_map(X: GSet) -> GMap:
    return GMap(X, point(X.group), np.zeros(X.size, dtype=np.int64))


def coset_reps(G: FiniteGroup, H: Subgroup | int) -> list[int]:
    """Minimal representatives of the left cosets gH, in increasing order."""
    H = G.subgroups[H] if isinstance(H, (int, np.integer)) else H
    return _coset_data(G, H.id)[0]


def _coset_data(G: FiniteGroup, hid: int):
    cache = G.__dict__.setdefault("_coset_data", {})
    if hid not in cache:
        H = G.subgroups[hid]
        which = np.full(G.order, -1, dtype=np.int64)
        reps = []
        for g in range(G.order):
            if which[g] < 0:
                which[G.mul[g, list(H.elements)]] = len(reps)
                reps.append(g)
        cache[hid] = (reps, _frozen(which))
    return cache[hid]


def make_orbit(G: FiniteGroup, H: Subgroup | int) -> GSet:
    """The coset space G/H; point 0 is the coset H itself."""
    H = G.subgroups[H] if isinstance(H, (int, np.integer)) else H
    cache = G.__dict__.setdefault("_orbits", {})
    if H.id not in cache:
        reps, which = _coset_data(G, H.id)
        act = which[G.mul[:, reps]]
        cache[H.id] = GSet(G, act)
    return cache[H.id]


def orbit_map(G: FiniteGroup, L: Subgroup | int, Y: GSet, y: int) -> GMap:
    """The map G/L -> Y sending the base coset to ``y``; needs L ≤ Stab(y)."""
    L = G.subgroups[L] if isinstance(L, (int, np.integer)) else L
    reps, _ = _coset_data(G, L.id)
    if not all(Y.action[l, y] == y for l in L.elements):
        raise GSetError("the chosen image is not fixed by the source stabilizer")
    return GMap(make_orbit(G, L), Y, Y.action[reps, y])


def hom_orbits(X: GSet, Y: GSet) -> list[GMap]:
    """All equivariant maps from a transitive X to Y."""
    if not X.is_transitive():
        raise GSetError("source must be a single orbit")
    x0 = X.orbit_reps[0]
    stab = X.group.subgroups[X.stabilizer(x0)]
    # g·x0 -> g·y, indexed through one group element per point
    first = np.full(X.size, -1, dtype=np.int64)
    col = X.action[:, x0]
    for g in range(X.group.order - 1, -1, -1):
        first[col[g]] = g
    return [GMap(X, Y, Y.action[first, int(y)]) for y in Y.fixed_by(stab)]


def disjoint_union(*parts: GSet) -> tuple[GSet, list[GMap]]:
    if not parts:
        raise GSetError("disjoint union needs at least one summand to fix the group")
    G = parts[0].group
    offs = np.cumsum([0] + [P.size for P in parts])
    act = np.concatenate([P.action + o for P, o in zip(parts, offs)], axis=1) if offs[-1] else \
        np.zeros((G.order, 0), dtype=np.int64)
    U = GSet(G, act)
    incs = [GMap(P, U, np.arange(P.size) + o) for P, o in zip(parts, offs)]
    return U, incs


def product(X: GSet, Y: GSet) -> tuple[GSet, GMap, GMap]:
    return pullback(terminal_map(X), terminal_map(Y))


def pullback(f: GMap, g: GMap) -> tuple[GSet, GMap, GMap]:
    """Fibre product {(x, y) : f(x) = g(y)} with its two projections."""
    X, Y = f.source, g.source
    G = X.group
    order = np.argsort(g.f, kind="stable")
    gs = g.f[order]
    xs, ys = [], []
    for x in range(X.size):
        lo, hi = np.searchsorted(gs, f.f[x]), np.searchsorted(gs, f.f[x], side="right")
        if hi > lo:
            ys.append(np.sort(order[lo:hi]))
            xs.append(np.full(hi - lo, x, dtype=np.int64))
    if not xs:
        P = empty_gset(G)
        return P, GMap(P, X, []), GMap(P, Y, [])
    px, py = np.concatenate(xs), np.concatenate(ys)
    codes = px * max(Y.size, 1) + py
    moved = X.action[:, px] * max(Y.size, 1) + Y.action[:, py]
    P = GSet(G, np.searchsorted(codes, moved))
    return P, GMap(P, X, px), GMap(P, Y, py)


# ---------------------------------------------------------------------------
# fixed points and change of group
# ---------------------------------------------------------------------------

class FixedPoints:
    """The N-fixed points of a G-set, as a G-subset and as a set over G/N."""

    def __init__(self, X: GSet, N: Subgroup):
        G = X.group
        Q, proj = quotient_group(G, N)
        pts = X.fixed_by(N)
        pos = np.full(X.size, -1, dtype=np.int64)
        pos[pts] = np.arange(len(pts))
        self.points = pts
        self.as_gset = GSet(G, pos[X.action[:, pts]]) if len(pts) else empty_gset(G)
        self.inclusion = GMap(self.as_gset, X, pts)
        lift = np.array([int(np.nonzero(proj == q)[0][0]) for q in range(Q.order)])
        self.quotient = Q
        self.projection = proj
        self.as_qset = GSet(Q, self.as_gset.action[lift]) if len(pts) else empty_gset(Q)


def fixed_points(X: GSet, N: Subgroup) -> FixedPoints:
    if not X.group.lattice.normal[N.id]:
        raise NotNormalError(f"subgroup {N.id} is not normal")
    return FixedPoints(X, N)


def restrict(X: GSet, H: Subgroup) -> GSet:
    """The underlying H-set, over the standalone group of H."""
    Hg, emb = X.group.subgroup_group(H)
    return GSet(Hg, X.action[emb])


def induce(S: GSet, G: FiniteGroup, H: Subgroup) -> GSet:
    """G ×_H S; point (i, s) is the class of (r_i, s) for coset rep r_i."""
    Hg, emb = G.subgroup_group(H)
    if S.group is not Hg:
        raise GSetError("argument must be a set over the standalone subgroup")
    reps, which = _coset_data(G, H.id)
    pos = {int(g): i for i, g in enumerate(emb)}
    inv = G.inverse
    n = S.size
    act = np.empty((G.order, len(reps) * n), dtype=np.int64)
    for g in range(G.order):
        for i, r in enumerate(reps):
            gr = int(G.mul[g, r])
            j = int(which[gr])
            h = pos[int(G.mul[inv[reps[j]], gr])]
            act[g, i * n:(i + 1) * n] = j * n + S.action[h]
    return GSet(G, act)


def _right_coset_reps(G: FiniteGroup, H: Subgroup) -> list[int]:
    seen, reps = set(), []
    for g in range(G.order):
        if g not in seen:
            reps.append(g)
            seen.update(int(G.mul[h, g]) for h in H.elements)
    return reps


def coinduce(S: GSet, G: FiniteGroup, H: Subgroup) -> GSet:
    """H-equivariant functions phi: G -> S with (g·phi)(x) = phi(xg).

    A function is stored by its values on minimal right coset reps t_j.
    """
    Hg, emb = G.subgroup_group(H)
    if S.group is not Hg:
        raise GSetError("argument must be a set over the standalone subgroup")
    reps = _right_coset_reps(G, H)
    m, n = len(reps), S.size
    pos = {int(g): i for i, g in enumerate(emb)}
    # t_j g = h t_k
    where = {}
    for j, t in enumerate(reps):
        for g in range(G.order):
            x = int(G.mul[t, g])
            for k, tk in enumerate(reps):
                h = int(G.mul[x, G.inverse[tk]])
                if h in pos:
                    where[j, g] = (pos[h], k)
                    break
    total = n ** m
    funcs = np.array(list(itertools.product(range(n), repeat=m)), dtype=np.int64).reshape(total, m)
    weights = n ** np.arange(m - 1, -1, -1, dtype=np.int64)
    act = np.empty((G.order, total), dtype=np.int64)
    for g in range(G.order):
        cols = []
        for j in range(m):
            h, k = where[j, g]
            cols.append(S.action[h][funcs[:, k]])
        act[g] = np.stack(cols, axis=1) @ weights if m else 0
    return GSet(G, act)


class DependentProduct:
    """Π_h A for g: A -> S and h: S -> T, with the exponential diagram maps.

    Points of Π are pairs (t, σ) with σ a section of g over h^{-1}(t).
    ``evaluation`` is f': S ×_T Π -> A and ``projection`` is g': S ×_T Π -> Π.
    """

    def __init__(self, g: GMap, h: GMap):
        A, S, T = g.source, g.target, h.target
        G = A.group
        self.sources = (g, h)
        fibers = [h.fiber(t) for t in range(T.size)]
        options = [g.fiber(s) for s in range(S.size)]
        points = []
        index = {}
        for t in range(T.size):
            for sigma in itertools.product(*(options[s] for s in fibers[t])):
                key = (t, tuple(int(a) for a in sigma))
                index[key] = len(points)
                points.append(key)
        slot = {int(s): i for t in range(T.size) for i, s in enumerate(fibers[t])}
        act = np.empty((G.order, len(points)), dtype=np.int64)
        for k in range(G.order):
            ak, sk = A.action[k], S.action[k]
            for p, (t, sigma) in enumerate(points):
                kt = int(T.action[k, t])
                new = [0] * len(sigma)
                for s, a in zip(fibers[t], sigma):
                    new[slot[int(sk[s])]] = int(ak[a])
                act[k, p] = index[kt, tuple(new)]
        self.points = points
        self.gset = GSet(G, act) if points else empty_gset(G)
        self.to_base = GMap(self.gset, T, [t for t, _ in points])
        E, proj_s, proj_pi = pullback(h, self.to_base)
        self.pullback = E
        self.projection = proj_pi
        self.evaluation = GMap(E, A, [points[int(p)][1][slot[int(s)]]
                                      for s, p in zip(proj_s.f, proj_pi.f)])
        self.to_s = proj_s


def dependent_product(g: GMap, h: GMap) -> DependentProduct:
    if g.target is not h.source and g.target.size != h.source.size:
        raise GSetError("maps are not composable")
    return DependentProduct(g, h)


# ---------------------------------------------------------------------------
# oracles
# ---------------------------------------------------------------------------

def find_isomorphism(X: GSet, Y: GSet) -> np.ndarray | None:
    """Search for an equivariant bijection X -> Y by backtracking over orbits."""
    if X.group is not Y.group or X.size != Y.size:
        return None
    G = X.group
    reps = X.orbit_reps
    targets = Y.orbits

    def extend(i, f, used):
        if i == len(reps):
            return f
        x = reps[i]
        sx = X.stabilizer(x)
        orbit_x = X.orbits[i]
        for k, orb in enumerate(targets):
            if k in used or len(orb) != len(orbit_x):
                continue
            for y in orb:
                if Y.stabilizer(int(y)) != sx:
                    continue
                g_f = f.copy()
                ok = True
                for g in range(G.order):
                    a, b = X.action[g, x], Y.action[g, y]
                    if g_f[a] >= 0 and g_f[a] != b:
                        ok = False
                        break
                    g_f[a] = b
                if ok:
                    res = extend(i + 1, g_f, used | {k})
                    if res is not None:
                        return res
        return None

    return extend(0, np.full(X.size, -1, dtype=np.int64), frozenset())


def orbit_count(X: GSet) -> int:
    return len(X.orbits)


__all__ = [
    "GSet", "GMap", "GSetError", "GroupError", "FixedPoints", "DependentProduct",
    "empty_gset", "point", "identity_map", "terminal_map", "make_orbit", "orbit_map",
    "hom_orbits", "disjoint_union", "product", "pullback", "fixed_points", "restrict",
    "induce", "coinduce", "dependent_product", "find_isomorphism", "coset_reps", "orbit_count",
]
