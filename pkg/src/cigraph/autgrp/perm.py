"""Permutation groups via a base and strong generating set.

Permutations are numpy integer arrays with ``p[x]`` the image of ``x``.
Products read left to right: ``mul(a, b)`` applies ``a`` first, then ``b``.
"""

from __future__ import annotations

import random

import numpy as np


def as_perm(p, n=None):
    arr = np.asarray(p, dtype=np.int64)
    if arr.ndim != 1 or (n is not None and len(arr) != n):
        raise ValueError("permutation has the wrong shape")
    if not np.array_equal(np.sort(arr), np.arange(len(arr))):
        raise ValueError("not a permutation")
    return arr


def identity(n):
    return np.arange(n, dtype=np.int64)


def mul(a, b):
    return b[a]


def inverse(a):
    inv = np.empty_like(a)
    inv[a] = np.arange(len(a))
    return inv


def is_identity(a):
    return bool((a == np.arange(len(a))).all())


class _Level:
    """One stabiliser level: base point, generators and a transversal."""

    __slots__ = ("point", "gens", "trans", "trans_inv")

    def __init__(self, point):
        self.point = point
        self.gens = []
        self.trans = {}
        self.trans_inv = {}

    def rebuild_orbit(self, n):
        b = self.point
        e = identity(n)
        self.trans = {b: e}
        self.trans_inv = {b: e}
        queue = [b]
        for x in queue:
            ux = self.trans[x]
            for s in self.gens:
                y = int(s[x])
                if y not in self.trans:
                    u = mul(ux, s)
                    self.trans[y] = u
                    self.trans_inv[y] = inverse(u)
                    queue.append(y)

    @property
    def orbit(self):
        return self.trans.keys()


class PermutationGroup:
    """A permutation group of degree ``n`` with an exact order.

    The stabiliser chain is built by random Schreier-Sims and then checked by
    a deterministic pass over all Schreier generators, so :attr:`order` is
    exact regardless of the random phase.  ``base`` optionally prescribes the
    leading base points.
    """

    def __init__(self, degree, generators=(), base=(), seed=0):
        self.degree = n = int(degree)
        gens = [as_perm(g, n) for g in generators]
        self.generators = [g for g in gens if not is_identity(g)]
        self._levels = [_Level(int(b)) for b in base]
        self._rng = random.Random(seed)
        self._build()

    # -- chain construction --

    def _sift(self, g, start=0):
        """Return (residue, level index where sifting stopped)."""
        for i in range(start, len(self._levels)):
            lev = self._levels[i]
            b = int(g[lev.point])
            if b not in lev.trans:
                return g, i
            g = mul(g, lev.trans_inv[b])
        return g, len(self._levels)

    def _moved_point(self, g):
        moved = np.flatnonzero(g != np.arange(self.degree))
        return int(moved[0])

    def _add_strong(self, h, level):
        """Insert ``h`` (fixing base points before ``level``) into levels up to its sift depth."""
        if level == len(self._levels):
            self._levels.append(_Level(self._moved_point(h)))
        # h fixes the base points of levels < level, so it lies in each of their stabilisers
        for lev in self._levels[: level + 1]:
            lev.gens.append(h)
            lev.rebuild_orbit(self.degree)

    def _build(self):
        n = self.degree
        if not self.generators:
            for lev in self._levels:
                lev.rebuild_orbit(n)
            return
        for g in self.generators:
            h, j = self._sift(g)
            if not is_identity(h):
                self._add_strong(h, j)
        for lev in self._levels:
            lev.rebuild_orbit(n)
        self._random_phase()
        self._verify()

    def _random_element(self, pool):
        i, j = self._rng.randrange(len(pool)), self._rng.randrange(len(pool))
        if i == j:
            j = (j + 1) % len(pool)
        pool[i] = mul(pool[i], pool[j])
        return pool[i]

    def _random_phase(self, quiet=30):
        pool = [g.copy() for g in self.generators]
        while len(pool) < 10:
            pool.append(pool[len(pool) % len(self.generators)].copy())
        for _ in range(20):
            self._random_element(pool)
        streak = 0
        while streak < quiet:
            h, j = self._sift(self._random_element(pool).copy())
            if is_identity(h):
                streak += 1
            else:
                streak = 0
                self._add_strong(h, j)

    def _verify(self):
        """Deterministic Schreier-Sims pass: every Schreier generator must sift to 1."""
        i = len(self._levels) - 1
        while i >= 0:
            lev = self._levels[i]
            added = False
            for beta in list(lev.orbit):
                u = lev.trans[beta]
                for s in lev.gens:
                    img = int(s[beta])
                    g = mul(mul(u, s), lev.trans_inv[img])
                    if is_identity(g):
                        continue
                    h, j = self._sift(g, i + 1)
                    if not is_identity(h):
                        self._add_strong(h, j)
                        i = j
                        added = True
                        break
                if added:
                    break
            if not added:
                i -= 1
            elif i >= len(self._levels):
                i = len(self._levels) - 1

    # -- queries --

    @property
    def base(self):
        return [lev.point for lev in self._levels]

    @property
    def strong_generators(self):
        return [list(lev.gens) for lev in self._levels]

    def basic_orbit(self, i):
        return set(self._levels[i].orbit)

    @property
    def order(self):
        r = 1
        for lev in self._levels:
            r *= len(lev.trans)
        return r

    def contains(self, g):
        h, _ = self._sift(as_perm(g, self.degree))
        return is_identity(h)

    def stabilizer_generators(self, points):
        """Generators of the pointwise stabiliser of a prefix of the base."""
        points = [int(x) for x in points]
        if self.base[: len(points)] != points:
            raise ValueError("points must be a prefix of the base")
        k = len(points)
        return list(self._levels[k].gens) if k < len(self._levels) else []

    def stabilizer_order(self, k):
        r = 1
        for lev in self._levels[k:]:
            r *= len(lev.trans)
        return r

    def orbit(self, x):
        seen = {int(x)}
        queue = [int(x)]
        for y in queue:
            for g in self.generators:
                z = int(g[y])
                if z not in seen:
                    seen.add(z)
                    queue.append(z)
        return seen


def group_order(generators, degree=None):
    """Exact order of the group generated by ``generators``."""
    generators = list(generators)
    if not generators:
        return 1
    n = degree if degree is not None else len(generators[0])
    return PermutationGroup(n, generators).order


class OrbitPartition:
    """Union-find over points, tracking orbits of a growing set of permutations."""

    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def absorb(self, g):
        for x, y in enumerate(g.tolist()):
            rx, ry = self.find(x), self.find(y)
            if rx != ry:
                if rx < ry:
                    self.parent[ry] = rx
                else:
                    self.parent[rx] = ry

    def same(self, x, y):
        return self.find(x) == self.find(y)

    def size(self, x):
        r = self.find(x)
        return sum(1 for y in range(len(self.parent)) if self.find(y) == r)
