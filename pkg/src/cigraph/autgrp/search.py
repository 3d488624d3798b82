"""Automorphism group by individualisation-refinement with orbit pruning.

The first path down the search tree fixes a base b_0, b_1, ... and a leaf.
Levels are then processed bottom-up: at level i every vertex w of the target
cell that is not already in the orbit of b_i (under the automorphisms found
so far, all of which fix b_0 .. b_{i-1}) is tried by searching the subtree
below w for a leaf that induces an automorphism.  Each tried w is either
joined to the orbit or proven inequivalent, so the orbit sizes multiply to
the exact group order.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .perm import OrbitPartition, PermutationGroup, as_perm, identity
from .refine import OrderedPartition, Partition, refine_partition


class SearchTimeout(RuntimeError):
    pass


@dataclass
class _Node:
    part: Partition
    trace: list
    target: int | None  # start of the target cell, None at a leaf
    cell: list = field(default_factory=list)


@dataclass
class AutomorphismResult:
    group: PermutationGroup
    generators: list
    base: list
    orbit_sizes: list
    nodes: int
    seconds: float

    @property
    def order(self):
        r = 1
        for s in self.orbit_sizes:
            r *= s
        return r


def is_automorphism(adj, perm):
    perm = np.asarray(perm)
    return bool(np.array_equal(adj[np.ix_(perm, perm)], adj))


class _Search:
    def __init__(self, g, timeout):
        self.g = g
        self.neighbors = g.neighbors
        self.adj = g.adj
        self.deadline = None if timeout is None else time.monotonic() + timeout
        self.nodes = 0

    def _tick(self):
        self.nodes += 1
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise SearchTimeout(f"automorphism search exceeded its time limit after {self.nodes} nodes")

    def child(self, part, v):
        self._tick()
        new = part.copy()
        s = new.individualize(v)
        trace = [("ind", s)]
        refine_partition(self.neighbors, new, [s], trace)
        target = new.target_cell()
        cell = new.cell(target) if target is not None else []
        return _Node(new, trace, target, cell)

    def leaf_perm(self, leaf0, leaf):
        gamma = np.empty(self.g.n, dtype=np.int64)
        gamma[np.asarray(leaf0.part.elems)] = np.asarray(leaf.part.elems)
        return gamma

    def find_automorphism(self, path, level, node):
        """Search below ``node`` (a sibling of path[level + 1]) for a leaf automorphic to the first leaf."""
        ref = path[level + 1]
        if node.trace != ref.trace or node.target != ref.target or len(node.cell) != len(ref.cell):
            return None
        if node.target is None:
            gamma = self.leaf_perm(path[-1], node)
            return gamma if is_automorphism(self.adj, gamma) else None
        for v in node.cell:
            found = self.find_automorphism(path, level + 1, self.child(node.part, v))
            if found is not None:
                return found
        return None


def automorphism_group(g, seed=None, timeout=600.0) -> AutomorphismResult:
    """Full automorphism group of ``g`` with exact order.

    ``seed`` is an optional :class:`PermutationGroup` of known automorphisms
    used only to prune orbits; each of its generators is checked first.
    """
    t0 = time.monotonic()
    n = g.n
    if n == 0:
        raise ValueError("empty graph")
    s = _Search(g, timeout)

    root_part = Partition.from_ordered(OrderedPartition.unit(n))
    trace = []
    refine_partition(g.neighbors, root_part, None, trace)
    target = root_part.target_cell()
    path = [_Node(root_part, trace, target, root_part.cell(target) if target is not None else [])]
    while path[-1].target is not None:
        node = path[-1]
        path.append(s.child(node.part, node.cell[0]))
    base = [node.cell[0] for node in path[:-1]]

    seed_chain = None
    if seed is not None:
        for h in seed.generators:
            if not is_automorphism(g.adj, h):
                raise ValueError("seed generator is not an automorphism")
        seed_chain = PermutationGroup(n, seed.generators, base=base)

    gens = []
    seeded = set()
    orbit_sizes = [1] * len(base)
    for level in range(len(base) - 1, -1, -1):
        node = path[level]
        b = base[level]
        orbits = OrbitPartition(n)
        for h in gens:
            orbits.absorb(h)
        if seed_chain is not None:
            for h in seed_chain.stabilizer_generators(base[:level]):
                orbits.absorb(h)
                if id(h) not in seeded:
                    seeded.add(id(h))
                    gens.append(h)
        for w in node.cell:
            if orbits.same(w, b):
                continue
            found = s.find_automorphism(path, level, s.child(node.part, w))
            if found is not None:
                gens.append(found)
                orbits.absorb(found)
        orbit_sizes[level] = sum(1 for w in node.cell if orbits.same(w, b))

    gens = [h for h in gens if not np.array_equal(h, identity(n))]
    group = PermutationGroup(n, gens, base=base)
    result = AutomorphismResult(group, gens, base, orbit_sizes, s.nodes, time.monotonic() - t0)
    if result.order != group.order:
        raise AssertionError(
            f"search orbit product {result.order} disagrees with Schreier-Sims order {group.order}")
    return result


def automorphism_order(g, **kwargs):
    return automorphism_group(g, **kwargs).order


def induced_permutations(g, actions):
    """Vertex permutations of an InvolutionGraph induced by PGammaL actions."""
    from ..psl2 import action_permutation

    return [as_perm(action_permutation(g.spec, a, g.vertices, g.index), g.n) for a in actions]
