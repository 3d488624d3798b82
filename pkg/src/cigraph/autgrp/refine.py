"""Equitable partition refinement (1-dimensional Weisfeiler-Leman with splitter queue).

Every step depends on vertex labels only through the partition itself, so
``refine(g^perm, pi^perm) == refine(g, pi)^perm``.  That label invariance is
what the individualisation-refinement search relies on.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass


@dataclass(frozen=True)
class OrderedPartition:
    cells: tuple  # tuple of tuples of vertex ids

    @classmethod
    def unit(cls, n):
        return cls((tuple(range(n)),) if n else ())

    @classmethod
    def from_cells(cls, cells):
        cells = tuple(tuple(c) for c in cells if len(c))
        seen = [v for c in cells for v in c]
        if len(seen) != len(set(seen)):
            raise ValueError("cells overlap")
        return cls(cells)

    @property
    def discrete(self):
        return all(len(c) == 1 for c in self.cells)

    def __len__(self):
        return len(self.cells)

    def cell_of(self):
        out = {}
        for i, c in enumerate(self.cells):
            for v in c:
                out[v] = i
        return out


class Partition:
    """Mutable ordered partition: ``elems`` in cell order, cells keyed by start index."""

    __slots__ = ("elems", "pos", "start_of", "end", "ncells")

    def __init__(self, elems, starts):
        self.elems = list(elems)
        n = len(self.elems)
        self.pos = [0] * n
        for i, v in enumerate(self.elems):
            self.pos[v] = i
        self.start_of = [0] * n
        self.end = {}
        bounds = list(starts) + [n]
        for s, e in zip(bounds, bounds[1:]):
            self.end[s] = e
            for i in range(s, e):
                self.start_of[self.elems[i]] = s
        self.ncells = len(starts)

    @classmethod
    def from_ordered(cls, op: OrderedPartition):
        elems, starts = [], []
        for c in op.cells:
            starts.append(len(elems))
            elems.extend(c)
        return cls(elems, starts)

    def copy(self):
        new = Partition.__new__(Partition)
        new.elems = self.elems[:]
        new.pos = self.pos[:]
        new.start_of = self.start_of[:]
        new.end = dict(self.end)
        new.ncells = self.ncells
        return new

    @property
    def discrete(self):
        return self.ncells == len(self.elems)

    def starts(self):
        return sorted(self.end)

    def cell(self, s):
        return self.elems[s:self.end[s]]

    def to_ordered(self):
        return OrderedPartition(tuple(tuple(self.cell(s)) for s in self.starts()))

    def target_cell(self):
        """First smallest non-singleton cell (start index), or None if discrete."""
        best = None
        for s in self.starts():
            size = self.end[s] - s
            if size > 1 and (best is None or size < best[0]):
                best = (size, s)
        return None if best is None else best[1]

    def individualize(self, v):
        """Split ``{v}`` off the front of its cell; return the new singleton's start."""
        s = self.start_of[v]
        e = self.end[s]
        if e - s == 1:
            return s
        i = self.pos[v]
        w = self.elems[s]
        self.elems[s], self.elems[i] = v, w
        self.pos[v], self.pos[w] = s, i
        self.end[s] = s + 1
        self.end[s + 1] = e
        for j in range(s + 1, e):
            self.start_of[self.elems[j]] = s + 1
        self.ncells += 1
        return s


def refine_partition(neighbors, part: Partition, splitters=None, trace=None):
    """Refine ``part`` in place to the coarsest equitable partition below it.

    ``splitters`` is an iterable of cell starts to seed the queue (all cells
    if None).  When ``trace`` is a list, a label-invariant record of every
    split is appended to it.
    """
    queue = deque(part.starts() if splitters is None else splitters)
    queued = set(queue)
    elems, start_of, end = part.elems, part.start_of, part.end
    while queue and not part.discrete:
        w = queue.popleft()
        queued.discard(w)
        counts = {}
        for u in elems[w:end[w]]:
            for x in neighbors[u]:
                counts[x] = counts.get(x, 0) + 1
        touched = sorted({start_of[x] for x in counts})
        for s in touched:
            e = end[s]
            if e - s == 1:
                continue
            cell = elems[s:e]
            keys = [counts.get(x, 0) for x in cell]
            if min(keys) == max(keys):
                continue
            order = sorted(range(len(cell)), key=keys.__getitem__)
            new_cell = [cell[i] for i in order]
            new_keys = [keys[i] for i in order]
            frags = []
            fs = 0
            for i in range(1, len(new_cell) + 1):
                if i == len(new_cell) or new_keys[i] != new_keys[fs]:
                    frags.append((s + fs, s + i, new_keys[fs]))
                    fs = i
            for i, v in enumerate(new_cell):
                elems[s + i] = v
                part.pos[v] = s + i
            for fs_, fe, _ in frags:
                end[fs_] = fe
                for i in range(fs_, fe):
                    start_of[elems[i]] = fs_
            part.ncells += len(frags) - 1
            if trace is not None:
                trace.append((w, s, tuple((fe - fs_, k) for fs_, fe, k in frags)))
            if s in queued:
                for fs_, _, _ in frags[1:]:
                    queue.append(fs_)
                    queued.add(fs_)
            else:
                largest = max(frags, key=lambda fr: (fr[1] - fr[0], -fr[0]))
                for fr in frags:
                    if fr is not largest:
                        queue.append(fr[0])
                        queued.add(fr[0])
    if trace is not None:
        trace.append(("cells", part.ncells))
    return part


def refine(g, pi: OrderedPartition | None = None) -> OrderedPartition:
    """Coarsest equitable refinement of ``pi`` (unit partition by default)."""
    pi = OrderedPartition.unit(g.n) if pi is None else pi
    if sum(len(c) for c in pi.cells) != g.n:
        raise ValueError("partition does not cover the vertex set")
    part = Partition.from_ordered(pi)
    refine_partition(g.neighbors, part)
    return part.to_ordered()


def is_equitable(g, pi: OrderedPartition):
    cell_of = pi.cell_of()
    for c in pi.cells:
        profiles = set()
        for v in c:
            counts = [0] * len(pi.cells)
            for u in g.neighbors[v]:
                counts[cell_of[u]] += 1
            profiles.add(tuple(counts))
        if len(profiles) > 1:
            return False
    return True
