"""The commuting involution graph C(L, X) and basic distance structure."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import psl2
from .field import FieldSpec, field_of_order

INF = -1  # distance sentinel for unreachable vertices


class GraphError(ValueError):
    pass


class Graph:
    """Simple undirected graph with a dense boolean matrix and bitset rows."""

    def __init__(self, adjacency):
        adj = np.asarray(adjacency, dtype=bool)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise GraphError("adjacency must be square")
        if not np.array_equal(adj, adj.T):
            raise GraphError("adjacency is not symmetric")
        if adj.diagonal().any():
            raise GraphError("adjacency has loops")
        self.adj = adj
        self.n = adj.shape[0]
        self.neighbors = [np.flatnonzero(row).tolist() for row in adj]
        self.rows = [_bits(nb) for nb in self.neighbors]

    @classmethod
    def from_edges(cls, n, edges):
        adj = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            adj[u, v] = adj[v, u] = True
        return cls(adj)

    def degree(self, v):
        return len(self.neighbors[v])

    def edges(self):
        for u in range(self.n):
            for v in self.neighbors[u]:
                if u < v:
                    yield u, v

    @property
    def edge_count(self):
        return int(self.adj.sum()) // 2

    def relabel(self, perm):
        """The graph with vertex v renamed perm[v]."""
        perm = np.asarray(perm)
        inv = np.empty_like(perm)
        inv[perm] = np.arange(len(perm))
        return Graph(self.adj[np.ix_(inv, inv)])


def _bits(vertices):
    r = 0
    for v in vertices:
        r |= 1 << v
    return r


def _members(bits):
    out = []
    while bits:
        low = bits & -bits
        out.append(low.bit_length() - 1)
        bits ^= low
    return out


class InvolutionGraph(Graph):
    """C(L, X) for L = PSL(2, q): vertices are canonical involution matrices."""

    def __init__(self, spec: FieldSpec, vertices, adjacency, check=True):
        super().__init__(adjacency)
        self.spec = spec
        self.vertices = list(vertices)
        self.index = {x: i for i, x in enumerate(self.vertices)}
        if check:
            self._check_regular()

    @property
    def q(self):
        return self.spec.q

    def vertex(self, i):
        return psl2.Involution(self.vertices[i], i)

    def id_of(self, x):
        return self.index[psl2.canonicalize(self.spec, x)]

    def _check_regular(self):
        q = self.q
        if q % 2:
            expected = (q - 1) // 2 if q % 4 == 1 else (q + 1) // 2
        else:
            expected = q - 2
        degrees = self.adj.sum(axis=1)
        if not (degrees == expected).all():
            bad = int(np.flatnonzero(degrees != expected)[0])
            raise GraphError(f"vertex {bad} has degree {degrees[bad]}, expected {expected}")


def trace_matrix(F, left, right):
    """tr(xy) for every x in ``left`` and y in ``right`` (arrays of shape (k, 3) holding a, b, c)."""
    left, right = np.asarray(left, dtype=np.int64), np.asarray(right, dtype=np.int64)
    a, b, c = left[:, 0, None], left[:, 1, None], left[:, 2, None]
    e, f, g = right[None, :, 0], right[None, :, 1], right[None, :, 2]
    if F.f == 1:
        return (2 * a * e + b * g + c * f) % F.p
    two = F.from_int(2)
    ae2 = F.vmul(F.vmul(two, a), e)
    return F.vadd(F.vadd(ae2, F.vmul(b, g)), F.vmul(c, f))


def vertex_array(vertices):
    return np.array([(x.a, x.b, x.c) for x in vertices], dtype=np.int64).reshape(-1, 3)


def build_graph(spec: FieldSpec):
    """Build C(PSL(2, q), X) with vertices in canonical encoding order.

    Distinct x, y are adjacent iff xy + yx = 0, which for trace-zero 2x2
    matrices means tr(xy) = 2ae + bg + cf = 0 (in every characteristic).
    """
    if spec.q <= 3:
        raise GraphError(f"q must exceed 3, got {spec.q}")
    vertices = psl2.enumerate_involutions(spec)
    arr = vertex_array(vertices)
    adj = trace_matrix(spec, arr, arr) == 0
    np.fill_diagonal(adj, False)
    return InvolutionGraph(spec, vertices, adj)


def graph_of_order(q):
    return build_graph(field_of_order(q))


@dataclass
class DiscDecomposition:
    center: int
    discs: list  # list of sets; discs[i] = Delta_i(center)
    unreachable: set

    @property
    def eccentricity(self):
        return len(self.discs) - 1

    def distance(self, v):
        for i, d in enumerate(self.discs):
            if v in d:
                return i
        return INF


def bfs_discs(g: Graph, center: int):
    if not 0 <= center < g.n:
        raise GraphError(f"vertex {center} out of range")
    rows = g.rows
    seen = 1 << center
    frontier = [center]
    discs = [{center}]
    while True:
        nxt = 0
        for v in frontier:
            nxt |= rows[v]
        nxt &= ~seen
        if not nxt:
            break
        seen |= nxt
        frontier = _members(nxt)
        discs.append(set(frontier))
    unreachable = set(range(g.n)) - set().union(*discs)
    return DiscDecomposition(center, discs, unreachable)


def distance_matrix(g: Graph):
    """All-pairs BFS distances (INF where unreachable)."""
    n = g.n
    a = g.adj.astype(np.int32)
    dist = np.full((n, n), INF, dtype=np.int32)
    np.fill_diagonal(dist, 0)
    reach = np.eye(n, dtype=bool)
    frontier = reach.copy()
    k = 0
    while frontier.any():
        k += 1
        nxt = (frontier.astype(np.int32) @ a > 0) & ~reach
        dist[nxt] = k
        reach |= nxt
        frontier = nxt
    return dist


def diameter(g: Graph):
    d = distance_matrix(g)
    return math.inf if (d == INF).any() else int(d.max())


def common_neighbors(g: Graph, x: int, y: int):
    if x == y:
        raise GraphError("common neighbours of a vertex with itself")
    return set(_members(g.rows[x] & g.rows[y]))


def check_four_cycle_free(g: Graph):
    """(True, None) if no two distinct vertices share two neighbours, else (False, 4-cycle)."""
    rows = g.rows
    for x in range(g.n):
        rx = rows[x]
        for y in range(x + 1, g.n):
            common = rx & rows[y]
            if common & (common - 1):
                u, w = _members(common)[:2]
                return False, [x, u, y, w]
    return True, None


def max_common_neighbors(g: Graph):
    rows = g.rows
    best = 0
    for x in range(g.n):
        rx = rows[x]
        for y in range(x + 1, g.n):
            best = max(best, (rx & rows[y]).bit_count())
    return best


def components(g: Graph):
    seen = [False] * g.n
    out = []
    for v in range(g.n):
        if not seen[v]:
            dec = bfs_discs(g, v)
            comp = set().union(*dec.discs)
            for u in comp:
                seen[u] = True
            out.append(comp)
    return out


def is_complete(g: Graph, vertices):
    vs = sorted(vertices)
    sub = g.adj[np.ix_(vs, vs)]
    return bool(sub.sum() == len(vs) * (len(vs) - 1))


def to_dimacs(g: Graph):
    lines = [f"p edge {g.n} {g.edge_count}"]
    lines.extend(f"e {u + 1} {v + 1}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def from_dimacs(text):
    n = None
    edges = []
    for line in text.splitlines():
        parts = line.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "p":
            n = int(parts[2])
        elif parts[0] == "e":
            edges.append((int(parts[1]) - 1, int(parts[2]) - 1))
    if n is None:
        raise GraphError("missing DIMACS header")
    return Graph.from_edges(n, edges)
