import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cigraph.autgrp.perm import OrbitPartition, PermutationGroup, group_order, inverse, mul
from cigraph.autgrp.refine import OrderedPartition, is_equitable, refine
from cigraph.autgrp.search import (SearchTimeout, automorphism_group, automorphism_order,
                                   induced_permutations, is_automorphism)
from cigraph.autgrp.theorem import transitivity_identity, verify_theorem1, wreath_order
from cigraph.graph import Graph
from cigraph.psl2 import pgammal_generators


def complete(n):
    return Graph(~np.eye(n, dtype=bool))


def cycle(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def petersen():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def cube():
    return Graph.from_edges(8, [(u, u ^ (1 << k)) for u in range(8) for k in range(3) if u < u ^ (1 << k)])


# --- permutation groups ---

def test_symmetric_group_orders():
    s3 = [np.array([1, 0, 2]), np.array([1, 2, 0])]
    assert group_order(s3) == 6
    n = 7
    sn = [np.roll(np.arange(n), 1), np.array([1, 0] + list(range(2, n)))]
    assert group_order(sn) == math.factorial(n)
    assert group_order([]) == 1


def test_contains_and_stabilisers():
    gens = [np.roll(np.arange(6), 1), np.array([0, 5, 4, 3, 2, 1])]  # dihedral of order 12
    G = PermutationGroup(6, gens, base=[0])
    assert G.order == 12
    assert G.contains(np.array([3, 2, 1, 0, 5, 4]))
    assert not G.contains(np.array([1, 0, 2, 3, 4, 5]))
    assert G.stabilizer_order(1) == 2
    assert G.orbit(0) == set(range(6))
    with pytest.raises(ValueError):
        G.stabilizer_generators([3])


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 8), st.randoms(use_true_random=False))
def test_random_subgroups_of_sn_divide(n, rnd):
    gens = []
    for _ in range(2):
        p = list(range(n))
        rnd.shuffle(p)
        gens.append(np.array(p))
    order = group_order(gens, n)
    assert math.factorial(n) % order == 0
    # closure check by brute force for small n
    if n <= 6:
        elems = {tuple(range(n))}
        frontier = list(elems)
        while frontier:
            nxt = []
            for e in frontier:
                for g in gens:
                    h = tuple(np.array(e)[g])
                    if h not in elems:
                        elems.add(h)
                        nxt.append(h)
            frontier = nxt
        assert len(elems) == order


def test_perm_helpers():
    a = np.array([1, 2, 0])
    assert np.array_equal(mul(a, inverse(a)), np.arange(3))
    op = OrbitPartition(5)
    op.absorb(np.array([1, 0, 2, 4, 3]))
    assert op.same(0, 1) and not op.same(1, 2) and op.size(3) == 2


# --- refinement ---

@pytest.mark.parametrize("q", [5, 7, 9, 13])
def test_refinement_idempotent_and_equitable(q, graph):
    g = graph(q)
    pi = refine(g)
    assert is_equitable(g, pi)
    assert refine(g, pi) == pi
    v = 3
    rest = tuple(x for x in range(g.n) if x != v)
    ind = refine(g, OrderedPartition.from_cells([(v,), rest]))
    assert is_equitable(g, ind)
    assert refine(g, ind) == ind
    assert ind.cells[0] == (v,)


def test_refinement_rejects_partial_partition(graph):
    with pytest.raises(ValueError):
        refine(graph(7), OrderedPartition.from_cells([(0, 1)]))


def test_refinement_label_invariance(graph):
    g = graph(9)
    perm = np.random.default_rng(3).permutation(g.n)
    h = g.relabel(perm)
    v = 5
    a = refine(g, OrderedPartition.from_cells([(v,), [x for x in range(g.n) if x != v]]))
    b = refine(h, OrderedPartition.from_cells([(int(perm[v]),), [x for x in range(g.n) if x != perm[v]]]))
    assert [{int(perm[x]) for x in c} for c in a.cells] == [set(c) for c in b.cells]


# --- search ---

@pytest.mark.parametrize("g,order", [
    (complete(4), 24), (complete(6), 720), (cycle(5), 10), (cycle(8), 16),
    (petersen(), 120), (cube(), 48), (Graph(np.zeros((4, 4), dtype=bool)), 24),
])
def test_known_automorphism_groups(g, order):
    res = automorphism_group(g)
    assert res.order == order
    assert all(is_automorphism(g.adj, h) for h in res.generators)


def test_k4_witness():
    res = automorphism_group(complete(4))
    assert res.group.order == 24
    assert len(res.base) == 3


@pytest.mark.parametrize("q", [7, 9, 11])
def test_relabelling_invariance(q, graph):
    g = graph(q)
    base = automorphism_order(g)
    for s in range(3):
        perm = np.random.default_rng(s).permutation(g.n)
        assert automorphism_order(g.relabel(perm)) == base


@pytest.mark.parametrize("q", [7, 9, 11, 13])
def test_seeded_and_unseeded_agree(q, graph):
    g = graph(q)
    seed = PermutationGroup(g.n, induced_permutations(g, pgammal_generators(g.spec)))
    assert automorphism_order(g) == automorphism_order(g, seed=seed)


def test_bad_seed_rejected(graph):
    g = graph(7)
    bogus = np.arange(g.n)
    bogus[[0, 1]] = [1, 0]
    assert not is_automorphism(g.adj, bogus)
    with pytest.raises(ValueError):
        automorphism_group(g, seed=PermutationGroup(g.n, [bogus]))


def test_aut_q7_against_networkx(graph):
    nx = pytest.importorskip("networkx")
    g = graph(7)
    G = nx.Graph(list(g.edges()))
    count = sum(1 for _ in nx.algorithms.isomorphism.GraphMatcher(G, G).isomorphisms_iter())
    assert count == automorphism_order(g) == 336


def test_timeout_is_distinct(graph):
    with pytest.raises(SearchTimeout):
        automorphism_group(graph(5), timeout=0.0)
    r = verify_theorem1(graph(7), timeout=0.0)
    assert r.status == "error"


@pytest.mark.parametrize("q", [7, 9, 11, 13, 17])
def test_transitivity_identity(q, graph):
    g = graph(q)
    res = automorphism_group(g)
    for v in (0, g.n // 2):
        order, orbit, stab = transitivity_identity(res.group, v)
        assert order == orbit * stab == res.order
        assert orbit == g.n


def test_wreath_order():
    assert wreath_order(3, 5) == 933120
    assert wreath_order(1, 4) == 24
