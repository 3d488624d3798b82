import functools

import pytest

from cigraph.graph import graph_of_order


@functools.lru_cache(maxsize=None)
def cached_graph(q):
    return graph_of_order(q)


@pytest.fixture
def graph():
    return cached_graph
