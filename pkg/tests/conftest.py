import random

import pytest
from hypothesis import HealthCheck, settings

from graphvis.graph import Graph

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def build(n_nodes: int, edges: list[tuple[int, int]], directed=False) -> Graph:
    g = Graph(directed)
    ids = [g.add_node() for _ in range(n_nodes)]
    for u, v in edges:
        g.add_edge(ids[u], ids[v])
    return g


def path_graph(n: int) -> Graph:
    return build(n, [(i, i + 1) for i in range(n - 1)])


def clique(n: int) -> Graph:
    return build(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def star(leaves: int) -> Graph:
    """Hub is node 0."""
    return build(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def cycle(n: int) -> Graph:
    return build(n, [(i, (i + 1) % n) for i in range(n)])


@pytest.fixture
def p3() -> Graph:
    """Path a-b-c: ids 0-1-2."""
    return path_graph(3)


@pytest.fixture
def k3() -> Graph:
    return clique(3)


@pytest.fixture
def k4() -> Graph:
    return clique(4)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xC0FFEE)
