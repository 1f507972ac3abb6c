import random

import pytest

from graphvis import analytics
from graphvis.cache import (
    COMPONENT_COUNT,
    DIAMETER,
    GLOBAL_CLUSTERING,
    INCREMENTAL,
    LAZY,
    MAX_KCORE,
    MAX_TRIANGLE_CORE,
    MEAN_DISTANCE,
    TOTAL_TRIANGLES,
    WEDGES,
    StatsCache,
    apply_mutation,
    strategy,
)
from graphvis.errors import (
    DuplicateEdgeError,
    InvalidMutationError,
    UnknownMeasureError,
    UnknownNodeError,
)
from graphvis.graph import Graph, Mutation

import oracles
from conftest import build, clique, path_graph


def fresh_equals_recompute(g: Graph, cache: StatsCache):
    """The core cache contract: every fresh entry matches a from-scratch run."""
    node_tri, edge_tri, total = analytics.triangle_counts(g)
    wedges = analytics.wedge_count(g)
    expect = {
        "degree": {nid: len(nbrs) for nid, nbrs in g.adj.items()},
        "triangles": node_tri.values,
        "edge-triangles": edge_tri.values,
        "local-clustering": analytics.clustering(g)[0].values,
        "total-triangles": total,
        "wedges": wedges,
        "global-clustering": analytics.global_clustering_value(total, wedges),
    }
    for mid, want in expect.items():
        entry = cache.entries[mid]
        assert entry.fresh, mid
        assert entry.values == want, mid
    for mid, entry in cache.entries.items():
        if mid in LAZY and entry.fresh:
            if mid == "kcore":
                assert entry.values == analytics.kcore(g)[0].values
            elif mid == MAX_KCORE:
                assert entry.values == analytics.kcore(g)[1]
            elif mid == "betweenness" and entry.exact:
                want = analytics.betweenness(g).values
                assert all(entry.values[v] == pytest.approx(want[v])
                           for v in g.nodes)
            elif mid == "pagerank":
                want = analytics.pagerank(g).values
                assert all(entry.values[v] == pytest.approx(want[v])
                           for v in g.nodes)
            elif mid == "triangle-core":
                assert entry.values == analytics.triangle_core(g)[0].values
            elif mid == MAX_TRIANGLE_CORE:
                assert entry.values == analytics.triangle_core(g)[1]
            elif mid in ("eccentricity", DIAMETER, MEAN_DISTANCE,
                         COMPONENT_COUNT) and entry.exact:
                st = analytics.distances(g)
                want = {"eccentricity": st.eccentricity.values,
                        DIAMETER: st.diameter,
                        MEAN_DISTANCE: st.mean_distance,
                        COMPONENT_COUNT: st.component_count}[mid]
                assert entry.values == want


def test_strategies_are_split_as_documented():
    assert strategy("degree") == "incremental"
    assert strategy("triangles") == "incremental"
    assert strategy("global-clustering") == "incremental"
    assert strategy("kcore") == "lazy"
    assert strategy("betweenness") == "lazy"
    assert strategy("triangle-core") == "lazy"
    with pytest.raises(UnknownMeasureError):
        strategy("eigenvector")


def test_cache_seeds_incremental_entries(k4):
    cache = StatsCache(k4)
    for mid in INCREMENTAL:
        assert mid in cache.entries and cache.entries[mid].fresh
    assert cache.entries[TOTAL_TRIANGLES].values == 4
    fresh_equals_recompute(k4, cache)


def test_insert_edge_closes_triangle(p3):
    cache = StatsCache(p3)
    assert cache.entries[TOTAL_TRIANGLES].values == 0
    apply_mutation(p3, cache, Mutation("insert-edge", {"u": 0, "v": 2}))
    assert cache.entries[TOTAL_TRIANGLES].values == 1
    assert cache.entries[GLOBAL_CLUSTERING].values == 1.0
    assert cache.entries["triangles"].values == {0: 1, 1: 1, 2: 1}
    fresh_equals_recompute(p3, cache)


def test_label_update_keeps_everything_fresh(k3):
    cache = StatsCache(k3)
    cache.get(k3, "kcore")
    cache.get(k3, "pagerank")
    assert cache.entries["kcore"].fresh
    apply_mutation(k3, cache, Mutation(
        "update-attrs", {"target": "node", "id": 0, "label": "renamed"}))
    assert cache.entries["kcore"].fresh
    assert cache.entries["pagerank"].fresh
    assert k3.nodes[0].label == "renamed"


def test_topology_change_invalidates_lazy_only(k4):
    cache = StatsCache(k4)
    cache.get(k4, "kcore")
    cache.get(k4, "betweenness")
    apply_mutation(k4, cache, Mutation("delete-edge", {"id": 0}))
    assert not cache.entries["kcore"].fresh
    assert not cache.entries["betweenness"].fresh
    for mid in INCREMENTAL:
        assert cache.entries[mid].fresh
    fresh_equals_recompute(k4, cache)
    # on-demand read recomputes and refreshes
    entry = cache.get(k4, "kcore")
    assert entry.fresh
    assert entry.values == analytics.kcore(k4)[0].values


def test_failed_mutation_leaves_graph_and_cache_alone(k3):
    cache = StatsCache(k3)
    before_version = k3.version
    snapshot = {mid: (dict(e.values) if isinstance(e.values, dict) else e.values)
                for mid, e in cache.entries.items()}
    with pytest.raises(DuplicateEdgeError):
        apply_mutation(k3, cache, Mutation("insert-edge", {"u": 0, "v": 1}))
    with pytest.raises(UnknownNodeError):
        apply_mutation(k3, cache, Mutation("delete-node", {"id": 99}))
    with pytest.raises(InvalidMutationError):
        apply_mutation(k3, cache, Mutation("insert-edge", {"u": 0}))
    assert k3.version == before_version
    for mid, entry in cache.entries.items():
        vals = dict(entry.values) if isinstance(entry.values, dict) else entry.values
        assert snapshot[mid] == vals


def test_delete_node_updates_straight_through():
    g = clique(4)
    pendant = g.add_node()
    g.add_edge(0, pendant)
    cache = StatsCache(g)
    apply_mutation(g, cache, Mutation("delete-node", {"id": 0}))
    assert g.node_count == 4 and g.edge_count == 3
    assert cache.entries[TOTAL_TRIANGLES].values == 1
    assert pendant not in cache.entries["degree"].values or \
        cache.entries["degree"].values[pendant] == 0
    fresh_equals_recompute(g, cache)


def test_insert_subgraph_mutation(k3):
    cache = StatsCache(k3)
    m = Mutation("insert-subgraph", {
        "nodes": [{"label": "x"}, {"label": "y"}],
        "edges": [{"u": 0, "v": 1}],
        "attach": [{"node": 0, "to": 0}],
    })
    apply_mutation(k3, cache, m)
    assert k3.node_count == 5 and k3.edge_count == 5
    fresh_equals_recompute(k3, cache)


def test_insert_subgraph_validates_before_applying(k3):
    cache = StatsCache(k3)
    bad = Mutation("insert-subgraph", {
        "nodes": [{"label": "x"}],
        "edges": [{"u": 0, "v": 5}],  # index out of range
    })
    with pytest.raises(InvalidMutationError):
        apply_mutation(k3, cache, bad)
    assert k3.node_count == 3
    bad_attach = Mutation("insert-subgraph", {
        "nodes": [{}, {"attrs": {"": 1}}],  # second payload is invalid
    })
    with pytest.raises(Exception):
        apply_mutation(k3, cache, bad_attach)
    assert k3.node_count == 3
    fresh_equals_recompute(k3, cache)


def test_get_unknown_measure(k3):
    cache = StatsCache(k3)
    with pytest.raises(UnknownMeasureError):
        cache.get(k3, "harmonic")


def test_sampled_entry_is_not_reused_for_exact_requests():
    g = oracles.random_simple_graph(random.Random(1), 30, 0.2)
    cache = StatsCache(g)
    approx = cache.get(g, "betweenness", sample=5)
    assert not approx.exact
    exact = cache.get(g, "betweenness")
    assert exact.exact
    want = analytics.betweenness(g).values
    assert all(exact.values[v] == pytest.approx(want[v]) for v in g.nodes)


def test_threshold_triggers_default_sampling():
    g = oracles.random_simple_graph(random.Random(2), 40, 0.1)
    cache = StatsCache(g, exact_threshold=10, default_sample=8)
    entry = cache.get(g, "betweenness")
    assert not entry.exact and entry.sample_count == 8


def test_copy_isolates_state(k3):
    cache = StatsCache(k3)
    dup = cache.copy()
    g2 = k3.copy()
    apply_mutation(g2, dup, Mutation("insert-node", {}))
    assert len(dup.entries["degree"].values) == 4
    assert len(cache.entries["degree"].values) == 3


def random_mutation(rng: random.Random, g: Graph) -> Mutation:
    choices = ["insert-node", "insert-edge", "delete-node", "delete-edge",
               "update-attrs", "insert-subgraph"]
    kind = rng.choice(choices)
    nodes = sorted(g.nodes)
    if kind == "insert-node":
        return Mutation("insert-node", {"label": f"n{rng.randrange(1000)}"})
    if kind == "insert-edge" and len(nodes) >= 2:
        # hunt for a free pair; fall back to a fresh node when saturated
        for _ in range(10):
            u, v = rng.sample(nodes, 2)
            if not g.has_edge(u, v):
                return Mutation("insert-edge", {"u": u, "v": v})
        return Mutation("insert-node", {})
    if kind == "delete-node" and nodes:
        return Mutation("delete-node", {"id": rng.choice(nodes)})
    if kind == "delete-edge" and g.edges:
        return Mutation("delete-edge", {"id": rng.choice(sorted(g.edges))})
    if kind == "update-attrs" and nodes:
        return Mutation("update-attrs", {
            "target": "node", "id": rng.choice(nodes),
            "attrs": {"tag": rng.randrange(5)}})
    if kind == "insert-subgraph":
        k = rng.randrange(1, 4)
        edges = [{"u": i, "v": i + 1} for i in range(k - 1)]
        attach = [{"node": rng.choice(nodes), "to": 0}] if nodes else []
        return Mutation("insert-subgraph", {
            "nodes": [{} for _ in range(k)], "edges": edges, "attach": attach})
    return Mutation("insert-node", {})


@pytest.mark.parametrize("seed", range(10))
def test_random_mutation_sequences_stay_consistent(seed):
    rng = random.Random(seed)
    g = oracles.random_simple_graph(rng, rng.randrange(3, 12), 0.3)
    cache = StatsCache(g)
    for step in range(15):
        if step % 5 == 0:
            cache.get(g, "kcore")
            cache.get(g, "triangle-core")
        apply_mutation(g, cache, random_mutation(rng, g))
        fresh_equals_recompute(g, cache)
