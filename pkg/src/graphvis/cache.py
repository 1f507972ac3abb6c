"""Measure cache with incremental maintenance.

Cheap neighbourhood-local measures (degree, triangle memberships, local and
global clustering) are updated in place on every mutation in time
proportional to the affected neighbourhood.  Everything that needs a global
pass (k-core, triangle-core, betweenness, PageRank, distance statistics)
is merely marked stale and recomputed on demand.

The core guarantee: whenever an entry is fresh, its values equal a
from-scratch recomputation on the current graph.  Derived floats
(clustering coefficients) are recomputed from maintained integer counts
through the same expressions the batch code uses, so equality is exact,
not approximate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import analytics
from .analytics import (
    BETWEENNESS,
    DEGREE,
    ECCENTRICITY,
    EDGE_MEASURES,
    EDGE_TRIANGLES,
    KCORE,
    LOCAL_CLUSTERING,
    NODE_MEASURES,
    PAGERANK,
    TRIANGLES,
    TRIANGLE_CORE,
)
from .errors import (
    DuplicateEdgeError,
    InvalidMutationError,
    InvalidValueError,
    SelfLoopError,
    UnknownMeasureError,
    UnknownNodeError,
)
from .graph import Graph, Mutation, _check_attrs, _check_ts, _check_weight

# macro measure ids (scalar-valued cache entries)
TOTAL_TRIANGLES = "total-triangles"
WEDGES = "wedges"
GLOBAL_CLUSTERING = "global-clustering"
MAX_KCORE = "max-kcore"
DIAMETER = "diameter"
MEAN_DISTANCE = "mean-distance"
COMPONENT_COUNT = "component-count"
MAX_TRIANGLE_CORE = "max-triangle-core"

MACRO_MEASURES = frozenset({
    TOTAL_TRIANGLES, WEDGES, GLOBAL_CLUSTERING, MAX_KCORE, DIAMETER,
    MEAN_DISTANCE, COMPONENT_COUNT, MAX_TRIANGLE_CORE,
})

INCREMENTAL = frozenset({
    DEGREE, TRIANGLES, EDGE_TRIANGLES, LOCAL_CLUSTERING,
    TOTAL_TRIANGLES, WEDGES, GLOBAL_CLUSTERING,
})

# lazy measures grouped by the computation that produces them together
_LAZY_GROUPS: dict[str, tuple[str, ...]] = {
    "kcore": (KCORE, MAX_KCORE),
    "distances": (ECCENTRICITY, DIAMETER, MEAN_DISTANCE, COMPONENT_COUNT),
    "betweenness": (BETWEENNESS,),
    "pagerank": (PAGERANK,),
    "triangle-core": (TRIANGLE_CORE, MAX_TRIANGLE_CORE),
}
_GROUP_OF = {mid: grp for grp, mids in _LAZY_GROUPS.items() for mid in mids}
LAZY = frozenset(_GROUP_OF)

ALL_MEASURES = NODE_MEASURES | EDGE_MEASURES | MACRO_MEASURES

# measures that honor a source-sampling budget
SAMPLEABLE = frozenset({BETWEENNESS, ECCENTRICITY, DIAMETER, MEAN_DISTANCE})


def strategy(measure_id: str) -> str:
    if measure_id in INCREMENTAL:
        return "incremental"
    if measure_id in LAZY:
        return "lazy"
    raise UnknownMeasureError(f"unknown measure {measure_id!r}")


@dataclass
class CacheEntry:
    values: object  # id -> value map for micro measures, scalar for macro
    computed_at: int  # topology version at computation time
    fresh: bool = True
    exact: bool = True
    sample_count: int | None = None


class StatsCache:
    """Per-graph measure store; one instance accompanies one Graph."""

    def __init__(self, graph: Graph, exact_threshold: int = 10_000,
                 default_sample: int = 256):
        self.exact_threshold = exact_threshold
        self.default_sample = default_sample
        self.entries: dict[str, CacheEntry] = {}
        self._seed(graph)

    # ---- bootstrap -------------------------------------------------------

    def _seed(self, g: Graph) -> None:
        """Compute every incremental entry from scratch."""
        tv = g.topology_version
        deg = {nid: len(nbrs) for nid, nbrs in g.adj.items()}
        node_tri, edge_tri, total = analytics.triangle_counts(g)
        wedges = analytics.wedge_count(g)
        local = {nid: analytics.local_clustering_value(node_tri.values[nid], deg[nid])
                 for nid in g.nodes}
        self.entries[DEGREE] = CacheEntry(deg, tv)
        self.entries[TRIANGLES] = CacheEntry(node_tri.values, tv)
        self.entries[EDGE_TRIANGLES] = CacheEntry(edge_tri.values, tv)
        self.entries[LOCAL_CLUSTERING] = CacheEntry(local, tv)
        self.entries[TOTAL_TRIANGLES] = CacheEntry(total, tv)
        self.entries[WEDGES] = CacheEntry(wedges, tv)
        self.entries[GLOBAL_CLUSTERING] = CacheEntry(
            analytics.global_clustering_value(total, wedges), tv)

    def copy(self) -> "StatsCache":
        dup = StatsCache.__new__(StatsCache)
        dup.exact_threshold = self.exact_threshold
        dup.default_sample = self.default_sample
        dup.entries = {}
        for mid, e in self.entries.items():
            vals = dict(e.values) if isinstance(e.values, dict) else e.values
            dup.entries[mid] = CacheEntry(vals, e.computed_at, e.fresh,
                                          e.exact, e.sample_count)
        return dup

    # ---- lookup ----------------------------------------------------------

    def fresh_measures(self) -> set[str]:
        return {mid for mid, e in self.entries.items() if e.fresh}

    def invalidate_lazy(self) -> list[str]:
        """Mark every cached lazy entry stale; returns what was invalidated."""
        stale = []
        for mid, entry in self.entries.items():
            if mid in LAZY and entry.fresh:
                entry.fresh = False
                stale.append(mid)
        return sorted(stale)

    def _effective_sample(self, g: Graph, measure_id: str,
                          sample: int | None) -> int | None:
        if measure_id not in SAMPLEABLE:
            return None
        if sample is not None:
            if sample <= 0:
                raise InvalidValueError("sample must be a positive count")
            return None if sample >= g.node_count else sample
        if g.node_count > self.exact_threshold:
            return self.default_sample
        return None

    def get(self, g: Graph, measure_id: str, sample: int | None = None) -> CacheEntry:
        """Fetch a measure, recomputing a stale or missing lazy entry on demand."""
        if measure_id not in ALL_MEASURES:
            raise UnknownMeasureError(f"unknown measure {measure_id!r}")
        want = self._effective_sample(g, measure_id, sample)
        entry = self.entries.get(measure_id)
        if entry is not None and entry.fresh and entry.sample_count == want:
            return entry
        if measure_id in INCREMENTAL:
            # incremental entries only go missing if the cache was built empty
            self._seed(g)
            return self.entries[measure_id]
        self._compute_group(g, _GROUP_OF[measure_id], want)
        return self.entries[measure_id]

    def _compute_group(self, g: Graph, group: str, sample: int | None) -> None:
        tv = g.topology_version
        if group == "kcore":
            core, max_k = analytics.kcore(g)
            self.entries[KCORE] = CacheEntry(core.values, tv)
            self.entries[MAX_KCORE] = CacheEntry(max_k, tv)
        elif group == "triangle-core":
            tc, max_k = analytics.triangle_core(g)
            self.entries[TRIANGLE_CORE] = CacheEntry(tc.values, tv)
            self.entries[MAX_TRIANGLE_CORE] = CacheEntry(max_k, tv)
        elif group == "betweenness":
            m = analytics.betweenness(g, sample_sources=sample)
            self.entries[BETWEENNESS] = CacheEntry(
                m.values, tv, exact=m.exact, sample_count=sample)
        elif group == "pagerank":
            m = analytics.pagerank(g)
            self.entries[PAGERANK] = CacheEntry(m.values, tv, exact=m.exact)
        elif group == "distances":
            st = analytics.distances(g, sample_sources=sample)
            self.entries[ECCENTRICITY] = CacheEntry(
                st.eccentricity.values, tv, exact=st.exact, sample_count=sample)
            self.entries[DIAMETER] = CacheEntry(
                st.diameter, tv, exact=st.exact, sample_count=sample)
            self.entries[MEAN_DISTANCE] = CacheEntry(
                st.mean_distance, tv, exact=st.exact, sample_count=sample)
            self.entries[COMPONENT_COUNT] = CacheEntry(st.component_count, tv)
        else:  # pragma: no cover - registry is closed
            raise UnknownMeasureError(group)

    # ---- incremental updates ----------------------------------------------

    def _vals(self, mid: str) -> dict:
        return self.entries[mid].values

    def _touch_incremental(self, tv: int) -> None:
        for mid in INCREMENTAL:
            entry = self.entries[mid]
            entry.computed_at = tv
            entry.fresh = True

    def _refresh_gcc(self) -> None:
        total = self.entries[TOTAL_TRIANGLES].values
        wedges = self.entries[WEDGES].values
        self.entries[GLOBAL_CLUSTERING].values = \
            analytics.global_clustering_value(total, wedges)

    def _recompute_local(self, nid: int) -> None:
        deg = self._vals(DEGREE)[nid]
        tri = self._vals(TRIANGLES)[nid]
        self._vals(LOCAL_CLUSTERING)[nid] = \
            analytics.local_clustering_value(tri, deg)

    def on_insert_node(self, g: Graph, nid: int) -> None:
        self._vals(DEGREE)[nid] = 0
        self._vals(TRIANGLES)[nid] = 0
        self._vals(LOCAL_CLUSTERING)[nid] = 0.0
        self._touch_incremental(g.topology_version)

    def on_insert_edge(self, g: Graph, eid: int, common: set[int]) -> None:
        """Update counts after an edge insert.

        ``common`` must be the common neighbourhood of the endpoints
        captured before the edge was added.
        """
        e = g.edges[eid]
        deg = self._vals(DEGREE)
        tri = self._vals(TRIANGLES)
        etri = self._vals(EDGE_TRIANGLES)
        deg[e.u] += 1
        deg[e.v] += 1
        # degree d-1 -> d adds d-1 wedges centred at the endpoint
        self.entries[WEDGES].values += (deg[e.u] - 1) + (deg[e.v] - 1)
        c = len(common)
        etri[eid] = c
        tri[e.u] += c
        tri[e.v] += c
        for w in common:
            tri[w] += 1
            etri[g.adj[e.u][w]] += 1
            etri[g.adj[e.v][w]] += 1
            self._recompute_local(w)
        self.entries[TOTAL_TRIANGLES].values += c
        self._recompute_local(e.u)
        self._recompute_local(e.v)
        self._refresh_gcc()
        self._touch_incremental(g.topology_version)

    def on_delete_edge(self, g: Graph, eid: int, u: int, v: int,
                       common: set[int]) -> None:
        """Update counts for an edge removal; call after the graph change.

        ``common`` is the common neighbourhood captured while the edge was
        still present.
        """
        deg = self._vals(DEGREE)
        tri = self._vals(TRIANGLES)
        etri = self._vals(EDGE_TRIANGLES)
        self.entries[WEDGES].values -= (deg[u] - 1) + (deg[v] - 1)
        deg[u] -= 1
        deg[v] -= 1
        c = len(common)
        tri[u] -= c
        tri[v] -= c
        for w in common:
            tri[w] -= 1
            etri[g.adj[u][w]] -= 1
            etri[g.adj[v][w]] -= 1
            self._recompute_local(w)
        del etri[eid]
        self.entries[TOTAL_TRIANGLES].values -= c
        self._recompute_local(u)
        self._recompute_local(v)
        self._refresh_gcc()
        self._touch_incremental(g.topology_version)

    def on_delete_node(self, g: Graph, nid: int, neighbors: dict[int, int],
                       lost_pairs: list[tuple[int, int, int]],
                       lost_wedges: int, lost_triangles: int) -> None:
        """Update counts for a node removal; call after the graph change.

        ``neighbors`` maps former neighbour -> incident edge id;
        ``lost_pairs`` lists (u, w, edge(u,w) id) for every surviving edge
        that lost a triangle through the removed node, one entry per
        destroyed triangle.
        """
        deg = self._vals(DEGREE)
        tri = self._vals(TRIANGLES)
        etri = self._vals(EDGE_TRIANGLES)
        lc = self._vals(LOCAL_CLUSTERING)
        self.entries[WEDGES].values -= lost_wedges
        self.entries[TOTAL_TRIANGLES].values -= lost_triangles
        for u, w, eid in lost_pairs:
            etri[eid] -= 1
            tri[u] -= 1
            tri[w] -= 1
        for u, eid in neighbors.items():
            deg[u] -= 1
            etri.pop(eid, None)
        del deg[nid], tri[nid], lc[nid]
        for u in neighbors:
            self._recompute_local(u)
        self._refresh_gcc()
        self._touch_incremental(g.topology_version)


# ---- mutation application -----------------------------------------------------


def _validate_subgraph_payload(g: Graph, payload: dict) -> None:
    nodes = payload.get("nodes", [])
    edges = payload.get("edges", [])
    attach = payload.get("attach", [])
    if not isinstance(nodes, list) or not isinstance(edges, list) \
            or not isinstance(attach, list):
        raise InvalidMutationError("insert-subgraph payload fields must be lists")
    n = len(nodes)
    # scalar payloads must be valid up front so application cannot fail midway
    for spec in nodes:
        if not isinstance(spec, dict):
            raise InvalidMutationError("node payloads must be objects")
        _check_attrs(spec.get("attrs"))
        _check_ts(spec.get("ts"))
    seen_pairs: set[tuple[int, int]] = set()
    for spec in edges:
        if not isinstance(spec, dict):
            raise InvalidMutationError("edge payloads must be objects")
        _check_weight(spec.get("weight", 1.0))
        _check_ts(spec.get("ts"))
        u, v = spec.get("u"), spec.get("v")
        if not isinstance(u, int) or not isinstance(v, int) \
                or not (0 <= u < n) or not (0 <= v < n):
            raise InvalidMutationError(
                f"edge index pair ({u!r}, {v!r}) outside inserted node range")
        if u == v:
            raise SelfLoopError("insert-subgraph edge would form a self-loop")
        key = (min(u, v), max(u, v))
        if key in seen_pairs:
            raise DuplicateEdgeError(f"duplicate edge indices {key} in payload")
        seen_pairs.add(key)
    seen_attach: set[tuple[int, int]] = set()
    for spec in attach:
        node, to = spec.get("node"), spec.get("to")
        if not g.has_node(node):
            raise UnknownNodeError(f"attach references missing node {node!r}")
        if not isinstance(to, int) or not (0 <= to < n):
            raise InvalidMutationError(f"attach index {to!r} outside inserted range")
        if (node, to) in seen_attach:
            raise DuplicateEdgeError(f"duplicate attach pair ({node}, {to})")
        seen_attach.add((node, to))


def _ins_node(g: Graph, cache: StatsCache, payload: dict) -> int:
    nid = g.add_node(label=payload.get("label"), attrs=payload.get("attrs"),
                     ts=payload.get("ts"))
    cache.on_insert_node(g, nid)
    return nid


def _ins_edge(g: Graph, cache: StatsCache, u: int, v: int, weight=1.0,
              ts=None, attrs=None) -> int:
    g.require_node(u)
    g.require_node(v)
    if u == v:
        raise SelfLoopError(f"self-loop on node {u} rejected")
    if g.has_edge(u, v):
        raise DuplicateEdgeError(f"edge between {u} and {v} already exists")
    common = set(g.adj[u].keys() & g.adj[v].keys())
    eid = g.add_edge(u, v, weight=weight, ts=ts, attrs=attrs)
    cache.on_insert_edge(g, eid, common)
    return eid


def _del_edge(g: Graph, cache: StatsCache, eid: int) -> None:
    e = g.require_edge(eid)
    u, v = e.u, e.v
    common = set(g.adj[u].keys() & g.adj[v].keys())
    g.delete_edge(eid)
    cache.on_delete_edge(g, eid, u, v, common)


def _del_node(g: Graph, cache: StatsCache, nid: int) -> int:
    g.require_node(nid)
    neighbors = dict(g.adj[nid])
    deg_n = len(neighbors)
    lost_wedges = deg_n * (deg_n - 1) // 2
    lost_pairs: list[tuple[int, int, int]] = []
    nbr_set = set(neighbors)
    for u in neighbors:
        for w in g.adj[u].keys() & nbr_set:
            if u < w:  # visit each surviving edge once
                lost_pairs.append((u, w, g.adj[u][w]))
        lost_wedges += len(g.adj[u]) - 1
    lost_triangles = cache._vals(TRIANGLES)[nid]
    removed = g.delete_node(nid)
    cache.on_delete_node(g, nid, neighbors, lost_pairs, lost_wedges,
                         lost_triangles)
    return removed


def apply_mutation(g: Graph, cache: StatsCache, m: Mutation) -> StatsCache:
    """Apply one mutation to the graph, keeping the cache consistent.

    Validation happens before any change, so on error both the graph and
    the cache are untouched.  Incremental entries are updated in place;
    lazy entries are invalidated only when the topology changed.
    """
    p = m.payload

    def need(key):
        if key not in p:
            raise InvalidMutationError(
                f"{m.kind} payload is missing the {key!r} field")
        return p[key]

    if m.kind == "insert-node":
        _ins_node(g, cache, p)
    elif m.kind == "insert-edge":
        _ins_edge(g, cache, need("u"), need("v"), p.get("weight", 1.0),
                  p.get("ts"), p.get("attrs"))
    elif m.kind == "delete-node":
        _del_node(g, cache, need("id"))
    elif m.kind == "delete-edge":
        _del_edge(g, cache, need("id"))
    elif m.kind == "update-attrs":
        target = p.get("target", "node")
        if target == "node":
            g.update_node(need("id"), label=p.get("label"), attrs=p.get("attrs"),
                          **({"ts": p["ts"]} if "ts" in p else {}))
        elif target == "edge":
            g.update_edge(need("id"), weight=p.get("weight"), attrs=p.get("attrs"),
                          **({"ts": p["ts"]} if "ts" in p else {}))
        else:
            raise InvalidMutationError(f"unknown update target {target!r}")
        return cache  # attribute updates never invalidate measures
    elif m.kind == "insert-subgraph":
        _validate_subgraph_payload(g, p)
        new_ids = [_ins_node(g, cache, spec) for spec in p.get("nodes", [])]
        for spec in p.get("edges", []):
            _ins_edge(g, cache, new_ids[spec["u"]], new_ids[spec["v"]],
                      spec.get("weight", 1.0), spec.get("ts"))
        for spec in p.get("attach", []):
            _ins_edge(g, cache, spec["node"], new_ids[spec["to"]])
    else:
        raise InvalidMutationError(f"unknown mutation kind {m.kind!r}")
    cache.invalidate_lazy()
    return cache
