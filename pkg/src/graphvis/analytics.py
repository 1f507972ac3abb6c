"""Graph measures: micro (per node/edge) and macro (whole graph).

All measures are computed on the underlying undirected simple graph and
ignore edge weights.  Per-node and per-edge results are returned as
``NodeMeasure``/``EdgeMeasure`` value maps keyed by id, with an ``exact``
flag that turns False when a sampling shortcut was taken.

Measure id registry (the strings are part of the wire protocol):

- node: degree, triangles, local-clustering, kcore, betweenness,
  pagerank, eccentricity
- edge: edge-triangles, triangle-core
"""

from __future__ import annotations

import heapq
import math
import random
from collections import Counter, deque
from dataclasses import dataclass, field, asdict

from .graph import Graph

# node measure ids
DEGREE = "degree"
TRIANGLES = "triangles"
LOCAL_CLUSTERING = "local-clustering"
KCORE = "kcore"
BETWEENNESS = "betweenness"
PAGERANK = "pagerank"
ECCENTRICITY = "eccentricity"

# edge measure ids
EDGE_TRIANGLES = "edge-triangles"
TRIANGLE_CORE = "triangle-core"

NODE_MEASURES = frozenset({
    DEGREE, TRIANGLES, LOCAL_CLUSTERING, KCORE, BETWEENNESS, PAGERANK,
    ECCENTRICITY,
})
EDGE_MEASURES = frozenset({EDGE_TRIANGLES, TRIANGLE_CORE})


@dataclass
class NodeMeasure:
    measure_id: str
    values: dict[int, float]
    exact: bool = True


@dataclass
class EdgeMeasure:
    measure_id: str
    values: dict[int, float]
    exact: bool = True


# ---- triangles and clustering ------------------------------------------------


def triangle_counts(g: Graph) -> tuple[NodeMeasure, EdgeMeasure, int]:
    """Count triangle memberships per node, per edge, and in total.

    Per edge (u,v) the count is the size of the common neighbourhood
    N(u) & N(v); each node's count is half the sum over incident edges,
    and the total is a third of the node sum, so every triangle is
    counted exactly once at each level.
    """
    node_tri = {nid: 0 for nid in g.nodes}
    edge_tri: dict[int, int] = {}
    for eid, e in g.edges.items():
        c = len(g.adj[e.u].keys() & g.adj[e.v].keys())
        edge_tri[eid] = c
        node_tri[e.u] += c
        node_tri[e.v] += c
    for nid in node_tri:
        node_tri[nid] //= 2
    total = sum(node_tri.values()) // 3
    return (NodeMeasure(TRIANGLES, node_tri),
            EdgeMeasure(EDGE_TRIANGLES, edge_tri), total)


def wedge_count(g: Graph) -> int:
    """Number of paths of length two (open or closed): sum of C(deg, 2)."""
    return sum(d * (d - 1) // 2 for d in (len(n) for n in g.adj.values()))


def local_clustering_value(tri: int, deg: int) -> float:
    if deg < 2:
        return 0.0
    return 2.0 * tri / (deg * (deg - 1))


def global_clustering_value(total_triangles: int, wedges: int) -> float:
    if wedges == 0:
        return 0.0
    return 3.0 * total_triangles / wedges


def clustering(g: Graph) -> tuple[NodeMeasure, float]:
    """Local clustering per node and the global (transitivity) coefficient.

    local(v) = 2*tri(v) / (deg(v)*(deg(v)-1)), defined as 0 when deg < 2;
    global = 3*triangles / wedges, defined as 0 when there are no wedges.
    """
    node_tri, _, total = triangle_counts(g)
    local = {nid: local_clustering_value(node_tri.values[nid], len(g.adj[nid]))
             for nid in g.nodes}
    return (NodeMeasure(LOCAL_CLUSTERING, local),
            global_clustering_value(total, wedge_count(g)))


def degrees(g: Graph) -> NodeMeasure:
    return NodeMeasure(DEGREE, {nid: len(nbrs) for nid, nbrs in g.adj.items()})


# ---- k-core ---------------------------------------------------------------


def kcore(g: Graph) -> tuple[NodeMeasure, int]:
    """Core number per node via peeling in O(V + E).

    Bucket variant: nodes are processed in ascending current degree; the
    core number of a node is its degree at removal, clamped monotone.
    """
    if not g.nodes:
        return NodeMeasure(KCORE, {}), 0
    deg = {nid: len(nbrs) for nid, nbrs in g.adj.items()}
    max_deg = max(deg.values())
    buckets: list[list[int]] = [[] for _ in range(max_deg + 1)]
    for nid in sorted(deg):
        buckets[deg[nid]].append(nid)
    core: dict[int, int] = {}
    removed: set[int] = set()
    k = 0
    d = 0
    remaining = len(deg)
    while remaining:
        while not buckets[d]:
            d += 1
        nid = buckets[d].pop()
        if nid in removed or deg[nid] != d:
            continue  # stale bucket entry
        removed.add(nid)
        remaining -= 1
        k = max(k, d)
        core[nid] = k
        for nbr in g.adj[nid]:
            # clamp at the current level: re-appends never land below d
            if nbr not in removed and deg[nbr] > d:
                deg[nbr] -= 1
                buckets[deg[nbr]].append(nbr)
    return NodeMeasure(KCORE, core), k


# ---- triangle cores ---------------------------------------------------------


def triangle_core(g: Graph) -> tuple[EdgeMeasure, int]:
    """Triangle-core number per edge via edge peeling.

    K(e) is the largest k such that e survives in a subgraph where every
    edge participates in at least k-2 triangles.  Edges outside any triangle
    get the base value 2; every edge of a triangle gets at least 3.

    Peels the edge with the fewest remaining triangles first (lazy heap);
    the assigned value is support-at-removal + 2, clamped monotone.
    """
    if not g.edges:
        return EdgeMeasure(TRIANGLE_CORE, {}), 0
    adj = {nid: set(nbrs) for nid, nbrs in g.adj.items()}
    sup: dict[int, int] = {}
    for eid, e in g.edges.items():
        sup[eid] = len(adj[e.u] & adj[e.v])
    heap = [(s, eid) for eid, s in sup.items()]
    heapq.heapify(heap)
    alive = set(g.edges)
    core: dict[int, int] = {}
    running = 0
    while heap:
        s, eid = heapq.heappop(heap)
        if eid not in alive or s != sup[eid]:
            continue
        alive.discard(eid)
        e = g.edges[eid]
        running = max(running, s)
        core[eid] = running + 2
        adj[e.u].discard(e.v)
        adj[e.v].discard(e.u)
        for w in adj[e.u] & adj[e.v]:
            for f in (g.adj[e.u][w], g.adj[e.v][w]):
                if f in alive:
                    sup[f] -= 1
                    heapq.heappush(heap, (sup[f], f))
    return EdgeMeasure(TRIANGLE_CORE, core), max(core.values())


# ---- shortest-path centrality ----------------------------------------------


def _brandes_source(g: Graph, s: int, bc: dict[int, float]) -> None:
    # single-source shortest path counting followed by dependency accumulation
    S: list[int] = []
    P: dict[int, list[int]] = {v: [] for v in g.nodes}
    sigma = {v: 0 for v in g.nodes}
    dist = {v: -1 for v in g.nodes}
    sigma[s] = 1
    dist[s] = 0
    queue = deque([s])
    while queue:
        v = queue.popleft()
        S.append(v)
        for w in g.adj[v]:
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                queue.append(w)
            if dist[w] == dist[v] + 1:
                sigma[w] += sigma[v]
                P[w].append(v)
    delta = {v: 0.0 for v in g.nodes}
    while S:
        w = S.pop()
        for v in P[w]:
            delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
        if w != s:
            bc[w] += delta[w]


def betweenness(g: Graph, sample_sources: int | None = None,
                seed: int = 0) -> NodeMeasure:
    """Unnormalized shortest-path betweenness (Brandes).

    Each unordered pair is counted once and endpoints are excluded.  When
    ``sample_sources`` is given, only that many seeded source BFS trees are
    accumulated and the result is scaled by n/k and flagged inexact
    (except when k = n, which is exhaustive).
    """
    nodes = sorted(g.nodes)
    n = len(nodes)
    bc = {v: 0.0 for v in nodes}
    if n == 0:
        return NodeMeasure(BETWEENNESS, bc)
    if sample_sources is not None:
        if sample_sources <= 0:
            raise ValueError("sample_sources must be positive")
        k = min(sample_sources, n)
        sources = random.Random(seed).sample(nodes, k)
        scale = n / k
        exact = k == n
    else:
        sources = nodes
        scale = 1.0
        exact = True
    for s in sources:
        _brandes_source(g, s, bc)
    # undirected accumulation visits each pair from both endpoints
    half = scale / 2.0
    for v in bc:
        bc[v] *= half
    return NodeMeasure(BETWEENNESS, bc, exact=exact)


# ---- PageRank ---------------------------------------------------------------


def pagerank(g: Graph, damping: float = 0.85, tol: float = 1e-8,
             max_iters: int = 100) -> NodeMeasure:
    """Power iteration on the degree-normalized adjacency.

    Mass from isolated nodes is redistributed uniformly, so the vector sums
    to one.  Stops when the L1 change drops below ``tol``; if the budget of
    ``max_iters`` runs out first, the best iterate is returned flagged
    inexact.
    """
    nodes = sorted(g.nodes)
    n = len(nodes)
    if n == 0:
        return NodeMeasure(PAGERANK, {})
    x = {v: 1.0 / n for v in nodes}
    dangling = [v for v in nodes if not g.adj[v]]
    converged = False
    for _ in range(max_iters):
        loose = sum(x[v] for v in dangling)
        base = (1.0 - damping) / n + damping * loose / n
        nxt = {}
        for v in nodes:
            acc = 0.0
            for u in g.adj[v]:
                acc += x[u] / len(g.adj[u])
            nxt[v] = base + damping * acc
        delta = sum(abs(nxt[v] - x[v]) for v in nodes)
        x = nxt
        if delta < tol:
            converged = True
            break
    return NodeMeasure(PAGERANK, x, exact=converged)


# ---- BFS distance statistics -------------------------------------------------


@dataclass
class DistanceStats:
    eccentricity: NodeMeasure
    diameter: float
    mean_distance: float
    component_count: int
    exact: bool = True


def _bfs_distances(g: Graph, s: int) -> dict[int, int]:
    dist = {s: 0}
    queue = deque([s])
    while queue:
        v = queue.popleft()
        for w in g.adj[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def component_count(g: Graph) -> int:
    seen: set[int] = set()
    count = 0
    for nid in g.nodes:
        if nid in seen:
            continue
        count += 1
        seen.update(_bfs_distances(g, nid))
    return count


def components(g: Graph) -> list[set[int]]:
    seen: set[int] = set()
    out = []
    for nid in sorted(g.nodes):
        if nid in seen:
            continue
        comp = set(_bfs_distances(g, nid))
        seen |= comp
        out.append(comp)
    return out


def distances(g: Graph, sample_sources: int | None = None,
              seed: int = 0) -> DistanceStats:
    """Eccentricity per node plus diameter and mean distance via BFS.

    Disconnected graphs are handled per component (pairs across components
    contribute nothing).  With ``sample_sources`` the sweep runs from a
    seeded node sample; eccentricities then are lower bounds and the whole
    result is flagged approximate.  Component count stays exact either way.
    """
    nodes = sorted(g.nodes)
    n = len(nodes)
    if n == 0:
        return DistanceStats(NodeMeasure(ECCENTRICITY, {}), 0.0, 0.0, 0)
    if sample_sources is not None and sample_sources < n:
        if sample_sources <= 0:
            raise ValueError("sample_sources must be positive")
        sources = random.Random(seed).sample(nodes, sample_sources)
        exact = False
    else:
        sources = nodes
        exact = True
    ecc = {v: 0 for v in nodes}
    total = 0
    pairs = 0
    for s in sources:
        dist = _bfs_distances(g, s)
        far = max(dist.values())
        ecc[s] = max(ecc[s], far)
        if not exact:
            # a BFS from s lower-bounds the eccentricity of every reached node
            for v, d in dist.items():
                ecc[v] = max(ecc[v], d)
        total += sum(dist.values())
        pairs += len(dist) - 1
    diameter = float(max(ecc.values())) if ecc else 0.0
    mean = total / pairs if pairs else 0.0
    return DistanceStats(NodeMeasure(ECCENTRICITY, {v: float(e) for v, e in ecc.items()}, exact=exact),
                         diameter, mean, component_count(g), exact=exact)


# ---- greedy coloring ---------------------------------------------------------


def smallest_last_order(g: Graph) -> list[int]:
    """Degeneracy ordering: repeatedly peel a minimum-degree node.

    Ties break toward the smallest id.  Returned in removal order.
    """
    deg = {nid: len(nbrs) for nid, nbrs in g.adj.items()}
    heap = [(d, nid) for nid, d in deg.items()]
    heapq.heapify(heap)
    removed: set[int] = set()
    order: list[int] = []
    while heap:
        d, nid = heapq.heappop(heap)
        if nid in removed or deg[nid] != d:
            continue
        removed.add(nid)
        order.append(nid)
        for nbr in g.adj[nid]:
            if nbr not in removed:
                deg[nbr] -= 1
                heapq.heappush(heap, (deg[nbr], nbr))
    return order


def greedy_color(g: Graph) -> tuple[NodeMeasure, int]:
    """Greedy proper coloring along the reverse smallest-last order.

    The color count never exceeds degeneracy + 1, i.e. max core number + 1.
    """
    order = smallest_last_order(g)
    colors: dict[int, int] = {}
    for nid in reversed(order):
        used = {colors[nbr] for nbr in g.adj[nid] if nbr in colors}
        c = 0
        while c in used:
            c += 1
        colors[nid] = c
    count = (max(colors.values()) + 1) if colors else 0
    return NodeMeasure("color", colors), count


# ---- macro summary -----------------------------------------------------------


def aggregate(values: dict[int, float]) -> dict[str, float]:
    """Mean/max/mode/sum/population-variance of a value map.

    Mode ties break toward the smallest value; an empty map yields zeros.
    """
    if not values:
        return {"mean": 0.0, "max": 0.0, "mode": 0.0, "sum": 0.0, "var": 0.0}
    vals = list(values.values())
    n = len(vals)
    total = sum(vals)
    mean = total / n
    var = sum((v - mean) ** 2 for v in vals) / n
    counts = Counter(vals)
    best = max(counts.values())
    mode = min(v for v, c in counts.items() if c == best)
    return {"mean": mean, "max": max(vals), "mode": mode,
            "sum": total, "var": var}


@dataclass
class MacroSummary:
    node_count: int
    edge_count: int
    max_degree: int
    avg_degree: float
    total_triangles: int
    global_clustering: float
    max_kcore: int
    diameter: float
    mean_distance: float
    approx_chromatic_number: int
    max_triangle_core: int
    component_count: int
    aggregates: dict[str, dict[str, float]] = field(default_factory=dict)
    approx: dict[str, bool] = field(default_factory=dict)
    community_count: int | None = None
    role_count: int | None = None

    def to_json(self) -> dict:
        return asdict(self)


def macro_summary(g: Graph, cache=None, partition_counts: dict | None = None) -> MacroSummary:
    """Assemble the whole-graph summary, reusing a StatsCache when given.

    ``partition_counts`` may carry {"community": k, "role": k} from a cached
    partition; the fields stay None until one has been computed.
    """
    if cache is not None:
        def node_vals(mid):
            entry = cache.get(g, mid)
            return entry.values, entry.exact
        tri_total = int(cache.get(g, "total-triangles").values)
        gcc = float(cache.get(g, "global-clustering").values)
        max_core = int(cache.get(g, "max-kcore").values)
        diameter = float(cache.get(g, "diameter").values)
        mean_dist = float(cache.get(g, "mean-distance").values)
        comp = int(cache.get(g, "component-count").values)
        max_tcore = int(cache.get(g, "max-triangle-core").values)
        dist_exact = cache.get(g, "diameter").exact
        colors, color_count = greedy_color(g)
    else:
        node_tri, _, tri_total = triangle_counts(g)
        gcc = global_clustering_value(tri_total, wedge_count(g))
        _, max_core = kcore(g)
        dstats = distances(g)
        diameter, mean_dist, comp = dstats.diameter, dstats.mean_distance, dstats.component_count
        dist_exact = dstats.exact
        _, max_tcore = triangle_core(g)
        colors, color_count = greedy_color(g)

        def node_vals(mid):
            if mid == DEGREE:
                return degrees(g).values, True
            if mid == TRIANGLES:
                return node_tri.values, True
            if mid == LOCAL_CLUSTERING:
                return clustering(g)[0].values, True
            if mid == KCORE:
                return kcore(g)[0].values, True
            if mid == BETWEENNESS:
                m = betweenness(g)
                return m.values, m.exact
            if mid == PAGERANK:
                m = pagerank(g)
                return m.values, m.exact
            if mid == ECCENTRICITY:
                m = distances(g).eccentricity
                return m.values, m.exact
            raise KeyError(mid)

    n, m = g.node_count, g.edge_count
    deg_values = {nid: len(nbrs) for nid, nbrs in g.adj.items()}
    aggregates = {}
    approx = {"approx-chromatic-number": True}
    for mid in sorted(NODE_MEASURES):
        vals, exact = node_vals(mid)
        aggregates[mid] = aggregate(vals)
        if not exact:
            approx[mid] = True
    if not dist_exact:
        approx["diameter"] = True
        approx["mean-distance"] = True
    summary = MacroSummary(
        node_count=n,
        edge_count=m,
        max_degree=max(deg_values.values()) if deg_values else 0,
        avg_degree=(2.0 * m / n) if n else 0.0,
        total_triangles=tri_total,
        global_clustering=gcc,
        max_kcore=max_core,
        diameter=diameter,
        mean_distance=mean_dist,
        approx_chromatic_number=color_count,
        max_triangle_core=max_tcore,
        component_count=comp,
        aggregates=aggregates,
        approx=approx,
    )
    if partition_counts:
        summary.community_count = partition_counts.get("community")
        summary.role_count = partition_counts.get("role")
    return summary
