"""Node partitions: community detection, structural roles, proper coloring.

Each method produces a ``Partition`` whose assignment maps every node to a
dense group id in 0..k-1.  Group ids are densified by first occurrence in
ascending node-id order, so results are reproducible across runs.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import analytics
from .errors import InvalidSpecError
from .graph import Graph

COMMUNITY = "community"
ROLE = "role"
COLORING = "coloring"

METHODS = frozenset({COMMUNITY, ROLE, COLORING})


@dataclass
class Partition:
    method: str
    assignment: dict[int, int]
    group_count: int
    quality: float | None = None  # modularity for community, None otherwise
    params: dict = field(default_factory=dict)

    def groups(self) -> dict[int, set[int]]:
        out: dict[int, set[int]] = {}
        for nid, gid in self.assignment.items():
            out.setdefault(gid, set()).add(nid)
        return out

    def to_json(self) -> dict:
        return {
            "method": self.method,
            "assignment": {str(nid): gid for nid, gid in sorted(self.assignment.items())},
            "group_count": self.group_count,
            "quality": self.quality,
            "params": self.params,
        }


def count_groups(p: Partition) -> int:
    return len(set(p.assignment.values()))


def _densify(raw: dict[int, int]) -> tuple[dict[int, int], int]:
    remap: dict[int, int] = {}
    dense = {}
    for nid in sorted(raw):
        lbl = raw[nid]
        if lbl not in remap:
            remap[lbl] = len(remap)
        dense[nid] = remap[lbl]
    return dense, len(remap)


def modularity(g: Graph, assignment: dict[int, int]) -> float:
    """Newman modularity of a partition; 0.0 for an edgeless graph.

    Q = sum over groups of (m_c / m - (d_c / 2m)^2).
    """
    m = g.edge_count
    if m == 0:
        return 0.0
    intra = Counter()
    deg_sum = Counter()
    for e in g.edges.values():
        if assignment[e.u] == assignment[e.v]:
            intra[assignment[e.u]] += 1
    for nid, nbrs in g.adj.items():
        deg_sum[assignment[nid]] += len(nbrs)
    q = 0.0
    for gid, dsum in deg_sum.items():
        q += intra.get(gid, 0) / m - (dsum / (2.0 * m)) ** 2
    return q


def label_propagation(g: Graph, seed: int = 0, max_sweeps: int = 100) -> Partition:
    """Asynchronous label propagation.

    Every node starts with its own label; sweeps visit nodes in a freshly
    seeded-shuffled order and each node adopts the most frequent label among
    its neighbours.  A node whose current label is already among the most
    frequent keeps it; other ties break seeded-uniformly.  (Deterministic
    smallest-label tie-breaking lets low labels avalanche across bridges
    and merge planted communities.)  Stops when a full sweep changes
    nothing.  Labels only travel along edges, so groups can never span
    components.
    """
    rng = random.Random(seed)
    labels = {nid: nid for nid in g.nodes}
    order = sorted(g.nodes)
    for _ in range(max_sweeps):
        rng.shuffle(order)
        changed = False
        for nid in order:
            nbrs = g.adj[nid]
            if not nbrs:
                continue
            freq = Counter(labels[w] for w in nbrs)
            best = max(freq.values())
            winners = sorted(lbl for lbl, c in freq.items() if c == best)
            if labels[nid] in winners:
                continue
            labels[nid] = winners[0] if len(winners) == 1 else rng.choice(winners)
            changed = True
        if not changed:
            break
    dense, count = _densify(labels)
    return Partition(COMMUNITY, dense, count,
                     quality=modularity(g, dense),
                     params={"seed": seed, "max_sweeps": max_sweeps})


def role_features(g: Graph) -> tuple[list[int], np.ndarray]:
    """Structural feature matrix, one row per node in ascending id order.

    Columns: log1p degree, log1p triangles, log1p wedges-at-node,
    core number, log1p mean neighbour degree.
    """
    nodes = sorted(g.nodes)
    tri = analytics.triangle_counts(g)[0].values
    core = analytics.kcore(g)[0].values
    rows = []
    for nid in nodes:
        deg = len(g.adj[nid])
        wedges = deg * (deg - 1) / 2.0
        mnd = (sum(len(g.adj[w]) for w in g.adj[nid]) / deg) if deg else 0.0
        rows.append([
            np.log1p(deg),
            np.log1p(tri[nid]),
            np.log1p(wedges),
            float(core[nid]),
            np.log1p(mnd),
        ])
    return nodes, np.asarray(rows, dtype=float)


def _standardize(x: np.ndarray) -> np.ndarray:
    mean = x.mean(axis=0)
    std = x.std(axis=0)
    out = np.zeros_like(x)
    nz = std > 0
    out[:, nz] = (x[:, nz] - mean[nz]) / std[nz]
    return out  # zero-variance columns stay all-zero


def _farthest_point_centers(x: np.ndarray, k: int) -> np.ndarray:
    """Deterministic farthest-point seeding.

    The first centre is the max-norm row; ties (and later farthest-point
    ties) break lexicographically on the feature vector, so the choice is a
    function of the values alone and survives node relabeling.
    """
    order = sorted(range(len(x)),
                   key=lambda i: (-float(np.dot(x[i], x[i])), tuple(-x[i])))
    centers = [x[order[0]]]
    d2 = np.sum((x - centers[0]) ** 2, axis=1)
    while len(centers) < k:
        far = float(d2.max())
        if far == 0.0:
            break  # all remaining points sit on existing centres
        ties = np.flatnonzero(d2 == far)
        pick = min(ties, key=lambda i: tuple(-x[i]))
        centers.append(x[pick])
        d2 = np.minimum(d2, np.sum((x - x[pick]) ** 2, axis=1))
    return np.asarray(centers)


def roles(g: Graph, role_count: int, seed: int = 0,
          max_iters: int = 100) -> Partition:
    """Structural role assignment via Lloyd iteration on standardized features.

    ``role_count`` is an upper bound: clusters that end up empty simply
    disappear in the densified assignment (identical feature rows always
    land together).  The result is deterministic and invariant under node
    relabeling; ``seed`` is accepted for interface stability but cannot
    influence the outcome.
    """
    if role_count < 1:
        raise InvalidSpecError("role_count must be at least 1")
    if role_count > g.node_count:
        raise InvalidSpecError(
            f"role_count {role_count} exceeds node count {g.node_count}")
    nodes, feats = role_features(g)
    x = _standardize(feats)
    centers = _farthest_point_centers(x, role_count)
    assign = None
    for _ in range(max_iters):
        # squared distances to each centre; argmin ties toward the lowest index
        d2 = ((x[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        new_assign = d2.argmin(axis=1)
        if assign is not None and np.array_equal(new_assign, assign):
            break
        assign = new_assign
        for c in range(len(centers)):
            members = x[assign == c]
            if len(members):
                centers[c] = members.mean(axis=0)
    if assign is None:
        assign = np.zeros(len(nodes), dtype=int)
    raw = {nid: int(assign[i]) for i, nid in enumerate(nodes)}
    dense, count = _densify(raw)
    return Partition(ROLE, dense, count,
                     params={"role_count": role_count, "seed": seed})


def coloring(g: Graph) -> Partition:
    """Proper coloring partition from the greedy smallest-last algorithm."""
    colors, count = analytics.greedy_color(g)
    dense, count2 = _densify(colors.values)
    return Partition(COLORING, dense, count2, params={})


def compute(g: Graph, method: str, seed: int = 0,
            role_count: int | None = None) -> Partition:
    """Dispatch by method name; the service endpoint calls through here."""
    if method == COMMUNITY:
        return label_propagation(g, seed=seed)
    if method == ROLE:
        if role_count is None:
            raise InvalidSpecError("role partitions need a role_count")
        return roles(g, role_count, seed=seed)
    if method == COLORING:
        return coloring(g)
    raise InvalidSpecError(f"unknown partition method {method!r}")
