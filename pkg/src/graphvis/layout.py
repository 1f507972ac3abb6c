"""Seeded force-directed layout.

Spring embedding with pairwise repulsion and edge attraction, cooled over
a fixed iteration budget.  Everything is vectorized; runtime is O(n^2) per
iteration, which is fine for the interactive sizes this serves.  The same
seed always yields the same coordinates.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidValueError
from .graph import Graph


def force_layout(g: Graph, seed: int = 0,
                 iterations: int = 60) -> dict[int, tuple[float, float]]:
    if iterations < 1:
        raise InvalidValueError("layout needs at least one iteration")
    order = sorted(g.nodes)
    n = len(order)
    if n == 0:
        return {}
    if n == 1:
        return {order[0]: (0.0, 0.0)}
    index = {nid: i for i, nid in enumerate(order)}
    rng = np.random.default_rng(seed)
    pos = rng.random((n, 2))
    edges = np.array([[index[e.u], index[e.v]] for e in g.edges.values()],
                     dtype=np.int64).reshape(-1, 2)
    k = float(np.sqrt(1.0 / n))
    temp = 0.1
    cool = temp / (iterations + 1)
    for _ in range(iterations):
        delta = pos[:, None, :] - pos[None, :, :]
        dist = np.linalg.norm(delta, axis=-1)
        np.fill_diagonal(dist, 1.0)
        dist = np.maximum(dist, 1e-9)
        # repulsion k^2/d on every pair
        force = (k * k) / (dist * dist)
        np.fill_diagonal(force, 0.0)
        disp = (delta / dist[..., None] * force[..., None]).sum(axis=1)
        if len(edges):
            dvec = pos[edges[:, 0]] - pos[edges[:, 1]]
            dlen = np.maximum(np.linalg.norm(dvec, axis=-1, keepdims=True),
                              1e-9)
            pull = dvec / dlen * (dlen ** 2 / k)
            np.subtract.at(disp, edges[:, 0], pull)
            np.add.at(disp, edges[:, 1], pull)
        length = np.maximum(np.linalg.norm(disp, axis=-1, keepdims=True),
                            1e-9)
        pos += disp / length * np.minimum(length, temp)
        temp = max(temp - cool, 1e-4)
    return {nid: (float(pos[i, 0]), float(pos[i, 1]))
            for nid, i in index.items()}
