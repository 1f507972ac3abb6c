"""Mutable simple-graph data model with attribute storage.

Node and edge ids are dense, never-reused integers handed out by monotone
counters; identifiers coming from files live in labels and attributes.  The
adjacency index is kept symmetric, so the structure always exposes the
underlying undirected simple graph even when the ``directed`` flag is set
(orientation is retained on the edge record for round-tripping only).

Two version counters are maintained: ``version`` increases on every
successful mutation, ``topology_version`` only when the node/edge structure
changes.  Attribute-only updates therefore never invalidate cached measures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, KeysView

from .errors import (
    DuplicateEdgeError,
    InvalidValueError,
    SelfLoopError,
    UnknownEdgeError,
    UnknownNodeError,
)

Scalar = int | float | str | bool

_UNSET = object()


@dataclass
class NodeRecord:
    id: int
    label: str
    attrs: dict[str, Scalar] = field(default_factory=dict)
    ts: float | None = None


@dataclass
class EdgeRecord:
    id: int
    u: int
    v: int
    weight: float = 1.0
    ts: float | None = None
    attrs: dict[str, Scalar] = field(default_factory=dict)

    def other(self, node: int) -> int:
        return self.v if node == self.u else self.u

    @property
    def pair(self) -> tuple[int, int]:
        return (self.u, self.v)


def _check_attrs(attrs: dict[str, Scalar] | None) -> dict[str, Scalar]:
    if attrs is None:
        return {}
    for key in attrs:
        if not isinstance(key, str) or not key:
            raise InvalidValueError(f"attribute keys must be nonempty strings, got {key!r}")
    return dict(attrs)


def _check_weight(weight) -> float:
    try:
        w = float(weight)
    except (TypeError, ValueError):
        raise InvalidValueError(f"edge weight must be numeric, got {weight!r}") from None
    if not math.isfinite(w):
        raise InvalidValueError(f"edge weight must be finite, got {weight!r}")
    return w


def _check_ts(ts) -> float | None:
    if ts is None:
        return None
    try:
        t = float(ts)
    except (TypeError, ValueError):
        raise InvalidValueError(f"timestamp must be numeric, got {ts!r}") from None
    if not math.isfinite(t):
        raise InvalidValueError(f"timestamp must be finite, got {ts!r}")
    return t


class Graph:
    """Simple graph: no self-loops, at most one edge per unordered node pair."""

    def __init__(self, directed: bool = False):
        self.directed = directed
        self.nodes: dict[int, NodeRecord] = {}
        self.edges: dict[int, EdgeRecord] = {}
        # node id -> {neighbour id: edge id}; symmetric by construction
        self.adj: dict[int, dict[int, int]] = {}
        self.meta: dict[str, Scalar] = {}
        self.version = 0
        self.topology_version = 0
        self._next_node_id = 0
        self._next_edge_id = 0

    # ---- introspection ---------------------------------------------------

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def has_node(self, nid: int) -> bool:
        try:
            return nid in self.nodes
        except TypeError:
            return False

    def require_node(self, nid: int) -> NodeRecord:
        try:
            return self.nodes[nid]
        except (KeyError, TypeError):
            raise UnknownNodeError(f"no node with id {nid!r}") from None

    def require_edge(self, eid: int) -> EdgeRecord:
        try:
            return self.edges[eid]
        except (KeyError, TypeError):
            raise UnknownEdgeError(f"no edge with id {eid!r}") from None

    def neighbors(self, nid: int) -> KeysView[int]:
        self.require_node(nid)
        return self.adj[nid].keys()

    def degree(self, nid: int) -> int:
        self.require_node(nid)
        return len(self.adj[nid])

    def edge_between(self, u: int, v: int) -> int | None:
        """Edge id joining u and v, or None.  Order of endpoints is irrelevant."""
        self.require_node(u)
        self.require_node(v)
        return self.adj[u].get(v)

    def has_edge(self, u: int, v: int) -> bool:
        return self.edge_between(u, v) is not None

    def incident_edges(self, nid: int) -> list[int]:
        self.require_node(nid)
        return sorted(self.adj[nid].values())

    def node_ids(self) -> list[int]:
        return sorted(self.nodes)

    def edge_ids(self) -> list[int]:
        return sorted(self.edges)

    def iter_edges(self) -> Iterator[EdgeRecord]:
        for eid in sorted(self.edges):
            yield self.edges[eid]

    def timestamped_edges(self) -> list[EdgeRecord]:
        return [e for e in self.iter_edges() if e.ts is not None]

    # ---- mutation ----------------------------------------------------------

    def _bump(self, topology: bool) -> None:
        self.version += 1
        if topology:
            self.topology_version += 1

    def add_node(self, label: str | None = None, attrs: dict | None = None,
                 ts=None) -> int:
        attrs = _check_attrs(attrs)
        ts = _check_ts(ts)
        nid = self._next_node_id
        self._next_node_id += 1
        if label is None:
            label = str(nid)
        self.nodes[nid] = NodeRecord(nid, str(label), attrs, ts)
        self.adj[nid] = {}
        self._bump(topology=True)
        return nid

    def add_edge(self, u: int, v: int, weight=1.0, ts=None,
                 attrs: dict | None = None) -> int:
        self.require_node(u)
        self.require_node(v)
        if u == v:
            raise SelfLoopError(f"self-loop on node {u} rejected")
        if v in self.adj[u]:
            raise DuplicateEdgeError(f"edge between {u} and {v} already exists")
        attrs = _check_attrs(attrs)
        weight = _check_weight(weight)
        ts = _check_ts(ts)
        eid = self._next_edge_id
        self._next_edge_id += 1
        self.edges[eid] = EdgeRecord(eid, u, v, weight, ts, attrs)
        self.adj[u][v] = eid
        self.adj[v][u] = eid
        self._bump(topology=True)
        return eid

    def delete_edge(self, eid: int) -> None:
        e = self.require_edge(eid)
        del self.adj[e.u][e.v]
        del self.adj[e.v][e.u]
        del self.edges[eid]
        self._bump(topology=True)

    def delete_node(self, nid: int) -> int:
        """Remove a node and all incident edges atomically.

        Returns the number of edges removed.
        """
        self.require_node(nid)
        incident = list(self.adj[nid].items())
        for nbr, eid in incident:
            del self.adj[nbr][nid]
            del self.edges[eid]
        del self.adj[nid]
        del self.nodes[nid]
        self._bump(topology=True)
        return len(incident)

    def update_node(self, nid: int, label: str | None = None,
                    attrs: dict | None = None, ts=_UNSET) -> None:
        """Merge attribute updates into a node.  A None attr value deletes the key."""
        rec = self.require_node(nid)
        if label is not None:
            rec.label = str(label)
        if attrs is not None:
            for key, val in _check_attrs({k: v for k, v in attrs.items() if v is not None}).items():
                rec.attrs[key] = val
            for key, val in attrs.items():
                if val is None:
                    rec.attrs.pop(key, None)
        if ts is not _UNSET:
            rec.ts = _check_ts(ts)
        self._bump(topology=False)

    def update_edge(self, eid: int, weight=None, attrs: dict | None = None,
                    ts=_UNSET) -> None:
        rec = self.require_edge(eid)
        if weight is not None:
            rec.weight = _check_weight(weight)
        if attrs is not None:
            for key, val in _check_attrs({k: v for k, v in attrs.items() if v is not None}).items():
                rec.attrs[key] = val
            for key, val in attrs.items():
                if val is None:
                    rec.attrs.pop(key, None)
        if ts is not _UNSET:
            rec.ts = _check_ts(ts)
        self._bump(topology=False)

    # ---- derived graphs ----------------------------------------------------

    def induced_subgraph(self, node_ids: Iterable[int]) -> "Graph":
        """New graph on the given nodes plus all edges among them.

        Fresh dense ids are assigned in ascending order of the original ids;
        originals are preserved in the ``source_id`` attribute.
        """
        ids = set(node_ids)
        for nid in ids:
            self.require_node(nid)
        keep_edges = [eid for eid, e in self.edges.items()
                      if e.u in ids and e.v in ids]
        return self.subgraph(ids, keep_edges)

    def subgraph(self, node_ids: Iterable[int], edge_ids: Iterable[int]) -> "Graph":
        """New graph from explicit kept node and edge sets.

        Every kept edge must join two kept nodes.
        """
        ids = set(node_ids)
        sub = Graph(self.directed)
        mapping: dict[int, int] = {}
        for old in sorted(ids):
            rec = self.require_node(old)
            mapping[old] = sub.add_node(
                label=rec.label,
                attrs={**rec.attrs, "source_id": old},
                ts=rec.ts,
            )
        for eid in sorted(set(edge_ids)):
            e = self.require_edge(eid)
            if e.u not in ids or e.v not in ids:
                raise UnknownNodeError(
                    f"edge {eid} endpoint outside the kept node set")
            sub.add_edge(mapping[e.u], mapping[e.v], weight=e.weight, ts=e.ts,
                         attrs={**e.attrs, "source_id": eid})
        return sub

    def copy(self) -> "Graph":
        g = Graph(self.directed)
        g.nodes = {nid: NodeRecord(r.id, r.label, dict(r.attrs), r.ts)
                   for nid, r in self.nodes.items()}
        g.edges = {eid: EdgeRecord(r.id, r.u, r.v, r.weight, r.ts, dict(r.attrs))
                   for eid, r in self.edges.items()}
        g.adj = {nid: dict(nbrs) for nid, nbrs in self.adj.items()}
        g.meta = dict(self.meta)
        g.version = self.version
        g.topology_version = self.topology_version
        g._next_node_id = self._next_node_id
        g._next_edge_id = self._next_edge_id
        return g

    @classmethod
    def from_parts(cls, directed: bool, nodes: Iterable[NodeRecord],
                   edges: Iterable[EdgeRecord], *,
                   version: int = 0, topology_version: int = 0,
                   next_node_id: int | None = None,
                   next_edge_id: int | None = None,
                   meta: dict | None = None) -> "Graph":
        """Rebuild a graph with explicit ids (workspace restore path)."""
        g = cls(directed)
        for rec in nodes:
            if rec.id in g.nodes:
                raise InvalidValueError(f"duplicate node id {rec.id}")
            g.nodes[rec.id] = rec
            g.adj[rec.id] = {}
        for rec in edges:
            if rec.id in g.edges:
                raise InvalidValueError(f"duplicate edge id {rec.id}")
            if rec.u not in g.nodes or rec.v not in g.nodes:
                raise UnknownNodeError(f"edge {rec.id} references a missing node")
            if rec.u == rec.v:
                raise SelfLoopError(f"self-loop on node {rec.u} rejected")
            if rec.v in g.adj[rec.u]:
                raise DuplicateEdgeError(
                    f"edge between {rec.u} and {rec.v} already exists")
            g.edges[rec.id] = rec
            g.adj[rec.u][rec.v] = rec.id
            g.adj[rec.v][rec.u] = rec.id
        g.version = version
        g.topology_version = topology_version
        g._next_node_id = (max(g.nodes) + 1 if g.nodes else 0) \
            if next_node_id is None else next_node_id
        g._next_edge_id = (max(g.edges) + 1 if g.edges else 0) \
            if next_edge_id is None else next_edge_id
        if meta:
            g.meta.update(meta)
        return g

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        kind = "directed" if self.directed else "undirected"
        return f"<Graph {kind} n={self.node_count} m={self.edge_count} v{self.version}>"


@dataclass
class Mutation:
    """One atomic change request against a graph.

    Kinds and payload keys:

    - ``insert-node``: label?, attrs?, ts?
    - ``insert-edge``: u, v, weight?, ts?, attrs?
    - ``delete-node``: id
    - ``delete-edge``: id
    - ``update-attrs``: target ("node"|"edge"), id, label?, attrs?, weight?, ts?
    - ``insert-subgraph``: nodes (list of node payloads),
      edges (list of {u, v, weight?, ts?} with indices into ``nodes``),
      attach (list of {node: existing id, to: index into ``nodes``})
    """

    kind: str
    payload: dict = field(default_factory=dict)

    KINDS = frozenset({
        "insert-node", "insert-edge", "delete-node", "delete-edge",
        "update-attrs", "insert-subgraph",
    })

    def to_json(self) -> dict:
        return {"kind": self.kind, **self.payload}

    @classmethod
    def from_json(cls, obj: dict) -> "Mutation":
        if not isinstance(obj, dict) or "kind" not in obj:
            raise InvalidValueError("mutation object must carry a 'kind' field")
        kind = obj["kind"]
        if kind not in cls.KINDS:
            raise InvalidValueError(f"unknown mutation kind {kind!r}")
        payload = {k: v for k, v in obj.items() if k != "kind"}
        return cls(kind, payload)
