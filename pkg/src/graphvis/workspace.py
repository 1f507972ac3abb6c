"""Workspace persistence: every open graph in one self-contained JSON file.

Unlike the interchange formats, this serialization is lossless: internal ids,
both version counters, the id allocators, and graph meta all survive a
round-trip, so measures recomputed after a load agree with the session that
saved the file.
"""

from __future__ import annotations

import json
from typing import Any

from .errors import WorkspaceFormatError
from .graph import EdgeRecord, Graph, NodeRecord

FORMAT_NAME = "graphvis-workspace"
FORMAT_VERSION = 1


def graph_to_json(g: Graph) -> dict:
    nodes = []
    for nid in sorted(g.nodes):
        rec = g.nodes[nid]
        nodes.append({"id": rec.id, "label": rec.label, "ts": rec.ts,
                      "attrs": rec.attrs})
    edges = []
    for eid in sorted(g.edges):
        rec = g.edges[eid]
        edges.append({"id": rec.id, "u": rec.u, "v": rec.v,
                      "weight": rec.weight, "ts": rec.ts, "attrs": rec.attrs})
    return {
        "directed": g.directed,
        "version": g.version,
        "topology_version": g.topology_version,
        "next_node_id": g._next_node_id,
        "next_edge_id": g._next_edge_id,
        "meta": g.meta,
        "nodes": nodes,
        "edges": edges,
    }


def _require(obj: dict, key: str, types, where: str):
    if key not in obj:
        raise WorkspaceFormatError(f"{where} is missing {key!r}")
    val = obj[key]
    if not isinstance(val, types) or isinstance(val, bool) and bool not in _tup(types):
        raise WorkspaceFormatError(f"{where} field {key!r} has the wrong type")
    return val


def _tup(types):
    return types if isinstance(types, tuple) else (types,)


def graph_from_json(obj: Any) -> Graph:
    if not isinstance(obj, dict):
        raise WorkspaceFormatError("graph entry must be an object")
    directed = _require(obj, "directed", bool, "graph")
    nodes = []
    for raw in _require(obj, "nodes", list, "graph"):
        if not isinstance(raw, dict):
            raise WorkspaceFormatError("node entry must be an object")
        nodes.append(NodeRecord(
            id=_require(raw, "id", int, "node"),
            label=_require(raw, "label", str, "node"),
            ts=raw.get("ts"),
            attrs=dict(raw.get("attrs") or {}),
        ))
    edges = []
    for raw in _require(obj, "edges", list, "graph"):
        if not isinstance(raw, dict):
            raise WorkspaceFormatError("edge entry must be an object")
        edges.append(EdgeRecord(
            id=_require(raw, "id", int, "edge"),
            u=_require(raw, "u", int, "edge"),
            v=_require(raw, "v", int, "edge"),
            weight=float(raw.get("weight", 1.0)),
            ts=raw.get("ts"),
            attrs=dict(raw.get("attrs") or {}),
        ))
    try:
        return Graph.from_parts(
            directed, nodes, edges,
            version=_require(obj, "version", int, "graph"),
            topology_version=_require(obj, "topology_version", int, "graph"),
            next_node_id=obj.get("next_node_id"),
            next_edge_id=obj.get("next_edge_id"),
            meta=obj.get("meta") or {},
        )
    except WorkspaceFormatError:
        raise
    except Exception as exc:  # structural damage (dup ids, bad endpoints)
        raise WorkspaceFormatError(f"graph entry is not reloadable: {exc}") from exc


def _layout_to_json(layout: dict[int, tuple[float, float]] | None):
    if layout is None:
        return None
    return {str(nid): [x, y] for nid, (x, y) in sorted(layout.items())}


def _layout_from_json(raw: Any, g: Graph):
    if raw is None:
        return None
    if not isinstance(raw, dict):
        raise WorkspaceFormatError("layout must be an object or null")
    out = {}
    for key, pair in raw.items():
        try:
            nid = int(key)
        except ValueError:
            raise WorkspaceFormatError(f"layout key {key!r} is not a node id") from None
        if not (isinstance(pair, list) and len(pair) == 2):
            raise WorkspaceFormatError("layout positions must be [x, y] pairs")
        if not g.has_node(nid):
            raise WorkspaceFormatError(f"layout references unknown node {nid}")
        out[nid] = (float(pair[0]), float(pair[1]))
    return out


def dump_workspace(graphs: dict[str, dict], settings: dict,
                   saved_views: list[dict]) -> bytes:
    """Serialize the open session.

    ``graphs`` maps graph-id to {"graph": Graph, "meta": dict, "layout": ...};
    caches are rebuilt on load rather than persisted.
    """
    doc = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "settings": settings,
        "saved_views": saved_views,
        "graphs": {
            gid: {
                "meta": entry["meta"],
                "graph": graph_to_json(entry["graph"]),
                "layout": _layout_to_json(entry.get("layout")),
            }
            for gid, entry in sorted(graphs.items())
        },
    }
    return json.dumps(doc, indent=2, sort_keys=True).encode("utf-8")


def load_workspace(data: bytes) -> dict:
    """Parse a workspace file back into plain session parts.

    Returns {"graphs": {gid: {"graph", "meta", "layout"}}, "settings",
    "saved_views"}.  Any structural problem raises WorkspaceFormatError;
    partial loads are never returned.
    """
    try:
        doc = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise WorkspaceFormatError(f"workspace file is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format") != FORMAT_NAME:
        raise WorkspaceFormatError("not a workspace file")
    if doc.get("version") != FORMAT_VERSION:
        raise WorkspaceFormatError(f"unsupported workspace version {doc.get('version')!r}")
    settings = doc.get("settings", {})
    if not isinstance(settings, dict):
        raise WorkspaceFormatError("settings must be an object")
    views = doc.get("saved_views", [])
    if not isinstance(views, list):
        raise WorkspaceFormatError("saved_views must be a list")
    raw_graphs = doc.get("graphs", {})
    if not isinstance(raw_graphs, dict):
        raise WorkspaceFormatError("graphs must be an object")
    graphs = {}
    for gid, entry in raw_graphs.items():
        if not isinstance(entry, dict):
            raise WorkspaceFormatError(f"graph entry {gid!r} must be an object")
        g = graph_from_json(entry.get("graph"))
        meta = entry.get("meta") or {}
        if not isinstance(meta, dict):
            raise WorkspaceFormatError(f"meta for {gid!r} must be an object")
        graphs[gid] = {
            "graph": g,
            "meta": meta,
            "layout": _layout_from_json(entry.get("layout"), g),
        }
    return {"graphs": graphs, "settings": settings, "saved_views": views}
