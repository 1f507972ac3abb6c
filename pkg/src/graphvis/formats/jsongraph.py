"""Node-link JSON: the only dialect here that keeps every attribute.

Shape:

    {"directed": false,
     "nodes": [{"id": 0, "label": "a", "ts": 3.0, "attrs": {...}}, ...],
     "links": [{"source": 0, "target": 1, "weight": 2.0, "ts": 4.0,
                "attrs": {...}}, ...]}

``ts`` and ``attrs`` are omitted when empty.  Source/target reference node
ids from the same document.
"""

from __future__ import annotations

import json

from ..errors import ParseError
from ..graph import Graph
from .common import locate


def parse(text: str) -> Graph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object", 1, 1)
    nodes = doc.get("nodes")
    links = doc.get("links", [])
    if not isinstance(nodes, list):
        raise ParseError('missing "nodes" array', 1, 1)
    if not isinstance(links, list):
        raise ParseError('"links" must be an array', *locate(text, '"links"'))

    g = Graph(directed=bool(doc.get("directed", False)))
    by_id: dict = {}
    for spec in nodes:
        if not isinstance(spec, dict) or "id" not in spec:
            raise ParseError("every node needs an id", *locate(text, '"nodes"'))
        ext = spec["id"]
        if not isinstance(ext, (int, str)) or isinstance(ext, bool):
            raise ParseError(f"node id {ext!r} must be an integer or string",
                             *locate(text, json.dumps(ext)))
        if ext in by_id:
            raise ParseError(f"duplicate node id {ext!r}",
                             *locate(text, json.dumps(ext)))
        label = spec.get("label")
        if label is None and isinstance(ext, str):
            label = ext
        by_id[ext] = g.add_node(
            label=label if isinstance(label, str) else None,
            attrs=spec.get("attrs"), ts=spec.get("ts"))
    for spec in links:
        if not isinstance(spec, dict) or "source" not in spec \
                or "target" not in spec:
            raise ParseError("every link needs source and target",
                             *locate(text, '"links"'))
        s, t = spec["source"], spec["target"]
        for ext in (s, t):
            if ext not in by_id:
                raise ParseError(f"link endpoint {ext!r} is not a node id",
                                 *locate(text, json.dumps(ext)))
        u, v = by_id[s], by_id[t]
        if u == v or g.has_edge(u, v):
            continue
        g.add_edge(u, v, weight=spec.get("weight", 1.0), ts=spec.get("ts"),
                   attrs=spec.get("attrs"))
    return g


def write(g: Graph) -> str:
    nodes = []
    for nid in sorted(g.nodes):
        rec = g.nodes[nid]
        spec: dict = {"id": nid, "label": rec.label}
        if rec.ts is not None:
            spec["ts"] = rec.ts
        if rec.attrs:
            spec["attrs"] = rec.attrs
        nodes.append(spec)
    links = []
    for eid in sorted(g.edges):
        e = g.edges[eid]
        # id is informational (parsers renumber); clients use it to key
        # edge measures onto rendered links
        spec = {"id": eid, "source": e.u, "target": e.v}
        if e.weight != 1.0:
            spec["weight"] = e.weight
        if e.ts is not None:
            spec["ts"] = e.ts
        if e.attrs:
            spec["attrs"] = e.attrs
        links.append(spec)
    doc = {"directed": g.directed, "nodes": nodes, "links": links}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
