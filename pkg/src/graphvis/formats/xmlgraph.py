"""GraphML and GEXF, restricted to flat node/edge lists with attributes.

Hierarchical graphs, dynamic spells, and viz extensions are out of scope.
Attribute declarations are typed; on write the type is inferred from the
values (mixed-type keys degrade to string).  Namespaced and namespace-free
documents both parse, since tags are matched by local name.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from xml.sax.saxutils import escape, quoteattr

from ..errors import ParseError
from ..graph import Graph, Scalar
from .common import locate, num

GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"
GEXF_NS = "http://gexf.net/1.3"

_TIME_NAMES = ("ts", "time", "timestamp")  # first match wins


def _root(text: str) -> ET.Element:
    try:
        return ET.fromstring(text)
    except ET.ParseError as exc:
        line, col = getattr(exc, "position", (1, 0))
        raise ParseError(str(exc), line, col + 1) from None


def _local(tag) -> str:
    return tag.rsplit("}", 1)[-1] if isinstance(tag, str) else ""


def _children(elem: ET.Element, name: str):
    return [c for c in elem if _local(c.tag) == name]


def _find(elem: ET.Element, name: str) -> ET.Element | None:
    kids = _children(elem, name)
    return kids[0] if kids else None


def _coerce(raw: str, typ: str, text: str) -> Scalar:
    try:
        if typ in ("int", "integer", "long"):
            return int(raw)
        if typ in ("float", "double"):
            return float(raw)
        if typ in ("bool", "boolean"):
            low = raw.strip().lower()
            if low in ("true", "1"):
                return True
            if low in ("false", "0"):
                return False
            raise ValueError(raw)
    except ValueError:
        raise ParseError(f"value {raw!r} does not fit type {typ}",
                         *locate(text, raw)) from None
    return raw


def _infer_type(values) -> str:
    vals = [v for v in values if v is not None]
    if vals and all(isinstance(v, bool) for v in vals):
        return "boolean"
    if all(isinstance(v, int) and not isinstance(v, bool) for v in vals):
        return "long"
    if all(isinstance(v, (int, float)) and not isinstance(v, bool)
           for v in vals):
        return "double"
    return "string"


def _to_text(v: Scalar) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return num(v)
    return str(v)


def _attr_decls(records) -> list[tuple[str, str]]:
    """Sorted (attr key, declared type) pairs over a record collection."""
    by_key: dict[str, list] = {}
    for rec in records:
        for k, v in rec.attrs.items():
            by_key.setdefault(k, []).append(v)
    return [(k, _infer_type(vs)) for k, vs in sorted(by_key.items())]


# ---- GraphML --------------------------------------------------------------------


def parse_graphml(text: str) -> Graph:
    root = _root(text)
    if _local(root.tag) != "graphml":
        raise ParseError(f"expected a graphml root, got {_local(root.tag)!r}",
                         1, 1)
    keys: dict[str, tuple[str, str, str]] = {}
    for key in _children(root, "key"):
        kid = key.get("id")
        if kid is None:
            raise ParseError("key element without id", *locate(text, "<key"))
        keys[kid] = (key.get("for", "all"),
                     key.get("attr.name", kid),
                     key.get("attr.type", "string"))
    graph = _find(root, "graph")
    if graph is None:
        raise ParseError("graphml without a graph element", 1, 1)
    g = Graph(directed=graph.get("edgedefault") == "directed")

    def read_data(elem) -> dict[str, Scalar]:
        out = {}
        for data in _children(elem, "data"):
            ref = data.get("key")
            if ref not in keys:
                raise ParseError(f"data references undeclared key {ref!r}",
                                 *locate(text, f'key="{ref}"'))
            _, name, typ = keys[ref]
            out[name] = _coerce(data.text or "", typ, text)
        return out

    by_ext: dict[str, int] = {}
    for node in _children(graph, "node"):
        ext = node.get("id")
        if ext is None:
            raise ParseError("node without id", *locate(text, "<node"))
        if ext in by_ext:
            raise ParseError(f"duplicate node id {ext!r}",
                             *locate(text, f'id="{ext}"'))
        data = read_data(node)
        label = data.pop("label", None)
        ts = None
        for name in _TIME_NAMES:
            if name in data:
                ts = data.pop(name)
                break
        by_ext[ext] = g.add_node(
            label=label if isinstance(label, str) else None,
            attrs=data, ts=ts)
    for edge in _children(graph, "edge"):
        s, t = edge.get("source"), edge.get("target")
        for ext in (s, t):
            if ext is None or ext not in by_ext:
                raise ParseError(f"edge endpoint {ext!r} is not a node id",
                                 *locate(text, f'"{ext}"'))
        u, v = by_ext[s], by_ext[t]
        if u == v or g.has_edge(u, v):
            continue
        data = read_data(edge)
        weight = data.pop("weight", 1.0)
        ts = None
        for name in _TIME_NAMES:
            if name in data:
                ts = data.pop(name)
                break
        g.add_edge(u, v, weight=weight, ts=ts, attrs=data)
    return g


def write_graphml(g: Graph) -> str:
    node_decls = _attr_decls(g.nodes.values())
    edge_decls = _attr_decls(g.edges.values())
    key_of_node = {k: f"dn{i}" for i, (k, _) in enumerate(node_decls)}
    key_of_edge = {k: f"de{i}" for i, (k, _) in enumerate(edge_decls)}
    out = ['<?xml version="1.0" encoding="UTF-8"?>',
           f'<graphml xmlns="{GRAPHML_NS}">',
           '  <key id="label" for="node" attr.name="label"'
           ' attr.type="string"/>',
           '  <key id="nts" for="node" attr.name="ts" attr.type="double"/>',
           '  <key id="weight" for="edge" attr.name="weight"'
           ' attr.type="double"/>',
           '  <key id="ets" for="edge" attr.name="ts" attr.type="double"/>']
    for (k, typ) in node_decls:
        out.append(f'  <key id="{key_of_node[k]}" for="node"'
                   f' attr.name={quoteattr(k)} attr.type="{typ}"/>')
    for (k, typ) in edge_decls:
        out.append(f'  <key id="{key_of_edge[k]}" for="edge"'
                   f' attr.name={quoteattr(k)} attr.type="{typ}"/>')
    kind = "directed" if g.directed else "undirected"
    out.append(f'  <graph edgedefault="{kind}">')
    for nid in sorted(g.nodes):
        rec = g.nodes[nid]
        out.append(f'    <node id="n{nid}">')
        out.append(f'      <data key="label">{escape(rec.label)}</data>')
        if rec.ts is not None:
            out.append(f'      <data key="nts">{num(rec.ts)}</data>')
        for k in sorted(rec.attrs):
            out.append(f'      <data key="{key_of_node[k]}">'
                       f'{escape(_to_text(rec.attrs[k]))}</data>')
        out.append('    </node>')
    for eid in sorted(g.edges):
        e = g.edges[eid]
        out.append(f'    <edge source="n{e.u}" target="n{e.v}">')
        if e.weight != 1.0:
            out.append(f'      <data key="weight">{num(e.weight)}</data>')
        if e.ts is not None:
            out.append(f'      <data key="ets">{num(e.ts)}</data>')
        for k in sorted(e.attrs):
            out.append(f'      <data key="{key_of_edge[k]}">'
                       f'{escape(_to_text(e.attrs[k]))}</data>')
        out.append('    </edge>')
    out.append('  </graph>')
    out.append('</graphml>')
    return "\n".join(out) + "\n"


# ---- GEXF -----------------------------------------------------------------------


def parse_gexf(text: str) -> Graph:
    root = _root(text)
    if _local(root.tag) != "gexf":
        raise ParseError(f"expected a gexf root, got {_local(root.tag)!r}",
                         1, 1)
    graph = _find(root, "graph")
    if graph is None:
        raise ParseError("gexf without a graph element", 1, 1)
    g = Graph(directed=graph.get("defaultedgetype") == "directed")

    decls: dict[str, dict[str, tuple[str, str]]] = {"node": {}, "edge": {}}
    for attrs in _children(graph, "attributes"):
        cls = attrs.get("class", "node")
        if cls not in decls:
            continue
        for attr in _children(attrs, "attribute"):
            aid = attr.get("id")
            if aid is None:
                raise ParseError("attribute without id",
                                 *locate(text, "<attribute"))
            decls[cls][aid] = (attr.get("title", aid),
                               attr.get("type", "string"))

    def read_attvalues(elem, cls) -> dict[str, Scalar]:
        out = {}
        holder = _find(elem, "attvalues")
        if holder is None:
            return out
        for av in _children(holder, "attvalue"):
            ref = av.get("for")
            if ref not in decls[cls]:
                raise ParseError(f"attvalue references undeclared id {ref!r}",
                                 *locate(text, f'for="{ref}"'))
            title, typ = decls[cls][ref]
            out[title] = _coerce(av.get("value", ""), typ, text)
        return out

    nodes_holder = _find(graph, "nodes")
    edges_holder = _find(graph, "edges")
    by_ext: dict[str, int] = {}
    for node in _children(nodes_holder, "node") if nodes_holder is not None else []:
        ext = node.get("id")
        if ext is None:
            raise ParseError("node without id", *locate(text, "<node"))
        if ext in by_ext:
            raise ParseError(f"duplicate node id {ext!r}",
                             *locate(text, f'id="{ext}"'))
        data = read_attvalues(node, "node")
        ts = None
        for name in _TIME_NAMES:
            if name in data:
                ts = data.pop(name)
                break
        by_ext[ext] = g.add_node(label=node.get("label"), attrs=data, ts=ts)
    for edge in _children(edges_holder, "edge") if edges_holder is not None else []:
        s, t = edge.get("source"), edge.get("target")
        for ext in (s, t):
            if ext is None or ext not in by_ext:
                raise ParseError(f"edge endpoint {ext!r} is not a node id",
                                 *locate(text, f'"{ext}"'))
        u, v = by_ext[s], by_ext[t]
        if u == v or g.has_edge(u, v):
            continue
        data = read_attvalues(edge, "edge")
        ts = None
        for name in _TIME_NAMES:
            if name in data:
                ts = data.pop(name)
                break
        weight = 1.0
        if edge.get("weight") is not None:
            raw = edge.get("weight")
            try:
                weight = float(raw)
            except ValueError:
                raise ParseError(f"bad edge weight {raw!r}",
                                 *locate(text, raw)) from None
        g.add_edge(u, v, weight=weight, ts=ts, attrs=data)
    return g


def write_gexf(g: Graph) -> str:
    node_decls = _attr_decls(g.nodes.values())
    edge_decls = _attr_decls(g.edges.values())
    kind = "directed" if g.directed else "undirected"
    out = ['<?xml version="1.0" encoding="UTF-8"?>',
           f'<gexf xmlns="{GEXF_NS}" version="1.3">',
           f'  <graph defaultedgetype="{kind}">']
    node_ids = {k: f"na{i}" for i, (k, _) in enumerate(node_decls)}
    edge_ids = {k: f"ea{i}" for i, (k, _) in enumerate(edge_decls)}
    out.append('    <attributes class="node">')
    out.append('      <attribute id="nts" title="ts" type="double"/>')
    for k, typ in node_decls:
        out.append(f'      <attribute id="{node_ids[k]}" title={quoteattr(k)}'
                   f' type="{typ}"/>')
    out.append('    </attributes>')
    out.append('    <attributes class="edge">')
    out.append('      <attribute id="ets" title="ts" type="double"/>')
    for k, typ in edge_decls:
        out.append(f'      <attribute id="{edge_ids[k]}" title={quoteattr(k)}'
                   f' type="{typ}"/>')
    out.append('    </attributes>')
    out.append('    <nodes>')
    for nid in sorted(g.nodes):
        rec = g.nodes[nid]
        head = f'      <node id="{nid}" label={quoteattr(rec.label)}'
        if rec.ts is None and not rec.attrs:
            out.append(head + "/>")
            continue
        out.append(head + ">")
        out.append('        <attvalues>')
        if rec.ts is not None:
            out.append(f'          <attvalue for="nts" value="{num(rec.ts)}"/>')
        for k in sorted(rec.attrs):
            out.append(f'          <attvalue for="{node_ids[k]}"'
                       f' value={quoteattr(_to_text(rec.attrs[k]))}/>')
        out.append('        </attvalues>')
        out.append('      </node>')
    out.append('    </nodes>')
    out.append('    <edges>')
    for eid in sorted(g.edges):
        e = g.edges[eid]
        head = f'      <edge id="{eid}" source="{e.u}" target="{e.v}"'
        if e.weight != 1.0:
            head += f' weight="{num(e.weight)}"'
        if e.ts is None and not e.attrs:
            out.append(head + "/>")
            continue
        out.append(head + ">")
        out.append('        <attvalues>')
        if e.ts is not None:
            out.append(f'          <attvalue for="ets" value="{num(e.ts)}"/>')
        for k in sorted(e.attrs):
            out.append(f'          <attvalue for="{edge_ids[k]}"'
                       f' value={quoteattr(_to_text(e.attrs[k]))}/>')
        out.append('        </attvalues>')
        out.append('      </edge>')
    out.append('    </edges>')
    out.append('  </graph>')
    out.append('</gexf>')
    return "\n".join(out) + "\n"
