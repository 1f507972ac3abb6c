"""GML reader/writer for the flat graph [ node/edge ] form.

Values are quoted strings or numbers; nested lists only where the format
expects them.  String escapes use backslash for quote and backslash.
Attribute keys survive when they are plain identifiers; other keys cannot
be expressed and are skipped on write.
"""

from __future__ import annotations

import re

from ..errors import ParseError
from ..graph import Graph, Scalar
from .common import num

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<comment>\#[^\n]*)
  | (?P<open>\[)
  | (?P<close>\])
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<number>[-+]?(?:\d+\.\d*|\.\d+|\d+)(?:[eE][-+]?\d+)?)
  | (?P<key>[A-Za-z_][A-Za-z0-9_]*)
""", re.VERBOSE)

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


def _tokenize(text: str):
    pos = 0
    line = 1
    line_start = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}",
                             line, pos - line_start + 1)
        kind = m.lastgroup
        tok = m.group()
        if kind not in ("ws", "comment"):
            out.append((kind, tok, line, m.start() - line_start + 1))
        nl = tok.count("\n")
        if nl:
            line += nl
            line_start = m.start() + tok.rindex("\n") + 1
        pos = m.end()
    return out


def _unescape(s: str) -> str:
    return s[1:-1].replace('\\"', '"').replace("\\\\", "\\")


def _parse_list(tokens, i, depth):
    """Parse key/value pairs until a closing bracket; returns (pairs, next)."""
    pairs = []
    while i < len(tokens):
        kind, tok, line, col = tokens[i]
        if kind == "close":
            return pairs, i + 1
        if kind != "key":
            raise ParseError(f"expected a key, got {tok!r}", line, col)
        if i + 1 >= len(tokens):
            raise ParseError(f"key {tok!r} has no value", line, col)
        vkind, vtok, vline, vcol = tokens[i + 1]
        if vkind == "open":
            sub, i = _parse_list(tokens, i + 2, depth + 1)
            pairs.append((tok, sub, line, col))
        elif vkind == "string":
            pairs.append((tok, _unescape(vtok), line, col))
            i += 2
        elif vkind == "number":
            val = float(vtok)
            if val.is_integer() and "." not in vtok and "e" not in vtok.lower():
                val = int(val)
            pairs.append((tok, val, line, col))
            i += 2
        else:
            raise ParseError(f"bad value for key {tok!r}", vline, vcol)
    if depth > 0:
        last = tokens[-1] if tokens else ("", "", 1, 1)
        raise ParseError("unclosed bracket", last[2], last[3])
    return pairs, i


def parse(text: str) -> Graph:
    tokens = _tokenize(text)
    top, _ = _parse_list(tokens, 0, 0)
    graph_pairs = None
    for key, val, line, col in top:
        if key == "graph":
            if not isinstance(val, list):
                raise ParseError("graph must open a bracket list", line, col)
            graph_pairs = val
            break
    if graph_pairs is None:
        raise ParseError("no graph [ ... ] block found", 1, 1)

    directed = False
    g = Graph()
    gml_to_id: dict[int, int] = {}
    edges = []
    for key, val, line, col in graph_pairs:
        if key == "directed" and isinstance(val, int):
            directed = bool(val)
        elif key == "node":
            if not isinstance(val, list):
                raise ParseError("node must open a bracket list", line, col)
            fields = {k: v for k, v, _, _ in val}
            if "id" not in fields or not isinstance(fields["id"], int):
                raise ParseError("node needs an integer id", line, col)
            gid = fields["id"]
            if gid in gml_to_id:
                raise ParseError(f"duplicate node id {gid}", line, col)
            label = fields.get("label")
            attrs = {k: v for k, v in fields.items()
                     if k not in ("id", "label", "ts") and not isinstance(v, list)}
            gml_to_id[gid] = g.add_node(
                label=label if isinstance(label, str) else None,
                attrs=attrs, ts=fields.get("ts"))
        elif key == "edge":
            if not isinstance(val, list):
                raise ParseError("edge must open a bracket list", line, col)
            edges.append((val, line, col))
    g.directed = directed
    for val, line, col in edges:
        fields = {k: v for k, v, _, _ in val}
        for endpoint in ("source", "target"):
            if endpoint not in fields or not isinstance(fields[endpoint], int):
                raise ParseError(f"edge needs an integer {endpoint}", line, col)
            if fields[endpoint] not in gml_to_id:
                raise ParseError(
                    f"edge {endpoint} {fields[endpoint]} is not a node id",
                    line, col)
        u = gml_to_id[fields["source"]]
        v = gml_to_id[fields["target"]]
        if u == v or g.has_edge(u, v):
            continue
        attrs = {k: v for k, v in fields.items()
                 if k not in ("source", "target", "weight", "ts")
                 and not isinstance(v, list)}
        g.add_edge(u, v, weight=fields.get("weight", 1.0),
                   ts=fields.get("ts"), attrs=attrs)
    return g


def _value(v: Scalar) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, (int, float)):
        # floats keep their decimal point so the type survives a reread
        return repr(v) if isinstance(v, float) else str(v)
    escaped = str(v).replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def _attr_lines(attrs: dict, indent: str) -> list[str]:
    out = []
    for key in sorted(attrs):
        if _IDENT.match(key) and key not in ("id", "label", "source",
                                             "target", "weight", "ts"):
            out.append(f"{indent}{key} {_value(attrs[key])}")
    return out


def write(g: Graph) -> str:
    out = ["graph ["]
    out.append(f"  directed {1 if g.directed else 0}")
    for nid in sorted(g.nodes):
        rec = g.nodes[nid]
        out.append("  node [")
        out.append(f"    id {nid}")
        out.append(f"    label {_value(rec.label)}")
        if rec.ts is not None:
            out.append(f"    ts {num(rec.ts)}")
        out.extend(_attr_lines(rec.attrs, "    "))
        out.append("  ]")
    for eid in sorted(g.edges):
        e = g.edges[eid]
        out.append("  edge [")
        out.append(f"    source {e.u}")
        out.append(f"    target {e.v}")
        if e.weight != 1.0:
            out.append(f"    weight {num(e.weight)}")
        if e.ts is not None:
            out.append(f"    ts {num(e.ts)}")
        out.extend(_attr_lines(e.attrs, "    "))
        out.append("  ]")
    out.append("]")
    return "\n".join(out) + "\n"
