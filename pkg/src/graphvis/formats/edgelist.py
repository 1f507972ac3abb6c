"""Delimited edge lists: whitespace (txt), comma (csv), and tab (tsv).

Column convention: two endpoint tokens, optional numeric weight, optional
numeric timestamp.  A header row is recognized by vocabulary (source/target
and friends) and may reorder the optional columns.  Lines starting with
``%`` or ``#`` are comments; a line holding a single token is an isolated
node.  Endpoint tokens are opaque keys preserved as node labels.
"""

from __future__ import annotations

import re

from ..errors import ParseError
from ..graph import Graph
from .common import num, parse_number, token_safe_labels

_SRC_WORDS = {"source", "src", "from", "u", "node1", "id1", "tail"}
_DST_WORDS = {"target", "dst", "to", "v", "node2", "id2", "head"}
_WEIGHT_WORDS = {"weight", "w", "value"}
_TIME_WORDS = {"time", "timestamp", "ts", "date", "epoch"}


def _fields(line: str, delim: str | None, lineno: int) -> list[tuple[str, int]]:
    """Split one line into (token, 1-based column) pairs."""
    out = []
    if delim is None:
        for m in re.finditer(r"\S+", line):
            out.append((m.group(), m.start() + 1))
        return out
    pos = 0
    for part in line.split(delim):
        stripped = part.strip()
        lead = len(part) - len(part.lstrip())
        out.append((stripped, pos + lead + 1))
        pos += len(part) + len(delim)
    # a fully empty line yields one empty field; treat as no fields
    if len(out) == 1 and out[0][0] == "":
        return []
    return out


def _header_roles(fields: list[tuple[str, int]]) -> list[str] | None:
    """Column roles when the first row is a recognized header, else None."""
    if len(fields) < 2:
        return None
    names = [f[0].lower() for f in fields]
    if names[0] not in _SRC_WORDS or names[1] not in _DST_WORDS:
        return None
    roles = ["source", "target"]
    for name in names[2:]:
        if name in _WEIGHT_WORDS:
            roles.append("weight")
        elif name in _TIME_WORDS:
            roles.append("ts")
        else:
            roles.append("ignore")
    return roles


def parse(text: str, delim: str | None) -> Graph:
    g = Graph()
    key_to_id: dict[str, int] = {}

    def node_for(token: str) -> int:
        if token not in key_to_id:
            key_to_id[token] = g.add_node(label=token)
        return key_to_id[token]

    roles: list[str] | None = None
    saw_data = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\r")
        if not line.strip():
            continue
        if line.lstrip()[0] in "%#":
            continue
        fields = _fields(line, delim, lineno)
        if not fields:
            continue
        if not saw_data:
            saw_data = True
            header = _header_roles(fields)
            if header is not None:
                roles = header
                continue
        if len(fields) == 1:
            node_for(fields[0][0])
            continue
        if roles is None:
            roles = ["source", "target", "weight", "ts"]
        if len(fields) > len(roles):
            tok, col = fields[len(roles)]
            raise ParseError(f"unexpected extra column {tok!r}", lineno, col)
        row = {}
        for (tok, col), role in zip(fields, roles):
            if role == "ignore" or tok == "":
                continue
            if role in ("weight", "ts"):
                row[role] = parse_number(tok, lineno, col, role)
            else:
                row[role] = tok
        if "target" not in row:
            raise ParseError("edge row needs two endpoints",
                             lineno, fields[0][1])
        u = node_for(row["source"])
        v = node_for(row["target"])
        if u == v:
            continue  # self-loops have no place in a simple graph
        if g.has_edge(u, v):
            continue  # duplicates merged, first occurrence wins
        g.add_edge(u, v, weight=row.get("weight", 1.0), ts=row.get("ts"))
    return g


def write(g: Graph, delim: str | None) -> str:
    sep = delim if delim is not None else " "
    use_labels = token_safe_labels(g, forbidden=delim or "")
    tokens = {nid: (rec.label if use_labels else str(nid))
              for nid, rec in g.nodes.items()}
    with_ts = bool(g.edges) and all(e.ts is not None for e in g.edges.values())
    with_weight = with_ts or any(e.weight != 1.0 for e in g.edges.values())
    lines = []
    if delim is not None:
        header = ["source", "target"]
        if with_weight:
            header.append("weight")
        if with_ts:
            header.append("time")
        lines.append(sep.join(header))
    for eid in sorted(g.edges):
        e = g.edges[eid]
        row = [tokens[e.u], tokens[e.v]]
        if with_weight:
            row.append(num(e.weight))
        if with_ts:
            row.append(num(e.ts))
        lines.append(sep.join(row))
    for nid in sorted(g.nodes):
        if not g.adj[nid]:
            lines.append(tokens[nid])
    return "\n".join(lines) + "\n" if lines else ""
