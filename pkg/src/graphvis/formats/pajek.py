"""Pajek .net files: *Vertices with quoted labels, *Edges / *Arcs sections.

Vertex numbering is 1-based and dense.  Coordinates after the label are
tolerated and ignored.  Timestamps and attributes have no representation
here and are dropped on write.
"""

from __future__ import annotations

import re

from ..errors import ParseError
from ..graph import Graph
from .common import num, parse_number

_VERTEX = re.compile(
    r'\s*(\d+)(?:\s+"(?P<quoted>(?:[^"\\]|\\.)*)"|\s+(?P<bare>\S+))?')


def parse(text: str) -> Graph:
    g = Graph()
    ids: list[int] = []
    n = 0
    section = None
    labeled: set[int] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\r")
        stripped = line.strip()
        if not stripped or stripped.startswith("%"):
            continue
        if stripped.startswith("*"):
            word = stripped.split()[0].lower()
            if word == "*vertices":
                parts = stripped.split()
                if len(parts) < 2 or not parts[1].isdigit():
                    raise ParseError("*Vertices needs a count", lineno,
                                     line.index("*") + 1)
                n = int(parts[1])
                ids = [g.add_node(label=str(i + 1)) for i in range(n)]
                section = "vertices"
            elif word in ("*edges", "*arcs"):
                if section is None:
                    raise ParseError("edge section before *Vertices", lineno,
                                     line.index("*") + 1)
                g.directed = g.directed or word == "*arcs"
                section = "edges"
            else:
                raise ParseError(f"unknown section {word!r}", lineno,
                                 line.index("*") + 1)
            continue
        if section == "vertices":
            m = _VERTEX.match(line)
            if not m:
                raise ParseError("vertex line needs an index", lineno,
                                 len(line) - len(line.lstrip()) + 1)
            idx = int(m.group(1))
            if not 1 <= idx <= n:
                raise ParseError(f"vertex index {idx} outside 1..{n}",
                                 lineno, m.start(1) + 1)
            if idx in labeled:
                raise ParseError(f"vertex {idx} defined twice",
                                 lineno, m.start(1) + 1)
            labeled.add(idx)
            label = m.group("quoted")
            if label is not None:
                label = label.replace('\\"', '"').replace("\\\\", "\\")
            else:
                label = m.group("bare")
            if label is not None:
                g.update_node(ids[idx - 1], label=label)
        elif section == "edges":
            cols = line.split()
            col0 = raw.index(cols[0]) + 1
            if len(cols) < 2:
                raise ParseError("edge line needs two endpoints", lineno, col0)
            try:
                i, j = int(cols[0]), int(cols[1])
            except ValueError:
                raise ParseError("endpoints must be vertex numbers",
                                 lineno, col0) from None
            if not (1 <= i <= n and 1 <= j <= n):
                raise ParseError(f"edge ({i}, {j}) outside 1..{n}",
                                 lineno, col0)
            w = 1.0
            if len(cols) >= 3:
                w = parse_number(cols[2], lineno, col0, "edge weight")
            u, v = ids[i - 1], ids[j - 1]
            if u != v and not g.has_edge(u, v):
                g.add_edge(u, v, weight=w)
        else:
            raise ParseError("data before any section header", lineno, 1)
    if section is None:
        raise ParseError("no *Vertices section found", 1, 1)
    return g


def write(g: Graph) -> str:
    order = sorted(g.nodes)
    index = {nid: i + 1 for i, nid in enumerate(order)}
    out = [f"*Vertices {len(order)}"]
    for nid in order:
        label = g.nodes[nid].label.replace("\\", "\\\\").replace('"', '\\"')
        out.append(f'{index[nid]} "{label}"')
    out.append("*Arcs" if g.directed else "*Edges")
    weighted = any(e.weight != 1.0 for e in g.edges.values())
    for eid in sorted(g.edges):
        e = g.edges[eid]
        row = f"{index[e.u]} {index[e.v]}"
        out.append(f"{row} {num(e.weight)}" if weighted else row)
    return "\n".join(out) + "\n"
