"""MatrixMarket coordinate files read as adjacency matrices.

Symmetric and general symmetries both collapse to undirected edges;
diagonal entries are dropped.  Node labels ride along in ``%label i text``
comment lines so a write/parse cycle keeps them.
"""

from __future__ import annotations

from ..errors import ParseError
from ..graph import Graph
from .common import num, parse_number

_BANNER = "%%matrixmarket"


def parse(text: str) -> Graph:
    lines = text.splitlines()
    if not lines or not lines[0].lower().startswith(_BANNER):
        raise ParseError("missing MatrixMarket banner", 1, 1)
    banner = lines[0].split()
    if len(banner) < 5:
        raise ParseError("banner needs object/format/field/symmetry", 1, 1)
    obj, fmt, field, symmetry = (w.lower() for w in banner[1:5])
    if obj != "matrix" or fmt != "coordinate":
        raise ParseError(f"unsupported MatrixMarket type {obj} {fmt}", 1, 1)
    if field not in ("pattern", "real", "integer", "double"):
        raise ParseError(f"unsupported field type {field!r}", 1, 1)
    if symmetry not in ("symmetric", "general"):
        raise ParseError(f"unsupported symmetry {symmetry!r}", 1, 1)
    values = field != "pattern"

    labels: dict[int, str] = {}
    size: tuple[int, int, int] | None = None
    g = Graph()
    ids: list[int] = []
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("%"):
            parts = line[1:].split(None, 2)
            if len(parts) >= 3 and parts[0] == "label" and parts[1].isdigit():
                labels[int(parts[1])] = parts[2]
            continue
        cols = line.split()
        col0 = raw.index(cols[0]) + 1
        if size is None:
            if len(cols) != 3:
                raise ParseError("size line needs rows cols nnz", lineno, col0)
            try:
                rows, ncols, nnz = (int(c) for c in cols)
            except ValueError:
                raise ParseError("size line must be integers",
                                 lineno, col0) from None
            if rows != ncols:
                raise ParseError("adjacency matrix must be square",
                                 lineno, col0)
            size = (rows, ncols, nnz)
            for i in range(1, rows + 1):
                ids.append(g.add_node(label=labels.get(i)))
            continue
        want = 3 if values else 2
        if len(cols) != want:
            raise ParseError(f"entry needs {want} fields, got {len(cols)}",
                             lineno, col0)
        try:
            i, j = int(cols[0]), int(cols[1])
        except ValueError:
            raise ParseError("entry indices must be integers",
                             lineno, col0) from None
        n = size[0]
        if not (1 <= i <= n and 1 <= j <= n):
            raise ParseError(f"entry ({i}, {j}) outside {n}x{n} matrix",
                             lineno, col0)
        if i == j:
            continue  # diagonal has no edge meaning
        w = 1.0
        if values:
            w = parse_number(cols[2], lineno, col0, "entry value")
        u, v = ids[i - 1], ids[j - 1]
        if not g.has_edge(u, v):
            g.add_edge(u, v, weight=w)
    if size is None:
        raise ParseError("missing size line", len(lines), 1)
    return g


def write(g: Graph) -> str:
    weighted = any(e.weight != 1.0 for e in g.edges.values())
    field = "real" if weighted else "pattern"
    order = sorted(g.nodes)
    index = {nid: i + 1 for i, nid in enumerate(order)}
    out = [f"%%MatrixMarket matrix coordinate {field} symmetric"]
    for nid in order:
        out.append(f"%label {index[nid]} {g.nodes[nid].label}")
    n = len(order)
    out.append(f"{n} {n} {g.edge_count}")
    entries = []
    for e in g.edges.values():
        i, j = index[e.u], index[e.v]
        if i < j:  # symmetric storage keeps the lower triangle
            i, j = j, i
        entries.append((i, j, e.weight))
    for i, j, w in sorted(entries):
        out.append(f"{i} {j} {num(w)}" if weighted else f"{i} {j}")
    return "\n".join(out) + "\n"
