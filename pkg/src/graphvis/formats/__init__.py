"""Format registry: identifiers, detection, and parse/write dispatch.

Detection trusts a recognized file extension first and sniffs content
otherwise.  All text I/O is UTF-8; parse errors always carry a line and
column.
"""

from __future__ import annotations

import os
import re

from ..errors import GraphVisError, ParseError, UnknownFormatError
from ..graph import Graph
from . import edgelist, gml, jsongraph, mtx, pajek, xmlgraph
from .common import decode
from .svg import StyleSpec, export_svg

EDGELIST_TXT = "edgelist-txt"
EDGELIST_CSV = "edgelist-csv"
EDGELIST_TSV = "edgelist-tsv"
MTX = "mtx"
GEXF = "gexf"
GRAPHML = "graphml"
GML = "gml"
JSON = "json"
PAJEK = "pajek"

FORMAT_IDS = (EDGELIST_TXT, EDGELIST_CSV, EDGELIST_TSV, MTX, GEXF, GRAPHML,
              GML, JSON, PAJEK)

EXTENSIONS = {
    ".txt": EDGELIST_TXT,
    ".edges": EDGELIST_TXT,
    ".edgelist": EDGELIST_TXT,
    ".csv": EDGELIST_CSV,
    ".tsv": EDGELIST_TSV,
    ".mtx": MTX,
    ".gexf": GEXF,
    ".graphml": GRAPHML,
    ".gml": GML,
    ".json": JSON,
    ".net": PAJEK,
    ".pajek": PAJEK,
}

CANONICAL_EXTENSION = {
    EDGELIST_TXT: ".txt",
    EDGELIST_CSV: ".csv",
    EDGELIST_TSV: ".tsv",
    MTX: ".mtx",
    GEXF: ".gexf",
    GRAPHML: ".graphml",
    GML: ".gml",
    JSON: ".json",
    PAJEK: ".net",
}

_PARSERS = {
    EDGELIST_TXT: lambda t: edgelist.parse(t, None),
    EDGELIST_CSV: lambda t: edgelist.parse(t, ","),
    EDGELIST_TSV: lambda t: edgelist.parse(t, "\t"),
    MTX: mtx.parse,
    GEXF: xmlgraph.parse_gexf,
    GRAPHML: xmlgraph.parse_graphml,
    GML: gml.parse,
    JSON: jsongraph.parse,
    PAJEK: pajek.parse,
}

_WRITERS = {
    EDGELIST_TXT: lambda g: edgelist.write(g, None),
    EDGELIST_CSV: lambda g: edgelist.write(g, ","),
    EDGELIST_TSV: lambda g: edgelist.write(g, "\t"),
    MTX: mtx.write,
    GEXF: xmlgraph.write_gexf,
    GRAPHML: xmlgraph.write_graphml,
    GML: gml.write,
    JSON: jsongraph.write,
    PAJEK: pajek.write,
}

_XML_TAG = re.compile(r"<\s*([A-Za-z_][\w.:-]*)")


def _first_xml_tag(text: str) -> str | None:
    pos = 0
    while True:
        idx = text.find("<", pos)
        if idx < 0:
            return None
        rest = text[idx:idx + 2]
        if rest in ("<?", "<!"):
            pos = idx + 1
            continue
        m = _XML_TAG.match(text, idx)
        return m.group(1).rsplit(":", 1)[-1].lower() if m else None


def detect_format(filename: str, head: bytes | str) -> str:
    """Identify one of the nine formats from a name and content sample."""
    if isinstance(head, str):
        head_bytes = head.encode("utf-8")
    else:
        head_bytes = head
    if not head_bytes:
        raise UnknownFormatError("empty input")
    ext = os.path.splitext(filename or "")[1].lower()
    if ext in EXTENSIONS:
        return EXTENSIONS[ext]
    if b"\x00" in head_bytes:
        raise UnknownFormatError("binary data is not a supported graph format")
    try:
        text = head_bytes.decode("utf-8", errors="strict")
    except UnicodeDecodeError:
        # a sample may end mid-codepoint; retry without the tail bytes
        try:
            text = head_bytes[:-3].decode("utf-8", errors="strict")
        except UnicodeDecodeError:
            raise UnknownFormatError("input is not UTF-8 text") from None
    stripped = text.lstrip("﻿ \t\r\n")
    if not stripped:
        raise UnknownFormatError("input holds no content")
    low = stripped.lower()
    if low.startswith("%%matrixmarket"):
        return MTX
    if stripped.startswith("<"):
        tag = _first_xml_tag(stripped)
        if tag == "gexf":
            return GEXF
        if tag == "graphml":
            return GRAPHML
        raise UnknownFormatError(f"unrecognized XML document ({tag!r} root)")
    if stripped.startswith("{"):
        return JSON
    lines = [ln.strip() for ln in stripped.splitlines()]
    data_lines = [ln for ln in lines if ln and not ln.startswith(("%", "#"))]
    if data_lines and data_lines[0].lower().startswith("*vertices"):
        return PAJEK
    if re.search(r"(?:^|\n)\s*graph\s*\[", text):
        return GML
    probe = data_lines[0] if data_lines else ""
    if "\t" in probe:
        return EDGELIST_TSV
    if "," in probe:
        return EDGELIST_CSV
    return EDGELIST_TXT


def parse(data: bytes | str, fmt: str) -> Graph:
    if fmt not in _PARSERS:
        raise UnknownFormatError(f"unknown format id {fmt!r}")
    text = decode(data)
    try:
        return _PARSERS[fmt](text)
    except ParseError:
        raise
    except GraphVisError as exc:
        # a format module let a validation error through; keep parse total
        raise ParseError(str(exc), 1, 1) from exc


def write(g: Graph, fmt: str) -> bytes:
    if fmt not in _WRITERS:
        raise UnknownFormatError(f"unknown format id {fmt!r}")
    return _WRITERS[fmt](g).encode("utf-8")


__all__ = [
    "FORMAT_IDS", "EXTENSIONS", "CANONICAL_EXTENSION",
    "detect_format", "parse", "write", "export_svg", "StyleSpec",
    "EDGELIST_TXT", "EDGELIST_CSV", "EDGELIST_TSV", "MTX", "GEXF",
    "GRAPHML", "GML", "JSON", "PAJEK",
]
