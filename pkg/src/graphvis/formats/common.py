"""Bits shared by the file-format readers and writers."""

from __future__ import annotations

import re

from ..errors import ParseError
from ..graph import Graph


def decode(data: bytes | str) -> str:
    """UTF-8 decode with a positioned error instead of a raw exception."""
    if isinstance(data, str):
        return data
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        prefix = data[:exc.start]
        line = prefix.count(b"\n") + 1
        col = exc.start - (prefix.rfind(b"\n") + 1) + 1
        raise ParseError("input is not valid UTF-8", line, col) from None


def num(x: float) -> str:
    """Compact numeric literal: integral floats lose the trailing .0."""
    if isinstance(x, float) and x.is_integer() and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def parse_number(token: str, line: int, col: int, what: str) -> float:
    try:
        return float(token)
    except ValueError:
        raise ParseError(f"{what} must be numeric, got {token!r}",
                         line, col) from None


def locate(text: str, needle: str) -> tuple[int, int]:
    """Best-effort (line, col) of a substring, for semantic error reports."""
    idx = text.find(needle)
    if idx < 0:
        return 1, 1
    prefix = text[:idx]
    return prefix.count("\n") + 1, idx - (prefix.rfind("\n") + 1) + 1


_TOKEN_SAFE = re.compile(r"[^\s\"'#%]+$")


def token_safe_labels(g: Graph, forbidden: str = "") -> bool:
    """True when every label can stand alone as an edge-list token.

    Tokens must be unique, nonempty, free of whitespace and quote or
    comment characters, plus any dialect delimiter in ``forbidden``.
    """
    seen = set()
    for rec in g.nodes.values():
        lab = rec.label
        if not lab or not _TOKEN_SAFE.match(lab):
            return False
        if any(ch in lab for ch in forbidden):
            return False
        if lab in seen:
            return False
        seen.add(lab)
    return True
