"""Non-destructive exploration: filter chains, distributions, ranking,
sampling, text search, and temporal windows.

Filters select, they never mutate.  ``apply_filter`` returns kept id sets
and ``materialize_filter`` turns a selection into a standalone graph, so
a chain can be adjusted or dropped without touching the original.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .analytics import EDGE_MEASURES, NODE_MEASURES
from .cache import StatsCache
from .errors import (
    EmptyFilterError,
    EmptyValuesError,
    InvalidSpecError,
    InvalidValueError,
    NoTemporalDataError,
    UnknownMeasureError,
)
from .graph import Graph

COMPARATORS = ("<", "<=", "=", ">=", ">")

_CMP = {
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    "=": lambda a, b: a == b,
    ">=": lambda a, b: a >= b,
    ">": lambda a, b: a > b,
}


@dataclass(frozen=True)
class FilterExpr:
    """One threshold test against a node or edge measure."""

    target: str
    measure_id: str
    op: str
    threshold: float

    def __post_init__(self):
        if self.target not in ("node", "edge"):
            raise InvalidSpecError(f"unknown filter target {self.target!r}")
        if self.op not in _CMP:
            raise InvalidSpecError(f"unknown comparator {self.op!r}")
        if not isinstance(self.threshold, (int, float)) \
                or isinstance(self.threshold, bool) \
                or not math.isfinite(self.threshold):
            raise InvalidSpecError("filter threshold must be a finite number")
        valid = NODE_MEASURES if self.target == "node" else EDGE_MEASURES
        if self.measure_id not in valid:
            raise UnknownMeasureError(
                f"{self.measure_id!r} is not a {self.target} measure")

    def to_json(self) -> dict:
        return {"target": self.target, "measure": self.measure_id,
                "op": self.op, "threshold": self.threshold}

    @classmethod
    def from_json(cls, obj: dict) -> "FilterExpr":
        if not isinstance(obj, dict):
            raise InvalidSpecError("filter expression must be an object")
        unknown = set(obj) - {"target", "measure", "op", "threshold"}
        if unknown:
            raise InvalidSpecError(f"unknown filter fields {sorted(unknown)}")
        try:
            return cls(obj["target"], obj["measure"], obj["op"],
                       obj["threshold"])
        except KeyError as exc:
            raise InvalidSpecError(f"filter expression missing {exc}") from exc


@dataclass
class Histogram:
    """Left-closed right-open bins; the last bin also includes its right edge."""

    bin_edges: list[float]
    counts: list[int]
    total: int

    def to_json(self) -> dict:
        return {"bin_edges": self.bin_edges, "counts": self.counts,
                "total": self.total}


@dataclass(frozen=True)
class TimeWindow:
    t0: float
    t1: float

    def __post_init__(self):
        if not (isinstance(self.t0, (int, float)) and isinstance(self.t1, (int, float))):
            raise InvalidValueError("window bounds must be numbers")
        if not self.t0 < self.t1:
            raise InvalidValueError("time window requires t0 < t1")

    def to_json(self) -> dict:
        return {"t0": self.t0, "t1": self.t1}

    @classmethod
    def from_json(cls, obj: dict) -> "TimeWindow":
        if not isinstance(obj, dict) or "t0" not in obj or "t1" not in obj:
            raise InvalidValueError("time window needs t0 and t1")
        return cls(obj["t0"], obj["t1"])


# ---- filtering ------------------------------------------------------------------


def apply_filter(g: Graph, chain: list[FilterExpr],
                 measures: StatsCache) -> tuple[set[int], set[int]]:
    """Evaluate a conjunctive chain, returning (kept nodes, kept edges).

    An edge survives only if it passes every edge expression and both of
    its endpoints survived the node expressions.  Order inside the chain
    cannot change the outcome.
    """
    if not chain:
        raise EmptyFilterError("filter chain is empty")
    kept_nodes = set(g.nodes)
    kept_edges = set(g.edges)
    for expr in chain:
        vals = measures.get(g, expr.measure_id).values
        cmp = _CMP[expr.op]
        if expr.target == "node":
            kept_nodes = {n for n in kept_nodes
                          if cmp(vals[n], expr.threshold)}
        else:
            kept_edges = {e for e in kept_edges
                          if cmp(vals[e], expr.threshold)}
    kept_edges = {e for e in kept_edges
                  if g.edges[e].u in kept_nodes and g.edges[e].v in kept_nodes}
    return kept_nodes, kept_edges


def materialize_filter(g: Graph, kept: tuple[set[int], set[int]]) -> Graph:
    kept_nodes, kept_edges = kept
    return g.subgraph(kept_nodes, kept_edges)


# ---- distributions --------------------------------------------------------------


def histogram(values: list[float], bins: int | None = None,
              unit_bins: bool = False) -> Histogram:
    """Bin a value list.

    ``unit_bins`` gives one bin per integer value [k, k+1); otherwise
    ``bins`` equal-width bins span [min, max].  A degenerate range is
    widened by a tiny epsilon so every value still lands in a bin.
    """
    if not values:
        raise EmptyValuesError("cannot bin an empty value list")
    lo = min(values)
    hi = max(values)
    if unit_bins:
        for v in values:
            if v != int(v):
                raise InvalidValueError("unit bins need integer values")
        lo_i, hi_i = int(lo), int(hi)
        edges = [float(k) for k in range(lo_i, hi_i + 2)]
    else:
        if bins is None or bins < 1:
            raise InvalidValueError("bin count must be at least 1")
        if hi == lo:
            span = abs(hi) if hi != 0 else 1.0
            eps = span * 1e-9
            lo, hi = lo - eps, hi + eps
        width = (hi - lo) / bins
        edges = [lo + i * width for i in range(bins)] + [hi]
    counts = [0] * (len(edges) - 1)
    last = len(counts) - 1
    for v in values:
        if v == edges[-1]:
            idx = last  # right edge of the final bin is closed
        else:
            idx = int((v - edges[0]) / (edges[-1] - edges[0]) * len(counts))
            idx = min(max(idx, 0), last)
            # float rounding can land one bin off; nudge into place
            while idx > 0 and v < edges[idx]:
                idx -= 1
            while idx < last and v >= edges[idx + 1]:
                idx += 1
        counts[idx] += 1
    return Histogram(edges, counts, len(values))


def cdf_ccdf(h: Histogram) -> tuple[list[float], list[float]]:
    """CDF sampled at bin right edges, CCDF P(X >= x) at left edges."""
    if h.total <= 0:
        raise EmptyValuesError("distribution has no mass")
    cdf = []
    running = 0
    for c in h.counts:
        running += c
        cdf.append(running / h.total)
    ccdf = []
    seen = 0
    for c in h.counts:
        ccdf.append((h.total - seen) / h.total)
        seen += c
    return cdf, ccdf


def top_k(values: dict[int, float], k: int) -> list[tuple[int, float]]:
    """Descending by value, ties broken by ascending id."""
    if k < 1:
        raise InvalidValueError("k must be at least 1")
    ranked = sorted(values.items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked[:k]


# ---- sampling -------------------------------------------------------------------


def sample(g: Graph, method: str, fraction: float, seed: int = 0) -> Graph:
    """Seeded subgraph sample; identical seed, identical result."""
    if not isinstance(fraction, (int, float)) or not 0.0 <= fraction <= 1.0:
        raise InvalidValueError("fraction must lie in [0, 1]")
    rng = random.Random(seed)
    if method == "uniform-node-induced":
        n = g.node_count
        keep = math.ceil(fraction * n)
        chosen = rng.sample(sorted(g.nodes), keep) if n else []
        return g.induced_subgraph(chosen)
    if method == "uniform-edge":
        m = g.edge_count
        keep = math.ceil(fraction * m)
        chosen = set(rng.sample(sorted(g.edges), keep) if m else [])
        nodes = set()
        for eid in chosen:
            e = g.edges[eid]
            nodes.add(e.u)
            nodes.add(e.v)
        return g.subgraph(nodes, chosen)
    raise InvalidValueError(f"unknown sampling method {method!r}")


# ---- search ---------------------------------------------------------------------


def search(g: Graph, query: str) -> list[int]:
    """Case-insensitive substring match on labels and textual attrs."""
    q = query.lower()
    hits = []
    for nid in sorted(g.nodes):
        rec = g.nodes[nid]
        if q in rec.label.lower():
            hits.append(nid)
            continue
        for val in rec.attrs.values():
            if isinstance(val, str) and q in val.lower():
                hits.append(nid)
                break
    return hits


# ---- temporal -------------------------------------------------------------------


def _edge_timestamps(g: Graph) -> list[float]:
    return [e.ts for e in g.edges.values() if e.ts is not None]


def time_window(g: Graph, w: TimeWindow) -> Graph:
    """Subgraph of edges with t0 <= ts < t1 plus their endpoints.

    Edges without a timestamp fall outside every window.
    """
    if not _edge_timestamps(g):
        raise NoTemporalDataError("graph has no timestamped edges")
    kept_edges = {eid for eid, e in g.edges.items()
                  if e.ts is not None and w.t0 <= e.ts < w.t1}
    nodes = set()
    for eid in kept_edges:
        e = g.edges[eid]
        nodes.add(e.u)
        nodes.add(e.v)
    return g.subgraph(nodes, kept_edges)


def timeline(g: Graph, bin_width: float) -> Histogram:
    """Histogram of edge timestamps, uniform bins anchored at the min ts."""
    if not isinstance(bin_width, (int, float)) or bin_width <= 0:
        raise InvalidValueError("bin width must be positive")
    stamps = _edge_timestamps(g)
    if not stamps:
        raise NoTemporalDataError("graph has no timestamped edges")
    lo = min(stamps)
    hi = max(stamps)
    nbins = int((hi - lo) // bin_width) + 1
    edges = [lo + i * bin_width for i in range(nbins + 1)]
    counts = [0] * nbins
    for t in stamps:
        idx = min(int((t - lo) // bin_width), nbins - 1)
        counts[idx] += 1
    return Histogram(edges, counts, len(stamps))
