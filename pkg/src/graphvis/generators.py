"""Seeded random-graph and pattern generators.

A ``GeneratorSpec`` is the single serializable description used by both the
Python API and the HTTP endpoint.  Model dialects:

- ``er``: Bernoulli graph, params n, p
- ``cl``: expected-degree model, params weights (pair probability
  min(1, w_u * w_v / sum w))
- ``pa``: degree-proportional attachment, params n, m (seed clique on m+1
  nodes, every later node attaches m distinct edges; repeated endpoint
  draws are rejected)
- ``pattern``: deterministic motifs clique/star/cycle/chain, param size
- ``block``: per-block base generation plus independent Bernoulli(q)
  cross-block pairs, params blocks=[{size, base}...], q (or q_matrix)

Fixed seed means identical output, bit for bit.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .cache import StatsCache, apply_mutation
from .errors import InvalidSpecError
from .graph import Graph, Mutation

PATTERN_KINDS = frozenset({"clique", "star", "cycle", "chain"})
MODELS = frozenset({"er", "cl", "pa", "pattern", "block"})


@dataclass
class GeneratorSpec:
    model: str
    n: int | None = None
    p: float | None = None
    weights: list[float] | None = None
    m: int | None = None
    kind: str | None = None
    size: int | None = None
    blocks: list[dict] | None = None
    q: float | None = None
    q_matrix: list[list[float]] | None = None
    seed: int = 0

    def to_json(self) -> dict:
        out: dict = {"model": self.model, "seed": self.seed}
        for key in ("n", "p", "weights", "m", "kind", "size", "blocks",
                    "q", "q_matrix"):
            val = getattr(self, key)
            if val is not None:
                out[key] = val
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "GeneratorSpec":
        if not isinstance(obj, dict):
            raise InvalidSpecError("generator spec must be an object")
        model = obj.get("model")
        if model not in MODELS:
            raise InvalidSpecError(f"unknown generator model {model!r}")
        known = {"model", "n", "p", "weights", "m", "kind", "size",
                 "blocks", "q", "q_matrix", "seed"}
        unknown = set(obj) - known
        if unknown:
            raise InvalidSpecError(f"unknown generator fields {sorted(unknown)}")
        spec = cls(model=model, seed=obj.get("seed", 0),
                   **{k: obj[k] for k in known - {"model", "seed"} if k in obj})
        spec.validate()
        return spec

    # ---- validation ------------------------------------------------------

    def validate(self) -> None:
        if self.model not in MODELS:
            raise InvalidSpecError(f"unknown generator model {self.model!r}")
        if not isinstance(self.seed, int):
            raise InvalidSpecError("seed must be an integer")
        check = {
            "er": self._validate_er,
            "cl": self._validate_cl,
            "pa": self._validate_pa,
            "pattern": self._validate_pattern,
            "block": self._validate_block,
        }[self.model]
        check()

    def _validate_er(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise InvalidSpecError("er requires an integer n >= 0")
        if not isinstance(self.p, (int, float)) or not 0.0 <= self.p <= 1.0:
            raise InvalidSpecError("er requires p in [0, 1]")

    def _validate_cl(self):
        if not isinstance(self.weights, list) or not self.weights:
            raise InvalidSpecError("cl requires a nonempty weights list")
        for w in self.weights:
            if not isinstance(w, (int, float)) or w < 0:
                raise InvalidSpecError("cl weights must be nonnegative numbers")

    def _validate_pa(self):
        if not isinstance(self.m, int) or self.m < 1:
            raise InvalidSpecError("pa requires an integer m >= 1")
        if not isinstance(self.n, int) or self.n < self.m + 1:
            raise InvalidSpecError("pa requires n >= m + 1")

    def _validate_pattern(self):
        if self.kind not in PATTERN_KINDS:
            raise InvalidSpecError(f"unknown pattern kind {self.kind!r}")
        if not isinstance(self.size, int) or self.size < 1:
            raise InvalidSpecError("pattern size must be a positive integer")
        if self.kind == "cycle" and self.size < 3:
            raise InvalidSpecError("cycles need at least 3 nodes")

    def _validate_block(self):
        if not isinstance(self.blocks, list) or not self.blocks:
            raise InvalidSpecError("block model requires a nonempty blocks list")
        for blk in self.blocks:
            if not isinstance(blk, dict) or "size" not in blk or "base" not in blk:
                raise InvalidSpecError("each block needs size and base fields")
            base = blk["base"]
            if not isinstance(base, dict) or base.get("model") not in ("er", "cl", "pa"):
                raise InvalidSpecError("block base must be er, cl, or pa")
            sub = _block_base_spec(blk)
            sub.validate()
        k = len(self.blocks)
        if self.q_matrix is not None:
            qm = self.q_matrix
            if len(qm) != k or any(len(row) != k for row in qm):
                raise InvalidSpecError("q_matrix must be square over the blocks")
            for i in range(k):
                for j in range(k):
                    v = qm[i][j]
                    if not isinstance(v, (int, float)) or not 0.0 <= v <= 1.0:
                        raise InvalidSpecError("q_matrix entries must be in [0, 1]")
                    if qm[i][j] != qm[j][i]:
                        raise InvalidSpecError("q_matrix must be symmetric")
        else:
            if self.q is None:
                raise InvalidSpecError("block model requires q (or q_matrix)")
            if not isinstance(self.q, (int, float)) or not 0.0 <= self.q <= 1.0:
                raise InvalidSpecError("q must be in [0, 1]")

    def cl_clipped(self) -> bool:
        """True when some pair probability had to be clipped at 1."""
        s = sum(self.weights)
        if s <= 0:
            return False
        top = sorted(self.weights)[-2:]
        return top[0] * top[1] > s


def _block_base_spec(blk: dict) -> "GeneratorSpec":
    base = dict(blk["base"])
    size = blk["size"]
    model = base.pop("model")
    if model == "er":
        return GeneratorSpec("er", n=size, p=base.get("p"))
    if model == "cl":
        weights = base.get("weights")
        if weights is not None and len(weights) != size:
            raise InvalidSpecError("block cl weights must match the block size")
        return GeneratorSpec("cl", weights=weights)
    if model == "pa":
        return GeneratorSpec("pa", n=size, m=base.get("m"))
    raise InvalidSpecError(f"unsupported block base {model!r}")


# ---- edge-set builders (operate on index ranges, assembled later) --------------


def _er_edges(n: int, p: float, rng: random.Random) -> list[tuple[int, int]]:
    if p <= 0.0:
        return []
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if p >= 1.0 or rng.random() < p:
                edges.append((i, j))
    return edges


def _cl_edges(weights: list[float], rng: random.Random) -> list[tuple[int, int]]:
    n = len(weights)
    s = float(sum(weights))
    edges = []
    if s <= 0:
        return edges
    for i in range(n):
        for j in range(i + 1, n):
            pij = min(1.0, weights[i] * weights[j] / s)
            if rng.random() < pij:
                edges.append((i, j))
    return edges


def _pa_edges(n: int, m: int, rng: random.Random) -> list[tuple[int, int]]:
    """Seed clique on m+1 nodes, then degree-proportional attachment.

    Targets are drawn from the endpoint multiset (one entry per incident
    edge end), rejecting repeats until m distinct targets are found.
    """
    edges = [(i, j) for i in range(m + 1) for j in range(i + 1, m + 1)]
    endpoint_pool: list[int] = []
    for i, j in edges:
        endpoint_pool.extend((i, j))
    for v in range(m + 1, n):
        targets: set[int] = set()
        while len(targets) < m:
            targets.add(endpoint_pool[rng.randrange(len(endpoint_pool))])
        for t in sorted(targets):
            edges.append((t, v))
            endpoint_pool.extend((t, v))
    return edges


def _pattern_edges(kind: str, size: int) -> list[tuple[int, int]]:
    if kind == "clique":
        return [(i, j) for i in range(size) for j in range(i + 1, size)]
    if kind == "star":
        return [(0, i) for i in range(1, size)]
    if kind == "cycle":
        return [(i, (i + 1) % size) for i in range(size)]
    if kind == "chain":
        return [(i, i + 1) for i in range(size - 1)]
    raise InvalidSpecError(f"unknown pattern kind {kind!r}")


def _materialize(spec: GeneratorSpec) -> tuple[int, list[tuple[int, int]], dict[int, dict]]:
    """Node count, edge index pairs, per-node attrs for a validated spec."""
    rng = random.Random(spec.seed)
    attrs: dict[int, dict] = {}
    if spec.model == "er":
        return spec.n, _er_edges(spec.n, spec.p, rng), attrs
    if spec.model == "cl":
        return len(spec.weights), _cl_edges(spec.weights, rng), attrs
    if spec.model == "pa":
        return spec.n, _pa_edges(spec.n, spec.m, rng), attrs
    if spec.model == "pattern":
        return spec.size, _pattern_edges(spec.kind, spec.size), attrs
    # block model: bases are generated independently, then cross pairs
    sizes = [blk["size"] for blk in spec.blocks]
    offsets = []
    total = 0
    for s in sizes:
        offsets.append(total)
        total += s
    edges: list[tuple[int, int]] = []
    block_seeds = [rng.randrange(2 ** 62) for _ in spec.blocks]
    for b, blk in enumerate(spec.blocks):
        sub = _block_base_spec(blk)
        sub.seed = block_seeds[b]
        _, sub_edges, _ = _materialize(sub)
        off = offsets[b]
        edges.extend((off + i, off + j) for i, j in sub_edges)
        for i in range(sizes[b]):
            attrs[off + i] = {"block": b}
    k = len(sizes)
    for a in range(k):
        for b in range(a + 1, k):
            q = spec.q_matrix[a][b] if spec.q_matrix is not None else spec.q
            if q <= 0.0:
                continue
            for i in range(sizes[a]):
                for j in range(sizes[b]):
                    if rng.random() < q:
                        edges.append((offsets[a] + i, offsets[b] + j))
    return total, edges, attrs


def generate(spec: GeneratorSpec) -> Graph:
    """Build a fresh graph from a validated spec.  Deterministic per seed."""
    spec.validate()
    n, edges, attrs = _materialize(spec)
    g = Graph()
    ids = [g.add_node(attrs=attrs.get(i)) for i in range(n)]
    for i, j in edges:
        g.add_edge(ids[i], ids[j])
    g.meta["generator"] = spec.model
    if spec.model == "cl" and spec.cl_clipped():
        g.meta["cl_clipped"] = True
    return g


def insert_generated(g: Graph, spec: GeneratorSpec,
                     attach_to: list[int] | None = None,
                     cache: StatsCache | None = None) -> set[int]:
    """Generate a graph from ``spec`` and splice it into ``g``.

    Every node in ``attach_to`` gains one edge to a seeded-uniform pick
    among the inserted nodes.  Routed through the mutation path when a
    cache is supplied, so measures stay consistent.  Returns the new ids.
    """
    spec.validate()
    attach_to = list(attach_to or [])
    for nid in attach_to:
        g.require_node(nid)
    n, edges, attrs = _materialize(spec)
    if attach_to and n == 0:
        raise InvalidSpecError("cannot attach to an empty generated graph")
    attach_rng = random.Random((spec.seed * 0x9E3779B1 + 0x5DEECE66D) & (2 ** 63 - 1))
    attach = [{"node": nid, "to": attach_rng.randrange(n)} for nid in attach_to]
    payload = {
        "nodes": [{"attrs": attrs[i]} if i in attrs else {} for i in range(n)],
        "edges": [{"u": i, "v": j} for i, j in edges],
        "attach": attach,
    }
    first_new = g._next_node_id
    if cache is not None:
        apply_mutation(g, cache, Mutation("insert-subgraph", payload))
    else:
        ids = [g.add_node(attrs=attrs.get(i)) for i in range(n)]
        for i, j in edges:
            g.add_edge(ids[i], ids[j])
        for pair in attach:
            g.add_edge(pair["node"], ids[pair["to"]])
    return set(range(first_new, g._next_node_id))
