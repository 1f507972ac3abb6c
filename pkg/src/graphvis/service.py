"""REST service over the graph engine.

One process hosts many graphs; each lives in a GraphEntry with its own
StatsCache, layout, event log, and writer lock.  Mutation batches run
copy-apply-swap under that lock, so a failed batch leaves the published
graph untouched and readers never observe a half-applied state.

Error mapping is exhaustive: every engine error code has exactly one HTTP
status, and the handler emits a uniform body {status, code, message,
position}.
"""

from __future__ import annotations

import asyncio
import json
import threading
import time
from contextlib import asynccontextmanager
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import Body, FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, Response, StreamingResponse

from . import explore, formats, partitions
from . import workspace as ws
from .analytics import EDGE_MEASURES, NODE_MEASURES, macro_summary
from .cache import (
    DEGREE,
    GLOBAL_CLUSTERING,
    TOTAL_TRIANGLES,
    StatsCache,
    apply_mutation,
)
from .errors import (
    GraphVisError,
    InvalidMutationError,
    InvalidSpecError,
    InvalidValueError,
    ParseError,
    UnknownGraphError,
    UnknownMeasureError,
    UnknownNodeError,
    UnsupportedExportError,
)
from .explore import FilterExpr, TimeWindow
from .formats.svg import StyleSpec, export_svg
from .generators import GeneratorSpec, generate, insert_generated
from .graph import Graph, Mutation, Scalar
from .layout import force_layout

STATUS_BY_CODE = {
    "parse-error": 400,
    "invalid-workspace": 400,
    "empty-filter-chain": 400,
    "unknown-graph": 404,
    "unknown-node": 409,
    "unknown-edge": 409,
    "self-loop-rejected": 409,
    "duplicate-edge-rejected": 409,
    "invalid-mutation": 409,
    "unknown-format": 415,
    "unknown-measure": 422,
    "invalid-spec": 422,
    "no-temporal-data": 422,
    "invalid-value": 422,
    "unsupported-export": 422,
    "missing-layout-entry": 422,
    "empty-values": 422,
    "internal-error": 500,
}

EXPORT_MEDIA_TYPES = {
    formats.EDGELIST_TXT: "text/plain; charset=utf-8",
    formats.EDGELIST_CSV: "text/csv; charset=utf-8",
    formats.EDGELIST_TSV: "text/tab-separated-values; charset=utf-8",
    formats.MTX: "text/plain; charset=utf-8",
    formats.GEXF: "application/xml",
    formats.GRAPHML: "application/xml",
    formats.GML: "text/plain; charset=utf-8",
    formats.JSON: "application/json",
    formats.PAJEK: "text/plain; charset=utf-8",
}

# summary fields kept incrementally, cheap enough to diff on every batch
_DELTA_FIELDS = ("node_count", "edge_count", "max_degree", "avg_degree",
                 "total_triangles", "global_clustering")


@dataclass
class GraphEntry:
    graph: Graph
    cache: StatsCache
    meta: dict
    layout: dict | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)
    events: list = field(default_factory=list)
    # method -> (topology_version, Partition); reused by the macro summary
    partitions: dict = field(default_factory=dict)


class ServiceState:
    """Everything the endpoints share: open graphs, settings, saved views."""

    def __init__(self, exact_threshold: int = 10_000,
                 workspace_path: str | None = None):
        self.exact_threshold = exact_threshold
        self.workspace_path = workspace_path
        self.graphs: dict[str, GraphEntry] = {}
        self.settings: dict[str, Scalar] = {}
        self.saved_views: list[dict] = []
        self._counter = 0
        self._lock = threading.Lock()

    def register(self, g: Graph, meta: dict,
                 layout: dict | None = None) -> tuple[str, GraphEntry]:
        cache = StatsCache(g, exact_threshold=self.exact_threshold)
        entry = GraphEntry(g, cache, meta, layout)
        with self._lock:
            self._counter += 1
            gid = f"g{self._counter}"
            self.graphs[gid] = entry
        return gid, entry

    def entry(self, gid: str) -> GraphEntry:
        try:
            return self.graphs[gid]
        except KeyError:
            raise UnknownGraphError(f"no graph with id {gid!r}") from None

    def remove(self, gid: str) -> None:
        with self._lock:
            if gid not in self.graphs:
                raise UnknownGraphError(f"no graph with id {gid!r}")
            del self.graphs[gid]

    # ---- persistence -----------------------------------------------------

    def workspace_bytes(self) -> bytes:
        parts = {gid: {"graph": e.graph, "meta": e.meta, "layout": e.layout}
                 for gid, e in self.graphs.items()}
        return ws.dump_workspace(parts, self.settings, self.saved_views)

    def restore(self, data: bytes) -> list[str]:
        """Replace the whole session from a workspace file; all-or-nothing."""
        loaded = ws.load_workspace(data)
        entries = {}
        top = 0
        for gid, part in loaded["graphs"].items():
            cache = StatsCache(part["graph"],
                               exact_threshold=self.exact_threshold)
            entries[gid] = GraphEntry(part["graph"], cache, part["meta"],
                                      part["layout"])
            if gid.startswith("g") and gid[1:].isdigit():
                top = max(top, int(gid[1:]))
        with self._lock:
            self.graphs = entries
            self.settings = loaded["settings"]
            self.saved_views = loaded["saved_views"]
            self._counter = max(self._counter, top)
        return sorted(entries)

    def save_to_disk(self) -> None:
        if self.workspace_path:
            Path(self.workspace_path).write_bytes(self.workspace_bytes())

    def load_from_disk(self) -> None:
        if self.workspace_path and Path(self.workspace_path).exists():
            self.restore(Path(self.workspace_path).read_bytes())


def _delta_snapshot(g: Graph, cache: StatsCache) -> dict:
    deg = cache.get(g, DEGREE).values
    n, m = g.node_count, g.edge_count
    return {
        "node_count": n,
        "edge_count": m,
        "max_degree": max(deg.values(), default=0),
        "avg_degree": (2.0 * m / n) if n else 0.0,
        "total_triangles": cache.get(g, TOTAL_TRIANGLES).values,
        "global_clustering": cache.get(g, GLOBAL_CLUSTERING).values,
    }


def _stale_ids(cache: StatsCache) -> list[str]:
    return sorted(mid for mid, e in cache.entries.items() if not e.fresh)


def _json_values(values: dict) -> dict:
    return {str(k): v for k, v in sorted(values.items())}


def _graph_created(gid: str, g: Graph, detected: str | None) -> JSONResponse:
    return JSONResponse(status_code=201, content={
        "graph-id": gid,
        "node-count": g.node_count,
        "edge-count": g.edge_count,
        "detected-format": detected,
    })


def _publish(entry: GraphEntry, g: Graph, cache: StatsCache,
             changed_measures: list[str]) -> None:
    """Swap in the new committed state and log one event for the batch."""
    entry.graph = g
    entry.cache = cache
    entry.events.append({"version": g.version,
                         "changed-measures": changed_measures})


def _parse_chain(body) -> list[FilterExpr]:
    if not isinstance(body, list):
        raise InvalidSpecError("filter endpoint expects a JSON array of expressions")
    return [FilterExpr.from_json(obj) for obj in body]


def _scalar_map(obj, what: str) -> dict[str, Scalar]:
    if not isinstance(obj, dict):
        raise InvalidValueError(f"{what} must be a JSON object")
    for key, val in obj.items():
        if not isinstance(key, str):
            raise InvalidValueError(f"{what} keys must be strings")
        if not isinstance(val, (str, int, float, bool)) or val is None:
            raise InvalidValueError(f"{what} values must be scalars")
    return dict(obj)


def _validated_view(body) -> dict:
    if not isinstance(body, dict):
        raise InvalidSpecError("view must be a JSON object")
    name = body.get("name")
    if not isinstance(name, str) or not name:
        raise InvalidSpecError("view needs a nonempty name")
    style = body.get("style") or {}
    try:
        StyleSpec(**{k: tuple(v) if isinstance(v, list) else v
                     for k, v in style.items()})
    except TypeError as exc:
        raise InvalidSpecError(f"bad style: {exc}") from exc
    filters = body.get("filters") or []
    if not isinstance(filters, list):
        raise InvalidSpecError("view filters must be a list")
    for obj in filters:
        FilterExpr.from_json(obj)
    window = body.get("window")
    if window is not None:
        TimeWindow.from_json(window)
    return {"name": name, "style": style, "filters": filters, "window": window}


def create_app(state: ServiceState | None = None) -> FastAPI:
    state = state or ServiceState()
    state.load_from_disk()

    @asynccontextmanager
    async def lifespan(app):
        yield
        state.save_to_disk()

    app = FastAPI(title="graphvis", lifespan=lifespan)
    app.state.svc = state

    @app.exception_handler(GraphVisError)
    async def engine_error(request: Request, exc: GraphVisError):
        status = STATUS_BY_CODE.get(exc.code, 500)
        position = None
        if isinstance(exc, ParseError) and exc.line is not None:
            position = [exc.line, exc.column]
        return JSONResponse(status_code=status, content={
            "status": status, "code": exc.code,
            "message": str(exc), "position": position,
        })

    @app.exception_handler(RequestValidationError)
    async def bad_request_shape(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=422, content={
            "status": 422, "code": "invalid-value",
            "message": "request body or parameters have the wrong shape",
            "position": None,
        })

    # ---- graph lifecycle ---------------------------------------------

    @app.post("/graphs")
    async def create_graph(request: Request, format: str | None = None,
                           filename: str | None = None):
        data = await request.body()
        if not data.strip():
            raise ParseError("empty upload body", 1, 1)
        doc = None
        if data.lstrip()[:1] == b"{":
            try:
                doc = json.loads(data)
            except ValueError:
                doc = None
        if isinstance(doc, dict) and "model" in doc:
            spec = GeneratorSpec.from_json(doc)
            g = generate(spec)
            gid, _ = state.register(g, meta={
                "name": f"{spec.model}-{spec.n}",
                "created_at": time.time(),
                "source_format": None,
            })
            return _graph_created(gid, g, None)
        fmt = format or formats.detect_format(filename or "", data[:4096])
        g = formats.parse(data, fmt)
        gid, _ = state.register(g, meta={
            "name": filename or "upload",
            "created_at": time.time(),
            "source_format": fmt,
        })
        return _graph_created(gid, g, fmt)

    @app.get("/graphs")
    def list_graphs():
        out = []
        for gid in sorted(state.graphs, key=lambda s: (len(s), s)):
            e = state.graphs[gid]
            out.append({
                "graph-id": gid,
                "name": e.meta.get("name"),
                "node-count": e.graph.node_count,
                "edge-count": e.graph.edge_count,
                "version": e.graph.version,
                "created-at": e.meta.get("created_at"),
                "source-format": e.meta.get("source_format"),
            })
        return out

    @app.delete("/graphs/{gid}", status_code=204)
    def delete_graph(gid: str):
        state.remove(gid)
        return Response(status_code=204)

    # ---- inspection ----------------------------------------------------

    @app.get("/graphs/{gid}/summary")
    def get_summary(gid: str):
        e = state.entry(gid)
        with e.lock:
            counts = {}
            for method, (tv, part) in e.partitions.items():
                if tv == e.graph.topology_version and method in ("community", "role"):
                    counts[method] = part.group_count
            return macro_summary(e.graph, e.cache,
                                 partition_counts=counts or None).to_json()

    @app.get("/graphs/{gid}/measures/{target}/{measure_id}")
    def get_measure(gid: str, target: str, measure_id: str,
                    sample: int | None = None):
        e = state.entry(gid)
        if target == "node":
            valid = NODE_MEASURES
        elif target == "edge":
            valid = EDGE_MEASURES
        else:
            raise UnknownMeasureError(f"unknown measure target {target!r}")
        if measure_id not in valid:
            raise UnknownMeasureError(f"{measure_id!r} is not a {target} measure")
        with e.lock:
            entry = e.cache.get(e.graph, measure_id, sample=sample)
            return {
                "measure": measure_id,
                "target": target,
                "values": _json_values(entry.values),
                "exact": entry.exact,
                "sample": entry.sample_count,
            }

    @app.get("/graphs/{gid}/distributions/{measure_id}")
    def get_distribution(gid: str, measure_id: str, bins: int | None = None,
                         kind: str = "hist"):
        if kind not in ("hist", "cdf", "ccdf"):
            raise InvalidValueError(f"unknown distribution kind {kind!r}")
        e = state.entry(gid)
        if measure_id not in NODE_MEASURES | EDGE_MEASURES:
            raise UnknownMeasureError(f"{measure_id!r} has no distribution")
        with e.lock:
            values = list(e.cache.get(e.graph, measure_id).values.values())
            if bins is None and values and all(v == int(v) for v in values):
                h = explore.histogram(values, unit_bins=True)
            else:
                h = explore.histogram(values, bins=bins if bins is not None else 10)
        body = {"kind": kind, "measure": measure_id, **h.to_json()}
        if kind != "hist":
            cdf, ccdf = explore.cdf_ccdf(h)
            body["curve"] = cdf if kind == "cdf" else ccdf
        return body

    # ---- mutation ------------------------------------------------------

    @app.post("/graphs/{gid}/mutations")
    def post_mutations(gid: str, body: list = Body(...)):
        e = state.entry(gid)
        muts = []
        for obj in body:
            try:
                muts.append(Mutation.from_json(obj))
            except InvalidValueError as exc:
                raise InvalidMutationError(str(exc)) from exc
        with e.lock:
            if not muts:
                return {"version": e.graph.version, "changed": {}, "stale": []}
            before = _delta_snapshot(e.graph, e.cache)
            g2 = e.graph.copy()
            c2 = e.cache.copy()
            for m in muts:
                try:
                    apply_mutation(g2, c2, m)
                except InvalidValueError as exc:
                    # a bad payload value is an invalid mutation at this layer
                    raise InvalidMutationError(str(exc)) from exc
            after = _delta_snapshot(g2, c2)
            changed = {k: {"before": before[k], "after": after[k]}
                       for k in _DELTA_FIELDS if before[k] != after[k]}
            stale = _stale_ids(c2)
            _publish(e, g2, c2, sorted(set(changed) | set(stale)))
            return {"version": g2.version, "changed": changed, "stale": stale}

    @app.post("/graphs/{gid}/insert")
    def post_insert(gid: str, body: dict = Body(...)):
        e = state.entry(gid)
        raw = dict(body)
        attach = raw.pop("attach-to", None)
        if attach is not None and not (
                isinstance(attach, list)
                and all(isinstance(x, int) and not isinstance(x, bool) for x in attach)):
            raise InvalidSpecError("attach-to must be a list of node ids")
        spec = GeneratorSpec.from_json(raw)
        with e.lock:
            before = _delta_snapshot(e.graph, e.cache)
            g2 = e.graph.copy()
            c2 = e.cache.copy()
            new_ids = insert_generated(g2, spec, attach_to=attach, cache=c2)
            after = _delta_snapshot(g2, c2)
            changed = {k: {"before": before[k], "after": after[k]}
                       for k in _DELTA_FIELDS if before[k] != after[k]}
            stale = _stale_ids(c2)
            _publish(e, g2, c2, sorted(set(changed) | set(stale)))
            return {"version": g2.version, "new-nodes": sorted(new_ids),
                    "changed": changed, "stale": stale}

    # ---- filtering and temporal views -----------------------------------

    @app.post("/graphs/{gid}/filter")
    def post_filter(gid: str, body: list = Body(...),
                    materialize: bool = False):
        e = state.entry(gid)
        chain = _parse_chain(body)
        with e.lock:
            kept_nodes, kept_edges = explore.apply_filter(e.graph, chain, e.cache)
            if not materialize:
                return {
                    "kept-nodes": sorted(kept_nodes),
                    "kept-edges": sorted(kept_edges),
                    "node-count": len(kept_nodes),
                    "edge-count": len(kept_edges),
                }
            sub = explore.materialize_filter(e.graph, (kept_nodes, kept_edges))
        gid2, _ = state.register(sub, meta={
            "name": f"{e.meta.get('name', gid)} (filtered)",
            "created_at": time.time(),
            "source_format": None,
            "derived_from": gid,
        })
        return _graph_created(gid2, sub, None)

    @app.get("/graphs/{gid}/window")
    def get_window(gid: str, t0: float, t1: float):
        e = state.entry(gid)
        w = TimeWindow(t0, t1)
        with e.lock:
            sub = explore.time_window(e.graph, w)
        gid2, _ = state.register(sub, meta={
            "name": f"{e.meta.get('name', gid)} [{t0}, {t1})",
            "created_at": time.time(),
            "source_format": None,
            "derived_from": gid,
        })
        return _graph_created(gid2, sub, None)

    @app.get("/graphs/{gid}/timeline")
    def get_timeline(gid: str, width: float):
        e = state.entry(gid)
        with e.lock:
            return explore.timeline(e.graph, width).to_json()

    # ---- partitions ------------------------------------------------------

    @app.post("/graphs/{gid}/partitions")
    def post_partitions(gid: str, body: dict = Body(...)):
        e = state.entry(gid)
        method = body.get("method")
        if not isinstance(method, str):
            raise InvalidSpecError("partition request needs a method")
        seed = body.get("seed", 0)
        if not isinstance(seed, int) or isinstance(seed, bool):
            raise InvalidSpecError("seed must be an integer")
        role_count = body.get("role-count")
        if role_count is not None and (
                not isinstance(role_count, int) or isinstance(role_count, bool)):
            raise InvalidSpecError("role-count must be an integer")
        with e.lock:
            part = partitions.compute(e.graph, method, seed=seed,
                                      role_count=role_count)
            e.partitions[method] = (e.graph.topology_version, part)
            return part.to_json()

    # ---- layout and export ----------------------------------------------

    @app.get("/graphs/{gid}/layout")
    def get_layout(gid: str, seed: int = 0, iterations: int = 60,
                   recompute: bool = False):
        e = state.entry(gid)
        with e.lock:
            covered = e.layout is not None and all(
                nid in e.layout for nid in e.graph.nodes)
            if recompute or not covered:
                e.layout = force_layout(e.graph, seed=seed,
                                        iterations=iterations)
            return {"positions": {str(n): [x, y]
                                  for n, (x, y) in sorted(e.layout.items())}}

    @app.put("/graphs/{gid}/layout")
    def put_layout(gid: str, body: dict = Body(...)):
        e = state.entry(gid)
        raw = body.get("positions")
        if not isinstance(raw, dict):
            raise InvalidValueError("layout body needs a positions object")
        layout = {}
        for key, pair in raw.items():
            try:
                nid = int(key)
            except (TypeError, ValueError):
                raise InvalidValueError(f"bad node id {key!r} in layout") from None
            if not (isinstance(pair, list) and len(pair) == 2
                    and all(isinstance(c, (int, float)) and not isinstance(c, bool)
                            for c in pair)):
                raise InvalidValueError("positions must map ids to [x, y] pairs")
            layout[nid] = (float(pair[0]), float(pair[1]))
        with e.lock:
            for nid in layout:
                if not e.graph.has_node(nid):
                    raise UnknownNodeError(f"layout references unknown node {nid}")
            e.layout = layout
            return {"stored": len(layout)}

    @app.get("/graphs/{gid}/export")
    def get_export(gid: str, format: str, color_by: str | None = None,
                   size_by: str | None = None):
        e = state.entry(gid)
        if format == "png":
            raise UnsupportedExportError(
                "png rasterization happens client-side; export svg instead")
        if format == "svg":
            with e.lock:
                g = e.graph
                covered = e.layout is not None and all(
                    nid in e.layout for nid in g.nodes)
                if not covered:
                    e.layout = force_layout(g)
                measures = {}
                for mid in (color_by, size_by):
                    if mid is None:
                        continue
                    if mid not in NODE_MEASURES:
                        raise UnknownMeasureError(
                            f"{mid!r} is not a node measure")
                    measures[mid] = e.cache.get(g, mid).values
                style = StyleSpec(color_by=color_by, size_by=size_by)
                svg = export_svg(g, e.layout, style, measures)
            return Response(content=svg.encode("utf-8"),
                            media_type="image/svg+xml")
        with e.lock:
            payload = formats.write(e.graph, format)
        ext = formats.CANONICAL_EXTENSION[format]
        return Response(
            content=payload,
            media_type=EXPORT_MEDIA_TYPES[format],
            headers={"Content-Disposition":
                     f'attachment; filename="{gid}{ext}"'})

    # ---- workspace, settings, views ---------------------------------------

    @app.get("/workspace")
    def get_workspace():
        with state._lock:
            payload = state.workspace_bytes()
        return Response(content=payload, media_type="application/json")

    @app.put("/workspace")
    async def put_workspace(request: Request):
        data = await request.body()
        gids = state.restore(data)
        state.save_to_disk()
        return {"graphs": len(gids), "graph-ids": gids}

    @app.get("/settings")
    def get_settings():
        return state.settings

    @app.put("/settings")
    def put_settings(body: dict = Body(...)):
        state.settings = _scalar_map(body, "settings")
        return state.settings

    @app.get("/views")
    def get_views():
        return state.saved_views

    @app.post("/views", status_code=201)
    def post_view(body: dict = Body(...)):
        view = _validated_view(body)
        state.saved_views.append(view)
        return view

    # ---- events ------------------------------------------------------------

    @app.get("/graphs/{gid}/events")
    async def get_events(gid: str, since: int = 0,
                         max_events: int | None = None):
        state.entry(gid)  # 404 before the stream starts

        async def stream():
            cursor = since
            sent = 0
            while True:
                entry = state.graphs.get(gid)
                if entry is None:
                    return
                for ev in list(entry.events):
                    if ev["version"] <= cursor:
                        continue
                    cursor = ev["version"]
                    yield f"data: {json.dumps(ev)}\n\n"
                    sent += 1
                    if max_events is not None and sent >= max_events:
                        return
                await asyncio.sleep(0.05)

        return StreamingResponse(stream(), media_type="text/event-stream")

    return app
