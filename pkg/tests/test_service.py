"""Contract tests for the HTTP service.

Every endpoint appears here at least once, plus the cross-cutting rules:
uniform error bodies, batch atomicity, version-ordered events, and the
lossless workspace round-trip.
"""

import json

import pytest
from fastapi.testclient import TestClient

from graphvis import formats
from graphvis.server import build_config
from graphvis.service import ServiceState, create_app


@pytest.fixture
def client():
    return TestClient(create_app(ServiceState()))


def upload(client, data: bytes, **params) -> str:
    r = client.post("/graphs", content=data, params=params)
    assert r.status_code == 201, r.text
    return r.json()["graph-id"]


def read_events(client, gid, since=0, n=1):
    out = []
    with client.stream("GET", f"/graphs/{gid}/events",
                       params={"since": since, "max_events": n}) as s:
        for line in s.iter_lines():
            if line.startswith("data: "):
                out.append(json.loads(line[len("data: "):]))
    return out


P3 = b"0 1\n1 2\n"
K4 = b"0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n"
TWO_K3 = b"0 1\n1 2\n2 0\n3 4\n4 5\n5 3\n"
TEMPORAL_CSV = b"source,target,time\na,b,10\nb,c,20\nc,d,30\n"


# ---- upload and generation -------------------------------------------------


def test_upload_two_line_edgelist(client):
    r = client.post("/graphs", content=b"1 2\n2 3")
    assert r.status_code == 201
    body = r.json()
    assert body["node-count"] == 3
    assert body["edge-count"] == 2
    assert body["detected-format"] == "edgelist-txt"


def test_upload_empty_body(client):
    r = client.post("/graphs", content=b"")
    assert r.status_code == 400
    assert r.json()["code"] == "parse-error"


def test_upload_filename_hint_wins(client):
    from graphvis.graph import Graph
    g = Graph()
    a, b = g.add_node("a"), g.add_node("b")
    g.add_edge(a, b)
    data = formats.write(g, "gexf")
    r = client.post("/graphs", content=data, params={"filename": "tiny.gexf"})
    assert r.status_code == 201
    assert r.json()["detected-format"] == "gexf"


def test_upload_explicit_format_param(client):
    gid = upload(client, b"a,b\nb,c\n", format="edgelist-csv")
    assert client.get(f"/graphs/{gid}/summary").json()["edge_count"] == 2


def test_upload_malformed_reports_position(client):
    r = client.post("/graphs",
                    content=b"%%MatrixMarket matrix array real general\n1 1\n")
    assert r.status_code == 400
    body = r.json()
    assert body["code"] == "parse-error"
    assert isinstance(body["position"], list) and len(body["position"]) == 2


def test_upload_binary_rejected(client):
    r = client.post("/graphs", content=b"\x00\x01\x02\x03")
    assert r.status_code == 415
    assert r.json()["code"] == "unknown-format"


def test_generate_complete_er(client):
    r = client.post("/graphs", json={"model": "er", "n": 5, "p": 1.0, "seed": 1})
    assert r.status_code == 201
    assert r.json()["edge-count"] == 10
    assert r.json()["detected-format"] is None


def test_generate_invalid_spec(client):
    r = client.post("/graphs", json={"model": "pa", "n": 5, "m": 0, "seed": 1})
    assert r.status_code == 422
    assert r.json()["code"] == "invalid-spec"


def test_list_and_delete(client):
    g1 = upload(client, P3)
    g2 = upload(client, K4)
    listing = client.get("/graphs").json()
    assert [row["graph-id"] for row in listing] == [g1, g2]
    assert listing[1]["edge-count"] == 6

    assert client.delete(f"/graphs/{g1}").status_code == 204
    assert client.get(f"/graphs/{g1}/summary").status_code == 404
    assert client.delete(f"/graphs/{g1}").status_code == 404


# ---- summary and measures ---------------------------------------------------


def test_summary_k3(client):
    gid = upload(client, b"0 1\n1 2\n2 0\n")
    body = client.get(f"/graphs/{gid}/summary").json()
    assert body["node_count"] == 3
    assert body["total_triangles"] == 1
    assert body["max_kcore"] == 2


def test_summary_unknown_graph(client):
    r = client.get("/graphs/g99/summary")
    assert r.status_code == 404
    assert r.json()["code"] == "unknown-graph"


def test_summary_empty_graph(client):
    gid = upload(client, P3)
    r = client.post(f"/graphs/{gid}/filter", params={"materialize": "true"},
                    json=[{"target": "node", "measure": "degree",
                           "op": ">", "threshold": 99}])
    assert r.status_code == 201
    empty = r.json()["graph-id"]
    assert client.get(f"/graphs/{empty}/summary").json()["node_count"] == 0


def test_node_degree_values(client):
    gid = upload(client, P3)
    body = client.get(f"/graphs/{gid}/measures/node/degree").json()
    assert body["values"] == {"0": 1, "1": 2, "2": 1}
    assert body["exact"] is True


def test_edge_triangle_core_on_k4(client):
    gid = upload(client, K4)
    body = client.get(f"/graphs/{gid}/measures/edge/triangle-core").json()
    assert set(body["values"].values()) == {4}


def test_unknown_measure_and_target(client):
    gid = upload(client, P3)
    assert client.get(f"/graphs/{gid}/measures/node/bogus").status_code == 422
    assert client.get(f"/graphs/{gid}/measures/blob/degree").status_code == 422
    # a real measure under the wrong target is still unknown
    assert client.get(f"/graphs/{gid}/measures/edge/degree").status_code == 422


def test_sampled_betweenness_flagged_inexact(client):
    r = client.post("/graphs", json={"model": "er", "n": 30, "p": 0.2, "seed": 3})
    gid = r.json()["graph-id"]
    body = client.get(f"/graphs/{gid}/measures/node/betweenness",
                      params={"sample": 5}).json()
    assert body["exact"] is False
    assert body["sample"] == 5
    # asking for at least n sources collapses back to the exact path
    body = client.get(f"/graphs/{gid}/measures/node/betweenness",
                      params={"sample": 30}).json()
    assert body["exact"] is True


# ---- mutations ---------------------------------------------------------------


def test_mutation_delta_reports_triangle(client):
    gid = upload(client, P3)
    r = client.post(f"/graphs/{gid}/mutations",
                    json=[{"kind": "insert-edge", "u": 0, "v": 2}])
    assert r.status_code == 200
    changed = r.json()["changed"]
    assert changed["total_triangles"] == {"before": 0, "after": 1}
    assert changed["edge_count"] == {"before": 2, "after": 3}


def test_batch_with_bad_id_is_atomic(client):
    gid = upload(client, P3)
    before = client.get(f"/graphs/{gid}/summary").json()
    r = client.post(f"/graphs/{gid}/mutations", json=[
        {"kind": "insert-node", "label": "x"},
        {"kind": "delete-node", "id": 99},
    ])
    assert r.status_code == 409
    assert r.json()["code"] == "unknown-node"
    assert client.get(f"/graphs/{gid}/summary").json() == before


def test_empty_batch_keeps_version(client):
    gid = upload(client, P3)
    v0 = client.get("/graphs").json()[0]["version"]
    r = client.post(f"/graphs/{gid}/mutations", json=[])
    assert r.status_code == 200
    assert r.json()["version"] == v0
    assert r.json()["changed"] == {}


def test_unknown_mutation_kind(client):
    gid = upload(client, P3)
    r = client.post(f"/graphs/{gid}/mutations", json=[{"kind": "explode"}])
    assert r.status_code == 409
    assert r.json()["code"] == "invalid-mutation"


def test_attribute_update_changes_nothing_macro(client):
    gid = upload(client, P3)
    r = client.post(f"/graphs/{gid}/mutations", json=[
        {"kind": "update-attrs", "target": "node", "id": 0,
         "attrs": {"color": "red"}},
    ])
    assert r.status_code == 200
    assert r.json()["changed"] == {}
    assert r.json()["stale"] == []


# ---- filter ------------------------------------------------------------------


def test_filter_keeps_middle_of_path(client):
    gid = upload(client, P3)
    r = client.post(f"/graphs/{gid}/filter",
                    json=[{"target": "node", "measure": "degree",
                           "op": ">=", "threshold": 2}])
    assert r.status_code == 200
    assert r.json()["kept-nodes"] == [1]
    assert r.json()["kept-edges"] == []


def test_filter_materialize_creates_graph(client):
    gid = upload(client, P3)
    r = client.post(f"/graphs/{gid}/filter", params={"materialize": "true"},
                    json=[{"target": "node", "measure": "degree",
                           "op": ">=", "threshold": 2}])
    assert r.status_code == 201
    sub = r.json()["graph-id"]
    body = client.get(f"/graphs/{sub}/summary").json()
    assert (body["node_count"], body["edge_count"]) == (1, 0)


def test_filter_empty_chain(client):
    gid = upload(client, P3)
    r = client.post(f"/graphs/{gid}/filter", json=[])
    assert r.status_code == 400
    assert r.json()["code"] == "empty-filter-chain"


def test_filter_unknown_measure(client):
    gid = upload(client, P3)
    r = client.post(f"/graphs/{gid}/filter",
                    json=[{"target": "node", "measure": "zeta",
                           "op": "<", "threshold": 1}])
    assert r.status_code == 422
    assert r.json()["code"] == "unknown-measure"


# ---- generation into an existing graph ---------------------------------------


def test_insert_clique_adds_triangle(client):
    gid = upload(client, b"lonely\n")  # one isolated node
    r = client.post(f"/graphs/{gid}/insert",
                    json={"model": "pattern", "kind": "clique", "size": 3,
                          "seed": 0, "attach-to": [0]})
    assert r.status_code == 200
    assert len(r.json()["new-nodes"]) == 3
    body = client.get(f"/graphs/{gid}/summary").json()
    assert body["total_triangles"] == 1
    assert body["node_count"] == 4
    assert body["edge_count"] == 4  # triangle plus one attachment


def test_insert_attach_to_unknown_node(client):
    gid = upload(client, P3)
    r = client.post(f"/graphs/{gid}/insert",
                    json={"model": "pattern", "kind": "star", "size": 3,
                          "seed": 0, "attach-to": [42]})
    assert r.status_code == 409
    assert r.json()["code"] == "unknown-node"
    # nothing was applied
    assert client.get(f"/graphs/{gid}/summary").json()["node_count"] == 3


def test_insert_invalid_spec(client):
    gid = upload(client, P3)
    r = client.post(f"/graphs/{gid}/insert",
                    json={"model": "pattern", "kind": "moebius", "size": 3,
                          "seed": 0})
    assert r.status_code == 422


# ---- partitions ---------------------------------------------------------------


def test_community_partition_two_triangles(client):
    gid = upload(client, TWO_K3)
    r = client.post(f"/graphs/{gid}/partitions",
                    json={"method": "community", "seed": 1})
    assert r.status_code == 200
    assert r.json()["group_count"] == 2


def test_role_partition_k4(client):
    gid = upload(client, K4)
    r = client.post(f"/graphs/{gid}/partitions",
                    json={"method": "role", "role-count": 1, "seed": 0})
    assert r.status_code == 200
    assert r.json()["group_count"] == 1


def test_partition_bad_method(client):
    gid = upload(client, K4)
    r = client.post(f"/graphs/{gid}/partitions", json={"method": "zzz"})
    assert r.status_code == 422
    assert r.json()["code"] == "invalid-spec"


def test_partition_count_feeds_summary_until_topology_changes(client):
    gid = upload(client, TWO_K3)
    client.post(f"/graphs/{gid}/partitions",
                json={"method": "community", "seed": 1})
    assert client.get(f"/graphs/{gid}/summary").json()["community_count"] == 2
    client.post(f"/graphs/{gid}/mutations",
                json=[{"kind": "insert-edge", "u": 0, "v": 3}])
    assert client.get(f"/graphs/{gid}/summary").json()["community_count"] is None


# ---- distributions -------------------------------------------------------------


def test_degree_histogram_unit_bins(client):
    gid = upload(client, P3)
    body = client.get(f"/graphs/{gid}/distributions/degree").json()
    assert body["bin_edges"] == [1.0, 2.0, 3.0]
    assert body["counts"] == [2, 1]
    assert body["total"] == 3


def test_distribution_cdf_ends_at_one(client):
    gid = upload(client, K4)
    body = client.get(f"/graphs/{gid}/distributions/degree",
                      params={"kind": "cdf"}).json()
    assert body["curve"][-1] == pytest.approx(1.0)
    body = client.get(f"/graphs/{gid}/distributions/degree",
                      params={"kind": "ccdf"}).json()
    assert body["curve"][0] == pytest.approx(1.0)


def test_distribution_explicit_bins(client):
    gid = upload(client, P3)
    body = client.get(f"/graphs/{gid}/distributions/pagerank",
                      params={"bins": 4}).json()
    assert len(body["counts"]) == 4
    assert body["total"] == 3


def test_distribution_errors(client):
    gid = upload(client, P3)
    assert client.get(f"/graphs/{gid}/distributions/nope").status_code == 422
    r = client.get(f"/graphs/{gid}/distributions/degree",
                   params={"kind": "pie"})
    assert r.status_code == 422
    assert r.json()["code"] == "invalid-value"


def test_distribution_on_empty_graph(client):
    gid = upload(client, P3)
    empty = client.post(f"/graphs/{gid}/filter",
                        params={"materialize": "true"},
                        json=[{"target": "node", "measure": "degree",
                               "op": ">", "threshold": 99}]).json()["graph-id"]
    r = client.get(f"/graphs/{empty}/distributions/degree")
    assert r.status_code == 422
    assert r.json()["code"] == "empty-values"


# ---- temporal -----------------------------------------------------------------


def test_window_extracts_subrange(client):
    gid = upload(client, TEMPORAL_CSV, filename="t.csv")
    r = client.get(f"/graphs/{gid}/window", params={"t0": 10, "t1": 25})
    assert r.status_code == 201
    assert r.json()["edge-count"] == 2


def test_timeline_bins(client):
    gid = upload(client, TEMPORAL_CSV, filename="t.csv")
    body = client.get(f"/graphs/{gid}/timeline", params={"width": 10}).json()
    assert body["counts"] == [1, 1, 1]


def test_temporal_errors(client):
    gid = upload(client, P3)
    r = client.get(f"/graphs/{gid}/timeline", params={"width": 10})
    assert r.status_code == 422
    assert r.json()["code"] == "no-temporal-data"
    gid2 = upload(client, TEMPORAL_CSV, filename="t.csv")
    r = client.get(f"/graphs/{gid2}/window", params={"t0": 25, "t1": 10})
    assert r.status_code == 422
    assert r.json()["code"] == "invalid-value"


# ---- export and layout -----------------------------------------------------------


def test_export_graphml_round_trips(client):
    gid = upload(client, K4)
    r = client.get(f"/graphs/{gid}/export", params={"format": "graphml"})
    assert r.status_code == 200
    assert "xml" in r.headers["content-type"]
    assert "attachment" in r.headers["content-disposition"]
    g2 = formats.parse(r.content, "graphml")
    assert g2.node_count == 4 and g2.edge_count == 6


def test_export_json_content_type(client):
    gid = upload(client, P3)
    r = client.get(f"/graphs/{gid}/export", params={"format": "json"})
    assert r.headers["content-type"].startswith("application/json")
    assert json.loads(r.content)["nodes"]


def test_export_svg_single_node(client):
    gid = upload(client, b"solo\n")
    r = client.get(f"/graphs/{gid}/export", params={"format": "svg"})
    assert r.status_code == 200
    assert r.headers["content-type"].startswith("image/svg+xml")
    assert r.text.count("<circle") == 1


def test_export_svg_uses_stored_layout(client):
    gid = upload(client, P3)
    client.put(f"/graphs/{gid}/layout", json={"positions": {
        "0": [0, 0], "1": [10, 0], "2": [20, 0]}})
    r = client.get(f"/graphs/{gid}/export",
                   params={"format": "svg", "color_by": "degree"})
    assert r.status_code == 200
    assert r.text.count("<circle") == 3


def test_export_png_unsupported(client):
    gid = upload(client, P3)
    r = client.get(f"/graphs/{gid}/export", params={"format": "png"})
    assert r.status_code == 422
    assert r.json()["code"] == "unsupported-export"


def test_export_unknown_format(client):
    gid = upload(client, P3)
    r = client.get(f"/graphs/{gid}/export", params={"format": "vsdx"})
    assert r.status_code == 415


def test_layout_covers_nodes_and_is_seeded(client):
    gid = upload(client, K4)
    a = client.get(f"/graphs/{gid}/layout", params={"seed": 7}).json()
    assert set(a["positions"]) == {"0", "1", "2", "3"}
    b = client.get(f"/graphs/{gid}/layout",
                   params={"seed": 7, "recompute": "true"}).json()
    assert a == b


def test_layout_put_validation(client):
    gid = upload(client, P3)
    r = client.put(f"/graphs/{gid}/layout", json={"positions": {"0": [1]}})
    assert r.status_code == 422
    r = client.put(f"/graphs/{gid}/layout",
                   json={"positions": {"9": [0, 0]}})
    assert r.status_code == 409
    assert r.json()["code"] == "unknown-node"


# ---- workspace, settings, views ----------------------------------------------------


def test_workspace_round_trip_is_lossless(client):
    gid = upload(client, b"ann bob\nbob cyd\n")
    client.post(f"/graphs/{gid}/mutations",
                json=[{"kind": "insert-edge", "u": 0, "v": 2}])
    client.put("/settings", json={"theme": "dark", "fps": 30})
    client.post("/views", json={"name": "dense core", "filters": [
        {"target": "node", "measure": "degree", "op": ">=", "threshold": 2}]})

    before_list = client.get("/graphs").json()
    before_deg = client.get(f"/graphs/{gid}/measures/node/degree").json()

    saved = client.get("/workspace")
    assert saved.status_code == 200
    r = client.put("/workspace", content=saved.content)
    assert r.status_code == 200
    assert r.json()["graph-ids"] == [gid]

    assert client.get("/graphs").json() == before_list
    assert client.get(f"/graphs/{gid}/measures/node/degree").json() == before_deg
    assert client.get("/settings").json() == {"theme": "dark", "fps": 30}
    assert client.get("/views").json()[0]["name"] == "dense core"


def test_workspace_empty_save_loads(client):
    saved = client.get("/workspace")
    r = client.put("/workspace", content=saved.content)
    assert r.status_code == 200
    assert r.json()["graphs"] == 0


def test_workspace_corrupt_rejected(client):
    gid = upload(client, P3)
    r = client.put("/workspace", content=b"{\"format\": \"nope\"}")
    assert r.status_code == 400
    assert r.json()["code"] == "invalid-workspace"
    # failed load must not clear the session
    assert client.get(f"/graphs/{gid}/summary").status_code == 200


def test_workspace_persists_to_disk(tmp_path):
    path = tmp_path / "session.json"
    state = ServiceState(workspace_path=str(path))
    with TestClient(create_app(state)) as client:
        upload(client, P3)
    assert path.exists()

    reopened = TestClient(create_app(ServiceState(workspace_path=str(path))))
    listing = reopened.get("/graphs").json()
    assert len(listing) == 1
    assert listing[0]["node-count"] == 3


def test_settings_reject_non_scalars(client):
    assert client.put("/settings", json={"ok": 1.5}).status_code == 200
    r = client.put("/settings", json={"bad": [1, 2]})
    assert r.status_code == 422


def test_views_validation(client):
    r = client.post("/views", json={"name": "x", "style": {"edge_opacity": 0.2},
                                    "window": {"t0": 0, "t1": 5}})
    assert r.status_code == 201
    assert client.get("/views").json()[0]["style"]["edge_opacity"] == 0.2
    assert client.post("/views", json={}).status_code == 422
    r = client.post("/views", json={"name": "y", "filters": [{"target": "?"}]})
    assert r.status_code == 422


# ---- events ----------------------------------------------------------------------


def test_each_batch_emits_one_event(client):
    gid = upload(client, P3)
    v1 = client.post(f"/graphs/{gid}/mutations",
                     json=[{"kind": "insert-edge", "u": 0, "v": 2}]).json()["version"]
    v2 = client.post(f"/graphs/{gid}/mutations",
                     json=[{"kind": "insert-node", "label": "d"}]).json()["version"]
    events = read_events(client, gid, since=0, n=2)
    assert [e["version"] for e in events] == [v1, v2]
    assert v1 < v2
    assert "edge_count" in events[0]["changed-measures"]


def test_events_since_skips_older(client):
    gid = upload(client, P3)
    v1 = client.post(f"/graphs/{gid}/mutations",
                     json=[{"kind": "insert-edge", "u": 0, "v": 2}]).json()["version"]
    v2 = client.post(f"/graphs/{gid}/mutations",
                     json=[{"kind": "delete-edge", "id": 0}]).json()["version"]
    events = read_events(client, gid, since=v1, n=1)
    assert [e["version"] for e in events] == [v2]


def test_events_unknown_graph(client):
    assert client.get("/graphs/g77/events").status_code == 404


# ---- error envelope ----------------------------------------------------------------


def test_error_bodies_share_one_shape(client):
    gid = upload(client, P3)
    responses = [
        client.post("/graphs", content=b""),
        client.get("/graphs/g99/summary"),
        client.get(f"/graphs/{gid}/measures/node/zzz"),
        client.get(f"/graphs/{gid}/export", params={"format": "bmp"}),
        client.post(f"/graphs/{gid}/mutations", json=[{"kind": "bad"}]),
    ]
    for r in responses:
        body = r.json()
        assert set(body) == {"status", "code", "message", "position"}
        assert body["status"] == r.status_code
        assert isinstance(body["message"], str) and body["message"]


def test_validation_errors_use_invalid_value(client):
    gid = upload(client, P3)
    # width must be a number; the framework-level failure keeps our envelope
    r = client.get(f"/graphs/{gid}/timeline", params={"width": "wide"})
    assert r.status_code == 422
    assert r.json()["code"] == "invalid-value"


# ---- server configuration ------------------------------------------------------------


def test_config_defaults():
    cfg = build_config([])
    assert cfg.port == 8472
    assert cfg.exact_threshold == 10_000
    assert cfg.workspace is None


def test_env_overrides_defaults(monkeypatch):
    monkeypatch.setenv("GRAPHVIS_PORT", "9001")
    monkeypatch.setenv("GRAPHVIS_WORKSPACE", "/tmp/w.json")
    cfg = build_config([])
    assert cfg.port == 9001
    assert cfg.workspace == "/tmp/w.json"


def test_cli_overrides_env(monkeypatch):
    monkeypatch.setenv("GRAPHVIS_PORT", "9001")
    cfg = build_config(["--port", "9100", "--exact-threshold", "50"])
    assert cfg.port == 9100
    assert cfg.exact_threshold == 50


def test_bad_env_value_exits(monkeypatch):
    monkeypatch.setenv("GRAPHVIS_PORT", "lots")
    with pytest.raises(SystemExit):
        build_config([])


def test_out_of_range_port_exits():
    with pytest.raises(SystemExit):
        build_config(["--port", "70000"])
