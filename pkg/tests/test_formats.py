import random

import pytest

from graphvis import formats
from graphvis.errors import (
    InvalidSpecError,
    MissingLayoutError,
    ParseError,
    UnknownFormatError,
    UnknownMeasureError,
)
from graphvis.formats import (
    CANONICAL_EXTENSION,
    FORMAT_IDS,
    StyleSpec,
    detect_format,
    export_svg,
    parse,
    write,
)
from graphvis.graph import Graph

from conftest import build, clique, star
from oracles import random_simple_graph


def by_label(g: Graph) -> dict[str, int]:
    labels = {}
    for nid, rec in g.nodes.items():
        assert rec.label not in labels, "labels must be unique for this check"
        labels[rec.label] = nid
    return labels


def label_edges(g: Graph) -> set[frozenset]:
    return {frozenset((g.nodes[e.u].label, g.nodes[e.v].label))
            for e in g.edges.values()}


def assert_isomorphic_by_label(a: Graph, b: Graph):
    assert {r.label for r in a.nodes.values()} \
        == {r.label for r in b.nodes.values()}
    assert a.node_count == b.node_count
    assert label_edges(a) == label_edges(b)


def corpus_graph(seed: int, weights=False, stamps=False, attrs=False) -> Graph:
    rng = random.Random(seed)
    g = random_simple_graph(rng, rng.randrange(2, 14), 0.3, labels=True)
    if weights:
        for e in g.edges.values():
            g.update_edge(e.id, weight=rng.choice([0.5, 2.0, 3.25]))
    if stamps:
        for e in g.edges.values():
            g.update_edge(e.id, ts=float(rng.randrange(100)))
    if attrs:
        for nid in g.nodes:
            g.update_node(nid, attrs={"group": rng.randrange(3),
                                      "kind": rng.choice(["a", "b"]),
                                      "score": rng.random()})
    return g


# ---- frozen parse examples -------------------------------------------------------


def test_edgelist_two_lines():
    g = parse(b"1 2\n2 3\n", "edgelist-txt")
    assert (g.node_count, g.edge_count) == (3, 2)
    ids = by_label(g)
    assert len(g.adj[ids["2"]]) == 2
    assert len(g.adj[ids["1"]]) == 1


def test_pajek_example():
    text = b'*Vertices 3\n1 "a"\n2 "b"\n3 "c"\n*Edges\n1 2\n'
    g = parse(text, "pajek")
    assert (g.node_count, g.edge_count) == (3, 1)
    assert g.nodes[0].label == "a"


def test_mtx_example():
    text = b"%%MatrixMarket matrix coordinate pattern symmetric\n3 3 2\n2 1\n3 2\n"
    g = parse(text, "mtx")
    assert (g.node_count, g.edge_count) == (3, 2)


def test_edgelist_comments_and_isolated():
    g = parse(b"% comment\n# another\na b\nc\n", "edgelist-txt")
    assert (g.node_count, g.edge_count) == (3, 1)
    assert "c" in by_label(g)


def test_edgelist_weight_and_time_columns():
    g = parse(b"a b 2.5 100\nb c 1.0 200\n", "edgelist-txt")
    e = next(iter(g.edges.values()))
    assert {x.weight for x in g.edges.values()} == {2.5, 1.0}
    assert {x.ts for x in g.edges.values()} == {100.0, 200.0}
    assert e.ts is not None


def test_csv_header_reorders_columns():
    g = parse(b"source,target,time,weight\na,b,50,2.0\n", "edgelist-csv")
    e = next(iter(g.edges.values()))
    assert e.ts == 50.0
    assert e.weight == 2.0


def test_duplicate_edges_keep_first_weight():
    g = parse(b"a b 2.0\na b 9.0\nb a 7.0\n", "edgelist-txt")
    assert g.edge_count == 1
    assert next(iter(g.edges.values())).weight == 2.0


def test_self_loops_dropped():
    g = parse(b"a a\na b\n", "edgelist-txt")
    assert (g.node_count, g.edge_count) == (2, 1)


def test_mtx_diagonal_dropped_and_general_merged():
    text = b"%%MatrixMarket matrix coordinate pattern general\n3 3 4\n1 1\n1 2\n2 1\n2 3\n"
    g = parse(text, "mtx")
    assert g.edge_count == 2


# ---- frozen write examples -------------------------------------------------------


def test_write_p3_tsv_two_data_lines(p3):
    text = write(p3, "edgelist-tsv").decode()
    rows = [ln for ln in text.splitlines() if ln]
    assert rows[0].startswith("source\ttarget")
    assert len(rows) - 1 == 2


def test_write_empty_gml():
    g = Graph()
    text = write(g, "gml").decode()
    assert text.startswith("graph [")
    assert "node [" not in text


def test_gexf_k4_round_trip(k4):
    for nid in k4.nodes:
        k4.update_node(nid, label=f"member_{nid}")
    again = parse(write(k4, "gexf"), "gexf")
    assert_isomorphic_by_label(k4, again)


# ---- detection -------------------------------------------------------------------


def test_detect_by_extension():
    assert detect_format("a.mtx", b"%%MatrixMarket matrix coordinate") == "mtx"
    assert detect_format("net.graphml", b"<graphml>") == "graphml"
    assert detect_format("x.gexf", b"whatever") == "gexf"
    assert detect_format("g.net", b"*Vertices 2") == "pajek"


def test_detect_by_content():
    assert detect_format("data.xyz", b"1 2\n2 3") == "edgelist-txt"
    assert detect_format("", b"%%MatrixMarket matrix coordinate real general") == "mtx"
    assert detect_format("", b'<?xml version="1.0"?>\n<gexf version="1.3">') == "gexf"
    assert detect_format("", b'<?xml version="1.0"?>\n<graphml>') == "graphml"
    assert detect_format("", b'{"nodes": []}') == "json"
    assert detect_format("", b"*vertices 3\n1\n") == "pajek"
    assert detect_format("", b'Creator "x"\ngraph [\n]') == "gml"
    assert detect_format("", b"a,b\nb,c") == "edgelist-csv"
    assert detect_format("", b"a\tb\n") == "edgelist-tsv"


def test_detect_rejects_binary_and_empty():
    with pytest.raises(UnknownFormatError):
        detect_format("mystery.bin", b"\x00\x01\x02")
    with pytest.raises(UnknownFormatError):
        detect_format("empty.xyz", b"")
    with pytest.raises(UnknownFormatError):
        detect_format("", b"<svg></svg>")


def test_detect_canonical_writes():
    g = corpus_graph(3, weights=True)
    for fmt in FORMAT_IDS:
        data = write(g, fmt)
        name = "sample" + CANONICAL_EXTENSION[fmt]
        assert detect_format(name, data[:512]) == fmt
        # content sniffing alone identifies the self-describing dialects
        if fmt not in ("edgelist-txt", "edgelist-csv", "edgelist-tsv", "gml"):
            assert detect_format("", data[:512]) == fmt


# ---- round-trips -----------------------------------------------------------------


@pytest.mark.parametrize("fmt", FORMAT_IDS)
def test_round_trip_structure_and_labels(fmt):
    for seed in range(8):
        g = corpus_graph(seed)
        again = parse(write(g, fmt), fmt)
        assert_isomorphic_by_label(g, again)


@pytest.mark.parametrize("fmt", FORMAT_IDS)
def test_round_trip_weights(fmt):
    g = corpus_graph(77, weights=True)
    again = parse(write(g, fmt), fmt)
    assert_isomorphic_by_label(g, again)
    want = {frozenset((g.nodes[e.u].label, g.nodes[e.v].label)): e.weight
            for e in g.edges.values()}
    got = {frozenset((again.nodes[e.u].label, again.nodes[e.v].label)): e.weight
           for e in again.edges.values()}
    assert want == got


@pytest.mark.parametrize("fmt", ["json", "graphml", "gexf", "gml",
                                 "edgelist-txt", "edgelist-csv", "edgelist-tsv"])
def test_round_trip_timestamps(fmt):
    g = corpus_graph(42, stamps=True)
    again = parse(write(g, fmt), fmt)
    want = {frozenset((g.nodes[e.u].label, g.nodes[e.v].label)): e.ts
            for e in g.edges.values()}
    got = {frozenset((again.nodes[e.u].label, again.nodes[e.v].label)): e.ts
           for e in again.edges.values()}
    assert want == got


@pytest.mark.parametrize("fmt", ["json", "graphml", "gexf", "gml"])
def test_round_trip_attrs(fmt):
    g = corpus_graph(13, attrs=True)
    again = parse(write(g, fmt), fmt)
    want = {rec.label: rec.attrs for rec in g.nodes.values()}
    got = {rec.label: rec.attrs for rec in again.nodes.values()}
    assert want == got


@pytest.mark.parametrize("fmt", FORMAT_IDS)
def test_round_trip_isolated_nodes(fmt):
    g = Graph()
    g.add_node(label="lonely")
    g.add_node(label="left")
    g.add_node(label="right")
    g.add_edge(1, 2)
    again = parse(write(g, fmt), fmt)
    assert_isomorphic_by_label(g, again)


@pytest.mark.parametrize("fmt", FORMAT_IDS)
def test_round_trip_empty(fmt):
    g = Graph()
    again = parse(write(g, fmt), fmt)
    assert (again.node_count, again.edge_count) == (0, 0)


def test_unsafe_labels_fall_back_to_ids():
    g = Graph()
    g.add_node(label="has space")
    g.add_node(label="plain")
    g.add_edge(0, 1)
    again = parse(write(g, "edgelist-txt"), "edgelist-txt")
    assert (again.node_count, again.edge_count) == (2, 1)  # structure survives


def test_json_preserves_node_ts_and_directed():
    g = Graph(directed=True)
    g.add_node(label="a", ts=5.0)
    g.add_node(label="b")
    g.add_edge(0, 1, weight=2.0)
    again = parse(write(g, "json"), "json")
    assert again.directed
    assert again.nodes[by_label(again)["a"]].ts == 5.0


# ---- malformed inputs ------------------------------------------------------------


MALFORMED = [
    ("edgelist-txt", b"a b\nc d e f g\n", 2),
    ("edgelist-csv", b"a,b\nx,y,notanumber\n", 2),
    ("edgelist-tsv", b"a\tb\tweightless\n", 1),
    ("mtx", b"not a matrix\n1 2\n", 1),
    ("mtx", b"%%MatrixMarket matrix coordinate pattern symmetric\n3 4 1\n1 2\n", 2),
    ("mtx", b"%%MatrixMarket matrix coordinate pattern symmetric\n3 3 1\n9 2\n", 3),
    ("mtx", b"%%MatrixMarket matrix array real general\n3 3\n", 1),
    ("gml", b"graph [\n  node [\n    label \"x\"\n  ]\n]\n", 2),
    ("gml", b"graph [\n  edge [\n    source 0\n    target 9\n  ]\n]\n", 2),
    ("gml", b"graph [\n  node [ id 0 ]\n  node [ id 0 ]\n]\n", 3),
    ("gml", b"digraph {}\n", 1),
    ("pajek", b"*Vertices two\n", 1),
    ("pajek", b"*Vertices 2\n1 \"a\"\n*Edges\n1 5\n", 4),
    ("pajek", b"1 2\n", 1),
    ("json", b'{"nodes": [', 1),
    ("json", b'{"links": []}', 1),
    ("json", b'{"nodes": [{"id": 1}, {"id": 1}], "links": []}', 1),
    ("json", b'{"nodes": [{"id": 1}], "links": [{"source": 1, "target": 2}]}', 1),
    ("graphml", b"<graphml><graph><node id='a'/><node id='a'/></graph></graphml>", 1),
    ("graphml", b"<graphml><graph><edge source='a' target='b'/></graph></graphml>", 1),
    ("graphml", b"<graphml><graph><node id='a'>", 1),
    ("gexf", b"<gexf><graph><nodes><node/></nodes></graph></gexf>", 1),
    ("gexf", b"<gexf><graph><nodes><node id='1'/></nodes>"
             b"<edges><edge source='1' target='9'/></edges></graph></gexf>", 1),
    ("mtx", b"%%MatrixMarket matrix coordinate pattern symmetric\n", 1),
]


@pytest.mark.parametrize("fmt,data,min_line", MALFORMED)
def test_malformed_inputs_report_position(fmt, data, min_line):
    with pytest.raises(ParseError) as info:
        parse(data, fmt)
    err = info.value
    assert err.line >= min_line
    assert err.column >= 1
    assert str(err)


def test_invalid_utf8_reports_position():
    with pytest.raises(ParseError):
        parse(b"a b\n\xff\xfe c\n", "edgelist-txt")


def test_unknown_format_id_rejected(p3):
    with pytest.raises(UnknownFormatError):
        parse(b"1 2\n", "xml")
    with pytest.raises(UnknownFormatError):
        write(p3, "dot")


# ---- determinism -----------------------------------------------------------------


@pytest.mark.parametrize("fmt", FORMAT_IDS)
def test_writes_are_deterministic(fmt):
    g = corpus_graph(5, weights=True, attrs=True)
    assert write(g, fmt) == write(g, fmt)
