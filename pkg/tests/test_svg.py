import math
import re
import xml.etree.ElementTree as ET

import pytest

from graphvis.analytics import degrees
from graphvis.errors import (
    InvalidSpecError,
    InvalidValueError,
    MissingLayoutError,
    UnknownMeasureError,
)
from graphvis.formats.svg import StyleSpec, export_svg
from graphvis.graph import Graph
from graphvis.layout import force_layout

from conftest import build, clique, star


def grid_layout(g):
    return {nid: (float(i % 4), float(i // 4))
            for i, nid in enumerate(sorted(g.nodes))}


def fills(svg: str) -> list[str]:
    return re.findall(r'<circle[^>]*fill="([^"]+)"', svg)


def test_single_node_one_circle_no_lines():
    g = Graph()
    g.add_node()
    svg = export_svg(g, {0: (0.0, 0.0)})
    assert svg.count("<circle") == 1
    assert svg.count("<line") == 0


def test_k3_counts(k3):
    svg = export_svg(k3, grid_layout(k3))
    assert svg.count("<line") == 3
    assert svg.count("<circle") == 3


def test_edges_render_before_nodes(k3):
    svg = export_svg(k3, grid_layout(k3))
    assert svg.rindex("<line") < svg.index("<circle")


def test_color_by_degree_separates_star_center():
    g = star(3)
    svg = export_svg(g, grid_layout(g), StyleSpec(color_by="degree"),
                     {"degree": degrees(g).values})
    colors = fills(svg)
    assert len(colors) == 4
    assert colors[0] != colors[1]          # hub vs leaf
    assert len(set(colors[1:])) == 1       # all leaves alike


def test_constant_measure_uses_midpoint_not_crash(k3):
    svg = export_svg(k3, grid_layout(k3), StyleSpec(color_by="degree"),
                     {"degree": degrees(k3).values})
    assert len(set(fills(svg))) == 1


def test_size_by_scales_radii():
    g = star(4)
    svg = export_svg(g, grid_layout(g), StyleSpec(size_by="degree"),
                     {"degree": degrees(g).values})
    radii = [float(r) for r in re.findall(r'r="([0-9.]+)"', svg)]
    assert max(radii) > min(radii)


def test_output_is_well_formed_svg11(k4):
    svg = export_svg(k4, grid_layout(k4))
    root = ET.fromstring(svg)
    assert root.tag.endswith("svg")
    assert root.get("version") == "1.1"


def test_missing_layout_entry_rejected(k3):
    with pytest.raises(MissingLayoutError):
        export_svg(k3, {0: (0.0, 0.0), 1: (1.0, 0.0)})
    with pytest.raises(InvalidValueError):
        export_svg(k3, {0: (0.0, 0.0), 1: (1.0, 0.0), 2: (float("nan"), 0.0)})


def test_style_validation():
    with pytest.raises(InvalidSpecError):
        StyleSpec(node_size=(0.0, 5.0))
    with pytest.raises(InvalidSpecError):
        StyleSpec(node_size=(6.0, 5.0))
    with pytest.raises(InvalidSpecError):
        StyleSpec(edge_opacity=1.5)


def test_color_by_requires_values(k3):
    with pytest.raises(UnknownMeasureError):
        export_svg(k3, grid_layout(k3), StyleSpec(color_by="degree"), {})


def test_export_deterministic(k4):
    layout = grid_layout(k4)
    assert export_svg(k4, layout) == export_svg(k4, layout)


def test_empty_graph_renders_background_only():
    svg = export_svg(Graph(), {})
    assert svg.count("<circle") == 0
    assert "<rect" in svg


# ---- force layout ----------------------------------------------------------------


def test_layout_covers_all_nodes_finite(k4):
    pos = force_layout(k4, seed=3)
    assert set(pos) == set(k4.nodes)
    for x, y in pos.values():
        assert math.isfinite(x) and math.isfinite(y)


def test_layout_deterministic(k4):
    assert force_layout(k4, seed=9) == force_layout(k4, seed=9)
    assert force_layout(k4, seed=9) != force_layout(k4, seed=10)


def test_layout_trivial_sizes():
    assert force_layout(Graph()) == {}
    g = Graph()
    g.add_node()
    assert force_layout(g) == {0: (0.0, 0.0)}


def test_layout_separates_cliques():
    # two K4s joined by one edge should end up in distinct regions
    g = clique(4)
    other = [g.add_node() for _ in range(4)]
    for i in range(4):
        for j in range(i + 1, 4):
            g.add_edge(other[i], other[j])
    g.add_edge(0, other[0])
    pos = force_layout(g, seed=1, iterations=150)
    ax = sum(pos[i][0] for i in range(4)) / 4
    ay = sum(pos[i][1] for i in range(4)) / 4
    bx = sum(pos[i][0] for i in other) / 4
    by = sum(pos[i][1] for i in other) / 4
    centroid_gap = math.dist((ax, ay), (bx, by))
    spread = max(math.dist(pos[i], pos[j]) for i in range(4) for j in range(4) if i != j)
    assert centroid_gap > spread * 0.5


def test_layout_feeds_svg(k4):
    svg = export_svg(k4, force_layout(k4, seed=2))
    assert svg.count("<circle") == 4
