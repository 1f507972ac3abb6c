"""Deterministic SVG 1.1 rendering of a laid-out graph.

Edges draw first so nodes sit on top; both run in ascending id order with
a fixed attribute order, making exports byte-stable and diffable.  Node
color and radius can follow a measure: the measure minimum maps to a cool
hue (blue), the maximum to a warm one (red).
"""

from __future__ import annotations

import colorsys
import math
from dataclasses import dataclass

from ..errors import InvalidSpecError, InvalidValueError, MissingLayoutError, UnknownMeasureError
from ..graph import Graph

_COOL_HUE = 240.0  # degrees; min of scale
_WARM_HUE = 0.0    # max of scale


@dataclass
class StyleSpec:
    color_by: str | None = None
    size_by: str | None = None
    node_size: tuple[float, float] = (5.0, 14.0)
    edge_opacity: float = 0.5
    background: str = "#ffffff"
    node_color: str = "#4878a8"   # used when color_by is unset
    edge_color: str = "#999999"
    width: int = 800
    height: int = 600
    margin: float = 24.0

    def __post_init__(self):
        lo, hi = self.node_size
        if lo <= 0 or lo > hi:
            raise InvalidSpecError("node size range must be positive with min <= max")
        if not 0.0 <= self.edge_opacity <= 1.0:
            raise InvalidSpecError("edge opacity must lie in [0, 1]")
        if self.width <= 0 or self.height <= 0:
            raise InvalidSpecError("canvas must have positive dimensions")


def _hue_color(t: float) -> str:
    hue = _COOL_HUE + (_WARM_HUE - _COOL_HUE) * t
    r, g, b = colorsys.hls_to_rgb(hue / 360.0, 0.5, 0.8)
    return "#{:02x}{:02x}{:02x}".format(round(r * 255), round(g * 255),
                                        round(b * 255))


def _normalized(t_values: dict[int, float]) -> dict[int, float]:
    lo = min(t_values.values())
    hi = max(t_values.values())
    if hi == lo:
        return {k: 0.5 for k in t_values}
    return {k: (v - lo) / (hi - lo) for k, v in t_values.items()}


def _fit(layout, nodes, width, height, margin):
    xs = [layout[n][0] for n in nodes]
    ys = [layout[n][1] for n in nodes]
    spanx = max(xs) - min(xs) or 1.0
    spany = max(ys) - min(ys) or 1.0
    fx = (width - 2 * margin) / spanx
    fy = (height - 2 * margin) / spany
    x0, y0 = min(xs), min(ys)
    return {n: (margin + (layout[n][0] - x0) * fx,
                margin + (layout[n][1] - y0) * fy) for n in nodes}


def export_svg(g: Graph, layout: dict[int, tuple[float, float]],
               style: StyleSpec | None = None,
               measures: dict[str, dict[int, float]] | None = None) -> str:
    """Render nodes and edges to SVG text.

    ``layout`` must cover every node with finite coordinates.  ``measures``
    supplies the value maps referenced by ``style.color_by``/``size_by``.
    """
    style = style or StyleSpec()
    measures = measures or {}
    for nid in g.nodes:
        if nid not in layout:
            raise MissingLayoutError(f"no layout position for node {nid}")
        x, y = layout[nid]
        if not (math.isfinite(x) and math.isfinite(y)):
            raise InvalidValueError(f"non-finite position for node {nid}")

    def scale_for(measure_id):
        if measure_id not in measures:
            raise UnknownMeasureError(
                f"style references measure {measure_id!r} but no values were given")
        vals = measures[measure_id]
        missing = [n for n in g.nodes if n not in vals]
        if missing:
            raise InvalidValueError(
                f"measure {measure_id!r} lacks values for {len(missing)} nodes")
        return _normalized({n: float(vals[n]) for n in g.nodes})

    color_t = scale_for(style.color_by) if style.color_by and g.nodes else None
    size_t = scale_for(style.size_by) if style.size_by and g.nodes else None

    pos = _fit(layout, list(g.nodes), style.width, style.height,
               style.margin) if g.nodes else {}
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{style.width}" height="{style.height}" '
        f'viewBox="0 0 {style.width} {style.height}">',
        f'  <rect width="{style.width}" height="{style.height}" '
        f'fill="{style.background}"/>',
    ]
    for eid in sorted(g.edges):
        e = g.edges[eid]
        x1, y1 = pos[e.u]
        x2, y2 = pos[e.v]
        lines.append(
            f'  <line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
            f'stroke="{style.edge_color}" stroke-opacity="{style.edge_opacity}"/>')
    rmin, rmax = style.node_size
    for nid in sorted(g.nodes):
        x, y = pos[nid]
        fill = _hue_color(color_t[nid]) if color_t else style.node_color
        r = rmin + (rmax - rmin) * size_t[nid] if size_t else rmin
        lines.append(f'  <circle cx="{x:.2f}" cy="{y:.2f}" r="{r:.2f}" '
                     f'fill="{fill}"/>')
    lines.append('</svg>')
    return "\n".join(lines) + "\n"
