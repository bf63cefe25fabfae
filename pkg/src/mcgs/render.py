"""Static SVG figures of immersed graphs, simplification overlays and slices."""

from __future__ import annotations

from pathlib import Path
from typing import Optional
from xml.sax.saxutils import escape

from .freespace import compute_slices
from .graph import ImmersedGraph

INPUT_COLOR = "black"
OVERLAY_COLOR = "green"
SLICE_COLOR = "red"


def _fmt(value: float) -> str:
    text = f"{value:.4f}".rstrip("0").rstrip(".")
    return "0" if text in ("-0", "") else text


class _Frame:
    """World to canvas: uniform scale, y pointing up, fixed margin."""

    def __init__(self, points, pad: float, width: float, margin: float = 20.0):
        xs = [p[0] for p in points] or [0.0]
        ys = [p[1] for p in points] or [0.0]
        self.x0, self.x1 = min(xs) - pad, max(xs) + pad
        self.y0, self.y1 = min(ys) - pad, max(ys) + pad
        span = max(self.x1 - self.x0, self.y1 - self.y0, 1e-9)
        self.scale = (width - 2 * margin) / span
        self.margin = margin
        self.width = 2 * margin + (self.x1 - self.x0) * self.scale
        self.height = 2 * margin + (self.y1 - self.y0) * self.scale

    def xy(self, p) -> str:
        x = self.margin + (p[0] - self.x0) * self.scale
        y = self.margin + (self.y1 - p[1]) * self.scale
        return f"{_fmt(x)} {_fmt(y)}"

    def length(self, d: float) -> str:
        return _fmt(d * self.scale)


def _edge_paths(g: ImmersedGraph, frame: _Frame, css: str) -> list[str]:
    out = []
    for u, v in g.edges:
        a, b = g.points[u], g.points[v]
        out.append(f'    <path class="{css}" data-edge="{u}-{v}" d="M {frame.xy(a)} L {frame.xy(b)}"/>')
    return out


def _vertex_marks(g: ImmersedGraph, frame: _Frame, radius: float) -> list[str]:
    out = []
    for v in sorted(g.points):
        x, y = frame.xy(g.points[v]).split()
        title = escape(g.labels.get(v, "") or str(v))
        out.append(f'    <circle cx="{x}" cy="{y}" r="{_fmt(radius)}"><title>{title}</title></circle>')
    return out


def render_svg(
    graph: ImmersedGraph,
    overlay: Optional[ImmersedGraph] = None,
    delta: Optional[float] = None,
    show_slices: bool = False,
    width: float = 800.0,
) -> str:
    """SVG 1.1 text. Input in black, overlay in green.

    With show_slices, red delta-disks are drawn around the overlay vertices (the input's own
    vertices when there is no overlay) and every elementary interval of their slices on the
    input graph is drawn in red.
    """
    if show_slices and not (delta is not None and delta > 0):
        raise ValueError("showing slices needs a positive delta")
    pts = list(graph.points.values()) + (list(overlay.points.values()) if overlay else [])
    pad = delta if show_slices else 0.05 * max(1e-9, _extent(pts))
    frame = _Frame(pts, pad, width)
    dot = 3.0
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_fmt(frame.width)}" '
        f'height="{_fmt(frame.height)}" viewBox="0 0 {_fmt(frame.width)} {_fmt(frame.height)}">',
        f'  <g id="input" stroke="{INPUT_COLOR}" fill="{INPUT_COLOR}" stroke-width="1.5">',
        *_edge_paths(graph, frame, "edge"),
        *_vertex_marks(graph, frame, dot),
        "  </g>",
    ]
    if overlay is not None:
        lines += [
            f'  <g id="overlay" stroke="{OVERLAY_COLOR}" fill="{OVERLAY_COLOR}" stroke-width="2.5" opacity="0.8">',
            *_edge_paths(overlay, frame, "edge"),
            *_vertex_marks(overlay, frame, dot + 1),
            "  </g>",
        ]
    if show_slices:
        centers = overlay if overlay is not None else graph
        slices = compute_slices(centers, graph, delta)
        lines.append(f'  <g id="slices" stroke="{SLICE_COLOR}" fill="none">')
        for v in sorted(centers.points):
            x, y = frame.xy(centers.points[v]).split()
            lines.append(f'    <circle class="disk" cx="{x}" cy="{y}" r="{frame.length(delta)}" stroke-dasharray="4 3"/>')
        for v in sorted(slices):
            for iv in slices[v].intervals:
                seg = graph.edge_segment(iv.edge)
                a, b = seg.at(iv.interval.lo), seg.at(iv.interval.hi)
                lines.append(
                    f'    <path class="interval" data-owner="{v}" data-edge="{iv.edge}" stroke-width="5" '
                    f'd="M {frame.xy(a)} L {frame.xy(b)}"/>'
                )
        lines.append("  </g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _extent(pts) -> float:
    if not pts:
        return 1.0
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    return max(max(xs) - min(xs), max(ys) - min(ys), 1.0)


def write_svg(path, graph: ImmersedGraph, **kwargs) -> None:
    Path(path).write_text(render_svg(graph, **kwargs))
