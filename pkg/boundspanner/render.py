"""SVG rendering of a spanner: core edges solid, wedge-only edges dashed, points as dots."""

from __future__ import annotations

from typing import TYPE_CHECKING

from boundspanner.config import COLORS

if TYPE_CHECKING:
    from pathlib import Path

    from boundspanner.spanner import SpannerGraph

SVG_NS = "http://www.w3.org/2000/svg"
CANVAS = 800.0
MARGIN = 20.0


def _rounder(value: float, digits: int = 3) -> float | int:
    rounded = round(value, digits)
    return int(rounded) if rounded.is_integer() else rounded


def _props(attrs: dict[str, object]) -> str:
    parts = []
    for key, value in attrs.items():
        shown = _rounder(value) if isinstance(value, float) else value
        parts.append(f'{key.replace("_", "-")}="{shown}"')
    return " ".join(parts)


def _element(tag: str, **attrs: object) -> str:
    return f"<{tag} {_props(attrs)}/>"


def render_svg(g: SpannerGraph, *, size: float = CANVAS, point_radius: float = 2.5) -> str:
    """One ``<line>`` per edge of ``E ∪ E*`` and one ``<circle>`` per point.

    Coordinates are scaled uniformly into the canvas with the y axis pointing up.
    """
    xy = g.points.array
    lo = xy.min(axis=0) if len(xy) else (0.0, 0.0)
    hi = xy.max(axis=0) if len(xy) else (1.0, 1.0)
    span = max(float(hi[0] - lo[0]), float(hi[1] - lo[1])) or 1.0
    scale = (size - 2 * MARGIN) / span

    def to_canvas(index: int) -> tuple[float, float]:
        x, y = xy[index]
        return MARGIN + (float(x) - lo[0]) * scale, size - MARGIN - (float(y) - lo[1]) * scale

    body = []
    for e in sorted(g.edges, key=lambda e: e.key):
        (x1, y1), (x2, y2) = to_canvas(e.u), to_canvas(e.v)
        style: dict[str, object] = {"stroke": COLORS["core"], "stroke_width": 1.5}
        if e not in g.core_edges:
            style = {"stroke": COLORS["wedge"], "stroke_width": 1.0, "stroke_dasharray": "4 3"}
        body.append(_element("line", x1=x1, y1=y1, x2=x2, y2=y2, **style))
    for index in range(len(g.points)):
        cx, cy = to_canvas(index)
        body.append(_element("circle", cx=cx, cy=cy, r=point_radius, fill=COLORS["error"]))

    header = _props(
        {"xmlns": SVG_NS, "width": size, "height": size, "viewBox": f"0 0 {size:g} {size:g}"}
    )
    rect = _element("rect", width="100%", height="100%", fill="white")
    return "\n".join([f"<svg {header}>", rect, *body, "</svg>"]) + "\n"


def save_svg(g: SpannerGraph, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_svg(g))
