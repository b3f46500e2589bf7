"""SVG 1.1 rendering of a map.

Species are rounded rectangles (DNA elements plain), interactions are
orthogonal polylines ending in a glyph-specific marker. Marker geometry is
deliberately collected in one table so the shapes can be corrected in a
single place.
"""

from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape, quoteattr

from ..errors import InvalidMap
from ..model import InteractionKind, SceneMap, SpeciesKind
from .mapxml import fmt_num


@dataclass(frozen=True)
class SvgStyle:
    padding: float = 24.0
    node_fill: str = "#eef4fb"
    node_stroke: str = "#2c577d"
    node_stroke_width: float = 1.5
    edge_stroke: str = "#333333"
    edge_stroke_width: float = 1.5
    font_family: str = "Helvetica, Arial, sans-serif"
    font_size: float = 12.0
    marker_scale: float = 9.0


DEFAULT_STYLE = SvgStyle()

# one marker per glyph, drawn in a 10x10 box with the line arriving from the
# left at y=5 and the tip at x=10
MARKER_SHAPES: dict[InteractionKind, str] = {
    InteractionKind.COVALENT_MODIFICATION:
        '<path d="M0,1.5 L10,5 L0,8.5 z" fill="{stroke}"/>',
    InteractionKind.NON_COVALENT_BINDING:
        '<path d="M0,0 L10,5 L0,10 M4,1.5 L10,5 L4,8.5" fill="none" stroke="{stroke}" stroke-width="1.4"/>',
    InteractionKind.STIMULATION:
        '<path d="M0,0.5 L10,5 L0,9.5" fill="none" stroke="{stroke}" stroke-width="1.4"/>',
    InteractionKind.INHIBITION:
        '<path d="M8.6,0 L8.6,10" fill="none" stroke="{stroke}" stroke-width="2.2"/>',
    InteractionKind.TRANSCRIPTION:
        '<path d="M0,1.5 L10,5 L0,8.5 z M0,0 L0,10" fill="{stroke}" stroke="{stroke}" stroke-width="1"/>',
    InteractionKind.CLEAVAGE:
        '<path d="M1,1 L9,9 M9,1 L1,9" fill="none" stroke="{stroke}" stroke-width="1.6"/>',
    InteractionKind.DEGRADATION:
        '<g fill="none" stroke="{stroke}" stroke-width="1.4"><circle cx="5" cy="5" r="4"/><path d="M2.2,7.8 L7.8,2.2"/></g>',
    InteractionKind.CATALYSIS:
        '<circle cx="5" cy="5" r="4" fill="white" stroke="{stroke}" stroke-width="1.4"/>',
}


def render_svg(scene: SceneMap, style: SvgStyle = DEFAULT_STYLE) -> bytes:
    violations = scene.validate()
    if violations:
        raise InvalidMap("; ".join(str(v) for v in violations))

    x1, y1, x2, y2 = _content_bbox(scene, style.padding)
    out: list[str] = []
    out.append('<?xml version="1.0" encoding="UTF-8"?>')
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="{fmt_num(x1)} {fmt_num(y1)} {fmt_num(x2 - x1)} {fmt_num(y2 - y1)}" '
        f'width="{fmt_num(x2 - x1)}" height="{fmt_num(y2 - y1)}">'
    )

    out.append("  <defs>")
    for kind in sorted(MARKER_SHAPES, key=lambda k: k.value):
        shape = MARKER_SHAPES[kind].format(stroke=style.edge_stroke)
        s = style.marker_scale
        out.append(
            f'    <marker id="mk-{kind.value}" viewBox="0 0 10 10" refX="10" refY="5" '
            f'markerWidth="{fmt_num(s)}" markerHeight="{fmt_num(s)}" '
            f'markerUnits="userSpaceOnUse" orient="auto">{shape}</marker>'
        )
    out.append("  </defs>")

    for nid in sorted(scene.nodes):
        node = scene.nodes[nid]
        radius = 0.0 if node.kind is SpeciesKind.DNA else node.r
        out.append(
            f'  <rect id={quoteattr("n-" + nid)} x="{fmt_num(node.x)}" y="{fmt_num(node.y)}" '
            f'width="{fmt_num(node.w)}" height="{fmt_num(node.h)}" '
            f'rx="{fmt_num(radius)}" ry="{fmt_num(radius)}" '
            f'fill="{style.node_fill}" stroke="{style.node_stroke}" '
            f'stroke-width="{fmt_num(style.node_stroke_width)}"/>'
        )

    for eid in sorted(scene.edges):
        edge = scene.edges[eid]
        points = " ".join(f"{fmt_num(x)},{fmt_num(y)}" for x, y in edge.waypoints)
        out.append(
            f'  <polyline id={quoteattr("e-" + eid)} points="{points}" fill="none" '
            f'stroke="{style.edge_stroke}" stroke-width="{fmt_num(style.edge_stroke_width)}" '
            f'marker-end="url(#mk-{edge.kind.value})"/>'
        )

    for nid in sorted(scene.nodes):
        node = scene.nodes[nid]
        cx, cy = node.center
        out.append(
            f'  <text id={quoteattr("t-" + nid)} x="{fmt_num(cx)}" y="{fmt_num(cy)}" '
            f'text-anchor="middle" dominant-baseline="middle" '
            f'font-family="{style.font_family}" font-size="{fmt_num(style.font_size)}">'
            f'{escape(node.label)}</text>'
        )

    out.append("</svg>")
    return ("\n".join(out) + "\n").encode("utf-8")


def _content_bbox(scene: SceneMap, pad: float) -> tuple[float, float, float, float]:
    xs: list[float] = []
    ys: list[float] = []
    for node in scene.nodes.values():
        xs.extend((node.x, node.x + node.w))
        ys.extend((node.y, node.y + node.h))
    for edge in scene.edges.values():
        for x, y in edge.waypoints:
            xs.append(x)
            ys.append(y)
    if not xs:
        return (0.0, 0.0, 2 * pad, 2 * pad)
    return (min(xs) - pad, min(ys) - pad, max(xs) + pad, max(ys) + pad)
