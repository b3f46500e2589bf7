"""The mimgraph-xml v1 dialect: read and write whole maps.

See docs/mimgraph-xml-v1.md for the bit-exact description. Output is
deterministic: nodes and edges sorted by id, numbers printed as the
shortest decimal that parses back to the same double.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET

from .. import geometry
from ..errors import (
    InvalidMap,
    MalformedXml,
    SchemaViolation,
    UnresolvedAnchor,
    UnsupportedVersion,
)
from ..model import (
    SCHEMA_VERSION,
    EdgeAnchor,
    InteractionEdge,
    InteractionKind,
    MapMeta,
    NodeAnchor,
    RoutingMode,
    SceneMap,
    Side,
    SpeciesKind,
    SpeciesNode,
)

XML_DECLARATION = '<?xml version="1.0" encoding="UTF-8"?>\n'


def fmt_num(v: float) -> str:
    """Shortest decimal that round-trips: integral doubles print bare."""
    f = float(v)
    if f.is_integer():
        return str(int(f))
    return repr(f)


def serialize_map(scene: SceneMap) -> bytes:
    """Write a validated map as canonical mimgraph-xml v1 bytes."""
    violations = scene.validate()
    if violations:
        raise InvalidMap("; ".join(str(v) for v in violations))

    root = ET.Element("map", {"version": SCHEMA_VERSION})
    if scene.meta.name:
        root.set("name", scene.meta.name)
    if scene.meta.created:
        root.set("created", scene.meta.created)

    for nid in sorted(scene.nodes):
        n = scene.nodes[nid]
        ET.SubElement(root, "node", {
            "id": n.id,
            "kind": n.kind.value,
            "label": n.label,
            "x": fmt_num(n.x),
            "y": fmt_num(n.y),
            "w": fmt_num(n.w),
            "h": fmt_num(n.h),
            "r": fmt_num(n.r),
        })

    for eid in sorted(scene.edges):
        e = scene.edges[eid]
        el = ET.SubElement(root, "edge", {
            "id": e.id,
            "kind": e.kind.value,
            "mode": e.routing_mode.value,
        })
        el.append(_anchor_element("from", e.source))
        el.append(_anchor_element("to", e.target))
        for x, y in e.waypoints:
            ET.SubElement(el, "pt", {"x": fmt_num(x), "y": fmt_num(y)})

    ET.indent(root, space="  ")
    body = ET.tostring(root, encoding="unicode")
    return (XML_DECLARATION + body + "\n").encode("utf-8")


def _anchor_element(tag: str, anchor) -> ET.Element:
    if isinstance(anchor, NodeAnchor):
        return ET.Element(tag, {
            "node": anchor.node,
            "side": anchor.side.value,
            "offset": fmt_num(anchor.offset),
        })
    return ET.Element(tag, {"edge": anchor.edge, "t": fmt_num(anchor.t)})


def parse_map(data: bytes | str, check: bool = True) -> SceneMap:
    """Parse mimgraph-xml into a SceneMap that passes validation.

    Unknown attributes are ignored (forward compatibility); unknown
    elements, enum values and structural breaches are SchemaViolations
    with the offending value named. With check=False the structural parse
    is returned as-is so callers can inspect validate() themselves.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        line, col = exc.position
        raise MalformedXml(f"XML parse error at line {line}, column {col}: {exc.msg}") from exc

    if root.tag != "map":
        raise SchemaViolation(f"root element must be <map>, got <{root.tag}>")
    version = root.get("version")
    if version is None:
        raise SchemaViolation("<map> is missing the version attribute")
    if version != SCHEMA_VERSION:
        raise UnsupportedVersion(f"unsupported schema version {version!r}")

    scene = SceneMap(MapMeta(
        name=root.get("name", ""),
        version=version,
        created=root.get("created", ""),
    ))

    for child in root:
        if child.tag == "node":
            node = _parse_node(child)
            if node.id in scene.nodes:
                raise SchemaViolation(f"duplicate node id {node.id!r}")
            scene.nodes[node.id] = node
        elif child.tag == "edge":
            edge = _parse_edge(child)
            if edge.id in scene.edges or edge.id in scene.nodes:
                raise SchemaViolation(f"duplicate edge id {edge.id!r}")
            scene.edges[edge.id] = edge
        else:
            raise SchemaViolation(f"unexpected element <{child.tag}> under <map>")

    if check:
        violations = scene.validate()
        if violations:
            unresolved = [v for v in violations if v.rule == "UnresolvedAnchor"]
            if unresolved:
                raise UnresolvedAnchor("; ".join(str(v) for v in unresolved))
            raise SchemaViolation("; ".join(str(v) for v in violations))
    return scene


def _require(el: ET.Element, attr: str) -> str:
    value = el.get(attr)
    if value is None:
        ident = el.get("id", "?")
        raise SchemaViolation(f"<{el.tag} id={ident!r}> is missing attribute {attr!r}")
    return value


def _number(el: ET.Element, attr: str) -> float:
    raw = _require(el, attr)
    try:
        return float(raw)
    except ValueError:
        raise SchemaViolation(f"attribute {attr}={raw!r} on <{el.tag}> is not a number") from None


def _parse_node(el: ET.Element) -> SpeciesNode:
    kind_raw = _require(el, "kind")
    try:
        kind = SpeciesKind(kind_raw)
    except ValueError:
        raise SchemaViolation(f"unknown species kind {kind_raw!r}") from None
    return SpeciesNode(
        id=_require(el, "id"),
        kind=kind,
        label=el.get("label", ""),
        x=_number(el, "x"),
        y=_number(el, "y"),
        w=_number(el, "w"),
        h=_number(el, "h"),
        r=_number(el, "r") if el.get("r") is not None else 8.0,
    )


def _parse_edge(el: ET.Element) -> InteractionEdge:
    kind_raw = _require(el, "kind")
    try:
        kind = InteractionKind(kind_raw)
    except ValueError:
        raise SchemaViolation(f"unknown interaction glyph {kind_raw!r}") from None
    mode_raw = el.get("mode", "auto")
    try:
        mode = RoutingMode(mode_raw)
    except ValueError:
        raise SchemaViolation(f"unknown routing mode {mode_raw!r}") from None

    anchors = {}
    points: list[tuple[float, float]] = []
    for child in el:
        if child.tag in ("from", "to"):
            if child.tag in anchors:
                raise SchemaViolation(f"edge {el.get('id')!r} has multiple <{child.tag}> anchors")
            anchors[child.tag] = _parse_anchor(child)
        elif child.tag == "pt":
            points.append((_number(child, "x"), _number(child, "y")))
        else:
            raise SchemaViolation(f"unexpected element <{child.tag}> under <edge>")
    if "from" not in anchors or "to" not in anchors:
        raise SchemaViolation(f"edge {el.get('id')!r} needs one <from> and one <to> anchor")

    return InteractionEdge(
        id=_require(el, "id"),
        kind=kind,
        source=anchors["from"],
        target=anchors["to"],
        waypoints=geometry.simplify_polyline(points),
        routing_mode=mode,
    )


def _parse_anchor(el: ET.Element):
    if el.get("node") is not None:
        side_raw = _require(el, "side")
        try:
            side = Side(side_raw)
        except ValueError:
            raise SchemaViolation(f"unknown anchor side {side_raw!r}") from None
        return NodeAnchor(node=el.get("node"), side=side, offset=_number(el, "offset"))
    if el.get("edge") is not None:
        return EdgeAnchor(edge=el.get("edge"), t=_number(el, "t"))
    raise SchemaViolation(f"<{el.tag}> anchor needs either node/side/offset or edge/t")
