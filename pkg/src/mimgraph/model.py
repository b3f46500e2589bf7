"""Scene model for molecular interaction maps.

A map holds species nodes (rounded rectangles) and interaction edges
(orthogonal polylines with typed glyphs). Reactions connect exactly two
species; contingencies run from a species onto a species or onto another
interaction line. Mutations keep the map valid: anchors always resolve,
polylines stay orthogonal and simplified, and contingency attachment chains
stay acyclic.
"""

from __future__ import annotations

import copy as _copy
from dataclasses import dataclass, field
from enum import Enum

from . import geometry
from .errors import (
    DuplicateId,
    EndpointMismatch,
    InvalidGeometry,
    NonOrthogonal,
    RuleViolation,
    UnknownId,
    UnresolvedAnchor,
)
from .geometry import Point

SCHEMA_VERSION = "1"

# Tolerance for "this waypoint sits on that anchor" checks; looser than the
# collision kernel tolerance to absorb accumulated arithmetic.
ENDPOINT_TOL = 1e-6


class SpeciesKind(str, Enum):
    PROTEIN = "protein"
    DNA = "dna"
    COMPLEX = "complex"
    OTHER = "other"


class InteractionKind(str, Enum):
    COVALENT_MODIFICATION = "covalent_modification"
    NON_COVALENT_BINDING = "non_covalent_binding"
    STIMULATION = "stimulation"
    INHIBITION = "inhibition"
    TRANSCRIPTION = "transcription"
    CLEAVAGE = "cleavage"
    DEGRADATION = "degradation"
    CATALYSIS = "catalysis"

    @property
    def category(self) -> Category:
        return GLYPH_CATEGORIES[self]


class Category(str, Enum):
    REACTION = "reaction"
    CONTINGENCY = "contingency"


# Which glyphs may target another interaction line. Kept as a table so the
# catalog can grow without touching edge rules.
GLYPH_CATEGORIES: dict[InteractionKind, Category] = {
    InteractionKind.COVALENT_MODIFICATION: Category.REACTION,
    InteractionKind.NON_COVALENT_BINDING: Category.REACTION,
    InteractionKind.STIMULATION: Category.CONTINGENCY,
    InteractionKind.INHIBITION: Category.CONTINGENCY,
    InteractionKind.TRANSCRIPTION: Category.REACTION,
    InteractionKind.CLEAVAGE: Category.REACTION,
    InteractionKind.DEGRADATION: Category.REACTION,
    InteractionKind.CATALYSIS: Category.CONTINGENCY,
}


class Side(str, Enum):
    N = "n"
    E = "e"
    S = "s"
    W = "w"


class RoutingMode(str, Enum):
    AUTO = "auto"
    MANUAL = "manual"


@dataclass
class SpeciesNode:
    """A molecular entity drawn as a (rounded) rectangle; x,y is the top-left
    corner in scene units."""

    id: str
    kind: SpeciesKind
    label: str
    x: float
    y: float
    w: float
    h: float
    r: float = 8.0

    @property
    def center(self) -> Point:
        return (self.x + self.w / 2.0, self.y + self.h / 2.0)

    @property
    def bbox(self) -> tuple[float, float, float, float]:
        return (self.x, self.y, self.x + self.w, self.y + self.h)


@dataclass
class NodeAnchor:
    node: str
    side: Side
    offset: float = 0.5


@dataclass
class EdgeAnchor:
    edge: str
    t: float


Anchor = NodeAnchor | EdgeAnchor


@dataclass
class InteractionEdge:
    id: str
    kind: InteractionKind
    source: Anchor
    target: Anchor
    waypoints: list[Point] = field(default_factory=list)
    routing_mode: RoutingMode = RoutingMode.AUTO


@dataclass
class MapMeta:
    name: str = ""
    version: str = SCHEMA_VERSION
    created: str = ""


@dataclass
class Violation:
    rule: str
    item: str
    message: str

    def __str__(self) -> str:
        return f"{self.rule}({self.item}): {self.message}"


@dataclass
class MoveResult:
    """Outcome of a species move: auto edges that were fully re-routed and
    manual edges whose endpoints were rubber-banded."""

    rerouted: list[str]
    adjusted: list[str]


class SceneMap:
    """The document: species, interactions and metadata.

    Mutations require exclusive access; callers that share a map across
    threads must serialize writes (the service does). `copy()` produces an
    independent snapshot for concurrent reads or undo stacks.
    """

    def __init__(self, meta: MapMeta | None = None):
        self.nodes: dict[str, SpeciesNode] = {}
        self.edges: dict[str, InteractionEdge] = {}
        self.meta = meta or MapMeta()

    # -- queries -------------------------------------------------------------

    def node(self, node_id: str) -> SpeciesNode:
        try:
            return self.nodes[node_id]
        except KeyError:
            raise UnknownId(f"no species with id {node_id!r}") from None

    def edge(self, edge_id: str) -> InteractionEdge:
        try:
            return self.edges[edge_id]
        except KeyError:
            raise UnknownId(f"no edge with id {edge_id!r}") from None

    def anchor_point(self, anchor: Anchor) -> Point:
        """Scene position an anchor resolves to."""
        if isinstance(anchor, NodeAnchor):
            if anchor.node not in self.nodes:
                raise UnresolvedAnchor(f"anchor references missing species {anchor.node!r}")
            return node_anchor_point(self.nodes[anchor.node], anchor.side, anchor.offset)
        if anchor.edge not in self.edges:
            raise UnresolvedAnchor(f"anchor references missing edge {anchor.edge!r}")
        base = self.edges[anchor.edge]
        if len(base.waypoints) < 2:
            raise UnresolvedAnchor(f"edge {anchor.edge!r} has no usable polyline")
        return geometry.point_at_fraction(base.waypoints, anchor.t)

    def auto_anchor(self, node_id: str, toward: Point) -> NodeAnchor:
        """Anchor on the side of the node nearest to `toward`, at its middle."""
        return NodeAnchor(node_id, nearest_side(self.node(node_id), toward), 0.5)

    def next_edge_id(self) -> str:
        n = 1
        while f"e{n}" in self.edges:
            n += 1
        return f"e{n}"

    def copy(self) -> SceneMap:
        return _copy.deepcopy(self)

    # -- mutations -----------------------------------------------------------

    def add_species(self, species: SpeciesNode) -> SpeciesNode:
        if species.id in self.nodes:
            raise DuplicateId(f"species id {species.id!r} already present")
        if species.id in self.edges:
            raise DuplicateId(f"id {species.id!r} already used by an edge")
        if not species.id:
            raise InvalidGeometry("species id must be non-empty")
        if species.w <= 0 or species.h <= 0:
            raise InvalidGeometry(
                f"species {species.id!r} needs positive size, got {species.w}x{species.h}")
        if species.r < 0:
            raise InvalidGeometry(f"species {species.id!r} has negative corner radius")
        self.nodes[species.id] = species
        return species

    def add_interaction(
        self,
        kind: InteractionKind,
        source: Anchor,
        target: Anchor,
        *,
        edge_id: str | None = None,
        grid_n: int = 6,
        mode: str = "exact",
    ) -> InteractionEdge:
        """Add an interaction and route it automatically.

        Reactions must connect two species; contingencies start at a species
        and may end on a species or on another interaction's line.
        """
        from . import router  # local import: router builds on this module

        self._check_anchor_rules(kind, source, target)
        if edge_id is None:
            edge_id = self.next_edge_id()
        elif edge_id in self.edges or edge_id in self.nodes:
            raise DuplicateId(f"edge id {edge_id!r} already present")

        result = router.route(self, source, target, n=grid_n, mode=mode)
        edge = InteractionEdge(
            id=edge_id,
            kind=kind,
            source=source,
            target=target,
            waypoints=result.waypoints,
            routing_mode=RoutingMode.AUTO,
        )
        self.edges[edge_id] = edge
        return edge

    def move_species(
        self,
        node_id: str,
        x: float,
        y: float,
        *,
        grid_n: int = 6,
        mode: str = "exact",
    ) -> MoveResult:
        """Move a species; attached lines follow.

        Auto edges are re-routed, manual edges keep their shape and only have
        the anchored endpoint pulled along (first/last segment stretches,
        never rotates). Contingencies attached to an affected line are updated
        transitively.
        """
        from . import router

        node = self.node(node_id)
        node.x = x
        node.y = y

        # affected set: edges anchored to the node, plus everything anchored
        # onto an affected line, updated base-first so anchor points are fresh
        affected = {e.id for e in self.edges.values() if self._anchored_to_node(e, node_id)}
        while True:
            followers = {
                e.id
                for e in self.edges.values()
                if e.id not in affected
                and isinstance(e.target, EdgeAnchor)
                and e.target.edge in affected
            }
            if not followers:
                break
            affected |= followers

        rerouted: list[str] = []
        adjusted: list[str] = []
        for eid in sorted(affected, key=lambda i: (self.attachment_depth(i), i)):
            edge = self.edges[eid]
            if edge.routing_mode is RoutingMode.AUTO:
                result = router.route(
                    self, edge.source, edge.target,
                    n=grid_n, mode=mode, exclude_edge=edge.id,
                )
                edge.waypoints = result.waypoints
                rerouted.append(edge.id)
            else:
                self._rubber_band(edge)
                adjusted.append(edge.id)
        return MoveResult(rerouted=rerouted, adjusted=adjusted)

    def set_manual_waypoints(self, edge_id: str, waypoints: list[Point]) -> InteractionEdge:
        """Pin an edge to a hand-drawn orthogonal polyline; any number of
        bends is allowed."""
        edge = self.edge(edge_id)
        pts = [(float(x), float(y)) for x, y in waypoints]
        if not geometry.is_orthogonal(pts):
            raise NonOrthogonal(f"waypoints for {edge_id!r} are not an orthogonal polyline")
        src = self.anchor_point(edge.source)
        dst = self.anchor_point(edge.target)
        if not _close(pts[0], src):
            raise EndpointMismatch(
                f"first waypoint {pts[0]} does not sit on the source anchor {src}"
            )
        if not _close(pts[-1], dst):
            raise EndpointMismatch(
                f"last waypoint {pts[-1]} does not sit on the target anchor {dst}"
            )
        simplified = geometry.simplify_polyline(pts)
        if len(simplified) < 2:
            raise NonOrthogonal(f"waypoints for {edge_id!r} collapse to a point")
        edge.waypoints = simplified
        edge.routing_mode = RoutingMode.MANUAL
        return edge

    def remove_edge(self, edge_id: str) -> list[str]:
        """Remove an edge and, transitively, every contingency attached to it.
        Returns the removed edge ids."""
        self.edge(edge_id)
        removed: list[str] = []
        stack = [edge_id]
        while stack:
            eid = stack.pop()
            if eid not in self.edges:
                continue
            dependents = sorted(
                e.id
                for e in self.edges.values()
                if isinstance(e.target, EdgeAnchor) and e.target.edge == eid
            )
            stack.extend(dependents)
            del self.edges[eid]
            removed.append(eid)
        return removed

    def remove_species(self, node_id: str) -> list[str]:
        """Remove a species and every edge anchored to it (with cascades).
        Returns removed ids, the species last."""
        self.node(node_id)
        removed: list[str] = []
        attached = sorted(
            e.id for e in self.edges.values() if self._anchored_to_node(e, node_id)
        )
        for eid in attached:
            if eid in self.edges:
                removed.extend(self.remove_edge(eid))
        del self.nodes[node_id]
        removed.append(node_id)
        return removed

    # -- validation ----------------------------------------------------------

    def validate(self) -> list[Violation]:
        """Total check of every invariant; returns one violation per breach."""
        out: list[Violation] = []
        for nid in sorted(self.nodes):
            node = self.nodes[nid]
            if node.w <= 0 or node.h <= 0:
                out.append(Violation("InvalidGeometry", nid, f"size {node.w}x{node.h} not positive"))

        for eid in sorted(self.edges):
            edge = self.edges[eid]
            resolved = True
            for role, anchor in (("source", edge.source), ("target", edge.target)):
                if isinstance(anchor, NodeAnchor):
                    if anchor.node not in self.nodes:
                        out.append(Violation("UnresolvedAnchor", eid, f"{role} species {anchor.node!r} missing"))
                        resolved = False
                    if not 0.0 <= anchor.offset <= 1.0:
                        out.append(Violation("AnchorRange", eid, f"{role} offset {anchor.offset} outside [0,1]"))
                else:
                    # self-references resolve but are length-1 cycles,
                    # reported by the cycle walk below
                    if anchor.edge not in self.edges:
                        out.append(Violation("UnresolvedAnchor", eid, f"{role} edge {anchor.edge!r} missing"))
                        resolved = False
                    if not 0.0 <= anchor.t <= 1.0:
                        out.append(Violation("AnchorRange", eid, f"{role} position {anchor.t} outside [0,1]"))

            category = edge.kind.category
            if category is Category.REACTION:
                if not (isinstance(edge.source, NodeAnchor) and isinstance(edge.target, NodeAnchor)):
                    out.append(Violation("ReactionArity", eid, "reactions connect exactly two species"))
            else:
                if not isinstance(edge.source, NodeAnchor):
                    out.append(Violation("EdgeRules", eid, "contingency source must be a species"))

            pts = edge.waypoints
            if not geometry.is_orthogonal(pts):
                out.append(Violation("NonOrthogonal", eid, "waypoints are not an orthogonal polyline"))
            elif resolved:
                try:
                    src = self.anchor_point(edge.source)
                    dst = self.anchor_point(edge.target)
                except UnresolvedAnchor:
                    src = dst = None
                if src is not None and not _close(pts[0], src):
                    out.append(Violation("EndpointMismatch", eid, f"first waypoint {pts[0]} off source anchor {src}"))
                if dst is not None and not _close(pts[-1], dst):
                    out.append(Violation("EndpointMismatch", eid, f"last waypoint {pts[-1]} off target anchor {dst}"))

        out.extend(self._find_contingency_cycles())
        return out

    def _find_contingency_cycles(self) -> list[Violation]:
        # attachment graph: edge -> edge it targets; report each cycle member
        succ = {
            eid: e.target.edge
            for eid, e in self.edges.items()
            if isinstance(e.target, EdgeAnchor) and e.target.edge in self.edges
        }
        out = []
        state: dict[str, int] = {}  # 1 = on stack, 2 = done
        for start in sorted(succ):
            if state.get(start):
                continue
            path = []
            cur: str | None = start
            while cur is not None and state.get(cur) is None:
                state[cur] = 1
                path.append(cur)
                cur = succ.get(cur)
            if cur is not None and state.get(cur) == 1:
                cycle = path[path.index(cur):]
                for eid in cycle:
                    out.append(Violation("ContingencyCycle", eid, f"attachment cycle {' -> '.join(cycle)}"))
            for eid in path:
                state[eid] = 2
        return out

    # -- internals -----------------------------------------------------------

    def _check_anchor_rules(self, kind: InteractionKind, source: Anchor, target: Anchor) -> None:
        for role, anchor in (("source", source), ("target", target)):
            if isinstance(anchor, NodeAnchor):
                if not 0.0 <= anchor.offset <= 1.0:
                    raise RuleViolation(f"{role} offset {anchor.offset} outside [0,1]")
            elif not 0.0 <= anchor.t <= 1.0:
                raise RuleViolation(f"{role} position {anchor.t} outside [0,1]")
        # resolve before rule checks so missing ids surface as UnresolvedAnchor
        self.anchor_point(source)
        self.anchor_point(target)
        if not isinstance(source, NodeAnchor):
            raise RuleViolation("interaction source must be a species")
        if kind.category is Category.REACTION and not isinstance(target, NodeAnchor):
            raise RuleViolation(f"{kind.value} is a reaction: it only connects two species")

    def _anchored_to_node(self, edge: InteractionEdge, node_id: str) -> bool:
        return (isinstance(edge.source, NodeAnchor) and edge.source.node == node_id) or (
            isinstance(edge.target, NodeAnchor) and edge.target.node == node_id
        )

    def attachment_depth(self, edge_id: str) -> int:
        depth = 0
        seen = {edge_id}
        edge = self.edges[edge_id]
        while isinstance(edge.target, EdgeAnchor) and edge.target.edge in self.edges:
            if edge.target.edge in seen:  # cycle: validate() reports it
                break
            seen.add(edge.target.edge)
            edge = self.edges[edge.target.edge]
            depth += 1
        return depth

    def _rubber_band(self, edge: InteractionEdge) -> None:
        pts = list(edge.waypoints)
        pts = _translate_endpoint(pts, self.anchor_point(edge.source), first=True)
        pts = _translate_endpoint(pts, self.anchor_point(edge.target), first=False)
        edge.waypoints = geometry.simplify_polyline(pts)


def node_anchor_point(node: SpeciesNode, side: Side, offset: float) -> Point:
    if side is Side.N:
        return (node.x + offset * node.w, node.y)
    if side is Side.S:
        return (node.x + offset * node.w, node.y + node.h)
    if side is Side.W:
        return (node.x, node.y + offset * node.h)
    return (node.x + node.w, node.y + offset * node.h)


def nearest_side(node: SpeciesNode, toward: Point) -> Side:
    cx, cy = node.center
    dx = (toward[0] - cx) / max(node.w / 2.0, geometry.TOL)
    dy = (toward[1] - cy) / max(node.h / 2.0, geometry.TOL)
    if abs(dx) >= abs(dy):
        return Side.E if dx >= 0 else Side.W
    return Side.S if dy >= 0 else Side.N


def _close(a: Point, b: Point) -> bool:
    return abs(a[0] - b[0]) <= ENDPOINT_TOL and abs(a[1] - b[1]) <= ENDPOINT_TOL


def _translate_endpoint(pts: list[Point], new_pt: Point, *, first: bool) -> list[Point]:
    """Pull one end of an orthogonal polyline to a new position, stretching
    the end segment rather than rotating it."""
    pts = list(pts)
    if not first:
        pts.reverse()
    old = pts[0]
    if _close(old, new_pt):
        pts[0] = new_pt
    elif len(pts) == 2:
        other = pts[1]
        if abs(new_pt[0] - other[0]) <= geometry.TOL or abs(new_pt[1] - other[1]) <= geometry.TOL:
            pts = [new_pt, other]
        else:
            pts = [new_pt, (other[0], new_pt[1]), other]
    else:
        w1 = pts[1]
        # absorb the cross-axis displacement into the neighbor waypoint; the
        # second segment keeps its axis because only its shared coordinate moves
        if geometry.seg_axis(old, w1) == geometry.AXIS_H:
            pts[1] = (w1[0], new_pt[1])
        else:
            pts[1] = (new_pt[0], w1[1])
        pts[0] = new_pt
    if not first:
        pts.reverse()
    return pts
