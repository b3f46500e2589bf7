"""Local JSON-over-HTTP API for the editor UI and other clients.

Sessions hold one map each plus bounded undo/redo stacks of full snapshots
(maps are small; snapshots keep the semantics obvious). Mutations on one
map are serialized behind a per-session lock; requests for different maps
run concurrently. Endpoints:

    POST /maps                 create (empty body) or load (mimgraph-xml body)
    GET  /maps/{id}            full map as JSON
    POST /maps/{id}/ops        one mutation, returns only what changed
    POST /maps/{id}/undo       restore the previous snapshot
    POST /maps/{id}/redo
    GET  /maps/{id}/export?format=xml|sbml|svg
    GET  /glyphs               interaction glyph catalog for tool palettes
    GET  /healthz

Error bodies are {"code", "message", "detail"}.
"""

from __future__ import annotations

import threading
from collections import deque
from dataclasses import dataclass, field
from datetime import datetime, timezone

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, Response

from . import errors
from .formats import export_sbml, parse_map, render_svg, serialize_map
from .model import (
    EdgeAnchor,
    InteractionEdge,
    InteractionKind,
    MapMeta,
    NodeAnchor,
    SceneMap,
    Side,
    SpeciesKind,
    SpeciesNode,
)

UNDO_DEPTH = 100


@dataclass
class Session:
    map: SceneMap
    lock: threading.Lock = field(default_factory=threading.Lock)
    undo: deque = field(default_factory=lambda: deque(maxlen=UNDO_DEPTH))
    redo: list = field(default_factory=list)
    dirty: bool = False


class SessionStore:
    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._sessions: dict[str, Session] = {}
        self._counter = 0

    def create(self, scene: SceneMap) -> tuple[str, Session]:
        with self._lock:
            self._counter += 1
            map_id = f"m{self._counter}"
            session = Session(map=scene)
            self._sessions[map_id] = session
            return map_id, session

    def get(self, map_id: str) -> Session | None:
        with self._lock:
            return self._sessions.get(map_id)


# -- JSON mirror (field-for-field with mimgraph-xml) --------------------------

def node_json(n: SpeciesNode) -> dict:
    return {"id": n.id, "kind": n.kind.value, "label": n.label,
            "x": n.x, "y": n.y, "w": n.w, "h": n.h, "r": n.r}


def anchor_json(anchor) -> dict:
    if isinstance(anchor, NodeAnchor):
        return {"node": anchor.node, "side": anchor.side.value, "offset": anchor.offset}
    return {"edge": anchor.edge, "t": anchor.t}


def edge_json(e: InteractionEdge) -> dict:
    return {"id": e.id, "kind": e.kind.value, "mode": e.routing_mode.value,
            "from": anchor_json(e.source), "to": anchor_json(e.target),
            "points": [[x, y] for x, y in e.waypoints]}


def map_json(scene: SceneMap) -> dict:
    return {
        "meta": {"name": scene.meta.name, "version": scene.meta.version,
                 "created": scene.meta.created},
        "nodes": [node_json(scene.nodes[i]) for i in sorted(scene.nodes)],
        "edges": [edge_json(scene.edges[i]) for i in sorted(scene.edges)],
    }


def _error(status: int, code: str, message: str, detail: str = "") -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"code": code, "message": message, "detail": detail},
    )


_CONFLICTS = (
    errors.DuplicateId, errors.UnknownId, errors.InvalidGeometry,
    errors.UnresolvedAnchor, errors.RuleViolation, errors.NonOrthogonal,
    errors.EndpointMismatch,
)


def _parse_anchor_param(scene: SceneMap, raw: dict, toward) -> NodeAnchor | EdgeAnchor:
    if not isinstance(raw, dict):
        raise errors.RuleViolation(f"anchor must be an object, got {raw!r}")
    if "node" in raw:
        if "side" in raw:
            side = Side(raw["side"])
            return NodeAnchor(raw["node"], side, float(raw.get("offset", 0.5)))
        return scene.auto_anchor(raw["node"], toward)
    if "edge" in raw:
        return EdgeAnchor(raw["edge"], float(raw.get("t", 0.5)))
    raise errors.RuleViolation(f"anchor needs node or edge, got {raw!r}")


def _anchor_reference_point(scene: SceneMap, raw: dict):
    """Rough position of an anchor target, for picking the facing side of
    the opposite anchor when its side is omitted."""
    if "node" in raw and raw["node"] in scene.nodes:
        if "side" in raw:
            return scene.anchor_point(NodeAnchor(raw["node"], Side(raw["side"]),
                                                 float(raw.get("offset", 0.5))))
        return scene.nodes[raw["node"]].center
    if "edge" in raw and raw["edge"] in scene.edges:
        return scene.anchor_point(EdgeAnchor(raw["edge"], float(raw.get("t", 0.5))))
    return (0.0, 0.0)


def _apply_op(scene: SceneMap, body: dict) -> dict:
    op = body.get("op")
    params = body.get("params") or {}
    grid_n = int(body.get("grid_n", 6))
    mode = body.get("mode", "exact")
    if grid_n < 2:
        raise errors.RuleViolation(f"grid_n must be >= 2, got {grid_n}")

    if op == "add_species":
        node = SpeciesNode(
            id=params.get("id") or _next_node_id(scene),
            kind=SpeciesKind(params.get("kind", "protein")),
            label=params.get("label", ""),
            x=float(params["x"]), y=float(params["y"]),
            w=float(params.get("w", 80.0)), h=float(params.get("h", 40.0)),
            r=float(params.get("r", 8.0)),
        )
        scene.add_species(node)
        return {"added": {"node": node_json(node)}}

    if op == "add_interaction":
        kind = InteractionKind(params["kind"])
        raw_source, raw_target = params["source"], params["target"]
        source = _parse_anchor_param(scene, raw_source,
                                     _anchor_reference_point(scene, raw_target))
        target = _parse_anchor_param(scene, raw_target,
                                     _anchor_reference_point(scene, raw_source))
        edge = scene.add_interaction(kind, source, target,
                                     edge_id=params.get("id"), grid_n=grid_n, mode=mode)
        return {"added": {"edge": edge_json(edge)}}

    if op == "move_species":
        node_id = params["id"]
        result = scene.move_species(node_id, float(params["x"]), float(params["y"]),
                                    grid_n=grid_n, mode=mode)
        return {
            "moved": node_json(scene.nodes[node_id]),
            "rerouted": [edge_json(scene.edges[i]) for i in result.rerouted],
            "adjusted": [edge_json(scene.edges[i]) for i in result.adjusted],
        }

    if op == "set_manual_waypoints":
        edge = scene.set_manual_waypoints(
            params["id"], [(float(x), float(y)) for x, y in params["points"]])
        return {"updated": {"edge": edge_json(edge)}}

    if op == "delete":
        target = params["id"]
        if target in scene.nodes:
            return {"removed": scene.remove_species(target)}
        return {"removed": scene.remove_edge(target)}

    raise errors.RuleViolation(f"unknown op {op!r}")


def _next_node_id(scene: SceneMap) -> str:
    n = 1
    while f"s{n}" in scene.nodes or f"s{n}" in scene.edges:
        n += 1
    return f"s{n}"


def create_app() -> FastAPI:
    app = FastAPI(title="mimgraph", docs_url=None, redoc_url=None)
    store = SessionStore()

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.get("/glyphs")
    def glyphs():
        return [{"name": k.value, "category": k.category.value}
                for k in sorted(InteractionKind, key=lambda k: k.value)]

    @app.post("/maps", status_code=201)
    async def create_map(request: Request):
        body = await request.body()
        if body.strip():
            try:
                scene = parse_map(body)
            except errors.MimError as exc:
                return _error(400, type(exc).__name__, "map document rejected", str(exc))
        else:
            scene = SceneMap(MapMeta(
                created=datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")))
        map_id, session = store.create(scene)
        return JSONResponse(status_code=201,
                            content={"map_id": map_id, "map": map_json(session.map)})

    @app.get("/maps/{map_id}")
    def get_map(map_id: str):
        session = store.get(map_id)
        if session is None:
            return _error(404, "UnknownMap", f"no map {map_id!r}")
        with session.lock:
            return map_json(session.map)

    @app.post("/maps/{map_id}/ops")
    async def mutate(map_id: str, request: Request):
        session = store.get(map_id)
        if session is None:
            return _error(404, "UnknownMap", f"no map {map_id!r}")
        try:
            body = await request.json()
        except Exception:
            return _error(400, "BadRequest", "body must be JSON")
        with session.lock:
            snapshot = session.map.copy()
            try:
                delta = _apply_op(session.map, body)
            except errors.RoutingFailed as exc:
                session.map = snapshot
                return _error(422, type(exc).__name__, "routing failed", str(exc))
            except _CONFLICTS as exc:
                session.map = snapshot
                return _error(409, type(exc).__name__, "operation rejected", str(exc))
            except (KeyError, ValueError, TypeError) as exc:
                session.map = snapshot
                return _error(400, "BadRequest", "malformed op parameters", str(exc))
            session.undo.append(snapshot)
            session.redo.clear()
            session.dirty = True
            return delta

    @app.post("/maps/{map_id}/undo")
    def undo(map_id: str):
        session = store.get(map_id)
        if session is None:
            return _error(404, "UnknownMap", f"no map {map_id!r}")
        with session.lock:
            if not session.undo:
                return _error(409, "NothingToUndo", "undo stack is empty")
            session.redo.append(session.map)
            session.map = session.undo.pop()
            return {"map": map_json(session.map)}

    @app.post("/maps/{map_id}/redo")
    def redo(map_id: str):
        session = store.get(map_id)
        if session is None:
            return _error(404, "UnknownMap", f"no map {map_id!r}")
        with session.lock:
            if not session.redo:
                return _error(409, "NothingToRedo", "redo stack is empty")
            session.undo.append(session.map)
            session.map = session.redo.pop()
            return {"map": map_json(session.map)}

    @app.get("/maps/{map_id}/export")
    def export(map_id: str, format: str = "xml"):
        session = store.get(map_id)
        if session is None:
            return _error(404, "UnknownMap", f"no map {map_id!r}")
        with session.lock:
            try:
                if format == "xml":
                    return Response(serialize_map(session.map),
                                    media_type="application/xml")
                if format == "sbml":
                    return Response(export_sbml(session.map),
                                    media_type="application/xml")
                if format == "svg":
                    return Response(render_svg(session.map),
                                    media_type="image/svg+xml")
            except errors.InvalidMap as exc:
                return _error(409, "InvalidMap", "map fails validation", str(exc))
        return _error(400, "UnknownFormat", f"unknown format {format!r}")

    return app
