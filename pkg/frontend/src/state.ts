// Editor state: a mirror of the server's map plus tool/selection state.
//
// The mirror always equals the last server-acknowledged state, with one
// exception: during a node drag an optimistic preview (node moved, attached
// endpoints rubber-banded) is shown until the server's authoritative
// re-route replaces it, or the drag rolls back on failure. All mutations
// funnel through one in-order queue per map, matching the service's
// per-map write serialization.

import { ApiError } from "./api.js";
import type { ApiClient } from "./api.js";
import { dragSegment, insertBend, simplify, translateEndpoint } from "./ortho.js";
import type {
  AnchorParam,
  EdgeJson,
  GlyphInfo,
  MapJson,
  NodeJson,
  OpDelta,
  Point,
} from "./types.js";
import { isNodeAnchor } from "./types.js";

export type Tool =
  | { kind: "select" }
  | { kind: "add-species"; species: string }
  | { kind: "add-interaction"; glyph: string }
  | { kind: "edit-waypoints" };

/** The slice of the HTTP client the store depends on (fakeable in tests). */
export type ServiceApi = Pick<
  ApiClient,
  "createMap" | "getMap" | "op" | "undo" | "redo" | "exportMap" | "glyphs"
>;

interface NodeDrag {
  nodeId: string;
  snapshot: MapJson;
}

interface WaypointEdit {
  edgeId: string;
  points: Point[];
}

function cloneMap(map: MapJson): MapJson {
  return JSON.parse(JSON.stringify(map)) as MapJson;
}

export function anchorPoint(map: MapJson, anchor: AnchorParam | EdgeJson["from"]): Point {
  if ("node" in anchor && anchor.node !== undefined) {
    const node = map.nodes.find((n) => n.id === anchor.node);
    if (!node) throw new Error(`unknown node ${anchor.node}`);
    const side = (anchor as { side?: string }).side ?? "e";
    const offset = (anchor as { offset?: number }).offset ?? 0.5;
    switch (side) {
      case "n": return [node.x + offset * node.w, node.y];
      case "s": return [node.x + offset * node.w, node.y + node.h];
      case "w": return [node.x, node.y + offset * node.h];
      default: return [node.x + node.w, node.y + offset * node.h];
    }
  }
  const ref = anchor as { edge: string; t?: number };
  const edge = map.edges.find((e) => e.id === ref.edge);
  if (!edge) throw new Error(`unknown edge ${ref.edge}`);
  return pointAtFraction(edge.points, ref.t ?? 0.5);
}

function pointAtFraction(points: Point[], t: number): Point {
  if (points.length === 0) throw new Error("empty polyline");
  if (points.length === 1) return points[0]!;
  let total = 0;
  for (let i = 1; i < points.length; i++) {
    total += Math.abs(points[i]![0] - points[i - 1]![0])
      + Math.abs(points[i]![1] - points[i - 1]![1]);
  }
  let target = Math.max(0, Math.min(1, t)) * total;
  for (let i = 1; i < points.length; i++) {
    const [ax, ay] = points[i - 1]!;
    const [bx, by] = points[i]!;
    const seg = Math.abs(bx - ax) + Math.abs(by - ay);
    if (target <= seg + 1e-9) {
      const f = seg <= 1e-9 ? 0 : target / seg;
      return [ax + (bx - ax) * f, ay + (by - ay) * f];
    }
    target -= seg;
  }
  return points[points.length - 1]!;
}

export class EditorStore {
  map: MapJson | null = null;
  mapId: string | null = null;
  glyphs: GlyphInfo[] = [];
  tool: Tool = { kind: "select" };
  selection: string | null = null;
  pendingSource: AnchorParam | null = null;
  sourceXml = "";
  lastError: string | null = null;
  onChange: (() => void) | null = null;

  private drag: NodeDrag | null = null;
  private waypointEdit: WaypointEdit | null = null;
  private chain: Promise<unknown> = Promise.resolve();

  constructor(readonly api: ServiceApi) {}

  // -- lifecycle --------------------------------------------------------

  async init(document?: string): Promise<void> {
    const created = await this.api.createMap(document);
    this.mapId = created.map_id;
    this.map = created.map;
    this.glyphs = await this.api.glyphs();
    await this.refreshSource();
    this.notify();
  }

  /** Serialize mutations: each op waits for every earlier one. */
  private enqueue<T>(work: () => Promise<T>): Promise<T> {
    const result = this.chain.then(work);
    this.chain = result.catch(() => undefined);
    return result;
  }

  private notify(): void {
    this.onChange?.();
  }

  private requireMap(): MapJson {
    if (!this.map || !this.mapId) throw new Error("editor not initialized");
    return this.map;
  }

  private async refreshSource(): Promise<void> {
    if (this.mapId) {
      this.sourceXml = await this.api.exportMap(this.mapId, "xml");
    }
  }

  // -- delta application -------------------------------------------------

  private upsertNode(node: NodeJson): void {
    const nodes = this.requireMap().nodes;
    const at = nodes.findIndex((n) => n.id === node.id);
    if (at >= 0) {
      nodes[at] = node;
      return;
    }
    const insert = nodes.findIndex((n) => n.id > node.id);
    nodes.splice(insert < 0 ? nodes.length : insert, 0, node);
  }

  private upsertEdge(edge: EdgeJson): void {
    const edges = this.requireMap().edges;
    const at = edges.findIndex((e) => e.id === edge.id);
    if (at >= 0) {
      edges[at] = edge;
      return;
    }
    const insert = edges.findIndex((e) => e.id > edge.id);
    edges.splice(insert < 0 ? edges.length : insert, 0, edge);
  }

  private applyDelta(delta: OpDelta): void {
    const map = this.requireMap();
    if (delta.added?.node) this.upsertNode(delta.added.node);
    if (delta.added?.edge) this.upsertEdge(delta.added.edge);
    if (delta.updated?.edge) this.upsertEdge(delta.updated.edge);
    if (delta.moved) this.upsertNode(delta.moved);
    for (const edge of delta.rerouted ?? []) this.upsertEdge(edge);
    for (const edge of delta.adjusted ?? []) this.upsertEdge(edge);
    if (delta.removed) {
      const gone = new Set(delta.removed);
      map.nodes = map.nodes.filter((n) => !gone.has(n.id));
      map.edges = map.edges.filter((e) => !gone.has(e.id));
    }
  }

  private async acknowledged(delta: OpDelta): Promise<OpDelta> {
    this.applyDelta(delta);
    await this.refreshSource();
    this.lastError = null;
    this.notify();
    return delta;
  }

  // -- species ----------------------------------------------------------

  addSpecies(params: {
    id?: string; kind?: string; label?: string;
    x: number; y: number; w?: number; h?: number;
  }): Promise<OpDelta> {
    return this.enqueue(async () => {
      const delta = await this.api.op(this.mapId!, { op: "add_species", params });
      return this.acknowledged(delta);
    });
  }

  deleteItem(id: string): Promise<OpDelta> {
    return this.enqueue(async () => {
      const delta = await this.api.op(this.mapId!, { op: "delete", params: { id } });
      if (this.selection && delta.removed?.includes(this.selection)) {
        this.selection = null;
      }
      return this.acknowledged(delta);
    });
  }

  // -- two-click interaction creation ------------------------------------

  /**
   * Register an anchor click with the add-interaction tool. The first click
   * arms the source; the second sends the op. A rule violation keeps the
   * source armed so the user can pick a different target.
   */
  clickAnchor(anchor: AnchorParam): Promise<OpDelta | null> {
    if (this.tool.kind !== "add-interaction") {
      return Promise.resolve(null);
    }
    if (this.pendingSource === null) {
      this.pendingSource = anchor;
      this.notify();
      return Promise.resolve(null);
    }
    const glyph = this.tool.glyph;
    const source = this.pendingSource;
    return this.enqueue(async () => {
      try {
        const delta = await this.api.op(this.mapId!, {
          op: "add_interaction",
          params: { kind: glyph, source, target: anchor },
        });
        this.pendingSource = null;
        return await this.acknowledged(delta);
      } catch (err) {
        if (err instanceof ApiError) {
          this.lastError = err.detail || err.code;
          this.notify();
          return null; // pendingSource stays armed
        }
        throw err;
      }
    });
  }

  // -- rubber-band node drags ---------------------------------------------

  beginNodeDrag(nodeId: string): void {
    const map = this.requireMap();
    if (!map.nodes.some((n) => n.id === nodeId)) throw new Error(`unknown node ${nodeId}`);
    this.drag = { nodeId, snapshot: cloneMap(map) };
    this.selection = nodeId;
    this.notify();
  }

  /** Cheap local preview: the node and the anchored endpoints of attached
   * edges follow the pointer; routes are not recomputed. */
  dragNodeTo(x: number, y: number): void {
    if (!this.drag) return;
    const map = this.requireMap();
    const node = map.nodes.find((n) => n.id === this.drag!.nodeId)!;
    node.x = x;
    node.y = y;
    for (const edge of map.edges) {
      if (isNodeAnchor(edge.from) && edge.from.node === node.id) {
        edge.points = translateEndpoint(edge.points, anchorPoint(map, edge.from), true);
      }
      if (isNodeAnchor(edge.to) && edge.to.node === node.id) {
        edge.points = translateEndpoint(edge.points, anchorPoint(map, edge.to), false);
      }
    }
    this.notify();
  }

  /** Commit the drag: the move op's response replaces every preview with
   * the authoritative re-routed polylines; on failure everything snaps
   * back to the pre-drag state. */
  endNodeDrag(x: number, y: number): Promise<OpDelta | null> {
    if (!this.drag) return Promise.resolve(null);
    const { nodeId, snapshot } = this.drag;
    this.drag = null;
    return this.enqueue(async () => {
      try {
        const delta = await this.api.op(this.mapId!, {
          op: "move_species",
          params: { id: nodeId, x, y },
        });
        this.map = snapshot; // authoritative delta applies to the pre-drag state
        return await this.acknowledged(delta);
      } catch (err) {
        this.map = snapshot;
        if (err instanceof ApiError) {
          this.lastError = err.detail || err.code;
          this.notify();
          return null;
        }
        this.notify();
        throw err;
      }
    });
  }

  cancelNodeDrag(): void {
    if (!this.drag) return;
    this.map = this.drag.snapshot;
    this.drag = null;
    this.notify();
  }

  // -- manual waypoint editing --------------------------------------------

  beginWaypointEdit(edgeId: string): void {
    const map = this.requireMap();
    const edge = map.edges.find((e) => e.id === edgeId);
    if (!edge) throw new Error(`unknown edge ${edgeId}`);
    this.waypointEdit = {
      edgeId,
      points: edge.points.map((p) => [p[0], p[1]]),
    };
    this.selection = edgeId;
    this.notify();
  }

  get editedPoints(): Point[] | null {
    return this.waypointEdit?.points ?? null;
  }

  /** Split a segment into two collinear handle pairs (no geometry change
   * until a drag makes them diverge). */
  insertBendAt(seg: number, t = 0.5): void {
    if (!this.waypointEdit) return;
    this.waypointEdit.points = insertBend(this.waypointEdit.points, seg, t);
    this.notify();
  }

  /** Drag a segment perpendicular to its axis; endpoints stay anchored. */
  dragSegmentTo(seg: number, coord: number): void {
    if (!this.waypointEdit) return;
    this.waypointEdit.points = dragSegment(this.waypointEdit.points, seg, coord);
    this.notify();
  }

  commitWaypoints(): Promise<OpDelta | null> {
    if (!this.waypointEdit) return Promise.resolve(null);
    const { edgeId, points } = this.waypointEdit;
    this.waypointEdit = null;
    const cleaned = simplify(points);
    return this.enqueue(async () => {
      try {
        const delta = await this.api.op(this.mapId!, {
          op: "set_manual_waypoints",
          params: { id: edgeId, points: cleaned },
        });
        return await this.acknowledged(delta);
      } catch (err) {
        if (err instanceof ApiError) {
          this.lastError = err.detail || err.code; // e.g. anchors moved concurrently
          this.notify();
          return null;
        }
        throw err;
      }
    });
  }

  cancelWaypointEdit(): void {
    this.waypointEdit = null;
    this.notify();
  }

  // -- undo / redo ---------------------------------------------------------

  undo(): Promise<MapJson | null> {
    return this.enqueue(async () => {
      try {
        const map = await this.api.undo(this.mapId!);
        this.map = map;
        await this.refreshSource();
        this.lastError = null;
        this.notify();
        return map;
      } catch (err) {
        if (err instanceof ApiError && err.status === 409) {
          this.lastError = err.code;
          this.notify();
          return null;
        }
        throw err;
      }
    });
  }

  redo(): Promise<MapJson | null> {
    return this.enqueue(async () => {
      try {
        const map = await this.api.redo(this.mapId!);
        this.map = map;
        await this.refreshSource();
        this.lastError = null;
        this.notify();
        return map;
      } catch (err) {
        if (err instanceof ApiError && err.status === 409) {
          this.lastError = err.code;
          this.notify();
          return null;
        }
        throw err;
      }
    });
  }

  /** Wait until every queued op is acknowledged. */
  idle(): Promise<void> {
    return this.chain.then(() => undefined);
  }

  setTool(tool: Tool): void {
    this.tool = tool;
    this.pendingSource = null;
    this.notify();
  }
}
