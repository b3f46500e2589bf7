// Browser bootstrap: wires pointer events and the tool palette to the
// editor store and keeps the canvas + source panel in sync.

import { ApiClient } from "./api.js";
import { renderScene } from "./render.js";
import { EditorStore } from "./state.js";
import type { AnchorParam } from "./types.js";

const SERVICE_URL = (window as { MIMGRAPH_SERVICE?: string }).MIMGRAPH_SERVICE
  ?? "http://127.0.0.1:7071";

const canvasHost = document.getElementById("canvas")!;
const paletteHost = document.getElementById("palette")!;
const sourceHost = document.getElementById("source")!;
const statusHost = document.getElementById("status")!;

const client = new ApiClient(SERVICE_URL);
const store = new EditorStore(client);

let speciesCounter = 0;

function redraw(): void {
  canvasHost.innerHTML = renderScene(store);
  sourceHost.textContent = store.sourceXml;
  statusHost.textContent = store.lastError ?? "";
  for (const button of paletteHost.querySelectorAll("button[data-tool]")) {
    const active =
      (store.tool.kind === "add-interaction" &&
        button.getAttribute("data-tool") === store.tool.glyph) ||
      button.getAttribute("data-tool") === store.tool.kind;
    button.classList.toggle("active", active);
  }
}

store.onChange = redraw;

function buildPalette(): void {
  const tools: Array<[string, () => void]> = [
    ["select", () => store.setTool({ kind: "select" })],
    ["add-species", () => store.setTool({ kind: "add-species", species: "protein" })],
    ["edit-waypoints", () => store.setTool({ kind: "edit-waypoints" })],
  ];
  for (const [name, activate] of tools) {
    const button = document.createElement("button");
    button.textContent = name;
    button.setAttribute("data-tool", name);
    button.addEventListener("click", activate);
    paletteHost.appendChild(button);
  }
  // interaction tools come from the service's glyph catalog, never hardcoded
  for (const glyph of store.glyphs) {
    const button = document.createElement("button");
    button.textContent = `${glyph.name} (${glyph.category[0]})`;
    button.setAttribute("data-tool", glyph.name);
    button.addEventListener("click", () =>
      store.setTool({ kind: "add-interaction", glyph: glyph.name }));
    paletteHost.appendChild(button);
  }
  const undoButton = document.createElement("button");
  undoButton.textContent = "undo";
  undoButton.addEventListener("click", () => void store.undo());
  paletteHost.appendChild(undoButton);
  const redoButton = document.createElement("button");
  redoButton.textContent = "redo";
  redoButton.addEventListener("click", () => void store.redo());
  paletteHost.appendChild(redoButton);
}

function scenePoint(event: MouseEvent): [number, number] {
  const svg = canvasHost.querySelector("svg");
  if (!svg) return [event.offsetX, event.offsetY];
  const view = svg.viewBox.baseVal;
  const rect = svg.getBoundingClientRect();
  return [
    view.x + ((event.clientX - rect.left) / rect.width) * view.width,
    view.y + ((event.clientY - rect.top) / rect.height) * view.height,
  ];
}

interface DragContext {
  nodeId?: string;
  seg?: { edge: string; index: number; horizontal: boolean };
  moved: boolean;
}

let dragContext: DragContext | null = null;

canvasHost.addEventListener("mousedown", (event) => {
  const target = event.target as Element;
  const [x, y] = scenePoint(event);

  const handle = target.closest(".segment-handle");
  if (handle && store.editedPoints) {
    const index = Number(handle.getAttribute("data-seg"));
    const pts = store.editedPoints;
    const horizontal = Math.abs(pts[index]![1] - pts[index + 1]![1]) < 1e-9;
    dragContext = { seg: { edge: handle.getAttribute("data-edge")!, index, horizontal }, moved: false };
    return;
  }

  const nodeEl = target.closest(".node");
  if (nodeEl) {
    const id = nodeEl.getAttribute("data-id")!;
    if (store.tool.kind === "add-interaction") {
      void store.clickAnchor({ node: id });
      return;
    }
    if (store.tool.kind === "select") {
      store.beginNodeDrag(id);
      dragContext = { nodeId: id, moved: false };
      return;
    }
  }

  const edgeEl = target.closest(".edge");
  if (edgeEl) {
    const id = edgeEl.getAttribute("data-id")!;
    if (store.tool.kind === "add-interaction") {
      void store.clickAnchor(anchorOnEdge(id, x, y));
      return;
    }
    if (store.tool.kind === "edit-waypoints") {
      store.beginWaypointEdit(id);
      return;
    }
    store.selection = id;
    redraw();
    return;
  }

  if (store.tool.kind === "add-species") {
    speciesCounter += 1;
    void store.addSpecies({
      kind: "protein",
      label: `S${speciesCounter}`,
      x: x - 40,
      y: y - 20,
      w: 80,
      h: 40,
    });
  }
});

canvasHost.addEventListener("dblclick", (event) => {
  const target = event.target as Element;
  const handle = target.closest(".segment-handle");
  if (handle && store.editedPoints) {
    store.insertBendAt(Number(handle.getAttribute("data-seg")));
  }
});

window.addEventListener("mousemove", (event) => {
  if (!dragContext) return;
  const [x, y] = scenePoint(event as MouseEvent);
  dragContext.moved = true;
  if (dragContext.nodeId) {
    store.dragNodeTo(x - 40, y - 20);
  } else if (dragContext.seg) {
    store.dragSegmentTo(dragContext.seg.index, dragContext.seg.horizontal ? y : x);
  }
});

window.addEventListener("mouseup", (event) => {
  if (!dragContext) return;
  const context = dragContext;
  dragContext = null;
  const [x, y] = scenePoint(event as MouseEvent);
  if (context.nodeId) {
    if (context.moved) {
      void store.endNodeDrag(x - 40, y - 20);
    } else {
      store.cancelNodeDrag();
    }
  }
});

window.addEventListener("keydown", (event) => {
  if (event.key === "Enter" && store.editedPoints) {
    void store.commitWaypoints();
  } else if (event.key === "Escape") {
    store.cancelWaypointEdit();
    store.setTool({ kind: "select" });
  } else if (event.key === "z" && (event.ctrlKey || event.metaKey)) {
    event.preventDefault();
    void (event.shiftKey ? store.redo() : store.undo());
  } else if ((event.key === "Delete" || event.key === "Backspace") && store.selection) {
    void store.deleteItem(store.selection);
  }
});

function anchorOnEdge(edgeId: string, x: number, y: number): AnchorParam {
  // project the click onto the polyline to get the arc-length fraction
  const edge = store.map!.edges.find((e) => e.id === edgeId)!;
  let total = 0;
  const lengths: number[] = [];
  for (let i = 1; i < edge.points.length; i++) {
    const l = Math.abs(edge.points[i]![0] - edge.points[i - 1]![0])
      + Math.abs(edge.points[i]![1] - edge.points[i - 1]![1]);
    lengths.push(l);
    total += l;
  }
  let best = 0.5;
  let bestDist = Infinity;
  let run = 0;
  for (let i = 1; i < edge.points.length; i++) {
    const [ax, ay] = edge.points[i - 1]!;
    const [bx, by] = edge.points[i]!;
    const length = lengths[i - 1]!;
    const tSeg = length === 0 ? 0 : Math.max(0, Math.min(1,
      (Math.abs(bx - ax) > Math.abs(by - ay) ? (x - ax) / (bx - ax || 1) : (y - ay) / (by - ay || 1))));
    const px = ax + (bx - ax) * tSeg;
    const py = ay + (by - ay) * tSeg;
    const dist = Math.hypot(px - x, py - y);
    if (dist < bestDist) {
      bestDist = dist;
      best = total === 0 ? 0.5 : (run + tSeg * length) / total;
    }
    run += length;
  }
  return { edge: edgeId, t: Math.round(best * 1000) / 1000 };
}

async function boot(): Promise<void> {
  statusHost.textContent = "connecting...";
  if (!(await client.health())) {
    statusHost.textContent =
      `service not reachable at ${SERVICE_URL} — start it with: mimgraph serve`;
    return;
  }
  await store.init();
  buildPalette();
  redraw();
}

void boot();
