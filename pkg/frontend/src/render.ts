// SVG rendering of the editor scene: the map mirror plus tool overlays
// (selection outline, armed interaction source, waypoint handles). String
// output so it runs headless in tests and as innerHTML in the browser.

import type { EditorStore } from "./state.js";
import { anchorPoint } from "./state.js";
import type { MapJson, Point } from "./types.js";

const FALLBACK_MARKER = '<path d="M0,1.5 L10,5 L0,8.5 z" fill="#333"/>';

// glyph name -> marker body inside a 10x10 viewBox, tip at x=10
const MARKERS: Record<string, string> = {
  covalent_modification: '<path d="M0,1.5 L10,5 L0,8.5 z" fill="#333"/>',
  non_covalent_binding:
    '<path d="M0,0 L10,5 L0,10 M4,1.5 L10,5 L4,8.5" fill="none" stroke="#333" stroke-width="1.4"/>',
  stimulation: '<path d="M0,0.5 L10,5 L0,9.5" fill="none" stroke="#333" stroke-width="1.4"/>',
  inhibition: '<path d="M8.6,0 L8.6,10" fill="none" stroke="#333" stroke-width="2.2"/>',
  transcription:
    '<path d="M0,1.5 L10,5 L0,8.5 z M0,0 L0,10" fill="#333" stroke="#333" stroke-width="1"/>',
  cleavage: '<path d="M1,1 L9,9 M9,1 L1,9" fill="none" stroke="#333" stroke-width="1.6"/>',
  degradation:
    '<g fill="none" stroke="#333" stroke-width="1.4"><circle cx="5" cy="5" r="4"/><path d="M2.2,7.8 L7.8,2.2"/></g>',
  catalysis: '<circle cx="5" cy="5" r="4" fill="white" stroke="#333" stroke-width="1.4"/>',
};

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function bbox(map: MapJson): [number, number, number, number] {
  const xs: number[] = [];
  const ys: number[] = [];
  for (const n of map.nodes) {
    xs.push(n.x, n.x + n.w);
    ys.push(n.y, n.y + n.h);
  }
  for (const e of map.edges) {
    for (const [x, y] of e.points) {
      xs.push(x);
      ys.push(y);
    }
  }
  if (xs.length === 0) return [0, 0, 800, 600];
  const pad = 40;
  const x1 = Math.min(...xs) - pad;
  const y1 = Math.min(...ys) - pad;
  return [x1, y1, Math.max(...xs) + pad - x1, Math.max(...ys) + pad - y1];
}

export function renderScene(store: EditorStore): string {
  const map = store.map;
  if (!map) return "<svg xmlns=\"http://www.w3.org/2000/svg\"></svg>";
  const [vx, vy, vw, vh] = bbox(map);

  const out: string[] = [];
  out.push(
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="${vx} ${vy} ${vw} ${vh}" ` +
    `data-map="${esc(store.mapId ?? "")}">`,
  );

  out.push("<defs>");
  const glyphNames = store.glyphs.length
    ? store.glyphs.map((g) => g.name)
    : Object.keys(MARKERS);
  for (const name of glyphNames) {
    out.push(
      `<marker id="mk-${esc(name)}" viewBox="0 0 10 10" refX="10" refY="5" ` +
      `markerWidth="9" markerHeight="9" markerUnits="userSpaceOnUse" orient="auto">` +
      (MARKERS[name] ?? FALLBACK_MARKER) + "</marker>",
    );
  }
  out.push("</defs>");

  for (const node of map.nodes) {
    const selected = store.selection === node.id;
    const rx = node.kind === "dna" ? 0 : node.r;
    out.push(
      `<rect class="node" data-id="${esc(node.id)}" x="${node.x}" y="${node.y}" ` +
      `width="${node.w}" height="${node.h}" rx="${rx}" ry="${rx}" ` +
      `fill="#eef4fb" stroke="${selected ? "#d26911" : "#2c577d"}" ` +
      `stroke-width="${selected ? 2.5 : 1.5}"/>`,
    );
    out.push(
      `<text x="${node.x + node.w / 2}" y="${node.y + node.h / 2}" ` +
      `text-anchor="middle" dominant-baseline="middle" font-size="12" ` +
      `font-family="sans-serif" pointer-events="none">${esc(node.label)}</text>`,
    );
  }

  for (const edge of map.edges) {
    const editing = store.editedPoints && store.selection === edge.id;
    const points = editing ? store.editedPoints! : edge.points;
    const selected = store.selection === edge.id;
    const path = points.map(([x, y]) => `${x},${y}`).join(" ");
    out.push(
      `<polyline class="edge" data-id="${esc(edge.id)}" points="${path}" fill="none" ` +
      `stroke="${selected ? "#d26911" : "#333"}" stroke-width="1.5" ` +
      `marker-end="url(#mk-${esc(edge.kind)})"/>`,
    );
    if (editing) {
      out.push(...renderHandles(edge.id, points));
    }
  }

  if (store.pendingSource && store.tool.kind === "add-interaction") {
    try {
      const [px, py] = anchorPoint(map, store.pendingSource);
      out.push(
        `<circle class="pending-source" cx="${px}" cy="${py}" r="5" ` +
        `fill="none" stroke="#d26911" stroke-width="2"/>`,
      );
    } catch {
      // armed anchor may reference an item deleted meanwhile
    }
  }

  out.push("</svg>");
  return out.join("");
}

function renderHandles(edgeId: string, points: Point[]): string[] {
  const out: string[] = [];
  for (let i = 0; i + 1 < points.length; i++) {
    const [ax, ay] = points[i]!;
    const [bx, by] = points[i + 1]!;
    out.push(
      `<line class="segment-handle" data-edge="${esc(edgeId)}" data-seg="${i}" ` +
      `x1="${ax}" y1="${ay}" x2="${bx}" y2="${by}" stroke="#d2691166" ` +
      `stroke-width="8" stroke-linecap="round"/>`,
    );
  }
  for (let i = 0; i < points.length; i++) {
    const [x, y] = points[i]!;
    out.push(
      `<rect class="waypoint-handle" data-edge="${esc(edgeId)}" data-pt="${i}" ` +
      `x="${x - 3}" y="${y - 3}" width="6" height="6" fill="#d26911"/>`,
    );
  }
  return out;
}
