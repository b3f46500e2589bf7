// Thin HTTP client for the map service. Every editor mutation goes through
// here; the canvas never computes routes itself.

import type { AnchorParam, GlyphInfo, MapJson, OpDelta, Point, ServiceError } from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    readonly detail: string,
  ) {
    super(`${code} (${status}): ${detail}`);
  }
}

async function parseError(response: Response): Promise<never> {
  let body: ServiceError;
  try {
    body = (await response.json()) as ServiceError;
  } catch {
    body = { code: "Unknown", message: response.statusText, detail: "" };
  }
  throw new ApiError(response.status, body.code, body.detail || body.message);
}

export type OpBody =
  | { op: "add_species"; params: Record<string, unknown> }
  | { op: "add_interaction"; params: { kind: string; source: AnchorParam; target: AnchorParam; id?: string } }
  | { op: "move_species"; params: { id: string; x: number; y: number } }
  | { op: "set_manual_waypoints"; params: { id: string; points: Point[] } }
  | { op: "delete"; params: { id: string } };

export class ApiClient {
  constructor(readonly baseUrl: string) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const response = await fetch(this.baseUrl + path, init);
    if (!response.ok) {
      await parseError(response);
    }
    return response;
  }

  async createMap(document?: string): Promise<{ map_id: string; map: MapJson }> {
    const response = await this.request("/maps", {
      method: "POST",
      body: document ?? "",
    });
    return (await response.json()) as { map_id: string; map: MapJson };
  }

  async getMap(mapId: string): Promise<MapJson> {
    const response = await this.request(`/maps/${mapId}`);
    return (await response.json()) as MapJson;
  }

  async op(mapId: string, body: OpBody): Promise<OpDelta> {
    const response = await this.request(`/maps/${mapId}/ops`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
    return (await response.json()) as OpDelta;
  }

  async undo(mapId: string): Promise<MapJson> {
    const response = await this.request(`/maps/${mapId}/undo`, { method: "POST" });
    return ((await response.json()) as { map: MapJson }).map;
  }

  async redo(mapId: string): Promise<MapJson> {
    const response = await this.request(`/maps/${mapId}/redo`, { method: "POST" });
    return ((await response.json()) as { map: MapJson }).map;
  }

  async exportMap(mapId: string, format: "xml" | "sbml" | "svg"): Promise<string> {
    const response = await this.request(`/maps/${mapId}/export?format=${format}`);
    return await response.text();
  }

  async glyphs(): Promise<GlyphInfo[]> {
    const response = await this.request("/glyphs");
    return (await response.json()) as GlyphInfo[];
  }

  async health(): Promise<boolean> {
    try {
      const response = await fetch(this.baseUrl + "/healthz");
      return response.ok;
    } catch {
      return false;
    }
  }
}
