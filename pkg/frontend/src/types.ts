// JSON wire types, mirroring the service's map schema field-for-field.

export interface NodeJson {
  id: string;
  kind: string; // protein | dna | complex | other
  label: string;
  x: number;
  y: number;
  w: number;
  h: number;
  r: number;
}

export interface NodeAnchorJson {
  node: string;
  side: "n" | "e" | "s" | "w";
  offset: number;
}

export interface EdgeAnchorJson {
  edge: string;
  t: number;
}

export type AnchorJson = NodeAnchorJson | EdgeAnchorJson;

/** Anchor parameter as sent to the service; side omitted means "pick the
 * side facing the other terminal". */
export type AnchorParam =
  | { node: string; side?: "n" | "e" | "s" | "w"; offset?: number }
  | { edge: string; t?: number };

export type Point = [number, number];

export interface EdgeJson {
  id: string;
  kind: string;
  mode: "auto" | "manual";
  from: AnchorJson;
  to: AnchorJson;
  points: Point[];
}

export interface MapJson {
  meta: { name: string; version: string; created: string };
  nodes: NodeJson[];
  edges: EdgeJson[];
}

export interface GlyphInfo {
  name: string;
  category: "reaction" | "contingency";
}

export interface OpDelta {
  added?: { node?: NodeJson; edge?: EdgeJson };
  updated?: { edge?: EdgeJson };
  moved?: NodeJson;
  rerouted?: EdgeJson[];
  adjusted?: EdgeJson[];
  removed?: string[];
}

export interface ServiceError {
  code: string;
  message: string;
  detail: string;
}

export function isNodeAnchor(a: AnchorJson): a is NodeAnchorJson {
  return (a as NodeAnchorJson).node !== undefined;
}
