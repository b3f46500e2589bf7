// Orthogonal polyline editing. Every gesture is constrained so a diagonal
// segment cannot be produced: segments translate perpendicular to their
// own axis, neighbors stretch along theirs.

import type { Point } from "./types.js";

const EPS = 1e-9;

export function isOrthogonal(points: Point[]): boolean {
  if (points.length < 2) return false;
  for (let i = 1; i < points.length; i++) {
    const [ax, ay] = points[i - 1]!;
    const [bx, by] = points[i]!;
    const dx = Math.abs(ax - bx);
    const dy = Math.abs(ay - by);
    if (dx > EPS && dy > EPS) return false;
    if (dx <= EPS && dy <= EPS) return false;
  }
  return true;
}

export function segmentIsHorizontal(points: Point[], seg: number): boolean {
  const [, ay] = points[seg]!;
  const [, by] = points[seg + 1]!;
  return Math.abs(ay - by) <= EPS;
}

/** Drop duplicate consecutive points and merge collinear runs (same rule
 * the backend applies before storing manual waypoints). */
export function simplify(points: Point[]): Point[] {
  let out = points.slice();
  for (;;) {
    const next = simplifyPass(out);
    if (next.length === out.length) return next;
    out = next;
  }
}

function simplifyPass(points: Point[]): Point[] {
  if (points.length <= 1) return points.slice();
  const dedup: Point[] = [points[0]!];
  for (const p of points.slice(1)) {
    const last = dedup[dedup.length - 1]!;
    if (Math.abs(p[0] - last[0]) <= EPS && Math.abs(p[1] - last[1]) <= EPS) continue;
    dedup.push(p);
  }
  if (dedup.length <= 2) return dedup;
  const merged: Point[] = [dedup[0]!];
  for (let i = 1; i < dedup.length - 1; i++) {
    const prev = merged[merged.length - 1]!;
    const cur = dedup[i]!;
    const next = dedup[i + 1]!;
    const sameX = Math.abs(prev[0] - cur[0]) <= EPS && Math.abs(cur[0] - next[0]) <= EPS;
    const sameY = Math.abs(prev[1] - cur[1]) <= EPS && Math.abs(cur[1] - next[1]) <= EPS;
    if (!(sameX || sameY)) merged.push(cur);
  }
  merged.push(dedup[dedup.length - 1]!);
  return merged;
}

/**
 * Split segment `seg` by inserting two distinct collinear handles around
 * fraction `t`. The polyline's geometry is unchanged until the piece
 * between the handles is dragged away, which folds it into a bend.
 */
export function insertBend(points: Point[], seg: number, t = 0.5, spread = 0.2): Point[] {
  const [ax, ay] = points[seg]!;
  const [bx, by] = points[seg + 1]!;
  const lo = Math.min(Math.max(t - spread / 2, 0.05), 0.9);
  const hi = Math.min(Math.max(t + spread / 2, lo + 0.05), 0.95);
  const a: Point = [ax + (bx - ax) * lo, ay + (by - ay) * lo];
  const b: Point = [ax + (bx - ax) * hi, ay + (by - ay) * hi];
  const out = points.slice();
  out.splice(seg + 1, 0, a, b);
  return out;
}

function aligned(a: Point, b: Point): boolean {
  return Math.abs(a[0] - b[0]) <= EPS || Math.abs(a[1] - b[1]) <= EPS;
}

/**
 * Translate segment `seg` perpendicular to its axis to coordinate `coord`
 * (a y for horizontal segments, an x for vertical ones). Perpendicular
 * neighbor segments stretch; collinear neighbors gain a connector corner,
 * so dragging the middle of a straight run folds out a U. The polyline's
 * endpoints are anchor positions and never move. Orthogonal by
 * construction.
 */
export function dragSegment(points: Point[], seg: number, coord: number): Point[] {
  let pts = points.map((p) => [p[0], p[1]] as Point);
  if (seg === 0) {
    pts = [[...pts[0]!] as Point, ...pts];
    seg = 1;
  }
  if (seg === pts.length - 2) {
    pts = [...pts, [...pts[pts.length - 1]!] as Point];
  }
  if (segmentIsHorizontal(pts, seg)) {
    pts[seg] = [pts[seg]![0], coord];
    pts[seg + 1] = [pts[seg + 1]![0], coord];
  } else {
    pts[seg] = [coord, pts[seg]![1]];
    pts[seg + 1] = [coord, pts[seg + 1]![1]];
  }
  // connector corners where the move broke alignment with a neighbor;
  // [moved.x, neighbor.y] is orthogonal to both by construction
  const after = pts[seg + 2]!;
  if (!aligned(pts[seg + 1]!, after)) {
    pts.splice(seg + 2, 0, [pts[seg + 1]![0], after[1]]);
  }
  const before = pts[seg - 1]!;
  if (!aligned(before, pts[seg]!)) {
    pts.splice(seg, 0, [pts[seg]![0], before[1]]);
  }
  return pts;
}

/** Pull one end of the polyline to a new anchor position, stretching the
 * end segment instead of rotating it (preview for rubber-band drags). */
export function translateEndpoint(points: Point[], newPoint: Point, first: boolean): Point[] {
  let pts = points.map((p) => [p[0], p[1]] as Point);
  if (!first) pts.reverse();
  const old = pts[0]!;
  const moved = Math.abs(old[0] - newPoint[0]) > EPS || Math.abs(old[1] - newPoint[1]) > EPS;
  if (!moved) {
    pts[0] = [newPoint[0], newPoint[1]];
  } else if (pts.length === 2) {
    const other = pts[1]!;
    if (Math.abs(newPoint[0] - other[0]) <= EPS || Math.abs(newPoint[1] - other[1]) <= EPS) {
      pts = [[newPoint[0], newPoint[1]], other];
    } else {
      pts = [[newPoint[0], newPoint[1]], [other[0], newPoint[1]], other];
    }
  } else {
    const w1 = pts[1]!;
    if (segmentIsHorizontal(pts, 0)) {
      pts[1] = [w1[0], newPoint[1]];
    } else {
      pts[1] = [newPoint[0], w1[1]];
    }
    pts[0] = [newPoint[0], newPoint[1]];
  }
  if (!first) pts.reverse();
  return pts;
}
