import { describe, expect, it } from "vitest";

import {
  dragSegment,
  insertBend,
  isOrthogonal,
  simplify,
  translateEndpoint,
} from "../src/ortho.js";
import type { Point } from "../src/types.js";

const L: Point[] = [[0, 0], [100, 0], [100, 80]];

describe("isOrthogonal", () => {
  it("accepts axis-aligned polylines", () => {
    expect(isOrthogonal(L)).toBe(true);
  });
  it("rejects diagonals, single points and zero segments", () => {
    expect(isOrthogonal([[0, 0], [50, 50]])).toBe(false);
    expect(isOrthogonal([[0, 0]])).toBe(false);
    expect(isOrthogonal([[0, 0], [0, 0]])).toBe(false);
  });
});

describe("dragSegment", () => {
  it("translates an interior segment perpendicular to its axis", () => {
    const pts: Point[] = [[0, 0], [50, 0], [50, 60], [120, 60]];
    const out = dragSegment(pts, 1, 80); // vertical segment to x=80
    expect(out).toEqual([[0, 0], [80, 0], [80, 60], [120, 60]]);
    expect(isOrthogonal(out)).toBe(true);
  });

  it("keeps the anchored endpoints fixed when dragging an end segment", () => {
    const out = dragSegment(L, 0, -40); // first (horizontal) segment down
    expect(out[0]).toEqual([0, 0]);
    expect(out[out.length - 1]).toEqual([100, 80]);
    expect(isOrthogonal(simplify(out).length >= 2 ? simplify(out) : out)).toBe(true);
    // the dragged piece really sits at y=-40
    expect(out.some(([, y]) => y === -40)).toBe(true);
  });

  it("never produces a diagonal for any segment index", () => {
    const pts: Point[] = [[0, 0], [40, 0], [40, 40], [90, 40], [90, 10], [140, 10]];
    for (let seg = 0; seg + 1 < pts.length; seg++) {
      const out = dragSegment(pts, seg, 23);
      const cleaned = simplify(out);
      expect(isOrthogonal(cleaned.length >= 2 ? cleaned : out)).toBe(true);
    }
  });
});

describe("insertBend", () => {
  it("adds two collinear handles without changing geometry", () => {
    const out = insertBend(L, 0, 0.5);
    expect(out).toHaveLength(5);
    expect(out[1]).toEqual([40, 0]);
    expect(out[2]).toEqual([60, 0]);
    expect(simplify(out)).toEqual(simplify(L));
  });

  it("handles diverge into a bend when dragged", () => {
    let pts = insertBend(L, 0, 0.5);
    pts = dragSegment(pts, 1, -30); // the piece between the new handles
    const cleaned = simplify(pts);
    expect(isOrthogonal(cleaned)).toBe(true);
    expect(cleaned.some(([, y]) => y === -30)).toBe(true);
    // endpoints still anchored
    expect(cleaned[0]).toEqual([0, 0]);
    expect(cleaned[cleaned.length - 1]).toEqual([100, 80]);
  });

  it("supports many sequential bends", () => {
    let pts: Point[] = [[0, 0], [400, 0]];
    for (let i = 0; i < 10; i++) {
      pts = insertBend(pts, 0, 0.2);
      pts = dragSegment(pts, 1, (i + 1) * 7);
      pts = simplify(pts);
    }
    expect(isOrthogonal(pts)).toBe(true);
    expect(pts[0]).toEqual([0, 0]);
    expect(pts[pts.length - 1]).toEqual([400, 0]);
  });
});

describe("simplify", () => {
  it("merges collinear runs and duplicates", () => {
    expect(simplify([[0, 0], [50, 0], [100, 0]])).toEqual([[0, 0], [100, 0]]);
    expect(simplify([[0, 0], [0, 0], [100, 0]])).toEqual([[0, 0], [100, 0]]);
  });
  it("is idempotent", () => {
    const messy: Point[] = [[0, 0], [10, 0], [10, 0], [30, 0], [30, 20], [30, 50]];
    const once = simplify(messy);
    expect(simplify(once)).toEqual(once);
  });
});

describe("translateEndpoint", () => {
  it("stretches the first segment without rotating it", () => {
    const out = translateEndpoint(L, [0, 30], true);
    expect(out[0]).toEqual([0, 30]);
    expect(isOrthogonal(simplify(out))).toBe(true);
  });
  it("handles the far endpoint symmetrically", () => {
    const out = translateEndpoint(L, [140, 80], false);
    expect(out[out.length - 1]).toEqual([140, 80]);
    expect(isOrthogonal(simplify(out))).toBe(true);
  });
  it("bridges a straight segment with an elbow when needed", () => {
    const out = translateEndpoint([[0, 0], [100, 0]], [0, 40], true);
    expect(out[0]).toEqual([0, 40]);
    expect(out[out.length - 1]).toEqual([100, 0]);
    expect(isOrthogonal(out)).toBe(true);
  });
});
