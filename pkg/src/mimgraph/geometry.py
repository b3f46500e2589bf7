"""Axis-aligned collision kernel and polyline helpers.

All predicates work on orthogonal (axis-aligned) segments in scene units.
Comparisons use an absolute tolerance of 1e-9; touching at a segment
endpoint is never a crossing, collinear overlap of positive length always
is.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidGeometry

Point = tuple[float, float]

TOL = 1e-9

AXIS_H = 0
AXIS_V = 1


@dataclass(frozen=True)
class OrthoSegment:
    a: Point
    b: Point

    def __post_init__(self) -> None:
        ax, ay = self.a
        bx, by = self.b
        if abs(ax - bx) > TOL and abs(ay - by) > TOL:
            raise InvalidGeometry(f"segment {self.a}-{self.b} is not axis-aligned")
        if abs(ax - bx) <= TOL and abs(ay - by) <= TOL:
            raise InvalidGeometry(f"segment {self.a}-{self.b} has zero length")

    @property
    def horizontal(self) -> bool:
        return abs(self.a[1] - self.b[1]) <= TOL


def seg_axis(a: Point, b: Point) -> int:
    """Axis of the segment a-b: AXIS_H or AXIS_V. Horizontal wins ties."""
    if abs(a[1] - b[1]) <= TOL:
        return AXIS_H
    return AXIS_V


def _span(lo: float, hi: float) -> tuple[float, float]:
    return (lo, hi) if lo <= hi else (hi, lo)


def segments_cross(s1: OrthoSegment, s2: OrthoSegment) -> bool:
    """True iff the segments cross at a point interior to both, or overlap
    collinearly with positive length.

    Contact at an endpoint of either segment (shared endpoints, T-junctions)
    is not a crossing: paths legitimately terminate on node borders and join
    other lines at anchor points.
    """
    if s1.horizontal == s2.horizontal:
        return _parallel_overlap(s1, s2)
    h, v = (s1, s2) if s1.horizontal else (s2, s1)
    hy = h.a[1]
    vx = v.a[0]
    hx1, hx2 = _span(h.a[0], h.b[0])
    vy1, vy2 = _span(v.a[1], v.b[1])
    # interior to both: strictly between the endpoints of each
    return (hx1 + TOL < vx < hx2 - TOL) and (vy1 + TOL < hy < vy2 - TOL)


def _parallel_overlap(s1: OrthoSegment, s2: OrthoSegment) -> bool:
    if s1.horizontal:
        if abs(s1.a[1] - s2.a[1]) > TOL:
            return False
        a1, a2 = _span(s1.a[0], s1.b[0])
        b1, b2 = _span(s2.a[0], s2.b[0])
    else:
        if abs(s1.a[0] - s2.a[0]) > TOL:
            return False
        a1, a2 = _span(s1.a[1], s1.b[1])
        b1, b2 = _span(s2.a[1], s2.b[1])
    return min(a2, b2) - max(a1, b1) > TOL


def segment_hits_rect(s: OrthoSegment, x1: float, y1: float, x2: float, y2: float) -> bool:
    """True iff the segment overlaps the closed rectangle with positive length.

    The boundary counts as a hit; touching only at a corner point does not.
    """
    if s.horizontal:
        y = s.a[1]
        if not (y1 - TOL <= y <= y2 + TOL):
            return False
        lo, hi = _span(s.a[0], s.b[0])
        return min(hi, x2) - max(lo, x1) > TOL
    x = s.a[0]
    if not (x1 - TOL <= x <= x2 + TOL):
        return False
    lo, hi = _span(s.a[1], s.b[1])
    return min(hi, y2) - max(lo, y1) > TOL


def segment_hits_node(s: OrthoSegment, node) -> bool:
    """Rectangle collision against a species node (bounding box; rounded
    corners are deliberately ignored — the overlap penalty dwarfs corner
    precision)."""
    return segment_hits_rect(s, node.x, node.y, node.x + node.w, node.y + node.h)


# -- polylines ---------------------------------------------------------------

def is_orthogonal(points: list[Point]) -> bool:
    """True iff the polyline has >= 2 points, every segment is axis-aligned
    and no segment has zero length."""
    if len(points) < 2:
        return False
    for (ax, ay), (bx, by) in zip(points, points[1:]):
        dx, dy = abs(ax - bx), abs(ay - by)
        if dx > TOL and dy > TOL:
            return False
        if dx <= TOL and dy <= TOL:
            return False
    return True


def simplify_polyline(points: list[Point]) -> list[Point]:
    """Drop repeated consecutive points and merge collinear runs, shortcutting
    out-and-back spurs. Runs to a fixpoint, so it is idempotent; the first
    and last positions are preserved. A degenerate input can collapse to a
    single point.
    """
    out = list(points)
    while True:
        reduced = _simplify_pass(out)
        if reduced == out:
            return reduced
        out = reduced


def _simplify_pass(points: list[Point]) -> list[Point]:
    if len(points) <= 1:
        return list(points)
    out: list[Point] = [points[0]]
    for p in points[1:]:
        if abs(p[0] - out[-1][0]) <= TOL and abs(p[1] - out[-1][1]) <= TOL:
            continue
        out.append(p)
    if len(out) <= 2:
        return out
    merged: list[Point] = [out[0]]
    for i in range(1, len(out) - 1):
        prev, cur, nxt = merged[-1], out[i], out[i + 1]
        same_x = abs(prev[0] - cur[0]) <= TOL and abs(cur[0] - nxt[0]) <= TOL
        same_y = abs(prev[1] - cur[1]) <= TOL and abs(cur[1] - nxt[1]) <= TOL
        if not (same_x or same_y):
            merged.append(cur)
    merged.append(out[-1])
    return merged


def polyline_length(points: list[Point]) -> float:
    total = 0.0
    for (ax, ay), (bx, by) in zip(points, points[1:]):
        total += abs(bx - ax) + abs(by - ay)
    return total


def point_at_fraction(points: list[Point], t: float) -> Point:
    """Point at arc-length fraction t in [0,1] along the polyline."""
    if not points:
        raise InvalidGeometry("empty polyline")
    if len(points) == 1:
        return points[0]
    total = polyline_length(points)
    if total <= TOL:
        return points[0]
    target = max(0.0, min(1.0, t)) * total
    run = 0.0
    for (ax, ay), (bx, by) in zip(points, points[1:]):
        seg = abs(bx - ax) + abs(by - ay)
        if run + seg >= target - TOL:
            f = 0.0 if seg <= TOL else (target - run) / seg
            return (ax + (bx - ax) * f, ay + (by - ay) * f)
        run += seg
    return points[-1]


def bend_count(points: list[Point]) -> int:
    """Number of 90-degree turns at interior points of the polyline."""
    bends = 0
    for i in range(1, len(points) - 1):
        if seg_axis(points[i - 1], points[i]) != seg_axis(points[i], points[i + 1]):
            bends += 1
    return bends
