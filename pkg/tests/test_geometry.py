import random

import pytest
from hypothesis import given, strategies as st

from mimgraph import geometry
from mimgraph.errors import InvalidGeometry
from mimgraph.geometry import (
    OrthoSegment,
    bend_count,
    is_orthogonal,
    point_at_fraction,
    segment_hits_rect,
    segments_cross,
    simplify_polyline,
)
from oracles import sampled_segment_hits_rect, sampled_segments_cross


def seg(ax, ay, bx, by):
    return OrthoSegment((float(ax), float(ay)), (float(bx), float(by)))


class TestOrthoSegment:
    def test_rejects_diagonal(self):
        with pytest.raises(InvalidGeometry):
            seg(0, 0, 5, 5)

    def test_rejects_zero_length(self):
        with pytest.raises(InvalidGeometry):
            seg(3, 3, 3, 3)

    def test_axis_flags(self):
        assert seg(0, 0, 10, 0).horizontal
        assert not seg(0, 0, 0, 10).horizontal


class TestSegmentsCross:
    def test_perpendicular_interior_crossing(self):
        assert segments_cross(seg(0, 0, 10, 0), seg(5, -5, 5, 5))

    def test_endpoint_touch_is_not_a_crossing(self):
        assert not segments_cross(seg(0, 0, 10, 0), seg(10, 0, 10, 5))

    def test_collinear_overlap_counts(self):
        # expected value confirmed by the point-sampling oracle
        assert sampled_segments_cross((0, 0), (10, 0), (5, 0), (15, 0))
        assert segments_cross(seg(0, 0, 10, 0), seg(5, 0, 15, 0))

    def test_t_junction_on_either_side_is_contact_not_crossing(self):
        # endpoint of s2 in the interior of s1, and the mirror case
        assert not segments_cross(seg(0, 0, 10, 0), seg(5, 0, 5, 5))
        assert not segments_cross(seg(5, 0, 5, 5), seg(0, 0, 10, 0))

    def test_collinear_endpoint_touch(self):
        assert not segments_cross(seg(0, 0, 10, 0), seg(10, 0, 20, 0))

    def test_containment_overlaps(self):
        assert segments_cross(seg(0, 0, 10, 0), seg(2, 0, 8, 0))

    def test_parallel_separated(self):
        assert not segments_cross(seg(0, 0, 10, 0), seg(0, 1, 10, 1))


class TestSegmentHitsRect:
    def test_through_center(self):
        assert segment_hits_rect(seg(-5, 5, 15, 5), 0, 0, 10, 10)

    def test_one_unit_outside(self):
        assert not segment_hits_rect(seg(-5, 11, 15, 11), 0, 0, 10, 10)

    def test_grazing_boundary_counts(self):
        # boundary contact has positive overlap length: the rasterized
        # oracle agrees it is a hit
        assert sampled_segment_hits_rect((-5, 10), (15, 10), 0, 0, 10, 10)
        assert segment_hits_rect(seg(-5, 10, 15, 10), 0, 0, 10, 10)

    def test_corner_point_touch_is_not_a_hit(self):
        assert not segment_hits_rect(seg(10, 10, 20, 10), 0, 0, 10, 10)
        assert not sampled_segment_hits_rect((10, 10), (20, 10), 0, 0, 10, 10)

    def test_endpoint_on_boundary_only(self):
        assert not segment_hits_rect(seg(10, 5, 20, 5), 0, 0, 10, 10)


def _random_int_segment(rng):
    while True:
        a = (rng.randint(0, 12), rng.randint(0, 12))
        if rng.random() < 0.5:
            b = (rng.randint(0, 12), a[1])
        else:
            b = (a[0], rng.randint(0, 12))
        if b != a:
            return a, b


def test_predicates_agree_with_sampling_oracle_on_random_corpus():
    rng = random.Random(1207)
    agreements = 0
    for _ in range(100):
        a1, b1 = _random_int_segment(rng)
        a2, b2 = _random_int_segment(rng)
        got = segments_cross(OrthoSegment(a1, b1), OrthoSegment(a2, b2))
        want = sampled_segments_cross(a1, b1, a2, b2)
        assert got == want, f"{a1}-{b1} vs {a2}-{b2}: impl {got}, oracle {want}"

        x1, y1 = rng.randint(0, 9), rng.randint(0, 9)
        x2, y2 = x1 + rng.randint(1, 4), y1 + rng.randint(1, 4)
        got = segment_hits_rect(OrthoSegment(a1, b1), x1, y1, x2, y2)
        want = sampled_segment_hits_rect(a1, b1, x1, y1, x2, y2)
        assert got == want, f"{a1}-{b1} vs rect {(x1, y1, x2, y2)}: impl {got}, oracle {want}"
        agreements += 1
    assert agreements == 100


@st.composite
def ortho_segments(draw):
    ax = draw(st.integers(0, 20))
    ay = draw(st.integers(0, 20))
    if draw(st.booleans()):
        bx = draw(st.integers(0, 20).filter(lambda v: v != ax))
        return OrthoSegment((float(ax), float(ay)), (float(bx), float(ay)))
    by = draw(st.integers(0, 20).filter(lambda v: v != ay))
    return OrthoSegment((float(ax), float(ay)), (float(ax), float(by)))


@given(ortho_segments(), ortho_segments())
def test_crossing_is_symmetric(s1, s2):
    assert segments_cross(s1, s2) == segments_cross(s2, s1)


@given(ortho_segments(), ortho_segments(),
       st.floats(-500, 500), st.floats(-500, 500))
def test_crossing_is_translation_invariant(s1, s2, tx, ty):
    def shift(s):
        return OrthoSegment((s.a[0] + tx, s.a[1] + ty), (s.b[0] + tx, s.b[1] + ty))
    assert segments_cross(s1, s2) == segments_cross(shift(s1), shift(s2))


@given(ortho_segments(), st.integers(0, 15), st.integers(0, 15),
       st.integers(1, 5), st.integers(1, 5),
       st.floats(-500, 500), st.floats(-500, 500))
def test_rect_hit_is_translation_invariant(s, x, y, w, h, tx, ty):
    base = segment_hits_rect(s, x, y, x + w, y + h)
    shifted = OrthoSegment((s.a[0] + tx, s.a[1] + ty), (s.b[0] + tx, s.b[1] + ty))
    assert segment_hits_rect(shifted, x + tx, y + ty, x + w + tx, y + h + ty) == base


@st.composite
def ortho_polylines(draw):
    x, y = draw(st.integers(0, 50)), draw(st.integers(0, 50))
    pts = [(float(x), float(y))]
    for _ in range(draw(st.integers(1, 8))):
        delta = draw(st.integers(-10, 10))
        x, y = (x + delta, y) if draw(st.booleans()) else (x, y + delta)
        pts.append((float(x), float(y)))
    return pts


@given(ortho_polylines())
def test_simplify_is_idempotent(pts):
    once = simplify_polyline(pts)
    assert simplify_polyline(once) == once


@given(ortho_polylines())
def test_simplify_keeps_endpoints(pts):
    out = simplify_polyline(pts)
    assert out[0] == pts[0]
    assert out[-1] == pts[-1]


class TestPolylineHelpers:
    def test_collinear_triple_merges(self):
        assert simplify_polyline([(0, 0), (5, 0), (10, 0)]) == [(0, 0), (10, 0)]

    def test_duplicate_points_drop(self):
        assert simplify_polyline([(0, 0), (0, 0), (5, 0)]) == [(0, 0), (5, 0)]

    def test_is_orthogonal(self):
        assert is_orthogonal([(0, 0), (5, 0), (5, 5)])
        assert not is_orthogonal([(0, 0), (5, 5)])
        assert not is_orthogonal([(0, 0)])
        assert not is_orthogonal([(0, 0), (0, 0)])

    def test_point_at_fraction(self):
        pts = [(0.0, 0.0), (10.0, 0.0), (10.0, 10.0)]
        assert point_at_fraction(pts, 0.0) == (0.0, 0.0)
        assert point_at_fraction(pts, 1.0) == (10.0, 10.0)
        assert point_at_fraction(pts, 0.5) == (10.0, 0.0)
        assert point_at_fraction(pts, 0.25) == (5.0, 0.0)

    def test_bend_count(self):
        assert bend_count([(0, 0), (10, 0), (20, 0)]) == 0
        assert bend_count([(0, 0), (10, 0), (10, 10), (20, 10)]) == 2
