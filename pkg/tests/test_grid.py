from collections import deque

import pytest

from mimgraph.errors import DegenerateTerminals
from mimgraph.geometry import TOL
from mimgraph.grid import SNAP, STUB, build_grid


def lattice_edges(grid):
    return [(a, b) for a, b in grid.edges()
            if isinstance(a, tuple) and isinstance(b, tuple)]


class TestLatticeArithmetic:
    def test_6x6_has_60_segments_to_choose_from(self):
        grid = build_grid((0, 0), (100, 100), 6)
        assert grid.node_count() == 36
        assert len(lattice_edges(grid)) == 60
        assert grid.lattice_edge_count == 60

    def test_11x11_has_121_nodes(self):
        grid = build_grid((0, 0), (100, 100), 11)
        assert grid.node_count() == 121
        assert grid.lattice_node_count == 121

    def test_2x2_corner_terminals(self):
        grid = build_grid((0, 0), (100, 100), 2)
        assert grid.node_count() == 4
        assert len(grid.edges()) == 4

    @pytest.mark.parametrize("n", range(2, 17))
    def test_edge_count_law(self, n):
        grid = build_grid((7, -3), (211, 149), n)
        assert len(lattice_edges(grid)) == 2 * n * (n - 1)

    def test_rejects_tiny_dimension(self):
        with pytest.raises(ValueError):
            build_grid((0, 0), (10, 10), 1)

    def test_rejects_coincident_terminals(self):
        with pytest.raises(DegenerateTerminals):
            build_grid((5, 5), (5, 5), 6)


class TestTerminalAttachment:
    def test_aligned_build_snaps_both_terminals(self):
        grid = build_grid((0, 0), (100, 100), 6)
        assert grid.attachment == (SNAP, SNAP)
        assert isinstance(grid.source, tuple) and isinstance(grid.dest, tuple)

    def test_aligned_terminals_share_a_row(self):
        grid = build_grid((10, 50), (300, 50), 6)
        assert grid.pos[grid.source][1] == grid.pos[grid.dest][1] == 50

    def test_unaligned_build_can_stub(self):
        # with a 100x34 terminal box the quarter-margin lattice leaves the
        # terminals outside the inscribed snap disk of their cells
        grid = build_grid((0, 0), (100, 34), 6, align_terminals=False)
        assert STUB in grid.attachment
        for tag in ("src", "dst"):
            if tag in grid.pos:
                assert len(grid.adj[tag]) >= 1

    def test_stub_elbow_wires_an_l(self):
        grid = build_grid((0, 0), (100, 34), 6, align_terminals=False)
        assert grid.attachment == (STUB, STUB)
        # terminal -> elbow -> lattice, terminal not directly on the lattice
        assert grid.adj["src"] == ["src_l"]
        elbow_nbrs = grid.adj["src_l"]
        assert "src" in elbow_nbrs and any(isinstance(v, tuple) for v in elbow_nbrs)

    def test_stub_edges_stay_axis_aligned(self):
        grid = build_grid((0, 0), (100, 34), 6, align_terminals=False)
        for a, b in grid.edges():
            (ax, ay), (bx, by) = grid.pos[a], grid.pos[b]
            assert abs(ax - bx) <= TOL or abs(ay - by) <= TOL

    def test_snap_when_on_a_lattice_node(self):
        base = build_grid((0.0, 0.0), (100.0, 100.0), 6, align_terminals=False)
        xs, ys = base.xs, base.ys
        grid = build_grid((xs[1], ys[1]), (xs[4], ys[4]), 6, align_terminals=False)
        assert grid.attachment == (SNAP, SNAP)
        assert grid.source == (1, 1) and grid.dest == (4, 4)

    def test_terminals_mutually_reachable(self):
        cases = [
            ((0, 0), (100, 100), 6, True),
            ((0, 0), (90, 66), 6, False),
            ((-50, 20), (-50.5, 300), 4, True),
            ((3, 7), (400, 7), 9, False),
            ((0, 0), (10, 0), 2, True),
        ]
        for src, dst, n, align in cases:
            grid = build_grid(src, dst, n, align_terminals=align)
            seen = {grid.source}
            queue = deque([grid.source])
            while queue:
                v = queue.popleft()
                for w in grid.adj[v]:
                    if w not in seen:
                        seen.add(w)
                        queue.append(w)
            assert grid.dest in seen, f"dest unreachable for {src}->{dst} n={n}"

    def test_all_edges_axis_aligned_and_positive(self):
        grid = build_grid((12.5, -8.25), (317.75, 240.5), 7)
        for a, b in grid.edges():
            (ax, ay), (bx, by) = grid.pos[a], grid.pos[b]
            dx, dy = abs(ax - bx), abs(ay - by)
            assert (dx <= TOL) != (dy <= TOL), "edge must vary in exactly one axis"


class TestLatticeGeometry:
    def test_positions_strictly_increase(self):
        grid = build_grid((0, 0), (200, 150), 8)
        assert all(grid.xs[i] < grid.xs[i + 1] for i in range(len(grid.xs) - 1))
        assert all(grid.ys[i] < grid.ys[i + 1] for i in range(len(grid.ys) - 1))

    def test_terminals_on_lattice_when_aligned(self):
        grid = build_grid((40, 30), (400, 270), 6)
        sx, sy = grid.pos[grid.source]
        dx, dy = grid.pos[grid.dest]
        assert (sx, sy) == (40, 30)
        assert (dx, dy) == (400, 270)

    def test_margin_present_on_default_grids(self):
        grid = build_grid((0, 0), (100, 100), 6)
        assert grid.xs[0] < 0 < 100 < grid.xs[-1]
        assert grid.ys[0] < 0 < 100 < grid.ys[-1]

    def test_adjacency_is_sorted_and_symmetric(self):
        from mimgraph.grid import node_rank

        grid = build_grid((0, 0), (100, 60), 5)
        for v, nbrs in grid.adj.items():
            assert nbrs == sorted(nbrs, key=node_rank)
            for w in nbrs:
                assert v in grid.adj[w]
