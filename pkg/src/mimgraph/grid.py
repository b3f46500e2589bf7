"""Routing lattice for a single edge request.

An n x n lattice of imaginary nodes spans the two terminals' inflated
bounding box: roughly a quarter of the larger span of margin per side,
never less than a quarter of 20 scene units. By default the tick positions
are quantized so both terminals lie exactly on lattice intersections --
aligned terminals then share a row or column and the straight connection
exists in the graph. Terminals snap onto the nearest lattice node when
they fall inside the cell's inscribed disk; otherwise they join the graph
as extra nodes wired to the nearest lattice node by one orthogonal stub
(or two forming an L).

Every edge of the graph is axis-aligned and costs the same flat base
amount regardless of geometric length: route cost is combinatorial, not
metric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DegenerateTerminals
from .geometry import TOL, Point

MIN_SPAN = 20.0
MARGIN_FRACTION = 0.25

NodeId = tuple[int, int] | str  # lattice (row, col) or "src"/"dst"/"src_l"/"dst_l"

SNAP = "snap"
STUB = "stub"

_TERMINAL_ORDER = {"src": 0, "src_l": 1, "dst": 2, "dst_l": 3}


def node_rank(node) -> tuple:
    """Total deterministic order over grid nodes, lattice first."""
    if isinstance(node, tuple):
        return (0, node[0], node[1])
    return (1, _TERMINAL_ORDER[node], 0)


@dataclass
class RoutingGrid:
    n: int
    xs: list[float]
    ys: list[float]
    pos: dict[NodeId, Point] = field(default_factory=dict)
    adj: dict[NodeId, list[NodeId]] = field(default_factory=dict)
    source: NodeId = "src"
    dest: NodeId = "dst"
    attachment: tuple[str, str] = (SNAP, SNAP)

    @property
    def lattice_node_count(self) -> int:
        return self.n * self.n

    @property
    def lattice_edge_count(self) -> int:
        return 2 * self.n * (self.n - 1)

    def node_count(self) -> int:
        return len(self.pos)

    def edges(self) -> list[tuple]:
        """Each undirected edge once, deterministically ordered."""
        out = []
        for a in sorted(self.adj, key=node_rank):
            for b in self.adj[a]:
                if node_rank(a) < node_rank(b):
                    out.append((a, b))
        return out

    def _connect(self, a, b) -> None:
        self.adj.setdefault(a, []).append(b)
        self.adj.setdefault(b, []).append(a)


def build_grid(source_pt: Point, dest_pt: Point, n: int,
               align_terminals: bool = True) -> RoutingGrid:
    """Lay the lattice over the terminals and attach them.

    An n x n lattice has n^2 imaginary nodes and 2*n*(n-1) lattice edges;
    stub attachment may add up to two extra nodes per terminal. With
    `align_terminals` (the default) tick positions are chosen so the
    terminals sit on lattice intersections and always snap; without it the
    margins are exact quarters and terminals snap or stub depending on
    where they fall in their cell.
    """
    if n < 2:
        raise ValueError(f"grid dimension must be >= 2, got {n}")
    sx, sy = float(source_pt[0]), float(source_pt[1])
    dx, dy = float(dest_pt[0]), float(dest_pt[1])
    if abs(sx - dx) <= TOL and abs(sy - dy) <= TOL:
        raise DegenerateTerminals(f"coincident terminals at {source_pt}")

    x1, x2 = min(sx, dx), max(sx, dx)
    y1, y2 = min(sy, dy), max(sy, dy)
    margin = MARGIN_FRACTION * max(x2 - x1, y2 - y1, MIN_SPAN)
    if align_terminals:
        xs = _aligned_ticks(x1, x2, n, margin)
        ys = _aligned_ticks(y1, y2, n, margin)
    else:
        xs = [x1 - margin + (x2 - x1 + 2 * margin) * i / (n - 1) for i in range(n)]
        ys = [y1 - margin + (y2 - y1 + 2 * margin) * i / (n - 1) for i in range(n)]

    grid = RoutingGrid(n=n, xs=xs, ys=ys)
    for r in range(n):
        for c in range(n):
            grid.pos[(r, c)] = (xs[c], ys[r])
    for r in range(n):
        for c in range(n):
            if c + 1 < n:
                grid._connect((r, c), (r, c + 1))
            if r + 1 < n:
                grid._connect((r, c), (r + 1, c))

    src_attach = _attach_terminal(grid, (sx, sy), "src")
    dst_attach = _attach_terminal(grid, (dx, dy), "dst")
    grid.attachment = (src_attach, dst_attach)
    if grid.source == grid.dest:
        raise DegenerateTerminals(f"terminals collapse onto one grid node at {source_pt}")

    for neighbors in grid.adj.values():
        neighbors.sort(key=node_rank)
    return grid


def _aligned_ticks(lo: float, hi: float, n: int, target_margin: float) -> list[float]:
    """n uniform ticks with lo and hi on ticks and margins as close to the
    target as whole cells allow."""
    span = hi - lo
    if span <= TOL:
        step = 2.0 * target_margin / (n - 1)
        g = (n - 1) // 2
        return [lo + (i - g) * step for i in range(n)]
    # split the n-1 intervals into k inner ones (terminals k apart) and an
    # even number of margin intervals; prefer margins near the target, then
    # any margin at all over none, then the finer grid
    best = None
    for k in range(n - 1, 0, -1):
        if (n - 1 - k) % 2:
            continue
        g = (n - 1 - k) // 2
        step = span / k
        score = (abs(g * step - target_margin), 0 if g > 0 else 1, -k)
        if best is None or score < best[0]:
            best = (score, k, g, step)
    _, k, g, step = best
    ticks = [lo + (i - g) * step for i in range(n)]
    ticks[g] = lo  # exact, no accumulated rounding on the terminals
    ticks[g + k] = hi
    return ticks


def _attach_terminal(grid: RoutingGrid, pt: Point, tag: str) -> str:
    n = grid.n
    col = min(range(n), key=lambda c: (abs(grid.xs[c] - pt[0]), c))
    row = min(range(n), key=lambda r: (abs(grid.ys[r] - pt[1]), r))
    nearest = (row, col)
    nx, ny = grid.pos[nearest]

    step_x = grid.xs[1] - grid.xs[0]
    step_y = grid.ys[1] - grid.ys[0]
    # snap inside the cell's inscribed disk (normalized per-axis distance)
    norm = math.hypot((pt[0] - nx) / step_x, (pt[1] - ny) / step_y)
    if norm <= 0.5:
        if tag == "src":
            grid.source = nearest
        else:
            grid.dest = nearest
        return SNAP

    grid.pos[tag] = pt
    if abs(pt[0] - nx) <= TOL or abs(pt[1] - ny) <= TOL:
        grid._connect(tag, nearest)
    else:
        elbow = f"{tag}_l"
        grid.pos[elbow] = (nx, pt[1])  # horizontal out of the terminal, then vertical
        grid._connect(tag, elbow)
        grid._connect(elbow, nearest)
    if tag == "src":
        grid.source = tag
    else:
        grid.dest = tag
    return STUB
