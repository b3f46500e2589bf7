"""Semi-automatic orthogonal edge routing.

One route request builds a local lattice between the two terminals
(`grid`), prices every lattice segment by what it would cross, and runs a
bidirectional Dijkstra from both terminals at once. Costs are flat 5 per
segment plus 20 per crossed interaction line, 20 per 90-degree bend and
2000 per overlapped species rectangle, so the search trades length,
bends and crossings against each other and treats species as near-hard
obstacles.

Two search modes:

* ``exact`` (default): labels are kept per (node, incoming axis) so bend
  charges are priced exactly, and the search terminates on the classic
  best-connection bound: stop once the best meeting candidate found so far
  cannot be beaten by the two frontiers. The junction bend where the two
  half-paths meet is priced during candidate evaluation. Result cost is
  provably minimal for the cost model.
* ``paper_faithful``: one label per node, the bend charge read from the
  single stored predecessor, and termination as soon as a queue head shows
  up in the opposite scanned set. Kept for fidelity experiments; its cost
  can exceed the exact mode's (the gap is measured in the test suite, not
  bounded).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import geometry
from .errors import BrokenChain, DegenerateTerminals, RoutingFailed, Unreachable
from .geometry import OrthoSegment, Point
from .grid import RoutingGrid, build_grid, node_rank
from .heap import AddressableMinHeap
from .model import Anchor, EdgeAnchor, NodeAnchor, SceneMap, Side

MODE_EXACT = "exact"
MODE_PAPER = "paper_faithful"

# never-reached distance marker; far above any reachable cost on a 16x16 grid
SENTINEL = float(2**52)

AX_H = geometry.AXIS_H
AX_V = geometry.AXIS_V
AX_START = 2  # terminal state: no incoming segment yet, first step bends for free


@dataclass(frozen=True)
class CostModel:
    base: float = 5.0
    cross_line: float = 20.0
    bend: float = 20.0
    cross_species: float = 2000.0


DEFAULT_COSTS = CostModel()


@dataclass
class Obstacles:
    """Collision world for one route: species rectangles and existing edge
    polylines, minus the objects the route is anchored to."""

    species: list[tuple[str, tuple[float, float, float, float]]] = field(default_factory=list)
    polylines: list[tuple[str, list[Point]]] = field(default_factory=list)

    @classmethod
    def from_scene(cls, scene: SceneMap, exclude: set[str] | None = None) -> Obstacles:
        exclude = exclude or set()
        obs = cls()
        for nid in sorted(scene.nodes):
            if nid not in exclude:
                obs.species.append((nid, scene.nodes[nid].bbox))
        for eid in sorted(scene.edges):
            if eid in exclude:
                continue
            pts = scene.edges[eid].waypoints
            if len(pts) >= 2:
                obs.polylines.append((eid, pts))
        return obs

    def segment_counts(self, a: Point, b: Point) -> tuple[int, int]:
        """(# distinct polylines crossed, # species overlapped) by segment ab."""
        seg = OrthoSegment(a, b)
        crossings = 0
        for _, pts in self.polylines:
            for p, q in zip(pts, pts[1:]):
                if geometry.segments_cross(seg, OrthoSegment(p, q)):
                    crossings += 1
                    break
        overlaps = 0
        for _, (x1, y1, x2, y2) in self.species:
            if geometry.segment_hits_rect(seg, x1, y1, x2, y2):
                overlaps += 1
        return crossings, overlaps


def bend_check(pred_p: Point | None, p: Point, q: Point) -> bool:
    """True iff segment p-q runs on a different axis than pred_p-p.
    Without a predecessor (p is a terminal) nothing can bend."""
    if pred_p is None:
        return False
    return geometry.seg_axis(pred_p, p) != geometry.seg_axis(p, q)


def edge_step_cost(
    p: Point,
    q: Point,
    pred_p: Point | None,
    obstacles: Obstacles,
    cost_model: CostModel = DEFAULT_COSTS,
) -> float:
    """Incremental cost c(p,q) of extending a path from p to q."""
    crossings, overlaps = obstacles.segment_counts(p, q)
    cost = (
        cost_model.base
        + cost_model.cross_line * crossings
        + cost_model.cross_species * overlaps
    )
    if bend_check(pred_p, p, q):
        cost += cost_model.bend
    return cost


@dataclass
class SearchState:
    """One direction of the bidirectional search.

    Keys are plain grid nodes in paper mode and (node, incoming-axis) pairs
    in exact mode; `dist` holds the current best label, `pred` the key it
    was reached from, and the heap keeps exactly one live entry per key.
    """

    dist: dict = field(default_factory=dict)
    pred: dict = field(default_factory=dict)
    heap: AddressableMinHeap = field(default_factory=AddressableMinHeap)
    scanned: set = field(default_factory=set)

    def label(self, key, cost: float, pred_key, priority) -> bool:
        """Relax one key; insert on first contact, decrease-key on
        improvement, do nothing otherwise."""
        if cost < self.dist.get(key, SENTINEL):
            if key in self.heap:
                self.heap.decrease_key(key, priority)
            else:
                self.heap.insert(key, priority)
            self.dist[key] = cost
            self.pred[key] = pred_key
            return True
        return False

    def min_cost(self) -> float:
        return self.heap.min_key()[0] if len(self.heap) else SENTINEL


@dataclass
class BidiOutcome:
    mode: str
    meeting: object  # grid node where the frontiers met
    meeting_fwd_key: object
    meeting_rev_key: object
    fwd_pred: dict
    rev_pred: dict
    best_cost: float | None  # exact mode: the priced meeting candidate


def _state_priority(cost: float, node, axis: int | None):
    if axis is None:
        return (cost,) + node_rank(node)
    return (cost,) + node_rank(node) + (axis,)


class _Direction:
    """Scan/update machinery shared by both modes; `axis_labels` switches
    between per-node and per-(node, axis) label spaces."""

    def __init__(self, grid: RoutingGrid, weights: dict, cost_model: CostModel,
                 start, axis_labels: bool):
        self.grid = grid
        self.weights = weights
        self.cost = cost_model
        self.axis_labels = axis_labels
        self.state = SearchState()
        key = (start, AX_START) if axis_labels else start
        self.state.dist[key] = 0.0
        self.state.pred[key] = None
        self.state.heap.insert(key, _state_priority(0.0, start, AX_START if axis_labels else None))

    def scan_step(self, on_label=None):
        """Settle the cheapest key and relax its node's neighbors; returns
        the (key, cost) scanned or None when the queue is exhausted."""
        st = self.state
        if not len(st.heap):
            return None
        key, _ = st.heap.delete_min()
        d = st.dist[key]
        st.scanned.add(key)
        node = key[0] if self.axis_labels else key
        pos = self.grid.pos[node]
        for nb in self.grid.adj[node]:
            nb_pos = self.grid.pos[nb]
            step_axis = geometry.seg_axis(pos, nb_pos)
            cost = d + self.weights[(node, nb)]
            if self.axis_labels:
                in_axis = key[1]
                if in_axis != AX_START and in_axis != step_axis:
                    cost += self.cost.bend
                nb_key = (nb, step_axis)
            else:
                pred_node = st.pred.get(key)
                pred_pos = self.grid.pos[pred_node] if pred_node is not None else None
                if bend_check(pred_pos, pos, nb_pos):
                    cost += self.cost.bend
                nb_key = nb
            prio = _state_priority(cost, nb, step_axis if self.axis_labels else None)
            if st.label(nb_key, cost, key, prio) and on_label is not None:
                on_label(nb_key, cost)
        return key, d


def bidi_search(
    grid: RoutingGrid,
    weights: dict,
    cost_model: CostModel = DEFAULT_COSTS,
    mode: str = MODE_EXACT,
) -> BidiOutcome:
    """Alternate forward and reverse scan steps until the mode's
    termination criterion fires.

    `weights` maps each oriented grid edge (a, b) to its history-free cost
    (base + crossing + species charges); bend charges are added by the
    search itself since they depend on the approach direction.
    """
    if mode == MODE_EXACT:
        return _bidi_exact(grid, weights, cost_model)
    if mode == MODE_PAPER:
        return _bidi_paper(grid, weights, cost_model)
    raise ValueError(f"unknown routing mode {mode!r}")


def _bidi_exact(grid: RoutingGrid, weights: dict, cost_model: CostModel) -> BidiOutcome:
    fwd = _Direction(grid, weights, cost_model, grid.source, axis_labels=True)
    rev = _Direction(grid, weights, cost_model, grid.dest, axis_labels=True)

    best = {"cost": SENTINEL, "fwd": None, "rev": None}

    def consider(node, my_key, my_cost, mine: _Direction, other: _Direction):
        # price the junction bend between the two half-paths right here
        my_axis = my_key[1]
        for other_axis in (AX_H, AX_V, AX_START):
            other_key = (node, other_axis)
            od = other.state.dist.get(other_key)
            if od is None:
                continue
            total = my_cost + od
            if my_axis != AX_START and other_axis != AX_START and my_axis != other_axis:
                total += cost_model.bend
            if total < best["cost"]:
                best["cost"] = total
                if mine is fwd:
                    best["fwd"], best["rev"] = my_key, other_key
                else:
                    best["fwd"], best["rev"] = other_key, my_key

    def watch(mine: _Direction, other: _Direction):
        def on_label(key, cost):
            consider(key[0], key, cost, mine, other)
        return on_label

    fwd_hook = watch(fwd, rev)
    rev_hook = watch(rev, fwd)

    while True:
        scanned_f = fwd.scan_step(fwd_hook)
        if scanned_f is not None:
            consider(scanned_f[0][0], scanned_f[0], scanned_f[1], fwd, rev)
        scanned_r = rev.scan_step(rev_hook)
        if scanned_r is not None:
            consider(scanned_r[0][0], scanned_r[0], scanned_r[1], rev, fwd)

        if fwd.state.min_cost() + rev.state.min_cost() >= best["cost"]:
            break
        if scanned_f is None and scanned_r is None:
            break

    if best["fwd"] is None:
        raise Unreachable("frontiers never met on a connected grid")
    return BidiOutcome(
        mode=MODE_EXACT,
        meeting=best["fwd"][0],
        meeting_fwd_key=best["fwd"],
        meeting_rev_key=best["rev"],
        fwd_pred=fwd.state.pred,
        rev_pred=rev.state.pred,
        best_cost=best["cost"],
    )


def _bidi_paper(grid: RoutingGrid, weights: dict, cost_model: CostModel) -> BidiOutcome:
    fwd = _Direction(grid, weights, cost_model, grid.source, axis_labels=False)
    rev = _Direction(grid, weights, cost_model, grid.dest, axis_labels=False)

    meeting = None
    while meeting is None:
        sf = fwd.scan_step()
        sr = rev.scan_step()
        if sf is None and sr is None:
            raise Unreachable("both queues exhausted before the frontiers met")
        # verbatim ending criterion: a queue head already scanned by the
        # other direction ends the loop
        if len(rev.state.heap) and rev.state.heap.find_min() in fwd.state.scanned:
            meeting = rev.state.heap.find_min()
        elif len(fwd.state.heap) and fwd.state.heap.find_min() in rev.state.scanned:
            meeting = fwd.state.heap.find_min()

    return BidiOutcome(
        mode=MODE_PAPER,
        meeting=meeting,
        meeting_fwd_key=meeting,
        meeting_rev_key=meeting,
        fwd_pred=fwd.state.pred,
        rev_pred=rev.state.pred,
        best_cost=None,
    )


def reconstruct_path(outcome: BidiOutcome) -> list:
    """Chain predecessors from the meeting point back to both terminals and
    splice the halves into one node sequence (source first).

    Loops can only arise in paper mode's early-met walks; they are cut so
    the result is a simple path.
    """
    def node_of(key):
        return key[0] if outcome.mode == MODE_EXACT else key

    def walk(key, pred):
        chain = []
        while key is not None:
            chain.append(node_of(key))
            if key not in pred:
                raise BrokenChain(f"missing predecessor for {key!r}")
            key = pred[key]
        return chain

    fwd_chain = walk(outcome.meeting_fwd_key, outcome.fwd_pred)
    rev_chain = walk(outcome.meeting_rev_key, outcome.rev_pred)
    nodes = list(reversed(fwd_chain)) + rev_chain[1:]

    spliced: list = []
    index: dict = {}
    for v in nodes:
        if v in index:
            for cut in spliced[index[v] + 1:]:
                del index[cut]
            del spliced[index[v] + 1:]
        else:
            index[v] = len(spliced)
            spliced.append(v)
    return spliced


def compute_weights(
    grid: RoutingGrid,
    obstacles: Obstacles,
    cost_model: CostModel = DEFAULT_COSTS,
) -> tuple[dict, dict]:
    """History-free weight of every grid edge, both orientations, plus the
    per-edge (crossings, overlaps) counts behind it."""
    weights: dict = {}
    counts: dict = {}
    for a, b in grid.edges():
        crossings, overlaps = obstacles.segment_counts(grid.pos[a], grid.pos[b])
        w = (
            cost_model.base
            + cost_model.cross_line * crossings
            + cost_model.cross_species * overlaps
        )
        weights[(a, b)] = weights[(b, a)] = w
        counts[(a, b)] = counts[(b, a)] = (crossings, overlaps)
    return weights, counts


@dataclass
class RouteResult:
    """A routed polyline plus the cost breakdown measured on the raw grid
    path (before collinear simplification)."""

    waypoints: list[Point]
    total_cost: float
    segments: int
    bends: int
    line_crossings: int
    species_overlaps: int
    grid_n: int
    attachment: tuple[str, str]
    mode: str


def route(
    scene: SceneMap,
    source: Anchor,
    target: Anchor,
    n: int = 6,
    mode: str = MODE_EXACT,
    cost_model: CostModel = DEFAULT_COSTS,
    exclude_edge: str | None = None,
) -> RouteResult:
    """Route one interaction between two anchors over a fresh local grid.

    The obstacle set is the whole scene minus the anchored objects (a path
    must be allowed to touch its own endpoints) and minus `exclude_edge`
    (the edge being re-routed, so it does not collide with its own old
    shape).
    """
    src_pt = scene.anchor_point(source)
    dst_pt = scene.anchor_point(target)

    exclude: set[str] = set()
    if isinstance(source, NodeAnchor):
        exclude.add(source.node)
    if isinstance(target, NodeAnchor):
        exclude.add(target.node)
    elif isinstance(target, EdgeAnchor):
        exclude.add(target.edge)
    if exclude_edge is not None:
        exclude.add(exclude_edge)

    grid = build_grid(src_pt, dst_pt, n)
    obstacles = Obstacles.from_scene(scene, exclude)
    weights, counts = compute_weights(grid, obstacles, cost_model)

    outcome = bidi_search(grid, weights, cost_model, mode)
    nodes = reconstruct_path(outcome)
    if nodes[0] != grid.source or nodes[-1] != grid.dest:
        raise RoutingFailed(f"reconstructed path misses a terminal: {nodes[:2]}...{nodes[-2:]}")

    positions = [grid.pos[v] for v in nodes]
    segments = len(nodes) - 1
    bends = geometry.bend_count(positions)
    line_crossings = sum(counts[(a, b)][0] for a, b in zip(nodes, nodes[1:]))
    species_overlaps = sum(counts[(a, b)][1] for a, b in zip(nodes, nodes[1:]))
    total = (
        cost_model.base * segments
        + cost_model.bend * bends
        + cost_model.cross_line * line_crossings
        + cost_model.cross_species * species_overlaps
    )
    if outcome.best_cost is not None and abs(total - outcome.best_cost) > 1e-6:
        raise RoutingFailed(
            f"cost accounting mismatch: search {outcome.best_cost} vs path {total}"
        )

    waypoints = _attach_endpoints(positions, src_pt, dst_pt, grid.attachment, source, target)
    waypoints = geometry.simplify_polyline(waypoints)
    return RouteResult(
        waypoints=waypoints,
        total_cost=total,
        segments=segments,
        bends=bends,
        line_crossings=line_crossings,
        species_overlaps=species_overlaps,
        grid_n=n,
        attachment=grid.attachment,
        mode=mode,
    )


def _attach_endpoints(
    positions: list[Point],
    src_pt: Point,
    dst_pt: Point,
    attachment: tuple[str, str],
    source: Anchor,
    target: Anchor,
) -> list[Point]:
    """Join the true anchor points to the grid path.

    Stub terminals already sit on the anchors. Snapped terminals are up to
    half a cell away, so a short straight or L connector is prepended or
    appended; its elbow leaves node anchors along the side's normal.
    """
    pts = list(positions)
    if attachment[0] == "snap":
        if _aligned(src_pt, pts[0]):
            pts = [src_pt] + pts  # straight; simplification merges or dedups
        else:
            pts = _connector(src_pt, pts[0], _prefers_vertical(source)) + pts[1:]
    if attachment[1] == "snap":
        if _aligned(dst_pt, pts[-1]):
            pts = pts + [dst_pt]
        else:
            tail = _connector(dst_pt, pts[-1], _prefers_vertical(target))
            tail.reverse()
            pts = pts[:-1] + tail
    return pts


def _aligned(a: Point, b: Point) -> bool:
    return abs(a[0] - b[0]) <= geometry.TOL or abs(a[1] - b[1]) <= geometry.TOL


def _prefers_vertical(anchor: Anchor) -> bool:
    return isinstance(anchor, NodeAnchor) and anchor.side in (Side.N, Side.S)


def _connector(anchor: Point, grid_pt: Point, vertical_first: bool) -> list[Point]:
    if vertical_first:
        elbow = (anchor[0], grid_pt[1])
    else:
        elbow = (grid_pt[0], anchor[1])
    return [anchor, elbow, grid_pt]


def reroute_all(scene: SceneMap, n: int = 6, mode: str = MODE_EXACT) -> dict[str, str]:
    """Re-route every auto-mode edge from scratch, bases before the
    contingencies hanging off them.

    Existing auto waypoints are discarded first, so the result depends only
    on the map's nodes, manual edges and edge ids: running this twice on
    unchanged geometry reproduces identical waypoints. Returns a map of
    edge id -> error message for edges that could not be routed (their old
    waypoints are restored).
    """
    auto = [e for e in scene.edges.values() if e.routing_mode.value == "auto"]
    stash = {e.id: e.waypoints for e in auto}
    for e in auto:
        e.waypoints = []

    failures: dict[str, str] = {}
    for edge in sorted(auto, key=lambda e: (scene.attachment_depth(e.id), e.id)):
        try:
            result = route(scene, edge.source, edge.target, n=n, mode=mode,
                           exclude_edge=edge.id)
            edge.waypoints = result.waypoints
        except RoutingFailed as exc:
            edge.waypoints = stash[edge.id]
            failures[edge.id] = str(exc)
    return failures
