"""Free space between a tree and a graph: spines, slices, anchors, pruning, kappa and
the traversal / tree-to-graph distance decisions.

A tree edge e is parameterized by t in [0, 1] from its parent end to its child end.
For every graph vertex w the spine e x w is the t-range of e within delta of w.
Because each cell e x (graph edge) has a convex free region, two free points on the
two spines bounding a cell are always joined by a straight monotone path, so
reachability through the surface only ever needs the spine intervals.
"""

from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Optional, Sequence

from networkx.utils import UnionFind

from .frechet import check_mode
from .geom import (
    Interval,
    Point,
    Segment,
    ball_segment_intersection,
    dist,
    make_interval,
    point_segment_distance,
    resolve_eps,
    segment_distance,
)
from .graph import GraphError, ImmersedGraph, RootedTree

INF = math.inf


class ElementaryInterval(NamedTuple):
    owner: int
    edge: int
    interval: Interval
    index: int


class Slice(NamedTuple):
    vertex: int
    intervals: tuple

    @property
    def size(self) -> int:
        return len(self.intervals)


class Spine(NamedTuple):
    tree_edge: tuple
    vertex: int
    interval: Interval


class Anchor(NamedTuple):
    """A place a tree vertex may be mapped to: a graph vertex, or a free chord strictly inside a graph edge.

    Edge intervals that contain an endpoint are represented by that endpoint, which
    reaches everything the interval reaches and needs fewer output vertices.
    """

    vertex: Optional[int]
    edge: Optional[int]
    interval: Optional[Interval] = None

    @property
    def is_vertex(self) -> bool:
        return self.vertex is not None

    def key(self) -> tuple:
        return ("v", self.vertex) if self.vertex is not None else ("e", self.edge)

    def graph_vertices(self, H: ImmersedGraph) -> tuple:
        return (self.vertex,) if self.vertex is not None else H.edges[self.edge]


def _disk_vertices(center: Point, H: ImmersedGraph, delta: float, eps: float) -> list[int]:
    return [w for w, p in H.points.items() if dist(center, p) <= delta + eps]


def slice_of(v: int, center: Point, H: ImmersedGraph, delta: float, eps: Optional[float] = None) -> Slice:
    eps = resolve_eps(eps)
    out = []
    for k in range(H.num_edges()):
        iv = ball_segment_intersection(center, delta, H.edge_segment(k), eps)
        if iv is not None:
            out.append(ElementaryInterval(v, k, iv, len(out)))
    return Slice(v, tuple(out))


def compute_slices(T: ImmersedGraph, H: ImmersedGraph, delta: float, eps: Optional[float] = None) -> dict[int, Slice]:
    if not delta > 0:
        raise ValueError("delta must be positive")
    return {v: slice_of(v, p, H, delta, eps) for v, p in T.points.items()}


def slice_alpha(slices: dict[int, Slice]) -> int:
    return max((s.size for s in slices.values()), default=0)


def anchors_at(center: Point, H: ImmersedGraph, delta: float, eps: Optional[float] = None) -> list[Anchor]:
    """Graph vertices within delta of center, then chords of edges whose endpoints are both outside."""
    eps = resolve_eps(eps)
    inside = set(_disk_vertices(center, H, delta, eps))
    out = [Anchor(w, None) for w in H.points if w in inside]
    for k, (a, b) in enumerate(H.edges):
        if a in inside or b in inside:
            continue
        iv = ball_segment_intersection(center, delta, H.edge_segment(k), eps)
        if iv is not None:
            out.append(Anchor(None, k, iv))
    return out


def anchor_alpha(T: ImmersedGraph, H: ImmersedGraph, delta: float, eps: Optional[float] = None) -> int:
    return max((len(anchors_at(p, H, delta, eps)) for p in T.points.values()), default=0)


def anchor_from_interval(I: ElementaryInterval, H: ImmersedGraph, eps: Optional[float] = None) -> list[Anchor]:
    """The anchors an elementary interval stands for (its free endpoints, or the chord itself)."""
    eps = resolve_eps(eps)
    a, b = H.edges[I.edge]
    out = []
    if I.interval.lo <= eps:
        out.append(Anchor(a, None))
    if I.interval.hi >= 1 - eps:
        out.append(Anchor(b, None))
    if not out:
        out.append(Anchor(None, I.edge, I.interval))
    return out


# ---------------------------------------------------------------------------
# surface of one tree edge against a graph


class EdgeSurface:
    """Spines of a single tree edge against every graph vertex, with reachability sweeps.

    `allowed` optionally restricts the usable graph edges (edge indices).
    """

    def __init__(
        self,
        seg: Segment,
        H: ImmersedGraph,
        delta: float,
        mode: str,
        allowed: Optional[Iterable[int]] = None,
        eps: Optional[float] = None,
    ):
        self.seg = seg
        self.H = H
        self.delta = delta
        self.mode = check_mode(mode)
        self.eps = resolve_eps(eps)
        self.spines: dict[int, Interval] = {}
        for w, p in H.points.items():
            iv = ball_segment_intersection(p, delta, seg, self.eps)
            if iv is not None:
                self.spines[w] = iv
        allowed_set = None if allowed is None else set(allowed)
        self.nbrs: dict[int, list[tuple[int, int]]] = {w: [] for w in self.spines}
        for k, (a, b) in enumerate(H.edges):
            if allowed_set is not None and k not in allowed_set:
                continue
            if a in self.spines and b in self.spines:
                self.nbrs[a].append((b, k))
                self.nbrs[b].append((a, k))
        self.allowed = allowed_set

    def edge_usable(self, k: int) -> bool:
        return self.allowed is None or k in self.allowed

    def at_start(self, w: int) -> bool:
        iv = self.spines.get(w)
        return iv is not None and iv.lo <= self.eps

    def at_end(self, w: int) -> bool:
        iv = self.spines.get(w)
        return iv is not None and iv.hi >= 1 - self.eps

    # -- entry points of anchors -------------------------------------------------

    def source_entries(self, a: Anchor) -> list[tuple[int, float, int]]:
        """(vertex, earliest time, vertices counted so far) for paths leaving anchor a at t = 0."""
        if a.is_vertex:
            return [(a.vertex, 0.0, 0)] if self.at_start(a.vertex) else []
        if not self.edge_usable(a.edge):
            return []
        out = []
        for w in self.H.edges[a.edge]:
            iv = self.spines.get(w)
            if iv is not None:
                out.append((w, iv.lo, 1))
        return out

    def target_exits(self, b: Anchor) -> list[tuple[int, int]]:
        """(vertex, extra count) pairs: arriving at vertex lets the path end in b at t = 1.

        Ending exactly on a vertex anchor makes it an endpoint, so the arrival that
        counted it is refunded (-1).
        """
        if b.is_vertex:
            return [(b.vertex, -1)] if self.at_end(b.vertex) else []
        if not self.edge_usable(b.edge):
            return []
        return [(w, 0) for w in self.H.edges[b.edge] if w in self.spines]

    def same_edge(self, a: Anchor, b: Anchor) -> bool:
        return (not a.is_vertex) and (not b.is_vertex) and a.edge == b.edge and self.edge_usable(a.edge)

    # -- sweeps -----------------------------------------------------------------

    def step(self, t: float, w2: int) -> Optional[float]:
        """Arrival time at w2 when leaving a neighbour at time t, or None."""
        iv = self.spines[w2]
        if self.mode == "weak":
            return iv.lo
        arrive = max(t, iv.lo)
        return arrive if arrive <= iv.hi + self.eps else None

    def earliest(self, sources: Iterable[tuple[int, float]]) -> dict[int, float]:
        """Earliest reachable time on every spine (strong), or component reach (weak: value = spine lo)."""
        best: dict[int, float] = {}
        heap = []
        for w, t in sources:
            if w in self.spines and t < best.get(w, INF):
                best[w] = t
                heapq.heappush(heap, (t, w))
        while heap:
            t, w = heapq.heappop(heap)
            if t > best.get(w, INF):
                continue
            for x, _ in self.nbrs[w]:
                arrive = self.step(t, x)
                if arrive is not None and arrive < best.get(x, INF):
                    best[x] = arrive
                    heapq.heappush(heap, (arrive, x))
        return best

    def latest(self, sinks: Iterable[tuple[int, float]]) -> dict[int, float]:
        """Latest departure time from every spine that still reaches one of the sinks."""
        best: dict[int, float] = {}
        heap = []
        for w, t in sinks:
            if w in self.spines and t > best.get(w, -INF):
                best[w] = t
                heapq.heappush(heap, (-t, w))
        while heap:
            negt, w = heapq.heappop(heap)
            t = -negt
            if t < best.get(w, -INF):
                continue
            if self.mode == "strong" and self.spines[w].lo > t + self.eps:
                continue
            for x, _ in self.nbrs[w]:
                ivx = self.spines[x]
                depart = ivx.hi if self.mode == "weak" else min(ivx.hi, t)
                if self.mode == "strong" and depart < ivx.lo - self.eps:
                    continue
                if depart > best.get(x, -INF):
                    best[x] = depart
                    heapq.heappush(heap, (-depart, x))
        return best

    def reaches(self, a: Anchor, b: Anchor) -> bool:
        if self.same_edge(a, b):
            return True
        if a.is_vertex and b.is_vertex and a.vertex == b.vertex:
            return self.at_start(a.vertex) and self.at_end(a.vertex)
        reach = self.earliest((w, t) for w, t, _ in self.source_entries(a))
        for w, _ in self.target_exits(b):
            if w in reach and (self.mode == "weak" or reach[w] <= self.spines[w].hi + self.eps):
                return True
        return False

    def kappa(self, a: Anchor, b: Anchor, free: frozenset = frozenset()) -> float:
        """Fewest graph vertices strictly inside a valid path from anchor a (t=0) to anchor b (t=1).

        Vertices in `free` are not counted (used to skip vertices already paid for).
        """
        if self.same_edge(a, b):
            return 0
        if a.is_vertex and b.is_vertex and a.vertex == b.vertex:
            return 0 if (self.at_start(a.vertex) and self.at_end(a.vertex)) else INF
        exits: dict[int, int] = {}
        for w, extra in self.target_exits(b):
            refund = 0 if w in free else extra
            exits[w] = min(exits.get(w, 1), refund)
        if not exits:
            return INF
        layer: dict[int, float] = {}
        upcoming: dict[int, float] = {}
        for w, t, c in self.source_entries(a):
            bucket = layer if (c == 0 or w in free) else upcoming
            bucket[w] = min(bucket.get(w, INF), t)
        start = a.vertex if a.is_vertex else None
        best_time: dict[int, float] = {}
        answer = INF
        count = 0
        while layer or upcoming:
            # close the layer over uncounted vertices, earliest first
            heap = [(t, w) for w, t in layer.items()]
            heapq.heapify(heap)
            nxt = dict(upcoming) if count == 0 else {}
            upcoming = {}
            settled: dict[int, float] = {}
            while heap:
                t, w = heapq.heappop(heap)
                if t > layer.get(w, INF) or t >= best_time.get(w, INF):
                    continue
                best_time[w] = t
                settled[w] = t
                for x, _ in self.nbrs[w]:
                    arrive = self.step(t, x)
                    if arrive is None or arrive >= best_time.get(x, INF):
                        continue
                    if x in free:
                        if arrive < layer.get(x, INF):
                            layer[x] = arrive
                            heapq.heappush(heap, (arrive, x))
                    elif arrive < nxt.get(x, INF):
                        nxt[x] = arrive
            for w in settled:
                if w in exits:
                    value = 0 if w == start else count + exits[w]
                    answer = min(answer, max(value, 0))
            if answer <= count:
                return answer
            layer = {w: t for w, t in nxt.items() if t < best_time.get(w, INF)}
            count += 1
            if count > answer:
                break
        return answer


def segment_reach_range(e: Segment, s: Segment, delta: float, eps: Optional[float] = None) -> Optional[Interval]:
    """t-range of e lying within delta of segment s (convex, hence a single interval)."""
    eps = resolve_eps(eps)
    r = delta + eps
    parts = [ball_segment_intersection(s.a, delta, e, eps), ball_segment_intersection(s.b, delta, e, eps)]
    dx, dy = s.b.x - s.a.x, s.b.y - s.a.y
    L = math.hypot(dx, dy)
    if L > eps:
        ux, uy = dx / L, dy / L
        # along-coordinate and signed normal offset of e(t), both affine in t
        a0 = (e.a.x - s.a.x) * ux + (e.a.y - s.a.y) * uy
        a1 = (e.b.x - s.a.x) * ux + (e.b.y - s.a.y) * uy
        n0 = -(e.a.x - s.a.x) * uy + (e.a.y - s.a.y) * ux
        n1 = -(e.b.x - s.a.x) * uy + (e.b.y - s.a.y) * ux
        lo, hi = 0.0, 1.0
        for c0, c1, low, high in ((a0, a1, 0.0, L), (n0, n1, -r, r)):
            slope = c1 - c0
            if abs(slope) < 1e-15:
                if not (low - eps <= c0 <= high + eps):
                    lo, hi = 1.0, 0.0
                continue
            ta, tb = (low - c0) / slope, (high - c0) / slope
            lo, hi = max(lo, min(ta, tb)), min(hi, max(ta, tb))
        if lo <= hi:
            parts.append(Interval(lo, hi))
    parts = [p for p in parts if p is not None]
    if not parts:
        return None
    return Interval(min(p.lo for p in parts), max(p.hi for p in parts))


# ---------------------------------------------------------------------------
# pruning


@dataclass
class PrunedGraph:
    graph: ImmersedGraph
    mode: str
    delta: float
    survivors: dict = field(default_factory=dict)

    @property
    def union(self) -> set[int]:
        out: set[int] = set()
        for s in self.survivors.values():
            out |= s
        return out

    def subgraph(self) -> ImmersedGraph:
        return ImmersedGraph(self.graph.points, [self.graph.edges[k] for k in sorted(self.union)])


def _edge_survivors(surf: EdgeSurface, sources: list[Anchor], targets: list[Anchor]) -> set[int]:
    H = surf.H
    out: set[int] = set()
    fwd = surf.earliest((w, t) for a in sources for w, t, _ in surf.source_entries(a))
    sinks = []
    for b in targets:
        for w, _ in surf.target_exits(b):
            sinks.append((w, surf.spines[w].hi))
    bwd = surf.latest(sinks)
    reachable_targets = [
        b for b in targets if any(w in fwd and (surf.mode == "weak" or fwd[w] <= surf.spines[w].hi + surf.eps)
                                  for w, _ in surf.target_exits(b))
    ]
    for a in sources:
        if a.is_vertex:
            continue
        if any(surf.same_edge(a, b) for b in targets):
            out.add(a.edge)
        elif any(w in bwd and (surf.mode == "weak" or t <= bwd[w] + surf.eps) for w, t, _ in surf.source_entries(a)):
            out.add(a.edge)
    for b in reachable_targets:
        if not b.is_vertex:
            out.add(b.edge)
    for w, nbrs in surf.nbrs.items():
        if w not in fwd:
            continue
        for x, k in nbrs:
            if x not in bwd:
                continue
            arrive = surf.step(fwd[w], x)
            if arrive is not None and (surf.mode == "weak" or arrive <= bwd[x] + surf.eps):
                out.add(k)
    return out


def prune_graph(
    T: RootedTree,
    H: ImmersedGraph,
    delta: float,
    mode: str = "strong",
    eps: Optional[float] = None,
    anchors: Optional[dict] = None,
) -> PrunedGraph:
    """Per tree edge, the graph edges lying on some delta-valid walk between the endpoint slices."""
    check_mode(mode)
    if not delta > 0:
        raise ValueError("delta must be positive")
    eps = resolve_eps(eps)
    if anchors is None:
        anchors = {v: anchors_at(p, H, delta, eps) for v, p in T.points.items()}
    pg = PrunedGraph(H, mode, delta)
    for u, v in T.tree_edges():
        surf = EdgeSurface(T.segment(u, v), H, delta, mode, eps=eps)
        pg.survivors[(u, v)] = _edge_survivors(surf, anchors[u], anchors[v])
    return pg


def usable_anchors(
    T: RootedTree, H: ImmersedGraph, delta: float, mode: str = "strong", eps: Optional[float] = None
) -> tuple[dict, PrunedGraph]:
    """Anchors per tree vertex after pruning, iterated to a fixpoint.

    A chord anchor at u is kept only if its graph edge survives for every tree edge at u,
    since the walks on each of those edges start or end inside that chord.
    """
    eps = resolve_eps(eps)
    anchors = {v: anchors_at(p, H, delta, eps) for v, p in T.points.items()}
    while True:
        pruned = prune_graph(T, H, delta, mode, eps, anchors)
        incident: dict[int, list[set]] = {v: [] for v in T.points}
        for (u, v), keep in pruned.survivors.items():
            incident[u].append(keep)
            incident[v].append(keep)
        changed = False
        for v, lst in anchors.items():
            kept = [a for a in lst if a.is_vertex or all(a.edge in keep for keep in incident[v])]
            if len(kept) != len(lst):
                anchors[v] = kept
                changed = True
        if not changed:
            return anchors, pruned


def kappa(I, Iprime, e: tuple, P: PrunedGraph, T: RootedTree, eps: Optional[float] = None) -> float:
    """Fewest spines crossed between I (slice of e's first vertex) and I' (slice of the second).

    I and I' may be Anchors or ElementaryIntervals of P.graph.
    """
    u, v = e
    key = (u, v) if (u, v) in P.survivors else (v, u)
    surf = EdgeSurface(T.segment(u, v), P.graph, P.delta, P.mode, allowed=P.survivors.get(key), eps=eps)
    srcs = [I] if isinstance(I, Anchor) else anchor_from_interval(I, P.graph, eps)
    dsts = [Iprime] if isinstance(Iprime, Anchor) else anchor_from_interval(Iprime, P.graph, eps)
    best = INF
    for a in srcs:
        for b in dsts:
            best = min(best, surf.kappa(a, b))
    return best


# ---------------------------------------------------------------------------
# decisions


def feasible_anchors(
    T: RootedTree,
    H: ImmersedGraph,
    delta: float,
    mode: str = "strong",
    pins: Optional[dict] = None,
    eps: Optional[float] = None,
) -> dict[int, list[Anchor]]:
    """Leaf-up feasibility: anchors of each vertex from which its whole subtree maps into H.

    pins maps a tree vertex to the graph vertex it must be sent to exactly.
    """
    check_mode(mode)
    if not delta > 0:
        raise ValueError("delta must be positive")
    eps = resolve_eps(eps)
    pins = pins or {}
    anchors: dict[int, list[Anchor]] = {}
    for v, p in T.points.items():
        if v in pins:
            w = pins[v]
            anchors[v] = [Anchor(w, None)] if w in H.points and dist(p, H.points[w]) <= delta + eps else []
        else:
            anchors[v] = anchors_at(p, H, delta, eps)
    feasible: dict[int, list[Anchor]] = {}
    for u in T.postorder():
        cands = anchors[u]
        for v in T.children[u]:
            if not cands:
                break
            targets = feasible[v]
            if not targets:
                cands = []
                break
            surf = EdgeSurface(T.segment(u, v), H, delta, mode, eps=eps)
            sinks = [(w, surf.spines[w].hi) for b in targets for w, _ in surf.target_exits(b)]
            late = surf.latest(sinks)
            keep = []
            for a in cands:
                ok = any(surf.same_edge(a, b) for b in targets)
                ok = ok or any(a.is_vertex and b.is_vertex and a.vertex == b.vertex and surf.at_end(a.vertex)
                               and surf.at_start(a.vertex) for b in targets)
                if not ok:
                    for w, t, _ in surf.source_entries(a):
                        if w in late and (mode == "weak" or t <= late[w] + eps):
                            ok = True
                            break
                if ok:
                    keep.append(a)
            cands = keep
        feasible[u] = cands
    return feasible


def decide_graph_distance_tree_to_graph(
    T: RootedTree,
    H: ImmersedGraph,
    delta: float,
    mode: str = "strong",
    pins: Optional[dict] = None,
    eps: Optional[float] = None,
) -> bool:
    """True iff T maps into H edge-by-edge with every (weak) Fréchet distance at most delta."""
    if not T.points:
        return True
    return bool(feasible_anchors(T, H, delta, mode, pins, eps)[T.root])


def _elements(g: ImmersedGraph) -> list[Segment]:
    """Edges, plus isolated vertices as zero-length segments."""
    segs = [g.edge_segment(k) for k in range(g.num_edges())]
    segs += [Segment(p, p) for v, p in g.points.items() if g.degree(v) == 0]
    return segs


def decide_traversal_distance(G1: ImmersedGraph, G2: ImmersedGraph, delta: float, eps: Optional[float] = None) -> bool:
    """True iff one connected component of the free space G1 x G2 projects onto all of G1."""
    if not delta > 0:
        raise ValueError("delta must be positive")
    if not G1.is_connected():
        raise GraphError("traversal distance needs a connected source graph")
    eps = resolve_eps(eps)
    if not G1.points:
        return True
    e2 = _elements(G2)
    if G1.num_edges() == 0:
        p = next(iter(G1.points.values()))
        return any(point_segment_distance(p, s) <= delta + eps for s in e2)
    e1 = [G1.edge_segment(k) for k in range(G1.num_edges())]
    m2 = len(e2)
    cells = {}
    for i, s1 in enumerate(e1):
        for j, s2 in enumerate(e2):
            if segment_distance(s1, s2) <= delta + eps:
                cells[(i, j)] = len(cells)
    uf = UnionFind(range(len(cells)))
    # glue along G2 vertices (same G1 edge) and along G1 vertices (same G2 element)
    inc2: dict[int, list[int]] = {}
    for j, (a, b) in enumerate(G2.edges):
        inc2.setdefault(a, []).append(j)
        inc2.setdefault(b, []).append(j)
    inc1: dict[int, list[int]] = {}
    for i, (a, b) in enumerate(G1.edges):
        inc1.setdefault(a, []).append(i)
        inc1.setdefault(b, []).append(i)
    for w, js in inc2.items():
        pw = G2.points[w]
        for i, s1 in enumerate(e1):
            if ball_segment_intersection(pw, delta, s1, eps) is None:
                continue
            ids = [cells[(i, j)] for j in js if (i, j) in cells]
            for c in ids[1:]:
                uf.union(ids[0], c)
    for z, is_ in inc1.items():
        pz = G1.points[z]
        for j, s2 in enumerate(e2):
            if ball_segment_intersection(pz, delta, s2, eps) is None:
                continue
            ids = [cells[(i, j)] for i in is_ if (i, j) in cells]
            for c in ids[1:]:
                uf.union(ids[0], c)
    coverage: dict[int, dict[int, list[Interval]]] = {}
    for (i, j), c in cells.items():
        iv = segment_reach_range(e1[i], e2[j], delta, eps)
        if iv is not None:
            coverage.setdefault(uf[c], {}).setdefault(i, []).append(iv)
    for comp in coverage.values():
        if len(comp) == len(e1) and all(_covers_unit(ivs, eps) for ivs in comp.values()):
            return True
    return False


def _covers_unit(ivs: list[Interval], eps: float) -> bool:
    reach = 0.0
    for iv in sorted(ivs):
        if iv.lo > reach + eps:
            return False
        reach = max(reach, iv.hi)
    return reach >= 1 - eps
