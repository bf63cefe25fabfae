"""Minimum-vertex curve simplification with endpoint constraints.

The output Q has its interior vertices drawn from a candidate point set and must stay
within (weak) Fréchet distance delta of the input polyline P, start matched to start and
end to end. In strong mode the images of consecutive vertices advance monotonically
along P. In weak mode each segment of Q is matched independently to a piece of P
(consecutive pieces may overlap or run backwards).
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .frechet import Polyline, check_mode, decide_frechet
from .freespace import ElementaryInterval
from .geom import Interval, Point, Segment, ball_segment_intersection, dist, resolve_eps, segment_distance
from .graph import ImmersedGraph

INF = math.inf


@dataclass(frozen=True)
class ExactPoint:
    point: Point


@dataclass(frozen=True)
class OnInterval:
    interval: ElementaryInterval


EndpointConstraint = Union[ExactPoint, OnInterval]


@dataclass(frozen=True)
class CurveSimplification:
    count: int
    witness: Polyline
    ids: tuple


def _as_point(p) -> Point:
    return p if isinstance(p, Point) else Point(float(p[0]), float(p[1]))


class _Strip:
    """Free space of one segment against all of P."""

    def __init__(self, seg: Segment, P: Polyline, delta: float, eps: float):
        self.m = len(P) - 1
        # spines[i]: t-range of seg within delta of P[i]
        self.spines = [ball_segment_intersection(p, delta, seg, eps) for p in P]
        # ends[j]: range on P's edge j within delta of the segment's far end
        self.ends = [ball_segment_intersection(seg.b, delta, Segment(P[j], P[j + 1]), eps) for j in range(self.m)]
        self.cell_free = [segment_distance(seg, Segment(P[j], P[j + 1])) <= delta + eps for j in range(self.m)]
        self.eps = eps

    def strong_from(self, j: int, s: float) -> dict[int, float]:
        """Earliest position on each edge of P reachable at the far end, starting at (0, edge j, s)."""
        eps = self.eps
        out: dict[int, float] = {}
        t_floor = 0.0
        for jj in range(j, self.m):
            top = self.ends[jj]
            if top is not None:
                lo = max(top.lo, s) if jj == j else top.lo
                if lo <= top.hi + eps:
                    out[jj] = min(lo, top.hi)
            spine = self.spines[jj + 1]
            if spine is None or spine.hi < t_floor - eps:
                break
            t_floor = max(t_floor, spine.lo)
        return out

    def weak_from(self, j: int) -> dict[int, float]:
        """Edges of P whose far-end ranges share a free component with cell j."""
        if not self.cell_free[j]:
            return {}
        lo = j
        while lo > 0 and self.cell_free[lo - 1] and self.spines[lo] is not None:
            lo -= 1
        hi = j
        while hi + 1 < self.m and self.cell_free[hi + 1] and self.spines[hi + 1] is not None:
            hi += 1
        return {jj: self.ends[jj].lo for jj in range(lo, hi + 1) if self.ends[jj] is not None}


def _search(
    P: Polyline,
    delta: float,
    mode: str,
    cand_pts: Sequence[Point],
    start: Point,
    end: Point,
    first: Optional[int],
    last: Optional[int],
    eps: float,
) -> Optional[list]:
    """BFS over (vertex, P edge) with earliest positions. Returns the index sequence of Q
    (None marks the fixed start/end points) or None when infeasible."""
    m = len(P) - 1
    pts = list(cand_pts)

    def point(idx):
        return start if idx == "s" else pts[idx]

    strips: dict = {}

    def strip(a, b) -> _Strip:
        key = (a, b)
        if key not in strips:
            strips[key] = _Strip(Segment(point(a), point(b) if b != "e" else end), P, delta, eps)
        return strips[key]

    def advance(a, pos, b) -> dict[int, float]:
        st = strip(a, b)
        j, s = pos
        return st.strong_from(j, s) if mode == "strong" else st.weak_from(j)

    def finishes(a, pos) -> bool:
        if last is not None and a != last:
            return False
        reach = advance(a, pos, "e")
        e = reach.get(m - 1)
        if e is None:
            return False
        return strip(a, "e").ends[m - 1].hi >= 1 - eps

    if dist(start, P[0]) > delta + eps or dist(end, P[-1]) > delta + eps:
        return None
    if m == 0:
        ok = all(dist(q, P[0]) <= delta + eps for q in (start, end))
        if not ok:
            return None
        if first is None and last is None:
            return ["s"] if start == end else ["s", "e"]
        mids = [i for i in {first, last} if i is not None]
        if all(dist(pts[i], P[0]) <= delta + eps for i in mids):
            return ["s"] + sorted(set(mids), key=lambda i: (i != first)) + ["e"]
        return None

    init = ("s", (0, 0.0))
    if start == end and first is None and last is None:
        if all(dist(start, p) <= delta + eps for p in P):
            return ["s"]
    if first is None and finishes(*init):
        return ["s", "e"]
    best: dict = {}
    parent: dict = {}
    frontier = deque([init])
    level = {init: 0}
    while frontier:
        node = frontier.popleft()
        a, pos = node
        choices = [first] if (a == "s" and first is not None) else range(len(pts))
        for b in choices:
            for j, s in advance(a, pos, b).items():
                key = (b, j)
                if s >= best.get(key, INF) - eps:
                    continue
                best[key] = s
                child = (b, (j, s))
                parent[child] = node
                level[child] = level[node] + 1
                if finishes(*child):
                    seq = ["e"]
                    cur = child
                    while cur != init:
                        seq.append(cur[0])
                        cur = parent[cur]
                    seq.append("s")
                    return seq[::-1]
                frontier.append(child)
    return None


def simplify_curve_min_vertex(
    P,
    delta: float,
    mode: str = "strong",
    candidates: Optional[Sequence] = None,
    start: Optional[EndpointConstraint] = None,
    end: Optional[EndpointConstraint] = None,
    *,
    graph: Optional[ImmersedGraph] = None,
    eps: Optional[float] = None,
) -> Optional[CurveSimplification]:
    """Fewest-vertex Q with interior vertices from candidates and (w)F(Q, P) <= delta.

    candidates: sequence of points, or of (id, point) pairs. Defaults to P's own vertices.
    start/end default to P's endpoints. OnInterval constraints need `graph`, the graph whose
    edges the intervals live on; the unconstrained interval end is not a vertex of Q and
    is not counted. Returns None when infeasible.
    """
    check_mode(mode)
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    eps = resolve_eps(eps)
    P = Polyline(P)
    if candidates is None:
        candidates = list(enumerate(P))
    ids, pts = [], []
    for c in candidates:
        if isinstance(c, tuple) and len(c) == 2 and not isinstance(c[0], float) and isinstance(c[1], (tuple, Point)):
            ids.append(c[0])
            pts.append(_as_point(c[1]))
        else:
            ids.append(len(ids))
            pts.append(_as_point(c))
    start = start or ExactPoint(P[0])
    end = end or ExactPoint(P[-1])
    if (isinstance(start, OnInterval) or isinstance(end, OnInterval)) and graph is None:
        raise ValueError("OnInterval constraints need the graph the intervals belong to")
    index_of = {}
    for i, cid in enumerate(ids):
        index_of.setdefault(cid, i)

    best = None
    for s_pt, first, s_virtual in _end_options(start, graph, index_of, pts, ids, at_start=True):
        for e_pt, last, e_virtual in _end_options(end, graph, index_of, pts, ids, at_start=False):
            option = _direct_chord(start, end, P, delta, mode, graph, eps)
            if option is not None and (best is None or 0 < best[0]):
                best = (0, option, ())
            seq = _search(P, delta, mode, pts, s_pt, e_pt, first, last, eps)
            if seq is None:
                continue
            poly = [s_pt if x == "s" else e_pt if x == "e" else pts[x] for x in seq]
            used = [ids[x] for x in seq if x not in ("s", "e")]
            count = len(poly) - s_virtual - e_virtual
            if best is None or count < best[0]:
                best = (count, Polyline(poly), tuple(used))
    if best is None:
        return None
    return CurveSimplification(best[0], best[1], best[2])


def _chord_point(graph: ImmersedGraph, I: ElementaryInterval, t: float) -> Point:
    return graph.edge_segment(I.edge).at(t)


def _end_options(constraint, graph, index_of, pts, ids, at_start: bool):
    """(point, forced neighbour index or None, 1 if the point is not a real Q vertex)."""
    if isinstance(constraint, ExactPoint):
        yield _as_point(constraint.point), None, 0
        return
    I = constraint.interval
    a, b = graph.edges[I.edge]
    for toward, t in ((b, I.interval.lo), (a, I.interval.hi)) if at_start else ((a, I.interval.hi), (b, I.interval.lo)):
        idx = index_of.get(toward)
        if idx is None:
            continue
        yield _chord_point(graph, I, t), idx, 1


def _direct_chord(start, end, P, delta, mode, graph, eps) -> Optional[Polyline]:
    """Both ends on the same chord: the chord piece itself, with no vertex at all."""
    if not (isinstance(start, OnInterval) and isinstance(end, OnInterval)):
        return None
    I, J = start.interval, end.interval
    if I.edge != J.edge:
        return None
    for t0, t1 in ((I.interval.lo, J.interval.hi), (I.interval.hi, J.interval.lo)):
        piece = Polyline([_chord_point(graph, I, t0), _chord_point(graph, J, t1)])
        if decide_frechet(piece, P, delta, mode, eps):
            return piece
    return None


def gamma(
    I: ElementaryInterval,
    Iprime: ElementaryInterval,
    P,
    delta: float,
    mode: str = "strong",
    *,
    graph: ImmersedGraph,
    candidates: Optional[Sequence] = None,
    eps: Optional[float] = None,
) -> float:
    """Fewest candidate vertices on a curve from interval I (at P's start) to I' (at P's end).

    Candidates default to every vertex of `graph` (the shortcut graph over V(T)).
    Returns infinity when no such curve exists.
    """
    if candidates is None:
        candidates = [(v, p) for v, p in sorted(graph.points.items())]
    res = simplify_curve_min_vertex(P, delta, mode, candidates, OnInterval(I), OnInterval(Iprime), graph=graph, eps=eps)
    return INF if res is None else res.count
