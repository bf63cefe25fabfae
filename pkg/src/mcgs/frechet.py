"""Free-space diagrams between polylines and strong/weak Fréchet decisions."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Optional, Sequence

from networkx.utils import UnionFind

from .geom import (
    CellFreeSpace,
    Interval,
    Point,
    Segment,
    ball_segment_intersection,
    cell_free_space,
    dist,
    resolve_eps,
    segment_distance,
)

MODES = ("strong", "weak")


def check_mode(mode: str) -> str:
    if mode not in MODES:
        raise ValueError(f"mode must be 'strong' or 'weak', got {mode!r}")
    return mode


class Polyline(tuple):
    """Ordered, nonempty sequence of points; repeated consecutive points are allowed."""

    def __new__(cls, points: Iterable[Sequence[float]]):
        pts = tuple(p if isinstance(p, Point) else Point(float(p[0]), float(p[1])) for p in points)
        if not pts:
            raise ValueError("a polyline needs at least one point")
        return super().__new__(cls, pts)

    def segments(self) -> list[Segment]:
        return [Segment(self[i], self[i + 1]) for i in range(len(self) - 1)]

    def reversed(self) -> "Polyline":
        return Polyline(self[::-1])


@dataclass(frozen=True)
class FreeSpaceDiagram:
    """Per-boundary free intervals of P x Q.

    vertical[i][j]: s-range on Q's edge j free against P's vertex i.
    horizontal[i][j]: t-range on P's edge i free against Q's vertex j.
    """

    P: Polyline
    Q: Polyline
    delta: float
    vertical: list
    horizontal: list

    @classmethod
    def build(cls, P: Polyline, Q: Polyline, delta: float, eps: Optional[float] = None) -> "FreeSpaceDiagram":
        eps = resolve_eps(eps)
        pe, qe = P.segments(), Q.segments()
        vertical = [[ball_segment_intersection(p, delta, s, eps) for s in qe] for p in P]
        horizontal = [[ball_segment_intersection(q, delta, s, eps) for q in Q] for s in pe]
        return cls(P, Q, delta, vertical, horizontal)

    def cell(self, i: int, j: int) -> CellFreeSpace:
        return cell_free_space(Segment(self.P[i], self.P[i + 1]), Segment(self.Q[j], self.Q[j + 1]), self.delta)


def _point_vs_curve(p: Point, Q: Polyline, delta: float, eps: float) -> bool:
    return all(dist(p, q) <= delta + eps for q in Q)


def decide_frechet(P, Q, delta: float, mode: str = "strong", eps: Optional[float] = None) -> bool:
    """True iff the (weak) Fréchet distance between P and Q is at most delta."""
    check_mode(mode)
    if not delta > 0:
        raise ValueError("delta must be positive")
    eps = resolve_eps(eps)
    P, Q = Polyline(P), Polyline(Q)
    if dist(P[0], Q[0]) > delta + eps or dist(P[-1], Q[-1]) > delta + eps:
        return False
    if len(P) == 1:
        return _point_vs_curve(P[0], Q, delta, eps)
    if len(Q) == 1:
        return _point_vs_curve(Q[0], P, delta, eps)
    fsd = FreeSpaceDiagram.build(P, Q, delta, eps)
    if mode == "strong":
        return _strong_reachable(fsd, eps)
    return _weak_connected(fsd, delta, eps)


def _strong_reachable(fsd: FreeSpaceDiagram, eps: float) -> bool:
    n, m = len(fsd.P) - 1, len(fsd.Q) - 1
    V, H = fsd.vertical, fsd.horizontal
    # reach_v[i][j]: reachable part of V[i][j]; reach_h[i][j]: reachable part of H[i][j]
    reach_v = [[None] * m for _ in range(n + 1)]
    reach_h = [[None] * (m + 1) for _ in range(n)]
    for j in range(m):
        iv = V[0][j]
        if iv is None or iv.lo > eps:
            break
        reach_v[0][j] = iv
        if iv.hi < 1 - eps:
            break
    for i in range(n):
        ih = H[i][0]
        if ih is None or ih.lo > eps:
            break
        reach_h[i][0] = ih
        if ih.hi < 1 - eps:
            break
    for i in range(n):
        for j in range(m):
            left, bottom = reach_v[i][j], reach_h[i][j]
            right_free, top_free = V[i + 1][j], H[i][j + 1]
            if right_free is not None:
                if bottom is not None:
                    reach_v[i + 1][j] = right_free
                elif left is not None:
                    reach_v[i + 1][j] = right_free.clip_below(left.lo, eps)
            if top_free is not None:
                if left is not None:
                    reach_h[i][j + 1] = top_free
                elif bottom is not None:
                    reach_h[i][j + 1] = top_free.clip_below(bottom.lo, eps)
    end_v, end_h = reach_v[n][m - 1], reach_h[n - 1][m]
    return (end_v is not None and end_v.hi >= 1 - eps) or (end_h is not None and end_h.hi >= 1 - eps)


def _weak_connected(fsd: FreeSpaceDiagram, delta: float, eps: float) -> bool:
    n, m = len(fsd.P) - 1, len(fsd.Q) - 1
    pe, qe = fsd.P.segments(), fsd.Q.segments()
    free = [[segment_distance(pe[i], qe[j]) <= delta + eps for j in range(m)] for i in range(n)]
    if not (free[0][0] and free[n - 1][m - 1]):
        return False
    uf = UnionFind(range(n * m))
    for i, j in product(range(n), range(m)):
        if not free[i][j]:
            continue
        if i + 1 < n and free[i + 1][j] and fsd.vertical[i + 1][j] is not None:
            uf.union(i * m + j, (i + 1) * m + j)
        if j + 1 < m and free[i][j + 1] and fsd.horizontal[i][j + 1] is not None:
            uf.union(i * m + j, i * m + j + 1)
    return uf[0] == uf[n * m - 1]


def frechet_value(P, Q, mode: str = "strong", precision: float = 1e-6) -> float:
    """Bisection over decide_frechet; returns v with decide(v) true and decide(v - precision) false."""
    if not precision > 0:
        raise ValueError("precision must be positive")
    P, Q = Polyline(P), Polyline(Q)
    hi = max(dist(p, q) for p in P for q in Q)
    lo = 0.0
    if hi == 0.0:
        return 0.0
    # the bracket end is always feasible; nudge it so the eps slack never matters
    hi = hi * (1 + 1e-12) + 1e-12
    while hi - lo > precision:
        mid = 0.5 * (lo + hi)
        if decide_frechet(P, Q, mid, mode):
            hi = mid
        else:
            lo = mid
    return hi
