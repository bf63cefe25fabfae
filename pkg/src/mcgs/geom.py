"""Planar primitives: points, segments, closed parameter intervals and cell free space."""

from __future__ import annotations

import math
import os
from typing import NamedTuple, Optional


def _default_eps() -> float:
    raw = os.environ.get("MCGS_EPS")
    if raw is None:
        return 1e-9
    value = float(raw)
    if not (math.isfinite(value) and value > 0):
        raise ValueError(f"MCGS_EPS must be a positive finite number, got {raw!r}")
    return value


EPS = _default_eps()


def resolve_eps(eps: Optional[float]) -> float:
    if eps is None:
        return EPS
    if not eps > 0:
        raise ValueError("tolerance must be positive")
    return eps


class Point(NamedTuple):
    x: float
    y: float

    def is_finite(self) -> bool:
        return math.isfinite(self.x) and math.isfinite(self.y)


class Segment(NamedTuple):
    a: Point
    b: Point

    def at(self, t: float) -> Point:
        return Point(self.a.x + t * (self.b.x - self.a.x), self.a.y + t * (self.b.y - self.a.y))

    @property
    def length(self) -> float:
        return dist(self.a, self.b)


class Interval(NamedTuple):
    """Closed parameter range [lo, hi] inside [0, 1]."""

    lo: float
    hi: float

    def contains(self, t: float, eps: Optional[float] = None) -> bool:
        eps = resolve_eps(eps)
        return self.lo - eps <= t <= self.hi + eps

    def intersect(self, other: "Interval", eps: Optional[float] = None) -> Optional["Interval"]:
        return make_interval(max(self.lo, other.lo), min(self.hi, other.hi), eps)

    def clip_below(self, t: float, eps: Optional[float] = None) -> Optional["Interval"]:
        """The part of the interval at or above parameter t."""
        return make_interval(max(self.lo, t), self.hi, eps)

    @property
    def width(self) -> float:
        return self.hi - self.lo


def make_interval(lo: float, hi: float, eps: Optional[float] = None) -> Optional[Interval]:
    """Build a closed interval, tolerating an inversion up to eps; None when empty."""
    eps = resolve_eps(eps)
    if lo > hi + eps:
        return None
    if lo > hi:
        lo = hi = 0.5 * (lo + hi)
    return Interval(min(max(lo, 0.0), 1.0), min(max(hi, 0.0), 1.0))


UNIT = Interval(0.0, 1.0)


def dist(p: Point, q: Point) -> float:
    return math.hypot(p.x - q.x, p.y - q.y)


def point_segment_distance(p: Point, s: Segment) -> float:
    dx, dy = s.b.x - s.a.x, s.b.y - s.a.y
    sq = dx * dx + dy * dy
    if sq == 0.0:
        return dist(p, s.a)
    t = ((p.x - s.a.x) * dx + (p.y - s.a.y) * dy) / sq
    t = min(max(t, 0.0), 1.0)
    return math.hypot(p.x - s.a.x - t * dx, p.y - s.a.y - t * dy)


def _orient(p: Point, q: Point, r: Point) -> float:
    return (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)


def segments_cross(s1: Segment, s2: Segment) -> bool:
    """Proper crossing test (touching and collinear overlap are handled by the distance fallback)."""
    d1 = _orient(s2.a, s2.b, s1.a)
    d2 = _orient(s2.a, s2.b, s1.b)
    d3 = _orient(s1.a, s1.b, s2.a)
    d4 = _orient(s1.a, s1.b, s2.b)
    return ((d1 > 0 > d2) or (d1 < 0 < d2)) and ((d3 > 0 > d4) or (d3 < 0 < d4))


def segment_distance(s1: Segment, s2: Segment) -> float:
    if segments_cross(s1, s2):
        return 0.0
    return min(
        point_segment_distance(s1.a, s2),
        point_segment_distance(s1.b, s2),
        point_segment_distance(s2.a, s1),
        point_segment_distance(s2.b, s1),
    )


def ball_segment_intersection(
    center: Point, radius: float, s: Segment, eps: Optional[float] = None
) -> Optional[Interval]:
    """Parameter range of s lying within radius (+eps) of center, or None.

    Solved through the foot of the perpendicular rather than the raw quadratic so
    that tangent configurations keep their single touching parameter.
    """
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    eps = resolve_eps(eps)
    reach = radius + eps
    dx, dy = s.b.x - s.a.x, s.b.y - s.a.y
    sq = dx * dx + dy * dy
    fx, fy = s.a.x - center.x, s.a.y - center.y
    if sq <= eps * eps:
        return UNIT if math.hypot(fx, fy) <= reach else None
    t0 = -(fx * dx + fy * dy) / sq
    h = math.hypot(fx + t0 * dx, fy + t0 * dy)
    if h > reach:
        return None
    half = math.sqrt(max(reach * reach - h * h, 0.0) / sq)
    lo, hi = t0 - half, t0 + half
    if hi < 0.0 or lo > 1.0:
        return None
    return Interval(max(lo, 0.0), min(hi, 1.0))


class CellFreeSpace(NamedTuple):
    """Free space of one cell e1 x e2 in (t on e1, s on e2) coordinates.

    left/right are s-ranges on e2 free against e1's start/end point; bottom/top are
    t-ranges on e1 free against e2's start/end point.
    """

    left: Optional[Interval]
    right: Optional[Interval]
    bottom: Optional[Interval]
    top: Optional[Interval]
    nonempty: bool


def cell_free_space(e1: Segment, e2: Segment, delta: float, eps: Optional[float] = None) -> CellFreeSpace:
    if not delta > 0:
        raise ValueError("delta must be positive")
    eps = resolve_eps(eps)
    return CellFreeSpace(
        left=ball_segment_intersection(e1.a, delta, e2, eps),
        right=ball_segment_intersection(e1.b, delta, e2, eps),
        bottom=ball_segment_intersection(e2.a, delta, e1, eps),
        top=ball_segment_intersection(e2.b, delta, e1, eps),
        nonempty=segment_distance(e1, e2) <= delta + eps,
    )
