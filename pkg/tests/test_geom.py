import pytest

from mcgs.geom import (
    EPS,
    _default_eps,
    Point,
    Segment,
    ball_segment_intersection,
    cell_free_space,
    dist,
    point_segment_distance,
    resolve_eps,
    segment_distance,
)


def seg(a, b):
    return Segment(Point(*a), Point(*b))


def test_chord_of_unit_ball():
    iv = ball_segment_intersection(Point(0, 0), 1, seg((-2, 0), (2, 0)))
    assert iv.lo == pytest.approx(0.25) and iv.hi == pytest.approx(0.75)


def test_tangent_keeps_single_parameter():
    iv = ball_segment_intersection(Point(0, 2), 2, seg((-1, 0), (1, 0)))
    assert iv.lo == pytest.approx(0.5, abs=1e-4) and iv.hi == pytest.approx(0.5, abs=1e-4)


def test_disjoint_ball_is_empty():
    assert ball_segment_intersection(Point(5, 5), 1, seg((0, 0), (1, 0))) is None


def test_degenerate_segment():
    s = seg((1, 1), (1, 1))
    assert ball_segment_intersection(Point(1, 1.5), 1, s) == (0.0, 1.0)
    assert ball_segment_intersection(Point(4, 4), 1, s) is None


def test_negative_radius_rejected():
    with pytest.raises(ValueError):
        ball_segment_intersection(Point(0, 0), -1, seg((0, 0), (1, 0)))


def test_parallel_cell_at_exact_delta():
    # the free space is the diagonal band t = s; each boundary touches it in one point
    c = cell_free_space(seg((0, 0), (1, 0)), seg((0, 1), (1, 1)), 1)
    assert c.nonempty
    for iv, at in ((c.left, 0), (c.bottom, 0), (c.right, 1), (c.top, 1)):
        assert iv.lo == pytest.approx(at, abs=1e-4) and iv.hi == pytest.approx(at, abs=1e-4)
    wide = cell_free_space(seg((0, 0), (2, 0)), seg((0, 1), (2, 1)), 1.5)
    assert wide.left.lo == 0 and wide.left.hi == pytest.approx(1.25**0.5 / 2)


def test_far_cell_is_empty():
    c = cell_free_space(seg((0, 0), (1, 0)), seg((0, 3), (1, 3)), 1)
    assert not c.nonempty
    assert c.left is None and c.right is None and c.bottom is None and c.top is None


def test_crossing_cell_boundaries():
    e1, e2 = seg((0, 0), (2, 0)), seg((1, -1), (1, 1))
    c = cell_free_space(e1, e2, 0.5)
    # the ball of radius 0.5 around e2's ends misses e1, around e1's start misses e2
    assert c.bottom is None and c.top is None
    assert c.left is None
    assert c.nonempty
    iv = ball_segment_intersection(Point(1, 0), 0.5, e2)
    assert iv.lo == pytest.approx(0.25) and iv.hi == pytest.approx(0.75)


def test_cell_rejects_nonpositive_delta():
    with pytest.raises(ValueError):
        cell_free_space(seg((0, 0), (1, 0)), seg((0, 1), (1, 1)), 0)


def test_distances():
    assert dist(Point(0, 0), Point(3, 4)) == 5
    assert point_segment_distance(Point(0, 1), seg((-1, 0), (1, 0))) == pytest.approx(1)
    assert point_segment_distance(Point(3, 0), seg((-1, 0), (1, 0))) == pytest.approx(2)
    assert segment_distance(seg((0, 0), (2, 2)), seg((0, 2), (2, 0))) == 0
    assert segment_distance(seg((0, 0), (1, 0)), seg((0, 2), (1, 3))) == pytest.approx(2)


def test_eps_resolution():
    assert resolve_eps(0.5) == 0.5
    assert resolve_eps(None) == EPS
    with pytest.raises(ValueError):
        resolve_eps(0.0)


def test_eps_environment_override(monkeypatch):
    monkeypatch.setenv("MCGS_EPS", "1e-6")
    assert _default_eps() == 1e-6
    monkeypatch.setenv("MCGS_EPS", "-1")
    with pytest.raises(ValueError):
        _default_eps()
    monkeypatch.delenv("MCGS_EPS")
    assert _default_eps() == 1e-9
