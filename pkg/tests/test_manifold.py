"""Manifold geometry, normals, and usable-part classification."""

import math

import pytest

from mintime import (
    Circle,
    CircleTheta,
    DomainError,
    Params,
    RegionClass,
    Square,
    SquareCorner,
    SquareSide,
    State,
    boundary_state,
    bup_params,
    classify,
    contains,
    outward_normal,
    sample_up,
    up_intervals,
)
from mintime.manifold import antipode

P1 = Params(alpha=1.0, l=1.0)
P2 = Params(alpha=1.0, l=2.0)


# ── boundary_state / outward_normal ───────────────────────────────────────────


def test_boundary_state_circle_top():
    s = boundary_state(Circle(1.0), CircleTheta(math.pi / 2))
    assert s.x1 == pytest.approx(0.0, abs=1e-15)
    assert s.x2 == 1.0


def test_boundary_state_square_side_and_corner():
    assert boundary_state(Square(), SquareSide("AB", 0.5)) == State(-1.0, 0.5)
    assert boundary_state(Square(), SquareCorner("A", 0.75 * math.pi)) == State(-1.0, 1.0)
    assert boundary_state(Square(), SquareCorner("C", 1.75 * math.pi)) == State(1.0, -1.0)


def test_boundary_state_kind_mismatch():
    with pytest.raises(DomainError):
        boundary_state(Circle(1.0), SquareSide("AB", 0.5))
    with pytest.raises(DomainError):
        boundary_state(Square(), CircleTheta(0.1))


def test_outward_normal_examples():
    n = outward_normal(Circle(2.0), CircleTheta(math.pi))
    assert n.n1 == -1.0
    assert abs(n.n2) < 1e-15
    n = outward_normal(Square(), SquareSide("AB", 0.3))
    assert (n.n1, n.n2) == (-1.0, 0.0)
    n = outward_normal(Square(), SquareCorner("A", math.pi / 2))
    assert n.n1 == pytest.approx(0.0, abs=1e-15)
    assert n.n2 == 1.0


def test_outward_normal_unit_length_dense():
    for k in range(64):
        th = 2.0 * math.pi * k / 64 + 0.01
        n = outward_normal(Circle(1.7), CircleTheta(th % (2.0 * math.pi)))
        assert n.n1 * n.n1 + n.n2 * n.n2 == pytest.approx(1.0, abs=1e-12)


# ── boundary-point validation ─────────────────────────────────────────────────


def test_square_side_parameter_ranges():
    with pytest.raises(DomainError):
        SquareSide("AB", 0.0)  # open at 0: vertex B region
    with pytest.raises(DomainError):
        SquareSide("BC", -1.0)  # open at -1: vertex B
    with pytest.raises(DomainError):
        SquareSide("CD", 0.0)  # open at 0
    with pytest.raises(DomainError):
        SquareSide("AD", 1.0)  # open at 1: vertex D
    SquareSide("AB", 1.0)
    SquareSide("BC", 1.0)
    SquareSide("CD", -1.0)
    SquareSide("AD", -1.0)


def test_corners_b_and_d_rejected():
    with pytest.raises(DomainError):
        SquareCorner("B", 1.2 * math.pi)
    with pytest.raises(DomainError):
        SquareCorner("D", 0.2)
    with pytest.raises(DomainError):
        SquareCorner("A", 0.3)  # outside the cone


# ── classify ──────────────────────────────────────────────────────────────────


def test_classify_circle_examples():
    assert classify(Circle(1.0), CircleTheta(math.pi / 2), P1) is RegionClass.UP
    assert classify(Circle(2.0), CircleTheta(math.pi / 6), P2) is RegionClass.NUP
    assert classify(Circle(2.0), CircleTheta(math.pi / 3), P2) is RegionClass.BUP


def test_classify_square_examples():
    assert classify(Square(), SquareSide("AD", 0.0), P1) is RegionClass.UP
    assert classify(Square(), SquareSide("BC", 0.0), P1) is RegionClass.UP
    # side limits toward vertex B
    assert classify(Square(), SquareSide("AB", 1e-14), P1) is RegionClass.BUP
    assert classify(Square(), SquareSide("AB", 1e-3), P1) is RegionClass.UP
    assert classify(Square(), SquareCorner("A", 0.6 * math.pi), P1) is RegionClass.UP


# ── up_intervals ──────────────────────────────────────────────────────────────


def test_up_intervals_circle_small():
    ivs = up_intervals(Circle(1.0), P1)
    assert [(iv.lo, iv.hi) for iv in ivs] == [(0.0, math.pi), (math.pi, 2.0 * math.pi)]


def test_up_intervals_circle_large():
    ivs = up_intervals(Circle(2.0), P2)
    assert ivs[0].lo == pytest.approx(math.pi / 3, abs=1e-12)
    assert ivs[0].hi == math.pi
    assert ivs[1].lo == pytest.approx(4.0 * math.pi / 3, abs=1e-12)
    assert ivs[1].hi == 2.0 * math.pi


def test_up_intervals_square_structure():
    kinds = [iv.kind for iv in up_intervals(Square(), P1)]
    assert kinds == ["AB", "BC", "CD", "AD", "corner_A", "corner_C"]


def test_bup_params_circle():
    assert bup_params(Circle(1.0), P1) == [0.0, math.pi]
    bups = bup_params(Circle(2.0), P2)
    assert bups[1] == pytest.approx(math.pi / 3, abs=1e-12)
    assert bups[3] == pytest.approx(math.pi + math.pi / 3, abs=1e-12)


def test_classify_matches_up_intervals_dense():
    """UP membership by sign agrees with the interval description."""
    for l in (0.5, 1.0, 2.0):
        m = Circle(l)
        p = Params(alpha=1.0, l=l)
        ivs = up_intervals(m, p)
        for k in range(720):
            th = 2.0 * math.pi * (k + 0.5) / 720
            is_up = classify(m, CircleTheta(th), p) is RegionClass.UP
            in_iv = any(iv.lo < th < iv.hi for iv in ivs)
            assert is_up == in_iv, f"l={l} theta={th}"


def test_nup_empty_when_target_small():
    for l in (0.25, 0.8, 1.0):
        m = Circle(l)
        p = Params(alpha=1.0, l=l)
        for k in range(720):
            th = 2.0 * math.pi * (k + 0.5) / 720
            assert classify(m, CircleTheta(th), p) is not RegionClass.NUP


def test_classify_central_antisymmetry():
    for l, m in ((1.0, Circle(1.0)), (2.0, Circle(2.0))):
        p = Params(alpha=1.0, l=l)
        for k in range(180):
            th = 2.0 * math.pi * (k + 0.25) / 180
            b = CircleTheta(th)
            assert classify(m, b, p) is classify(m, antipode(m, b), p)
    m = Square()
    pts = (
        [SquareSide("AB", s) for s in (0.2, 0.7, 1.0)]
        + [SquareSide("BC", s) for s in (-0.5, 0.1, 1.0)]
        + [SquareCorner("A", th) for th in (1.7, 2.4, 3.0)]
    )
    for b in pts:
        mirrored = antipode(m, b)
        assert classify(m, b, P1) is classify(m, mirrored, P1)
        assert boundary_state(m, mirrored) == -boundary_state(m, b)


# ── contains ──────────────────────────────────────────────────────────────────


def test_contains_examples():
    assert contains(Circle(1.0), State(0.0, 0.0))
    assert not contains(Square(), State(1.0001, 0.0))
    assert contains(Circle(2.0), State(math.sqrt(3.0), 1.0))  # on the boundary
    assert contains(Square(), State(1.0, 1.0))


# ── sample_up ─────────────────────────────────────────────────────────────────


def test_sample_up_points_are_usable():
    for m, p in ((Circle(1.0), P1), (Circle(2.0), P2), (Square(), P1)):
        pts = sample_up(m, p, 60)
        assert len(pts) >= 60
        for b in pts:
            assert classify(m, b, p) is RegionClass.UP
