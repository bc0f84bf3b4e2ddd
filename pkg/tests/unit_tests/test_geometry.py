import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boundspanner.geometry import (
    ConeSystem,
    DegenerateGeometryError,
    Direction,
    Disk,
    Point,
    PointSet,
    angle_at,
    build_cone_system,
    cones_containing,
    cones_for_offset,
    incircle,
    incircle_symbolic,
    is_obtuse,
    orient2d,
)

coordinate = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False, allow_infinity=False)
points = st.tuples(coordinate, coordinate)
# a grid keeps cross products of angle tests clear of underflow
grid = st.integers(-(10**6), 10**6).map(lambda v: v / 1000)
grid_points = st.tuples(grid, grid)


def exact_orient(a, b, c) -> int:
    ax, ay, bx, by, cx, cy = map(Fraction, (*a, *b, *c))
    det = (ax - cx) * (by - cy) - (ay - cy) * (bx - cx)
    return (det > 0) - (det < 0)


def at_angle(theta: float, radius: float = 1.0) -> tuple[float, float]:
    return radius * math.cos(theta), radius * math.sin(theta)


def test_orient2d_examples():
    assert orient2d((0, 0), (1, 0), (0, 1)) == 1
    assert orient2d((0, 0), (1, 0), (2, 0)) == 0
    assert orient2d((0, 0), (1, 0), (0.5, -1e-12)) == -1


def test_orient2d_near_collinear_matches_rational_oracle():
    a, b = (0.1, 0.1), (0.3, 0.3)
    for k in range(-5, 6):
        c = (0.2 + k * 2.0**-54, 0.2)
        assert orient2d(a, b, c) == exact_orient(a, b, c)


@given(points, points, points)
def test_orient2d_matches_oracle_and_is_antisymmetric(a, b, c):
    sign = orient2d(a, b, c)
    assert sign == exact_orient(a, b, c)
    assert orient2d(b, a, c) == -sign
    assert orient2d(b, c, a) == sign


def test_incircle_examples():
    a, b, c = (1, 0), (0, 1), (-1, 0)
    assert incircle(a, b, c, (0, 0)) == 1
    assert incircle(a, b, c, (0, -1)) == 0
    assert incircle(a, b, c, (2, 0)) == -1


@given(points, points, points, points)
def test_incircle_is_antisymmetric(a, b, c, d):
    assert incircle(b, a, c, d) == -incircle(a, b, c, d)


def test_incircle_symbolic_breaks_square_tie_toward_lower_ids():
    square = PointSet.from_coordinates([(0, 0), (1, 0), (1, 1), (0, 1)])
    p0, p1, p2, p3 = square
    assert incircle(p0, p1, p2, p3) == 0
    # lower ids win: 3 counts as inside (0, 1, 2), 0 as outside (1, 2, 3)
    assert incircle_symbolic(p0, p1, p2, p3) == 1
    assert incircle_symbolic(p1, p2, p3, p0) == -1


def test_angle_at_examples():
    assert angle_at((0, 0), (1, 0), (0, 1)) == pytest.approx(math.pi / 2)
    assert angle_at((0, 0), (1, 0), (1, 0)) == 0.0
    assert angle_at((0, 0), (1, 0), (-1, 1)) == pytest.approx(3 * math.pi / 4)


def test_angle_at_rejects_zero_length_ray():
    with pytest.raises(DegenerateGeometryError):
        angle_at((0, 0), (0, 0), (1, 0))


@given(grid_points, grid_points, grid_points)
def test_triangle_angles_sum_to_pi(a, b, c):
    if exact_orient(a, b, c) == 0:
        return
    total = angle_at(a, b, c) + angle_at(b, c, a) + angle_at(c, a, b)
    assert angle_at(a, b, c) == angle_at(a, c, b)
    assert total == pytest.approx(math.pi, rel=1e-9)


def test_is_obtuse_is_exact_at_right_angle():
    assert not is_obtuse((0, 0), (1, 0), (0, 1))
    assert is_obtuse((0, 0), (1, 0), (-1e-300, 1))


def test_point_set_validates_ids_and_coordinates():
    with pytest.raises(ValueError, match="carries id"):
        PointSet((Point(0.0, 0.0, 1),))
    with pytest.raises(ValueError, match="non-finite"):
        PointSet.from_coordinates([(0.0, math.nan)])
    ps = PointSet.from_coordinates([(1, 2), (3, 4)])
    assert [p.id for p in ps] == [0, 1]
    assert ps.array.shape == (2, 2)


def test_direction_normalization():
    assert Direction.normalized(-math.pi / 2).theta == pytest.approx(3 * math.pi / 2)
    with pytest.raises(ValueError, match="normalized"):
        Direction(2 * math.pi)
    with pytest.raises(DegenerateGeometryError):
        Direction.between(Point(1, 1, 0), Point(1, 1, 1))


def anchored_at_zero() -> ConeSystem:
    return build_cone_system(Point(0.0, 0.0, 0), Point(1.0, 0.0, 1))


def test_cone_system_sectors_follow_clockwise_labels():
    system = anchored_at_zero()
    assert system.anchor.theta == 0.0
    assert system.sector(1) == pytest.approx((0.0, -math.pi / 4))
    assert system.sector(8) == pytest.approx((-7 * math.pi / 4, -2 * math.pi))
    with pytest.raises(ValueError, match="label"):
        system.sector(9)


def test_cone_examples():
    system = anchored_at_zero()
    assert cones_containing(system, (2.0, 0.0)) == {1, 8}
    assert cones_containing(system, at_angle(-math.pi / 8)) == {1}
    assert cones_containing(system, (1.0, -1.0)) == {1, 2}
    assert cones_containing(system, at_angle(-math.pi / 6)) == {1}
    assert cones_containing(system, at_angle(math.pi / 8)) == {8}


def test_cone_boundary_tolerance_just_below_vertical():
    # π/2 is the ray shared by cones 6 and 7
    system = anchored_at_zero()
    target = at_angle(math.pi / 2 - 1e-13)
    assert cones_containing(system, target, tolerance=1e-12) == {6, 7}
    assert cones_containing(system, target, tolerance=0.0) == {7}


def test_build_cone_system_rejects_coincident_anchor():
    with pytest.raises(DegenerateGeometryError):
        build_cone_system(Point(0.0, 0.0, 0), Point(0.0, 0.0, 1))
    with pytest.raises(DegenerateGeometryError):
        cones_containing(anchored_at_zero(), (0.0, 0.0))


@settings(max_examples=300)
@given(
    anchor=st.floats(min_value=0, max_value=2 * math.pi, exclude_max=True),
    offset=st.floats(min_value=0, max_value=2 * math.pi, exclude_max=True),
    rotation=st.floats(min_value=0, max_value=2 * math.pi),
)
def test_cone_labels_cover_direction_and_are_rotation_equivariant(anchor, offset, rotation):
    labels = cones_for_offset(offset)
    assert 1 <= len(labels) <= 2
    if len(labels) == 2:
        assert max(labels) - min(labels) in (1, 7)
    unwrapped = (offset, offset - 2 * math.pi, offset + 2 * math.pi)
    for label in labels:
        low, high = (label - 1) * math.pi / 4, label * math.pi / 4
        assert any(low - 1e-12 <= v <= high + 1e-12 for v in unwrapped)

    apex = Point(0.0, 0.0, 0)
    target = at_angle(anchor - offset, 10.0)
    if abs(offset - round(offset / (math.pi / 4)) * math.pi / 4) < 1e-9:
        return
    base = cones_containing(build_cone_system(apex, Point(*at_angle(anchor), 1)), target)
    rotated_anchor = Point(*at_angle(anchor + rotation), 1)
    rotated_target = at_angle(anchor - offset + rotation, 10.0)
    assert cones_containing(build_cone_system(apex, rotated_anchor), rotated_target) == base


def test_disk_membership_and_center():
    disk = Disk(Point(1.0, 0.0, 0), Point(0.0, 1.0, 1), Point(-1.0, 0.0, 2))
    assert disk.center == pytest.approx((0.0, 0.0))
    assert disk.radius == pytest.approx(1.0)
    assert disk.contains((0.0, -1.0))
    assert not disk.contains((0.0, -1.0), closed=False)
    assert not disk.contains((1.0, 1.0))


def test_disk_rejects_collinear_boundary():
    with pytest.raises(DegenerateGeometryError):
        Disk(Point(0.0, 0.0, 0), Point(1.0, 0.0, 1), Point(2.0, 0.0, 2))
