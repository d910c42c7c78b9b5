import math

import numpy as np
import pytest

from packbounds import (
    ConvexPolygon,
    Point2,
    Pose2,
    area,
    convex_intersection_area,
    diameter,
    is_convex,
    point_reflect,
    random_convex_polygon,
    regular_polygon,
)
from oracles import mc_intersection_area

IDENT = Pose2()

UNIT_SQUARE = ConvexPolygon([(0, 0), (1, 0), (1, 1), (0, 1)])
RIGHT_TRIANGLE = ConvexPolygon([(0, 0), (1, 0), (0, 1)])


def test_area_unit_square():
    assert area(UNIT_SQUARE) == 1.0


def test_area_right_triangle():
    assert area(RIGHT_TRIANGLE) == 0.5


def test_area_regular_hexagon_side_one():
    # circumradius equals the side for a regular hexagon; area 3*sqrt(3)/2
    hexagon = regular_polygon(6, 1.0)
    assert math.isclose(area(hexagon), 1.5 * math.sqrt(3.0), rel_tol=1e-13)


def test_is_convex_square():
    assert is_convex([(0, 0), (1, 0), (1, 1), (0, 1)])


def test_is_convex_reflex_vertex():
    assert not is_convex([(0, 0), (2, 0), (1, 1), (2, 2), (0, 2)])


def test_is_convex_accepts_collinear_midpoint():
    assert is_convex([(0, 0), (0.5, 0), (1, 0), (1, 1), (0, 1)])


def test_is_convex_under_three_points():
    with pytest.raises(ValueError):
        is_convex([(0, 0), (1, 1)])


def test_point_reflect_centered_square_is_same_set():
    centered = ConvexPolygon([(-1, -1), (1, -1), (1, 1), (-1, 1)])
    reflected = point_reflect(centered, (0, 0))
    assert sorted(map(tuple, reflected.vertices)) == sorted(map(tuple, centered.vertices))


def test_point_reflect_triangle_about_origin():
    got = point_reflect(RIGHT_TRIANGLE, (0, 0))
    assert sorted(map(tuple, got.vertices)) == [(-1.0, 0.0), (0.0, -1.0), (0.0, 0.0)]


def test_point_reflect_is_involution():
    rng = np.random.default_rng(5)
    for _ in range(20):
        poly = random_convex_polygon(rng, vertices=int(rng.integers(3, 9)))
        c = (float(rng.normal()), float(rng.normal()))
        back = point_reflect(point_reflect(poly, c), c)
        np.testing.assert_allclose(
            np.asarray(back.vertices), np.asarray(poly.vertices), atol=1e-12
        )


def test_point_reflect_preserves_area():
    rng = np.random.default_rng(6)
    for _ in range(20):
        poly = random_convex_polygon(rng, vertices=int(rng.integers(3, 9)))
        c = (float(rng.normal()), float(rng.normal()))
        assert math.isclose(area(point_reflect(poly, c)), area(poly), rel_tol=1e-12)


def test_intersection_half_offset_squares():
    shifted = Pose2(translation=Point2(0.5, 0.0))
    assert math.isclose(
        convex_intersection_area(UNIT_SQUARE, IDENT, UNIT_SQUARE, shifted), 0.5,
        rel_tol=1e-12,
    )


def test_intersection_identical_poses_is_exact_area():
    pose = Pose2(rotation=0.3, translation=Point2(1.25, -0.5))
    got = convex_intersection_area(UNIT_SQUARE, pose, UNIT_SQUARE, pose)
    assert got == area(UNIT_SQUARE)


def test_intersection_edge_contact_is_zero():
    touching = Pose2(translation=Point2(1.0, 0.0))
    assert convex_intersection_area(UNIT_SQUARE, IDENT, UNIT_SQUARE, touching) == 0.0


def test_intersection_square_vs_rotated_square_monte_carlo():
    """Unit square against itself rotated 45 degrees about the center.

    The frozen reference 0.8285279 came from 10^7 Monte-Carlo samples
    (seed 20260822); the clipped value must sit within 1e-3 of it.
    """
    # rotating about the center (0.5, 0.5) means translating by c - R c
    c = 0.5
    ct, st = math.cos(math.pi / 4), math.sin(math.pi / 4)
    rot = Pose2(
        rotation=math.pi / 4.0,
        translation=Point2(c - ct * c + st * c, c - st * c - ct * c),
    )
    got = convex_intersection_area(UNIT_SQUARE, IDENT, UNIT_SQUARE, rot)
    assert abs(got - 0.8285279) <= 1e-3
    # and the closed form for the regular octagon of overlap: 2(sqrt(2)-1)
    assert math.isclose(got, 2.0 * (math.sqrt(2.0) - 1.0), rel_tol=1e-12)


def test_intersection_matches_monte_carlo_on_random_bodies():
    rng = np.random.default_rng(77)
    for trial in range(3):
        a = random_convex_polygon(rng, vertices=6)
        b = random_convex_polygon(rng, vertices=5)
        pose_b = Pose2(
            rotation=float(rng.uniform(0, 2 * math.pi)),
            translation=Point2(float(rng.uniform(-0.4, 0.4)), float(rng.uniform(-0.4, 0.4))),
            reflected=bool(trial % 2),
        )
        exact = convex_intersection_area(a, IDENT, b, pose_b)
        samples = 200_000
        est = mc_intersection_area(a, IDENT, b, pose_b, samples, seed=900 + trial)
        bbx = a.bbox
        box_area = (bbx[2] - bbx[0]) * (bbx[3] - bbx[1])
        p = max(est / box_area, 1.0 / samples)
        se = box_area * math.sqrt(p * (1.0 - p) / samples)
        assert abs(exact - est) <= 3.0 * se + 1e-9


def test_intersection_symmetry_and_upper_bound():
    rng = np.random.default_rng(8)
    for _ in range(15):
        a = random_convex_polygon(rng, vertices=4)
        b = random_convex_polygon(rng, vertices=7)
        pose = Pose2(translation=Point2(float(rng.uniform(-0.5, 0.5)), float(rng.uniform(-0.5, 0.5))))
        ab = convex_intersection_area(a, IDENT, b, pose)
        ba = convex_intersection_area(b, pose, a, IDENT)
        assert math.isclose(ab, ba, rel_tol=1e-9, abs_tol=1e-12)
        assert ab <= min(area(a), area(b)) + 1e-12


def test_intersection_translation_invariance():
    rng = np.random.default_rng(9)
    for _ in range(15):
        a = random_convex_polygon(rng, vertices=5)
        b = random_convex_polygon(rng, vertices=6)
        dx, dy = float(rng.uniform(-3, 3)), float(rng.uniform(-3, 3))
        base = Pose2(translation=Point2(0.3, -0.1))
        raw = convex_intersection_area(a, IDENT, b, base)
        moved = convex_intersection_area(
            a,
            Pose2(translation=Point2(dx, dy)),
            b,
            Pose2(translation=Point2(0.3 + dx, -0.1 + dy)),
        )
        assert math.isclose(raw, moved, rel_tol=1e-9, abs_tol=1e-12)


def test_regular_polygon_square_side_length():
    sq = regular_polygon(4, math.sqrt(2.0) / 2.0)
    v = sq.vertices
    sides = [
        math.hypot(v[(i + 1) % 4][0] - v[i][0], v[(i + 1) % 4][1] - v[i][1])
        for i in range(4)
    ]
    np.testing.assert_allclose(sides, 1.0, rtol=1e-12)


def test_regular_polygon_areas():
    assert math.isclose(area(regular_polygon(6, 1.0)), 1.5 * math.sqrt(3.0), rel_tol=1e-13)
    assert math.isclose(area(regular_polygon(3, 1.0)), 0.75 * math.sqrt(3.0), rel_tol=1e-13)


def test_regular_polygon_first_vertex_on_x_axis():
    p = regular_polygon(5, 2.0)
    assert p.vertices[0] == Point2(2.0, 0.0)


def test_regular_polygon_rejects_small_m():
    with pytest.raises(ValueError):
        regular_polygon(2, 1.0)


def test_diameter_square():
    assert math.isclose(diameter(UNIT_SQUARE), math.sqrt(2.0), rel_tol=1e-15)


def test_diameter_hexagon():
    assert math.isclose(diameter(regular_polygon(6, 1.0)), 2.0, rel_tol=1e-13)


def test_degenerate_segment_rejected():
    with pytest.raises(ValueError):
        ConvexPolygon([(0, 0), (1, 0), (2, 0)])


def test_clockwise_input_reoriented():
    cw = ConvexPolygon([(0, 0), (0, 1), (1, 1), (1, 0)])
    assert area(cw) == 1.0
    assert is_convex(cw.vertices)


def test_coincident_consecutive_vertices_rejected():
    with pytest.raises(ValueError):
        ConvexPolygon([(0, 0), (0, 0), (1, 0), (1, 1)])


def test_nonconvex_rejected():
    with pytest.raises(ValueError):
        ConvexPolygon([(0, 0), (2, 0), (1, 1), (2, 2), (0, 2)])


def test_point_requires_finite_coordinates():
    with pytest.raises(ValueError):
        Point2(math.nan, 0.0)


def test_pose_rotation_normalized():
    p = Pose2(rotation=-math.pi / 2.0)
    assert 0.0 <= p.rotation < 2.0 * math.pi
    assert math.isclose(p.rotation, 1.5 * math.pi, rel_tol=1e-12)
