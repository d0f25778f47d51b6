"""
Tests for the geometry kernel.

Tests cover:
- Point models and their validation (plane, unit sphere, hyperboloid)
- Distances, geodesics and disk areas on the three surfaces
- Circle intersections and equidistant points
- Lines, bisectors, reflections and isometries
"""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from apps.geometry.exceptions import (
    AmbiguousGeodesic,
    DegenerateBisector,
    DegenerateCoincident,
    InvalidLine,
    InvalidPoint,
    InvalidRadius,
    MixedSurfaces,
    NoCircumcenter,
)
from apps.geometry.kernel import (
    Disk,
    Surface,
    bisector,
    circle_angle,
    circle_intersections,
    circle_point,
    disk_area,
    distance,
    distances,
    ensure_same_surface,
    equidistant_point,
    geodesic_eval,
    isometry_to,
    line_through,
    make_disk,
    make_point,
    random_isometry,
    random_points,
    reflect,
    reflection,
)

from .base import SQRT3, GeometryTestCase

E, S, H = Surface.EUCLIDEAN, Surface.SPHERICAL, Surface.HYPERBOLIC


class PointModelTests(GeometryTestCase):
    """Tests for building and checking points."""

    def test_euclidean_point_kept_as_is(self):
        self.assertPointClose(make_point(E, (0.25, -3.0)), [0.25, -3.0])

    def test_sphere_point_renormalized(self):
        self.assertPointClose(make_point(S, (0.0, 0.0, 2.0)), [0.0, 0.0, 1.0])

    def test_wrong_dimension_rejected(self):
        with self.assertRaises(InvalidPoint):
            make_point(E, (1.0, 2.0, 3.0))

    def test_non_finite_rejected(self):
        with self.assertRaises(InvalidPoint):
            make_point(S, (float("nan"), 0.0, 1.0))

    def test_lower_hyperboloid_sheet_rejected(self):
        with self.assertRaises(InvalidPoint):
            make_point(H, (0.0, 0.0, -1.0))

    def test_max_defect_enforced(self):
        with self.assertRaises(InvalidPoint):
            make_point(S, (0.0, 0.0, 2.0), max_defect=1e-6)

    def test_points_are_read_only(self):
        p = make_point(E, (1.0, 2.0))
        with self.assertRaises(ValueError):
            p[0] = 5.0

    def test_mixed_surfaces(self):
        self.assertIs(ensure_same_surface(S, S), S)
        with self.assertRaises(MixedSurfaces):
            ensure_same_surface(E, S)


class DistanceTests(GeometryTestCase):
    """Tests for distances, geodesics and areas."""

    def test_euclidean_distance(self):
        self.assertClose(distance(E, make_point(E, (0, 0)), make_point(E, (3, 4))), 5.0)

    def test_sphere_quarter_turn(self):
        a, b = make_point(S, (1, 0, 0)), make_point(S, (0, 1, 0))
        self.assertClose(distance(S, a, b), math.pi / 2.0)

    def test_hyperbolic_unit_distance(self):
        a = make_point(H, (0.0, 0.0, 1.0))
        b = make_point(H, (math.sinh(1.0), 0.0, math.cosh(1.0)))
        self.assertClose(distance(H, a, b), 1.0, atol=1e-12)

    def test_vectorized_distances_match(self):
        rng = np.random.default_rng(3)
        for surf in Surface:
            P = random_points(surf, rng, 20)
            q = P[0]
            expected = [distance(surf, make_point(surf, p), make_point(surf, q)) for p in P]
            np.testing.assert_allclose(distances(surf, P, q), expected, atol=1e-12)

    def test_geodesic_midpoint_halves_distance(self):
        rng = np.random.default_rng(5)
        for surf in Surface:
            p, q = random_points(surf, rng, 2, spread=1.0)
            m = geodesic_eval(surf, p, q, 0.5)
            whole = distance(surf, make_point(surf, p), make_point(surf, q))
            self.assertClose(distances(surf, m[None, :], p)[0], whole / 2.0, atol=1e-9)
            self.assertClose(distances(surf, m[None, :], q)[0], whole / 2.0, atol=1e-9)

    def test_geodesic_between_antipodes_is_ambiguous(self):
        with self.assertRaises(AmbiguousGeodesic):
            geodesic_eval(S, np.array([0.0, 0.0, 1.0]), np.array([0.0, 0.0, -1.0]), 0.5)

    def test_disk_areas(self):
        self.assertClose(disk_area(E, 2.0), 4.0 * math.pi)
        self.assertClose(disk_area(S, math.pi / 2.0), 2.0 * math.pi)
        self.assertClose(disk_area(H, 1.0), 2.0 * math.pi * (math.cosh(1.0) - 1.0))

    def test_radius_validation(self):
        with self.assertRaises(InvalidRadius):
            make_disk(E, (0.0, 0.0), -1.0)
        with self.assertRaises(InvalidRadius):
            make_disk(S, (0.0, 0.0, 1.0), math.pi)

    def test_circle_point_parametrization(self):
        rng = np.random.default_rng(11)
        for surf in Surface:
            c = random_points(surf, rng, 1, spread=1.0)[0]
            for theta in (0.0, 1.0, 2.5, 4.0, 6.0):
                x = circle_point(surf, c, 0.7, theta)
                self.assertClose(distances(surf, x[None, :], c)[0], 0.7, atol=1e-9)
                self.assertClose(circle_angle(surf, c, x), theta, atol=1e-9)


class CircleTests(GeometryTestCase):
    """Tests for circle intersections and equidistant points."""

    def test_two_unit_circles(self):
        d1 = make_disk(E, (0.0, 0.0), 1.0)
        d2 = make_disk(E, (1.0, 0.0), 1.0)
        found = circle_intersections(E, d1, d2)
        self.assertFalse(found.tangent)
        self.assertEqual(len(found), 2)
        points = sorted(tuple(p) for p in found.points)
        self.assertPointClose(points[0], [0.5, -SQRT3 / 2.0])
        self.assertPointClose(points[1], [0.5, SQRT3 / 2.0])

    def test_tangent_circles(self):
        found = circle_intersections(
            E, make_disk(E, (0.0, 0.0), 1.0), make_disk(E, (2.0, 0.0), 1.0)
        )
        self.assertTrue(found.tangent)
        self.assertPointClose(found.points[0], [1.0, 0.0])

    def test_disjoint_circles(self):
        found = circle_intersections(
            E, make_disk(E, (0.0, 0.0), 1.0), make_disk(E, (5.0, 0.0), 1.0)
        )
        self.assertEqual(len(found), 0)

    def test_identical_circles(self):
        disk = make_disk(E, (0.0, 0.0), 1.0)
        with self.assertRaises(DegenerateCoincident):
            circle_intersections(E, disk, Disk(disk.center, 1.0))

    def test_intersections_lie_on_both_circles(self):
        rng = np.random.default_rng(2)
        for surf in (S, H):
            a, b = random_points(surf, rng, 2, spread=0.5)
            gap = distances(surf, a[None, :], b)[0]
            r = 0.6 * gap + 0.2
            d1, d2 = Disk(make_point(surf, a), r), Disk(make_point(surf, b), r)
            for x in circle_intersections(surf, d1, d2).points:
                self.assertClose(distances(surf, x[None, :], a)[0], r, atol=1e-9)
                self.assertClose(distances(surf, x[None, :], b)[0], r, atol=1e-9)

    def test_equidistant_point_of_triangle(self):
        (x,) = equidistant_point(E, (0.0, 0.0), (1.0, 0.0), (0.5, SQRT3 / 2.0))
        self.assertPointClose(x, [0.5, SQRT3 / 6.0])

    def test_collinear_points_have_no_circumcenter(self):
        with self.assertRaises(NoCircumcenter):
            equidistant_point(E, (0.0, 0.0), (1.0, 0.0), (2.0, 0.0))

    def test_sphere_has_two_equidistant_points(self):
        found = equidistant_point(S, (1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0))
        self.assertEqual(len(found), 2)
        expected = np.ones(3) / math.sqrt(3.0)
        self.assertPointClose(sorted((tuple(p) for p in found))[1], expected)


class LineAndIsometryTests(GeometryTestCase):
    """Tests for lines, reflections and isometries."""

    def test_left_side_is_positive(self):
        line = line_through(E, make_point(E, (0.0, 0.0)), make_point(E, (1.0, 0.0)))
        self.assertGreater(line.side(make_point(E, (0.3, 1.0))), 0.0)
        self.assertLess(line.side(make_point(E, (0.3, -1.0))), 0.0)

    def test_line_needs_distinct_points(self):
        p = make_point(E, (1.0, 1.0))
        with self.assertRaises(InvalidLine):
            line_through(E, p, p)

    def test_antipodal_line_is_ambiguous(self):
        with self.assertRaises(AmbiguousGeodesic):
            line_through(S, make_point(S, (0, 0, 1)), make_point(S, (0, 0, -1)))

    def test_bisector_favours_first_point(self):
        rng = np.random.default_rng(8)
        for surf in Surface:
            a, b = (make_point(surf, p) for p in random_points(surf, rng, 2, spread=1.0))
            line = bisector(surf, a, b)
            self.assertGreater(line.side(a), 0.0)
            self.assertLess(line.side(b), 0.0)

    def test_bisector_of_one_point(self):
        p = make_point(E, (1.0, 1.0))
        with self.assertRaises(DegenerateBisector):
            bisector(E, p, p)

    def test_reflection_across_x_axis(self):
        line = line_through(E, make_point(E, (0.0, 0.0)), make_point(E, (1.0, 0.0)))
        self.assertPointClose(reflect(E, line, make_point(E, (0.3, 0.7))), [0.3, -0.7])

    def test_isometry_to_moves_base_point(self):
        rng = np.random.default_rng(4)
        for surf in Surface:
            c = random_points(surf, rng, 1, spread=1.5)[0]
            move = isometry_to(surf, c)
            self.assertTrue(move.is_valid())
            self.assertPointClose(move.apply(surf.base_point), c, atol=1e-9)

    def test_inverse_undoes_isometry(self):
        rng = np.random.default_rng(6)
        for surf in Surface:
            g = random_isometry(surf, rng)
            p = random_points(surf, rng, 1, spread=1.0)[0]
            self.assertPointClose(g.inverse().apply(g.apply(p)), p, atol=1e-9)


@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
@pytest.mark.parametrize("surf", list(Surface), ids=lambda s: s.value)
def test_random_isometries_preserve_distances(surf, seed):
    rng = np.random.default_rng(seed)
    g = random_isometry(surf, rng, spread=1.5)
    p, q = random_points(surf, rng, 2, spread=1.5)
    before = distances(surf, p[None, :], q)[0]
    after = distances(surf, g.apply(p)[None, :], g.apply(q))[0]
    assert abs(before - after) <= 1e-8


@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
@pytest.mark.parametrize("surf", list(Surface), ids=lambda s: s.value)
def test_reflections_are_involutions(surf, seed):
    rng = np.random.default_rng(seed)
    a, b, p = random_points(surf, rng, 3, spread=1.5)
    if distances(surf, a[None, :], b)[0] < 1e-3:
        return
    line = bisector(surf, make_point(surf, a), make_point(surf, b))
    mirror = reflection(surf, line)
    assert np.allclose(mirror.apply(mirror.apply(p)), p, atol=1e-8)
    # the bisector swaps its two defining points
    assert np.allclose(mirror.apply(a), b, atol=1e-8)
