"""
Tests for disk unions.

Tests cover:
- Strict validation and its rejections (tangency, triple points, empty input)
- Redundant and duplicate disks in strict and derived mode
- Exact union areas against closed forms and Monte Carlo
- Topology (components, holes, Euler characteristic)
- Spherical complements and intersection areas
"""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from apps.geometry.ball_union import (
    BallConfiguration,
    complement_config,
    contains,
    intersection_area_sphere,
    jitter,
    topology,
    union_area,
    union_area_of,
    validate,
)
from apps.geometry.exceptions import (
    CoincidentCircles,
    CornerOnThirdCircle,
    EmptyConfiguration,
    NonSphericalSurface,
    SphereCovered,
    TangentCircles,
    UnvalidatedInput,
    ZeroRadius,
)
from apps.geometry.kernel import Disk, Surface, disk_area, random_isometry
from apps.kp_checker.montecarlo import mc_union_area

from .base import SQRT3, TWO_DISK_AREA, BaseTestMixin, GeometryTestCase

E, S, H = Surface.EUCLIDEAN, Surface.SPHERICAL, Surface.HYPERBOLIC


class ValidationTests(GeometryTestCase):
    """Tests for validate()."""

    def test_two_disks_have_two_corners_and_two_arcs(self):
        poly = self.polytope(self.two_disks())
        self.assertEqual(len(poly.corners), 2)
        self.assertEqual(len(poly.arcs), 2)
        corners = sorted(tuple(c.point) for c in poly.corners)
        self.assertPointClose(corners[0], [0.5, -SQRT3 / 2.0])
        self.assertPointClose(corners[1], [0.5, SQRT3 / 2.0])

    def test_single_disk_is_one_full_arc(self):
        poly = self.polytope(self.config(E, [((0.0, 0.0), 1.0)]))
        self.assertEqual(len(poly.corners), 0)
        self.assertEqual(len(poly.arcs), 1)
        self.assertTrue(poly.arcs[0].full)

    def test_empty_configuration(self):
        with self.assertRaises(EmptyConfiguration):
            validate(BallConfiguration(E, ()))

    def test_zero_radius(self):
        with self.assertRaises(ZeroRadius) as ctx:
            validate(self.config(E, [((0.0, 0.0), 1.0), ((1.0, 0.0), 0.0)]))
        self.assertEqual(ctx.exception.indices, (1,))

    def test_tangent_disks_rejected(self):
        with self.assertRaises(TangentCircles):
            validate(self.two_disks(d=2.0))

    def test_three_circles_through_one_point_rejected(self):
        config = self.config(
            E,
            [
                ((1.0, 0.0), 1.0),
                ((-0.5, SQRT3 / 2.0), 1.0),
                ((-0.5, -SQRT3 / 2.0), 1.0),
            ],
        )
        with self.assertRaises(CornerOnThirdCircle):
            validate(config, strict=True)

    def test_duplicate_disk_strict_and_derived(self):
        config = self.config(E, [((0.0, 0.0), 1.0), ((0.0, 0.0), 1.0), ((1.0, 0.0), 1.0)])
        with self.assertRaises(CoincidentCircles):
            validate(config, strict=True)
        poly = validate(config, strict=False)
        self.assertEqual([d.reason for d in poly.dropped], ["duplicate"])
        self.assertClose(union_area(poly), TWO_DISK_AREA, atol=1e-9)

    def test_contained_disk_dropped_with_warning(self):
        poly = self.polytope(self.config(E, [((0.0, 0.0), 1.0), ((0.2, 0.0), 0.5)]))
        self.assertEqual(poly.active, (0,))
        self.assertEqual(poly.dropped[0].index, 1)
        self.assertEqual(poly.dropped[0].reason, "contained")
        self.assertEqual(len(poly.warnings()), 1)
        self.assertClose(union_area(poly), math.pi)

    def test_complementary_hemispheres_cover_the_sphere(self):
        config = self.config(S, [((0, 0, 1), math.pi / 2.0), ((0, 0, -1), math.pi / 2.0)])
        with self.assertRaises(SphereCovered):
            validate(config)

    def test_large_caps_cover_the_sphere(self):
        config = self.config(S, [((0, 0, 1), 2.0), ((0, 0, -1), 2.0)])
        with self.assertRaises(SphereCovered):
            validate(config)

    def test_membership(self):
        config = self.two_disks()
        self.assertTrue(contains(config, np.array([0.5, 0.0])))
        self.assertTrue(contains(config, np.array([2.0, 0.0])))
        self.assertFalse(contains(config, np.array([3.0, 0.0])))


class AreaTests(GeometryTestCase):
    """Tests for union_area()."""

    def test_two_unit_disks(self):
        self.assertClose(union_area(self.polytope(self.two_disks())), 5.054815, atol=1e-6)
        self.assertClose(union_area(self.polytope(self.two_disks())), TWO_DISK_AREA)

    def test_single_disks_on_every_surface(self):
        for surf, center in ((E, (0, 0)), (S, (0, 0, 1)), (H, (0, 0, 1))):
            poly = self.polytope(self.config(surf, [(center, 0.9)]))
            self.assertClose(union_area(poly), disk_area(surf, 0.9), atol=1e-9)

    def test_hemisphere(self):
        poly = self.polytope(self.config(S, [((1, 0, 0), math.pi / 2.0)]))
        self.assertClose(union_area(poly), 2.0 * math.pi, atol=1e-9)

    def test_disjoint_disks_add_up(self):
        config = self.config(E, [((0.0, 0.0), 1.0), ((5.0, 0.0), 2.0)])
        self.assertClose(union_area_of(config), 5.0 * math.pi, atol=1e-9)

    def test_unvalidated_input(self):
        with self.assertRaises(UnvalidatedInput):
            union_area(self.two_disks())

    @pytest.mark.slow
    def test_areas_agree_with_sampling(self):
        configs = [
            self.two_disks(),
            self.y_tree(),
            self.ring(),
            self.spherical_cap_config(),
            self.hyperbolic_pair_config(),
            self.ring(S),
            self.ring(H),
        ]
        for config in configs:
            exact = union_area(self.polytope(config))
            estimate = mc_union_area(config, n=400_000, seed=1)
            self.assertTrue(
                estimate.within(exact, 4.0),
                f"{config.surface.value}: exact {exact} vs "
                f"{estimate.mean} +- {estimate.std_error}",
            )

    def test_jitter_is_deterministic_and_small(self):
        config = self.y_tree()
        a, b = jitter(config, 7, 1e-7), jitter(config, 7, 1e-7)
        np.testing.assert_array_equal(a.radii, b.radii)
        self.assertTrue(np.all(np.abs(a.radii - config.radii) <= 1e-7))


class TopologyTests(GeometryTestCase):
    """Tests for topology()."""

    def test_two_disks_simply_connected(self):
        report = topology(self.polytope(self.two_disks()))
        self.assertEqual(report.component_count, 1)
        self.assertEqual(report.hole_count, 0)
        self.assertEqual(report.euler_characteristic, 1)
        self.assertTrue(report.simply_connected)

    def test_ring_has_one_hole(self):
        for surf in Surface:
            report = topology(self.polytope(self.ring(surf)))
            self.assertEqual(report.component_count, 1, surf.value)
            self.assertEqual(report.hole_count, 1, surf.value)
            self.assertEqual(report.euler_characteristic, 0, surf.value)
            self.assertFalse(report.simply_connected)

    def test_two_components(self):
        report = topology(self.polytope(self.config(E, [((0, 0), 1.0), ((5, 0), 1.0)])))
        self.assertEqual(report.component_count, 2)
        self.assertEqual(report.euler_characteristic, 2)


class SphereComplementTests(GeometryTestCase):
    """Tests for antipodal complements and intersection areas."""

    def test_complement_needs_sphere(self):
        with self.assertRaises(NonSphericalSurface):
            complement_config(self.two_disks())

    def test_complement_of_cap(self):
        config = self.config(S, [((0, 0, 1), 0.5)])
        (disk,) = complement_config(config).disks
        self.assertPointClose(disk.center, [0.0, 0.0, -1.0])
        self.assertClose(disk.radius, math.pi - 0.5)

    def test_intersection_of_one_cap_is_the_cap(self):
        config = self.config(S, [((0, 0, 1), 0.5)])
        self.assertClose(intersection_area_sphere(config), disk_area(S, 0.5), atol=1e-9)

    def test_disjoint_caps_have_empty_intersection(self):
        config = self.config(S, [((0, 0, 1), 0.5), ((0, 0, -1), 0.5)])
        self.assertEqual(intersection_area_sphere(config), 0.0)

    def test_intersection_matches_inclusion_exclusion(self):
        config = self.spherical_cap_config()
        union = union_area(self.polytope(config))
        both = intersection_area_sphere(config)
        self.assertClose(both, 2.0 * disk_area(S, 0.6) - union, atol=1e-9)


@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
@pytest.mark.parametrize("surf", [S, H], ids=lambda s: s.value)
def test_area_is_isometry_invariant(surf, seed):
    rng = np.random.default_rng(seed)
    helper = BaseTestMixin()
    config = (
        helper.spherical_cap_config() if surf is S else helper.hyperbolic_pair_config()
    )
    g = random_isometry(surf, rng, spread=1.0)
    moved = BallConfiguration(
        surf, tuple(Disk(g.apply(d.center), d.radius) for d in config.disks)
    )
    assert abs(union_area_of(moved) - union_area_of(config)) <= 1e-9
