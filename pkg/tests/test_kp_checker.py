"""
Tests for the verification engine.

Tests cover:
- Monte Carlo areas, windows and reproducibility
- Direct verdicts (exact and sampled) for unions and spherical intersections
- Inclusion of the rearranged disks in the image of the central set
- The splitting identity for a cover of the central set
- Peel certificates on trees
- Random sweeps
"""

import math
from unittest.mock import patch

import numpy as np
import pytest

from apps.contraction.piecewise import CenterMap, PiecewiseIsometry, fold
from apps.geometry.exceptions import NonSphericalSurface
from apps.geometry.kernel import (
    Surface,
    bisector,
    disk_area,
    distances,
    line_through,
    make_disk,
)
from apps.geometry.subcomplex import Subcomplex
from apps.kp_checker.certificate import peel_certificate
from apps.kp_checker.exceptions import (
    NotAContraction,
    NotACover,
    NotATree,
    ValidationFailure,
    WindowTooSmall,
)
from apps.kp_checker.montecarlo import (
    BoxWindow,
    DiskUnionMembership,
    SphereWindow,
    empty_membership,
    mc_area,
    mc_union_area,
    window_for,
)
from apps.kp_checker.splitting import split_check
from apps.kp_checker.sweep import instance_seed, run_instance, run_sweep
from apps.kp_checker.verification import (
    KPInstance,
    Verdict,
    exact_or_estimated_area,
    inclusion_check,
    kp_verify,
    kp_verify_intersection,
    sample_disk,
    vertex_image_config,
)

from .base import (
    SQRT3,
    TWO_DISK_AREA,
    TWO_DISK_AREA_FOLDED,
    Y_TREE_HUB,
    GeometryTestCase,
)

E, S, H = Surface.EUCLIDEAN, Surface.SPHERICAL, Surface.HYPERBOLIC

# vertex indices of the Y-tree complex (vertices are sorted by coordinates)
LEFT, HUB, TOP, RIGHT = 0, 1, 2, 3


class KPTestMixin:
    def two_disk_fold(self):
        """Fold at x = 0.75 moving the left disk onto (1.5, 0)."""
        return fold(E, self.vertical_line(0.75))

    def y_tree_fold(self):
        """Fold through the hub, perpendicular to the right-hand leaf edge."""
        hub = self.point(E, *Y_TREE_HUB)
        angle = math.radians(120.0)
        q = self.point(
            E, Y_TREE_HUB[0] + 0.5 * math.cos(angle), Y_TREE_HUB[1] + 0.5 * math.sin(angle)
        )
        return fold(E, line_through(E, hub, q))


class MonteCarloTests(GeometryTestCase):
    """Tests for mc_area() and its windows."""

    def test_unit_disk(self):
        estimate = mc_union_area(self.config(E, [((0.0, 0.0), 1.0)]), n=200_000, seed=3)
        self.assertTrue(estimate.within(math.pi, 4.0))
        self.assertGreater(estimate.std_error, 0.0)

    def test_hemisphere(self):
        config = self.config(S, [((0.0, 0.0, 1.0), math.pi / 2.0)])
        estimate = mc_union_area(config, n=200_000, seed=4)
        self.assertTrue(estimate.within(2.0 * math.pi, 4.0))

    def test_hyperbolic_disk(self):
        config = self.hyperbolic_pair_config()
        single = self.config(H, [(config.disks[1].center, 0.8)])
        estimate = mc_union_area(single, n=200_000, seed=5)
        self.assertTrue(estimate.within(disk_area(H, 0.8), 4.0))

    def test_empty_region(self):
        window = BoxWindow((0.0, 0.0), (1.0, 1.0))
        estimate = mc_area(E, empty_membership, window, n=1000, seed=0)
        self.assertEqual(estimate.mean, 0.0)
        self.assertEqual(estimate.std_error, 0.0)

    def test_zero_samples(self):
        estimate = mc_area(S, empty_membership, SphereWindow(), n=0, seed=0)
        self.assertEqual(estimate.samples, 0)

    def test_reproducible_across_worker_counts(self):
        config = self.two_disks()
        member, window = DiskUnionMembership(config), window_for(config)
        one = mc_area(E, member, window, n=50_000, seed=9, chunks=8, workers=1)
        many = mc_area(E, member, window, n=50_000, seed=9, chunks=8, workers=4)
        self.assertEqual(one.mean, many.mean)

    def test_window_must_cover_the_disks(self):
        small = window_for(self.config(E, [((0.0, 0.0), 0.1)]))
        with self.assertRaises(WindowTooSmall):
            mc_area(E, DiskUnionMembership(self.two_disks()), small, n=100, seed=0)

    def test_sampled_disk_points(self):
        rng = np.random.default_rng(0)
        for surf, center in ((E, (0.3, 0.2)), (S, (0, 1, 0)), (H, (0, 0, 1))):
            disk = make_disk(surf, center, 0.7)
            P = sample_disk(surf, disk, rng, 500)
            self.assertTrue(np.all(distances(surf, P, disk.center) <= 0.7 + 1e-9))

    def test_degenerate_configuration_falls_back_to_sampling(self):
        tangent = self.two_disks(d=2.0)
        value, method, estimate = exact_or_estimated_area(
            tangent, 200_000, 1, self.tol
        )
        self.assertEqual(method, "monte_carlo")
        self.assertTrue(estimate.within(2.0 * math.pi, 4.0))
        self.assertEqual(value, estimate.mean)


class VerifyTests(KPTestMixin, GeometryTestCase):
    """Tests for kp_verify()."""

    def test_verdict_exit_codes(self):
        self.assertEqual(Verdict.HOLDS.exit_code, 0)
        self.assertEqual(Verdict.VIOLATED.exit_code, 2)
        self.assertEqual(Verdict.INCONCLUSIVE.exit_code, 3)

    def test_two_disk_fold(self):
        inst = KPInstance(self.polytope(self.two_disks()), self.two_disk_fold(), "pair")
        report = kp_verify(inst, n=50_000, seed=0)
        self.assertEqual(report.verdict, Verdict.HOLDS)
        self.assertEqual(report.area_after_method, "exact")
        self.assertClose(report.area_before, TWO_DISK_AREA)
        self.assertClose(report.area_after, TWO_DISK_AREA_FOLDED, atol=1e-9)
        self.assertLess(report.residual, 0.0)
        self.assertEqual(report.area_after_set, "central_set_vertices")
        self.assertClose(report.area_rearranged, TWO_DISK_AREA_FOLDED, atol=1e-9)
        self.assertIsNotNone(report.area_after_superset)
        self.assertGreaterEqual(report.area_after_superset, report.area_after - 1e-9)
        self.assertLessEqual(report.area_after_superset, report.area_before + 1e-6)
        self.assertEqual(report.as_dict()["verdict"], "holds")

    def test_identity(self):
        inst = KPInstance(self.polytope(self.y_tree()), PiecewiseIsometry.identity(E))
        report = kp_verify(inst, n=10_000, seed=0)
        self.assertEqual(report.verdict, Verdict.HOLDS)
        self.assertClose(report.residual, 0.0, atol=1e-9)

    def test_verdict_on_central_set_images(self):
        poly = self.polytope(self.y_tree())
        f = self.y_tree_fold()
        report = kp_verify(KPInstance(poly, f), n=10_000, seed=0, tol=self.tol)
        images = vertex_image_config(f, poly, self.tol)
        self.assertEqual(len(images.disks), 4)
        self.assertEqual(report.area_after_set, "central_set_vertices")
        expected = exact_or_estimated_area(images, 10_000, 0, self.tol)
        self.assertEqual(report.area_after, expected[0])
        self.assertEqual(report.area_after_method, expected[1])
        if expected[1] == "exact":
            self.assertGreaterEqual(report.area_after, report.area_rearranged - 1e-9)
        self.assertNotEqual(report.verdict, Verdict.VIOLATED)

    def test_center_map(self):
        m = CenterMap.from_pairs(E, [((0, 0), (0.5, 0)), ((1, 0), (1, 0))])
        report = kp_verify(KPInstance(self.polytope(self.two_disks()), m), n=10_000)
        self.assertEqual(report.verdict, Verdict.HOLDS)
        self.assertClose(report.area_after, TWO_DISK_AREA_FOLDED, atol=1e-9)
        self.assertEqual(report.area_after_set, "rearranged_disks")
        self.assertEqual(report.area_rearranged, report.area_after)
        self.assertIsNone(report.area_after_superset)

    def test_stretching_map_rejected(self):
        m = CenterMap.from_pairs(E, [((0, 0), (0, 0)), ((1, 0), (3, 0))])
        with self.assertRaises(NotAContraction) as ctx:
            kp_verify(KPInstance(self.polytope(self.two_disks()), m))
        self.assertEqual(ctx.exception.indices, (0, 1))
        self.assertClose(ctx.exception.excess, 2.0)
        self.assertEqual(ctx.exception.as_dict()["excess"], ctx.exception.excess)

    def test_map_missing_a_center(self):
        m = CenterMap.from_pairs(E, [((0, 0), (0, 0))])
        with self.assertRaises(ValidationFailure):
            kp_verify(KPInstance(self.polytope(self.two_disks()), m))

    def test_unvalidated_instance(self):
        with self.assertRaises(ValidationFailure):
            kp_verify(KPInstance(self.two_disks(), self.two_disk_fold()))

    def test_tangent_image_is_inconclusive(self):
        config = self.two_disks(d=2.5)
        m = CenterMap.from_pairs(E, [((0, 0), (0, 0)), ((2.5, 0), (2, 0))])
        report = kp_verify(KPInstance(self.polytope(config), m), n=100_000, seed=2)
        self.assertEqual(report.area_after_method, "monte_carlo")
        self.assertEqual(report.verdict, Verdict.INCONCLUSIVE)
        self.assertEqual(len(report.notes), 1)

    def test_oracle_audit(self):
        inst = KPInstance(self.polytope(self.two_disks()), self.two_disk_fold())
        report = kp_verify(inst, n=200_000, seed=6, oracle=True)
        self.assertEqual([a.quantity for a in report.audit], ["area_before", "area_after"])
        self.assertTrue(all(a.agrees for a in report.audit))

    def test_curved_surfaces(self):
        for config in (self.spherical_cap_config(), self.hyperbolic_pair_config()):
            surf = config.surface
            a, b = config.disks[0].center, config.disks[1].center
            # folding along the bisector lands the first center on the second
            f = fold(surf, bisector(surf, a, b))
            report = kp_verify(KPInstance(self.polytope(config), f), n=10_000, seed=0)
            self.assertEqual(report.verdict, Verdict.HOLDS, surf.value)
            self.assertClose(
                report.area_after, disk_area(surf, config.disks[0].radius), atol=1e-9
            )


class InclusionTests(KPTestMixin, GeometryTestCase):
    """Tests for inclusion_check()."""

    def test_folded_disks_lie_in_the_image(self):
        inst = KPInstance(self.polytope(self.two_disks()), self.two_disk_fold())
        report = inclusion_check(inst, n=20_000, seed=1)
        self.assertTrue(report.included)
        self.assertEqual(report.violations, 0)
        self.assertEqual(report.samples, 20_000)
        self.assertEqual(len(report.covering), 2)
        self.assertTrue(all(c["found"] for c in report.covering))

    def test_needs_piecewise_isometry(self):
        m = CenterMap.from_pairs(E, [((0, 0), (0, 0)), ((1, 0), (1, 0))])
        with self.assertRaises(ValidationFailure):
            inclusion_check(KPInstance(self.polytope(self.two_disks()), m))


class IntersectionTests(GeometryTestCase):
    """Tests for kp_verify_intersection()."""

    def test_moving_caps_together_grows_the_intersection(self):
        config = self.spherical_cap_config()
        a, b = config.disks[0].center, config.disks[1].center
        closer = self.point(S, math.sin(0.4), 0.0, math.cos(0.4))
        m = CenterMap.from_pairs(S, [(a, a), (b, closer)])
        report = kp_verify_intersection(config, m, n=10_000, seed=0)
        self.assertEqual(report.verdict, Verdict.HOLDS)
        self.assertGreater(report.area_after, report.area_before)

    def test_sphere_only(self):
        m = CenterMap.from_pairs(E, [((0, 0), (0, 0)), ((1, 0), (1, 0))])
        with self.assertRaises(NonSphericalSurface):
            kp_verify_intersection(self.two_disks(), m)

    def test_stretching_rejected(self):
        config = self.spherical_cap_config()
        a, b = config.disks[0].center, config.disks[1].center
        farther = self.point(S, math.sin(1.2), 0.0, math.cos(1.2))
        m = CenterMap.from_pairs(S, [(a, a), (b, farther)])
        with self.assertRaises(NotAContraction):
            kp_verify_intersection(config, m)


class SplitCheckTests(KPTestMixin, GeometryTestCase):
    """Tests for split_check()."""

    def setUp(self):
        super().setUp()
        self.cc = self.complex_of(self.y_tree())
        left_edge = next(n for n, e in enumerate(self.cc.edges) if LEFT in (e.u, e.v))
        self.X = Subcomplex.of(self.cc, [], [left_edge], close=True)
        self.Y = self.X.complement_closure()

    def test_inclusion_exclusion(self):
        report = split_check(self.cc, self.X, self.Y, n=50_000, seed=0)
        self.assertClose(report.eq1_residual, 0.0, atol=1e-6)
        self.assertClose(report.area_xy, disk_area(E, 2.0 / SQRT3), atol=1e-9)
        self.assertLess(report.symmetric_difference.mean, 1e-3)
        self.assertIsNone(report.eq2_slack)
        self.assertTrue(report.consistent())

    def test_with_fold(self):
        report = split_check(self.cc, self.X, self.Y, f=self.y_tree_fold(), n=50_000)
        self.assertIsNotNone(report.eq2_slack)
        self.assertGreaterEqual(report.eq2_slack, -1e-6)
        self.assertTrue(report.consistent())
        self.assertEqual(report.refined_edges, 3)
        self.assertIn("area_u_f", report.as_dict())

    def test_not_a_cover(self):
        with self.assertRaises(NotACover):
            split_check(self.cc, self.X, self.X)


class PeelCertificateTests(KPTestMixin, GeometryTestCase):
    """Tests for peel_certificate()."""

    def test_two_disks_without_refinement(self):
        cc = self.complex_of(self.two_disks())
        certificate = peel_certificate(cc, fold(E, self.vertical_line(5.0)))
        self.assertEqual(len(certificate.steps), 1)
        self.assertEqual(certificate.verdict, Verdict.HOLDS)
        self.assertClose(certificate.area_after, certificate.area_before, atol=1e-9)

    def test_two_disk_fold(self):
        poly = self.polytope(self.two_disks())
        cc = self.complex_of(self.two_disks())
        f = self.two_disk_fold()
        certificate = peel_certificate(cc, f)
        self.assertEqual(certificate.refined_edges, 2)
        self.assertEqual(len(certificate.steps), 2)
        self.assertEqual(certificate.verdict, Verdict.HOLDS)
        self.assertClose(certificate.area_before, TWO_DISK_AREA)
        direct = kp_verify(KPInstance(poly, f), n=10_000)
        self.assertClose(certificate.area_after, direct.area_after_superset, atol=1e-9)
        self.assertLessEqual(direct.area_after, certificate.area_after + 1e-9)

    def test_wall_through_a_sample_node(self):
        cc = self.complex_of(self.two_disks())
        certificate = peel_certificate(cc, fold(E, self.vertical_line(0.625)))
        self.assertEqual(certificate.refined_edges, 2)
        self.assertEqual(certificate.verdict, Verdict.HOLDS)

    def test_y_tree(self):
        cc = self.complex_of(self.y_tree())
        certificate = peel_certificate(cc, self.y_tree_fold())
        self.assertEqual(len(certificate.steps), 3)
        self.assertEqual(certificate.verdict, Verdict.HOLDS)
        # leaves go in coordinate order; the last edge peels off the hub itself
        self.assertEqual(
            [(s.leaf, s.hinge) for s in certificate.steps],
            [(LEFT, HUB), (TOP, HUB), (HUB, RIGHT)],
        )
        for step in certificate.steps:
            self.assertClose(step.hinge_radius_before, step.hinge_radius_after, atol=1e-9)
            self.assertTrue(step.closes)
        self.assertEqual(len(certificate.as_dict()["steps"]), 3)

    def test_ring_is_not_a_tree(self):
        cc = self.complex_of(self.ring())
        with self.assertRaises(NotATree):
            peel_certificate(cc, PiecewiseIsometry.identity(E))


class SweepTests(GeometryTestCase):
    """Tests for random sweeps."""

    def test_instance_seeds_are_stable(self):
        self.assertEqual(instance_seed(0, 3), instance_seed(0, 3))
        self.assertNotEqual(instance_seed(0, 3), instance_seed(0, 4))

    def test_instances_replay(self):
        first = run_instance(E, 2, seed=11, samples=5_000, certify=False)
        again = run_instance(E, 2, seed=11, samples=5_000, certify=False)
        self.assertEqual(first.as_dict(), again.as_dict())

    def test_crashing_instance_is_recorded(self):
        with patch(
            "apps.kp_checker.sweep.random_scene", side_effect=FloatingPointError("overflow")
        ):
            record = run_instance(E, 0, seed=3, samples=1_000, certify=False)
        self.assertEqual(record.error, "FloatingPointError")
        self.assertIsNone(record.verdict)

    def test_sweep_survives_a_crashing_instance(self):
        with patch(
            "apps.kp_checker.sweep.random_scene", side_effect=FloatingPointError("overflow")
        ):
            summary = run_sweep(E, count=2, seed=1, samples=1_000, certify=False)
        self.assertEqual(summary.as_dict()["count"], 2)
        self.assertEqual(summary.as_dict()["errors"], 2)

    @pytest.mark.slow
    def test_small_sweeps_find_no_violations(self):
        for surf in Surface:
            summary = run_sweep(surf, count=4, seed=1, max_disks=4, max_folds=2, samples=20_000)
            data = summary.as_dict()
            self.assertEqual(data["count"], 4)
            self.assertEqual(data["violated"], 0, surf.value)
            self.assertEqual(data["disagreements"], 0, surf.value)
            self.assertLessEqual(summary.inconclusive_rate, 1.0)
