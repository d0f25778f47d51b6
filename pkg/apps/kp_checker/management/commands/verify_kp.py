"""
Kneser-Poulsen verdict for a scene and its contraction.

Usage:
    python manage.py verify_kp --scene scenes/two_disks_fold.json
    python manage.py verify_kp --scene scenes/two_disks_fold.json --inclusion --samples 100000
    python manage.py verify_kp --scene scenes/caps.json --intersection

Exit status: 0 holds, 2 violated, 3 inconclusive, 1 error.
"""

from apps.contraction.piecewise import CenterMap
from apps.kp_checker.exceptions import ValidationFailure
from apps.kp_checker.verification import (
    KPInstance,
    inclusion_check,
    kp_verify,
    kp_verify_intersection,
)
from apps.scenes.commands import SceneCommand


class Command(SceneCommand):
    help = "Compare the union area before and after the scene's contraction"
    record_runs = True

    def add_command_arguments(self, parser):
        parser.add_argument(
            "--inclusion",
            action="store_true",
            help="Also sample the moved disks and test them against U_f",
        )
        parser.add_argument(
            "--intersection",
            action="store_true",
            help="Spherical scenes: check that the intersection area does not shrink",
        )

    def run(self, scene, options):
        tol = self.tolerances(options)
        seed = self.seed(scene, options)
        f = scene.build_contraction(tol)
        if f is None:
            raise ValidationFailure("the scene has no contraction", path="/contraction")

        if options["intersection"]:
            m = f
            if not isinstance(f, CenterMap):
                centers = [d.center for d in scene.config.disks]
                m = CenterMap.from_piecewise(f, centers, tol)
            report = kp_verify_intersection(
                scene.config, m, options["samples"], seed, tol, label=scene.label
            )
            return report.as_dict(), report.verdict

        inst = KPInstance(self.polytope(scene, options), f, scene.label)
        report = kp_verify(inst, options["samples"], seed, options["oracle"], tol)
        data = report.as_dict()
        if options["inclusion"]:
            n = options["samples"] or 100_000
            data["inclusion"] = inclusion_check(inst, n, seed, tol).as_dict()
        return data, report.verdict
