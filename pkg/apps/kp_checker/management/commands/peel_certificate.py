"""
Peel certificate for a simply connected scene and a fold contraction.

Usage:
    python manage.py peel_certificate --scene scenes/y_tree_fold.json

Exit status: 0 when every peel step closes, 2 otherwise, 1 on error.
"""

from apps.contraction.piecewise import PiecewiseIsometry
from apps.geometry.central_set import central_set
from apps.kp_checker.certificate import peel_certificate
from apps.kp_checker.exceptions import ValidationFailure
from apps.scenes.commands import SceneCommand


class Command(SceneCommand):
    help = "Peel the central-set tree leaf by leaf and check each area step"
    record_runs = True

    def run(self, scene, options):
        tol = self.tolerances(options)
        f = scene.build_contraction(tol)
        if not isinstance(f, PiecewiseIsometry):
            raise ValidationFailure(
                "a peel certificate needs fold lines in the scene", path="/contraction"
            )
        cc = central_set(self.polytope(scene, options), tol)
        certificate = peel_certificate(
            cc, f, options["samples"], self.seed(scene, options), tol
        )
        data = certificate.as_dict()
        data["label"] = scene.label
        return data, certificate.verdict
