"""
Check that a scene's contraction does not stretch its disk centers.

Usage:
    python manage.py check_contraction --scene scenes/two_disks_fold.json
    python manage.py check_contraction --scene scenes/two_disks_fold.json --samples 10000
"""

from apps.contraction.piecewise import (
    PiecewiseIsometry,
    is_contractive,
    lipschitz_audit,
    pw_validate,
)
from apps.kp_checker.exceptions import NotAContraction, ValidationFailure
from apps.kp_checker.verification import KPInstance, center_map_for
from apps.scenes.commands import SceneCommand


class Command(SceneCommand):
    help = "Verify the scene's contraction on all pairs of disk centers"

    def run(self, scene, options):
        tol = self.tolerances(options)
        f = scene.build_contraction(tol)
        if f is None:
            raise ValidationFailure("the scene has no contraction", path="/contraction")
        poly = self.polytope(scene, options)
        m = center_map_for(KPInstance(poly, f, scene.label), tol)
        check = is_contractive(scene.surface, m, tol)
        if not check.contractive:
            i, j = check.witness
            raise NotAContraction(
                f"centers {i} and {j} move apart by {check.excess:.6g}",
                indices=check.witness,
                path="/contraction",
                excess=check.excess,
            )
        report = {
            "label": scene.label,
            "surface": scene.surface.value,
            "centers": check.as_dict(),
            "map": m.as_dict(),
        }
        if isinstance(f, PiecewiseIsometry):
            seed = self.seed(scene, options)
            report["validation"] = pw_validate(f, seed=seed, tol=tol).as_dict()
            report["lipschitz"] = lipschitz_audit(
                f, n=options["samples"] or 1000, seed=seed, tol=tol
            ).as_dict()
        return report, None
