"""
Splitting identity check for two named selections of the central set.

The scene's "selections" give the vertex and edge indices of X and Y (see
`central_set` for the numbering). With a fold contraction in the scene the
image inequality is checked as well.

Usage:
    python manage.py split_check --scene scenes/y_tree.json --x X --y Y
"""

from apps.contraction.piecewise import PiecewiseIsometry
from apps.geometry.central_set import central_set
from apps.kp_checker.exceptions import ValidationFailure
from apps.kp_checker.splitting import split_check
from apps.kp_checker.verification import Verdict
from apps.scenes.commands import SceneCommand


class Command(SceneCommand):
    help = "Check A(U) = A(U_X) + A(U_Y) - A(U_XnY) for a cover X, Y of the central set"
    record_runs = True

    def add_command_arguments(self, parser):
        parser.add_argument("--x", default="X", help="Name of the first selection")
        parser.add_argument("--y", default="Y", help="Name of the second selection")

    def run(self, scene, options):
        tol = self.tolerances(options)
        cc = central_set(self.polytope(scene, options), tol)
        X = scene.selection(options["x"], cc)
        Y = scene.selection(options["y"], cc)
        f = scene.build_contraction(tol)
        if f is not None and not isinstance(f, PiecewiseIsometry):
            raise ValidationFailure(
                "split_check needs fold lines, not a point map", path="/contraction"
            )
        report = split_check(
            cc, X, Y, f, options["samples"], self.seed(scene, options), tol
        )
        verdict = Verdict.HOLDS if report.consistent(tol) else Verdict.VIOLATED
        data = report.as_dict()
        data["label"] = scene.label
        data["verdict"] = verdict.value
        return data, verdict
