"""
Relative central set: centers of maximal disks containing a given point.

Usage:
    python manage.py relative_central_set --scene scenes/y_tree.json --point 0.5,0.1
"""

from apps.geometry.central_set import central_set, relative_central_set
from apps.geometry.exceptions import GeometryError
from apps.geometry.kernel import make_point
from apps.scenes.commands import SceneCommand
from apps.scenes.exceptions import SceneSyntaxError


def parse_point(surf, text):
    try:
        coords = [float(x) for x in text.split(",")]
    except ValueError:
        raise SceneSyntaxError(f"cannot read point {text!r}", path="--point")
    try:
        return make_point(surf, coords)
    except GeometryError as exc:
        raise SceneSyntaxError(exc.message, path="--point")


class Command(SceneCommand):
    help = "List the part of the central set whose maximal disks contain a point"

    def add_command_arguments(self, parser):
        parser.add_argument(
            "--point",
            required=True,
            help="Comma-separated coordinates (2 on the plane, 3 otherwise)",
        )

    def run(self, scene, options):
        tol = self.tolerances(options)
        poly = self.polytope(scene, options)
        point = parse_point(scene.surface, options["point"])
        relative = relative_central_set(central_set(poly, tol), point, tol)
        report = relative.as_dict()
        report["label"] = scene.label
        return report, None
