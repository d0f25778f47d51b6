"""
Area of a union of disks.

Usage:
    python manage.py union_area --scene scenes/two_disks.json
    python manage.py union_area --scene scenes/two_disks.json --oracle --samples 1000000
"""

from apps.geometry.ball_union import topology, union_area
from apps.kp_checker.verification import audit_area
from apps.scenes.commands import SceneCommand


class Command(SceneCommand):
    help = "Compute the exact area of the union of the scene's disks"

    def run(self, scene, options):
        poly = self.polytope(scene, options)
        area = union_area(poly)
        report = {
            "surface": scene.surface.value,
            "label": scene.label,
            "area": area,
            "topology": topology(poly).as_dict(),
            "dropped": [d.as_dict() for d in poly.dropped],
            "warnings": poly.warnings(),
        }
        if options["oracle"]:
            entry = audit_area(
                "area",
                poly.config,
                area,
                options["samples"],
                self.seed(scene, options),
            )
            report["audit"] = [entry.as_dict()]
        return report, None
