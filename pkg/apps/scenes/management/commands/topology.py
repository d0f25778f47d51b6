"""
Components, holes and Euler characteristic of a union of disks.

Usage:
    python manage.py topology --scene scenes/ring.json
"""

from apps.geometry.ball_union import topology
from apps.scenes.commands import SceneCommand


class Command(SceneCommand):
    help = "Report the topology of the union of the scene's disks"

    def run(self, scene, options):
        poly = self.polytope(scene, options)
        report = topology(poly).as_dict()
        report["surface"] = scene.surface.value
        report["label"] = scene.label
        return report, None
