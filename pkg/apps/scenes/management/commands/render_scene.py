"""
SVG figure of a scene and its central set.

Usage:
    python manage.py render_scene --scene scenes/y_tree.json --out y_tree.svg
    python manage.py render_scene --scene scenes/y_tree.json --no-complex
"""

from apps.geometry.central_set import central_set
from apps.scenes.commands import SceneCommand
from apps.scenes.svg import svg_document


class Command(SceneCommand):
    help = "Render the scene (and its central set) as an SVG 1.1 document"

    def add_command_arguments(self, parser):
        parser.add_argument(
            "--no-complex",
            action="store_true",
            help="Draw the disks only",
        )

    def run(self, scene, options):
        cc = None
        if not options["no_complex"]:
            cc = central_set(self.polytope(scene, options), self.tolerances(options))
        self.emit(svg_document(scene, cc), options)
        return None, None
