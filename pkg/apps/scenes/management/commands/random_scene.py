"""
Seeded random scene generator.

Usage:
    python manage.py random_scene --surface euclidean --disks 5 --seed 7
    python manage.py random_scene --surface spherical --disks 4 --folds 2 --out s.json
"""

from apps.geometry.kernel import Surface
from apps.scenes.commands import SceneCommand
from apps.scenes.exceptions import UnknownSurface
from apps.scenes.generators import ANY, SIMPLY_CONNECTED, random_scene
from apps.scenes.scene import serialize_scene


class Command(SceneCommand):
    help = "Generate a random connected scene and print it as a scene document"
    needs_scene = False

    def add_command_arguments(self, parser):
        parser.add_argument("--surface", default="euclidean")
        parser.add_argument("--disks", type=int, default=3, help="Number of disks (2-10)")
        parser.add_argument(
            "--want",
            choices=[SIMPLY_CONNECTED, ANY],
            default=SIMPLY_CONNECTED,
            help="Required topology",
        )
        parser.add_argument("--folds", type=int, default=0, help="Random fold lines to add")

    def run(self, scene, options):
        try:
            surf = Surface(options["surface"])
        except ValueError:
            raise UnknownSurface(f"unknown surface {options['surface']!r}")
        generated = random_scene(
            surf,
            options["disks"],
            self.seed(None, options),
            want=options["want"],
            folds=options["folds"],
            tol=self.tolerances(options),
        )
        self.emit(serialize_scene(generated), options)
        return None, None
