"""
Random Kneser-Poulsen sweep over one surface.

Usage:
    python manage.py kp_sweep --surface euclidean --count 200 --seed 0
    python manage.py kp_sweep --surface hyperbolic --count 200 --use-celery
"""

from apps.geometry.kernel import Surface
from apps.kp_checker.verification import Verdict
from apps.scenes.commands import SceneCommand
from apps.scenes.exceptions import UnknownSurface


class Command(SceneCommand):
    help = "Verify random simply connected scenes under random fold compositions"
    needs_scene = False

    def add_command_arguments(self, parser):
        parser.add_argument("--surface", default="euclidean")
        parser.add_argument("--count", type=int, default=200, help="Number of instances")
        parser.add_argument("--max-disks", type=int, default=6)
        parser.add_argument("--max-folds", type=int, default=4)
        parser.add_argument(
            "--use-celery",
            action="store_true",
            help="Run via Celery worker instead of synchronously",
        )

    def run(self, scene, options):
        from apps.kp_checker.tasks import run_kp_sweep

        try:
            surf = Surface(options["surface"])
        except ValueError:
            raise UnknownSurface(f"unknown surface {options['surface']!r}")
        kwargs = {
            "surface": surf.value,
            "count": options["count"],
            "seed": self.seed(None, options),
            "max_disks": options["max_disks"],
            "max_folds": options["max_folds"],
            "samples": options["samples"],
        }
        if options["use_celery"]:
            result = run_kp_sweep.delay(**kwargs)
            self.stderr.write(self.style.SUCCESS(f"Task submitted to Celery: {result.id}"))
            self.stderr.write("Monitor progress in Django Admin -> Verification runs.")
            return None, None

        summary = run_kp_sweep(**kwargs)
        bad = summary["violated"] or summary["disagreements"]
        return summary, Verdict.VIOLATED if bad else Verdict.HOLDS
