"""
Shared plumbing for the scene-driven management commands.

Every command accepts the same flags:

    --scene PATH      scene document (JSON, version 1)
    --samples N       Monte Carlo budget (default KP_MC_SAMPLES)
    --seed S          master seed (default: the scene's seed, else KP_DEFAULT_SEED)
    --tolerance EPS   override eps_area for this run
    --out PATH        write the report (or figure) to a file instead of stdout
    --oracle          pair exact areas with Monte Carlo cross-checks
    --jitter          perturb radii deterministically to escape degeneracy

Reports are JSON with sorted keys. Errors are printed as
`{"status": "error", "error": {...}}` and end the command with exit status 1;
verification verdicts end it with 0 (holds), 2 (violated) or 3 (inconclusive).
"""

import json
import logging
from typing import Optional, Tuple

import numpy as np
from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from apps.core.tolerances import Tolerances
from apps.geometry.ball_union import BallPolytope, jitter, validate
from apps.geometry.exceptions import GeometryError

from .scene import Scene, load_scene, write_text

logger = logging.getLogger(__name__)


def _json_default(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def dump_report(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True, default=_json_default) + "\n"


class SceneCommand(BaseCommand):
    """Base for commands that read a scene and print a JSON report."""

    needs_scene = True
    # commands that produce a verdict are recorded as VerificationRun rows
    record_runs = False

    def add_arguments(self, parser):
        parser.add_argument("--scene", required=self.needs_scene, help="Scene file (JSON)")
        parser.add_argument("--samples", type=int, default=None, help="Monte Carlo samples")
        parser.add_argument("--seed", type=int, default=None, help="Master seed")
        parser.add_argument(
            "--tolerance", type=float, default=None, help="Override eps_area for this run"
        )
        parser.add_argument("--out", default=None, help="Write the output to this file")
        parser.add_argument(
            "--oracle", action="store_true", help="Cross-check exact areas by sampling"
        )
        parser.add_argument(
            "--jitter", action="store_true", help="Perturb radii to escape degeneracy"
        )
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    def run(self, scene: Optional[Scene], options) -> Tuple[dict, Optional[object]]:
        """Return (report, verdict); verdict is None for plain queries."""
        raise NotImplementedError

    # helpers --------------------------------------------------------------

    def tolerances(self, options) -> Tolerances:
        return Tolerances.from_settings().override(area=options.get("tolerance"))

    def seed(self, scene: Optional[Scene], options) -> int:
        if options.get("seed") is not None:
            return options["seed"]
        if scene is not None and scene.seed is not None:
            return scene.seed
        return getattr(settings, "KP_DEFAULT_SEED", 0)

    def polytope(self, scene: Scene, options) -> BallPolytope:
        """Validate the scene strictly, jittering the radii first if asked."""
        config = scene.config
        if options.get("jitter"):
            magnitude = getattr(settings, "KP_JITTER_MAGNITUDE", 1e-7)
            config = jitter(config, self.seed(scene, options), magnitude)
        return validate(config, strict=True, tol=self.tolerances(options))

    def emit(self, text: str, options):
        if options.get("out"):
            write_text(options["out"], text)
            self.stderr.write(self.style.SUCCESS(f"Wrote {options['out']}"))
        else:
            self.stdout.write(text, ending="")

    # entry point ------------------------------------------------------------

    def handle(self, *args, **options):
        from apps.kp_checker.models import VerificationRun

        command = self.__module__.rsplit(".", 1)[-1]
        scene = None
        run = None
        try:
            if options.get("scene"):
                scene = load_scene(options["scene"])
            if self.record_runs:
                run = VerificationRun.start(
                    command,
                    scene.surface.value if scene else "",
                    scene.label if scene else "",
                    self.seed(scene, options),
                )
            report, verdict = self.run(scene, options)
        except GeometryError as exc:
            logger.info("%s rejected input: %s %s", command, exc.code, exc.message)
            document = {"status": "error", "error": exc.as_dict()}
            if run is not None:
                run.finish("error", document, failed=True)
            self.stdout.write(dump_report(document), ending="")
            raise CommandError(f"{exc.code}: {exc.message}", returncode=1)
        except Exception as exc:
            logger.exception("%s failed unexpectedly", command)
            document = {
                "status": "error",
                "error": {
                    "code": "InternalError",
                    "message": f"{type(exc).__name__}: {exc}",
                    "indices": [],
                    "path": None,
                },
            }
            if run is not None:
                run.finish("error", document, failed=True)
            self.stdout.write(dump_report(document), ending="")
            raise CommandError(f"InternalError: {exc}", returncode=1)

        if report is not None:
            self.emit(dump_report(report), options)
        code = 0
        if verdict is not None:
            code = verdict.exit_code
            if run is not None:
                run.finish(verdict.value, json.loads(dump_report(report)))
        if code:
            raise CommandError(f"verdict: {verdict.value}", returncode=code)
