"""
Celery tasks for long verification runs.

Tasks:
- run_kp_sweep: random Kneser-Poulsen sweep on one surface, recorded as a
  VerificationRun.
"""

import logging

from celery import shared_task

from apps.core.logging_utils import memory_summary
from apps.geometry.kernel import Surface

from .models import VerificationRun
from .sweep import run_sweep

logger = logging.getLogger(__name__)


@shared_task(bind=True, time_limit=3600)
def run_kp_sweep(self, surface, count=200, seed=0, max_disks=6, max_folds=4, samples=None):
    """Run a sweep and return its summary.

    Args:
        surface: "euclidean", "spherical" or "hyperbolic".
        count: Number of random instances.
        seed: Master seed; instance i is replayable from (seed, i).
        samples: Monte Carlo budget for degenerate image configurations.

    Returns:
        dict: Summary counts and per-instance verdicts.
    """
    task_id = ""
    try:
        task_id = self.request.id or ""
    except AttributeError:
        pass

    logger.info(
        "run_kp_sweep START surface=%s count=%s seed=%s task_id=%s | %s",
        surface,
        count,
        seed,
        task_id or "<sync>",
        memory_summary(),
    )
    surf = Surface(surface)
    run = VerificationRun.start("kp_sweep", surf.value, seed=seed, celery_task_id=task_id)
    try:
        summary = run_sweep(surf, count, seed, max_disks, max_folds, samples)
    except Exception:
        logger.exception("run_kp_sweep failed")
        if run is not None:
            run.finish("error", failed=True)
        raise

    result = summary.as_dict()
    verdict = "violated" if result["violated"] else "holds"
    if run is not None:
        run.finish(verdict, result)
    logger.info("run_kp_sweep DONE surface=%s verdict=%s", surf.value, verdict)
    return result
