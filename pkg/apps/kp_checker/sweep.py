"""
Random Kneser-Poulsen sweeps.

Each instance is a simply connected random scene with a composition of one
to four random folds. It is verified with `kp_verify`, and whenever the
central set is a tree the peel certificate is produced as well and its
verdict compared with the direct one.

Instance i of a sweep with master seed s uses the scene seed
`SeedSequence([s, i])`, so any instance can be replayed on its own.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from apps.core.logging_utils import RunTimer, memory_summary
from apps.core.tolerances import Tolerances, resolve
from apps.geometry.ball_union import validate
from apps.geometry.central_set import central_set
from apps.geometry.exceptions import GeometryError
from apps.geometry.kernel import Surface
from apps.scenes.generators import random_fold_count, random_scene

from .certificate import peel_certificate
from .verification import KPInstance, Verdict, kp_verify

logger = logging.getLogger(__name__)


@dataclass
class SweepInstance:
    index: int
    seed: int
    disks: int
    folds: int
    verdict: Optional[str] = None
    certificate: Optional[str] = None
    agrees: Optional[bool] = None
    error: Optional[str] = None

    def as_dict(self):
        return {
            "index": self.index,
            "seed": self.seed,
            "disks": self.disks,
            "folds": self.folds,
            "verdict": self.verdict,
            "certificate": self.certificate,
            "agrees": self.agrees,
            "error": self.error,
        }


@dataclass
class SweepSummary:
    surface: Surface
    seed: int
    instances: List[SweepInstance] = field(default_factory=list)

    @property
    def counts(self) -> Counter:
        return Counter(i.verdict or "error" for i in self.instances)

    @property
    def disagreements(self) -> int:
        return sum(1 for i in self.instances if i.agrees is False)

    @property
    def conclusive(self) -> int:
        counts = self.counts
        return counts[Verdict.HOLDS.value] + counts[Verdict.VIOLATED.value]

    @property
    def inconclusive_rate(self) -> float:
        verified = sum(1 for i in self.instances if i.verdict is not None)
        return self.counts[Verdict.INCONCLUSIVE.value] / verified if verified else 0.0

    def as_dict(self):
        counts = self.counts
        return {
            "surface": self.surface.value,
            "seed": self.seed,
            "count": len(self.instances),
            "holds": counts[Verdict.HOLDS.value],
            "violated": counts[Verdict.VIOLATED.value],
            "inconclusive": counts[Verdict.INCONCLUSIVE.value],
            "errors": counts["error"],
            "disagreements": self.disagreements,
            "instances": [i.as_dict() for i in self.instances],
        }


def instance_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([seed, index]).generate_state(1)[0])


def run_instance(
    surf: Surface,
    index: int,
    seed: int,
    max_disks: int = 6,
    max_folds: int = 4,
    samples: Optional[int] = None,
    certify: bool = True,
    tol: Optional[Tolerances] = None,
) -> SweepInstance:
    tol = resolve(tol)
    local = instance_seed(seed, index)
    rng = np.random.default_rng(local)
    k = int(rng.integers(2, max_disks + 1))
    folds = random_fold_count(rng, max_folds)
    record = SweepInstance(index=index, seed=local, disks=k, folds=folds)
    try:
        scene = random_scene(surf, k, local, folds=folds, tol=tol)
        poly = validate(scene.config, strict=True, tol=tol)
        f = scene.build_contraction(tol)
        report = kp_verify(KPInstance(poly, f, scene.label), n=samples, seed=local, tol=tol)
        record.verdict = report.verdict.value
        if certify:
            cc = central_set(poly, tol)
            if cc.is_tree():
                certificate = peel_certificate(cc, f, n=samples, seed=local, tol=tol)
                record.certificate = certificate.verdict.value
                if Verdict.INCONCLUSIVE not in (report.verdict, certificate.verdict):
                    record.agrees = certificate.verdict is report.verdict
    except GeometryError as exc:
        logger.warning("sweep instance %d (seed %d) failed: %s", index, local, exc.code)
        record.error = exc.code
    except Exception as exc:
        logger.exception("sweep instance %d (seed %d) crashed", index, local)
        record.error = type(exc).__name__
    return record


def run_sweep(
    surf: Surface,
    count: int,
    seed: int = 0,
    max_disks: int = 6,
    max_folds: int = 4,
    samples: Optional[int] = None,
    certify: bool = True,
    tol: Optional[Tolerances] = None,
) -> SweepSummary:
    timer = RunTimer()
    logger.info("kp sweep on %s: %d instances, seed %d, %s", surf.value, count, seed, memory_summary())
    summary = SweepSummary(surf, seed)
    for index in range(count):
        summary.instances.append(
            run_instance(surf, index, seed, max_disks, max_folds, samples, certify, tol)
        )
    counts = summary.counts
    logger.info(
        "kp sweep finished: %d holds, %d violated, %d inconclusive, %d errors, "
        "%d disagreements, %s",
        counts[Verdict.HOLDS.value],
        counts[Verdict.VIOLATED.value],
        counts[Verdict.INCONCLUSIVE.value],
        counts["error"],
        summary.disagreements,
        timer.summary(),
    )
    return summary
