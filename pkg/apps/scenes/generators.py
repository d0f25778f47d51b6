"""
Seeded random scenes and fold lines.

Disks are attached one at a time, each overlapping a disk already placed
(neither containing nor contained in it), so the union stays connected.
Candidates that fail strict validation or have the wrong topology are
rejected and resampled from the same generator, which keeps the output a
pure function of the seed.

Usage:
    scene = random_scene(Surface.HYPERBOLIC, k=5, seed=7)
    scene = random_scene(Surface.EUCLIDEAN, k=3, seed=1, folds=2)
"""

import logging
import math
from typing import List, Optional, Tuple

import numpy as np
from django.conf import settings

from apps.core.tolerances import Tolerances, resolve
from apps.geometry.ball_union import BallConfiguration, topology, validate
from apps.geometry.exceptions import GeometryError
from apps.geometry.kernel import Disk, Surface, TWO_PI, isometry_to, rotation

from .exceptions import GenerationFailure
from .scene import ContractionSpec, Scene, scene_from_config

logger = logging.getLogger(__name__)

SIMPLY_CONNECTED = "simply_connected"
ANY = "any"

DEFAULT_RADII = {
    Surface.EUCLIDEAN: (0.5, 1.5),
    Surface.SPHERICAL: (0.2, 0.8),
    Surface.HYPERBOLIC: (0.3, 1.0),
}


def point_at(surf: Surface, d: float) -> np.ndarray:
    """Point at distance d from the base point along the first axis."""
    if surf is Surface.EUCLIDEAN:
        return np.array([d, 0.0])
    if surf is Surface.SPHERICAL:
        return np.array([math.sin(d), 0.0, math.cos(d)])
    return np.array([math.sinh(d), 0.0, math.cosh(d)])


def offset(surf: Surface, c, d: float, theta: float) -> np.ndarray:
    """Point at distance d from c in direction theta."""
    move = isometry_to(surf, c).compose(rotation(surf, theta))
    return move.apply(point_at(surf, d))


def _candidate(
    surf: Surface, rng: np.random.Generator, k: int, radii: Tuple[float, float]
) -> BallConfiguration:
    lo, hi = radii
    disks = [Disk(point_at(surf, 0.0), float(rng.uniform(lo, hi)))]
    for _ in range(k - 1):
        anchor = disks[int(rng.integers(len(disks)))]
        r = float(rng.uniform(lo, hi))
        near, far = abs(anchor.radius - r), anchor.radius + r
        if surf is Surface.SPHERICAL:
            far = min(far, math.pi - 1e-3)
        d = float(rng.uniform(near + 0.1 * (far - near), far - 0.1 * (far - near)))
        theta = float(rng.uniform(0.0, TWO_PI))
        disks.append(Disk(offset(surf, anchor.center, d, theta), r))
    return BallConfiguration(surf, tuple(disks))


def random_config(
    surf: Surface,
    k: int,
    seed: int,
    want: str = SIMPLY_CONNECTED,
    radii: Optional[Tuple[float, float]] = None,
    tol: Optional[Tolerances] = None,
) -> BallConfiguration:
    if not 2 <= k <= 10:
        raise GenerationFailure(f"k={k} is outside 2..10")
    if want not in (SIMPLY_CONNECTED, ANY):
        raise GenerationFailure(f"unknown topology request {want!r}")
    tol = resolve(tol)
    radii = radii or DEFAULT_RADII[surf]
    attempts = getattr(settings, "SCENE_GENERATION_ATTEMPTS", 10_000)
    rng = np.random.default_rng(seed)
    for attempt in range(attempts):
        config = _candidate(surf, rng, k, radii)
        try:
            poly = validate(config, strict=True, tol=tol)
        except GeometryError as exc:
            logger.debug("rejected candidate %d: %s", attempt, exc.code)
            continue
        if poly.dropped:
            continue
        if want == SIMPLY_CONNECTED and not topology(poly).simply_connected:
            continue
        return config
    raise GenerationFailure(f"no {want} scene with {k} disks after {attempts} attempts")


def random_fold_lines(
    surf: Surface, config: BallConfiguration, count: int, rng: np.random.Generator
) -> ContractionSpec:
    """Fold lines passing through the disks of the configuration."""
    pairs = []
    for _ in range(count):
        disk = config.disks[int(rng.integers(len(config.disks)))]
        p = offset(
            surf,
            disk.center,
            float(rng.uniform(0.0, disk.radius)),
            float(rng.uniform(0.0, TWO_PI)),
        )
        q = offset(surf, p, 0.5, float(rng.uniform(0.0, TWO_PI)))
        pairs.append((tuple(float(x) for x in p), tuple(float(x) for x in q)))
    return ContractionSpec("folds", tuple(pairs))


def random_scene(
    surf: Surface,
    k: int,
    seed: int,
    want: str = SIMPLY_CONNECTED,
    folds: int = 0,
    radii: Optional[Tuple[float, float]] = None,
    tol: Optional[Tolerances] = None,
) -> Scene:
    config = random_config(surf, k, seed, want, radii, tol)
    contraction = None
    if folds:
        rng = np.random.default_rng([seed, 1])
        contraction = random_fold_lines(surf, config, folds, rng)
    label = f"random-{surf.value}-{k}-{seed}"
    logger.debug("generated %s", label)
    return scene_from_config(config, label=label, seed=seed, contraction=contraction)


def ring_config(
    surf: Surface, k: int = 6, ring: float = 1.0, radius: float = 0.6
) -> BallConfiguration:
    """k equal disks on a circle around the base point, enclosing one hole."""
    centers = [offset(surf, point_at(surf, 0.0), ring, TWO_PI * j / k) for j in range(k)]
    return BallConfiguration(surf, tuple(Disk(c, radius) for c in centers))


def ring_scene(surf: Surface, k: int = 6, ring: float = 1.0, radius: float = 0.6) -> Scene:
    return scene_from_config(ring_config(surf, k, ring, radius), label=f"ring-{surf.value}-{k}")


def random_fold_count(rng: np.random.Generator, most: int = 4) -> int:
    return int(rng.integers(1, most + 1))


def sample_interior_points(
    config: BallConfiguration, rng: np.random.Generator, n: int
) -> List[np.ndarray]:
    """Points strictly inside the disks, for relative central-set checks."""
    points = []
    for _ in range(n):
        disk = config.disks[int(rng.integers(len(config.disks)))]
        d = float(rng.uniform(0.0, 0.95 * disk.radius))
        points.append(offset(config.surface, disk.center, d, float(rng.uniform(0.0, TWO_PI))))
    return points
