"""
Monte Carlo area oracle.

Samples a finite window uniformly and counts hits of a vectorized membership
predicate. The sample budget is split into chunks; each chunk draws from its
own stream spawned from the master seed (`SeedSequence(seed).spawn`), so a
result is bit-identical for a fixed (seed, chunks) no matter how many worker
threads run the chunks or in which order they finish.

Usage:
    member = DiskUnionMembership(config)
    window = window_for(config)
    estimate = mc_area(Surface.EUCLIDEAN, member, window, n=10**6, seed=0)
    estimate.mean, estimate.std_error
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from django.conf import settings

from apps.geometry.ball_union import BallConfiguration, contains_many
from apps.geometry.kernel import Surface, distances, ensure_same_surface

from .exceptions import WindowTooSmall

logger = logging.getLogger(__name__)

Membership = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class MonteCarloEstimate:
    mean: float
    std_error: float
    samples: int
    seed: int

    def within(self, value: float, sigmas: float) -> bool:
        return abs(self.mean - value) <= sigmas * self.std_error + 1e-12

    def as_dict(self):
        return {
            "mean": self.mean,
            "std_error": self.std_error,
            "samples": self.samples,
            "seed": self.seed,
        }


# ----------------------------------------------------------------------
# Windows
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class BoxWindow:
    lo: tuple
    hi: tuple
    surface: Surface = Surface.EUCLIDEAN

    @property
    def measure(self) -> float:
        return (self.hi[0] - self.lo[0]) * (self.hi[1] - self.lo[1])

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.uniform(self.lo, self.hi, size=(n, 2))

    def covers_disk(self, center, radius) -> bool:
        return (
            center[0] - radius >= self.lo[0]
            and center[1] - radius >= self.lo[1]
            and center[0] + radius <= self.hi[0]
            and center[1] + radius <= self.hi[1]
        )


@dataclass(frozen=True)
class SphereWindow:
    surface: Surface = Surface.SPHERICAL

    @property
    def measure(self) -> float:
        return 4.0 * math.pi

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        V = rng.normal(size=(n, 3))
        return V / np.linalg.norm(V, axis=1, keepdims=True)

    def covers_disk(self, center, radius) -> bool:
        return True


@dataclass(frozen=True)
class HyperbolicDiskWindow:
    """Geodesic disk of radius R about (0, 0, 1), sampled with density sinh(rho)."""

    radius: float
    surface: Surface = Surface.HYPERBOLIC

    @property
    def measure(self) -> float:
        return 2.0 * math.pi * (math.cosh(self.radius) - 1.0)

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        u = rng.uniform(size=n)
        rho = np.arccosh(1.0 + u * (math.cosh(self.radius) - 1.0))
        theta = rng.uniform(0.0, 2.0 * math.pi, size=n)
        return np.column_stack(
            [np.sinh(rho) * np.cos(theta), np.sinh(rho) * np.sin(theta), np.cosh(rho)]
        )

    def covers_disk(self, center, radius) -> bool:
        origin = np.array([0.0, 0.0, 1.0])
        reach = distances(self.surface, origin[None, :], center)[0] + radius
        return bool(reach <= self.radius)


def window_for(config: BallConfiguration, margin: float = 0.05):
    """Smallest convenient window containing every disk of the configuration."""
    surf = config.surface
    if surf is Surface.SPHERICAL:
        return SphereWindow()
    if surf is Surface.EUCLIDEAN:
        C, R = config.centers, config.radii[:, None]
        lo = (C - R).min(axis=0) - margin
        hi = (C + R).max(axis=0) + margin
        return BoxWindow(tuple(float(x) for x in lo), tuple(float(x) for x in hi))
    origin = np.array([0.0, 0.0, 1.0])
    reach = distances(surf, config.centers, origin) + config.radii
    return HyperbolicDiskWindow(float(reach.max()) + margin)


# ----------------------------------------------------------------------
# Membership predicates
# ----------------------------------------------------------------------


class DiskUnionMembership:
    """Closed union of a configuration's disks."""

    def __init__(self, config: BallConfiguration):
        self.config = config

    def __call__(self, P: np.ndarray) -> np.ndarray:
        return contains_many(self.config, P)

    def check_window(self, window) -> None:
        ensure_same_surface(self.config.surface, window.surface)
        for i, disk in enumerate(self.config.disks):
            if not window.covers_disk(disk.center, disk.radius):
                raise WindowTooSmall(f"disk {i} reaches outside the window", indices=[i])


class IntersectionMembership:
    def __init__(self, first: Membership, second: Membership):
        self.first, self.second = first, second

    def __call__(self, P: np.ndarray) -> np.ndarray:
        return self.first(P) & self.second(P)


class SymmetricDifferenceMembership:
    def __init__(self, first: Membership, second: Membership):
        self.first, self.second = first, second

    def __call__(self, P: np.ndarray) -> np.ndarray:
        return self.first(P) ^ self.second(P)


def empty_membership(P: np.ndarray) -> np.ndarray:
    return np.zeros(len(P), dtype=bool)


# ----------------------------------------------------------------------
# Estimation
# ----------------------------------------------------------------------


def mc_area(
    surf: Surface,
    member: Membership,
    window,
    n: Optional[int] = None,
    seed: Optional[int] = None,
    chunks: Optional[int] = None,
    workers: Optional[int] = None,
) -> MonteCarloEstimate:
    ensure_same_surface(surf, window.surface)
    if n is None:
        n = getattr(settings, "KP_MC_SAMPLES", 1_000_000)
    if seed is None:
        seed = getattr(settings, "KP_DEFAULT_SEED", 0)
    if chunks is None:
        chunks = getattr(settings, "KP_MC_CHUNKS", 8)
    if workers is None:
        workers = getattr(settings, "KP_MC_WORKERS", 4)
    if n <= 0:
        return MonteCarloEstimate(0.0, 0.0, 0, seed)
    if hasattr(member, "check_window"):
        member.check_window(window)

    chunks = max(1, min(chunks, n))
    sizes = [n // chunks + (1 if k < n % chunks else 0) for k in range(chunks)]
    streams = np.random.SeedSequence(seed).spawn(chunks)

    def run(k: int) -> int:
        rng = np.random.default_rng(streams[k])
        return int(np.count_nonzero(member(window.sample(rng, sizes[k]))))

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        hits = sum(pool.map(run, range(chunks)))

    fraction = hits / n
    mean = window.measure * fraction
    std_error = window.measure * math.sqrt(fraction * (1.0 - fraction) / n)
    logger.debug(
        "mc_area: %d/%d hits in %d chunks (seed %d) -> %.6f +- %.2g",
        hits,
        n,
        chunks,
        seed,
        mean,
        std_error,
    )
    return MonteCarloEstimate(mean, std_error, n, seed)


def mc_union_area(
    config: BallConfiguration, n: Optional[int] = None, seed: Optional[int] = None
) -> MonteCarloEstimate:
    return mc_area(config.surface, DiskUnionMembership(config), window_for(config), n, seed)
