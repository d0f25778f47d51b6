"""
Kneser-Poulsen verdicts for a disk union and a contraction.

`kp_verify` compares the area of U with the area of its image. For a piecewise
isometry f the image is the union of the central-set vertex disks moved by f;
for a bare center map it is V, the union of the moved disks. Exact
areas come from the boundary arrangement; when the image configuration is
degenerate (tangent or concurrent circles) its area is estimated by Monte
Carlo and the verdict carries the sampling uncertainty:

- holds:         area_after <= area(U) + eps_area (exact), or the upper
                 confidence bound is below it (Monte Carlo)
- violated:      the exact excess, or the lower confidence bound, is above eps_area
- inconclusive:  the confidence interval straddles the bound

The area of V is always reported as `area_rearranged`, and for piecewise
isometries the images of the refined central-set vertex disks (U_f) as
`area_after_superset`.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple, Union

import numpy as np
from django.conf import settings

from apps.contraction.piecewise import (
    CenterMap,
    PiecewiseIsometry,
    is_contractive,
    pw_apply,
    pw_validate,
    refine_complex,
)
from apps.core.tolerances import Tolerances, resolve
from apps.geometry.ball_union import (
    BallConfiguration,
    BallPolytope,
    contains_many,
    intersection_area_sphere,
    union_area,
    validate,
)
from apps.geometry.central_set import central_set
from apps.geometry.exceptions import GeometryError, NonSphericalSurface
from apps.geometry.kernel import Disk, Surface, TWO_PI, isometry_to, ensure_same_surface
from apps.geometry.subcomplex import covering_center

from .exceptions import NotAContraction, ValidationFailure
from .montecarlo import (
    DiskUnionMembership,
    MonteCarloEstimate,
    SphereWindow,
    mc_area,
    window_for,
)

logger = logging.getLogger(__name__)

Contraction = Union[PiecewiseIsometry, CenterMap]


class Verdict(str, Enum):
    HOLDS = "holds"
    VIOLATED = "violated"
    INCONCLUSIVE = "inconclusive"

    @property
    def exit_code(self) -> int:
        return {"holds": 0, "violated": 2, "inconclusive": 3}[self.value]


@dataclass(frozen=True, eq=False)
class KPInstance:
    polytope: BallPolytope
    contraction: Contraction
    label: str = ""

    @property
    def surface(self) -> Surface:
        return self.polytope.surface


@dataclass(frozen=True)
class AuditEntry:
    quantity: str
    exact: float
    estimate: MonteCarloEstimate
    agrees: bool

    def as_dict(self):
        return {
            "quantity": self.quantity,
            "exact": self.exact,
            "estimate": self.estimate.as_dict(),
            "agrees": self.agrees,
        }


@dataclass
class KPReport:
    surface: Surface
    label: str
    area_before: float
    area_after: float
    area_after_method: str
    contractive: bool
    excess: float
    verdict: Verdict
    residual: float
    area_after_estimate: Optional[MonteCarloEstimate] = None
    area_after_set: str = "rearranged_disks"
    area_rearranged: Optional[float] = None
    area_after_superset: Optional[float] = None
    notes: List[str] = field(default_factory=list)
    audit: List[AuditEntry] = field(default_factory=list)

    def as_dict(self):
        return {
            "surface": self.surface.value,
            "label": self.label,
            "area_before": self.area_before,
            "area_after": self.area_after,
            "area_after_method": self.area_after_method,
            "area_after_estimate": (
                self.area_after_estimate.as_dict() if self.area_after_estimate else None
            ),
            "area_after_set": self.area_after_set,
            "area_rearranged": self.area_rearranged,
            "area_after_superset": self.area_after_superset,
            "contractive": self.contractive,
            "excess": self.excess,
            "verdict": self.verdict.value,
            "residual": self.residual,
            "notes": list(self.notes),
            "audit": [entry.as_dict() for entry in self.audit],
        }


def _sigma_bound() -> float:
    return float(getattr(settings, "KP_SIGMA_BOUND", 4.0))


def center_map_for(inst: KPInstance, tol: Optional[Tolerances] = None) -> CenterMap:
    """The contraction restricted to the centers of the original disks."""
    config = inst.polytope.config
    ensure_same_surface(config.surface, inst.contraction.surface)
    centers = [d.center for d in config.disks]
    if isinstance(inst.contraction, PiecewiseIsometry):
        return CenterMap.from_piecewise(inst.contraction, centers, tol)
    try:
        images = [inst.contraction.image_of(c) for c in centers]
    except GeometryError:
        raise ValidationFailure("the center map does not move every disk center")
    return CenterMap(config.surface, tuple(centers), tuple(images))


def image_config(config: BallConfiguration, m: CenterMap) -> BallConfiguration:
    return BallConfiguration(
        config.surface,
        tuple(Disk(image, disk.radius) for image, disk in zip(m.images, config.disks)),
    )


def exact_or_estimated_area(
    config: BallConfiguration,
    n: Optional[int],
    seed: Optional[int],
    tol: Tolerances,
) -> Tuple[float, str, Optional[MonteCarloEstimate]]:
    """Exact union area of a derived configuration, else a Monte Carlo estimate."""
    try:
        return union_area(validate(config, strict=False, tol=tol)), "exact", None
    except GeometryError as exc:
        logger.info("exact area unavailable (%s), falling back to sampling", exc.code)
        estimate = mc_area(
            config.surface, DiskUnionMembership(config), window_for(config), n, seed
        )
        return estimate.mean, "monte_carlo", estimate


def _verdict(after: float, before: float, estimate, tol: Tolerances, reverse=False):
    """Compare after with before; `reverse` checks after >= before instead."""
    sign = -1.0 if reverse else 1.0
    excess = sign * (after - before)
    if estimate is None:
        return Verdict.HOLDS if excess <= tol.area else Verdict.VIOLATED
    spread = _sigma_bound() * estimate.std_error
    if excess - spread > tol.area:
        return Verdict.VIOLATED
    if excess + spread <= tol.area:
        return Verdict.HOLDS
    return Verdict.INCONCLUSIVE


def audit_area(
    quantity: str, config: BallConfiguration, exact: float, n=None, seed=None
) -> AuditEntry:
    estimate = mc_area(
        config.surface, DiskUnionMembership(config), window_for(config), n, seed
    )
    agrees = estimate.within(exact, _sigma_bound())
    if not agrees:
        logger.warning(
            "self-audit: %s exact %.6f vs sampled %.6f +- %.2g",
            quantity,
            exact,
            estimate.mean,
            estimate.std_error,
        )
    return AuditEntry(quantity, exact, estimate, agrees)


def _vertex_images(f: PiecewiseIsometry, cc, tol) -> BallConfiguration:
    return BallConfiguration(
        cc.surface,
        tuple(Disk(pw_apply(f, v.point, tol), float(v.radius)) for v in cc.vertices),
    )


def vertex_image_config(
    f: PiecewiseIsometry, poly: BallPolytope, tol: Optional[Tolerances] = None
) -> BallConfiguration:
    """Images of the central-set vertex disks; the verdict is taken on their union."""
    return _vertex_images(f, central_set(poly, tol), tol)


def superset_config(
    f: PiecewiseIsometry, poly: BallPolytope, tol: Optional[Tolerances] = None
) -> BallConfiguration:
    """Images of the refined central-set vertex disks (the union U_f)."""
    return _vertex_images(f, refine_complex(f, central_set(poly, tol), tol).complex, tol)


def kp_verify(
    inst: KPInstance,
    n: Optional[int] = None,
    seed: Optional[int] = None,
    oracle: bool = False,
    tol: Optional[Tolerances] = None,
) -> KPReport:
    tol = resolve(tol)
    poly = inst.polytope
    if not isinstance(poly, BallPolytope):
        raise ValidationFailure("the instance carries an unvalidated configuration")
    notes: List[str] = []

    if isinstance(inst.contraction, PiecewiseIsometry):
        validation = pw_validate(inst.contraction, samples=32, tol=tol)
        if not validation.valid:
            raise ValidationFailure(
                "piecewise isometry failed validation: "
                + "; ".join(d.detail for d in validation.defects[:3])
            )

    m = center_map_for(inst, tol)
    check = is_contractive(poly.surface, m, tol)
    if not check.contractive:
        raise NotAContraction(
            f"centers {check.witness[0]} and {check.witness[1]} move apart by {check.excess:.6g}",
            indices=check.witness,
            excess=check.excess,
        )

    before = union_area(poly)
    moved = image_config(poly.config, m)
    rearranged, rearranged_method, rearranged_estimate = exact_or_estimated_area(
        moved, n, seed, tol
    )
    target, target_set = moved, "rearranged_disks"
    after, method, estimate = rearranged, rearranged_method, rearranged_estimate
    superset = None
    if isinstance(inst.contraction, PiecewiseIsometry):
        try:
            target = vertex_image_config(inst.contraction, poly, tol)
            after, method, estimate = exact_or_estimated_area(target, n, seed, tol)
            target_set = "central_set_vertices"
            notes.append(
                "area_after measures the images of the central-set vertex disks; "
                "area_rearranged is the union of the moved disks"
            )
        except GeometryError as exc:
            target = moved
            notes.append(
                f"central-set images unavailable ({exc.code}); verdict on the moved disks"
            )
        try:
            superset = exact_or_estimated_area(
                superset_config(inst.contraction, poly, tol), n, seed, tol
            )[0]
        except GeometryError as exc:
            notes.append(f"U_f unavailable: {exc.code}")
    verdict = _verdict(after, before, estimate, tol)
    if method == "monte_carlo":
        notes.append("image configuration is degenerate; area_after is a Monte Carlo estimate")

    audit = []
    if oracle:
        audit.append(audit_area("area_before", poly.config, before, n, seed))
        if method == "exact":
            audit.append(audit_area("area_after", target, after, n, seed))

    report = KPReport(
        surface=poly.surface,
        label=inst.label,
        area_before=before,
        area_after=after,
        area_after_method=method,
        area_after_estimate=estimate,
        area_after_set=target_set,
        area_rearranged=rearranged,
        area_after_superset=superset,
        contractive=True,
        excess=check.excess,
        verdict=verdict,
        residual=after - before,
        notes=notes,
        audit=audit,
    )
    logger.info(
        "kp_verify %s: before=%.6f after=%.6f (%s) -> %s",
        inst.label or poly.surface.value,
        before,
        after,
        method,
        verdict.value,
    )
    return report


# ----------------------------------------------------------------------
# Inclusion of the rearranged disks in U_f
# ----------------------------------------------------------------------


def sample_disk(surf: Surface, disk: Disk, rng: np.random.Generator, n: int) -> np.ndarray:
    """Uniform points of a geodesic disk."""
    u = rng.uniform(size=n)
    r = disk.radius
    if surf is Surface.EUCLIDEAN:
        rho = r * np.sqrt(u)
    elif surf is Surface.SPHERICAL:
        rho = np.arccos(1.0 - u * (1.0 - math.cos(r)))
    else:
        rho = np.arccosh(1.0 + u * (math.cosh(r) - 1.0))
    theta = rng.uniform(0.0, TWO_PI, size=n)
    if surf is Surface.EUCLIDEAN:
        local = np.column_stack([rho * np.cos(theta), rho * np.sin(theta)])
    elif surf is Surface.SPHERICAL:
        local = np.column_stack(
            [np.sin(rho) * np.cos(theta), np.sin(rho) * np.sin(theta), np.cos(rho)]
        )
    else:
        local = np.column_stack(
            [np.sinh(rho) * np.cos(theta), np.sinh(rho) * np.sin(theta), np.cosh(rho)]
        )
    return isometry_to(surf, disk.center).apply_many(local)


@dataclass
class InclusionReport:
    included: bool
    samples: int
    violations: int
    witness: Optional[np.ndarray] = None
    covering: List[dict] = field(default_factory=list)

    def as_dict(self):
        return {
            "included": self.included,
            "samples": self.samples,
            "violations": self.violations,
            "witness": None if self.witness is None else [float(x) for x in self.witness],
            "covering": list(self.covering),
        }


def inclusion_check(
    inst: KPInstance,
    n: int = 100_000,
    seed: Optional[int] = None,
    tol: Optional[Tolerances] = None,
) -> InclusionReport:
    """Sample the rearranged disks and test each point against U_f."""
    tol = resolve(tol)
    if not isinstance(inst.contraction, PiecewiseIsometry):
        raise ValidationFailure("inclusion needs a piecewise isometry, not a center map")
    if seed is None:
        seed = getattr(settings, "KP_DEFAULT_SEED", 0)
    poly = inst.polytope
    surf = poly.surface
    f = inst.contraction
    cc = central_set(poly, tol)
    superset = superset_config(f, poly, tol)
    moved = image_config(poly.config, center_map_for(inst, tol))

    weights = np.array([d.radius for d in moved.disks]) ** 2
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(n, weights / weights.sum())
    chunks = [sample_disk(surf, d, rng, int(k)) for d, k in zip(moved.disks, counts) if k]
    P = np.vstack(chunks) if chunks else np.zeros((0, surf.dim))
    outside = ~contains_many(superset, P, slack=1e3 * tol.pred)

    covering = []
    for i, disk in enumerate(poly.config.disks):
        found = covering_center(cc, disk, tol)
        covering.append({"disk": i, **found.as_dict()})

    witness = P[int(np.argmax(outside))] if outside.any() else None
    return InclusionReport(
        included=not outside.any(),
        samples=len(P),
        violations=int(outside.sum()),
        witness=witness,
        covering=covering,
    )


# ----------------------------------------------------------------------
# Spherical intersections
# ----------------------------------------------------------------------


class _IntersectionMembership:
    def __init__(self, config: BallConfiguration):
        self.config = config

    def __call__(self, P: np.ndarray) -> np.ndarray:
        inside = np.ones(len(P), dtype=bool)
        for disk in self.config.disks:
            inside &= contains_many(BallConfiguration(self.config.surface, (disk,)), P)
        return inside


def kp_verify_intersection(
    config: BallConfiguration,
    m: CenterMap,
    n: Optional[int] = None,
    seed: Optional[int] = None,
    tol: Optional[Tolerances] = None,
    label: str = "",
) -> KPReport:
    """Intersection area of spherical disks must not decrease under a contraction."""
    tol = resolve(tol)
    if config.surface is not Surface.SPHERICAL:
        raise NonSphericalSurface()
    images = tuple(m.image_of(d.center) for d in config.disks)
    centers = CenterMap(config.surface, tuple(d.center for d in config.disks), images)
    check = is_contractive(config.surface, centers, tol)
    if not check.contractive:
        raise NotAContraction(indices=check.witness, excess=check.excess)

    before = intersection_area_sphere(config, tol=tol)
    moved = image_config(config, centers)
    estimate = None
    try:
        after = intersection_area_sphere(moved, strict=False, tol=tol)
        method = "exact"
    except GeometryError:
        estimate = mc_area(
            config.surface, _IntersectionMembership(moved), SphereWindow(), n, seed
        )
        after, method = estimate.mean, "monte_carlo"
    verdict = _verdict(after, before, estimate, tol, reverse=True)
    return KPReport(
        surface=config.surface,
        label=label,
        area_before=before,
        area_after=after,
        area_after_method=method,
        area_after_estimate=estimate,
        contractive=True,
        excess=check.excess,
        verdict=verdict,
        residual=after - before,
        notes=["intersection areas: the verdict requires area_after >= area_before"],
    )
