"""
Peel certificate for a simply connected union.

The central set of a simply connected union is a tree. After refining it so
the contraction is an isometry on every edge, leaf edges are peeled one at a
time (smallest leaf vertex first, compared lexicographically by coordinates).
Each step removes a leaf edge Y from the current subcomplex X, leaving
X' = X minus the leaf, with X' n Y a single hinge vertex. Because f is an
isometry on Y and the hinge disks are congruent,

    A(U_{X,f}) - A(U_{X',f})  <=  A(U_X) - A(U_{X'})

and the chain of these inequalities telescopes to A(U_f) <= A(U).

Usage:
    certificate = peel_certificate(central_set(poly), f)
    certificate.verdict, [step.as_dict() for step in certificate.steps]
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Tuple

import numpy as np
from django.conf import settings

from apps.contraction.piecewise import PiecewiseIsometry, pw_apply, refine_complex
from apps.core.tolerances import Tolerances, resolve
from apps.geometry.ball_union import union_area
from apps.geometry.central_set import CentralComplex
from apps.geometry.kernel import distances
from apps.geometry.subcomplex import (
    SubCentralSetReport,
    Subcomplex,
    sub_central_set_check,
    sub_union,
)

from .exceptions import NotATree, RefinementFailure
from .splitting import image_union
from .verification import Verdict, exact_or_estimated_area

logger = logging.getLogger(__name__)


@dataclass
class PeelStep:
    leaf: int
    edge: int
    hinge: int
    remaining: Subcomplex
    hinge_radius_before: float
    hinge_radius_after: float
    delta_before: float
    delta_after: float
    closes: bool
    sub_check: SubCentralSetReport

    def as_dict(self):
        return {
            "leaf": self.leaf,
            "edge": self.edge,
            "hinge": self.hinge,
            "remaining": self.remaining.as_dict(),
            "hinge_radius_before": self.hinge_radius_before,
            "hinge_radius_after": self.hinge_radius_after,
            "delta_before": self.delta_before,
            "delta_after": self.delta_after,
            "closes": self.closes,
            "sub_check": self.sub_check.as_dict(),
        }


@dataclass
class Certificate:
    steps: List[PeelStep]
    verdict: Verdict
    area_before: float
    area_after: float
    refined_edges: int
    notes: List[str] = field(default_factory=list)

    def as_dict(self):
        return {
            "steps": [step.as_dict() for step in self.steps],
            "verdict": self.verdict.value,
            "area_before": self.area_before,
            "area_after": self.area_after,
            "refined_edges": self.refined_edges,
            "notes": list(self.notes),
        }


def _smallest_leaf(cc: CentralComplex, X: Subcomplex) -> int:
    return min(X.leaves(), key=lambda n: (tuple(np.round(cc.vertices[n].point, 9)), n))


class _Areas:
    """Cached areas of U_X and U_{X,f}, keyed by vertex set."""

    def __init__(self, cc, f, n, seed, tol):
        self.cc, self.f, self.n, self.seed, self.tol = cc, f, n, seed, tol
        self.cache: Dict[Tuple[bool, FrozenSet[int]], Tuple[float, float]] = {}

    def __call__(self, X: Subcomplex, image: bool) -> Tuple[float, float]:
        """(area, standard error); the error is 0 for exact areas."""
        key = (image, X.vertices)
        if key not in self.cache:
            if image:
                config = image_union(self.cc, X, self.f, self.tol)
            else:
                config = sub_union(self.cc, X)
            value, _, estimate = exact_or_estimated_area(
                config, self.n, self.seed, self.tol
            )
            self.cache[key] = (value, estimate.std_error if estimate else 0.0)
        return self.cache[key]


def peel_certificate(
    cc: CentralComplex,
    f: PiecewiseIsometry,
    n: Optional[int] = None,
    seed: Optional[int] = None,
    tol: Optional[Tolerances] = None,
) -> Certificate:
    tol = resolve(tol)
    if not cc.is_tree():
        raise NotATree(f"central set has Euler characteristic {cc.euler_characteristic}")
    refined = refine_complex(f, cc, tol)
    bad = refined.non_isometric_edges(tol)
    if bad:
        raise RefinementFailure(indices=bad)

    rc = refined.complex
    surf = rc.surface
    sigmas = float(getattr(settings, "KP_SIGMA_BOUND", 4.0))
    limit = 1e3 * tol.pred
    areas = _Areas(rc, f, n, seed, tol)

    steps: List[PeelStep] = []
    X = Subcomplex.whole(rc)
    while X.edges:
        leaf = _smallest_leaf(rc, X)
        edge_index = X.leaf_edge(leaf)
        edge = rc.edges[edge_index]
        hinge = edge.v if edge.u == leaf else edge.u
        remaining = X.without_leaf(leaf)

        iso = refined.edge_isometry(edge_index)
        hinge_point = rc.vertices[hinge].point
        corner = rc.sites[edge.corners[0]]
        radius_before = float(distances(surf, hinge_point[None, :], corner)[0])
        radius_after = float(
            distances(surf, pw_apply(f, hinge_point, tol)[None, :], iso.apply(corner))[0]
        )
        if abs(radius_before - radius_after) > limit:
            raise RefinementFailure(
                f"hinge disk at vertex {hinge} is not congruent to its image",
                indices=[hinge],
            )

        whole_before, err_a = areas(X, image=False)
        rest_before, err_b = areas(remaining, image=False)
        whole_after, err_c = areas(X, image=True)
        rest_after, err_d = areas(remaining, image=True)
        delta_before = whole_before - rest_before
        delta_after = whole_after - rest_after
        spread = sigmas * (err_a + err_b + err_c + err_d)
        closes = delta_after <= delta_before + tol.area + spread

        step = PeelStep(
            leaf=leaf,
            edge=edge_index,
            hinge=hinge,
            remaining=remaining,
            hinge_radius_before=radius_before,
            hinge_radius_after=radius_after,
            delta_before=delta_before,
            delta_after=delta_after,
            closes=closes,
            sub_check=sub_central_set_check(rc, remaining, tol),
        )
        logger.debug(
            "peel leaf %d via edge %d at hinge %d: %.6f vs %.6f",
            leaf,
            edge_index,
            hinge,
            delta_after,
            delta_before,
        )
        steps.append(step)
        X = remaining

    notes = [
        f"sub central set mismatch after peeling leaf {step.leaf}"
        for step in steps
        if not step.sub_check.matches
    ]
    area_after = areas(Subcomplex.whole(rc), image=True)[0]
    verdict = Verdict.HOLDS if all(s.closes for s in steps) else Verdict.VIOLATED
    logger.info("peel certificate: %d steps -> %s", len(steps), verdict.value)
    return Certificate(
        steps=steps,
        verdict=verdict,
        area_before=union_area(cc.polytope),
        area_after=area_after,
        refined_edges=len(rc.edges),
        notes=notes,
    )
