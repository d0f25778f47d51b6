"""
Numerical check of the splitting identity for a cover of the central set.

For closed subcomplexes X and Y with X u Y = C_U the union of maximal disks
satisfies

    A(U) = A(U_X) + A(U_Y) - A(U_{X n Y})

because U_X n U_Y = U_{X n Y}. When a piecewise isometry f is given, the
complex is first refined so f is an isometry on every edge, and the image
unions obey the inequality

    A(U_f) <= A(U_{X,f}) + A(U_{Y,f}) - A(U_{X n Y,f})

whose slack is reported together with the combined slack of the general
case.

Usage:
    report = split_check(cc, X, Y, f=fold(Surface.EUCLIDEAN, line))
    report.eq1_residual, report.eq2_slack
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Optional

from apps.contraction.piecewise import PiecewiseIsometry, pw_apply, refine_complex
from apps.core.tolerances import Tolerances, resolve
from apps.geometry.ball_union import BallConfiguration, union_area
from apps.geometry.central_set import CentralComplex
from apps.geometry.kernel import Disk
from apps.geometry.subcomplex import Subcomplex, sub_union

from .exceptions import NotACover
from .montecarlo import (
    DiskUnionMembership,
    IntersectionMembership,
    MonteCarloEstimate,
    SymmetricDifferenceMembership,
    mc_area,
    window_for,
)
from .verification import exact_or_estimated_area

logger = logging.getLogger(__name__)


@dataclass
class SplitReport:
    area_u: float
    area_x: float
    area_y: float
    area_xy: float
    eq1_residual: float
    symmetric_difference: MonteCarloEstimate
    area_u_f: Optional[float] = None
    area_x_f: Optional[float] = None
    area_y_f: Optional[float] = None
    area_xy_f: Optional[float] = None
    eq2_slack: Optional[float] = None
    general_case_slack: Optional[float] = None
    methods: Dict[str, str] = field(default_factory=dict)
    refined_edges: Optional[int] = None

    def consistent(self, tol: Optional[Tolerances] = None) -> bool:
        tol = resolve(tol)
        if abs(self.eq1_residual) > tol.area:
            return False
        return self.eq2_slack is None or self.eq2_slack >= -tol.area

    def as_dict(self):
        return {
            "area_u": self.area_u,
            "area_x": self.area_x,
            "area_y": self.area_y,
            "area_xy": self.area_xy,
            "eq1_residual": self.eq1_residual,
            "symmetric_difference": self.symmetric_difference.as_dict(),
            "area_u_f": self.area_u_f,
            "area_x_f": self.area_x_f,
            "area_y_f": self.area_y_f,
            "area_xy_f": self.area_xy_f,
            "eq2_slack": self.eq2_slack,
            "general_case_slack": self.general_case_slack,
            "methods": dict(self.methods),
            "refined_edges": self.refined_edges,
        }


def image_union(
    cc: CentralComplex, X: Subcomplex, f: PiecewiseIsometry, tol: Tolerances
) -> BallConfiguration:
    """U_{X,f}: images of the maximal disks at the vertices of X."""
    config = sub_union(cc, X)
    return BallConfiguration(
        config.surface,
        tuple(Disk(pw_apply(f, d.center, tol), d.radius) for d in config.disks),
    )


def split_check(
    cc: CentralComplex,
    X: Subcomplex,
    Y: Subcomplex,
    f: Optional[PiecewiseIsometry] = None,
    n: Optional[int] = None,
    seed: Optional[int] = None,
    tol: Optional[Tolerances] = None,
) -> SplitReport:
    tol = resolve(tol)
    if not X.union(Y).covers(Subcomplex.whole(cc)):
        raise NotACover("X and Y must cover every vertex and edge of the central set")

    refined_edges = None
    if f is not None:
        refined = refine_complex(f, cc, tol)
        X, Y = refined.lift(X), refined.lift(Y)
        cc = refined.complex
        refined_edges = len(cc.edges)
    XY = X.intersection(Y)
    methods: Dict[str, str] = {}

    def measure(name: str, config: BallConfiguration) -> float:
        value, method, _ = exact_or_estimated_area(config, n, seed, tol)
        methods[name] = method
        return value

    area_u = union_area(cc.polytope)
    methods["area_u"] = "exact"
    config_x, config_y, config_xy = sub_union(cc, X), sub_union(cc, Y), sub_union(cc, XY)
    area_x = measure("area_x", config_x)
    area_y = measure("area_y", config_y)
    area_xy = measure("area_xy", config_xy)
    eq1 = area_u - (area_x + area_y - area_xy)

    both = IntersectionMembership(
        DiskUnionMembership(config_x), DiskUnionMembership(config_y)
    )
    member = SymmetricDifferenceMembership(both, DiskUnionMembership(config_xy))
    window = window_for(cc.polytope.config)
    symmetric = mc_area(cc.surface, member, window, n, seed)

    report = SplitReport(
        area_u=area_u,
        area_x=area_x,
        area_y=area_y,
        area_xy=area_xy,
        eq1_residual=eq1,
        symmetric_difference=symmetric,
        methods=methods,
        refined_edges=refined_edges,
    )
    if f is not None:
        whole = Subcomplex.whole(cc)
        report.area_u_f = measure("area_u_f", image_union(cc, whole, f, tol))
        report.area_x_f = measure("area_x_f", image_union(cc, X, f, tol))
        report.area_y_f = measure("area_y_f", image_union(cc, Y, f, tol))
        report.area_xy_f = measure("area_xy_f", image_union(cc, XY, f, tol))
        report.eq2_slack = (
            report.area_x_f + report.area_y_f - report.area_xy_f - report.area_u_f
        )
        report.general_case_slack = (
            area_x + area_y - report.area_x_f - report.area_y_f
        ) - (area_xy - report.area_xy_f)

    logger.info(
        "split_check: eq1 residual %.3g, symmetric difference %.3g +- %.2g",
        eq1,
        symmetric.mean,
        symmetric.std_error,
    )
    return report
