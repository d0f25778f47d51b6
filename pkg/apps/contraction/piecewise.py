"""
Contractive rearrangements: center maps and piecewise isometries.

A `PiecewiseIsometry` is a list of convex cells, each an intersection of
half-planes `sign * side(x, normal) >= 0`, with one isometry per cell. A
fold across a geodesic is the simplest one: identity on the negative side,
reflection on the positive side. Compositions of folds refine the cells,
so every map built here is 1-Lipschitz.

`refine_complex` subdivides central-set edges at the cell walls so that the
map restricted to each edge is a single isometry.

Usage:
    f = compose_folds(surf, [line_a, line_b])    # line_a after line_b
    pw_apply(f, p)
    refined = refine_complex(f, cc)
    is_contractive(surf, CenterMap.from_piecewise(f, centers))
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from apps.core.tolerances import Tolerances, resolve
from apps.geometry.central_set import CentralComplex
from apps.geometry.kernel import (
    GeodesicLine,
    Isometry,
    Surface,
    distances,
    ensure_same_surface,
    form,
    forms,
    lift,
    lift_many,
    line_from_normal,
    random_points,
    reflection,
)
from apps.geometry.subcomplex import Subcomplex

from .exceptions import CoverageGap, InvalidMap, PointOutsideCells

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Cell:
    constraints: Tuple[Tuple[np.ndarray, int], ...]
    isometry: Isometry

    def contains(self, surf: Surface, p, eps: float) -> bool:
        v = lift(surf, p)
        return all(sign * form(surf, v, n) >= -eps for n, sign in self.constraints)

    def mask(self, surf: Surface, P: np.ndarray, eps: float) -> np.ndarray:
        V = lift_many(surf, P)
        inside = np.ones(len(P), dtype=bool)
        for n, sign in self.constraints:
            inside &= sign * forms(surf, V, n) >= -eps
        return inside


@dataclass(frozen=True, eq=False)
class PiecewiseIsometry:
    surface: Surface
    cells: Tuple[Cell, ...]
    folds: Tuple[GeodesicLine, ...] = ()

    @classmethod
    def identity(cls, surf: Surface) -> "PiecewiseIsometry":
        return cls(surf, (Cell((), Isometry.identity(surf)),))

    def cell_index(self, p, tol: Optional[Tolerances] = None) -> int:
        """Lowest-index cell containing p."""
        eps = resolve(tol).pred
        for n, cell in enumerate(self.cells):
            if cell.contains(self.surface, p, eps):
                return n
        raise PointOutsideCells()

    def normals(self) -> List[np.ndarray]:
        """Distinct wall normals over all cells (up to sign)."""
        found: List[np.ndarray] = []
        for cell in self.cells:
            for n, _ in cell.constraints:
                if not any(np.allclose(n, m) or np.allclose(n, -m) for m in found):
                    found.append(n)
        return found

    def as_dict(self):
        return {
            "surface": self.surface.value,
            "cells": len(self.cells),
            "folds": [line.as_dict() for line in self.folds],
        }


def fold(surf: Surface, line: GeodesicLine) -> PiecewiseIsometry:
    """Reflect the positive side of `line` onto the negative side."""
    ensure_same_surface(surf, line.surface)
    n = line.normal
    return PiecewiseIsometry(
        surf,
        (
            Cell(((n, -1),), Isometry.identity(surf)),
            Cell(((n, 1),), reflection(surf, line)),
        ),
        (line,),
    )


def compose(f: PiecewiseIsometry, g: PiecewiseIsometry) -> PiecewiseIsometry:
    """f after g, on the common refinement of the cells."""
    surf = ensure_same_surface(f.surface, g.surface)
    cells = []
    for g_cell in g.cells:
        for f_cell in f.cells:
            pulled = tuple(
                (g_cell.isometry.pullback_normal(n), sign) for n, sign in f_cell.constraints
            )
            cells.append(
                Cell(g_cell.constraints + pulled, f_cell.isometry.compose(g_cell.isometry))
            )
    return PiecewiseIsometry(surf, tuple(cells), f.folds + g.folds)


def compose_folds(surf: Surface, lines: Sequence[GeodesicLine]) -> PiecewiseIsometry:
    """Folds applied right to left: the last line folds first."""
    f = PiecewiseIsometry.identity(surf)
    for line in lines:
        f = compose(f, fold(surf, line))
    return f


def pw_apply(f: PiecewiseIsometry, p, tol: Optional[Tolerances] = None) -> np.ndarray:
    return f.cells[f.cell_index(p, tol)].isometry.apply(p)


def pw_apply_many(
    f: PiecewiseIsometry, P: np.ndarray, tol: Optional[Tolerances] = None
) -> np.ndarray:
    eps = resolve(tol).pred
    P = np.asarray(P, dtype=float)
    out = np.empty_like(P)
    pending = np.ones(len(P), dtype=bool)
    for cell in f.cells:
        take = pending & cell.mask(f.surface, P, eps)
        if take.any():
            out[take] = cell.isometry.apply_many(P[take])
            pending &= ~take
    if pending.any():
        raise PointOutsideCells(f"{int(pending.sum())} points outside every cell")
    return out


# ----------------------------------------------------------------------
# Validation
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class Defect:
    kind: str
    cells: Tuple[int, ...]
    detail: str

    def as_dict(self):
        return {"kind": self.kind, "cells": list(self.cells), "detail": self.detail}


@dataclass
class ValidationReport:
    valid: bool
    defects: List[Defect] = field(default_factory=list)

    def as_dict(self):
        return {"valid": self.valid, "defects": [d.as_dict() for d in self.defects]}


def pw_validate(
    f: PiecewiseIsometry,
    samples: int = 64,
    seed: int = 0,
    spread: float = 3.0,
    tol: Optional[Tolerances] = None,
) -> ValidationReport:
    """Check every cell map is an isometry and neighbouring cells agree on walls."""
    tol = resolve(tol)
    surf = f.surface
    rng = np.random.default_rng(seed)
    limit = 1e3 * tol.pred
    defects: List[Defect] = []

    for i, cell in enumerate(f.cells):
        if not cell.isometry.is_valid():
            defects.append(Defect("not_isometry", (i,), "cell matrix is not an isometry"))
            continue
        P = random_points(surf, rng, 3 * samples, spread)
        P = P[cell.mask(surf, P, 0.0)][: 3 * (samples // 3)]
        if len(P) >= 3:
            Q = cell.isometry.apply_many(P)
            a, b = P[0::3], P[1::3]
            qa, qb = Q[0::3], Q[1::3]
            before = np.array([distances(surf, a[k : k + 1], b[k])[0] for k in range(len(b))])
            after = np.array([distances(surf, qa[k : k + 1], qb[k])[0] for k in range(len(qb))])
            worst = float(np.abs(before - after).max()) if len(before) else 0.0
            if worst > limit:
                defects.append(
                    Defect("distortion", (i,), f"sampled distances change by {worst:.3g}")
                )

    for i, cell in enumerate(f.cells):
        for n, _ in cell.constraints:
            wall = line_from_normal(surf, n, tol)
            for s in np.linspace(-spread, spread, samples):
                x = wall.point_at(float(s))
                if not cell.contains(surf, x, tol.pred):
                    continue
                image = cell.isometry.apply(x)
                for j, other in enumerate(f.cells):
                    if j == i or not other.contains(surf, x, tol.pred):
                        continue
                    gap = float(distances(surf, image[None, :], other.isometry.apply(x))[0])
                    if gap > limit:
                        defects.append(
                            Defect(
                                "mismatch",
                                tuple(sorted((i, j))),
                                "images disagree by %.3g on the wall through %s"
                                % (gap, [round(float(c), 6) for c in wall.origin]),
                            )
                        )
                        break
                else:
                    continue
                break

    unique = list({(d.kind, d.cells): d for d in defects}.values())
    return ValidationReport(valid=not unique, defects=unique)


# ----------------------------------------------------------------------
# Edge refinement
# ----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class RefinedComplex:
    complex: CentralComplex
    source: CentralComplex
    f: PiecewiseIsometry
    edge_cells: Tuple[int, ...]

    def edge_isometry(self, edge_index: int) -> Isometry:
        return self.f.cells[self.edge_cells[edge_index]].isometry

    def lift(self, X: Subcomplex) -> Subcomplex:
        return X.lift(self.complex)

    def non_isometric_edges(self, tol: Optional[Tolerances] = None) -> List[int]:
        """Edges whose endpoint or midpoint distances change under f."""
        tol = resolve(tol)
        cc = self.complex
        surf = cc.surface
        bad = []
        for n, edge in enumerate(cc.edges):
            points = [cc.vertices[edge.u].point, cc.edge_point(n, 0.5), cc.vertices[edge.v].point]
            images = [pw_apply(self.f, p, tol) for p in points]
            for a, b in ((0, 1), (1, 2), (0, 2)):
                before = distances(surf, points[a][None, :], points[b])[0]
                after = distances(surf, images[a][None, :], images[b])[0]
                if abs(before - after) > 1e3 * tol.pred:
                    bad.append(n)
                    break
        return bad


def _crossings(cc: CentralComplex, edge_index: int, normal, tol) -> List[float]:
    surf = cc.surface

    def side(t):
        return form(surf, lift(surf, cc.edge_point(edge_index, t)), normal)

    grid = np.linspace(0.0, 1.0, 33)
    values = [side(float(t)) for t in grid]
    zero = [abs(v) <= tol.pred for v in values]
    roots = []
    # A wall through a grid node: one root per run of near-zero nodes.
    k = 1
    while k < len(grid) - 1:
        if not zero[k]:
            k += 1
            continue
        end = k
        while end + 1 < len(grid) - 1 and zero[end + 1]:
            end += 1
        if not (k == 1 and end == len(grid) - 2):
            roots.append(float(grid[(k + end) // 2]))
        k = end + 1
    for k in range(len(grid) - 1):
        a, b = values[k], values[k + 1]
        if zero[k] or zero[k + 1]:
            continue
        if a * b < 0.0:
            roots.append(float(brentq(side, grid[k], grid[k + 1], xtol=1e-13)))
    return sorted(roots)


def refine_complex(
    f: PiecewiseIsometry, cc: CentralComplex, tol: Optional[Tolerances] = None
) -> RefinedComplex:
    tol = resolve(tol)
    ensure_same_surface(f.surface, cc.surface)
    normals = f.normals()
    refined = cc
    for n in range(len(cc.edges)):
        breaks = sorted({t for normal in normals for t in _crossings(cc, n, normal, tol)})
        bounds = [0.0] + [t for t in breaks if tol.touch < t < 1.0 - tol.touch] + [1.0]
        matrices = []
        for lo, hi in zip(bounds, bounds[1:]):
            middle = cc.edge_point(n, 0.5 * (lo + hi))
            try:
                matrices.append(f.cells[f.cell_index(middle, tol)].isometry)
            except PointOutsideCells:
                raise CoverageGap(f"edge {n} leaves the cells of the contraction")
        kept = [
            bounds[k]
            for k in range(1, len(bounds) - 1)
            if not matrices[k - 1].allclose(matrices[k])
        ]
        edge, done = n, 0.0
        for t in kept:
            refined = refined.subdivide(edge, (t - done) / (1.0 - done))
            edge, done = len(refined.edges) - 1, t

    cells = []
    for n in range(len(refined.edges)):
        try:
            cells.append(f.cell_index(refined.edge_point(n, 0.5), tol))
        except PointOutsideCells:
            raise CoverageGap(f"edge {n} leaves the cells of the contraction")
    logger.debug(
        "refined central set from %d to %d edges", len(cc.edges), len(refined.edges)
    )
    return RefinedComplex(refined, cc, f, tuple(cells))


# ----------------------------------------------------------------------
# Center maps
# ----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CenterMap:
    surface: Surface
    sources: Tuple[np.ndarray, ...]
    images: Tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.sources) != len(self.images):
            raise InvalidMap("sources and images differ in length")
        for i in range(len(self.sources)):
            for j in range(i):
                d = distances(self.surface, self.sources[i][None, :], self.sources[j])[0]
                if d <= 1e-12:
                    raise InvalidMap(f"sources {j} and {i} coincide", indices=[j, i])

    @classmethod
    def from_pairs(cls, surf: Surface, pairs) -> "CenterMap":
        sources = tuple(np.asarray(s, dtype=float) for s, _ in pairs)
        images = tuple(np.asarray(t, dtype=float) for _, t in pairs)
        return cls(surf, sources, images)

    @classmethod
    def from_piecewise(cls, f: PiecewiseIsometry, points, tol=None) -> "CenterMap":
        sources = tuple(np.asarray(p, dtype=float) for p in points)
        return cls(f.surface, sources, tuple(pw_apply(f, p, tol) for p in sources))

    def image_of(self, p) -> np.ndarray:
        for source, image in zip(self.sources, self.images):
            if distances(self.surface, source[None, :], p)[0] <= 1e-9:
                return image
        raise PointOutsideCells("point is not a source of the map")

    def as_dict(self):
        return {
            "pairs": [
                [[float(x) for x in s], [float(x) for x in t]]
                for s, t in zip(self.sources, self.images)
            ]
        }


@dataclass(frozen=True)
class ContractionCheck:
    contractive: bool
    witness: Optional[Tuple[int, int]] = None
    excess: float = 0.0

    def as_dict(self):
        return {
            "contractive": self.contractive,
            "witness": list(self.witness) if self.witness else None,
            "excess": self.excess,
        }


def is_contractive(
    surf: Surface, m: CenterMap, tol: Optional[Tolerances] = None
) -> ContractionCheck:
    """All pairs satisfy d(f x, f y) <= d(x, y) + eps; else the worst pair."""
    tol = resolve(tol)
    ensure_same_surface(surf, m.surface)
    worst, pair = -math.inf, None
    for i in range(len(m.sources)):
        for j in range(i + 1, len(m.sources)):
            before = distances(surf, m.sources[i][None, :], m.sources[j])[0]
            after = distances(surf, m.images[i][None, :], m.images[j])[0]
            if after - before > worst:
                worst, pair = float(after - before), (i, j)
    if pair is None or worst <= tol.pred:
        return ContractionCheck(True, None, max(worst, 0.0) if pair else 0.0)
    return ContractionCheck(False, pair, worst)


@dataclass(frozen=True)
class LipschitzAudit:
    pairs: int
    max_excess: float
    lipschitz: bool

    def as_dict(self):
        return {"pairs": self.pairs, "max_excess": self.max_excess, "lipschitz": self.lipschitz}


def lipschitz_audit(
    f: PiecewiseIsometry,
    n: int = 1000,
    seed: int = 0,
    spread: float = 2.0,
    tol: Optional[Tolerances] = None,
) -> LipschitzAudit:
    """Sampled check that f never stretches a pair of points."""
    tol = resolve(tol)
    surf = f.surface
    rng = np.random.default_rng(seed)
    P = random_points(surf, rng, n, spread)
    Q = random_points(surf, rng, n, spread)
    fP, fQ = pw_apply_many(f, P, tol), pw_apply_many(f, Q, tol)
    before = np.array([distances(surf, P[k : k + 1], Q[k])[0] for k in range(n)])
    after = np.array([distances(surf, fP[k : k + 1], fQ[k])[0] for k in range(n)])
    excess = float((after - before).max()) if n else 0.0
    return LipschitzAudit(pairs=n, max_excess=excess, lipschitz=excess <= tol.pred)
