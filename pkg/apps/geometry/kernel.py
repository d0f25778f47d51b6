"""
Geometric primitives over the three constant-curvature surfaces.

Points are read-only numpy arrays:

- euclidean: (x, y)
- spherical: unit vector (x, y, z)
- hyperbolic: upper hyperboloid sheet, x^2 + y^2 - z^2 = -1 with z > 0

Lines, reflections and isometries act on "lifted" 3-vectors: the plane is
embedded homogeneously as (x, y, 1) and the two curved models already are
3-vectors. A geodesic is stored through its normal vector n, with the side
function side(x) = <lift(x), n> (dot product on E and S, the Lorentz form
x0*y0 + x1*y1 - x2*y2 on H). Points on the positive side lie to the left of
the line's direction.

Usage:
    surf = Surface.HYPERBOLIC
    p = make_point(surf, [0, 0, 1])
    q = circle_point(surf, p, 1.0, 0.0)
    distance(surf, p, q)                    # 1.0
    line = bisector(surf, p, q)
    reflect(surf, line, p)                  # ~ q
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Tuple

import numpy as np

from apps.core.tolerances import Tolerances, resolve

from .exceptions import (
    AmbiguousGeodesic,
    DegenerateBisector,
    DegenerateCoincident,
    InvalidLine,
    InvalidPoint,
    InvalidRadius,
    MixedSurfaces,
    NoCircumcenter,
)

J = np.diag([1.0, 1.0, -1.0])
TWO_PI = 2.0 * math.pi


class Surface(str, Enum):
    EUCLIDEAN = "euclidean"
    SPHERICAL = "spherical"
    HYPERBOLIC = "hyperbolic"

    @property
    def curvature(self) -> int:
        if self is Surface.SPHERICAL:
            return 1
        if self is Surface.HYPERBOLIC:
            return -1
        return 0

    @property
    def dim(self) -> int:
        """Length of a point's coordinate vector."""
        return 2 if self is Surface.EUCLIDEAN else 3

    @property
    def base_point(self) -> np.ndarray:
        if self is Surface.EUCLIDEAN:
            return _frozen([0.0, 0.0])
        return _frozen([0.0, 0.0, 1.0])


def ensure_same_surface(*surfaces: Surface) -> Surface:
    first = surfaces[0]
    for other in surfaces[1:]:
        if other is not first:
            raise MixedSurfaces(f"{first.value} and {other.value} arguments mixed")
    return first


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


# ----------------------------------------------------------------------
# Forms, lifting, point models
# ----------------------------------------------------------------------


def form(surf: Surface, x, y) -> float:
    """Bilinear form of the model: Lorentz on H, dot product otherwise."""
    if surf is Surface.HYPERBOLIC:
        return float(x[0] * y[0] + x[1] * y[1] - x[2] * y[2])
    return float(np.dot(x, y))


def forms(surf: Surface, X: np.ndarray, y) -> np.ndarray:
    """Row-wise `form(surf, X[i], y)`."""
    if surf is Surface.HYPERBOLIC:
        return X @ (J @ np.asarray(y, dtype=float))
    return X @ np.asarray(y, dtype=float)


def lift(surf: Surface, p) -> np.ndarray:
    if surf is Surface.EUCLIDEAN:
        return np.array([p[0], p[1], 1.0])
    return np.asarray(p, dtype=float)


def lift_many(surf: Surface, P: np.ndarray) -> np.ndarray:
    if surf is Surface.EUCLIDEAN:
        return np.column_stack([P, np.ones(len(P))])
    return P


def make_point(surf: Surface, coords, max_defect: Optional[float] = None) -> np.ndarray:
    """Build a point, renormalizing onto the model.

    `max_defect` bounds how far the raw coordinates may be from the model
    before renormalization (None accepts any vector that can be normalized).
    """
    v = np.asarray(coords, dtype=float).reshape(-1)
    if v.shape != (surf.dim,) or not np.all(np.isfinite(v)):
        raise InvalidPoint(f"expected {surf.dim} finite coordinates for {surf.value}")
    if surf is Surface.EUCLIDEAN:
        return _frozen(v)
    q = form(surf, v, v)
    if surf is Surface.SPHERICAL:
        if q <= 0.0:
            raise InvalidPoint("zero vector is not a point of the sphere")
        defect = abs(q - 1.0)
        v = v / math.sqrt(q)
    else:
        if q >= 0.0 or v[2] <= 0.0:
            raise InvalidPoint("vector is not on the upper hyperboloid sheet")
        defect = abs(q + 1.0) / max(1.0, v[2] * v[2])
        v = v / math.sqrt(-q)
    if max_defect is not None and defect > max_defect:
        raise InvalidPoint(
            f"coordinates are {defect:.3g} away from the {surf.value} model"
        )
    return _frozen(v)


def check_point(surf: Surface, p, tol: Optional[Tolerances] = None) -> np.ndarray:
    """Reject points violating the model constraint beyond eps_model."""
    tol = resolve(tol)
    v = np.asarray(p, dtype=float)
    if v.shape != (surf.dim,) or not np.all(np.isfinite(v)):
        raise InvalidPoint(f"expected {surf.dim} finite coordinates for {surf.value}")
    if surf is Surface.SPHERICAL and abs(float(v @ v) - 1.0) > tol.model:
        raise InvalidPoint("point is not on the unit sphere")
    if surf is Surface.HYPERBOLIC:
        if v[2] <= 0.0 or abs(form(surf, v, v) + 1.0) > tol.model * max(1.0, v[2] ** 2):
            raise InvalidPoint("point is not on the upper hyperboloid sheet")
    return v


def points_array(surf: Surface, points: Sequence) -> np.ndarray:
    if len(points) == 0:
        return np.zeros((0, surf.dim))
    return np.vstack([np.asarray(p, dtype=float) for p in points])


def sn(surf: Surface, r: float) -> float:
    if surf is Surface.SPHERICAL:
        return math.sin(r)
    if surf is Surface.HYPERBOLIC:
        return math.sinh(r)
    return r


def cs(surf: Surface, r: float) -> float:
    if surf is Surface.SPHERICAL:
        return math.cos(r)
    if surf is Surface.HYPERBOLIC:
        return math.cosh(r)
    return 1.0


def geodesic_curvature(surf: Surface, r: float) -> float:
    """Constant geodesic curvature of a circle of radius r."""
    if surf is Surface.SPHERICAL:
        return math.cos(r) / math.sin(r)
    if surf is Surface.HYPERBOLIC:
        return math.cosh(r) / math.sinh(r)
    return 1.0 / r


# ----------------------------------------------------------------------
# Distances and geodesics
# ----------------------------------------------------------------------


def _distance(surf: Surface, p, q) -> float:
    if surf is Surface.EUCLIDEAN:
        return float(math.hypot(p[0] - q[0], p[1] - q[1]))
    if surf is Surface.SPHERICAL:
        return float(math.atan2(np.linalg.norm(np.cross(p, q)), float(np.dot(p, q))))
    w = np.asarray(p, dtype=float) - np.asarray(q, dtype=float)
    s = max(form(surf, w, w), 0.0)
    return 2.0 * math.asinh(math.sqrt(s) / 2.0)


def distance(surf: Surface, p, q, tol: Optional[Tolerances] = None) -> float:
    tol = resolve(tol)
    return _distance(surf, check_point(surf, p, tol), check_point(surf, q, tol))


def distances(surf: Surface, P: np.ndarray, q) -> np.ndarray:
    """Distances from every row of P to q (no model checks)."""
    P = np.asarray(P, dtype=float)
    q = np.asarray(q, dtype=float)
    if surf is Surface.EUCLIDEAN:
        return np.hypot(P[:, 0] - q[0], P[:, 1] - q[1])
    if surf is Surface.SPHERICAL:
        return np.arctan2(np.linalg.norm(np.cross(P, q), axis=1), P @ q)
    W = P - q
    s = np.maximum(W[:, 0] ** 2 + W[:, 1] ** 2 - W[:, 2] ** 2, 0.0)
    return 2.0 * np.arcsinh(np.sqrt(s) / 2.0)


def are_antipodal(surf: Surface, p, q, tol: Optional[Tolerances] = None) -> bool:
    if surf is not Surface.SPHERICAL:
        return False
    return float(np.linalg.norm(np.asarray(p) + np.asarray(q))) <= resolve(tol).pred


def geodesic_eval(surf: Surface, p, q, t: float, tol: Optional[Tolerances] = None):
    """Point at fraction t of the minimizing geodesic from p to q."""
    tol = resolve(tol)
    if are_antipodal(surf, p, q, tol):
        raise AmbiguousGeodesic("antipodal endpoints")
    if surf is Surface.EUCLIDEAN:
        p = np.asarray(p, dtype=float)
        return _frozen(p + t * (np.asarray(q, dtype=float) - p))
    d = _distance(surf, p, q)
    if d <= tol.pred:
        return make_point(surf, p)
    if surf is Surface.SPHERICAL:
        a, b, s = math.sin((1.0 - t) * d), math.sin(t * d), math.sin(d)
    else:
        a, b, s = math.sinh((1.0 - t) * d), math.sinh(t * d), math.sinh(d)
    return make_point(surf, (a * np.asarray(p) + b * np.asarray(q)) / s)


def disk_area(surf: Surface, r: float, tol: Optional[Tolerances] = None) -> float:
    check_radius(surf, r)
    if surf is Surface.SPHERICAL:
        return TWO_PI * (1.0 - math.cos(r))
    if surf is Surface.HYPERBOLIC:
        return TWO_PI * (math.cosh(r) - 1.0)
    return math.pi * r * r


def check_radius(surf: Surface, r: float) -> float:
    if not math.isfinite(r) or r < 0.0:
        raise InvalidRadius(f"radius {r!r} must be a non-negative number")
    if surf is Surface.SPHERICAL and r >= math.pi:
        raise InvalidRadius(f"spherical radius {r!r} must be below pi")
    return float(r)


@dataclass(frozen=True, eq=False)
class Disk:
    center: np.ndarray
    radius: float

    def as_dict(self):
        return {
            "center": [float(x) for x in self.center],
            "radius": float(self.radius),
        }


def make_disk(surf: Surface, center, radius: float, max_defect=None) -> Disk:
    return Disk(
        center=make_point(surf, center, max_defect=max_defect),
        radius=check_radius(surf, float(radius)),
    )


# ----------------------------------------------------------------------
# Circles
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class CircleIntersection:
    points: Tuple[np.ndarray, ...]
    tangent: bool = False

    def __len__(self):
        return len(self.points)


def circle_intersections(
    surf: Surface, d1: Disk, d2: Disk, tol: Optional[Tolerances] = None
) -> CircleIntersection:
    """Intersection points of the two boundary circles."""
    tol = resolve(tol)
    c1, c2, r1, r2 = d1.center, d2.center, d1.radius, d2.radius
    d = _distance(surf, c1, c2)

    if d <= tol.pred or (surf is Surface.SPHERICAL and d >= math.pi - tol.pred):
        # Concentric circles; antipodal centers on the sphere share a circle
        # when the radii are supplementary.
        other = r2 if d <= tol.pred else math.pi - r2
        if abs(r1 - other) <= tol.pred:
            raise DegenerateCoincident("identical boundary circles")
        return CircleIntersection(points=())

    lo, hi = abs(r1 - r2), r1 + r2
    if surf is Surface.SPHERICAL:
        hi = min(hi, TWO_PI - r1 - r2)
    if d > hi + tol.pred or d < lo - tol.pred:
        return CircleIntersection(points=())
    tangent = abs(d - hi) <= tol.pred or abs(d - lo) <= tol.pred

    if surf is Surface.EUCLIDEAN:
        u = (np.asarray(c2) - np.asarray(c1)) / d
        a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d)
        base = np.asarray(c1) + a * u
        if tangent:
            return CircleIntersection(points=(_frozen(base),), tangent=True)
        h = math.sqrt(max(r1 * r1 - a * a, 0.0))
        perp = np.array([-u[1], u[0]])
        return CircleIntersection(
            points=(_frozen(base + h * perp), _frozen(base - h * perp))
        )

    # x = alpha*c1 + beta*c2 + gamma*n with <x, ci> = sigma*cs(ri), <x, x> = sigma
    sigma = form(surf, c1, c1)
    g = form(surf, c1, c2)
    gram = np.array([[sigma, g], [g, sigma]])
    rhs = sigma * np.array([cs(surf, r1), cs(surf, r2)])
    alpha, beta = np.linalg.solve(gram, rhs)
    base = alpha * np.asarray(c1) + beta * np.asarray(c2)
    n = np.cross(c1, c2)
    if surf is Surface.HYPERBOLIC:
        n = J @ n
    if tangent:
        return CircleIntersection(points=(make_point(surf, base),), tangent=True)
    gamma = math.sqrt(max((sigma - form(surf, base, base)) / form(surf, n, n), 0.0))
    return CircleIntersection(
        points=(
            make_point(surf, base + gamma * n),
            make_point(surf, base - gamma * n),
        )
    )


def equidistant_point(
    surf: Surface, a, b, c, tol: Optional[Tolerances] = None
) -> Tuple[np.ndarray, ...]:
    """Points equidistant from a, b and c (two on the sphere)."""
    tol = resolve(tol)
    a, b, c = (np.asarray(v, dtype=float) for v in (a, b, c))
    if surf is Surface.EUCLIDEAN:
        det = 2.0 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]))
        scale = max(np.ptp(np.vstack([a, b, c]), axis=0).max(), 1.0)
        if abs(det) <= tol.pred * scale * scale:
            raise NoCircumcenter("collinear points")
        aa, bb, cc = a @ a, b @ b, c @ c
        ux = (aa * (b[1] - c[1]) + bb * (c[1] - a[1]) + cc * (a[1] - b[1])) / det
        uy = (aa * (c[0] - b[0]) + bb * (a[0] - c[0]) + cc * (b[0] - a[0])) / det
        return (_frozen([ux, uy]),)

    n = np.cross(b - a, c - a)
    norm = float(np.linalg.norm(n))
    if norm <= tol.pred:
        raise NoCircumcenter("points are not pairwise distinct")
    if surf is Surface.SPHERICAL:
        return make_point(surf, n), make_point(surf, -n)
    n = J @ n
    if form(surf, n, n) >= -tol.pred * norm * norm:
        raise NoCircumcenter("no point of the hyperbolic plane is equidistant")
    if n[2] < 0.0:
        n = -n
    return (make_point(surf, n),)


# ----------------------------------------------------------------------
# Lines
# ----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GeodesicLine:
    """A complete geodesic, canonicalized to (foot point, unit direction).

    `origin` is the point of the line closest to the surface's base point and
    `direction` the unit tangent there; the positive side is on the left.
    """

    surface: Surface
    normal: np.ndarray
    origin: np.ndarray
    direction: np.ndarray

    @property
    def points(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.origin, self.point_at(1.0)

    def point_at(self, s: float) -> np.ndarray:
        """Point at signed arclength s from the origin."""
        if self.surface is Surface.EUCLIDEAN:
            return _frozen(self.origin + s * self.direction)
        return make_point(
            self.surface,
            cs(self.surface, s) * self.origin + sn(self.surface, s) * self.direction,
        )

    def side(self, p) -> float:
        return form(self.surface, lift(self.surface, p), self.normal)

    def sides(self, P: np.ndarray) -> np.ndarray:
        return forms(self.surface, lift_many(self.surface, P), self.normal)

    def as_dict(self):
        return {"points": [[float(x) for x in p] for p in self.points]}


def normalize_normal(surf: Surface, normal, tol: Optional[Tolerances] = None):
    tol = resolve(tol)
    n = np.asarray(normal, dtype=float).reshape(-1)
    if n.shape != (3,) or not np.all(np.isfinite(n)):
        raise InvalidLine("normal must be a finite 3-vector")
    if surf is Surface.EUCLIDEAN:
        scale = math.hypot(n[0], n[1])
    elif surf is Surface.SPHERICAL:
        scale = float(np.linalg.norm(n))
    else:
        q = form(surf, n, n)
        if q <= tol.pred * float(n @ n):
            raise InvalidLine("normal does not cut the hyperboloid")
        scale = math.sqrt(q)
    if scale <= tol.pred:
        raise InvalidLine("degenerate normal")
    return _frozen(n / scale)


def line_from_normal(surf: Surface, normal, tol: Optional[Tolerances] = None):
    n = normalize_normal(surf, normal, tol)
    if surf is Surface.EUCLIDEAN:
        origin = -n[2] * n[:2]
        direction = np.array([n[1], -n[0]])
        return GeodesicLine(surf, n, _frozen(origin), _frozen(direction))
    if surf is Surface.SPHERICAL:
        axis = np.eye(3)[int(np.argmin(np.abs(n)))]
        origin = make_point(surf, np.cross(n, axis))
        # cross(origin, direction) == n keeps the positive side on the left
        direction = np.cross(n, origin)
        return GeodesicLine(surf, n, origin, _frozen(direction))
    o = np.array([0.0, 0.0, 1.0])
    origin = make_point(surf, o - form(surf, o, n) * n)
    t = J @ np.cross(n, origin)
    t = t / math.sqrt(form(surf, t, t))
    return GeodesicLine(surf, n, origin, _frozen(t))


def line_through(surf: Surface, p, q, tol: Optional[Tolerances] = None) -> GeodesicLine:
    """Geodesic through p and q, oriented from p towards q."""
    tol = resolve(tol)
    if _distance(surf, p, q) <= tol.pred:
        raise InvalidLine("a line needs two distinct points")
    if are_antipodal(surf, p, q, tol):
        raise AmbiguousGeodesic("antipodal points do not determine a great circle")
    n = np.cross(lift(surf, p), lift(surf, q))
    if surf is Surface.HYPERBOLIC:
        n = J @ n
    return line_from_normal(surf, n, tol)


def bisector(surf: Surface, a, b, tol: Optional[Tolerances] = None) -> GeodesicLine:
    """Perpendicular bisector of a and b; the side of `a` is positive."""
    tol = resolve(tol)
    if _distance(surf, a, b) <= tol.pred:
        raise DegenerateBisector("bisector of coincident points")
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if surf is Surface.EUCLIDEAN:
        n = np.array([a[0] - b[0], a[1] - b[1], -(a @ a - b @ b) / 2.0])
    else:
        n = a - b
    return line_from_normal(surf, n, tol)


# ----------------------------------------------------------------------
# Isometries
# ----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Isometry:
    """3x3 matrix acting on lifted points."""

    surface: Surface
    matrix: np.ndarray

    @classmethod
    def identity(cls, surf: Surface) -> "Isometry":
        return cls(surf, _frozen(np.eye(3)))

    def apply(self, p) -> np.ndarray:
        v = self.matrix @ lift(self.surface, p)
        if self.surface is Surface.EUCLIDEAN:
            return _frozen(v[:2] / v[2])
        return make_point(self.surface, v)

    def apply_many(self, P: np.ndarray) -> np.ndarray:
        V = lift_many(self.surface, np.asarray(P, dtype=float)) @ self.matrix.T
        if self.surface is Surface.EUCLIDEAN:
            return V[:, :2] / V[:, 2:3]
        if self.surface is Surface.SPHERICAL:
            return V / np.linalg.norm(V, axis=1, keepdims=True)
        q = -(V[:, 0] ** 2 + V[:, 1] ** 2 - V[:, 2] ** 2)
        return V / np.sqrt(q)[:, None]

    def compose(self, other: "Isometry") -> "Isometry":
        """self after other."""
        ensure_same_surface(self.surface, other.surface)
        return Isometry(self.surface, _frozen(self.matrix @ other.matrix))

    def inverse(self) -> "Isometry":
        M = self.matrix
        if self.surface is Surface.SPHERICAL:
            inv = M.T
        elif self.surface is Surface.HYPERBOLIC:
            inv = J @ M.T @ J
        else:
            inv = np.linalg.inv(M)
        return Isometry(self.surface, _frozen(inv))

    def pullback_normal(self, n) -> np.ndarray:
        """Normal m with side(x, m) == side(self(x), n)."""
        n = np.asarray(n, dtype=float)
        if self.surface is Surface.HYPERBOLIC:
            return J @ self.matrix.T @ J @ n
        return self.matrix.T @ n

    def is_valid(self, atol: float = 1e-9) -> bool:
        M = self.matrix
        if self.surface is Surface.EUCLIDEAN:
            R = M[:2, :2]
            return bool(
                np.allclose(M[2], [0.0, 0.0, 1.0], atol=atol)
                and np.allclose(R.T @ R, np.eye(2), atol=atol)
            )
        if self.surface is Surface.SPHERICAL:
            return bool(np.allclose(M.T @ M, np.eye(3), atol=atol))
        return bool(np.allclose(M.T @ J @ M, J, atol=atol) and M[2, 2] > 0.0)

    def allclose(self, other: "Isometry", atol: float = 1e-9) -> bool:
        return bool(np.allclose(self.matrix, other.matrix, atol=atol))


def reflection(surf: Surface, line: GeodesicLine) -> Isometry:
    n = np.asarray(line.normal, dtype=float)
    if surf is Surface.EUCLIDEAN:
        w, c = n[:2], n[2]
        M = np.eye(3)
        M[:2, :2] -= 2.0 * np.outer(w, w)
        M[:2, 2] = -2.0 * c * w
    elif surf is Surface.SPHERICAL:
        M = np.eye(3) - 2.0 * np.outer(n, n)
    else:
        M = np.eye(3) - 2.0 * np.outer(n, J @ n)
    return Isometry(surf, _frozen(M))


def reflect(surf: Surface, line: GeodesicLine, p) -> np.ndarray:
    ensure_same_surface(surf, line.surface)
    return reflection(surf, line).apply(p)


def isometry_to(surf: Surface, c) -> Isometry:
    """Isometry taking the base point to c (translation, rotation or boost)."""
    c = np.asarray(c, dtype=float)
    M = np.eye(3)
    if surf is Surface.EUCLIDEAN:
        M[:2, 2] = c
    elif surf is Surface.SPHERICAL:
        v = np.array([-c[1], c[0], 0.0])
        s2 = float(v @ v)
        if s2 <= 1e-24:
            if c[2] < 0.0:
                M = np.diag([1.0, -1.0, -1.0])
        else:
            K = np.array([[0.0, -v[2], v[1]], [v[2], 0.0, -v[0]], [-v[1], v[0], 0.0]])
            M = M + K + K @ K * ((1.0 - c[2]) / s2)
    else:
        x, y, z = c
        rho2 = x * x + y * y
        if rho2 > 1e-24:
            k = (z - 1.0) / rho2
            M = np.array(
                [
                    [1.0 + k * x * x, k * x * y, x],
                    [k * x * y, 1.0 + k * y * y, y],
                    [x, y, z],
                ]
            )
    return Isometry(surf, _frozen(M))


def rotation(surf: Surface, angle: float) -> Isometry:
    """Rotation by `angle` about the base point."""
    c, s = math.cos(angle), math.sin(angle)
    M = np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
    return Isometry(surf, _frozen(M))


def random_points(
    surf: Surface, rng: np.random.Generator, n: int, spread: float = 2.0
) -> np.ndarray:
    """n random points: box on E, uniform on S, geodesic disk on H."""
    if surf is Surface.EUCLIDEAN:
        return rng.uniform(-spread, spread, size=(n, 2))
    if surf is Surface.SPHERICAL:
        V = rng.normal(size=(n, 3))
        return V / np.linalg.norm(V, axis=1, keepdims=True)
    rho = np.arccosh(1.0 + rng.uniform(size=n) * (math.cosh(spread) - 1.0))
    theta = rng.uniform(0.0, TWO_PI, size=n)
    return np.column_stack(
        [np.sinh(rho) * np.cos(theta), np.sinh(rho) * np.sin(theta), np.cosh(rho)]
    )


def random_isometry(
    surf: Surface, rng: np.random.Generator, spread: float = 2.0
) -> Isometry:
    target = random_points(surf, rng, 1, spread)[0]
    turn = rotation(surf, float(rng.uniform(0.0, TWO_PI)))
    return isometry_to(surf, target).compose(turn)


# ----------------------------------------------------------------------
# Circle parametrization
# ----------------------------------------------------------------------


def tangent_frame(surf: Surface, c) -> Tuple[np.ndarray, np.ndarray]:
    """Positively oriented orthonormal tangent frame at c."""
    if surf is Surface.EUCLIDEAN:
        return np.array([1.0, 0.0]), np.array([0.0, 1.0])
    M = isometry_to(surf, c).matrix
    return M[:, 0], M[:, 1]


def circle_point(surf: Surface, c, r: float, theta: float) -> np.ndarray:
    """Point at angle theta on the circle of radius r about c."""
    e1, e2 = tangent_frame(surf, c)
    u = math.cos(theta) * e1 + math.sin(theta) * e2
    if surf is Surface.EUCLIDEAN:
        return _frozen(np.asarray(c) + r * u)
    return make_point(surf, cs(surf, r) * np.asarray(c) + sn(surf, r) * u)


def circle_angle(surf: Surface, c, x) -> float:
    """Angle of x seen from c in the tangent frame at c, in [0, 2*pi)."""
    e1, e2 = tangent_frame(surf, c)
    if surf is Surface.EUCLIDEAN:
        v = np.asarray(x) - np.asarray(c)
        angle = math.atan2(v[1], v[0])
    else:
        angle = math.atan2(form(surf, x, e2), form(surf, x, e1))
    return angle % TWO_PI


def circle_angles(surf: Surface, c, X: np.ndarray) -> np.ndarray:
    e1, e2 = tangent_frame(surf, c)
    if surf is Surface.EUCLIDEAN:
        V = np.asarray(X) - np.asarray(c)
        return np.mod(np.arctan2(V[:, 1], V[:, 0]), TWO_PI)
    return np.mod(np.arctan2(forms(surf, X, e2), forms(surf, X, e1)), TWO_PI)


def circle_tangent(surf: Surface, c, theta: float) -> np.ndarray:
    """Unit tangent of a circle about c at angle theta (counterclockwise)."""
    e1, e2 = tangent_frame(surf, c)
    return -math.sin(theta) * e1 + math.cos(theta) * e2


def turning_angle(surf: Surface, x, t_in, t_out) -> float:
    """Signed angle from tangent t_in to tangent t_out at x."""
    if surf is Surface.EUCLIDEAN:
        cross = t_in[0] * t_out[1] - t_in[1] * t_out[0]
        return math.atan2(cross, float(np.dot(t_in, t_out)))
    wedge = float(np.linalg.det(np.vstack([t_in, t_out, x])))
    return math.atan2(wedge, form(surf, t_in, t_out))
