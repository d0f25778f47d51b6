"""
Typed errors raised by the geometry kernel, ball unions and central sets.

Every error carries a stable `code` (the class name), a human message, the
offending disk indices when there are any, and a JSON pointer into the scene
document when the error came from scene input. The CLI renders these as
`{"status": "error", "error": {...}}` and exits with status 1.
"""

from typing import Iterable, Optional


class GeometryError(Exception):
    """Base for every error the project raises on bad or degenerate input."""

    def __init__(
        self,
        message: str = "",
        indices: Optional[Iterable[int]] = None,
        path: Optional[str] = None,
    ):
        self.message = message or (self.__doc__ or self.__class__.__name__).strip()
        self.indices = tuple(int(i) for i in indices) if indices is not None else ()
        self.path = path
        super().__init__(self.message)

    @property
    def code(self) -> str:
        return self.__class__.__name__

    def as_dict(self):
        return {
            "code": self.code,
            "message": self.message,
            "indices": list(self.indices),
            "path": self.path,
        }


# geom_kernel


class InvalidPoint(GeometryError):
    """Coordinates violate the point model of the surface."""


class AmbiguousGeodesic(GeometryError):
    """Antipodal points on the sphere have no unique minimizing geodesic."""


class InvalidRadius(GeometryError):
    """Radius is negative, or not below pi on the sphere."""


class DegenerateCoincident(GeometryError):
    """The two circles are identical."""


class NoCircumcenter(GeometryError):
    """The three points are geodesically collinear."""


class DegenerateBisector(GeometryError):
    """The two points coincide."""


class MixedSurfaces(GeometryError):
    """Arguments live on different surfaces."""


class InvalidLine(GeometryError):
    """The normal vector does not describe a geodesic of the surface."""


class UnsupportedSurface(GeometryError):
    """The operation is only defined for a subset of the surfaces."""


# ball_union


class TangentCircles(GeometryError):
    """Two boundary circles touch in a single point."""


class CoincidentCircles(GeometryError):
    """Two disks are identical."""


class CornerOnThirdCircle(GeometryError):
    """A boundary corner lies on a third circle."""


class ZeroRadius(GeometryError):
    """Disks must have strictly positive radius."""


class UnvalidatedInput(GeometryError):
    """The operation requires a validated ball-polytope."""


class NonSphericalSurface(GeometryError):
    """The operation is only defined on the sphere."""


class SphereCovered(GeometryError):
    """The disks cover the whole sphere; the union has no boundary."""


# central_set


class DisconnectedUnion(GeometryError):
    """The union has more than one component."""


class DegenerateVoronoi(GeometryError):
    """Four or more corners are concircular around a central vertex; retry with --jitter."""


class LocationOffComplex(GeometryError):
    """The location is not a vertex or an edge point of the complex."""


class PointOutsideUnion(GeometryError):
    """The point is not in the union."""


class EmptySubcomplex(GeometryError):
    """The selection has no vertices."""


class NotClosed(GeometryError):
    """An edge of the selection is missing one of its endpoints."""


class EmptyConfiguration(GeometryError):
    """A configuration needs at least one disk."""
