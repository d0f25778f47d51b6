"""Errors raised while building or applying contractions."""

from apps.geometry.exceptions import GeometryError


class InvalidMap(GeometryError):
    """A center map repeats a source point."""


class PointOutsideCells(GeometryError):
    """No cell of the piecewise isometry contains the point."""


class CoverageGap(GeometryError):
    """Part of a central-set edge lies outside every cell."""
