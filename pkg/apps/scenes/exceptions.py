"""Errors raised while reading, writing or generating scenes."""

from apps.geometry.exceptions import GeometryError


class SceneSyntaxError(GeometryError):
    """The scene document is not well-formed."""

    def __init__(self, message="", indices=None, path=None, line=None):
        super().__init__(message, indices=indices, path=path)
        self.line = line

    def as_dict(self):
        data = super().as_dict()
        data["line"] = self.line
        return data


class UnknownSurface(GeometryError):
    """The surface is not euclidean, spherical or hyperbolic."""


class InvalidDisk(GeometryError):
    """A disk of the scene has a bad center or radius."""


class InvalidSelection(GeometryError):
    """A named selection is missing or does not describe a subcomplex."""


class IoError(GeometryError):
    """A scene or figure could not be read or written."""


class GenerationFailure(GeometryError):
    """No random scene with the requested topology was found."""
