"""Errors raised by the verification engine."""

from apps.geometry.exceptions import GeometryError


class WindowTooSmall(GeometryError):
    """The sampling window does not cover the region being measured."""


class NotAContraction(GeometryError):
    """The rearrangement increases the distance of some pair of centers."""

    def __init__(self, message="", indices=None, path=None, excess=0.0):
        super().__init__(message, indices=indices, path=path)
        self.excess = excess

    def as_dict(self):
        data = super().as_dict()
        data["excess"] = self.excess
        return data


class ValidationFailure(GeometryError):
    """The instance does not validate as a ball-polytope with a valid contraction."""


class NotACover(GeometryError):
    """The two subcomplexes do not cover the central set."""


class NotATree(GeometryError):
    """The central set is not a tree (the union is not simply connected)."""


class RefinementFailure(GeometryError):
    """The contraction is not an isometry on some refined edge."""
