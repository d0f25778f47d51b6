"""
Layered numeric tolerances shared by every geometry computation.

Settings are the single source of truth; `Tolerances.from_settings()` takes a
snapshot so a long computation sees one consistent set of values even if a
test overrides settings halfway through.

Usage:
    tol = Tolerances.from_settings()
    if abs(d - r) <= tol.pred:
        ...
    loose = tol.override(area=1e-4)   # --tolerance on the CLI
"""

from dataclasses import dataclass, replace
from typing import Optional

from django.conf import settings


@dataclass(frozen=True)
class Tolerances:
    model: float = 1e-12
    pred: float = 1e-9
    area: float = 1e-6
    touch: float = 1e-7

    @classmethod
    def from_settings(cls) -> "Tolerances":
        return cls(
            model=getattr(settings, "GEOMETRY_EPS_MODEL", cls.model),
            pred=getattr(settings, "GEOMETRY_EPS_PRED", cls.pred),
            area=getattr(settings, "GEOMETRY_EPS_AREA", cls.area),
            touch=getattr(settings, "GEOMETRY_EPS_TOUCH", cls.touch),
        )

    def override(self, **changes) -> "Tolerances":
        return replace(self, **{k: v for k, v in changes.items() if v is not None})

    def as_dict(self):
        return {
            "eps_model": self.model,
            "eps_pred": self.pred,
            "eps_area": self.area,
            "eps_touch": self.touch,
        }


def resolve(tol: Optional[Tolerances]) -> Tolerances:
    """Return `tol` or the settings snapshot when None."""
    return tol if tol is not None else Tolerances.from_settings()
