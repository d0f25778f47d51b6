"""
Scene documents.

A scene is a JSON document describing a disk configuration on one surface,
optionally with a contraction and named selections of central-set cells:

    {
      "version": 1,
      "surface": "euclidean",
      "disks": [{"center": [0.0, 0.0], "radius": 1.0}, ...],
      "contraction": {"type": "folds", "lines": [[[0.75, -1.0], [0.75, 1.0]]]},
      "selections": {"X": {"vertices": [0, 2], "edges": [0]}},
      "metadata": {"label": "two disks", "seed": 1}
    }

Points are lists of 2 coordinates on the plane and of 3 coordinates (unit
vectors, or hyperboloid points) on the sphere and the hyperbolic plane. Fold
lines are applied right-to-left; a `pointmap` contraction lists
`[source, image]` pairs and only moves disk centers.

Coordinates are kept exactly as written so that serialize(parse(doc))
reproduces every number; geometry is built from renormalized copies.
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

from apps.contraction.piecewise import CenterMap, PiecewiseIsometry, compose_folds
from apps.core.tolerances import Tolerances, resolve
from apps.geometry.ball_union import BallConfiguration
from apps.geometry.central_set import CentralComplex
from apps.geometry.exceptions import GeometryError
from apps.geometry.kernel import Surface, line_through, make_disk, make_point
from apps.geometry.subcomplex import Subcomplex

from .exceptions import (
    InvalidDisk,
    InvalidSelection,
    IoError,
    SceneSyntaxError,
    UnknownSurface,
)

logger = logging.getLogger(__name__)

SCENE_VERSION = 1

Coords = Tuple[float, ...]


@dataclass(frozen=True)
class SceneDisk:
    center: Coords
    radius: float


@dataclass(frozen=True)
class ContractionSpec:
    kind: str
    pairs: Tuple[Tuple[Coords, Coords], ...]

    def build(
        self, surf: Surface, tol: Optional[Tolerances] = None
    ) -> Union[PiecewiseIsometry, CenterMap]:
        tol = resolve(tol)
        if self.kind == "pointmap":
            return CenterMap.from_pairs(
                surf,
                [(make_point(surf, s), make_point(surf, t)) for s, t in self.pairs],
            )
        lines = []
        for k, (p, q) in enumerate(self.pairs):
            try:
                lines.append(line_through(surf, make_point(surf, p), make_point(surf, q), tol))
            except GeometryError as exc:
                exc.path = f"/contraction/lines/{k}"
                raise
        return compose_folds(surf, lines)

    def as_dict(self):
        key = "pairs" if self.kind == "pointmap" else "lines"
        return {
            "type": self.kind,
            key: [[list(p), list(q)] for p, q in self.pairs],
        }


@dataclass(frozen=True)
class Selection:
    vertices: Tuple[int, ...] = ()
    edges: Tuple[int, ...] = ()
    close: bool = False

    def resolve(self, cc: CentralComplex) -> Subcomplex:
        return Subcomplex.of(cc, self.vertices, self.edges, close=self.close)

    def as_dict(self):
        data: Dict[str, Any] = {"vertices": list(self.vertices), "edges": list(self.edges)}
        if self.close:
            data["close"] = True
        return data


@dataclass(frozen=True, eq=False)
class Scene:
    surface: Surface
    disks: Tuple[SceneDisk, ...]
    contraction: Optional[ContractionSpec] = None
    selections: Dict[str, Selection] = field(default_factory=dict)
    label: str = ""
    seed: Optional[int] = None

    @property
    def config(self) -> BallConfiguration:
        return BallConfiguration(
            self.surface,
            tuple(make_disk(self.surface, d.center, d.radius) for d in self.disks),
        )

    def selection(self, name: str, cc: CentralComplex) -> Subcomplex:
        if name not in self.selections:
            raise InvalidSelection(f"no selection named {name!r}", path=f"/selections/{name}")
        try:
            return self.selections[name].resolve(cc)
        except GeometryError as exc:
            raise InvalidSelection(exc.message, indices=exc.indices, path=f"/selections/{name}")

    def build_contraction(self, tol: Optional[Tolerances] = None):
        if self.contraction is None:
            return None
        return self.contraction.build(self.surface, tol)

    def as_dict(self):
        doc: Dict[str, Any] = {
            "version": SCENE_VERSION,
            "surface": self.surface.value,
            "disks": [{"center": list(d.center), "radius": d.radius} for d in self.disks],
        }
        if self.contraction is not None:
            doc["contraction"] = self.contraction.as_dict()
        if self.selections:
            doc["selections"] = {k: v.as_dict() for k, v in self.selections.items()}
        metadata: Dict[str, Any] = {}
        if self.label:
            metadata["label"] = self.label
        if self.seed is not None:
            metadata["seed"] = self.seed
        if metadata:
            doc["metadata"] = metadata
        return doc


def scene_from_config(
    config: BallConfiguration, label: str = "", seed: Optional[int] = None, **kwargs
) -> Scene:
    disks = tuple(
        SceneDisk(tuple(float(x) for x in d.center), float(d.radius)) for d in config.disks
    )
    return Scene(config.surface, disks, label=label, seed=seed, **kwargs)


# ----------------------------------------------------------------------
# Parsing
# ----------------------------------------------------------------------


def _coords(value, surf: Surface, path: str, error=InvalidDisk) -> Coords:
    if not isinstance(value, list) or not all(
        isinstance(x, (int, float)) and not isinstance(x, bool) for x in value
    ):
        raise error("coordinates must be a list of numbers", path=path)
    try:
        make_point(surf, value)
    except GeometryError as exc:
        raise error(exc.message, path=path)
    return tuple(float(x) for x in value)


def _disk(item, surf: Surface, k: int) -> SceneDisk:
    path = f"/disks/{k}"
    if not isinstance(item, dict) or "center" not in item or "radius" not in item:
        raise InvalidDisk("a disk needs a center and a radius", indices=[k], path=path)
    center = _coords(item["center"], surf, f"{path}/center")
    radius = item["radius"]
    if isinstance(radius, bool) or not isinstance(radius, (int, float)):
        raise InvalidDisk("radius must be a number", indices=[k], path=f"{path}/radius")
    try:
        make_disk(surf, center, radius)
    except GeometryError as exc:
        raise InvalidDisk(exc.message, indices=[k], path=f"{path}/radius")
    return SceneDisk(center, float(radius))


def _contraction(item, surf: Surface) -> ContractionSpec:
    if not isinstance(item, dict) or item.get("type") not in ("folds", "pointmap"):
        raise SceneSyntaxError(
            'contraction type must be "folds" or "pointmap"', path="/contraction/type"
        )
    kind = item["type"]
    key = "lines" if kind == "folds" else "pairs"
    entries = item.get(key, [])
    if not isinstance(entries, list):
        raise SceneSyntaxError(f"{key} must be a list", path=f"/contraction/{key}")
    pairs = []
    for k, entry in enumerate(entries):
        path = f"/contraction/{key}/{k}"
        if not isinstance(entry, list) or len(entry) != 2:
            raise SceneSyntaxError("expected a pair of points", path=path)
        pairs.append(
            (
                _coords(entry[0], surf, f"{path}/0", SceneSyntaxError),
                _coords(entry[1], surf, f"{path}/1", SceneSyntaxError),
            )
        )
    return ContractionSpec(kind, tuple(pairs))


def _selection(name: str, item) -> Selection:
    path = f"/selections/{name}"
    if not isinstance(item, dict):
        raise InvalidSelection("a selection is an object", path=path)
    lists = []
    for key in ("vertices", "edges"):
        values = item.get(key, [])
        if not isinstance(values, list) or not all(
            isinstance(v, int) and not isinstance(v, bool) for v in values
        ):
            raise InvalidSelection(f"{key} must be a list of integers", path=f"{path}/{key}")
        lists.append(tuple(values))
    return Selection(lists[0], lists[1], bool(item.get("close", False)))


def parse_scene(document: str) -> Scene:
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise SceneSyntaxError(f"{exc.msg} at line {exc.lineno}", line=exc.lineno)
    if not isinstance(doc, dict):
        raise SceneSyntaxError("a scene is a JSON object", path="")
    version = doc.get("version", SCENE_VERSION)
    if version != SCENE_VERSION:
        raise SceneSyntaxError(f"unsupported scene version {version!r}", path="/version")

    try:
        surf = Surface(doc.get("surface"))
    except ValueError:
        raise UnknownSurface(f"unknown surface {doc.get('surface')!r}", path="/surface")
    disks = doc.get("disks")
    if not isinstance(disks, list):
        raise SceneSyntaxError("disks must be a list", path="/disks")

    contraction = None
    if doc.get("contraction") is not None:
        contraction = _contraction(doc["contraction"], surf)
    selections = doc.get("selections") or {}
    if not isinstance(selections, dict):
        raise SceneSyntaxError("selections must be an object", path="/selections")
    metadata = doc.get("metadata") or {}
    if not isinstance(metadata, dict):
        raise SceneSyntaxError("metadata must be an object", path="/metadata")
    seed = metadata.get("seed")
    if seed is not None and (isinstance(seed, bool) or not isinstance(seed, int)):
        raise SceneSyntaxError("seed must be an integer", path="/metadata/seed")

    return Scene(
        surface=surf,
        disks=tuple(_disk(item, surf, k) for k, item in enumerate(disks)),
        contraction=contraction,
        selections={name: _selection(name, item) for name, item in selections.items()},
        label=str(metadata.get("label", "")),
        seed=seed,
    )


def serialize_scene(scene: Scene) -> str:
    return json.dumps(scene.as_dict(), indent=2, sort_keys=True) + "\n"


def load_scene(path) -> Scene:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc.strerror}")
    scene = parse_scene(text)
    logger.debug("loaded %s scene with %d disks from %s", scene.surface.value, len(scene.disks), path)
    return scene


def save_scene(scene: Scene, path) -> None:
    write_text(path, serialize_scene(scene))


def write_text(path, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc.strerror}")
