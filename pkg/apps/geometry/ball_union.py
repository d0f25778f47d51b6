"""
Disk configurations, their validation as ball-polytopes and exact union areas.

`validate()` turns a `BallConfiguration` into a `BallPolytope`: redundant
disks are dropped (with a warning record), every boundary corner and arc of
the union is computed, and boundary cycles plus connected components are
recorded so the topology of the union is known without sampling.

Arcs always run counterclockwise around their own disk, which keeps the
union on their left. Areas follow from that orientation: Green's formula on
the plane, Gauss-Bonnet on the sphere and the hyperbolic plane.

Strict mode (the default, used for user scenes) rejects every triple point.
Non-strict mode is for derived configurations, such as disks centred on a
central set, where several circles pass through the same corner by
construction; it only rejects concurrency that breaks the boundary into a
non-manifold.

Usage:
    config = BallConfiguration.build(Surface.EUCLIDEAN, [((0, 0), 1), ((1, 0), 1)])
    poly = validate(config)
    union_area(poly)        # 5.0548...
    topology(poly)          # TopologyReport(component_count=1, hole_count=0, ...)
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from scipy.spatial import cKDTree

from apps.core.tolerances import Tolerances, resolve

from .exceptions import (
    CoincidentCircles,
    CornerOnThirdCircle,
    DegenerateCoincident,
    EmptyConfiguration,
    NonSphericalSurface,
    SphereCovered,
    TangentCircles,
    UnvalidatedInput,
    ZeroRadius,
)
from .kernel import (
    TWO_PI,
    Disk,
    Surface,
    circle_angle,
    circle_intersections,
    circle_point,
    circle_tangent,
    distances,
    geodesic_curvature,
    make_disk,
    make_point,
    sn,
    turning_angle,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class BallConfiguration:
    surface: Surface
    disks: Tuple[Disk, ...]

    @classmethod
    def build(cls, surf: Surface, items: Iterable) -> "BallConfiguration":
        """Build from (center, radius) pairs or ready-made disks."""
        disks = []
        for item in items:
            if isinstance(item, Disk):
                disks.append(make_disk(surf, item.center, item.radius))
            else:
                center, radius = item
                disks.append(make_disk(surf, center, radius))
        return cls(surf, tuple(disks))

    def __len__(self):
        return len(self.disks)

    @property
    def centers(self) -> np.ndarray:
        if not self.disks:
            return np.zeros((0, self.surface.dim))
        return np.vstack([d.center for d in self.disks])

    @property
    def radii(self) -> np.ndarray:
        return np.array([d.radius for d in self.disks], dtype=float)

    def subset(self, indices: Sequence[int]) -> "BallConfiguration":
        return BallConfiguration(self.surface, tuple(self.disks[i] for i in indices))

    def as_dict(self):
        return {
            "surface": self.surface.value,
            "disks": [d.as_dict() for d in self.disks],
        }


@dataclass(frozen=True)
class DroppedDisk:
    index: int
    reason: str
    kept: int

    def as_dict(self):
        return {"index": self.index, "reason": self.reason, "kept": self.kept}


@dataclass(frozen=True, eq=False)
class Corner:
    point: np.ndarray
    circles: Tuple[int, ...]

    def as_dict(self):
        return {
            "point": [float(x) for x in self.point],
            "circles": list(self.circles),
        }


@dataclass(frozen=True)
class BoundaryArc:
    """Counterclockwise arc of one boundary circle; full circles have no corners."""

    disk_index: int
    start_corner: Optional[int]
    end_corner: Optional[int]
    start_angle: float
    span: float

    @property
    def full(self) -> bool:
        return self.start_corner is None

    @property
    def end_angle(self) -> float:
        return self.start_angle + self.span

    def as_dict(self):
        return {
            "disk": self.disk_index,
            "start_corner": self.start_corner,
            "end_corner": self.end_corner,
            "start_angle": self.start_angle,
            "span": self.span,
        }


@dataclass(frozen=True)
class TopologyReport:
    component_count: int
    hole_count: int
    euler_characteristic: int
    simply_connected: bool

    def as_dict(self):
        return {
            "component_count": self.component_count,
            "hole_count": self.hole_count,
            "euler_characteristic": self.euler_characteristic,
            "simply_connected": self.simply_connected,
        }


@dataclass(frozen=True, eq=False)
class BallPolytope:
    """A validated configuration with its boundary arrangement.

    Disk indices everywhere refer to positions in `config.disks`; `active`
    lists the disks that survived redundancy elimination.
    """

    config: BallConfiguration
    active: Tuple[int, ...]
    dropped: Tuple[DroppedDisk, ...]
    corners: Tuple[Corner, ...]
    arcs: Tuple[BoundaryArc, ...]
    cycles: Tuple[Tuple[int, ...], ...]
    components: Tuple[FrozenSet[int], ...]
    strict: bool = True
    tolerances: Tolerances = field(default_factory=Tolerances)

    @property
    def surface(self) -> Surface:
        return self.config.surface

    def disk(self, index: int) -> Disk:
        return self.config.disks[index]

    @property
    def active_config(self) -> BallConfiguration:
        return self.config.subset(self.active)

    def arc_point(self, arc: BoundaryArc, fraction: float = 0.5) -> np.ndarray:
        disk = self.disk(arc.disk_index)
        theta = arc.start_angle + fraction * arc.span
        return circle_point(self.surface, disk.center, disk.radius, theta)

    def arc_length(self, arc: BoundaryArc) -> float:
        return sn(self.surface, self.disk(arc.disk_index).radius) * arc.span

    def arc_points(self, arc: BoundaryArc, count: int) -> np.ndarray:
        fractions = np.linspace(0.0, 1.0, count)
        return np.vstack([self.arc_point(arc, float(t)) for t in fractions])

    def warnings(self) -> List[str]:
        return [
            f"disk {d.index} dropped ({d.reason}, kept disk {d.kept})"
            for d in self.dropped
        ]


# ----------------------------------------------------------------------
# Membership
# ----------------------------------------------------------------------


def _as_config(config) -> BallConfiguration:
    return config.config if isinstance(config, BallPolytope) else config


def depths(config, p) -> np.ndarray:
    """d(p, center_i) - r_i for every disk."""
    config = _as_config(config)
    return distances(config.surface, config.centers, p) - config.radii


def contains(config, p, tol: Optional[Tolerances] = None) -> bool:
    """Closed-set membership of p in the union."""
    config = _as_config(config)
    if not config.disks:
        return False
    return bool(depths(config, p).min() <= resolve(tol).pred)


def contains_many(config, P: np.ndarray, slack: float = 0.0) -> np.ndarray:
    """Boolean mask of the rows of P lying in the union (vectorized)."""
    config = _as_config(config)
    P = np.asarray(P, dtype=float)
    inside = np.zeros(len(P), dtype=bool)
    for disk in config.disks:
        inside |= distances(config.surface, P, disk.center) <= disk.radius + slack
    return inside


# ----------------------------------------------------------------------
# Validation
# ----------------------------------------------------------------------


def validate(
    config: BallConfiguration, strict: bool = True, tol: Optional[Tolerances] = None
) -> BallPolytope:
    tol = resolve(tol)
    surf = config.surface
    if not config.disks:
        raise EmptyConfiguration()
    for i, disk in enumerate(config.disks):
        if disk.radius <= tol.pred:
            raise ZeroRadius(f"disk {i} has radius {disk.radius!r}", indices=[i])

    active, dropped = _drop_redundant(config, strict, tol)
    raw = _raw_intersections(config, active, tol)
    corners = _corners(config, active, raw, strict, tol)
    arcs, corners = _arcs(config, active, corners, tol)
    if surf is Surface.SPHERICAL and not arcs:
        raise SphereCovered(indices=active)

    cycles = _cycles(arcs)
    components = _components(config, active, tol)
    poly = BallPolytope(
        config=config,
        active=tuple(active),
        dropped=tuple(dropped),
        corners=tuple(corners),
        arcs=tuple(arcs),
        cycles=cycles,
        components=components,
        strict=strict,
        tolerances=tol,
    )
    logger.debug(
        "validated %s configuration: %d disks, %d active, %d corners, %d arcs",
        surf.value,
        len(config.disks),
        len(active),
        len(corners),
        len(arcs),
    )
    return poly


def _drop_redundant(config, strict, tol):
    surf = config.surface
    order = sorted(range(len(config.disks)), key=lambda i: (-config.disks[i].radius, i))
    active: List[int] = []
    dropped: List[DroppedDisk] = []
    for j in order:
        dj = config.disks[j]
        for i in active:
            di = config.disks[i]
            d = distances(surf, di.center[None, :], dj.center)[0]
            if surf is Surface.SPHERICAL and d >= math.pi - tol.pred:
                if abs(di.radius + dj.radius - math.pi) <= tol.pred:
                    raise SphereCovered(
                        "disks are complementary hemispheres of one circle",
                        indices=sorted((i, j)),
                    )
            if d <= tol.pred and abs(di.radius - dj.radius) <= tol.pred:
                if strict:
                    raise CoincidentCircles(indices=sorted((i, j)))
                logger.warning("dropping duplicate disk %d (same as disk %d)", j, i)
                dropped.append(DroppedDisk(j, "duplicate", i))
                break
            if d + dj.radius <= di.radius + tol.pred:
                logger.warning("dropping redundant disk %d (inside disk %d)", j, i)
                dropped.append(DroppedDisk(j, "contained", i))
                break
        else:
            active.append(j)
    active.sort()
    return active, dropped


def _raw_intersections(config, active, tol):
    surf = config.surface
    raw = []
    for a, i in enumerate(active):
        for j in active[a + 1 :]:
            di, dj = config.disks[i], config.disks[j]
            if surf is Surface.SPHERICAL:
                d = distances(surf, di.center[None, :], dj.center)[0]
                excess = d - (TWO_PI - di.radius - dj.radius)
                if abs(excess) <= tol.pred:
                    raise TangentCircles(indices=[i, j])
                if excess > 0.0:
                    raise SphereCovered(
                        "two disks together cover the sphere", indices=[i, j]
                    )
            try:
                found = circle_intersections(surf, di, dj, tol)
            except DegenerateCoincident:
                raise CoincidentCircles(indices=[i, j])
            if found.tangent:
                raise TangentCircles(indices=[i, j])
            for point in found.points:
                raw.append((point, i, j))
    return raw


def _clusters(surf, points, radius):
    if not points:
        return []
    tree = cKDTree(np.vstack(points))
    graph = nx.Graph()
    graph.add_nodes_from(range(len(points)))
    graph.add_edges_from(tree.query_pairs(radius))
    return sorted(sorted(c) for c in nx.connected_components(graph))


def _corners(config, active, raw, strict, tol) -> List[Corner]:
    surf = config.surface
    corners = []
    for members in _clusters(surf, [p for p, _, _ in raw], tol.touch):
        circles = sorted({k for m in members for k in raw[m][1:]})
        if strict and len(circles) > 2:
            raise CornerOnThirdCircle(indices=circles)
        point = make_point(surf, np.mean([raw[m][0] for m in members], axis=0))
        others = [k for k in active if k not in circles]
        if others:
            depth = depths(config.subset(others), point)
            if (depth < -tol.pred).any():
                continue
            touching = [others[n] for n in np.flatnonzero(np.abs(depth) <= tol.pred)]
            if touching:
                raise CornerOnThirdCircle(indices=sorted(circles + touching))
        corners.append(Corner(point=point, circles=tuple(circles)))
    return corners


def _uncovered(config, active, i, point, tol) -> bool:
    others = [k for k in active if k != i]
    if not others:
        return True
    return bool(depths(config.subset(others), point).min() >= -tol.pred)


def _arcs(config, active, corners, tol):
    surf = config.surface
    arcs: List[BoundaryArc] = []
    for i in active:
        disk = config.disks[i]
        on_circle = [
            (circle_angle(surf, disk.center, c.point), n)
            for n, c in enumerate(corners)
            if i in c.circles
        ]
        on_circle.sort()
        if not on_circle:
            sample = circle_point(surf, disk.center, disk.radius, 0.0)
            if _uncovered(config, active, i, sample, tol):
                arcs.append(BoundaryArc(i, None, None, 0.0, TWO_PI))
            continue
        for k, (theta, n) in enumerate(on_circle):
            next_theta, next_n = on_circle[(k + 1) % len(on_circle)]
            span = (next_theta - theta) % TWO_PI or TWO_PI
            middle = circle_point(surf, disk.center, disk.radius, theta + span / 2.0)
            if _uncovered(config, active, i, middle, tol):
                arcs.append(BoundaryArc(i, n, next_n, theta, span))

    incoming: Dict[int, List[int]] = {}
    outgoing: Dict[int, List[int]] = {}
    for a, arc in enumerate(arcs):
        if not arc.full:
            outgoing.setdefault(arc.start_corner, []).append(a)
            incoming.setdefault(arc.end_corner, []).append(a)

    keep = []
    for n, corner in enumerate(corners):
        n_in, n_out = len(incoming.get(n, [])), len(outgoing.get(n, []))
        if n_in == n_out == 0:
            continue
        if n_in != 1 or n_out != 1:
            raise CornerOnThirdCircle(
                "boundary is not a manifold at this corner", indices=corner.circles
            )
        keep.append(n)

    renumber = {old: new for new, old in enumerate(keep)}
    corners = [corners[n] for n in keep]
    arcs = [
        arc
        if arc.full
        else BoundaryArc(
            arc.disk_index,
            renumber[arc.start_corner],
            renumber[arc.end_corner],
            arc.start_angle,
            arc.span,
        )
        for arc in arcs
    ]
    return arcs, corners


def _cycles(arcs: Sequence[BoundaryArc]) -> Tuple[Tuple[int, ...], ...]:
    successor = {}
    starts = {arc.start_corner: a for a, arc in enumerate(arcs) if not arc.full}
    for a, arc in enumerate(arcs):
        successor[a] = a if arc.full else starts[arc.end_corner]
    seen = set()
    cycles = []
    for a in range(len(arcs)):
        if a in seen:
            continue
        cycle = []
        b = a
        while b not in seen:
            seen.add(b)
            cycle.append(b)
            b = successor[b]
        cycles.append(tuple(cycle))
    return tuple(cycles)


def overlap_graph(config: BallConfiguration, indices: Sequence[int], tol=None) -> nx.Graph:
    """Graph on disk indices joining disks whose interiors overlap."""
    tol = resolve(tol)
    graph = nx.Graph()
    graph.add_nodes_from(indices)
    for a, i in enumerate(indices):
        di = config.disks[i]
        for j in indices[a + 1 :]:
            dj = config.disks[j]
            d = distances(config.surface, di.center[None, :], dj.center)[0]
            if d < di.radius + dj.radius - tol.pred:
                graph.add_edge(i, j)
    return graph


def _components(config, active, tol) -> Tuple[FrozenSet[int], ...]:
    graph = overlap_graph(config, active, tol)
    return tuple(
        sorted((frozenset(c) for c in nx.connected_components(graph)), key=min)
    )


# ----------------------------------------------------------------------
# Area and topology
# ----------------------------------------------------------------------


def _require_polytope(poly):
    if not isinstance(poly, BallPolytope):
        raise UnvalidatedInput("expected the result of validate()")


def union_area(poly: BallPolytope) -> float:
    _require_polytope(poly)
    surf = poly.surface
    if surf is Surface.EUCLIDEAN:
        return _green_area(poly)

    boundary = 0.0
    for arc in poly.arcs:
        radius = poly.disk(arc.disk_index).radius
        boundary += geodesic_curvature(surf, radius) * poly.arc_length(arc)
    turning = sum(_turning_at(poly, arc) for arc in poly.arcs if not arc.full)
    chi = topology(poly).euler_characteristic
    return (TWO_PI * chi - boundary - turning) / surf.curvature


def _green_area(poly: BallPolytope) -> float:
    total = 0.0
    for arc in poly.arcs:
        disk = poly.disk(arc.disk_index)
        (cx, cy), r = disk.center, disk.radius
        t1, t2 = arc.start_angle, arc.end_angle
        total += 0.5 * (
            r * cx * (math.sin(t2) - math.sin(t1))
            - r * cy * (math.cos(t2) - math.cos(t1))
            + r * r * (t2 - t1)
        )
    return total


def _turning_at(poly: BallPolytope, arc: BoundaryArc) -> float:
    """Exterior angle at the corner where `arc` starts."""
    surf = poly.surface
    incoming = next(
        a for a in poly.arcs if not a.full and a.end_corner == arc.start_corner
    )
    t_in = circle_tangent(surf, poly.disk(incoming.disk_index).center, incoming.end_angle)
    t_out = circle_tangent(surf, poly.disk(arc.disk_index).center, arc.start_angle)
    return turning_angle(surf, poly.corners[arc.start_corner].point, t_in, t_out)


def topology(poly: BallPolytope) -> TopologyReport:
    _require_polytope(poly)
    components = len(poly.components)
    holes = len(poly.cycles) - components
    return TopologyReport(
        component_count=components,
        hole_count=holes,
        euler_characteristic=components - holes,
        simply_connected=components == 1 and holes == 0,
    )


def union_area_of(
    config: BallConfiguration, strict: bool = False, tol: Optional[Tolerances] = None
) -> float:
    """Validate and measure in one step (derived configurations are non-strict)."""
    return union_area(validate(config, strict=strict, tol=tol))


def complement_config(config: BallConfiguration) -> BallConfiguration:
    """Antipodal complements B(-c, pi - r) of spherical disks."""
    if config.surface is not Surface.SPHERICAL:
        raise NonSphericalSurface()
    return BallConfiguration(
        config.surface,
        tuple(
            make_disk(config.surface, -d.center, math.pi - d.radius)
            for d in config.disks
        ),
    )


def intersection_area_sphere(
    config: BallConfiguration, strict: bool = True, tol: Optional[Tolerances] = None
) -> float:
    """Area of the intersection of spherical disks, through their complements."""
    complements = complement_config(config)
    try:
        covered = union_area(validate(complements, strict=strict, tol=tol))
    except SphereCovered:
        return 0.0
    return 2.0 * TWO_PI - covered


def jitter(
    config: BallConfiguration, seed: int, magnitude: float
) -> BallConfiguration:
    """Seeded radius perturbation used to escape degenerate arrangements."""
    rng = np.random.default_rng(seed)
    noise = rng.uniform(-magnitude, magnitude, size=len(config.disks))
    disks = []
    for disk, delta in zip(config.disks, noise):
        radius = max(disk.radius + float(delta), magnitude)
        if config.surface is Surface.SPHERICAL:
            radius = min(radius, math.pi - magnitude)
        disks.append(Disk(disk.center, radius))
    logger.info("jittered %d radii with seed %d (magnitude %g)", len(disks), seed, magnitude)
    return BallConfiguration(config.surface, tuple(disks))


def boundary_samples(poly: BallPolytope, per_radian: int = 64) -> np.ndarray:
    """Points along every boundary arc, for oracles and plots."""
    chunks = []
    for arc in poly.arcs:
        count = max(int(arc.span * per_radian), 4)
        chunks.append(poly.arc_points(arc, count))
    return np.vstack(chunks) if chunks else np.zeros((0, poly.surface.dim))
