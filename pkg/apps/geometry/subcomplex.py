"""
Closed subcomplexes of a central set and the disk unions they carry.

A `Subcomplex` is a set of vertices and whole edges of a `CentralComplex`,
closed under taking edge endpoints. Its sub-union U_X is the union of the
maximal disks centred on X, which is the finite union of its vertex disks.

Subcomplexes survive edge subdivision through `lift()`, which replays the
parent's split history: a split edge contributes both halves and the new
vertex.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, List, Optional, Tuple

import networkx as nx
import numpy as np
from scipy.optimize import minimize_scalar

from apps.core.tolerances import Tolerances, resolve

from .ball_union import BallConfiguration, contains, validate
from .central_set import (
    CentralComplex,
    Location,
    central_set,
    relative_central_set,
    segment_distance,
    vertex_config,
)
from .exceptions import EmptySubcomplex, LocationOffComplex, NotClosed
from .kernel import Disk, distances

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Subcomplex:
    parent: CentralComplex
    vertices: FrozenSet[int]
    edges: FrozenSet[int]

    @classmethod
    def of(
        cls,
        parent: CentralComplex,
        vertices: Iterable[int] = (),
        edges: Iterable[int] = (),
        close: bool = False,
    ) -> "Subcomplex":
        """Build a subcomplex; `close=True` adds missing edge endpoints."""
        vertices, edges = frozenset(vertices), frozenset(edges)
        bad_v = [n for n in vertices if not 0 <= n < len(parent.vertices)]
        bad_e = [n for n in edges if not 0 <= n < len(parent.edges)]
        if bad_v or bad_e:
            raise LocationOffComplex(
                f"unknown vertices {sorted(bad_v)} or edges {sorted(bad_e)}"
            )
        ends = frozenset(
            k for n in edges for k in (parent.edges[n].u, parent.edges[n].v)
        )
        if close:
            vertices = vertices | ends
        elif not ends <= vertices:
            raise NotClosed(indices=sorted(ends - vertices))
        return cls(parent, vertices, edges)

    @classmethod
    def whole(cls, parent: CentralComplex) -> "Subcomplex":
        return cls(parent, frozenset(range(len(parent.vertices))), frozenset(range(len(parent.edges))))

    @property
    def empty(self) -> bool:
        return not self.vertices

    def _check(self, other: "Subcomplex"):
        if other.parent is not self.parent:
            raise LocationOffComplex("subcomplexes of different complexes")

    def union(self, other: "Subcomplex") -> "Subcomplex":
        self._check(other)
        return Subcomplex(self.parent, self.vertices | other.vertices, self.edges | other.edges)

    def intersection(self, other: "Subcomplex") -> "Subcomplex":
        self._check(other)
        return Subcomplex(self.parent, self.vertices & other.vertices, self.edges & other.edges)

    def complement_closure(self) -> "Subcomplex":
        """Closure of the complement: every other edge plus every other vertex."""
        edges = frozenset(range(len(self.parent.edges))) - self.edges
        vertices = frozenset(range(len(self.parent.vertices))) - self.vertices
        return Subcomplex.of(self.parent, vertices, edges, close=True)

    def relative_boundary(self) -> "Subcomplex":
        return self.intersection(self.complement_closure())

    def covers(self, other: "Subcomplex") -> bool:
        return other.vertices <= self.vertices and other.edges <= self.edges

    def lift(self, refined: CentralComplex) -> "Subcomplex":
        """The same point set inside a subdivision of the parent."""
        history = refined.split_history
        done = len(self.parent.split_history)
        if history[:done] != self.parent.split_history:
            raise LocationOffComplex("complex is not a subdivision of the parent")
        vertices, edges = set(self.vertices), set(self.edges)
        for old_edge, new_edge, new_vertex in history[done:]:
            if old_edge in edges:
                edges.add(new_edge)
                vertices.add(new_vertex)
        return Subcomplex(refined, frozenset(vertices), frozenset(edges))

    def graph(self) -> nx.Graph:
        graph = nx.MultiGraph()
        graph.add_nodes_from(self.vertices)
        for n in self.edges:
            edge = self.parent.edges[n]
            graph.add_edge(edge.u, edge.v, key=n)
        return graph

    def leaves(self) -> List[int]:
        graph = self.graph()
        return sorted(n for n in self.vertices if graph.degree(n) == 1)

    def leaf_edge(self, vertex: int) -> int:
        """The only edge of the subcomplex at a leaf vertex."""
        edges = [
            n
            for n in self.edges
            if vertex in (self.parent.edges[n].u, self.parent.edges[n].v)
        ]
        if len(edges) != 1:
            raise LocationOffComplex(f"vertex {vertex} is not a leaf", indices=[vertex])
        return edges[0]

    def without_leaf(self, vertex: int) -> "Subcomplex":
        """Closure of the complement of a leaf edge: drop the edge and the leaf."""
        edge = self.leaf_edge(vertex)
        return Subcomplex(self.parent, self.vertices - {vertex}, self.edges - {edge})

    def as_dict(self):
        return {"vertices": sorted(self.vertices), "edges": sorted(self.edges)}


def sub_union(cc: CentralComplex, X: Subcomplex) -> BallConfiguration:
    """Disks at the vertices of X with their maximal radii."""
    if X.empty:
        raise EmptySubcomplex()
    return vertex_config(cc, sorted(X.vertices))


@dataclass
class SubCentralSetReport:
    matches: bool
    vertex_count: int
    edge_count: int
    expected_vertex_count: int
    expected_edge_count: int
    max_deviation: float
    discrepancies: List[str] = field(default_factory=list)

    def as_dict(self):
        return {
            "matches": self.matches,
            "vertex_count": self.vertex_count,
            "edge_count": self.edge_count,
            "expected_vertex_count": self.expected_vertex_count,
            "expected_edge_count": self.expected_edge_count,
            "max_deviation": self.max_deviation,
            "discrepancies": list(self.discrepancies),
        }


def _key_vertices(graph: nx.Graph) -> List[int]:
    """Vertices where the complex branches or ends."""
    return sorted(n for n in graph.nodes if graph.degree(n) != 2)


def _samples(cc: CentralComplex, vertices, edges, per_edge: int = 9) -> np.ndarray:
    chunks = [cc.vertices[n].point[None, :] for n in sorted(vertices)]
    for n in sorted(edges):
        chunks.append(np.vstack([cc.edge_point(n, float(t)) for t in np.linspace(0, 1, per_edge)]))
    return np.vstack(chunks)


def _distance_to(cc: CentralComplex, vertices, edges, x, tol) -> float:
    surf = cc.surface
    best = math.inf
    for n in vertices:
        best = min(best, float(distances(surf, cc.vertices[n].point[None, :], x)[0]))
    for n in edges:
        edge = cc.edges[n]
        best = min(
            best,
            segment_distance(surf, x, cc.vertices[edge.u].point, cc.vertices[edge.v].point, tol),
        )
    return best


def sub_central_set_check(
    cc: CentralComplex, X: Subcomplex, tol: Optional[Tolerances] = None
) -> SubCentralSetReport:
    """Recompute the central set of U_X and compare it with X."""
    tol = resolve(tol)
    surf = cc.surface
    limit = 1e3 * tol.pred
    own = central_set(validate(sub_union(cc, X), strict=False, tol=tol), tol)
    own_vertices = range(len(own.vertices))
    own_edges = range(len(own.edges))

    discrepancies = []
    own_keys = _key_vertices(own.graph())
    expected_keys = _key_vertices(X.graph())
    for n in expected_keys:
        point = cc.vertices[n].point
        if not any(distances(surf, own.vertices[k].point[None, :], point)[0] <= limit for k in own_keys):
            discrepancies.append(f"vertex {n} of the selection is not a vertex of the recomputed central set")
    for k in own_keys:
        point = own.vertices[k].point
        if not any(distances(surf, cc.vertices[n].point[None, :], point)[0] <= limit for n in expected_keys):
            discrepancies.append(f"recomputed vertex {k} has no counterpart in the selection")

    deviation = 0.0
    for x in _samples(cc, X.vertices, X.edges):
        deviation = max(deviation, _distance_to(own, own_vertices, own_edges, x, tol))
    for x in _samples(own, own_vertices, own_edges):
        deviation = max(deviation, _distance_to(cc, X.vertices, X.edges, x, tol))
    if deviation > limit:
        discrepancies.append(f"geometric deviation {deviation:.3g} exceeds {limit:.3g}")

    return SubCentralSetReport(
        matches=not discrepancies,
        vertex_count=len(own.vertices),
        edge_count=len(own.edges),
        expected_vertex_count=len(X.vertices),
        expected_edge_count=len(X.edges),
        max_deviation=deviation,
        discrepancies=discrepancies,
    )


@dataclass(frozen=True, eq=False)
class SplittingWitness:
    found: bool
    vertex: Optional[int] = None
    point: Optional[np.ndarray] = None
    radius: Optional[float] = None

    def as_dict(self):
        return {
            "found": self.found,
            "vertex": self.vertex,
            "point": None if self.point is None else [float(x) for x in self.point],
            "radius": self.radius,
        }


def splitting_witness(
    cc: CentralComplex, X: Subcomplex, Y: Subcomplex, p, tol: Optional[Tolerances] = None
) -> Optional[SplittingWitness]:
    """A centre on X and Y whose maximal disk holds p, or None if p is not in U_X and U_Y.

    Clipped pieces of the relative central set always hang off a selected
    vertex, so a vertex of X and Y suffices as the witness.
    """
    tol = resolve(tol)
    if not (contains(sub_union(cc, X), p, tol) and contains(sub_union(cc, Y), p, tol)):
        return None
    relative = relative_central_set(cc, p, tol)
    common = sorted(relative.vertices & X.intersection(Y).vertices)
    if not common:
        logger.warning("no splitting witness found for point %s", np.round(p, 6).tolist())
        return SplittingWitness(found=False)
    n = common[0]
    return SplittingWitness(
        found=True, vertex=n, point=cc.vertices[n].point, radius=float(cc.vertices[n].radius)
    )


@dataclass(frozen=True, eq=False)
class CoveringCenter:
    location: Location
    point: np.ndarray
    radius: float
    slack: float
    found: bool

    def as_dict(self):
        location = self.location
        return {
            "location": list(location) if isinstance(location, tuple) else location,
            "point": [float(x) for x in self.point],
            "radius": self.radius,
            "slack": self.slack,
            "found": self.found,
        }


def covering_center(
    cc: CentralComplex, disk: Disk, tol: Optional[Tolerances] = None
) -> CoveringCenter:
    """Location q on the complex whose maximal disk contains `disk`.

    The slack r_U(q) - d(q, c) - r is maximized over vertices and edges.
    """
    tol = resolve(tol)
    surf = cc.surface
    best: Tuple[float, Location, np.ndarray, float] = (-math.inf, 0, cc.vertices[0].point, 0.0)
    for n, vertex in enumerate(cc.vertices):
        slack = vertex.radius - float(distances(surf, vertex.point[None, :], disk.center)[0])
        if slack > best[0]:
            best = (slack, n, vertex.point, float(vertex.radius))

    for n in range(len(cc.edges)):

        def loss(t, n=n):
            point = cc.edge_point(n, t)
            return -(cc.edge_radius(n, t) - float(distances(surf, point[None, :], disk.center)[0]))

        grid = np.linspace(0.0, 1.0, 17)
        start = float(grid[int(np.argmin([loss(float(t)) for t in grid]))])
        lo, hi = max(start - 1 / 16, 0.0), min(start + 1 / 16, 1.0)
        result = minimize_scalar(loss, bounds=(lo, hi), method="bounded", options={"xatol": 1e-10})
        t = float(result.x)
        if -result.fun > best[0]:
            best = (-float(result.fun), (n, t), cc.edge_point(n, t), cc.edge_radius(n, t))

    slack = best[0] - disk.radius
    return CoveringCenter(
        location=best[1],
        point=best[2],
        radius=best[3],
        slack=slack,
        found=slack >= -tol.pred,
    )
