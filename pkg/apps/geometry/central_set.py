"""
Central sets (medial axes) of validated disk unions.

The central set of a ball-polytope U is a finite graph: vertices are disk
centres and Voronoi vertices of the boundary corners, edges are straight
geodesic segments on bisectors of pairs of corners. It is built by brute
force over the site set (the boundary corners, plus two samples on every
full boundary circle):

1. candidate vertices are the disk centres and the points equidistant from
   three sites;
2. a candidate is kept when its largest inscribed disk is maximal, meaning
   it touches the boundary in at least two points or along a whole arc;
3. two kept vertices are joined when the points between them touch the
   boundary in exactly the same two corners and no other vertex lies on the
   segment.

Every vertex carries its maximal radius, so the union of the vertex disks
reconstructs U (the pencil of maximal disks along an edge is covered by its
two extreme members).

Usage:
    cc = central_set(validate(config))
    radius_at(cc, 0)                 # maximal radius at vertex 0
    radius_at(cc, (0, 0.5))          # ... at the midpoint of edge 0
    reconstruct(cc)                  # BallConfiguration of vertex disks
    rel = relative_central_set(cc, p)
"""

import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import FrozenSet, List, Optional, Tuple, Union

import networkx as nx
import numpy as np
from scipy.optimize import brentq, minimize_scalar
from scipy.spatial import cKDTree

from apps.core.tolerances import Tolerances, resolve

from .ball_union import BallConfiguration, BallPolytope, contains, contains_many
from .exceptions import (
    DegenerateVoronoi,
    DisconnectedUnion,
    LocationOffComplex,
    NoCircumcenter,
    PointOutsideUnion,
    UnsupportedSurface,
)
from .kernel import (
    TWO_PI,
    Disk,
    Surface,
    circle_angle,
    circle_angles,
    circle_point,
    distances,
    equidistant_point,
    geodesic_eval,
    lift_many,
)

logger = logging.getLogger(__name__)

Location = Union[int, Tuple[int, float], np.ndarray]


class VertexKind(str, Enum):
    DISK_CENTER = "disk_center"
    VORONOI_VERTEX = "voronoi_vertex"
    SUBDIVISION = "subdivision"


@dataclass(frozen=True, eq=False)
class Vertex:
    point: np.ndarray
    radius: float
    kind: VertexKind
    sites: FrozenSet[int]

    def as_dict(self):
        return {
            "point": [float(x) for x in self.point],
            "radius": float(self.radius),
            "kind": self.kind.value,
        }


@dataclass(frozen=True)
class Edge:
    """Segment from vertex u to vertex v on the bisector of two sites."""

    u: int
    v: int
    corners: Tuple[int, int]

    def as_dict(self):
        return {"vertices": [self.u, self.v], "corners": list(self.corners)}


@dataclass(frozen=True, eq=False)
class CentralComplex:
    polytope: BallPolytope
    sites: Tuple[np.ndarray, ...]
    vertices: Tuple[Vertex, ...]
    edges: Tuple[Edge, ...]
    split_history: Tuple[Tuple[int, int, int], ...] = ()
    tolerances: Tolerances = field(default_factory=Tolerances)

    @property
    def surface(self) -> Surface:
        return self.polytope.surface

    @property
    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges)

    def graph(self) -> nx.Graph:
        graph = nx.MultiGraph()
        graph.add_nodes_from(range(len(self.vertices)))
        for n, edge in enumerate(self.edges):
            graph.add_edge(edge.u, edge.v, key=n)
        return graph

    def is_tree(self) -> bool:
        return nx.is_connected(self.graph()) and self.euler_characteristic == 1

    def edge_point(self, edge_index: int, t: float) -> np.ndarray:
        edge = self.edges[edge_index]
        return geodesic_eval(
            self.surface,
            self.vertices[edge.u].point,
            self.vertices[edge.v].point,
            t,
            self.tolerances,
        )

    def edge_radius(self, edge_index: int, t: float) -> float:
        corner = self.sites[self.edges[edge_index].corners[0]]
        point = self.edge_point(edge_index, t)
        return float(distances(self.surface, point[None, :], corner)[0])

    def edge_length(self, edge_index: int) -> float:
        edge = self.edges[edge_index]
        u, v = self.vertices[edge.u].point, self.vertices[edge.v].point
        return float(distances(self.surface, u[None, :], v)[0])

    def subdivide(self, edge_index: int, t: float) -> "CentralComplex":
        """Split an edge at parameter t; the new vertex is appended last."""
        if not 0.0 < t < 1.0:
            raise LocationOffComplex(f"subdivision parameter {t!r} is not inside (0, 1)")
        edge = self.edges[edge_index]
        point = self.edge_point(edge_index, t)
        vertex = Vertex(
            point=point,
            radius=self.edge_radius(edge_index, t),
            kind=VertexKind.SUBDIVISION,
            sites=frozenset(edge.corners),
        )
        w = len(self.vertices)
        edges = list(self.edges)
        edges[edge_index] = Edge(edge.u, w, edge.corners)
        edges.append(Edge(w, edge.v, edge.corners))
        return replace(
            self,
            vertices=self.vertices + (vertex,),
            edges=tuple(edges),
            split_history=self.split_history + ((edge_index, len(edges) - 1, w),),
        )

    def as_dict(self):
        return {
            "surface": self.surface.value,
            "vertices": [v.as_dict() for v in self.vertices],
            "edges": [e.as_dict() for e in self.edges],
            "euler_characteristic": self.euler_characteristic,
        }


# ----------------------------------------------------------------------
# Distance to the boundary
# ----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class BoundaryContacts:
    """Distance from a point to the union's boundary and where it is attained."""

    distance: float
    points: Tuple[np.ndarray, ...]
    sites: FrozenSet[int]
    whole_arcs: Tuple[int, ...]

    @property
    def maximal(self) -> bool:
        return bool(self.whole_arcs) or len(self.points) >= 2


def site_points(poly: BallPolytope) -> Tuple[Tuple[np.ndarray, ...], dict]:
    """Corners, then two opposite samples per full boundary circle.

    Returns the sites and a map from arc index to the site indices on it.
    """
    sites = [c.point for c in poly.corners]
    on_arc = {}
    for a, arc in enumerate(poly.arcs):
        if arc.full:
            start = len(sites)
            sites.append(poly.arc_point(arc, 0.0))
            sites.append(poly.arc_point(arc, 0.5))
            on_arc[a] = (start, start + 1)
        else:
            on_arc[a] = (arc.start_corner, arc.end_corner)
    return tuple(sites), on_arc


def _in_arc(theta: float, arc) -> bool:
    return arc.full or (theta - arc.start_angle) % TWO_PI <= arc.span


def boundary_contacts(
    poly: BallPolytope, x, tol: Optional[Tolerances] = None, sites=None
) -> BoundaryContacts:
    tol = resolve(tol)
    surf = poly.surface
    if sites is None:
        sites = site_points(poly)
    site_list, on_arc = sites
    x = np.asarray(x, dtype=float)

    candidates = []  # (distance, point, site index or None, whole-arc disk or None)
    for a, arc in enumerate(poly.arcs):
        disk = poly.disk(arc.disk_index)
        d = float(distances(surf, disk.center[None, :], x)[0])
        ends = on_arc[a]
        if d <= tol.touch:
            for s in ends:
                candidates.append((disk.radius, site_list[s], s, arc.disk_index))
            continue
        theta = circle_angle(surf, disk.center, x)
        if _in_arc(theta, arc):
            foot = circle_point(surf, disk.center, disk.radius, theta)
            site = _matching_site(surf, foot, ends, site_list, tol)
            candidates.append((abs(d - disk.radius), foot, site, None))
        else:
            for s in ends:
                ds = float(distances(surf, site_list[s][None, :], x)[0])
                candidates.append((ds, site_list[s], s, None))

    best = min(c[0] for c in candidates)
    close = [c for c in candidates if c[0] <= best + tol.touch]
    points: List[np.ndarray] = []
    found_sites = set()
    for _, point, site, _ in close:
        if site is not None:
            if site in found_sites:
                continue
            found_sites.add(site)
        if any(np.linalg.norm(point - q) <= tol.touch for q in points):
            continue
        points.append(point)
    whole = tuple(sorted({c[3] for c in close if c[3] is not None}))
    return BoundaryContacts(
        distance=best,
        points=tuple(points),
        sites=frozenset(found_sites),
        whole_arcs=whole,
    )


def _matching_site(surf, point, ends, site_list, tol):
    for s in ends:
        if np.linalg.norm(site_list[s] - point) <= tol.touch:
            return s
    return None


def is_maximal(poly: BallPolytope, x, tol: Optional[Tolerances] = None) -> bool:
    """Whether the largest disk about x inside the union is a maximal disk."""
    tol = resolve(tol)
    if not contains(poly, x, tol):
        return False
    return boundary_contacts(poly, x, tol).maximal


def boundary_distances(poly: BallPolytope, X: np.ndarray) -> np.ndarray:
    """Distance from every row of X to the boundary of the union (vectorized)."""
    surf = poly.surface
    X = np.asarray(X, dtype=float)
    best = np.full(len(X), np.inf)
    for arc in poly.arcs:
        disk = poly.disk(arc.disk_index)
        d = np.abs(distances(surf, X, disk.center) - disk.radius)
        if not arc.full:
            theta = circle_angles(surf, disk.center, X)
            inside = np.mod(theta - arc.start_angle, TWO_PI) <= arc.span
            ends = [poly.corners[arc.start_corner].point, poly.corners[arc.end_corner].point]
            to_ends = np.minimum(distances(surf, X, ends[0]), distances(surf, X, ends[1]))
            d = np.where(inside, d, to_ends)
        best = np.minimum(best, d)
    return best


# ----------------------------------------------------------------------
# Construction
# ----------------------------------------------------------------------


@dataclass(eq=False)
class _Candidate:
    point: np.ndarray
    kind: VertexKind
    contacts: BoundaryContacts


def central_set(poly: BallPolytope, tol: Optional[Tolerances] = None) -> CentralComplex:
    tol = resolve(tol)
    surf = poly.surface
    if len(poly.components) > 1:
        raise DisconnectedUnion(
            f"union has {len(poly.components)} components",
            indices=sorted(min(c) for c in poly.components),
        )
    sites = site_points(poly)
    site_list = sites[0]

    candidates: List[_Candidate] = []
    for i in poly.active:
        center = poly.disk(i).center
        contacts = boundary_contacts(poly, center, tol, sites)
        if contacts.maximal:
            candidates.append(_Candidate(center, VertexKind.DISK_CENTER, contacts))

    for point in _voronoi_vertices(poly, site_list, tol):
        contacts = boundary_contacts(poly, point, tol, sites)
        if len(contacts.sites) >= 3 and contacts.maximal:
            candidates.append(_Candidate(point, VertexKind.VORONOI_VERTEX, contacts))

    kept = _dedupe(surf, candidates, tol)
    for c in kept:
        if c.kind is VertexKind.VORONOI_VERTEX and len(c.contacts.sites) >= 4:
            raise DegenerateVoronoi(
                f"{len(c.contacts.sites)} corners are concircular about a central vertex",
                indices=poly.active,
            )
    kept.sort(key=lambda c: tuple(np.round(c.point, 12)))
    vertices = tuple(
        Vertex(c.point, c.contacts.distance, c.kind, c.contacts.sites) for c in kept
    )
    edges = tuple(_edges(poly, vertices, sites, tol))
    cc = CentralComplex(
        polytope=poly,
        sites=site_list,
        vertices=vertices,
        edges=edges,
        tolerances=tol,
    )
    logger.debug(
        "central set: %d sites, %d vertices, %d edges", len(site_list), len(vertices), len(edges)
    )
    return cc


def _voronoi_vertices(poly, site_list, tol):
    """Points equidistant from three sites that are nearest sites and in U."""
    surf = poly.surface
    n = len(site_list)
    if n < 3:
        return []
    S = np.vstack(site_list)
    found = []
    for a in range(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                try:
                    points = equidistant_point(surf, S[a], S[b], S[c], tol)
                except NoCircumcenter:
                    continue
                for x in points:
                    d = distances(surf, S, x)
                    if d.min() < d[a] - tol.touch:
                        continue
                    if contains(poly, x, tol):
                        found.append(x)
    return found


def _dedupe(surf, candidates, tol):
    kept: List[_Candidate] = []
    # disk centres first so they win ties
    ordered = sorted(candidates, key=lambda c: c.kind is not VertexKind.DISK_CENTER)
    for cand in ordered:
        if any(
            distances(surf, k.point[None, :], cand.point)[0] <= tol.touch for k in kept
        ):
            continue
        kept.append(cand)
    return kept


def _edges(poly, vertices, sites, tol):
    surf = poly.surface
    edges = []
    for u in range(len(vertices)):
        for v in range(u + 1, len(vertices)):
            shared = vertices[u].sites & vertices[v].sites
            if len(shared) < 2:
                continue
            pu, pv = vertices[u].point, vertices[v].point
            corners = _edge_corners(poly, pu, pv, shared, sites, tol)
            if corners is None:
                continue
            if _vertex_between(surf, vertices, u, v, tol):
                continue
            edges.append(Edge(u, v, corners))
    return edges


def _edge_corners(poly, pu, pv, shared, sites, tol):
    surf = poly.surface
    corners = None
    for t in (0.25, 0.5, 0.75):
        x = geodesic_eval(surf, pu, pv, t, tol)
        contacts = boundary_contacts(poly, x, tol, sites)
        if contacts.whole_arcs or len(contacts.points) != 2 or len(contacts.sites) != 2:
            return None
        if not contacts.sites <= shared:
            return None
        if corners is not None and set(corners) != contacts.sites:
            return None
        corners = tuple(sorted(contacts.sites))
    return corners


def _vertex_between(surf, vertices, u, v, tol) -> bool:
    pu, pv = vertices[u].point, vertices[v].point
    length = distances(surf, pu[None, :], pv)[0]
    for w, vertex in enumerate(vertices):
        if w in (u, v):
            continue
        du = distances(surf, pu[None, :], vertex.point)[0]
        dv = distances(surf, pv[None, :], vertex.point)[0]
        if abs(du + dv - length) <= tol.touch:
            return True
    return False


# ----------------------------------------------------------------------
# Queries
# ----------------------------------------------------------------------


def segment_distance(surf: Surface, x, u, v, tol: Optional[Tolerances] = None) -> float:
    """Distance from x to the geodesic segment [u, v]."""
    x, u, v = (np.asarray(p, dtype=float) for p in (x, u, v))
    if surf is Surface.EUCLIDEAN:
        w = v - u
        ww = float(w @ w)
        t = 0.0 if ww == 0.0 else min(max(float((x - u) @ w) / ww, 0.0), 1.0)
        return float(np.linalg.norm(x - (u + t * w)))
    ends = distances(surf, np.vstack([u, v]), x)

    def along(t):
        return float(distances(surf, geodesic_eval(surf, u, v, t, tol)[None, :], x)[0])

    inner = minimize_scalar(along, bounds=(0.0, 1.0), method="bounded", options={"xatol": 1e-10})
    return float(min(ends.min(), inner.fun))


def locate(cc: CentralComplex, point, tol: Optional[Tolerances] = None) -> Location:
    """Vertex index or (edge, t) of a point lying on the complex."""
    tol = resolve(tol)
    surf = cc.surface
    point = np.asarray(point, dtype=float)
    for n, vertex in enumerate(cc.vertices):
        if distances(surf, vertex.point[None, :], point)[0] <= tol.touch:
            return n
    for n, edge in enumerate(cc.edges):
        pu, pv = cc.vertices[edge.u].point, cc.vertices[edge.v].point
        length = cc.edge_length(n)
        du = distances(surf, pu[None, :], point)[0]
        dv = distances(surf, pv[None, :], point)[0]
        if abs(du + dv - length) <= tol.touch:
            return (n, float(du / length))
    raise LocationOffComplex("point is not on the central set")


def radius_at(cc: CentralComplex, location: Location, tol: Optional[Tolerances] = None) -> float:
    if isinstance(location, (int, np.integer)):
        if not 0 <= location < len(cc.vertices):
            raise LocationOffComplex(f"no vertex {location}")
        return float(cc.vertices[location].radius)
    if isinstance(location, tuple) and len(location) == 2:
        edge, t = location
        if not 0 <= int(edge) < len(cc.edges) or not 0.0 <= float(t) <= 1.0:
            raise LocationOffComplex(f"no edge location {location!r}")
        return cc.edge_radius(int(edge), float(t))
    return radius_at(cc, locate(cc, location, tol), tol)


def vertex_config(cc: CentralComplex, indices) -> BallConfiguration:
    return BallConfiguration(
        cc.surface,
        tuple(Disk(cc.vertices[n].point, float(cc.vertices[n].radius)) for n in indices),
    )


def reconstruct(cc: CentralComplex) -> BallConfiguration:
    """One disk per vertex with its maximal radius; the union equals U."""
    return vertex_config(cc, range(len(cc.vertices)))


# ----------------------------------------------------------------------
# Relative central sets
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class EdgePiece:
    edge: int
    start: float
    end: float

    @property
    def whole(self) -> bool:
        return self.start == 0.0 and self.end == 1.0

    def as_dict(self):
        return {"edge": self.edge, "start": self.start, "end": self.end}


@dataclass(frozen=True, eq=False)
class RelativeCentralSet:
    parent: CentralComplex
    point: np.ndarray
    vertices: FrozenSet[int]
    pieces: Tuple[EdgePiece, ...]

    @property
    def empty(self) -> bool:
        return not self.vertices

    def graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(self.vertices)
        for piece in self.pieces:
            edge = self.parent.edges[piece.edge]
            if piece.whole:
                graph.add_edge(edge.u, edge.v)
            else:
                # a clipped piece hangs off the selected endpoint
                anchor = edge.u if piece.start == 0.0 else edge.v
                graph.add_edge(anchor, ("piece", piece.edge))
        return graph

    @property
    def connected(self) -> bool:
        return not self.empty and nx.is_connected(self.graph())

    def as_dict(self):
        return {
            "point": [float(x) for x in self.point],
            "vertices": sorted(self.vertices),
            "pieces": [p.as_dict() for p in self.pieces],
            "connected": self.connected,
        }


def relative_central_set(
    cc: CentralComplex, p, tol: Optional[Tolerances] = None
) -> RelativeCentralSet:
    """Points of the central set whose maximal disk contains p."""
    tol = resolve(tol)
    surf = cc.surface
    p = np.asarray(p, dtype=float)
    if not contains(cc.polytope, p, tol):
        raise PointOutsideUnion("point is not in the union")

    def gap(x, corner):
        return float(
            distances(surf, np.vstack([x]), p)[0] - distances(surf, np.vstack([x]), corner)[0]
        )

    selected = frozenset(
        n
        for n, vertex in enumerate(cc.vertices)
        if distances(surf, vertex.point[None, :], p)[0] <= vertex.radius + tol.pred
    )
    pieces = []
    for n, edge in enumerate(cc.edges):
        u_in, v_in = edge.u in selected, edge.v in selected
        if u_in and v_in:
            pieces.append(EdgePiece(n, 0.0, 1.0))
        elif u_in or v_in:
            corner = cc.sites[edge.corners[0]]

            def g(t, n=n, corner=corner):
                return gap(cc.edge_point(n, t), corner) - tol.pred

            g0, g1 = g(0.0), g(1.0)
            if g0 * g1 < 0.0:
                t = float(brentq(g, 0.0, 1.0, xtol=1e-12))
            else:
                t = 1.0 if u_in else 0.0
            if (t if u_in else 1.0 - t) <= tol.touch:
                continue
            pieces.append(EdgePiece(n, 0.0, t) if u_in else EdgePiece(n, t, 1.0))
    return RelativeCentralSet(cc, p, selected, tuple(pieces))


# ----------------------------------------------------------------------
# Oracles
# ----------------------------------------------------------------------


def _coarse_to_fine(count: int) -> List[int]:
    order, seen = [], set()
    stride = count
    while stride >= 1:
        for k in range(0, count, stride):
            if k not in seen:
                seen.add(k)
                order.append(k)
        stride //= 2
    return order


def _require_plane(poly: BallPolytope) -> None:
    if poly.surface is not Surface.EUCLIDEAN:
        raise UnsupportedSurface("the grid oracle runs on the plane only")


def _step(h: float, k: int, directions: int) -> np.ndarray:
    angle = TWO_PI * k / directions
    return h * np.array([math.cos(angle), math.sin(angle)])


def ball_gains(
    poly: BallPolytope, X: np.ndarray, h: float, directions: int = 64
) -> np.ndarray:
    """Largest increase of the boundary distance over steps of length h from each point.

    The largest disk about x is maximal exactly when every gain stays below h.
    """
    _require_plane(poly)
    X = np.asarray(X, dtype=float)
    base = boundary_distances(poly, X)
    best = np.full(len(X), -np.inf)
    for k in range(directions):
        gain = boundary_distances(poly, X + _step(h, k, directions)) - base
        best = np.maximum(best, gain)
    return best


def oracle_grid(
    poly: BallPolytope, h: float = 0.01, directions: int = 64, slack: float = 0.02
) -> np.ndarray:
    """Grid points that pass the brute-force maximal-ball test.

    A point of U passes when no step of length h increases its distance to
    the boundary by h * (1 - slack) or more. Directions are tried coarse to
    fine and only on the points still passing.
    """
    _require_plane(poly)
    config = poly.active_config
    lo = (config.centers - config.radii[:, None]).min(axis=0)
    hi = (config.centers + config.radii[:, None]).max(axis=0)
    xs = np.arange(lo[0], hi[0] + h, h)
    ys = np.arange(lo[1], hi[1] + h, h)
    grid = np.array(np.meshgrid(xs, ys)).reshape(2, -1).T
    grid = grid[contains_many(config, grid)]
    base = boundary_distances(poly, grid)
    alive = np.arange(len(grid))
    for k in _coarse_to_fine(directions):
        gain = boundary_distances(poly, grid[alive] + _step(h, k, directions)) - base[alive]
        alive = alive[gain < h * (1.0 - slack)]
        if not len(alive):
            break
    return grid[alive]


def complex_samples(cc: CentralComplex, spacing: float) -> np.ndarray:
    chunks = [np.vstack([v.point for v in cc.vertices])]
    for n in range(len(cc.edges)):
        count = max(int(math.ceil(cc.edge_length(n) / spacing)) + 1, 2)
        chunks.append(np.vstack([cc.edge_point(n, float(t)) for t in np.linspace(0, 1, count)]))
    return np.vstack(chunks)


def hausdorff_to_complex(
    cc: CentralComplex, points: np.ndarray, spacing: float = 0.0025
) -> Tuple[float, float]:
    """(max distance from points to the complex, max distance back)."""
    samples = lift_many(cc.surface, complex_samples(cc, spacing))
    cloud = lift_many(cc.surface, np.asarray(points, dtype=float))
    if len(cloud) == 0:
        return (0.0, math.inf)
    forward, _ = cKDTree(samples).query(cloud)
    backward, _ = cKDTree(cloud).query(samples)
    return float(forward.max()), float(backward.max())
