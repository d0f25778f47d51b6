"""
SVG 1.1 figures of scenes and their central sets.

Euclidean scenes are drawn as they are. Spherical scenes use the
orthographic projection onto the xy-plane (the upper hemisphere faces the
viewer) and hyperbolic scenes the Klein model, where geodesics are straight
chords of the unit disk. Disk boundaries off the plane are drawn as sampled
polygons; central-set edges are straight lines except on the sphere.
"""

import logging
from typing import Optional

import numpy as np
from django.template.loader import render_to_string

from apps.geometry.central_set import CentralComplex
from apps.geometry.kernel import Surface, TWO_PI, circle_point, geodesic_eval

from .scene import Scene, write_text

logger = logging.getLogger(__name__)

CIRCLE_SAMPLES = 96
EDGE_SAMPLES = 24


def project(surf: Surface, P: np.ndarray) -> np.ndarray:
    P = np.atleast_2d(P)
    if surf is Surface.EUCLIDEAN:
        return P[:, :2]
    if surf is Surface.SPHERICAL:
        return P[:, :2]
    return P[:, :2] / P[:, 2:3]


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def _points_attr(Q: np.ndarray) -> str:
    return " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in Q)


def svg_document(scene: Scene, cc: Optional[CentralComplex] = None, size: int = 600) -> str:
    surf = scene.surface
    config = scene.config
    drawn = []

    disks = []
    for disk in config.disks:
        if surf is Surface.EUCLIDEAN:
            cx, cy = disk.center
            r = disk.radius
            disks.append({"cx": _fmt(cx), "cy": _fmt(cy), "r": _fmt(r)})
            drawn.append(np.array([[cx - r, cy - r], [cx + r, cy + r]]))
        else:
            thetas = np.linspace(0.0, TWO_PI, CIRCLE_SAMPLES, endpoint=False)
            ring = np.vstack(
                [circle_point(surf, disk.center, disk.radius, float(t)) for t in thetas]
            )
            Q = project(surf, ring)
            disks.append({"points": _points_attr(Q)})
            drawn.append(Q)

    edges, vertices, corners = [], [], []
    if cc is not None:
        for n, edge in enumerate(cc.edges):
            u, v = cc.vertices[edge.u].point, cc.vertices[edge.v].point
            if surf is Surface.SPHERICAL:
                ts = np.linspace(0.0, 1.0, EDGE_SAMPLES)
                Q = project(surf, np.vstack([geodesic_eval(surf, u, v, float(t)) for t in ts]))
                edges.append({"points": _points_attr(Q)})
            else:
                Q = project(surf, np.vstack([u, v]))
                edges.append(
                    {"x1": _fmt(Q[0, 0]), "y1": _fmt(Q[0, 1]), "x2": _fmt(Q[1, 0]), "y2": _fmt(Q[1, 1])}
                )
            drawn.append(Q)
        for vertex in cc.vertices:
            x, y = project(surf, vertex.point)[0]
            vertices.append({"cx": _fmt(x), "cy": _fmt(y)})
        for corner in cc.polytope.corners:
            x, y = project(surf, corner.point)[0]
            corners.append({"cx": _fmt(x), "cy": _fmt(y)})

    if surf is Surface.EUCLIDEAN:
        box = np.vstack(drawn)
        lo, hi = box.min(axis=0), box.max(axis=0)
    else:
        lo, hi = np.array([-1.0, -1.0]), np.array([1.0, 1.0])
    pad = 0.05 * float(max(hi - lo))
    lo, hi = lo - pad, hi + pad
    span = float(max(hi - lo))
    # the drawing is flipped by scale(1,-1), so the viewBox starts at -hi_y
    viewbox = f"{_fmt(lo[0])} {_fmt(-hi[1])} {_fmt(hi[0] - lo[0])} {_fmt(hi[1] - lo[1])}"
    context = {
        "title": scene.label or f"{surf.value} scene",
        "width": size,
        "height": int(round(size * (hi[1] - lo[1]) / (hi[0] - lo[0]))),
        "viewbox": viewbox,
        "boundary": surf is not Surface.EUCLIDEAN,
        "stroke": _fmt(span / 400.0),
        "edge_stroke": _fmt(span / 200.0),
        "mark": _fmt(span / 150.0),
        "disks": disks,
        "edges": edges,
        "vertices": vertices,
        "corners": corners,
    }
    return render_to_string("scenes/scene.svg", context)


def svg_export(scene: Scene, cc: Optional[CentralComplex] = None, path=None) -> str:
    document = svg_document(scene, cc)
    if path is not None:
        write_text(path, document)
        logger.info("wrote %s figure to %s", scene.surface.value, path)
    return document
