"""
Central set (medial axis) of a union of disks.

Usage:
    python manage.py central_set --scene scenes/y_tree.json
    python manage.py central_set --scene scenes/y_tree.json --oracle
"""

from apps.geometry.ball_union import topology
from apps.geometry.central_set import (
    ball_gains,
    central_set,
    complex_samples,
    hausdorff_to_complex,
    oracle_grid,
)
from apps.geometry.kernel import Surface
from apps.scenes.commands import SceneCommand


class Command(SceneCommand):
    help = "Compute the central set of the union of the scene's disks"

    def run(self, scene, options):
        tol = self.tolerances(options)
        poly = self.polytope(scene, options)
        cc = central_set(poly, tol)
        report = cc.as_dict()
        report["label"] = scene.label
        report["is_tree"] = cc.is_tree()
        report["topology"] = topology(poly).as_dict()
        if options["oracle"] and scene.surface is Surface.EUCLIDEAN:
            grid = oracle_grid(poly)
            forward, backward = hausdorff_to_complex(cc, grid)
            gains = ball_gains(poly, complex_samples(cc, 0.01), h=0.01)
            report["oracle"] = {
                "grid_points": len(grid),
                "grid_to_complex": forward,
                "complex_to_grid": backward,
                "complex_max_gain": float(gains.max()),
            }
        return report, None
