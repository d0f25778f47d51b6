"""
Tests for scene documents, generators and figures.

Tests cover:
- Parsing, serialization and file I/O of scene documents
- Error reporting with JSON pointers and line numbers
- Contractions and selections declared in scenes
- Seeded random scenes and rings
- SVG figures on the three surfaces
"""

import json
import math
from xml.etree import ElementTree

import numpy as np

from apps.contraction.piecewise import CenterMap, PiecewiseIsometry
from apps.geometry.ball_union import topology, validate
from apps.geometry.exceptions import InvalidLine
from apps.geometry.kernel import Surface, distances
from apps.scenes.exceptions import (
    GenerationFailure,
    InvalidDisk,
    InvalidSelection,
    IoError,
    SceneSyntaxError,
    UnknownSurface,
)
from apps.scenes.generators import (
    ANY,
    offset,
    random_config,
    random_scene,
    ring_scene,
    sample_interior_points,
)
from apps.scenes.scene import (
    ContractionSpec,
    Selection,
    load_scene,
    parse_scene,
    save_scene,
    scene_from_config,
    serialize_scene,
)
from apps.scenes.svg import svg_document, svg_export

from .base import GeometryTestCase

E, S, H = Surface.EUCLIDEAN, Surface.SPHERICAL, Surface.HYPERBOLIC

TWO_DISK_DOCUMENT = {
    "version": 1,
    "surface": "euclidean",
    "disks": [
        {"center": [0.0, 0.0], "radius": 1.0},
        {"center": [1.0, 0.0], "radius": 1.0},
    ],
    "contraction": {"type": "folds", "lines": [[[0.75, -1.0], [0.75, 1.0]]]},
    "selections": {"X": {"vertices": [0], "edges": [0], "close": True}},
    "metadata": {"label": "two disks", "seed": 5},
}


def document(**changes):
    doc = json.loads(json.dumps(TWO_DISK_DOCUMENT))
    doc.update(changes)
    return json.dumps(doc)


class ParseSceneTests(GeometryTestCase):
    """Tests for parse_scene() and serialize_scene()."""

    def test_two_disk_scene(self):
        scene = parse_scene(document())
        self.assertEqual(scene.surface, E)
        self.assertEqual(len(scene.disks), 2)
        self.assertEqual(scene.label, "two disks")
        self.assertEqual(scene.seed, 5)
        self.assertEqual(scene.contraction.kind, "folds")
        self.assertIsInstance(scene.build_contraction(), PiecewiseIsometry)

    def test_serialization_is_stable(self):
        text = serialize_scene(parse_scene(document()))
        self.assertEqual(serialize_scene(parse_scene(text)), text)
        self.assertEqual(json.loads(text), TWO_DISK_DOCUMENT)

    def test_coordinates_are_kept_as_written(self):
        raw = document(surface="spherical", contraction=None, selections={}, disks=[
            {"center": [0.0, 0.0, 2.0], "radius": 0.5},
        ])
        scene = parse_scene(raw)
        self.assertEqual(scene.disks[0].center, (0.0, 0.0, 2.0))
        self.assertPointClose(scene.config.disks[0].center, [0.0, 0.0, 1.0])
        self.assertEqual(json.loads(serialize_scene(scene))["disks"][0]["center"], [0, 0, 2])

    def test_version_defaults_to_current(self):
        raw = json.dumps({"surface": "hyperbolic", "disks": []})
        self.assertEqual(parse_scene(raw).surface, H)

    def test_pointmap(self):
        raw = document(contraction={"type": "pointmap", "pairs": [[[0, 0], [0.5, 0]]]})
        scene = parse_scene(raw)
        self.assertIsInstance(scene.build_contraction(), CenterMap)
        self.assertIn("pairs", scene.as_dict()["contraction"])

    def test_no_contraction(self):
        scene = parse_scene(document(contraction=None))
        self.assertIsNone(scene.build_contraction())

    def test_selection_resolves(self):
        scene = parse_scene(document())
        cc = self.complex_of(scene.config)
        X = scene.selection("X", cc)
        self.assertEqual(X.vertices, frozenset({0, 1}))
        self.assertEqual(X.edges, frozenset({0}))


class SceneErrorTests(GeometryTestCase):
    """Tests for the errors raised while reading scenes."""

    def test_malformed_json_reports_the_line(self):
        with self.assertRaises(SceneSyntaxError) as ctx:
            parse_scene('{\n  "surface": "euclidean",\n  "disks": [\n}')
        self.assertEqual(ctx.exception.line, 4)
        self.assertEqual(ctx.exception.as_dict()["line"], 4)

    def test_not_an_object(self):
        with self.assertRaises(SceneSyntaxError):
            parse_scene("[1, 2]")

    def test_unsupported_version(self):
        with self.assertRaises(SceneSyntaxError) as ctx:
            parse_scene(document(version=2))
        self.assertEqual(ctx.exception.path, "/version")

    def test_unknown_surface(self):
        with self.assertRaises(UnknownSurface) as ctx:
            parse_scene(document(surface="toroidal"))
        self.assertEqual(ctx.exception.path, "/surface")

    def test_disk_without_radius(self):
        raw = document(disks=[{"center": [0, 0], "radius": 1}, {"center": [1, 0]}])
        with self.assertRaises(InvalidDisk) as ctx:
            parse_scene(raw)
        self.assertEqual(ctx.exception.path, "/disks/1")
        self.assertEqual(ctx.exception.indices, (1,))

    def test_negative_radius(self):
        with self.assertRaises(InvalidDisk) as ctx:
            parse_scene(document(disks=[{"center": [0, 0], "radius": -1}]))
        self.assertEqual(ctx.exception.path, "/disks/0/radius")

    def test_wrong_dimension(self):
        raw = document(surface="spherical", contraction=None, disks=[
            {"center": [0, 1], "radius": 0.5},
        ])
        with self.assertRaises(InvalidDisk) as ctx:
            parse_scene(raw)
        self.assertEqual(ctx.exception.path, "/disks/0/center")

    def test_bad_contraction_type(self):
        with self.assertRaises(SceneSyntaxError) as ctx:
            parse_scene(document(contraction={"type": "shrink"}))
        self.assertEqual(ctx.exception.path, "/contraction/type")

    def test_fold_line_through_one_point(self):
        raw = document(contraction={"type": "folds", "lines": [[[0, 0], [0, 0]]]})
        scene = parse_scene(raw)
        with self.assertRaises(InvalidLine) as ctx:
            scene.build_contraction()
        self.assertEqual(ctx.exception.path, "/contraction/lines/0")

    def test_bad_selection(self):
        with self.assertRaises(InvalidSelection) as ctx:
            parse_scene(document(selections={"X": {"vertices": ["a"]}}))
        self.assertEqual(ctx.exception.path, "/selections/X/vertices")

    def test_unknown_and_open_selections(self):
        scene = parse_scene(document(selections={"Y": {"edges": [0]}}))
        cc = self.complex_of(scene.config)
        with self.assertRaises(InvalidSelection):
            scene.selection("X", cc)
        with self.assertRaises(InvalidSelection) as ctx:
            scene.selection("Y", cc)
        self.assertEqual(ctx.exception.path, "/selections/Y")

    def test_missing_file(self):
        with self.assertRaises(IoError):
            load_scene(self.tmpdir / "missing.json")


class SceneFileTests(GeometryTestCase):
    """Tests for save_scene() and load_scene()."""

    def test_save_and_load(self):
        scene = scene_from_config(
            self.y_tree(),
            label="y",
            seed=3,
            contraction=ContractionSpec("folds", (((0.5, -1.0), (0.5, 1.0)),)),
            selections={"leaf": Selection(vertices=(0,), edges=(0,), close=True)},
        )
        path = self.tmpdir / "y.json"
        save_scene(scene, path)
        loaded = load_scene(path)
        self.assertEqual(loaded.as_dict(), scene.as_dict())

    def test_write_scene_helper(self):
        path = self.write_scene(self.ring(S), label="ring")
        loaded = load_scene(path)
        self.assertEqual(loaded.surface, S)
        self.assertEqual(len(loaded.disks), 6)


class GeneratorTests(GeometryTestCase):
    """Tests for seeded scene generation."""

    def test_offset_distance(self):
        for surf in Surface:
            c = offset(surf, self.ring(surf).disks[0].center, 0.3, 0.0)
            p = offset(surf, c, 0.7, 1.2)
            self.assertClose(distances(surf, p[None, :], c)[0], 0.7, atol=1e-9)

    def test_same_seed_same_scene(self):
        for surf in Surface:
            a = random_scene(surf, 4, seed=21, folds=2)
            b = random_scene(surf, 4, seed=21, folds=2)
            self.assertEqual(serialize_scene(a), serialize_scene(b))
            self.assertEqual(a.label, f"random-{surf.value}-4-21")
            self.assertEqual(len(a.contraction.pairs), 2)

    def test_random_scenes_are_simply_connected(self):
        for seed in range(3):
            config = random_config(E, 5, seed)
            poly = validate(config, strict=True)
            self.assertTrue(topology(poly).simply_connected)
            self.assertEqual(poly.dropped, ())

    def test_any_topology(self):
        config = random_config(H, 3, 4, want=ANY)
        self.assertEqual(len(config), 3)

    def test_bad_requests(self):
        with self.assertRaises(GenerationFailure):
            random_config(E, 1, 0)
        with self.assertRaises(GenerationFailure):
            random_config(E, 3, 0, want="annulus")

    def test_exhausted_attempts(self):
        with self.settings(SCENE_GENERATION_ATTEMPTS=0):
            with self.assertRaises(GenerationFailure):
                random_config(E, 3, 0)

    def test_ring_scene(self):
        scene = ring_scene(H)
        self.assertEqual(scene.label, "ring-hyperbolic-6")
        self.assertEqual(topology(self.polytope(scene.config)).hole_count, 1)

    def test_interior_points(self):
        config = self.y_tree()
        rng = np.random.default_rng(0)
        for p in sample_interior_points(config, rng, 20):
            self.assertTrue((distances(E, config.centers, p) < config.radii).any())


class SvgTests(GeometryTestCase):
    """Tests for svg_document() and svg_export()."""

    def count(self, svg, css_class):
        return svg.count(f'class="{css_class}"')

    def test_euclidean_figure(self):
        config = self.two_disks()
        svg = svg_document(scene_from_config(config, label="pair"), self.complex_of(config))
        ElementTree.fromstring(svg.encode())
        self.assertIn("<title>pair</title>", svg)
        self.assertEqual(self.count(svg, "disk"), 2)
        self.assertEqual(svg.count("<circle class=\"disk\""), 2)
        self.assertEqual(self.count(svg, "edge"), 1)
        self.assertEqual(self.count(svg, "vertex"), 2)
        self.assertEqual(self.count(svg, "corner"), 2)
        self.assertEqual(self.count(svg, "model"), 0)

    def test_without_complex(self):
        svg = svg_document(scene_from_config(self.y_tree()))
        self.assertEqual(self.count(svg, "disk"), 3)
        self.assertEqual(self.count(svg, "edge"), 0)
        self.assertEqual(self.count(svg, "corner"), 0)

    def test_sphere_figure(self):
        config = self.spherical_cap_config()
        svg = svg_document(scene_from_config(config), self.complex_of(config))
        ElementTree.fromstring(svg.encode())
        self.assertEqual(svg.count('<polygon class="disk"'), 2)
        self.assertEqual(svg.count('<polyline class="edge"'), 1)
        self.assertEqual(self.count(svg, "model"), 1)

    def test_hyperbolic_figure_stays_in_the_klein_disk(self):
        config = self.hyperbolic_pair_config()
        svg = svg_document(scene_from_config(config), self.complex_of(config))
        root = ElementTree.fromstring(svg.encode())
        ns = {"svg": "http://www.w3.org/2000/svg"}
        self.assertEqual(svg.count('<line class="edge"'), 1)
        for polygon in root.iterfind(".//svg:polygon", ns):
            for pair in polygon.get("points").split():
                x, y = (float(v) for v in pair.split(","))
                self.assertLess(math.hypot(x, y), 1.0)

    def test_export_writes_the_file(self):
        path = self.tmpdir / "pair.svg"
        svg = svg_export(scene_from_config(self.two_disks()), None, path)
        self.assertEqual(path.read_text(), svg)
