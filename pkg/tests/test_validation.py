import math
import os
import sys
import unittest

import numpy as np

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from models.catalog import CUSP_TILT, crescent, ellipse, get_example_factories, get_extra_factories, oval
from models.errors import UndecidableAtTolerance
from models.graphic import (
    Component,
    CrossingTag,
    CuspType,
    FoldType,
    Graphic,
    GraphicTransform,
    Segment,
    SheetSide,
    VertexKind,
)
from services.validation_service import classify_cusp, find_crossings, validate

INCOMING_TYPE_ONE = ((1.0, -1.0), (0.6, -0.3), (0.3, 0.0), (0.0, 0.0))
INCOMING_TYPE_TWO = ((1.0, 0.5), (0.6, 0.3), (0.3, 0.0), (0.0, 0.0))
OUTGOING = ((0.0, 0.0), (0.3, 0.0), (0.6, 0.2), (1.0, 0.6))
OUTGOING_FLAT_GERM = ((0.0, 0.0), (0.3, 0.0), (0.6, 0.0), (1.0, 0.6))


def _cusp_graphic(incoming, outgoing):
    segments = [
        Segment(incoming, FoldType.DEFINITE, SheetSide.LEFT),
        Segment(outgoing, FoldType.INDEFINITE, SheetSide.LEFT),
    ]
    return Graphic((Component.from_segments(segments, [VertexKind.CUSP, VertexKind.SMOOTH]),))


def _classify(g):
    (ci, vertex), = g.cusps()
    return classify_cusp(g, ci, vertex)


def _rebuild(g, segments, kinds):
    return Graphic((Component.from_segments(segments, kinds),), g.crossings)


class CuspClassificationTests(unittest.TestCase):
    def test_separated_germs_are_type_one(self):
        self.assertIs(_classify(_cusp_graphic(INCOMING_TYPE_ONE, OUTGOING)), CuspType.TYPE_ONE)

    def test_same_side_germs_are_type_two(self):
        self.assertIs(_classify(_cusp_graphic(INCOMING_TYPE_TWO, OUTGOING)), CuspType.TYPE_TWO)

    def test_flat_germ_is_undecidable(self):
        with self.assertRaises(UndecidableAtTolerance):
            _classify(_cusp_graphic(INCOMING_TYPE_ONE, OUTGOING_FLAT_GERM))

    def test_invariant_under_similarities_and_reflection(self):
        rng = np.random.default_rng(7)
        cases = [(INCOMING_TYPE_ONE, CuspType.TYPE_ONE), (INCOMING_TYPE_TWO, CuspType.TYPE_TWO)]
        for incoming, expected in cases:
            g = _cusp_graphic(incoming, OUTGOING)
            for _ in range(100):
                transform = GraphicTransform(
                    rotation=rng.uniform(0.0, 2.0 * math.pi),
                    scale=rng.uniform(0.1, 10.0),
                    offset=tuple(rng.uniform(-50.0, 50.0, size=2)),
                )
                self.assertIs(_classify(transform.apply(g)), expected)
            self.assertIs(_classify(g.transformed(np.diag([1.0, -1.0]))), expected)

    def test_crescent_has_one_cusp_of_each_type(self):
        g = crescent()
        types = sorted(classify_cusp(g, ci, v).value for ci, v in g.cusps())
        self.assertEqual(types, [CuspType.TYPE_ONE.value, CuspType.TYPE_TWO.value])

    def test_smooth_vertex_is_rejected(self):
        g = oval()
        ci, vertex = next(g.vertices())
        with self.assertRaises(ValueError):
            classify_cusp(g, ci, vertex)


class ValidationTests(unittest.TestCase):
    def test_examples_pass(self):
        for name, factory in {**get_example_factories(), **get_extra_factories()}.items():
            report = validate(factory())
            self.assertTrue(report.passed, f"{name}: {report.codes()}")

    def test_flipped_definite_sheet(self):
        g = crescent()
        definite, indefinite = g.components[0].segments
        flipped = Segment(definite.control, definite.fold, definite.sheet.opposite)
        report = validate(_rebuild(g, [flipped, indefinite], [VertexKind.CUSP, VertexKind.CUSP]))
        self.assertIn('SheetMismatch', report.codes())

    def test_flipped_indefinite_sheet(self):
        g = crescent()
        definite, indefinite = g.components[0].segments
        flipped = Segment(indefinite.control, indefinite.fold, indefinite.sheet.opposite)
        report = validate(_rebuild(g, [definite, flipped], [VertexKind.CUSP, VertexKind.CUSP]))
        self.assertEqual(report.codes(), ['SheetMismatch', 'SheetMismatch'])
        for violation in report.violations:
            self.assertIn('opposite sides', violation.message)

    def test_cusps_marked_smooth(self):
        g = crescent()
        report = validate(_rebuild(g, list(g.components[0].segments), [VertexKind.SMOOTH, VertexKind.SMOOTH]))
        self.assertIn('TangentMismatch', report.codes())
        self.assertIn('FoldAlternation', report.codes())

    def test_cusp_between_two_definite_edges(self):
        g = crescent()
        definite, indefinite = g.components[0].segments
        same = Segment(indefinite.control, FoldType.DEFINITE, indefinite.sheet)
        report = validate(_rebuild(g, [definite, same], [VertexKind.CUSP, VertexKind.CUSP]))
        self.assertIn('FoldAlternation', report.codes())

    def test_horizontal_cusp_tangent(self):
        report = validate(crescent().rotated(-CUSP_TILT))
        self.assertIn('EndpointEvent', report.codes())

    def test_smooth_sheet_flip(self):
        segments = list(oval().components[0].segments)
        segments[1] = Segment(segments[1].control, segments[1].fold, segments[1].sheet.opposite)
        report = validate(_rebuild(oval(), segments, [VertexKind.SMOOTH] * 4))
        self.assertIn('SheetMismatch', report.codes())

    def test_straight_segment(self):
        arc = Segment(((0.0, -1.0), (1.33, -1.0), (1.33, 1.0), (0.0, 1.0)), FoldType.DEFINITE, SheetSide.LEFT)
        line = Segment(((0.0, 1.0), (0.0, 1.0 / 3.0), (0.0, -1.0 / 3.0), (0.0, -1.0)),
                       FoldType.DEFINITE, SheetSide.LEFT)
        g = Graphic((Component.from_segments([arc, line], [VertexKind.SMOOTH, VertexKind.SMOOTH]),))
        self.assertIn('DegenerateFlat', validate(g).codes())

    def test_crossing_label_count(self):
        g = Graphic(oval().components, (CrossingTag.ENTANGLED,))
        report = validate(g)
        self.assertEqual(report.codes(), ['CrossingCountMismatch'])
        self.assertFalse(report.to_dict()['passed'])

    def test_overlapping_circles_cross_twice(self):
        g = oval().merged(ellipse(center=(1.0, 0.0), fold=FoldType.INDEFINITE))
        crossings = find_crossings(g)
        self.assertEqual(len(crossings), 2)
        ys = sorted(c.point[1] for c in crossings)
        self.assertAlmostEqual(ys[0], -math.sqrt(3.0) / 2.0, places=2)
        self.assertAlmostEqual(ys[1], math.sqrt(3.0) / 2.0, places=2)
        for crossing in crossings:
            self.assertAlmostEqual(crossing.point[0], 0.5, places=6)
            self.assertGreater(crossing.sin_angle, 0.5)

        labelled = Graphic(g.components, (CrossingTag.ENTANGLED, CrossingTag.UNENTANGLED))
        self.assertTrue(validate(labelled).passed)

    def test_disjoint_examples_have_no_crossings(self):
        for name, factory in get_example_factories().items():
            self.assertEqual(find_crossings(factory()), [], name)


if __name__ == '__main__':
    unittest.main()
