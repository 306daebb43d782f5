import math
import os
import sys
import unittest
from fractions import Fraction

import numpy as np

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from models.catalog import cusp_pair, get_example_factories, oval, wiggle
from models.errors import NonGenericLevel, ParityError
from models.graphic import FoldType
from services.slice_service import SliceCensus, SliceService, slice_census, slice_euler, slice_profile
from services.sweep_service import SweepService


def _dense_crossings(g, t, level, samples=10001):
    s = np.linspace(0.0, 1.0, samples)
    counts = {FoldType.DEFINITE: 0, FoldType.INDEFINITE: 0}
    for _, seg in g.segments():
        x, y = seg.power_basis
        h = x(s) * math.sin(t) + y(s) * math.cos(t) - level
        counts[seg.fold] += int(np.count_nonzero(np.diff(np.sign(h)) != 0))
    return counts[FoldType.DEFINITE], counts[FoldType.INDEFINITE]


class SliceCensusTests(unittest.TestCase):
    def test_sphere_slice_of_the_oval(self):
        census = slice_census(oval(), 0.0, 0.0)
        self.assertEqual(census.counts, (2, 0))
        euler = slice_euler(census)
        self.assertEqual(euler.chi_sigma, 2)
        self.assertEqual(euler.chi_r, Fraction(1))
        self.assertEqual((euler.vertices, euler.edges), (2, Fraction(1)))

    def test_empty_slice(self):
        census = slice_census(oval(), 0.0, 5.0)
        self.assertEqual(census.counts, (0, 0))
        self.assertEqual(slice_euler(census).chi_sigma, 0)

    def test_level_through_a_tangency(self):
        height = SweepService(oval()).critical_points(0.0)[0].height
        with self.assertRaises(NonGenericLevel):
            slice_census(oval(), 0.0, height)

    def test_odd_edge_count(self):
        with self.assertRaises(ParityError):
            slice_euler(SliceCensus(1, 0, 0.0, 0.0))

    def test_torus_slice_of_the_wiggle(self):
        t = 0.5
        level = -0.3 * math.sqrt(2.0) * (math.sin(t) + math.cos(t))
        census = slice_census(wiggle(), t, level)
        self.assertEqual(census.counts, (2, 2))
        euler = slice_euler(census)
        self.assertEqual(euler.chi_sigma, 0)
        self.assertEqual((euler.vertices, euler.edges), (4, Fraction(4)))

    def test_matches_dense_sampling(self):
        rng = np.random.default_rng(5)
        for name, factory in get_example_factories().items():
            g = factory()
            service = SliceService(g)
            for _ in range(100):
                t = rng.uniform(0.0, math.pi / 2.0)
                level = rng.uniform(-g.scale, g.scale)
                try:
                    census = service.slice_census(t, level)
                except NonGenericLevel:
                    continue
                self.assertEqual(census.counts, _dense_crossings(g, t, level), f"{name} t={t} level={level}")


class SliceProfileTests(unittest.TestCase):
    def test_oval_profile(self):
        profile = slice_profile(oval(), 0.3)
        self.assertEqual(len(profile.breakpoints), 2)
        self.assertEqual([c.counts for c in profile.censuses], [(0, 0), (2, 0), (0, 0)])
        self.assertEqual(profile.levels, sorted(profile.levels))

    def test_tangency_breakpoints_change_chi_by_two(self):
        profile = slice_profile(wiggle(), 0.5)
        chis = [slice_euler(c).chi_sigma for c in profile.censuses]
        self.assertEqual(chis[0], 0)
        self.assertEqual(chis[-1], 0)
        for before, after in zip(chis[:-1], chis[1:]):
            self.assertEqual(abs(after - before), 2)

    def test_cusp_breakpoints(self):
        profile = slice_profile(cusp_pair(), 0.5)
        self.assertEqual(sum(1 for b in profile.breakpoints if b.kind == "cusp"), 2)
        chis = [slice_euler(c).chi_sigma for c in profile.censuses]
        for before, after in zip(chis[:-1], chis[1:]):
            self.assertIn(after - before, (-2, 0, 2))


if __name__ == '__main__':
    unittest.main()
