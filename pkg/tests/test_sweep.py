import math
import os
import sys
import unittest
from fractions import Fraction

import numpy as np

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from models.catalog import (
    bitangent_pair,
    cusp_pair,
    definite_wiggle,
    ellipse,
    get_example_factories,
    oval,
    random_graphic,
    wiggle,
)
from models.errors import EventAngle, GenericityFailure, GenericityWarning, NegativeGenus
from models.graphic import FoldType, inflections
from services.config_service import CONFIG
from services.sweep_service import (
    CriticalCensus,
    EventKind,
    SweepService,
    count_c,
    critical_census,
    doubly_tangent_lines,
    event_schedule,
    genus_at,
    genus_trajectory,
    stable_genus_bound,
)


def _dense_tangency_count(g, t, samples=10001):
    s = np.linspace(0.0, 1.0, samples)
    total = 0
    for _, seg in g.segments():
        dx, dy = seg.first_derivative
        h = dx(s) * math.sin(t) + dy(s) * math.cos(t)
        total += int(np.count_nonzero(np.diff(np.sign(h)) != 0))
    return total


def _interval_genus(trajectory, t):
    index = sum(1 for b in trajectory.breakpoints if b < t)
    return trajectory.genera[index]


class CensusTests(unittest.TestCase):
    def test_oval(self):
        self.assertEqual(critical_census(oval(), 0.3).as_tuple(), (1, 0, 0, 1))
        self.assertEqual(genus_at(oval(), 1.2), 0)

    def test_wiggle_before_and_after_stabilization(self):
        self.assertEqual(critical_census(wiggle(), 0.1).as_tuple(), (1, 1, 1, 1))
        self.assertEqual(critical_census(wiggle(), 0.5).as_tuple(), (1, 2, 2, 1))
        self.assertEqual(genus_at(wiggle(), 0.5), 2)

    def test_definite_wiggle(self):
        census = critical_census(definite_wiggle(), 0.5)
        self.assertEqual(census.as_tuple(), (1, 0, 1, 2))
        self.assertEqual(genus_at(definite_wiggle(), 0.5), 0)

    def test_euler_condition_on_examples(self):
        rng = np.random.default_rng(0)
        for name, factory in get_example_factories().items():
            g = factory()
            service = SweepService(g)
            for t in rng.uniform(0.0, math.pi / 2.0, size=100):
                try:
                    points = service.critical_points(t)
                except EventAngle:
                    continue
                census = CriticalCensus(*[sum(1 for p in points if p.index == i) for i in range(4)])
                self.assertEqual(census.euler, 0, f"{name} at t={t}")
                self.assertGreaterEqual(census.n0, 1)
                self.assertGreaterEqual(census.n3, 1)
                self.assertEqual(len(points), _dense_tangency_count(g, t), f"{name} at t={t}")

    def test_random_graphics_match_dense_sampling(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            g = random_graphic(rng)
            service = SweepService(g)
            for t in rng.uniform(0.0, math.pi / 2.0, size=100):
                try:
                    points = service.critical_points(t)
                except EventAngle:
                    continue
                self.assertEqual(len(points), _dense_tangency_count(g, t))
                census = CriticalCensus(*[sum(1 for p in points if p.index == i) for i in range(4)])
                self.assertEqual(census.euler, 0)

    def test_census_just_past_an_inflection(self):
        service = SweepService(wiggle())
        first = service.event_schedule()[0]
        census = service.critical_census(first.angle + CONFIG.min_delta)
        self.assertEqual(census.as_tuple(), (1, 2, 2, 1))

    def test_tangency_at_an_event_angle(self):
        service = SweepService(wiggle())
        first = service.event_candidates()[0]
        with self.assertRaises(EventAngle):
            service.critical_points(first.angle)

    def test_two_definite_ovals_have_negative_genus(self):
        g = oval().merged(ellipse(center=(4.0, 0.0)))
        with self.assertRaises(NegativeGenus):
            genus_at(g, 0.3)

    def test_level_sets(self):
        levels = SweepService(wiggle()).level_sets(0.1)
        self.assertEqual(levels.genus, 1)
        self.assertEqual(len(levels.heights[0]), 1)
        self.assertEqual(len(levels.heights[3]), 1)


class EventScheduleTests(unittest.TestCase):
    def test_oval_has_no_events(self):
        self.assertEqual(event_schedule(oval()), [])
        trajectory = genus_trajectory(oval())
        self.assertEqual(trajectory.genera, (0,))
        self.assertEqual(count_c(oval()), 0)
        self.assertEqual(stable_genus_bound(oval()), Fraction(0))

    def test_wiggle(self):
        events = event_schedule(wiggle())
        self.assertEqual(
            [e.kind for e in events],
            [EventKind.INDEFINITE_INFLECTION, EventKind.DOUBLE_TANGENCY, EventKind.INDEFINITE_INFLECTION],
        )
        self.assertAlmostEqual(events[0].angle, math.atan(1.0 / 3.0), places=9)
        self.assertAlmostEqual(events[1].angle, math.pi / 4.0, places=7)
        self.assertAlmostEqual(events[2].angle, math.atan(3.0), places=9)
        self.assertEqual([e.genus_delta for e in events], [1, 0, -1])

        trajectory = genus_trajectory(wiggle())
        self.assertEqual(trajectory.genera, (1, 2, 2, 1))
        self.assertEqual((trajectory.p, trajectory.q, trajectory.peak), (1, 1, 2))
        self.assertEqual(count_c(wiggle()), 2)
        self.assertEqual(stable_genus_bound(wiggle()), Fraction(2))

    def test_definite_inflections_do_not_change_genus(self):
        events = event_schedule(definite_wiggle())
        self.assertEqual(
            [e.kind for e in events],
            [EventKind.DEFINITE_INFLECTION, EventKind.DOUBLE_TANGENCY, EventKind.DEFINITE_INFLECTION],
        )
        self.assertTrue(all(e.genus_delta == 0 for e in events))
        self.assertEqual(count_c(definite_wiggle()), 0)

    def test_bitangent_pair(self):
        events = event_schedule(bitangent_pair())
        self.assertEqual([e.kind for e in events], [EventKind.DOUBLE_TANGENCY] * 3)
        for event, degrees in zip(events, (14.69, 28.91, 51.48)):
            self.assertAlmostEqual(event.angle, math.radians(degrees), delta=1e-2)
        self.assertEqual(set(genus_trajectory(bitangent_pair()).genera), {1})
        self.assertEqual(count_c(bitangent_pair()), 0)
        self.assertEqual(stable_genus_bound(bitangent_pair()), Fraction(1))

    def test_cusp_pair(self):
        g = cusp_pair()
        events = [e for e in event_schedule(g) if e.kind is not EventKind.DOUBLE_TANGENCY]
        self.assertEqual(
            [e.kind for e in events],
            [EventKind.INDEFINITE_INFLECTION, EventKind.CUSP_TYPE_ONE, EventKind.CUSP_TYPE_TWO],
        )
        indefinite = next(seg for _, seg in g.segments() if seg.fold is FoldType.INDEFINITE)
        (point,) = inflections(indefinite)
        self.assertAlmostEqual(events[0].angle, math.atan(-point.slope), places=9)
        self.assertAlmostEqual(events[1].angle, math.radians(30.0), places=6)
        self.assertAlmostEqual(events[2].angle, math.radians(75.0), places=6)
        self.assertEqual([e.genus_delta for e in events], [1, 0, -1])

        trajectory = genus_trajectory(g)
        self.assertEqual([step for step in trajectory.steps if step], [1, -1])
        self.assertEqual((trajectory.p, trajectory.q, trajectory.peak), (0, 0, 1))
        self.assertEqual(count_c(g), 2)
        self.assertEqual(stable_genus_bound(g), Fraction(1))

    def test_dense_genus_matches_trajectory(self):
        g = wiggle()
        service = SweepService(g)
        trajectory = service.genus_trajectory()
        for t in np.linspace(0.005, math.pi / 2.0 - 0.005, 200):
            if any(abs(t - b) < 1e-3 for b in trajectory.breakpoints):
                continue
            self.assertEqual(service.genus_at(t), _interval_genus(trajectory, t))

    def test_rotation_covariance(self):
        theta = 0.3
        original = SweepService(wiggle())
        rotated = SweepService(wiggle().rotated(theta))
        before, after = original.event_schedule(), rotated.event_schedule()
        self.assertEqual([e.kind for e in before], [e.kind for e in after])
        for a, b in zip(before, after):
            tolerance = 1e-6 if a.kind is EventKind.DOUBLE_TANGENCY else 1e-8
            self.assertAlmostEqual(b.angle, a.angle - theta, delta=tolerance)
        self.assertEqual(original.genus_trajectory().genera, rotated.genus_trajectory().genera)

    def test_thread_pool_finds_the_same_tangents(self):
        serial = SweepService(bitangent_pair(), workers=1).doubly_tangent_lines()
        pooled = SweepService(bitangent_pair(), workers=4).doubly_tangent_lines()
        self.assertEqual([d.location for d in serial], [d.location for d in pooled])
        self.assertTrue(all(d.slope < 0 for d in doubly_tangent_lines(bitangent_pair())))

    def test_duplicated_curve_is_not_generic(self):
        with self.assertRaises(GenericityFailure):
            event_schedule(oval().merged(oval()))

    def test_simultaneous_events_warn(self):
        g = definite_wiggle().merged(definite_wiggle().translated((10.0, 7.0)))
        g = g.merged(ellipse(center=(-10.0, 5.0), fold=FoldType.INDEFINITE))
        service = SweepService(g)
        with self.assertWarns(GenericityWarning):
            events = service.event_schedule()
        self.assertTrue(all(e.genus_delta == 0 for e in events))
        self.assertEqual(len(set(service.genus_trajectory().genera)), 1)

    def test_tied_inflections_are_classified_together(self):
        g = wiggle().merged(wiggle().translated((10.0, 7.0)))
        service = SweepService(g)
        with self.assertWarns(GenericityWarning):
            events = service.event_schedule()
        inflection_deltas = [e.genus_delta for e in events if e.kind is EventKind.INDEFINITE_INFLECTION]
        self.assertEqual(inflection_deltas, [1, 1, -1, -1])
        trajectory = service.genus_trajectory()
        self.assertEqual([step for step in trajectory.steps if step], [2, -2])
        self.assertEqual(trajectory.peak, trajectory.q + 2)
        self.assertEqual(count_c(g), 4)

    def test_no_tangent_line_at_an_inflection(self):
        g = cusp_pair()
        inflection_angles = [e.angle for e in event_schedule(g) if e.kind is EventKind.INDEFINITE_INFLECTION]
        for tangent in doubly_tangent_lines(g):
            for angle in inflection_angles:
                self.assertGreater(abs(tangent.angle - angle), 1e-6, tangent.location)


class SweepBoundTests(unittest.TestCase):
    def test_random_graphics_respect_the_bound(self):
        rng = np.random.default_rng(23)
        for _ in range(15):
            g = random_graphic(rng)
            service = SweepService(g)
            trajectory = service.genus_trajectory()
            p, q, c = trajectory.p, trajectory.q, service.count_c()
            self.assertLessEqual(Fraction(trajectory.peak), Fraction(p + q + c, 2))
            self.assertEqual(sum(1 for e in service.event_schedule() if e.genus_delta), c)
            self.assertEqual(sum(abs(step) for step in trajectory.steps), c)
            for event in service.event_schedule():
                if event.kind in (EventKind.DEFINITE_INFLECTION, EventKind.CUSP_TYPE_ONE, EventKind.DOUBLE_TANGENCY):
                    self.assertEqual(event.genus_delta, 0)
            self.assertEqual(c % 2, (p + q) % 2)
            self.assertGreaterEqual(c, abs(p - q))
            self.assertEqual(service.stable_genus_bound(), Fraction(p + q + c, 2))

    def test_wiggle_attains_the_bound(self):
        trajectory = genus_trajectory(wiggle())
        self.assertEqual(Fraction(trajectory.peak), stable_genus_bound(wiggle()))


if __name__ == '__main__':
    unittest.main()
