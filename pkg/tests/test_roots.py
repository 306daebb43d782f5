import math
import os
import sys
import unittest

import numpy as np

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from models.errors import IdenticallyZero
from utils.roots import Polynomial, Root, real_polyroots, real_roots


class PolynomialTests(unittest.TestCase):
    def test_trailing_noise_is_trimmed(self):
        p = Polynomial.of([1.0, 2.0, 1e-20])
        self.assertEqual(p.degree, 1)

    def test_arithmetic(self):
        p = Polynomial.of([1.0, 1.0])
        q = Polynomial.of([-1.0, 1.0])
        self.assertEqual((p * q).coefficients, (-1.0, 0.0, 1.0))
        self.assertEqual((p + q).coefficients, (0.0, 2.0))
        self.assertTrue((p - p).is_zero)
        self.assertEqual(p.scale(3.0).coefficients, (3.0, 3.0))
        self.assertEqual(Polynomial.of([5.0, 0.0, 3.0]).deriv().coefficients, (0.0, 6.0))

    def test_evaluation_accepts_arrays(self):
        p = Polynomial.of([0.0, 0.0, 1.0])
        np.testing.assert_allclose(p(np.array([1.0, 2.0, 3.0])), [1.0, 4.0, 9.0])


class RealRootsTests(unittest.TestCase):
    def test_simple_root(self):
        roots = real_roots(Polynomial.of([-2.0, 0.0, 1.0]), (0.0, 2.0))
        self.assertEqual(len(roots), 1)
        self.assertAlmostEqual(roots[0].value, math.sqrt(2.0), places=10)
        self.assertEqual(roots[0].multiplicity, 1)

    def test_roots_on_the_interval_ends(self):
        roots = real_roots(Polynomial.of([2.0, -3.0, 1.0]), (1.0, 2.0))
        self.assertEqual([r.value for r in roots], [1.0, 2.0])

    def test_double_root_is_reported_once(self):
        roots = real_roots(Polynomial.of([1.0, -2.0, 1.0]), (0.0, 2.0))
        self.assertEqual(roots, [Root(1.0, 2)])

    def test_triple_root(self):
        roots = real_roots(Polynomial.of([-0.125, 0.75, -1.5, 1.0]), (0.0, 1.0))
        self.assertEqual(len(roots), 1)
        self.assertAlmostEqual(roots[0].value, 0.5, places=8)
        self.assertEqual(roots[0].multiplicity, 3)

    def test_cubic_with_three_roots_sorted(self):
        # (x - 0.1)(x - 0.4)(x - 0.9)
        p = Polynomial.of([-0.1, 1.0]) * Polynomial.of([-0.4, 1.0]) * Polynomial.of([-0.9, 1.0])
        roots = real_roots(p, (0.0, 1.0))
        np.testing.assert_allclose([r.value for r in roots], [0.1, 0.4, 0.9], atol=1e-10)

    def test_close_pair_stays_two_simple_roots(self):
        for pair in ((0.3810, 0.3815), (0.5503, 0.5574)):
            p = Polynomial.of([1.0])
            for r in (0.05, *pair, 0.9):
                p = p * Polynomial.of([-r, 1.0])
            roots = real_roots(p, (0.0, 1.0))
            self.assertEqual([r.multiplicity for r in roots], [1, 1, 1, 1])
            np.testing.assert_allclose([r.value for r in roots], [0.05, *pair, 0.9], atol=1e-9)

    def test_random_products_recover_every_root(self):
        rng = np.random.default_rng(20240607)
        for _ in range(1000):
            degree = int(rng.integers(1, 6))
            while True:
                expected = np.sort(rng.uniform(0.0, 1.0, degree))
                if degree == 1 or np.min(np.diff(expected)) >= 1e-3:
                    break
            p = Polynomial.of([1.0])
            for r in expected:
                p = p * Polynomial.of([-r, 1.0])
            roots = real_roots(p, (-0.5, 1.5))
            self.assertEqual(len(roots), degree, list(expected))
            self.assertTrue(all(r.multiplicity == 1 for r in roots), roots)
            np.testing.assert_allclose([r.value for r in roots], expected, atol=1e-6)

    def test_roots_outside_are_ignored(self):
        roots = real_roots(Polynomial.of([-4.0, 0.0, 1.0]), (0.0, 1.0))
        self.assertEqual(roots, [])

    def test_constant_has_no_roots(self):
        self.assertEqual(real_roots(Polynomial.of([3.0]), (0.0, 1.0)), [])

    def test_zero_polynomial_raises(self):
        with self.assertRaises(IdenticallyZero):
            real_roots(Polynomial.of([0.0, 0.0]), (0.0, 1.0))

    def test_empty_interval_raises(self):
        with self.assertRaises(ValueError):
            real_roots(Polynomial.of([1.0, 1.0]), (1.0, 0.0))


class RealPolyrootsTests(unittest.TestCase):
    def test_companion_roots_in_window(self):
        roots = real_polyroots([-0.06, 0.5, -1.0], -1.0, 1.0)
        np.testing.assert_allclose(sorted(roots), [0.2, 0.3], atol=1e-12)

    def test_complex_roots_dropped(self):
        self.assertEqual(real_polyroots([1.0, 0.0, 1.0], -5.0, 5.0), [])

    def test_constant(self):
        self.assertEqual(real_polyroots([2.0], 0.0, 1.0), [])


if __name__ == '__main__':
    unittest.main()
