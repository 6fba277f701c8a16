import unittest

import numpy as np

from apbez.errors import DomainError, InsufficientDataError
from apbez.geometry import CubicBezier, Vec2
from apbez.metrics import *


def line_curve() -> CubicBezier:
    return CubicBezier(Vec2(0.0, 0.0), Vec2(1.0 / 3.0, 1.0 / 3.0), Vec2(2.0 / 3.0, 2.0 / 3.0), Vec2(1.0, 1.0))


class SamplingTests(unittest.TestCase):
    def test_chebyshev_endpoints(self):
        ts = chebyshev_parameters(11)
        self.assertEqual(0.0, ts[0])
        self.assertEqual(1.0, ts[-1])
        self.assertTrue(np.all(np.diff(ts) > 0.0))
        self.assertRaises(DomainError, chebyshev_parameters, 1)

    def test_arclength_on_a_line(self):
        # quadratic speed in the parameter, evenly spaced points in length
        pts = resample_by_arclength(lambda s: np.stack((s ** 2, s ** 2), axis=-1), 0.0, 1.0, 5)
        np.testing.assert_allclose(np.linspace(0.0, 1.0, 5), pts[:, 0], atol=2e-3)


class LinfTests(unittest.TestCase):
    def test_straight_segment(self):
        self.assertEqual(0.0, linf_error(line_curve(), lambda x: x, 1000))

    def test_parabola(self):
        curve = CubicBezier(Vec2(0.0, 0.0), Vec2(1.0 / 6.0, 0.0), Vec2(1.0 / 3.0, 1.0 / 12.0), Vec2(0.5, 0.25))
        self.assertLessEqual(linf_error(curve, lambda x: x * x, 10_000), 1e-14)

    def test_known_offset(self):
        self.assertAlmostEqual(0.25, linf_error(line_curve(), lambda x: x + 0.25, 100), delta=1e-15)

    def test_translation_invariance(self):
        curve = CubicBezier(Vec2(0.0, 0.0), Vec2(0.2, 0.1), Vec2(0.5, 0.4), Vec2(0.7, 0.3))
        shift = Vec2(3.0, -2.0)
        moved = curve.map(lambda p: p + shift)

        error = linf_error(curve, np.sin, 1000)
        shifted = linf_error(moved, lambda x: np.sin(x - shift.x) + shift.y, 1000)
        self.assertAlmostEqual(error, shifted, delta=1e-13)

    def test_sampling_adequacy(self):
        curve = CubicBezier(Vec2(0.0, 0.0), Vec2(0.2, 0.1), Vec2(0.5, 0.4), Vec2(0.7, 0.3))
        coarse = linf_error(curve, np.sin, 1000)
        fine = linf_error(curve, np.sin, 10_000)
        self.assertLessEqual(abs(fine - coarse), 0.01 * fine)


class HausdorffTests(unittest.TestCase):
    def test_identical(self):
        pts = np.random.default_rng(1).uniform(size=(50, 2))
        self.assertEqual(0.0, hausdorff_discrete(pts, pts))

    def test_parallel_segments(self):
        xs = np.linspace(0.0, 1.0, 101)
        low = np.stack((xs, np.zeros_like(xs)), axis=-1)
        high = np.stack((xs, np.ones_like(xs)), axis=-1)
        self.assertEqual(1.0, hausdorff_discrete(low, high))

    def test_symmetric(self):
        rng = np.random.default_rng(2)
        a = rng.uniform(size=(40, 2))
        b = rng.uniform(size=(70, 2))
        self.assertEqual(hausdorff_discrete(a, b), hausdorff_discrete(b, a))

    def test_empty(self):
        self.assertRaises(DomainError, hausdorff_discrete, np.zeros((0, 2)), np.zeros((3, 2)))


class OrderTests(unittest.TestCase):
    def test_exact_power_laws(self):
        fifth = [ErrorRecord(1.0, 1e-2), ErrorRecord(0.5, 3.125e-4)]
        fourth = [ErrorRecord(1.0, 1e-2), ErrorRecord(0.5, 6.25e-4)]

        self.assertAlmostEqual(5.0, estimate_order(fifth), delta=1e-12)
        self.assertAlmostEqual(4.0, estimate_order(fourth), delta=1e-12)
        self.assertAlmostEqual(4.0, last_interval_order(fourth), delta=1e-12)

    def test_least_squares(self):
        hs = [0.5, 0.25, 0.125, 0.0625]
        records = [ErrorRecord(h, 3.0 * h ** 5, hausdorff=2.0 * h ** 3) for h in hs]

        self.assertAlmostEqual(5.0, estimate_order(records), delta=1e-12)
        self.assertAlmostEqual(3.0, estimate_order(records, "hausdorff"), delta=1e-12)

    def test_insufficient_data(self):
        self.assertRaises(InsufficientDataError, estimate_order, [ErrorRecord(1.0, 1e-2)])
        self.assertRaises(InsufficientDataError, estimate_order, [ErrorRecord(1.0, 1e-2), ErrorRecord(0.5, 0.0)])
        self.assertRaises(InsufficientDataError, estimate_order, [ErrorRecord(1.0, 1e-2), ErrorRecord(1.0, 1e-3)])
        self.assertRaises(InsufficientDataError, estimate_order, [ErrorRecord(1.0, None), ErrorRecord(0.5, 1e-3)])

    def test_record_validation(self):
        self.assertRaises(DomainError, ErrorRecord, 1.0, -1e-3)
        self.assertRaises(DomainError, ErrorRecord, 0.0, 1e-3)
        self.assertRaises(DomainError, ErrorRecord(1.0, 1e-3).metric, "l2")


if __name__ == '__main__':
    unittest.main()
