"""
Unit testing module for PCE matching, decisions and batch scoring.

"""
import os
import shutil
import tempfile
import unittest

import matplotlib
matplotlib.use('Agg')

import numpy as np

from prnuauth.errors import (DegenerateFingerprintError, DimensionMismatchError, ParameterRangeError)
from prnuauth.model.fingerprint import CameraFingerprint
from prnuauth.prnu.calibration import match_table, null_calibration, random_fingerprint, summarize_null
from prnuauth.prnu.matching import PceReport, correlation_plane, decide, exclusion_mask, normalize_fp, pce
from prnuauth.prnu.plotting import plot_correlation_plane, plot_fingerprint, plot_pce_distribution

THRESHOLD = 50.0

MATCHING_SCORES = [101.559, 189.1801, 2.455e+04]
NON_MATCHING_SCORES = [45.3992, 3.0243e-04, 0.3617, 2.88e-05, -1.635e+04, -4.0855e+03]

NULL_TRIALS = 200
NULL_SEEDS = 20


def noisy_copy(fingerprint, seed):
    rng = np.random.Generator(np.random.PCG64(seed))
    return fingerprint.copy(values=fingerprint.values + rng.standard_normal(fingerprint.shape))


class NormalizeTest(unittest.TestCase):
    """ Test fingerprint normalization. """

    def testRun(self):
        normalized = normalize_fp(CameraFingerprint([[1, 1], [1, 3]], 1))
        expected = np.array([[-0.5, -0.5], [-0.5, 1.5]]) / np.sqrt(3)
        self.assertTrue(np.allclose(normalized.values, expected))

    def testDegenerate(self):
        self.assertRaises(DegenerateFingerprintError, normalize_fp, CameraFingerprint(np.zeros((4, 4)), 1))
        self.assertRaises(DegenerateFingerprintError, normalize_fp, CameraFingerprint(np.full((4, 4), 2.0), 1))


class CorrelationPlaneTest(unittest.TestCase):
    """ Test the circular cross-correlation plane. """

    def setUp(self):
        self.fp_a = random_fingerprint(1, 64, 64)
        self.fp_b = random_fingerprint(2, 64, 64)

    def testSelf(self):
        plane = correlation_plane(self.fp_a, self.fp_a)
        self.assertAlmostEqual(plane[0, 0], 1.0, places=9)
        self.assertEqual(np.unravel_index(np.argmax(plane), plane.shape), (0, 0))

    def testShift(self):
        shifted = self.fp_a.copy(values=np.roll(self.fp_a.values, (5, 7), axis=(0, 1)))
        plane = correlation_plane(self.fp_a, shifted)
        self.assertEqual(np.unravel_index(np.argmax(plane), plane.shape), (5, 7))

    def testUnrelated(self):
        for seed in range(NULL_SEEDS):
            fp_a = random_fingerprint(100 + 2 * seed, 128, 128)
            fp_b = random_fingerprint(101 + 2 * seed, 128, 128)
            self.assertTrue(np.max(np.abs(correlation_plane(fp_a, fp_b))) < 0.2, seed)

    def testDirectSum(self):
        fp_a = random_fingerprint(3, 16, 16)
        fp_b = random_fingerprint(4, 16, 16)
        a = normalize_fp(fp_a).values
        b = normalize_fp(fp_b).values
        direct = np.zeros((16, 16))
        for dy in range(16):
            for dx in range(16):
                direct[dy, dx] = np.sum(a * np.roll(b, (-dy, -dx), axis=(0, 1)))
        self.assertTrue(np.max(np.abs(direct - correlation_plane(fp_a, fp_b))) < 1e-8)

    def testDimensions(self):
        self.assertRaises(DimensionMismatchError, correlation_plane, self.fp_a, random_fingerprint(5, 32, 64))

    def testExclusionMask(self):
        mask = exclusion_mask(16, 16, 2)
        self.assertEqual(mask.sum(), 25)
        self.assertTrue(mask[0, 0] and mask[14, 15] and mask[2, 2])
        self.assertFalse(mask[3, 0])


class PCETest(unittest.TestCase):
    """ Test the signed Peak-to-Correlation Energy score. """

    def setUp(self):
        self.fp_a = random_fingerprint(1, 64, 64)
        self.fp_b = random_fingerprint(2, 64, 64)

    def testSelf(self):
        report = pce(self.fp_a, self.fp_a)
        self.assertTrue(report.pce > 1000)
        self.assertAlmostEqual(report.peak_correlation, 1.0, places=9)
        self.assertEqual((report.width, report.height, report.exclusion_half_width), (64, 64, 5))

    def testSign(self):
        negated = self.fp_a.copy(values=-self.fp_a.values)
        self.assertTrue(np.isclose(pce(self.fp_a, negated).pce, -pce(self.fp_a, self.fp_a).pce, rtol=1e-9))

    def testSymmetry(self):
        noisy = noisy_copy(self.fp_a, 9)
        self.assertTrue(np.isclose(pce(self.fp_a, noisy).pce, pce(noisy, self.fp_a).pce, rtol=1e-9))

    def testAffineInvariance(self):
        noisy = noisy_copy(self.fp_a, 10)
        scaled = self.fp_a.copy(values=2 * self.fp_a.values + 3)
        self.assertTrue(np.isclose(pce(scaled, noisy).pce, pce(self.fp_a, noisy).pce, rtol=1e-9))

    def testCorrelated(self):
        self.assertTrue(decide(pce(self.fp_a, noisy_copy(self.fp_a, 11))).matched)

    def testWindow(self):
        small = random_fingerprint(6, 8, 8)
        self.assertRaises(ParameterRangeError, pce, small, small)
        self.assertRaises(ParameterRangeError, pce, self.fp_a, self.fp_b, 40)

    def testDegenerate(self):
        zeros = CameraFingerprint(np.zeros((64, 64)), 1)
        self.assertRaises(DegenerateFingerprintError, pce, zeros, self.fp_a)


class DecisionTest(unittest.TestCase):
    """ Test threshold decisions. """

    def testScores(self):
        for score in MATCHING_SCORES:
            self.assertTrue(decide(score, THRESHOLD).matched, score)
        for score in NON_MATCHING_SCORES:
            self.assertFalse(decide(score, THRESHOLD).matched, score)

    def testBoundary(self):
        self.assertFalse(decide(50.0).matched)
        self.assertTrue(decide(50.0 + 1e-9).matched)

    def testReport(self):
        decision = decide(PceReport(120.0, 0.3, 5, 64, 64))
        self.assertEqual(decision.to_dict(), {'matched': True, 'pce': 120.0, 'threshold': THRESHOLD})


class NullCalibrationTest(unittest.TestCase):
    """ Test the null distribution of the signed PCE on unrelated fingerprints. """

    def testRun(self):
        sample = null_calibration(NULL_TRIALS, 256, 256, seed=0)
        summary = summarize_null(sample, THRESHOLD)
        self.assertEqual(len(sample), NULL_TRIALS)
        self.assertTrue(-5 <= summary['mean'] <= 5)
        self.assertTrue(summary['below_threshold'] >= NULL_TRIALS - 2)
        self.assertEqual(summary['false_matches'], int(sample['matched'].sum()))


class MatchTableTest(unittest.TestCase):
    """ Test reference-by-probe scoring tables. """

    def testRun(self):
        fp_a = random_fingerprint(1, 64, 64)
        fp_b = random_fingerprint(2, 64, 64)
        probe = fp_a.copy(values=noisy_copy(fp_a, 12).values[2:62, 1:63])
        table = match_table({'a': fp_a, 'b': fp_b}, {'probe': probe}, THRESHOLD)
        self.assertListEqual(list(table.columns), ['reference', 'probe', 'pce', 'peak_correlation', 'matched'])
        matched = table.set_index('reference')['matched']
        self.assertTrue(matched['a'])
        self.assertFalse(matched['b'])


class PlottingTest(unittest.TestCase):
    """ Test that the plotting utilities draw and save figures. """

    def setUp(self):
        self.tmp_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmp_dir)

    def testRun(self):
        fp_a = random_fingerprint(1, 32, 32)
        filename = os.path.join(self.tmp_dir, 'fingerprint.png')
        ax = plot_fingerprint(fp_a, filename=filename)
        self.assertTrue(os.path.exists(filename))
        self.assertIsNotNone(plot_correlation_plane(fp_a, noisy_copy(fp_a, 13), ax=ax))
        self.assertIsNotNone(plot_pce_distribution(null_calibration(5, 32, 32)))


def suite():
    tests = [NormalizeTest, CorrelationPlaneTest, PCETest, DecisionTest, NullCalibrationTest, MatchTableTest,
             PlottingTest]

    test_suite = unittest.TestSuite()
    for test in tests:
        test_suite.addTest(unittest.defaultTestLoader.loadTestsFromTestCase(test))
    return test_suite


if __name__ == "__main__":
    runner = unittest.TextTestRunner(verbosity=2)
    runner.run(suite())
