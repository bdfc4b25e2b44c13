"""
End-to-end testing module: same-camera, cross-camera and degraded-frame decisions of the
authentication service over a suite of synthetic cameras.

"""
import os
import shutil
import tempfile
import unittest

import numpy as np

from prnuauth.auth.service import AuthService
from prnuauth.auth.store import FingerprintStore
from prnuauth.io.fpfile import dump_fingerprint
from prnuauth.prnu.extraction import fingerprint_from_frames
from prnuauth.synth.camera import capture_series, degrade, derive_seed, make_camera

SEEDS = list(range(20))
SIZE = 512
CAPTURES = 20
DEGRADE_SIGMA = 2.0
THRESHOLD = 50.0
MIN_PATTERN_CORRELATION = 0.6


def customer(seed):
    return 'camera-{:02d}'.format(seed)


def enrollment_frames(seed):
    return capture_series(make_camera(seed, SIZE, SIZE), CAPTURES, derive_seed(seed, 0))


def session_frames(seed):
    return capture_series(make_camera(seed, SIZE, SIZE), CAPTURES, derive_seed(seed, 1))


class SyntheticSuiteTest(unittest.TestCase):
    """ Test service decisions on every camera of the suite. """

    @classmethod
    def setUpClass(cls):
        cls.tmp_dir = tempfile.mkdtemp()
        cls.service = AuthService(FingerprintStore(os.path.join(cls.tmp_dir, 'store')), threshold=THRESHOLD)
        cls.patterns, cls.records = {}, {}
        cls.same, cls.cross, cls.degraded = {}, {}, {}

        for seed in SEEDS:
            cls.patterns[seed] = make_camera(seed, SIZE, SIZE).pattern
            cls.records[seed] = cls.service.enroll(customer(seed), enrollment_frames(seed))

            frames = session_frames(seed)
            cls.same[seed] = cls.service.verify(customer(seed), True, frames)
            degraded = [degrade(frame, DEGRADE_SIGMA, derive_seed(seed, 2, i)) for i, frame in enumerate(frames)]
            cls.degraded[seed] = cls.service.verify(customer(seed), True, degraded)

            other = SEEDS[(seed + 1) % len(SEEDS)]
            cls.cross[seed] = cls.service.verify(customer(seed), True, session_frames(other))

    @classmethod
    def tearDownClass(cls):
        shutil.rmtree(cls.tmp_dir)

    def testSameCamera(self):
        for seed in SEEDS:
            decision = self.same[seed]
            self.assertTrue(decision.authenticated, seed)
            self.assertTrue(decision.pce > THRESHOLD, seed)

    def testCrossCamera(self):
        for seed in SEEDS:
            decision = self.cross[seed]
            self.assertFalse(decision.authenticated, seed)
            self.assertTrue(decision.camera_checked, seed)
            self.assertTrue(abs(decision.pce) < THRESHOLD, seed)

    def testDegradedFrames(self):
        for seed in SEEDS:
            self.assertTrue(self.degraded[seed].authenticated, seed)

    def testFaceFailure(self):
        decision = self.service.verify(customer(SEEDS[0]), False, session_frames(SEEDS[0]))
        self.assertFalse(decision.authenticated)
        self.assertIsNone(decision.pce)

    def testCounters(self):
        self.assertEqual(self.service.counters['fingerprints_computed'], 4 * len(SEEDS))

    def testDeterminism(self):
        again = fingerprint_from_frames(enrollment_frames(SEEDS[0]), SIZE, SIZE)
        stored = self.service.lookup(customer(SEEDS[0])).fingerprint
        self.assertEqual(dump_fingerprint(again), dump_fingerprint(stored))

    def testPatternRecovery(self):
        for seed in SEEDS:
            values = self.records[seed].fingerprint.values
            correlation = np.corrcoef(self.patterns[seed].ravel(), values.ravel())[0, 1]
            self.assertTrue(correlation > MIN_PATTERN_CORRELATION, seed)


def suite():
    tests = [SyntheticSuiteTest]

    test_suite = unittest.TestSuite()
    for test in tests:
        test_suite.addTest(unittest.defaultTestLoader.loadTestsFromTestCase(test))
    return test_suite


if __name__ == "__main__":
    runner = unittest.TextTestRunner(verbosity=2)
    runner.run(suite())
