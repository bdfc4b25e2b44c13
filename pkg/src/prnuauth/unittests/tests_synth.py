"""
Unit testing module for the synthetic camera.

"""
import json
import os
import shutil
import tempfile
import unittest

import numpy as np

from prnuauth.errors import DimensionMismatchError, ParameterRangeError
from prnuauth.io.fpfile import read_fingerprint
from prnuauth.synth.camera import (capture, capture_series, degrade, gen_pattern, gen_scene, make_camera,
                                   write_fixture)

SIZE = 256
STRENGTH = 0.02
SCENE_LOW, SCENE_HIGH = 40.0, 215.0


class PatternTest(unittest.TestCase):
    """ Test PRNU pattern generation. """

    def testDeterminism(self):
        self.assertTrue(np.array_equal(gen_pattern(1, SIZE, SIZE, STRENGTH), gen_pattern(1, SIZE, SIZE, STRENGTH)))

    def testStatistics(self):
        pattern = gen_pattern(1, SIZE, SIZE, STRENGTH)
        self.assertEqual(pattern.shape, (SIZE, SIZE))
        self.assertAlmostEqual(pattern.mean(), 0.0, places=12)
        self.assertTrue(0.018 <= pattern.std() <= 0.022)

    def testIndependence(self):
        a = gen_pattern(1, SIZE, SIZE, STRENGTH)
        b = gen_pattern(2, SIZE, SIZE, STRENGTH)
        self.assertTrue(abs(np.corrcoef(a.ravel(), b.ravel())[0, 1]) < 0.05)

    def testRange(self):
        self.assertRaises(ParameterRangeError, gen_pattern, 1, SIZE, SIZE, 0.5)
        self.assertRaises(ParameterRangeError, gen_pattern, 1, SIZE, SIZE, 0.0)
        self.assertRaises(ParameterRangeError, gen_pattern, 1, 8, SIZE, STRENGTH)


class SceneTest(unittest.TestCase):
    """ Test scene generation. """

    def testRun(self):
        scene = gen_scene(3, SIZE, 128)
        self.assertEqual((scene.width, scene.height), (SIZE, 128))
        self.assertTrue(scene.pixels.min() >= SCENE_LOW)
        self.assertTrue(scene.pixels.max() <= SCENE_HIGH)
        self.assertAlmostEqual(scene.pixels.mean(), 127.5, places=6)

    def testDeterminism(self):
        self.assertEqual(gen_scene(3, 64, 64), gen_scene(3, 64, 64))
        self.assertNotEqual(gen_scene(3, 64, 64), gen_scene(4, 64, 64))


class CaptureTest(unittest.TestCase):
    """ Test the image formation model. """

    def setUp(self):
        self.scene = gen_scene(5, 64, 64)

    def testIdentity(self):
        camera = make_camera(1, 64, 64, strength=0, read_noise_sigma=0)
        self.assertEqual(capture(self.scene, camera, 0), self.scene)

    def testInversion(self):
        camera = make_camera(1, 64, 64, strength=STRENGTH, read_noise_sigma=0)
        image = capture(self.scene, camera, 0)
        self.assertTrue(np.allclose(image.pixels / self.scene.pixels - 1, camera.pattern, atol=1e-12))

    def testReadNoise(self):
        camera = make_camera(1, 64, 64)
        self.assertEqual(capture(self.scene, camera, 7), capture(self.scene, camera, 7))
        self.assertNotEqual(capture(self.scene, camera, 7), capture(self.scene, camera, 8))

    def testDimensions(self):
        camera = make_camera(1, 32, 64)
        self.assertRaises(DimensionMismatchError, capture, self.scene, camera, 0)

    def testSeries(self):
        camera = make_camera(1, 32, 32)
        first = capture_series(camera, 3, 10)
        self.assertEqual(first, capture_series(camera, 3, 10))
        self.assertNotEqual(first[0], first[1])
        self.assertNotEqual(first[0], capture_series(camera, 1, 11)[0])

    def testDegrade(self):
        degraded = degrade(self.scene, 2.0, 1)
        self.assertEqual(degraded, degrade(self.scene, 2.0, 1))
        self.assertTrue(1.5 < np.std(degraded.pixels - self.scene.pixels) < 2.5)
        self.assertRaises(ParameterRangeError, degrade, self.scene, -1.0, 1)


class FixtureTest(unittest.TestCase):
    """ Test writing synthetic capture sets to disk. """

    def setUp(self):
        self.tmp_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmp_dir)

    def _read(self, directory, name):
        with open(os.path.join(directory, name), 'rb') as stream:
            return stream.read()

    def testRun(self):
        dir_a = os.path.join(self.tmp_dir, 'a')
        dir_b = os.path.join(self.tmp_dir, 'b')
        manifest = write_fixture(dir_a, 7, 3, 32, 32)
        self.assertEqual(manifest, write_fixture(dir_b, 7, 3, 32, 32))
        self.assertListEqual(manifest['images'], ['capture_0000.pgm', 'capture_0001.pgm', 'capture_0002.pgm'])

        for name in manifest['images'] + [manifest['pattern_file'], 'manifest.json']:
            self.assertEqual(self._read(dir_a, name), self._read(dir_b, name))

        with open(os.path.join(dir_a, 'manifest.json')) as stream:
            self.assertEqual(json.load(stream)['count'], 3)

        pattern = read_fingerprint(os.path.join(dir_a, manifest['pattern_file']))
        expected = make_camera(7, 32, 32).pattern.astype(np.float32)
        self.assertTrue(np.array_equal(pattern.values, expected))

    def testCount(self):
        self.assertRaises(ParameterRangeError, write_fixture, self.tmp_dir, 7, 0, 32, 32)


def suite():
    tests = [PatternTest, SceneTest, CaptureTest, FixtureTest]

    test_suite = unittest.TestSuite()
    for test in tests:
        test_suite.addTest(unittest.defaultTestLoader.loadTestsFromTestCase(test))
    return test_suite


if __name__ == "__main__":
    runner = unittest.TextTestRunner(verbosity=2)
    runner.run(suite())
