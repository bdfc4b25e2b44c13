"""
Unit testing module for image decoding, encoding and geometry.

"""
import io
import os
import shutil
import tempfile
import unittest

import numpy as np

from prnuauth.errors import (DimensionMismatchError, MalformedHeaderError, ParameterRangeError,
                             TruncatedPayloadError, UnsupportedDepthError)
from prnuauth.imaging.geometry import center_crop, fit_to, reconcile, resize_bilinear
from prnuauth.io.netpbm import load_pgm, load_ppm_luminance, read_image, save_image, save_pgm
from prnuauth.model.fingerprint import CameraFingerprint
from prnuauth.model.image import LuminanceImage
from prnuauth.prnu.extraction import postprocess

SMALL_PGM = b'P5\n2 2\n255\n' + bytes([0, 128, 255, 64])
COMMENTED_PGM = b'P5\n# written by hand\n2 1\n# depth follows\n255\n' + bytes([10, 20])
DEEP_PGM = b'P5\n2 2\n65535\n' + bytes(8)
TRUNCATED_PGM = b'P5\n2 2\n255\n' + bytes([1, 2, 3])

RGB_PPM = b'P6\n3 1\n255\n' + bytes([255, 255, 255, 255, 0, 0, 0, 0, 0])
RGB_LUMINANCE = [255.0, 76.245, 0.0]


class PGMDecodeTest(unittest.TestCase):
    """ Test binary graymap decoding. """

    def testRun(self):
        image = load_pgm(SMALL_PGM)
        self.assertEqual((image.width, image.height), (2, 2))
        self.assertListEqual(image.pixels.tolist(), [[0, 128], [255, 64]])

    def testFileObject(self):
        image = load_pgm(io.BytesIO(SMALL_PGM))
        self.assertEqual(image.pixels[1, 0], 255)

    def testComments(self):
        image = load_pgm(COMMENTED_PGM)
        self.assertListEqual(image.pixels.tolist(), [[10, 20]])


class PGMErrorsTest(unittest.TestCase):
    """ Test rejection of unsupported or damaged graymaps. """

    def testDepth(self):
        with self.assertRaises(UnsupportedDepthError):
            load_pgm(DEEP_PGM)

    def testTruncated(self):
        with self.assertRaises(TruncatedPayloadError) as context:
            load_pgm(TRUNCATED_PGM)
        self.assertIn('truncated payload', str(context.exception))

    def testMagic(self):
        with self.assertRaises(MalformedHeaderError):
            load_pgm(RGB_PPM)


class PPMLuminanceTest(unittest.TestCase):
    """ Test BT.601 luminance conversion of pixmaps. """

    def testRun(self):
        image = load_ppm_luminance(RGB_PPM)
        for value, expected in zip(image.pixels[0], RGB_LUMINANCE):
            self.assertAlmostEqual(value, expected, places=6)


class PGMFileTest(unittest.TestCase):
    """ Test writing and reading graymap files. """

    def setUp(self):
        self.tmp_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmp_dir)

    def testRun(self):
        rng = np.random.Generator(np.random.PCG64(5))
        image = LuminanceImage(rng.integers(0, 256, size=(7, 9)))
        filename = os.path.join(self.tmp_dir, 'image.pgm')
        save_image(image, filename)
        self.assertEqual(read_image(filename), image)

    def testRounding(self):
        stream = io.BytesIO()
        save_pgm(LuminanceImage([[0.4, 0.6, 254.7]]), stream)
        self.assertListEqual(load_pgm(stream.getvalue()).pixels.tolist(), [[0, 1, 255]])

    def testPixmapDispatch(self):
        filename = os.path.join(self.tmp_dir, 'image.ppm')
        with open(filename, 'wb') as stream:
            stream.write(RGB_PPM)
        self.assertAlmostEqual(read_image(filename).pixels[0, 1], RGB_LUMINANCE[1], places=6)


class LuminanceImageTest(unittest.TestCase):
    """ Test luminance image validation. """

    def testRange(self):
        self.assertRaises(ValueError, LuminanceImage, [[0, 256]])
        self.assertRaises(ValueError, LuminanceImage, [[-1, 0]])
        self.assertRaises(ValueError, LuminanceImage, [[np.nan, 0]])

    def testReadOnly(self):
        image = LuminanceImage(np.zeros((2, 2)))
        with self.assertRaises(ValueError):
            image.pixels[0, 0] = 1


class ResizeTest(unittest.TestCase):
    """ Test bilinear resizing. """

    def testConstant(self):
        image = LuminanceImage(np.full((4, 4), 42.0))
        resized = resize_bilinear(image, 7, 5)
        self.assertEqual(resized.shape, (5, 7))
        self.assertTrue(np.allclose(resized.pixels, 42.0))

    def testAlignCorners(self):
        resized = resize_bilinear(LuminanceImage([[0, 255]]), 3, 1)
        self.assertTrue(np.allclose(resized.pixels, [[0, 127.5, 255]]))

    def testIdentity(self):
        image = LuminanceImage(np.arange(12).reshape(3, 4))
        self.assertEqual(resize_bilinear(image, 4, 3), image)

    def testRange(self):
        rng = np.random.Generator(np.random.PCG64(2))
        image = LuminanceImage(rng.uniform(10, 200, size=(9, 13)))
        resized = resize_bilinear(image, 31, 17)
        self.assertTrue(resized.pixels.min() >= image.pixels.min())
        self.assertTrue(resized.pixels.max() <= image.pixels.max())

    def testInvalidSize(self):
        self.assertRaises(ParameterRangeError, resize_bilinear, LuminanceImage([[1]]), 0, 1)


class CropTest(unittest.TestCase):
    """ Test center cropping. """

    def testRun(self):
        image = LuminanceImage(np.arange(16).reshape(4, 4))
        self.assertListEqual(center_crop(image, 2, 2).pixels.tolist(), [[5, 6], [9, 10]])

    def testOddMargin(self):
        image = LuminanceImage(np.arange(25).reshape(5, 5))
        self.assertListEqual(center_crop(image, 2, 2).pixels.tolist(), [[6, 7], [11, 12]])

    def testLarger(self):
        image = LuminanceImage(np.zeros((4, 4)))
        self.assertRaises(DimensionMismatchError, center_crop, image, 5, 4)

    def testFitTo(self):
        image = LuminanceImage(np.tile(np.arange(8.0), (4, 1)))
        fitted = fit_to(image, 2, 2)
        self.assertEqual(fitted.shape, (2, 2))
        # the aspect crop keeps columns 2..5
        self.assertTrue(np.allclose(fitted.pixels[0], [2, 5]))

    def testReconcile(self):
        fp_a = CameraFingerprint(np.arange(20.0).reshape(4, 5), 1)
        fp_b = CameraFingerprint(np.zeros((6, 3)), 1)
        crop_a, crop_b = reconcile(fp_a, fp_b)
        self.assertEqual(crop_a.shape, (4, 3))
        self.assertEqual(crop_b.shape, (4, 3))
        self.assertListEqual(crop_a.values[0].tolist(), [1, 2, 3])

    def testReconcileZeroMean(self):
        rng = np.random.Generator(np.random.PCG64(5))
        fp_a = postprocess(CameraFingerprint(rng.standard_normal((32, 40)), 1))
        fp_b = postprocess(CameraFingerprint(rng.standard_normal((24, 48)), 1))
        crop_a, crop_b = reconcile(fp_a, fp_b)
        for cropped in (crop_a, crop_b):
            self.assertEqual(cropped.shape, (24, 40))
            self.assertTrue(cropped.postprocessed)
            self.assertTrue(np.allclose(cropped.values.mean(axis=0), 0.0, atol=1e-9))
            self.assertTrue(np.allclose(cropped.values.mean(axis=1), 0.0, atol=1e-9))


def suite():
    tests = [PGMDecodeTest, PGMErrorsTest, PPMLuminanceTest, PGMFileTest, LuminanceImageTest, ResizeTest, CropTest]

    test_suite = unittest.TestSuite()
    for test in tests:
        test_suite.addTest(unittest.defaultTestLoader.loadTestsFromTestCase(test))
    return test_suite


if __name__ == "__main__":
    runner = unittest.TextTestRunner(verbosity=2)
    runner.run(suite())
