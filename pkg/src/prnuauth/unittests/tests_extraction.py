"""
Unit testing module for denoising and fingerprint estimation.

"""
import os
import shutil
import tempfile
import unittest

import numpy as np

from prnuauth.config import Parameter, get_parameter, set_default_parameter
from prnuauth.errors import (DegenerateFingerprintError, DimensionMismatchError, FingerprintFormatError,
                             ImageTooSmallError, InsufficientImagesError, InvalidStateError, ParameterRangeError)
from prnuauth.imaging.geometry import resize_bilinear
from prnuauth.io.fpfile import dump_fingerprint, parse_fingerprint, read_fingerprint, write_fingerprint
from prnuauth.model.fingerprint import CameraFingerprint
from prnuauth.model.image import LuminanceImage
from prnuauth.prnu.denoise import denoise, residual
from prnuauth.prnu.extraction import accumulate, fingerprint_from_frames, postprocess
from prnuauth.prnu.matching import pce
from prnuauth.prnu.wavelet import dwt2, idwt2
from prnuauth.synth.camera import SCENE_STREAM, capture_series, derive_seed, gen_scene, make_camera

SIZE = 256
NOISE_SIGMA = 3.0
NOISE_SEEDS = 20
CAPTURES = 20
DOWNSCALE_CAPTURES = 30
MIN_PATTERN_CORRELATION = 0.6


def random_image(seed, width=SIZE, height=SIZE):
    rng = np.random.Generator(np.random.PCG64(seed))
    return LuminanceImage(rng.uniform(0, 255, size=(height, width)))


def correlation(a, b):
    return np.corrcoef(a.ravel(), b.ravel())[0, 1]


class WaveletReconstructionTest(unittest.TestCase):
    """ Test perfect reconstruction and energy conservation of the wavelet transform. """

    def testRun(self):
        image = random_image(1)
        restored = idwt2(dwt2(image))
        self.assertEqual(restored.shape, image.shape)
        self.assertTrue(np.max(np.abs(restored - image.pixels)) < 1e-6)

    def testEnergy(self):
        image = random_image(2)
        energy = float(np.sum(image.pixels ** 2))
        self.assertTrue(np.isclose(dwt2(image).energy(), energy, rtol=1e-9))

    def testConstant(self):
        pyramid = dwt2(np.full((64, 64), 100.0))
        for level in pyramid.details:
            for band in level:
                self.assertTrue(np.allclose(band, 0, atol=1e-6))

    def testNonSquare(self):
        values = random_image(3, 72, 52).pixels
        self.assertTrue(np.allclose(idwt2(dwt2(values, levels=2)), values, atol=1e-6))

    def testTooSmall(self):
        self.assertRaises(ImageTooSmallError, dwt2, np.zeros((8, 8)), 4)
        self.assertRaises(ParameterRangeError, dwt2, np.zeros((8, 8)), 0)


class DenoiseTest(unittest.TestCase):
    """ Test the wavelet-domain denoiser. """

    def testConstant(self):
        image = LuminanceImage(np.full((64, 64), 100.0))
        self.assertTrue(np.allclose(denoise(image).pixels, 100.0, atol=1e-6))
        self.assertTrue(np.allclose(residual(image).values, 0, atol=1e-6))

    def testWhiteNoise(self):
        for seed in range(NOISE_SEEDS):
            rng = np.random.Generator(np.random.PCG64(seed))
            image = LuminanceImage(128 + NOISE_SIGMA * rng.standard_normal((SIZE, SIZE)))
            denoised = denoise(image)
            self.assertTrue(denoised.pixels.var() < image.pixels.var(), 'seed {}'.format(seed))

    def testPlantedNoise(self):
        rng = np.random.Generator(np.random.PCG64(5))
        gradient = np.tile(np.linspace(50, 200, SIZE), (SIZE, 1))
        noise = NOISE_SIGMA * rng.standard_normal((SIZE, SIZE))
        noisy = residual(LuminanceImage(gradient + noise))
        self.assertTrue(correlation(noisy.values, noise) > 0.5)

    def testCaptureResidual(self):
        camera = make_camera(14, SIZE, SIZE)
        frame = capture_series(camera, 1, 4)[0]
        scene = gen_scene(derive_seed(4, 0, SCENE_STREAM), SIZE, SIZE)
        noise = residual(frame)
        self.assertTrue(np.allclose(noise.values + denoise(frame).pixels, frame.pixels, atol=1e-12))
        self.assertTrue(correlation(noise.values, camera.pattern * scene.pixels) > 0.1)

    def testMargins(self):
        image = random_image(6, 40, 37)
        denoised = denoise(image)
        # only the central 32x32 block is transformed
        self.assertTrue(np.array_equal(denoised.pixels[:2, :], image.pixels[:2, :]))
        self.assertTrue(np.array_equal(denoised.pixels[:, :4], image.pixels[:, :4]))

    def testTooSmall(self):
        self.assertRaises(ImageTooSmallError, denoise, LuminanceImage(np.zeros((15, 40))))


class AccumulateTest(unittest.TestCase):
    """ Test maximum-likelihood fingerprint estimation. """

    @classmethod
    def setUpClass(cls):
        cls.camera = make_camera(11, SIZE, SIZE)
        cls.frames = capture_series(cls.camera, CAPTURES, 1)

    def testConstant(self):
        images = [LuminanceImage(np.full((32, 32), 100.0))] * 3
        fingerprint = accumulate(images)
        self.assertTrue(np.allclose(fingerprint.values, 0, atol=1e-9))
        self.assertFalse(fingerprint.postprocessed)

    def testPattern(self):
        fingerprint = postprocess(accumulate(self.frames))
        self.assertEqual(fingerprint.image_count, CAPTURES)
        self.assertTrue(correlation(fingerprint.values, self.camera.pattern) > MIN_PATTERN_CORRELATION)

    def testCounts(self):
        for count in (15, 16, 20):
            self.assertEqual(accumulate(self.frames[:count]).image_count, count)

    def testDuplicates(self):
        single = accumulate(self.frames[:1])
        double = accumulate([self.frames[0], self.frames[0]])
        self.assertTrue(np.allclose(single.values, double.values, rtol=1e-12, atol=1e-15))

    def testDeterminism(self):
        first = accumulate(self.frames[:4])
        second = accumulate(self.frames[:4])
        parallel = accumulate(self.frames[:4], processes=2)
        self.assertTrue(np.array_equal(first.values, second.values))
        self.assertTrue(np.array_equal(first.values, parallel.values))

    def testWorkerSettings(self):
        default = get_parameter(Parameter.NOISE_VARIANCE)
        set_default_parameter(Parameter.NOISE_VARIANCE, 25.0)
        try:
            serial = accumulate(self.frames[:4])
            parallel = accumulate(self.frames[:4], processes=2)
        finally:
            set_default_parameter(Parameter.NOISE_VARIANCE, default)

        explicit = accumulate(self.frames[:4], noise_var=25.0)
        self.assertTrue(np.array_equal(serial.values, parallel.values))
        self.assertTrue(np.array_equal(serial.values, explicit.values))
        self.assertFalse(np.array_equal(serial.values, accumulate(self.frames[:4]).values))

    def testSaturation(self):
        frame = self.frames[0].pixels.copy()
        frame[:8, :8] = 255
        fingerprint = accumulate([LuminanceImage(frame)])
        self.assertTrue(np.all(fingerprint.values[:8, :8] == 0))

    def testErrors(self):
        self.assertRaises(InsufficientImagesError, accumulate, [])
        mixed = [LuminanceImage(np.zeros((32, 32))), LuminanceImage(np.zeros((32, 48)))]
        with self.assertRaises(DimensionMismatchError) as context:
            accumulate(mixed)
        self.assertIn('dimension mismatch', str(context.exception))
        saturated = [LuminanceImage(np.full((32, 32), 255.0))] * 2
        self.assertRaises(DegenerateFingerprintError, accumulate, saturated)


class PostprocessTest(unittest.TestCase):
    """ Test row/column zero-meaning. """

    def testRun(self):
        fingerprint = postprocess(CameraFingerprint([[1, 2, 3], [4, 6, 8]], 1))
        self.assertTrue(np.allclose(fingerprint.values, [[0.5, 0, -0.5], [-0.5, 0, 0.5]]))
        self.assertTrue(fingerprint.postprocessed)

    def testZeroMeans(self):
        rng = np.random.Generator(np.random.PCG64(7))
        fingerprint = postprocess(CameraFingerprint(rng.standard_normal((20, 30)) + 5, 1))
        self.assertTrue(np.allclose(fingerprint.values.mean(axis=0), 0))
        self.assertTrue(np.allclose(fingerprint.values.mean(axis=1), 0))

    def testRowConstant(self):
        with self.assertWarns(RuntimeWarning):
            fingerprint = postprocess(CameraFingerprint([[1, 1, 1], [5, 5, 5]], 1))
        self.assertTrue(np.allclose(fingerprint.values, 0))

    def testFixedPoint(self):
        values = np.array([[1.0, -1.0], [-1.0, 1.0]])
        fingerprint = postprocess(CameraFingerprint(values, 1))
        self.assertTrue(np.max(np.abs(fingerprint.values - values)) < 1e-12)

    def testTwice(self):
        fingerprint = postprocess(CameraFingerprint([[1, 2], [3, 5]], 1))
        self.assertRaises(InvalidStateError, postprocess, fingerprint)


class FramesTest(unittest.TestCase):
    """ Test fingerprint estimation from frames of another resolution. """

    def testIdentity(self):
        camera = make_camera(12, 64, 64)
        frames = capture_series(camera, 3, 2)
        direct = postprocess(accumulate(frames))
        self.assertTrue(np.array_equal(fingerprint_from_frames(frames, 64, 64).values, direct.values))

    def testDownscaled(self):
        camera = make_camera(13, 640, 480)
        frames = capture_series(camera, DOWNSCALE_CAPTURES, 3)
        fingerprint = fingerprint_from_frames(frames, 320, 240)
        # resizing is linear, so an offset keeps the pattern within the luminance range
        reference = resize_bilinear(LuminanceImage(100 * (1 + camera.pattern)), 320, 240)
        reference = CameraFingerprint(reference.pixels / 100 - 1, 1)
        self.assertEqual(fingerprint.shape, (240, 320))
        self.assertTrue(pce(reference, fingerprint).pce > 50)

    def testEmpty(self):
        self.assertRaises(InsufficientImagesError, fingerprint_from_frames, [], 32, 32)


class FingerprintFileTest(unittest.TestCase):
    """ Test the binary fingerprint file format. """

    def setUp(self):
        self.tmp_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmp_dir)

    def testRun(self):
        rng = np.random.Generator(np.random.PCG64(8))
        fingerprint = CameraFingerprint(rng.standard_normal((12, 17)).astype(np.float32), 21, postprocessed=True)
        filename = os.path.join(self.tmp_dir, 'camera.prnufp')
        write_fingerprint(fingerprint, filename)
        loaded = read_fingerprint(filename, 'camera')
        self.assertTrue(np.array_equal(loaded.values, fingerprint.values))
        self.assertEqual((loaded.image_count, loaded.postprocessed, loaded.label), (21, True, 'camera'))

    def testBadMagic(self):
        with self.assertRaises(FingerprintFormatError) as context:
            parse_fingerprint(b'NOTAFILE' + bytes(32))
        self.assertIn('bad magic', str(context.exception))

    def testSizeMismatch(self):
        data = dump_fingerprint(CameraFingerprint(np.ones((4, 4)), 1))
        with self.assertRaises(FingerprintFormatError) as context:
            parse_fingerprint(data[:-4])
        self.assertIn('size mismatch', str(context.exception))


def suite():
    tests = [WaveletReconstructionTest, DenoiseTest, AccumulateTest, PostprocessTest, FramesTest,
             FingerprintFileTest]

    test_suite = unittest.TestSuite()
    for test in tests:
        test_suite.addTest(unittest.defaultTestLoader.loadTestsFromTestCase(test))
    return test_suite


if __name__ == "__main__":
    runner = unittest.TextTestRunner(verbosity=2)
    runner.run(suite())
