""" This module implements the synthetic camera oracle.

Captures follow the multiplicative-plus-additive formation model

    I = clip(I0 * (1 + K) + n, 0, 255)

with I0 the scene, K the planted pattern and n Gaussian read noise. All randomness comes from
PCG64 generators seeded with (seed, stream) pairs, so fixtures reproduce across platforms.

"""
import json
import logging
import os

import numpy as np
from scipy.ndimage import gaussian_filter

from ..errors import DimensionMismatchError, ParameterRangeError
from ..io.fpfile import write_fingerprint
from ..io.netpbm import save_image
from ..model.fingerprint import CameraFingerprint
from ..model.image import LuminanceImage, MAX_INTENSITY

logger = logging.getLogger(__name__)

PATTERN_STREAM = 0
SCENE_STREAM = 1
SHOT_STREAM = 2
DEGRADE_STREAM = 3

MIN_SIZE = 16
MAX_STRENGTH = 0.1
SCENE_RANGE = (40.0, 215.0)

DEFAULT_STRENGTH = 0.02
DEFAULT_SIGMA = 2.0


def _rng(seed, stream):
    return np.random.Generator(np.random.PCG64([int(seed), stream]))


def _check_size(width, height):
    if width < MIN_SIZE or height < MIN_SIZE:
        raise ParameterRangeError("Synthetic images must be at least {0}x{0} (got {1}x{2})".format(
            MIN_SIZE, width, height))


def _check_strength(strength, allow_zero=False):
    low_ok = strength >= 0 if allow_zero else strength > 0
    if not (low_ok and strength <= MAX_STRENGTH):
        raise ParameterRangeError("out-of-range strength {} (must lie in (0, {}])".format(strength, MAX_STRENGTH))


class SyntheticCamera(object):
    """ A simulated sensor with a planted PRNU pattern and Gaussian read noise. """

    def __init__(self, pattern, strength, read_noise_sigma, seed):
        """
        Arguments:
            pattern (numpy.ndarray): planted pattern K (already scaled by strength)
            strength (float): pattern strength, in [0, 0.1] (0 is the identity camera)
            read_noise_sigma (float): read noise standard deviation on the 0-255 scale
            seed (int): seed the pattern was drawn from
        """
        _check_strength(strength, allow_zero=True)

        if read_noise_sigma < 0:
            raise ParameterRangeError("Read noise sigma must be non-negative (got {})".format(read_noise_sigma))

        pattern = np.array(pattern, dtype=np.float64)
        pattern.setflags(write=False)

        self.pattern = pattern
        self.strength = float(strength)
        self.read_noise_sigma = float(read_noise_sigma)
        self.seed = int(seed)

    @property
    def width(self):
        return self.pattern.shape[1]

    @property
    def height(self):
        return self.pattern.shape[0]

    def __repr__(self):
        return 'SyntheticCamera(seed={}, {}x{}, strength={}, sigma={})'.format(
            self.seed, self.width, self.height, self.strength, self.read_noise_sigma)


def gen_pattern(seed, width, height, strength):
    """ Draw a PRNU pattern: i.i.d. standard normal values, mean removed, scaled by strength.

    Arguments:
        seed (int): random seed
        width (int): width (>= 16)
        height (int): height (>= 16)
        strength (float): multiplier in (0, 0.1]

    Returns:
        numpy.ndarray: pattern matrix (height x width)
    """
    _check_size(width, height)
    _check_strength(strength)

    values = _rng(seed, PATTERN_STREAM).standard_normal((height, width))
    return (values - values.mean()) * strength


def gen_scene(seed, width, height):
    """ Render a smooth, mid-exposure scene: blurred noise mapped affinely into [40, 215].

    The mapping centers the field on 127.5, so no pixel is saturated or dark-clipped.

    Arguments:
        seed (int): random seed
        width (int): width (>= 16)
        height (int): height (>= 16)

    Returns:
        LuminanceImage: scene
    """
    _check_size(width, height)

    field = _rng(seed, SCENE_STREAM).standard_normal((height, width))
    field = gaussian_filter(field, sigma=max(width, height) / 32.0, mode='wrap')
    field -= field.mean()

    low, high = SCENE_RANGE
    center, half_range = (low + high) / 2, (high - low) / 2
    peak = np.abs(field).max()

    if peak > 0:
        field *= half_range / peak

    return LuminanceImage(np.clip(center + field, low, high))


def capture(scene, camera, shot_seed):
    """ Simulate a capture of a scene.

    Arguments:
        scene (LuminanceImage): scene, same size as the camera pattern
        camera (SyntheticCamera): camera
        shot_seed (int): seed of the read noise

    Returns:
        LuminanceImage: captured image
    """
    if scene.shape != camera.pattern.shape:
        raise DimensionMismatchError("dimension mismatch: scene {}x{} vs camera {}x{}".format(
            scene.width, scene.height, camera.width, camera.height))

    pixels = scene.pixels * (1 + camera.pattern)

    if camera.read_noise_sigma > 0:
        pixels = pixels + camera.read_noise_sigma * _rng(shot_seed, SHOT_STREAM).standard_normal(pixels.shape)

    return LuminanceImage(np.clip(pixels, 0, MAX_INTENSITY))


def degrade(image, sigma, seed):
    """ Add Gaussian noise to an image (proxy for recompression and processing damage).

    Arguments:
        image (LuminanceImage): input image
        sigma (float): noise standard deviation
        seed (int): random seed

    Returns:
        LuminanceImage: degraded image
    """
    if sigma < 0:
        raise ParameterRangeError("Noise sigma must be non-negative (got {})".format(sigma))

    noise = sigma * _rng(seed, DEGRADE_STREAM).standard_normal(image.shape)
    return LuminanceImage(np.clip(image.pixels + noise, 0, MAX_INTENSITY))


def make_camera(seed, width, height, strength=DEFAULT_STRENGTH, read_noise_sigma=DEFAULT_SIGMA):
    """ Build a synthetic camera with a freshly drawn pattern.

    Arguments:
        seed (int): pattern seed
        width (int): sensor width
        height (int): sensor height
        strength (float): pattern strength (default: 0.02; 0 gives the identity camera)
        read_noise_sigma (float): read noise (default: 2)

    Returns:
        SyntheticCamera: camera
    """
    if strength == 0:
        _check_size(width, height)
        pattern = np.zeros((height, width))
    else:
        pattern = gen_pattern(seed, width, height, strength)

    return SyntheticCamera(pattern, strength, read_noise_sigma, seed)


def derive_seed(*keys):
    """ Derive an integer seed from a tuple of integers.

    Arguments:
        *keys (int): seed components

    Returns:
        int: derived seed
    """
    return int(np.random.SeedSequence([int(k) for k in keys]).generate_state(1)[0])


def capture_series(camera, count, series_seed):
    """ Capture a series of distinct scenes.

    Scene i and its read noise are seeded from (series_seed, i), so disjoint series seeds
    give disjoint scene sets.

    Arguments:
        camera (SyntheticCamera): camera
        count (int): number of captures
        series_seed (int): series seed

    Returns:
        list: captured LuminanceImage frames
    """
    frames = []
    for i in range(count):
        scene = gen_scene(derive_seed(series_seed, i, SCENE_STREAM), camera.width, camera.height)
        frames.append(capture(scene, camera, derive_seed(series_seed, i, SHOT_STREAM)))
    return frames


def write_fixture(out_dir, seed, count, width, height, strength=DEFAULT_STRENGTH, sigma=DEFAULT_SIGMA):
    """ Write a synthetic capture set: PGM images, the ground-truth pattern and a JSON manifest.

    The manifest holds {seed, strength, sigma, count, width, height, pattern_file, images}.
    The pattern is stored in the fingerprint file format.

    Arguments:
        out_dir (str): output directory (created if missing)
        seed (int): camera and series seed
        count (int): number of images (>= 1)
        width (int): image width
        height (int): image height
        strength (float): pattern strength (default: 0.02)
        sigma (float): read noise (default: 2)

    Returns:
        dict: manifest
    """
    if count < 1:
        raise ParameterRangeError("Image count must be at least 1 (got {})".format(count))

    camera = make_camera(seed, width, height, strength, sigma)

    if not os.path.isdir(out_dir):
        os.makedirs(out_dir)

    images = []
    for i, frame in enumerate(capture_series(camera, count, seed)):
        name = 'capture_{:04d}.pgm'.format(i)
        save_image(frame, os.path.join(out_dir, name))
        images.append(name)

    pattern_file = 'pattern.prnufp'
    write_fingerprint(CameraFingerprint(camera.pattern, count, label='synthetic-{}'.format(seed)),
                      os.path.join(out_dir, pattern_file))

    manifest = {'seed': seed, 'strength': strength, 'sigma': sigma, 'count': count,
                'width': width, 'height': height, 'pattern_file': pattern_file, 'images': images}

    with open(os.path.join(out_dir, 'manifest.json'), 'w') as stream:
        json.dump(manifest, stream, indent=2, sort_keys=True)

    logger.info("Wrote %d synthetic captures to %s", count, out_dir)

    return manifest
