""" This module implements camera fingerprint estimation from a set of images.

The estimate is the maximum-likelihood ratio

    K = sum_i (W_i * I_i) / sum_i (I_i * I_i)

computed elementwise, with W_i the noise residual of image I_i. Saturated pixels are excluded
per image and pixels without any valid sample are set to zero. Residuals may be computed in
parallel but are always reduced in input order, so results do not depend on the number of
processes.

"""
import logging
import warnings
from multiprocessing import Pool

import numpy as np

from ..config import Parameter, get_parameter
from ..errors import DegenerateFingerprintError, DimensionMismatchError, InsufficientImagesError, InvalidStateError
from ..imaging.geometry import resize_bilinear
from ..model.fingerprint import CameraFingerprint, remove_row_column_means
from .denoise import residual

logger = logging.getLogger(__name__)

WIPED_ENERGY_RATIO = 0.01


def _check_uniform(images):
    if not images:
        raise InsufficientImagesError("At least one image is required")

    height, width = images[0].shape
    for i, image in enumerate(images):
        if image.shape != (height, width):
            raise DimensionMismatchError("dimension mismatch: image {} is {}x{}, expected {}x{}".format(
                i, image.width, image.height, width, height))


def _denoiser_settings(**overrides):
    return {'noise_var': get_parameter(Parameter.NOISE_VARIANCE, overrides.get('noise_var')),
            'levels': get_parameter(Parameter.LEVELS, overrides.get('levels')),
            'window_sizes': get_parameter(Parameter.WINDOW_SIZES, overrides.get('window_sizes')),
            'wavelet': get_parameter(Parameter.WAVELET, overrides.get('wavelet'))}


def weighted_terms(image, saturation=None, **kwargs):
    """ Numerator and denominator contributions of a single image.

    Arguments:
        image (LuminanceImage): input image
        saturation (float): intensity at or above which pixels are excluded (default: 250)
        **kwargs: denoiser overrides (see denoise)

    Returns:
        tuple: (W * I, I * I) with saturated pixels zeroed
    """
    saturation = get_parameter(Parameter.SATURATION, saturation)
    pixels = image.pixels
    valid = pixels < saturation
    noise = residual(image, **kwargs).values

    numerator = np.where(valid, noise * pixels, 0.0)
    denominator = np.where(valid, pixels * pixels, 0.0)
    return numerator, denominator


def _weighted_terms_task(args):
    image, saturation, settings = args
    return weighted_terms(image, saturation, **settings)


def accumulate(images, processes=None, saturation=None, label='', **kwargs):
    """ Maximum-likelihood fingerprint estimate from a set of same-size images.

    Parameters are resolved here, so worker processes use the caller's settings.

    Arguments:
        images (list): LuminanceImage inputs
        processes (int): worker processes for residual extraction (default: 1)
        saturation (float): saturation threshold (default: 250)
        label (str): camera label (optional)
        **kwargs: denoiser overrides (see denoise)

    Returns:
        CameraFingerprint: fingerprint (not post-processed)
    """
    images = list(images)
    _check_uniform(images)
    processes = get_parameter(Parameter.PROCESSES, processes)
    saturation = get_parameter(Parameter.SATURATION, saturation)
    settings = _denoiser_settings(**kwargs)
    tasks = [(image, saturation, settings) for image in images]

    if processes > 1 and len(images) > 1:
        pool = Pool(min(processes, len(images)))
        try:
            terms = pool.map(_weighted_terms_task, tasks)
        finally:
            pool.close()
            pool.join()
    else:
        terms = map(_weighted_terms_task, tasks)

    numerator = np.zeros(images[0].shape)
    denominator = np.zeros(images[0].shape)

    for num, den in terms:
        numerator += num
        denominator += den

    valid = denominator > 0

    if not np.any(valid):
        raise DegenerateFingerprintError("Degenerate input: every pixel is saturated in every image")

    values = np.zeros(numerator.shape)
    values[valid] = numerator[valid] / denominator[valid]

    logger.debug("Accumulated %d images of %dx%d (%d pixels without samples)",
                 len(images), images[0].width, images[0].height, int(np.sum(~valid)))

    return CameraFingerprint(values, len(images), postprocessed=False, label=label)


def postprocess(fingerprint):
    """ Remove row and column means (rows first, then columns).

    Arguments:
        fingerprint (CameraFingerprint): fingerprint not yet post-processed

    Returns:
        CameraFingerprint: zero-mean fingerprint with the post-processed flag set
    """
    if fingerprint.postprocessed:
        raise InvalidStateError("Fingerprint is already post-processed")

    result = fingerprint.copy(values=remove_row_column_means(fingerprint.values), postprocessed=True)

    before = fingerprint.rms()
    if before > 0 and result.rms() < WIPED_ENERGY_RATIO * before:
        warnings.warn("Post-processing removed {:.1%} of the fingerprint energy (row/column patterns only)".format(
            1 - (result.rms() / before) ** 2), RuntimeWarning)

    return result


def fingerprint_from_frames(frames, target_w, target_h, processes=None, label=''):
    """ Fingerprint from frames of possibly different resolutions.

    Every frame is resized to the target resolution before estimation and post-processing.

    Arguments:
        frames (list): LuminanceImage frames
        target_w (int): target width
        target_h (int): target height
        processes (int): worker processes (default: 1)
        label (str): camera label (optional)

    Returns:
        CameraFingerprint: post-processed fingerprint
    """
    frames = list(frames)

    if not frames:
        raise InsufficientImagesError("At least one frame is required")

    resized = [resize_bilinear(frame, target_w, target_h) for frame in frames]
    return postprocess(accumulate(resized, processes=processes, label=label))


def is_degenerate(fingerprint):
    """ Check whether a fingerprint carries no signal at all.

    Arguments:
        fingerprint (CameraFingerprint): fingerprint

    Returns:
        bool: True if every value is zero
    """
    return not np.any(fingerprint.values)
