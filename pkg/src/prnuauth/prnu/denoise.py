""" This module implements the wavelet-domain MAP denoiser and noise residual extraction.

For every detail coefficient the local signal variance is estimated as
max(0, local mean of squares - noise variance) over square windows of several sizes; the
smallest estimate wins and the coefficient is attenuated by var / (var + noise variance).
Approximation subbands pass through unchanged.

"""
import numpy as np
from scipy.ndimage import uniform_filter

from ..config import Parameter, get_parameter
from ..errors import ImageTooSmallError
from ..model.fingerprint import NoiseResidual
from ..model.image import LuminanceImage, MAX_INTENSITY
from .wavelet import dwt2, idwt2

MIN_SIZE = 16


def local_variance(coeffs, noise_var, window_sizes):
    """ Minimum local signal variance of a subband across window sizes.

    Arguments:
        coeffs (numpy.ndarray): subband coefficients
        noise_var (float): noise variance
        window_sizes (tuple): square window sizes

    Returns:
        numpy.ndarray: variance estimate, same shape as coeffs
    """
    energy = coeffs ** 2
    estimates = [np.maximum(uniform_filter(energy, size, mode='constant') - noise_var, 0)
                 for size in window_sizes]
    return np.min(estimates, axis=0)


def wiener_shrink(coeffs, noise_var, window_sizes):
    """ Attenuate a subband with the locally adaptive Wiener gain.

    Arguments:
        coeffs (numpy.ndarray): subband coefficients
        noise_var (float): noise variance
        window_sizes (tuple): square window sizes

    Returns:
        numpy.ndarray: denoised coefficients
    """
    variance = local_variance(coeffs, noise_var, window_sizes)
    return coeffs * variance / (variance + noise_var)


def _working_window(height, width, levels):
    block = 2 ** levels
    out_h = height - height % block
    out_w = width - width % block
    top = (height - out_h) // 2
    left = (width - out_w) // 2
    return slice(top, top + out_h), slice(left, left + out_w)


def denoise(image, noise_var=None, levels=None, window_sizes=None, wavelet=None):
    """ Denoise an image in the wavelet domain.

    The transform runs on the center crop whose sides are multiples of 2^levels; pixels
    outside that crop are returned unchanged (zero residual).

    Arguments:
        image (LuminanceImage): input image
        noise_var (float): noise variance on the 0-255 scale (default: 9)
        levels (int): wavelet depth (default: 4)
        window_sizes (tuple): variance estimation windows (default: (3, 5, 7, 9))
        wavelet (str): wavelet name (default: 'db8')

    Returns:
        LuminanceImage: denoised image
    """
    noise_var = get_parameter(Parameter.NOISE_VARIANCE, noise_var)
    levels = get_parameter(Parameter.LEVELS, levels)
    window_sizes = get_parameter(Parameter.WINDOW_SIZES, window_sizes)

    if image.width < MIN_SIZE or image.height < MIN_SIZE:
        raise ImageTooSmallError("Image too small: {}x{} (denoising needs at least {}x{})".format(
            image.width, image.height, MIN_SIZE, MIN_SIZE))

    rows, cols = _working_window(image.height, image.width, levels)

    pyramid = dwt2(image.pixels[rows, cols], levels, wavelet)
    details = [tuple(wiener_shrink(band, noise_var, window_sizes) for band in level)
               for level in pyramid.details]

    denoised = np.array(image.pixels)
    denoised[rows, cols] = idwt2(pyramid.with_details(details))

    return LuminanceImage(np.clip(denoised, 0, MAX_INTENSITY))


def residual(image, **kwargs):
    """ Noise residual W = image - denoise(image).

    Arguments:
        image (LuminanceImage): input image
        **kwargs: denoiser overrides (see denoise)

    Returns:
        NoiseResidual: residual, same shape as the image
    """
    return NoiseResidual(image.pixels - denoise(image, **kwargs).pixels)
