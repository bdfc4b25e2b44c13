""" This module implements the multi-level 2-D discrete wavelet transform used by the denoiser.

The transform uses periodic extension ('periodization'), which makes it orthonormal and
guarantees perfect reconstruction for sizes that are multiples of 2^levels.

"""
import warnings

import numpy as np
import pywt

from ..config import Parameter, get_parameter
from ..errors import ImageTooSmallError, ParameterRangeError

MODE = 'periodization'


class WaveletPyramid(object):
    """ Multi-level wavelet decomposition of a 2-D signal.

    Coefficients follow the PyWavelets layout: [approximation, (H, V, D) coarsest level, ...,
    (H, V, D) finest level].
    """

    def __init__(self, coeffs, shape, wavelet):
        self.coeffs = coeffs
        self.shape = shape
        self.wavelet = wavelet

    @property
    def levels(self):
        return len(self.coeffs) - 1

    @property
    def approximation(self):
        return self.coeffs[0]

    @property
    def details(self):
        return self.coeffs[1:]

    def energy(self):
        """ Sum of squared coefficients over all subbands.

        Returns:
            float: energy
        """
        total = float(np.sum(self.coeffs[0] ** 2))
        for level in self.coeffs[1:]:
            total += sum(float(np.sum(band ** 2)) for band in level)
        return total

    def with_details(self, details):
        """ Build a pyramid sharing this approximation band but with new detail bands.

        Arguments:
            details (list): (H, V, D) tuples, coarsest level first

        Returns:
            WaveletPyramid: new pyramid
        """
        return WaveletPyramid([self.coeffs[0]] + list(details), self.shape, self.wavelet)


def _as_matrix(signal):
    return np.asarray(getattr(signal, 'pixels', signal), dtype=np.float64)


def dwt2(signal, levels=None, wavelet=None):
    """ Multi-level 2-D discrete wavelet decomposition.

    Arguments:
        signal (LuminanceImage or numpy.ndarray): 2-D input
        levels (int): decomposition depth (default: 4)
        wavelet (str): wavelet name (default: 'db8')

    Returns:
        WaveletPyramid: subband pyramid
    """
    levels = get_parameter(Parameter.LEVELS, levels)
    wavelet = get_parameter(Parameter.WAVELET, wavelet)
    values = _as_matrix(signal)

    if levels < 1:
        raise ParameterRangeError("Wavelet depth must be at least 1 (got {})".format(levels))

    if min(values.shape) < 2 ** levels:
        raise ImageTooSmallError("Image too small: {}x{} cannot be decomposed into {} levels".format(
            values.shape[1], values.shape[0], levels))

    with warnings.catch_warnings():
        # depths beyond the filter-length bound are valid under periodization
        warnings.simplefilter('ignore', UserWarning)
        coeffs = pywt.wavedec2(values, wavelet, mode=MODE, level=levels)

    return WaveletPyramid(coeffs, values.shape, wavelet)


def idwt2(pyramid):
    """ Reconstruct a 2-D signal from its wavelet pyramid.

    Arguments:
        pyramid (WaveletPyramid): subband pyramid

    Returns:
        numpy.ndarray: reconstructed matrix, same shape as the decomposed input
    """
    values = pywt.waverec2(pyramid.coeffs, pyramid.wavelet, mode=MODE)
    height, width = pyramid.shape
    return values[:height, :width]
