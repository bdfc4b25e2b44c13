""" This module defines the luminance image, the unit of all processing.

"""
import numpy as np


MAX_INTENSITY = 255.0


def _frozen(values):
    values = np.array(values, dtype=np.float64)
    values.setflags(write=False)
    return values


class LuminanceImage(object):
    """ A 2-D matrix of pixel intensities on the 0-255 scale (row-major, top-left origin). """

    def __init__(self, pixels):
        """
        Arguments:
            pixels (array-like): 2-D matrix of intensities, height x width
        """
        pixels = _frozen(pixels)

        if pixels.ndim != 2 or pixels.shape[0] < 1 or pixels.shape[1] < 1:
            raise ValueError("Luminance image must be a non-empty 2-D matrix (got shape {})".format(pixels.shape))

        if not np.all(np.isfinite(pixels)):
            raise ValueError("Luminance image contains non-finite values")

        if pixels.min() < 0 or pixels.max() > MAX_INTENSITY:
            raise ValueError("Luminance values must lie in [0, 255] (got [{}, {}])".format(pixels.min(), pixels.max()))

        self.pixels = pixels

    @property
    def width(self):
        return self.pixels.shape[1]

    @property
    def height(self):
        return self.pixels.shape[0]

    @property
    def shape(self):
        return self.pixels.shape

    def __eq__(self, other):
        return isinstance(other, LuminanceImage) and np.array_equal(self.pixels, other.pixels)

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return 'LuminanceImage({}x{})'.format(self.width, self.height)
