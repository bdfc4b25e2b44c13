""" This module implements resizing and cropping of luminance images.

Bilinear sampling uses the align-corners convention (corner pixels of the source and target
grids coincide) with edge clamping.

"""
import numpy as np
from scipy.ndimage import map_coordinates

from ..errors import DimensionMismatchError, ParameterRangeError
from ..model.fingerprint import remove_row_column_means
from ..model.image import LuminanceImage


def _axis_coordinates(n_in, n_out):
    if n_out == 1:
        return np.zeros(1)
    return np.arange(n_out) * ((n_in - 1) / float(n_out - 1))


def resize_bilinear(image, out_w, out_h):
    """ Resize an image by bilinear interpolation.

    Arguments:
        image (LuminanceImage): source image
        out_w (int): target width
        out_h (int): target height

    Returns:
        LuminanceImage: resized image, values within [min(image), max(image)]
    """

    if out_w < 1 or out_h < 1:
        raise ParameterRangeError("Target size must be at least 1x1 (got {}x{})".format(out_w, out_h))

    if (out_w, out_h) == (image.width, image.height):
        return image

    rows = _axis_coordinates(image.height, out_h)
    cols = _axis_coordinates(image.width, out_w)
    grid = np.meshgrid(rows, cols, indexing='ij')

    resized = map_coordinates(image.pixels, grid, order=1, mode='nearest')

    # rounding in the interpolation weights must not leave the source range
    resized = np.clip(resized, image.pixels.min(), image.pixels.max())

    return LuminanceImage(resized)


def center_crop(image, out_w, out_h):
    """ Extract the centered sub-window of an image.

    The window offset is floor((size - out) / 2) on each axis.

    Arguments:
        image (LuminanceImage): source image
        out_w (int): target width
        out_h (int): target height

    Returns:
        LuminanceImage: cropped image
    """

    if out_w < 1 or out_h < 1:
        raise ParameterRangeError("Target size must be at least 1x1 (got {}x{})".format(out_w, out_h))

    if out_w > image.width or out_h > image.height:
        raise DimensionMismatchError("Cannot crop {}x{} image to larger size {}x{}".format(
            image.width, image.height, out_w, out_h))

    top = (image.height - out_h) // 2
    left = (image.width - out_w) // 2

    return LuminanceImage(image.pixels[top:top + out_h, left:left + out_w])


def crop_matrix(values, out_w, out_h):
    """ Center-crop a plain 2-D matrix (same offsets as center_crop).

    Arguments:
        values (numpy.ndarray): matrix
        out_w (int): target width
        out_h (int): target height

    Returns:
        numpy.ndarray: cropped view
    """
    height, width = values.shape

    if out_w > width or out_h > height:
        raise DimensionMismatchError("Cannot crop {}x{} matrix to larger size {}x{}".format(
            width, height, out_w, out_h))

    top = (height - out_h) // 2
    left = (width - out_w) // 2
    return values[top:top + out_h, left:left + out_w]


def fit_to(image, out_w, out_h):
    """ Bring an image to a target resolution: center-crop to the target aspect ratio, then resize.

    Arguments:
        image (LuminanceImage): source image
        out_w (int): target width
        out_h (int): target height

    Returns:
        LuminanceImage: image of size out_w x out_h
    """

    if out_w < 1 or out_h < 1:
        raise ParameterRangeError("Target size must be at least 1x1 (got {}x{})".format(out_w, out_h))

    crop_w, crop_h = image.width, image.height

    if image.width * out_h > image.height * out_w:
        crop_w = max(1, int(round(image.height * out_w / float(out_h))))
    elif image.width * out_h < image.height * out_w:
        crop_h = max(1, int(round(image.width * out_h / float(out_w))))

    return resize_bilinear(center_crop(image, crop_w, crop_h), out_w, out_h)


def _crop_fingerprint(fingerprint, width, height):
    if fingerprint.shape == (height, width):
        return fingerprint

    values = crop_matrix(fingerprint.values, width, height)
    if fingerprint.postprocessed:
        values = remove_row_column_means(values)
    return fingerprint.copy(values=values)


def reconcile(fp_a, fp_b):
    """ Center-crop two fingerprints to their common size.

    Fingerprints are pixel-aligned sensor patterns, so they are cropped rather than resampled.
    Cropped post-processed fingerprints get their row and column means removed again.

    Arguments:
        fp_a (CameraFingerprint): first fingerprint
        fp_b (CameraFingerprint): second fingerprint

    Returns:
        tuple: both fingerprints at the common size
    """
    width = min(fp_a.width, fp_b.width)
    height = min(fp_a.height, fp_b.height)
    return _crop_fingerprint(fp_a, width, height), _crop_fingerprint(fp_b, width, height)
