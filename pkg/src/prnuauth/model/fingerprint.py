""" This module defines noise residuals and camera fingerprints.

"""
import numpy as np

from .image import _frozen


def remove_row_column_means(values):
    """ Subtract the row means, then the column means, of a matrix.

    Arguments:
        values (numpy.ndarray): matrix

    Returns:
        numpy.ndarray: matrix with zero-mean rows and columns
    """
    values = values - values.mean(axis=1, keepdims=True)
    return values - values.mean(axis=0, keepdims=True)


class NoiseResidual(object):
    """ High-frequency residual of an image after denoising (carrier of the PRNU signal). """

    def __init__(self, values):
        """
        Arguments:
            values (array-like): 2-D residual matrix, same shape as the source image
        """
        values = _frozen(values)

        if values.ndim != 2:
            raise ValueError("Noise residual must be a 2-D matrix (got shape {})".format(values.shape))

        if not np.all(np.isfinite(values)):
            raise ValueError("Noise residual contains non-finite values")

        self.values = values

    @property
    def width(self):
        return self.values.shape[1]

    @property
    def height(self):
        return self.values.shape[0]

    @property
    def shape(self):
        return self.values.shape


class CameraFingerprint(object):
    """ Aggregated estimate of a sensor's PRNU pattern plus provenance metadata. """

    def __init__(self, values, image_count, postprocessed=False, label=''):
        """
        Arguments:
            values (array-like): 2-D fingerprint matrix
            image_count (int): number of images aggregated into the estimate
            postprocessed (bool): row/column zero-meaning already applied (default: False)
            label (str): free-text camera name (optional)
        """
        values = _frozen(values)

        if values.ndim != 2 or values.size == 0:
            raise ValueError("Fingerprint must be a non-empty 2-D matrix (got shape {})".format(values.shape))

        if not np.all(np.isfinite(values)):
            raise ValueError("Fingerprint contains non-finite values")

        if int(image_count) < 1:
            raise ValueError("Fingerprint image count must be at least 1 (got {})".format(image_count))

        self.values = values
        self.image_count = int(image_count)
        self.postprocessed = bool(postprocessed)
        self.label = label if label is not None else ''

    @property
    def width(self):
        return self.values.shape[1]

    @property
    def height(self):
        return self.values.shape[0]

    @property
    def shape(self):
        return self.values.shape

    def rms(self):
        """ Root mean square of the fingerprint values.

        Returns:
            float: RMS value
        """
        return float(np.sqrt(np.mean(self.values ** 2)))

    def copy(self, values=None, **kwargs):
        """ Create a copy, optionally replacing the values or any metadata field.

        Arguments:
            values (array-like): new values (optional)
            **kwargs: image_count, postprocessed or label overrides

        Returns:
            CameraFingerprint: new fingerprint
        """
        return CameraFingerprint(self.values if values is None else values,
                                 kwargs.get('image_count', self.image_count),
                                 kwargs.get('postprocessed', self.postprocessed),
                                 kwargs.get('label', self.label))

    def __repr__(self):
        return 'CameraFingerprint({}x{}, images={}, postprocessed={}, label={!r})'.format(
            self.width, self.height, self.image_count, self.postprocessed, self.label)
