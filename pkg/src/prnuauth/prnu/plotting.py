""" This module implements some basic plotting utilities for fingerprints and PCE scores.

"""
import matplotlib.pyplot as plt
import numpy as np

from ..config import Parameter, get_parameter
from .matching import correlation_plane


def _finish(ax, filename):
    if filename:
        ax.figure.savefig(filename)
    return ax


def plot_fingerprint(fingerprint, ax=None, filename=None, cmap='gray', clip=3.0):
    """ Display a fingerprint as an image.

    Arguments:
        fingerprint (CameraFingerprint): fingerprint
        ax (matplotlib.Axes): axes to draw on (optional)
        filename (str): filename to save image (optional)
        cmap (str): colormap (default: 'gray')
        clip (float): clip the display range at this many standard deviations (default: 3)

    Returns:
        matplotlib.Axes: axes object
    """
    if ax is None:
        _, ax = plt.subplots()

    limit = clip * fingerprint.values.std() or 1.0
    ax.imshow(fingerprint.values, cmap=cmap, vmin=-limit, vmax=limit)
    ax.set_title(fingerprint.label or 'fingerprint')
    ax.set_axis_off()

    return _finish(ax, filename)


def plot_correlation_plane(fp_a, fp_b, ax=None, filename=None, exclusion_half_width=None, cmap='viridis'):
    """ Display the circular cross-correlation plane with zero shift at the center.

    Arguments:
        fp_a (CameraFingerprint): first fingerprint
        fp_b (CameraFingerprint): second fingerprint
        ax (matplotlib.Axes): axes to draw on (optional)
        filename (str): filename to save image (optional)
        exclusion_half_width (int): outline the exclusion window of this half width (default: 5)
        cmap (str): colormap (default: 'viridis')

    Returns:
        matplotlib.Axes: axes object
    """
    half_width = get_parameter(Parameter.EXCLUSION_HALF_WIDTH, exclusion_half_width)

    if ax is None:
        _, ax = plt.subplots()

    plane = np.fft.fftshift(correlation_plane(fp_a, fp_b))
    height, width = plane.shape
    center_y, center_x = height // 2, width // 2

    ax.imshow(plane, cmap=cmap)
    ax.add_patch(plt.Rectangle((center_x - half_width - 0.5, center_y - half_width - 0.5),
                               2 * half_width + 1, 2 * half_width + 1, fill=False, edgecolor='r'))
    ax.set_xlabel('shift x')
    ax.set_ylabel('shift y')

    return _finish(ax, filename)


def plot_pce_distribution(sample, threshold=None, ax=None, filename=None, bins=40):
    """ Histogram of signed PCE scores (e.g. a null calibration sample) with the decision threshold.

    Arguments:
        sample (pandas.DataFrame): table with a 'pce' column
        threshold (float): decision threshold (default: 50)
        ax (matplotlib.Axes): axes to draw on (optional)
        filename (str): filename to save image (optional)
        bins (int): number of histogram bins (default: 40)

    Returns:
        matplotlib.Axes: axes object
    """
    threshold = get_parameter(Parameter.THRESHOLD, threshold)

    if ax is None:
        _, ax = plt.subplots()

    ax.hist(sample['pce'], bins=bins, color='b', alpha=0.5)
    ax.axvline(threshold, color='r', linestyle='--')
    ax.set_xlabel('signed PCE')
    ax.set_ylabel('count')

    return _finish(ax, filename)
