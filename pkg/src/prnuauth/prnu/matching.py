""" This module implements fingerprint matching with signed Peak-to-Correlation Energy (PCE).

The correlation peak is read at zero shift rather than searched over the plane, so the score
keeps the sign of the correlation: anti-correlated fingerprints give negative scores.

"""
import numpy as np
from scipy import fft

from ..config import Parameter, get_parameter
from ..errors import (DegenerateCorrelationError, DegenerateFingerprintError, DimensionMismatchError,
                      ParameterRangeError)


class PceReport(object):
    """ Result of scoring two fingerprints. """

    def __init__(self, pce, peak_correlation, exclusion_half_width, width, height):
        """
        Arguments:
            pce (float): signed PCE score
            peak_correlation (float): normalized circular cross-correlation at zero shift
            exclusion_half_width (int): half width of the excluded peak neighbourhood
            width (int): width of the correlation plane
            height (int): height of the correlation plane
        """
        self.pce = float(pce)
        self.peak_correlation = float(peak_correlation)
        self.exclusion_half_width = int(exclusion_half_width)
        self.width = int(width)
        self.height = int(height)

    def to_dict(self):
        return {'pce': self.pce,
                'peak_correlation': self.peak_correlation,
                'width': self.width,
                'height': self.height,
                'exclusion_half_width': self.exclusion_half_width}

    def __str__(self):
        return 'PCE: {:.6g} (correlation {:.6g}, {}x{})'.format(self.pce, self.peak_correlation,
                                                                 self.width, self.height)


class MatchDecision(object):
    """ Threshold decision on a PCE score. """

    def __init__(self, matched, pce, threshold):
        self.matched = bool(matched)
        self.pce = float(pce)
        self.threshold = float(threshold)

    def to_dict(self):
        return {'matched': self.matched, 'pce': self.pce, 'threshold': self.threshold}


def normalize_fp(fingerprint):
    """ Remove the global mean and scale to unit L2 norm.

    Arguments:
        fingerprint (CameraFingerprint): fingerprint

    Returns:
        CameraFingerprint: normalized fingerprint (same metadata)
    """
    values = fingerprint.values

    if not np.any(values):
        raise DegenerateFingerprintError("Degenerate fingerprint: all values are zero")

    centered = values - values.mean()
    norm = np.linalg.norm(centered)

    if norm == 0:
        raise DegenerateFingerprintError("Degenerate fingerprint: constant values")

    return fingerprint.copy(values=centered / norm)


def correlation_plane(fp_a, fp_b):
    """ Circular cross-correlation of two normalized fingerprints over all 2-D shifts.

    plane[dy, dx] = sum_{y, x} a[y, x] * b[(y + dy) mod h, (x + dx) mod w]

    Arguments:
        fp_a (CameraFingerprint): first fingerprint
        fp_b (CameraFingerprint): second fingerprint, same size

    Returns:
        numpy.ndarray: correlation plane, zero shift at index (0, 0)
    """
    if fp_a.shape != fp_b.shape:
        raise DimensionMismatchError("dimension mismatch: {}x{} vs {}x{}".format(
            fp_a.width, fp_a.height, fp_b.width, fp_b.height))

    a = normalize_fp(fp_a).values
    b = normalize_fp(fp_b).values

    return fft.ifft2(np.conj(fft.fft2(a)) * fft.fft2(b)).real


def exclusion_mask(height, width, half_width):
    """ Boolean mask of the (2 * half_width + 1)^2 window around zero shift, wrapping circularly.

    Arguments:
        height (int): plane height
        width (int): plane width
        half_width (int): window half width

    Returns:
        numpy.ndarray: mask, True inside the window
    """
    offsets = np.arange(-half_width, half_width + 1)
    mask = np.zeros((height, width), dtype=bool)
    mask[np.ix_(offsets % height, offsets % width)] = True
    return mask


def pce(fp_a, fp_b, exclusion_half_width=None):
    """ Signed Peak-to-Correlation Energy at zero shift.

    pce = sign(c) * c^2 / E, with c the correlation at zero shift and E the mean squared
    correlation outside the exclusion window.

    Arguments:
        fp_a (CameraFingerprint): first fingerprint
        fp_b (CameraFingerprint): second fingerprint, same size
        exclusion_half_width (int): half width of the exclusion window (default: 5)

    Returns:
        PceReport: score and diagnostics
    """
    half_width = int(get_parameter(Parameter.EXCLUSION_HALF_WIDTH, exclusion_half_width))
    height, width = fp_a.shape
    window = 2 * half_width + 1

    if half_width < 0 or window >= height or window >= width:
        raise ParameterRangeError("Exclusion window {0}x{0} must be smaller than the {1}x{2} plane".format(
            window, width, height))

    plane = correlation_plane(fp_a, fp_b)
    peak = plane[0, 0]
    energy = np.mean(plane[~exclusion_mask(height, width, half_width)] ** 2)

    if energy == 0:
        raise DegenerateCorrelationError("Degenerate correlation plane: no energy outside the peak window")

    return PceReport(np.sign(peak) * peak ** 2 / energy, peak, half_width, width, height)


def decide(report, threshold=None):
    """ Match decision: matched if and only if the PCE is strictly above the threshold.

    Arguments:
        report (PceReport or float): PCE report (or a bare PCE value)
        threshold (float): decision threshold (default: 50)

    Returns:
        MatchDecision: decision
    """
    threshold = get_parameter(Parameter.THRESHOLD, threshold)
    value = report.pce if isinstance(report, PceReport) else float(report)
    return MatchDecision(value > threshold, value, threshold)
