""" This module implements batch scoring utilities: Monte-Carlo null calibration of the PCE
statistic and reference-by-probe match tables.

"""
import numpy as np
import pandas as pd

from ..config import Parameter, get_parameter
from ..imaging.geometry import reconcile
from ..model.fingerprint import CameraFingerprint
from .matching import pce, decide


def random_fingerprint(seed, width, height):
    """ Fingerprint of i.i.d. standard normal values (a camera unrelated to any other).

    Arguments:
        seed (int): random seed
        width (int): width
        height (int): height

    Returns:
        CameraFingerprint: random fingerprint
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    return CameraFingerprint(rng.standard_normal((height, width)), 1, label='random-{}'.format(seed))


def null_calibration(trials=200, width=256, height=256, seed=0, exclusion_half_width=None, threshold=None):
    """ Score independent random fingerprint pairs to sample the null distribution of the signed PCE.

    Arguments:
        trials (int): number of pairs (default: 200)
        width (int): fingerprint width (default: 256)
        height (int): fingerprint height (default: 256)
        seed (int): base seed; pair i uses seeds (seed + 2i, seed + 2i + 1)
        exclusion_half_width (int): PCE exclusion half width (default: 5)
        threshold (float): decision threshold (default: 50)

    Returns:
        pandas.DataFrame: one row per pair (pce, peak_correlation, matched)
    """
    threshold = get_parameter(Parameter.THRESHOLD, threshold)
    rows = []

    for i in range(trials):
        fp_a = random_fingerprint(seed + 2 * i, width, height)
        fp_b = random_fingerprint(seed + 2 * i + 1, width, height)
        report = pce(fp_a, fp_b, exclusion_half_width)
        rows.append((i, report.pce, report.peak_correlation, decide(report, threshold).matched))

    return pd.DataFrame(rows, columns=['trial', 'pce', 'peak_correlation', 'matched']).set_index('trial')


def summarize_null(sample, threshold=None):
    """ Summary statistics of a null calibration sample.

    Arguments:
        sample (pandas.DataFrame): output of null_calibration
        threshold (float): decision threshold (default: 50)

    Returns:
        pandas.Series: trials, mean, std, max_abs, below_threshold (count of |pce| < threshold), false_matches
    """
    threshold = get_parameter(Parameter.THRESHOLD, threshold)
    scores = sample['pce']
    return pd.Series({'trials': len(scores),
                      'mean': scores.mean(),
                      'std': scores.std(),
                      'max_abs': scores.abs().max(),
                      'below_threshold': int((scores.abs() < threshold).sum()),
                      'false_matches': int(sample['matched'].sum())})


def match_table(references, probes, threshold=None, exclusion_half_width=None):
    """ Score every probe fingerprint against every reference fingerprint.

    Fingerprints of different sizes are center-cropped to their common size.

    Arguments:
        references (dict): reference label -> CameraFingerprint
        probes (dict): probe label -> CameraFingerprint
        threshold (float): decision threshold (default: 50)
        exclusion_half_width (int): PCE exclusion half width (default: 5)

    Returns:
        pandas.DataFrame: one row per (reference, probe) pair with pce and matched columns
    """
    rows = []

    for ref_id, reference in references.items():
        for probe_id, probe in probes.items():
            fp_a, fp_b = reconcile(reference, probe)
            report = pce(fp_a, fp_b, exclusion_half_width)
            decision = decide(report, threshold)
            rows.append((ref_id, probe_id, report.pce, report.peak_correlation, decision.matched))

    return pd.DataFrame(rows, columns=['reference', 'probe', 'pce', 'peak_correlation', 'matched'])
