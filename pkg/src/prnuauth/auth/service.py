""" This module implements the two-factor authentication service.

Registration computes a customer's camera fingerprint and stores it. Verification first looks
at the (externally supplied) face verdict; only if the face passed is a fresh fingerprint
computed from the probe frames and matched against the enrolled one. A customer is
authenticated only when both checks pass.

"""
import logging
import warnings
from collections import Counter
from datetime import datetime, timezone

from ..config import Parameter, get_parameter
from ..errors import (DegenerateCorrelationError, DegenerateFingerprintError, DimensionMismatchError,
                      DuplicateEnrollmentError, InsufficientImagesError, ParameterRangeError, UnknownCustomerError)
from ..imaging.geometry import fit_to
from ..io.fpfile import dump_fingerprint, parse_fingerprint
from ..prnu.extraction import fingerprint_from_frames, is_degenerate
from ..prnu.matching import pce, decide

logger = logging.getLogger(__name__)

MAX_CUSTOMER_ID_BYTES = 128


def utc_now():
    return datetime.now(timezone.utc)


def format_timestamp(moment):
    """ ISO-8601 UTC representation of a datetime. """
    return moment.astimezone(timezone.utc).isoformat()


def parse_timestamp(text):
    return datetime.fromisoformat(text)


def check_customer_id(customer_id):
    """ Validate a customer key: a non-empty string of at most 128 UTF-8 bytes.

    Arguments:
        customer_id (str): customer key
    """
    if not isinstance(customer_id, str) or not customer_id:
        raise ParameterRangeError("Customer id must be a non-empty string")

    if len(customer_id.encode('utf-8')) > MAX_CUSTOMER_ID_BYTES:
        raise ParameterRangeError("Customer id exceeds {} bytes".format(MAX_CUSTOMER_ID_BYTES))


class EnrollmentRecord(object):
    """ Binding between a customer and the fingerprint of their camera. """

    def __init__(self, customer_id, fingerprint, enrolled_at, camera_label, image_count):
        """
        Arguments:
            customer_id (str): customer key
            fingerprint (CameraFingerprint): post-processed fingerprint
            enrolled_at (datetime): UTC enrollment time
            camera_label (str): free-text camera name
            image_count (int): number of enrollment images
        """
        if not fingerprint.postprocessed:
            raise ValueError("Enrollment fingerprints must be post-processed")

        self.customer_id = customer_id
        self.fingerprint = fingerprint
        self.enrolled_at = enrolled_at
        self.camera_label = camera_label
        self.image_count = int(image_count)

    def to_dict(self):
        return {'customer_id': self.customer_id,
                'camera_label': self.camera_label,
                'image_count': self.image_count,
                'enrolled_at': format_timestamp(self.enrolled_at),
                'width': self.fingerprint.width,
                'height': self.fingerprint.height}


class AuthDecision(object):
    """ Outcome of a verification attempt. """

    def __init__(self, customer_id, face_ok, camera_ok, pce, decided_at):
        """
        Arguments:
            customer_id (str): customer key
            face_ok (bool): external face-recognition verdict
            camera_ok (bool): camera match verdict
            pce (float): PCE score (None if the camera check was skipped)
            decided_at (datetime): UTC decision time
        """
        self.customer_id = customer_id
        self.face_ok = bool(face_ok)
        self.camera_ok = bool(camera_ok)
        self.pce = pce
        self.decided_at = decided_at

    @property
    def authenticated(self):
        return self.face_ok and self.camera_ok

    @property
    def camera_checked(self):
        return self.pce is not None

    def to_dict(self):
        return {'customer_id': self.customer_id,
                'authenticated': self.authenticated,
                'face_ok': self.face_ok,
                'camera_ok': self.camera_ok,
                'pce': self.pce,
                'decided_at': format_timestamp(self.decided_at)}


class AuthService(object):
    """ Registration and verification on top of a fingerprint store. """

    def __init__(self, store, threshold=None, exclusion_half_width=None, min_images=None, processes=None,
                 clock=None):
        """
        Arguments:
            store (FingerprintStore): fingerprint store
            threshold (float): PCE decision threshold (default: 50)
            exclusion_half_width (int): PCE exclusion half width (default: 5)
            min_images (int): minimum enrollment set size (default: 15)
            processes (int): worker processes for residual extraction (default: 1)
            clock (callable): returns the current UTC datetime (default: system clock)
        """
        self.store = store
        self.threshold = get_parameter(Parameter.THRESHOLD, threshold)
        self.exclusion_half_width = get_parameter(Parameter.EXCLUSION_HALF_WIDTH, exclusion_half_width)
        self.min_images = get_parameter(Parameter.MIN_ENROLLMENT, min_images)
        self.processes = processes
        self.clock = clock if clock is not None else utc_now
        self.counters = Counter()

    def _build_record(self, customer_id, images, camera_label):
        images = list(images)

        if len(images) < self.min_images:
            raise InsufficientImagesError("insufficient enrollment set: {} images (at least {} required)".format(
                len(images), self.min_images))

        recommended = get_parameter(Parameter.RECOMMENDED_ENROLLMENT)
        if len(images) < recommended:
            warnings.warn("Enrollment uses {} images; at least {} are recommended".format(len(images), recommended),
                          UserWarning)

        height, width = images[0].shape
        for image in images:
            if image.shape != (height, width):
                raise DimensionMismatchError("dimension mismatch: enrollment images must share one size "
                                             "({}x{} vs {}x{})".format(image.width, image.height, width, height))

        fingerprint = fingerprint_from_frames(images, width, height, processes=self.processes, label=camera_label)
        self.counters['fingerprints_computed'] += 1

        if is_degenerate(fingerprint):
            raise DegenerateFingerprintError("Degenerate fingerprint: enrollment images carry no noise residual")

        # the stored file is the source of truth, so hand back exactly what a reload yields
        fingerprint = parse_fingerprint(dump_fingerprint(fingerprint), camera_label)

        return EnrollmentRecord(customer_id, fingerprint, self.clock(), camera_label, len(images))

    def _commit(self, record):
        self.store.put(record.customer_id, record.fingerprint, format_timestamp(record.enrolled_at),
                       record.camera_label, record.image_count)

    def enroll(self, customer_id, images, camera_label=''):
        """ Registration: compute and store the fingerprint of a new customer's camera.

        Arguments:
            customer_id (str): customer key
            images (list): at least 15 same-size LuminanceImage captures
            camera_label (str): free-text camera name

        Returns:
            EnrollmentRecord: stored record
        """
        check_customer_id(customer_id)

        with self.store.exclusive():
            if customer_id in self.store:
                raise DuplicateEnrollmentError("already enrolled: '{}' (use re-enrollment)".format(customer_id))

            record = self._build_record(customer_id, images, camera_label)
            self._commit(record)

        logger.info("Enrolled '%s' with %d images", customer_id, record.image_count)
        return record

    def reenroll(self, customer_id, images, camera_label=''):
        """ Replace the stored fingerprint of an enrolled customer (e.g. after a camera change).

        Arguments:
            customer_id (str): customer key
            images (list): at least 15 same-size LuminanceImage captures
            camera_label (str): free-text camera name

        Returns:
            EnrollmentRecord: new record
        """
        check_customer_id(customer_id)

        with self.store.exclusive():
            if customer_id not in self.store:
                raise UnknownCustomerError("unknown customer: '{}'".format(customer_id))

            record = self._build_record(customer_id, images, camera_label)
            self._commit(record)

        logger.info("Re-enrolled '%s' with %d images", customer_id, record.image_count)
        return record

    def lookup(self, customer_id):
        """ Load the enrollment record of a customer.

        Arguments:
            customer_id (str): customer key

        Returns:
            EnrollmentRecord: record
        """
        entry, fingerprint = self.store.get(customer_id)
        return EnrollmentRecord(customer_id, fingerprint, parse_timestamp(entry['enrolled_at']),
                                entry['camera_label'], entry['image_count'])

    def verify(self, customer_id, face_ok, probe_frames):
        """ Verification: combine the face verdict with a camera match of the probe frames.

        When the face check failed, no fingerprint is computed and the camera check is
        reported as skipped (pce None, camera_ok False).

        Arguments:
            customer_id (str): customer key
            face_ok (bool): external face-recognition verdict
            probe_frames (list): LuminanceImage frames captured for this attempt

        Returns:
            AuthDecision: decision
        """
        record = self.lookup(customer_id)
        probe_frames = list(probe_frames)

        if not probe_frames:
            raise InsufficientImagesError("empty probe set")

        self.counters['verifications'] += 1

        if not face_ok:
            logger.info("Face check failed for '%s', camera check skipped", customer_id)
            return AuthDecision(customer_id, False, False, None, self.clock())

        enrolled = record.fingerprint
        width, height = enrolled.width, enrolled.height

        frames = [fit_to(frame, width, height) for frame in probe_frames]

        try:
            probe = fingerprint_from_frames(frames, width, height, processes=self.processes)
            self.counters['fingerprints_computed'] += 1
            report = pce(enrolled, probe, self.exclusion_half_width)
            score = report.pce
            camera_ok = decide(report, self.threshold).matched
        except (DegenerateFingerprintError, DegenerateCorrelationError) as e:
            # frames without any sensor noise cannot come from the enrolled camera
            logger.warning("Probe fingerprint for '%s' is degenerate: %s", customer_id, e)
            score, camera_ok = 0.0, False

        logger.info("Verified '%s': pce=%.4g camera_ok=%s", customer_id, score, camera_ok)
        return AuthDecision(customer_id, True, camera_ok, score, self.clock())

    def revoke(self, customer_id):
        """ Remove a customer's enrollment.

        Arguments:
            customer_id (str): customer key

        Returns:
            dict: confirmation {customer_id, revoked_at}
        """
        with self.store.exclusive():
            self.store.delete(customer_id)

        return {'customer_id': customer_id, 'revoked_at': format_timestamp(self.clock())}
