"""
Unit testing module for the fingerprint store and the authentication service.

"""
import errno
import fcntl
import json
import os
import shutil
import tempfile
import unittest
from datetime import datetime, timezone
from unittest import mock

import numpy as np

from prnuauth.auth.facade import handle_json, handle_request
from prnuauth.auth.service import AuthService, check_customer_id
from prnuauth.auth.store import READ_ATTEMPTS, FingerprintStore, fingerprint_filename
from prnuauth.errors import (DimensionMismatchError, DuplicateEnrollmentError, ErrorCode, InsufficientImagesError,
                             ParameterRangeError, UnknownCustomerError)
from prnuauth.io.fpfile import read_fingerprint
from prnuauth.io.netpbm import save_image
from prnuauth.model.fingerprint import CameraFingerprint
from prnuauth.model.image import LuminanceImage
from prnuauth.synth.camera import capture_series, make_camera

SIZE = 128
ENROLLMENT_IMAGES = 20
PROBE_IMAGES = 5
NOW = datetime(2024, 5, 1, 12, 0, tzinfo=timezone.utc)
STAMP = '2024-05-01T12:00:00+00:00'


def fixed_clock():
    return NOW


class CameraFixture(unittest.TestCase):
    """ Shared captures of two cameras and a fresh store per test. """

    @classmethod
    def setUpClass(cls):
        camera_a = make_camera(21, SIZE, SIZE)
        camera_b = make_camera(22, SIZE, SIZE)
        cls.enroll_a = capture_series(camera_a, ENROLLMENT_IMAGES, 100)
        cls.enroll_b = capture_series(camera_b, ENROLLMENT_IMAGES, 101)
        cls.probe_a = capture_series(camera_a, PROBE_IMAGES, 200)
        cls.probe_b = capture_series(camera_b, PROBE_IMAGES, 201)

    def setUp(self):
        self.tmp_dir = tempfile.mkdtemp()
        self.store = FingerprintStore(os.path.join(self.tmp_dir, 'store'))
        self.service = AuthService(self.store, clock=fixed_clock)

    def tearDown(self):
        shutil.rmtree(self.tmp_dir)


class StoreTest(unittest.TestCase):
    """ Test the directory fingerprint store. """

    def setUp(self):
        self.tmp_dir = tempfile.mkdtemp()
        self.store = FingerprintStore(self.tmp_dir)

    def tearDown(self):
        shutil.rmtree(self.tmp_dir)

    def testRun(self):
        rng = np.random.Generator(np.random.PCG64(1))
        fingerprint = CameraFingerprint(rng.standard_normal((8, 8)).astype(np.float32), 20, postprocessed=True)

        with self.store.exclusive():
            self.store.put('alice', fingerprint, '2024-05-01T12:00:00+00:00', 'phone', 20)

        entry, loaded = self.store.get('alice')
        self.assertTrue(np.array_equal(loaded.values, fingerprint.values))
        self.assertEqual(entry['camera_label'], 'phone')
        self.assertEqual(loaded.label, 'phone')
        self.assertListEqual(self.store.customers(), ['alice'])
        self.assertIn('alice', self.store)

    def testSupersede(self):
        fingerprint = CameraFingerprint(np.ones((4, 4)), 1, postprocessed=True)
        with self.store.exclusive():
            self.store.put('bob', fingerprint, '2024-05-01T12:00:00+00:00', '', 1)
            self.store.put('bob', fingerprint, '2024-05-02T12:00:00+00:00', '', 1)
        self.assertEqual(len(os.listdir(os.path.join(self.tmp_dir, 'fp'))), 1)

        with self.store.exclusive():
            self.store.delete('bob')
        self.assertEqual(os.listdir(os.path.join(self.tmp_dir, 'fp')), [])
        self.assertRaises(UnknownCustomerError, self.store.get, 'bob')

    def testFilename(self):
        data = b'fingerprint'
        name = fingerprint_filename('alice', '2024-05-01T12:00:00+00:00', data)
        self.assertEqual(name, fingerprint_filename('alice', '2024-05-01T12:00:00+00:00', data))
        self.assertNotEqual(name, fingerprint_filename('alice', '2024-05-02T12:00:00+00:00', data))
        self.assertNotEqual(name, fingerprint_filename('alice', '2024-05-01T12:00:00+00:00', b'other'))
        self.assertEqual(len(name), 32 + len('.prnufp'))

    def testFailedCommit(self):
        old = CameraFingerprint(np.ones((4, 4)), 1, postprocessed=True)
        new = CameraFingerprint(np.full((4, 4), 2.0), 1, postprocessed=True)
        with self.store.exclusive():
            self.store.put('bob', old, STAMP, 'old', 1)

        with mock.patch.object(FingerprintStore, '_write_index', side_effect=OSError(errno.ENOSPC, 'disk full')):
            with self.store.exclusive():
                self.assertRaises(OSError, self.store.put, 'bob', new, STAMP, 'new', 1)

        entry, loaded = self.store.get('bob')
        self.assertEqual(entry['camera_label'], 'old')
        self.assertTrue(np.array_equal(loaded.values, old.values))
        self.assertListEqual(os.listdir(os.path.join(self.tmp_dir, 'fp')), [entry['fingerprint_file']])

    def testReadRetry(self):
        fingerprint = CameraFingerprint(np.ones((4, 4)), 1, postprocessed=True)
        with self.store.exclusive():
            self.store.put('bob', fingerprint, STAMP, '', 1)

        outcomes = [FileNotFoundError(errno.ENOENT, 'gone')]

        def read_once_missing(path, label=''):
            if outcomes:
                raise outcomes.pop()
            return read_fingerprint(path, label)

        with mock.patch('prnuauth.auth.store.read_fingerprint', side_effect=read_once_missing) as reader:
            entry, loaded = self.store.get('bob')
        self.assertEqual(reader.call_count, 2)
        self.assertTrue(np.array_equal(loaded.values, fingerprint.values))

    def testChangedDuringRead(self):
        fingerprint = CameraFingerprint(np.ones((4, 4)), 1, postprocessed=True)
        with self.store.exclusive():
            self.store.put('bob', fingerprint, STAMP, '', 1)

        missing = FileNotFoundError(errno.ENOENT, 'gone')
        with mock.patch('prnuauth.auth.store.read_fingerprint', side_effect=missing) as reader:
            with self.assertRaises(UnknownCustomerError) as context:
                self.store.get('bob')
        self.assertEqual(reader.call_count, READ_ATTEMPTS)
        self.assertIn('changed during read', str(context.exception))

    def testWriterLock(self):
        lock_path = os.path.join(self.tmp_dir, '.lock')
        with self.store.exclusive():
            with open(lock_path, 'a') as other:
                self.assertRaises(BlockingIOError, fcntl.flock, other.fileno(), fcntl.LOCK_EX | fcntl.LOCK_NB)
            self.store.customers()

        with open(lock_path, 'a') as other:
            fcntl.flock(other.fileno(), fcntl.LOCK_EX | fcntl.LOCK_NB)
            fcntl.flock(other.fileno(), fcntl.LOCK_UN)


class CustomerIdTest(unittest.TestCase):
    """ Test customer key validation. """

    def testRun(self):
        check_customer_id('alice')
        check_customer_id('a' * 128)
        self.assertRaises(ParameterRangeError, check_customer_id, '')
        self.assertRaises(ParameterRangeError, check_customer_id, 'a' * 129)
        self.assertRaises(ParameterRangeError, check_customer_id, 'é' * 65)


class EnrollmentTest(CameraFixture):
    """ Test registration and re-registration. """

    def testRun(self):
        record = self.service.enroll('alice', self.enroll_a, 'phone A')
        self.assertEqual(record.image_count, ENROLLMENT_IMAGES)
        self.assertEqual(record.enrolled_at, NOW)
        self.assertTrue(record.fingerprint.postprocessed)

        stored = self.service.lookup('alice')
        self.assertTrue(np.array_equal(stored.fingerprint.values, record.fingerprint.values))
        self.assertEqual(stored.to_dict(), record.to_dict())

    def testDuplicate(self):
        self.service.enroll('alice', self.enroll_a)
        self.assertRaises(DuplicateEnrollmentError, self.service.enroll, 'alice', self.enroll_a)

    def testTooFew(self):
        with self.assertRaises(InsufficientImagesError) as context:
            self.service.enroll('alice', self.enroll_a[:14])
        self.assertIn('insufficient enrollment set', str(context.exception))
        self.assertNotIn('alice', self.store)

    def testFewWarning(self):
        with self.assertWarns(UserWarning):
            record = self.service.enroll('alice', self.enroll_a[:15])
        self.assertEqual(record.image_count, 15)

    def testMixedSizes(self):
        images = list(self.enroll_a[:15]) + [LuminanceImage(np.full((64, 64), 100.0))]
        self.assertRaises(DimensionMismatchError, self.service.enroll, 'alice', images)

    def testReenroll(self):
        self.assertRaises(UnknownCustomerError, self.service.reenroll, 'alice', self.enroll_b)
        self.service.enroll('alice', self.enroll_a)
        self.service.reenroll('alice', self.enroll_b, 'phone B')
        self.assertEqual(self.service.lookup('alice').camera_label, 'phone B')
        self.assertFalse(self.service.verify('alice', True, self.probe_a).authenticated)
        self.assertTrue(self.service.verify('alice', True, self.probe_b).authenticated)

    def testInterruptedReenroll(self):
        original = self.service.enroll('alice', self.enroll_a, 'phone A')
        with mock.patch.object(FingerprintStore, '_write_index', side_effect=OSError(errno.EIO, 'write failed')):
            self.assertRaises(OSError, self.service.reenroll, 'alice', self.enroll_b, 'phone B')

        stored = self.service.lookup('alice')
        self.assertEqual(stored.to_dict(), original.to_dict())
        self.assertTrue(np.array_equal(stored.fingerprint.values, original.fingerprint.values))
        self.assertTrue(self.service.verify('alice', True, self.probe_a).authenticated)


class VerificationTest(CameraFixture):
    """ Test that a customer is authenticated only when face and camera both pass. """

    def setUp(self):
        CameraFixture.setUp(self)
        self.service.enroll('alice', self.enroll_a)

    def testTruthTable(self):
        decision = self.service.verify('alice', True, self.probe_a)
        self.assertTrue(decision.camera_ok and decision.authenticated)
        self.assertTrue(decision.pce > 50)

        decision = self.service.verify('alice', True, self.probe_b)
        self.assertFalse(decision.camera_ok or decision.authenticated)
        self.assertTrue(decision.camera_checked)

        for probe in (self.probe_a, self.probe_b):
            decision = self.service.verify('alice', False, probe)
            self.assertFalse(decision.authenticated)
            self.assertFalse(decision.camera_checked)
            self.assertIsNone(decision.to_dict()['pce'])

    def testCounters(self):
        self.assertEqual(self.service.counters['fingerprints_computed'], 1)
        self.service.verify('alice', False, self.probe_a)
        self.assertEqual(self.service.counters['fingerprints_computed'], 1)
        self.service.verify('alice', True, self.probe_a)
        self.assertEqual(self.service.counters['fingerprints_computed'], 2)
        self.assertEqual(self.service.counters['verifications'], 2)

    def testResizedProbe(self):
        wide = [LuminanceImage(np.hstack([frame.pixels, frame.pixels[:, :SIZE // 2]])) for frame in self.probe_b]
        self.assertFalse(self.service.verify('alice', True, wide).authenticated)

    def testSaturatedProbe(self):
        saturated = [LuminanceImage(np.full((SIZE, SIZE), 255.0))] * 3
        decision = self.service.verify('alice', True, saturated)
        self.assertFalse(decision.camera_ok)
        self.assertEqual(decision.pce, 0.0)

    def testErrors(self):
        self.assertRaises(UnknownCustomerError, self.service.verify, 'bob', True, self.probe_a)
        self.assertRaises(UnknownCustomerError, self.service.verify, 'bob', False, self.probe_a)
        self.assertRaises(InsufficientImagesError, self.service.verify, 'alice', True, [])

    def testRevoke(self):
        confirmation = self.service.revoke('alice')
        self.assertEqual(confirmation['customer_id'], 'alice')
        self.assertRaises(UnknownCustomerError, self.service.lookup, 'alice')
        self.assertRaises(UnknownCustomerError, self.service.revoke, 'alice')


class FacadeTest(CameraFixture):
    """ Test the JSON request/response facade. """

    def _write(self, name, frames):
        directory = os.path.join(self.tmp_dir, name)
        os.makedirs(directory)
        paths = []
        for i, frame in enumerate(frames):
            path = os.path.join(directory, '{:02d}.pgm'.format(i))
            save_image(frame, path)
            paths.append(path)
        return paths

    def testRun(self):
        enroll_paths = self._write('enroll', self.enroll_a)
        probe_paths = self._write('probe', self.probe_a)

        response = handle_request(self.service, {'type': 'Register', 'customer_id': 'alice',
                                                 'camera_label': 'phone', 'image_paths': enroll_paths})
        self.assertEqual(response['image_count'], ENROLLMENT_IMAGES)

        response = handle_request(self.service, {'type': 'Register', 'customer_id': 'alice',
                                                 'image_paths': enroll_paths})
        self.assertEqual(response['error_code'], ErrorCode.DUPLICATE_ENROLLMENT)

        response = json.loads(handle_json(self.service, json.dumps(
            {'type': 'Verify', 'customer_id': 'alice', 'face_ok': True, 'frame_paths': probe_paths})))
        self.assertTrue(response['authenticated'])

        response = handle_request(self.service, {'type': 'Revoke', 'customer_id': 'alice'})
        self.assertEqual(response['customer_id'], 'alice')

        response = handle_request(self.service, {'type': 'Revoke', 'customer_id': 'alice'})
        self.assertEqual(response['error_code'], ErrorCode.UNKNOWN_CUSTOMER)
        self.assertEqual(response['message'], "unknown customer: 'alice'")

    def testBadRequests(self):
        self.assertEqual(handle_request(self.service, {'type': 'Dance'})['error_code'], ErrorCode.BAD_REQUEST)
        self.assertEqual(handle_request(self.service, ['Verify'])['error_code'], ErrorCode.BAD_REQUEST)
        self.assertEqual(handle_request(self.service, {'type': 'Verify', 'customer_id': 'alice'})['error_code'],
                         ErrorCode.BAD_REQUEST)
        self.assertEqual(json.loads(handle_json(self.service, '{not json'))['error_code'], ErrorCode.BAD_REQUEST)

        paths = self._write('enroll', self.enroll_a)
        malformed = [{'type': 'Register', 'customer_id': 'alice', 'image_paths': paths[:-1] + [None]},
                     {'type': 'Register', 'customer_id': 'alice', 'image_paths': paths[:-1] + [3]},
                     {'type': 'Register', 'customer_id': 'alice', 'image_paths': paths, 'camera_label': 5},
                     {'type': 'Verify', 'customer_id': 'alice', 'face_ok': True, 'frame_paths': [paths[0], None]}]
        for message in malformed:
            self.assertEqual(handle_request(self.service, message)['error_code'], ErrorCode.BAD_REQUEST)
        self.assertNotIn('alice', self.store)

    def testErrorCodes(self):
        missing = os.path.join(self.tmp_dir, 'missing.pgm')
        response = handle_request(self.service, {'type': 'Register', 'customer_id': 'alice',
                                                 'image_paths': [missing] * 20})
        self.assertEqual(response['error_code'], ErrorCode.IO_ERROR)

        paths = self._write('few', self.enroll_a[:3])
        response = handle_request(self.service, {'type': 'Register', 'customer_id': 'alice', 'image_paths': paths})
        self.assertEqual(response['error_code'], ErrorCode.INSUFFICIENT_IMAGES)


def suite():
    tests = [StoreTest, CustomerIdTest, EnrollmentTest, VerificationTest, FacadeTest]

    test_suite = unittest.TestSuite()
    for test in tests:
        test_suite.addTest(unittest.defaultTestLoader.loadTestsFromTestCase(test))
    return test_suite


if __name__ == "__main__":
    runner = unittest.TextTestRunner(verbosity=2)
    runner.run(suite())
