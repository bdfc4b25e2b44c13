"""
Unit testing module for the command line.

"""
import io
import json
import os
import shutil
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout
from unittest import mock

import numpy as np

from prnuauth.auth.service import AuthService
from prnuauth.cli import ExitCode, main
from prnuauth.io.netpbm import save_image
from prnuauth.model.image import LuminanceImage

SIZE = '64'
FIXTURE_COUNT = 20


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue(), err.getvalue()


class CommandTest(unittest.TestCase):
    """ Synthetic fixtures of two cameras in a scratch directory. """

    @classmethod
    def setUpClass(cls):
        cls.tmp_dir = tempfile.mkdtemp()
        cls.camera_a = os.path.join(cls.tmp_dir, 'camera_a')
        cls.camera_b = os.path.join(cls.tmp_dir, 'camera_b')
        for seed, directory in ((31, cls.camera_a), (32, cls.camera_b)):
            code, _, _ = run('synth', '--seed', str(seed), '--count', str(FIXTURE_COUNT), '--width', SIZE,
                             '--height', SIZE, '--out', directory)
            assert code == ExitCode.SUCCESS

    @classmethod
    def tearDownClass(cls):
        shutil.rmtree(cls.tmp_dir)

    def setUp(self):
        self.env = mock.patch.dict(os.environ)
        self.env.start()
        os.environ.pop('PRNU_STORE', None)
        self.work_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.work_dir)
        self.env.stop()

    def images(self, directory, start=0, stop=FIXTURE_COUNT):
        return [os.path.join(directory, 'capture_{:04d}.pgm'.format(i)) for i in range(start, stop)]


class SynthCommandTest(CommandTest):
    """ Test the synth command. """

    def testRun(self):
        with open(os.path.join(self.camera_a, 'manifest.json')) as stream:
            manifest = json.load(stream)
        self.assertEqual(manifest['count'], FIXTURE_COUNT)
        self.assertTrue(os.path.exists(os.path.join(self.camera_a, manifest['pattern_file'])))

    def testInvalid(self):
        out = os.path.join(self.work_dir, 'out')
        code, _, err = run('synth', '--strength', '0.5', '--out', out)
        self.assertEqual(code, ExitCode.ERROR)
        self.assertIn('strength', err)
        code, _, _ = run('synth', '--count', '0', '--out', out)
        self.assertEqual(code, ExitCode.ERROR)


class ExtractMatchTest(CommandTest):
    """ Test the extract and match commands. """

    def testRun(self):
        fp_file = os.path.join(self.work_dir, 'a.prnufp')
        code, out, _ = run('extract', '--out', fp_file, *self.images(self.camera_a, 0, 4))
        self.assertEqual(code, ExitCode.SUCCESS)
        self.assertEqual(out.strip(), 'images=4 64x64')

        code, out, _ = run('match', fp_file, os.path.join(self.camera_a, 'pattern.prnufp'))
        self.assertEqual(code, ExitCode.SUCCESS)
        result = json.loads(out)
        self.assertTrue(result['matched'] and result['pce'] > 50)

        code, out, _ = run('match', fp_file, os.path.join(self.camera_b, 'pattern.prnufp'))
        self.assertEqual(code, ExitCode.NEGATIVE)
        self.assertFalse(json.loads(out)['matched'])

    def testResize(self):
        fp_file = os.path.join(self.work_dir, 'small.prnufp')
        code, out, _ = run('extract', '--out', fp_file, '--width', '32', '--height', '48',
                           *self.images(self.camera_a, 0, 2))
        self.assertEqual(code, ExitCode.SUCCESS)
        self.assertEqual(out.strip(), 'images=2 32x48')

    def testMixedSizes(self):
        odd = os.path.join(self.work_dir, 'odd.pgm')
        save_image(LuminanceImage(np.full((32, 32), 100.0)), odd)
        code, _, err = run('extract', '--out', os.path.join(self.work_dir, 'x.prnufp'),
                           *(self.images(self.camera_a, 0, 2) + [odd]))
        self.assertEqual(code, ExitCode.ERROR)
        self.assertIn('dimension mismatch', err)

    def testBadMagic(self):
        junk = os.path.join(self.work_dir, 'junk.prnufp')
        with open(junk, 'wb') as stream:
            stream.write(b'definitely not a fingerprint')
        code, _, err = run('match', junk, os.path.join(self.camera_a, 'pattern.prnufp'))
        self.assertEqual(code, ExitCode.ERROR)
        self.assertIn('bad magic', err)

    def testMissingFile(self):
        code, _, _ = run('match', os.path.join(self.work_dir, 'nope'), os.path.join(self.work_dir, 'nope'))
        self.assertEqual(code, ExitCode.ERROR)


class AuthCommandTest(CommandTest):
    """ Test enroll, verify and revoke against a store directory. """

    def setUp(self):
        CommandTest.setUp(self)
        self.store = os.path.join(self.work_dir, 'store')
        code, out, self.enroll_err = run('enroll', '--store', self.store, '--customer', 'alice',
                                         '--camera-label', 'phone', *self.images(self.camera_a, 0, 15))
        self.assertEqual(code, ExitCode.SUCCESS)
        self.enrollment = json.loads(out)

    def testEnroll(self):
        self.assertEqual(self.enrollment['image_count'], 15)
        self.assertEqual(self.enrollment['camera_label'], 'phone')
        self.assertIn('warning:', self.enroll_err)

        code, _, _ = run('enroll', '--store', self.store, '--customer', 'alice', *self.images(self.camera_a))
        self.assertEqual(code, ExitCode.ERROR)

    def testVerify(self):
        probes = self.images(self.camera_a, 15, 20)
        code, out, _ = run('verify', '--store', self.store, '--customer', 'alice', '--face-result', 'pass', *probes)
        self.assertEqual(code, ExitCode.SUCCESS)
        self.assertTrue(json.loads(out)['authenticated'])

        code, out, _ = run('verify', '--store', self.store, '--customer', 'alice', '--face-result', 'fail', *probes)
        self.assertEqual(code, ExitCode.NEGATIVE)
        self.assertIsNone(json.loads(out)['pce'])

        code, out, _ = run('verify', '--store', self.store, '--customer', 'alice', '--face-result', 'pass',
                           *self.images(self.camera_b, 15, 20))
        self.assertEqual(code, ExitCode.NEGATIVE)
        self.assertFalse(json.loads(out)['camera_ok'])

    def testStoreFromEnvironment(self):
        os.environ['PRNU_STORE'] = self.store
        code, _, _ = run('revoke', '--customer', 'alice')
        self.assertEqual(code, ExitCode.SUCCESS)
        code, _, err = run('revoke', '--customer', 'alice')
        self.assertEqual(code, ExitCode.ERROR)
        self.assertIn('unknown customer', err)

    def testNoStore(self):
        code, _, _ = run('revoke', '--customer', 'alice')
        self.assertEqual(code, ExitCode.ERROR)

    def testReenroll(self):
        code, out, _ = run('reenroll', '--store', self.store, '--customer', 'alice', '--camera-label', 'new phone',
                           *self.images(self.camera_b))
        self.assertEqual(code, ExitCode.SUCCESS)
        self.assertEqual(json.loads(out)['camera_label'], 'new phone')

    def testProcesses(self):
        probes = self.images(self.camera_a, 15, 20)
        with mock.patch('prnuauth.cli.AuthService', wraps=AuthService) as service:
            code, out, _ = run('verify', '--store', self.store, '--customer', 'alice', '--face-result', 'pass',
                               '--processes', '2', *probes)
        self.assertEqual(code, ExitCode.SUCCESS)
        self.assertTrue(json.loads(out)['authenticated'])
        self.assertEqual(service.call_args[1]['processes'], 2)


class BatchCommandTest(CommandTest):
    """ Test the table and calibrate commands. """

    def testTable(self):
        code, out, _ = run('table', '--reference', 'a=' + os.path.join(self.camera_a, 'pattern.prnufp'),
                           '--reference', 'b=' + os.path.join(self.camera_b, 'pattern.prnufp'),
                           '--probe', 'a=' + os.path.join(self.camera_a, 'pattern.prnufp'))
        self.assertEqual(code, ExitCode.SUCCESS)
        rows = [json.loads(line) for line in out.splitlines()]
        self.assertEqual(len(rows), 2)
        self.assertTrue(rows[0]['matched'])
        self.assertFalse(rows[1]['matched'])

    def testCalibrate(self):
        code, out, _ = run('calibrate', '--trials', '5', '--size', '32')
        self.assertEqual(code, ExitCode.SUCCESS)
        self.assertEqual(json.loads(out)['trials'], 5)

    def testInvalidThreshold(self):
        code, _, _ = run('calibrate', '--trials', '2', '--size', '32', '--threshold', '-1')
        self.assertEqual(code, ExitCode.ERROR)

    def testUsage(self):
        code, _, _ = run('frobnicate')
        self.assertEqual(code, ExitCode.ERROR)


def suite():
    tests = [SynthCommandTest, ExtractMatchTest, AuthCommandTest, BatchCommandTest]

    test_suite = unittest.TestSuite()
    for test in tests:
        test_suite.addTest(unittest.defaultTestLoader.loadTestsFromTestCase(test))
    return test_suite


if __name__ == "__main__":
    runner = unittest.TextTestRunner(verbosity=2)
    runner.run(suite())
