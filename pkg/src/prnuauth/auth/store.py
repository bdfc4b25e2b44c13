""" This module implements the directory-backed fingerprint store.

Layout:

    <root>/index.json           customer_id -> {fingerprint_file, enrolled_at, camera_label, image_count}
    <root>/fp/<hash>.prnufp     one fingerprint file per enrollment
    <root>/.lock                writer lock

Every file is written to a temporary name and renamed into place, and the index rename is
the commit point. Writers serialize through an exclusive lock; readers take no lock and
never observe a partially written enrollment.

"""
import errno
import fcntl
import hashlib
import json
import logging
import os
import tempfile
from contextlib import contextmanager

from ..errors import UnknownCustomerError
from ..io.fpfile import dump_fingerprint, read_fingerprint

logger = logging.getLogger(__name__)

INDEX_FILE = 'index.json'
LOCK_FILE = '.lock'
FP_DIR = 'fp'
FP_SUFFIX = '.prnufp'
READ_ATTEMPTS = 3


def _atomic_write(path, data):
    directory = os.path.dirname(path)
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix='.tmp-')
    try:
        with os.fdopen(fd, 'wb') as stream:
            stream.write(data)
            stream.flush()
            os.fsync(stream.fileno())
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise


def fingerprint_filename(customer_id, enrolled_at, data):
    """ Storage file name for an enrollment. Names differ whenever contents differ.

    Arguments:
        customer_id (str): customer key
        enrolled_at (str): ISO-8601 enrollment timestamp
        data (bytes): serialized fingerprint

    Returns:
        str: file name relative to the fingerprint directory
    """
    digest = hashlib.sha256('{}\0{}\0'.format(customer_id, enrolled_at).encode('utf-8'))
    digest.update(data)
    digest = digest.hexdigest()
    return digest[:32] + FP_SUFFIX


class FingerprintStore(object):
    """ Directory store of enrolled fingerprints. """

    def __init__(self, root):
        """
        Arguments:
            root (str): store directory (created if missing)
        """
        self.root = root

        for directory in (root, os.path.join(root, FP_DIR)):
            if not os.path.isdir(directory):
                os.makedirs(directory)

    @property
    def index_path(self):
        return os.path.join(self.root, INDEX_FILE)

    def _fp_path(self, filename):
        return os.path.join(self.root, FP_DIR, filename)

    @contextmanager
    def exclusive(self):
        """ Hold the writer lock for the duration of the block. """
        with open(os.path.join(self.root, LOCK_FILE), 'a') as lock:
            fcntl.flock(lock.fileno(), fcntl.LOCK_EX)
            try:
                yield self
            finally:
                fcntl.flock(lock.fileno(), fcntl.LOCK_UN)

    def read_index(self):
        """ Load the index.

        Returns:
            dict: customer_id -> index entry
        """
        try:
            with open(self.index_path, 'r') as stream:
                return json.load(stream)
        except IOError as e:
            if e.errno == errno.ENOENT:
                return {}
            raise

    def _write_index(self, index):
        data = json.dumps(index, indent=2, sort_keys=True).encode('utf-8')
        _atomic_write(self.index_path, data)

    def customers(self):
        """ List enrolled customers.

        Returns:
            list: customer ids
        """
        return sorted(self.read_index().keys())

    def __contains__(self, customer_id):
        return customer_id in self.read_index()

    def get(self, customer_id):
        """ Load the enrollment entry and fingerprint of a customer.

        Arguments:
            customer_id (str): customer key

        Returns:
            tuple: (index entry, CameraFingerprint)
        """
        for _ in range(READ_ATTEMPTS):
            index = self.read_index()

            if customer_id not in index:
                raise UnknownCustomerError("unknown customer: '{}'".format(customer_id))

            entry = index[customer_id]
            try:
                fingerprint = read_fingerprint(self._fp_path(entry['fingerprint_file']), entry.get('camera_label', ''))
                return entry, fingerprint
            except IOError as e:
                # superseded by a concurrent re-enrollment; the index has moved on
                if e.errno != errno.ENOENT:
                    raise
                logger.debug("Fingerprint file for '%s' vanished during read, retrying", customer_id)

        raise UnknownCustomerError("unknown customer: '{}' (enrollment changed during read)".format(customer_id))

    def put(self, customer_id, fingerprint, enrolled_at, camera_label, image_count):
        """ Commit an enrollment, superseding any previous one. Call while holding the writer lock.

        Arguments:
            customer_id (str): customer key
            fingerprint (CameraFingerprint): post-processed fingerprint
            enrolled_at (str): ISO-8601 timestamp
            camera_label (str): camera label
            image_count (int): enrollment image count

        Returns:
            dict: new index entry
        """
        data = dump_fingerprint(fingerprint)
        filename = fingerprint_filename(customer_id, enrolled_at, data)
        _atomic_write(self._fp_path(filename), data)

        index = self.read_index()
        previous = index.get(customer_id)
        entry = {'fingerprint_file': filename,
                 'enrolled_at': enrolled_at,
                 'camera_label': camera_label,
                 'image_count': image_count}
        index[customer_id] = entry
        try:
            self._write_index(index)
        except BaseException:
            if not previous or previous['fingerprint_file'] != filename:
                self._remove_file(filename)
            raise

        if previous and previous['fingerprint_file'] != filename:
            self._remove_file(previous['fingerprint_file'])

        logger.info("Stored fingerprint for '%s' (%d images)", customer_id, image_count)
        return entry

    def delete(self, customer_id):
        """ Remove an enrollment. Call while holding the writer lock.

        Arguments:
            customer_id (str): customer key

        Returns:
            dict: removed index entry
        """
        index = self.read_index()

        if customer_id not in index:
            raise UnknownCustomerError("unknown customer: '{}'".format(customer_id))

        entry = index.pop(customer_id)
        self._write_index(index)
        self._remove_file(entry['fingerprint_file'])

        logger.info("Removed enrollment of '%s'", customer_id)
        return entry

    def _remove_file(self, filename):
        try:
            os.remove(self._fp_path(filename))
        except OSError as e:
            if e.errno != errno.ENOENT:
                raise
