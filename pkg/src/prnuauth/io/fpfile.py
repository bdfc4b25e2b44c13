""" This module implements the binary fingerprint file format.

Layout (little-endian):

    magic           8 bytes   b'PRNUFP1\\0'
    width           u32
    height          u32
    image_count     u32
    postprocessed   u8
    reserved        3 bytes (zero)
    values          width x height float32, row-major

The camera label is not part of the format.

"""
import struct

import numpy as np

from ..errors import FingerprintFormatError
from ..model.fingerprint import CameraFingerprint

MAGIC = b'PRNUFP1\x00'
HEADER = struct.Struct('<8sIIIB3x')
VALUE_DTYPE = np.dtype('<f4')


def dump_fingerprint(fingerprint):
    """ Serialize a fingerprint.

    Arguments:
        fingerprint (CameraFingerprint): fingerprint

    Returns:
        bytes: file contents
    """
    header = HEADER.pack(MAGIC, fingerprint.width, fingerprint.height, fingerprint.image_count,
                         1 if fingerprint.postprocessed else 0)
    return header + fingerprint.values.astype(VALUE_DTYPE).tobytes()


def parse_fingerprint(data, label=''):
    """ Deserialize a fingerprint.

    Arguments:
        data (bytes): file contents
        label (str): camera label to attach (optional)

    Returns:
        CameraFingerprint: fingerprint (values widened to float64)
    """
    if len(data) < HEADER.size or data[:len(MAGIC)] != MAGIC:
        raise FingerprintFormatError("bad magic: not a fingerprint file")

    _, width, height, image_count, postprocessed = HEADER.unpack_from(data)

    if width < 1 or height < 1:
        raise FingerprintFormatError("size mismatch: invalid dimensions {}x{}".format(width, height))

    expected = HEADER.size + width * height * VALUE_DTYPE.itemsize

    if len(data) != expected:
        raise FingerprintFormatError("size mismatch: expected {} bytes for {}x{}, got {}".format(
            expected, width, height, len(data)))

    if image_count < 1 or postprocessed not in (0, 1):
        raise FingerprintFormatError("invalid header fields (image_count={}, postprocessed={})".format(
            image_count, postprocessed))

    values = np.frombuffer(data, dtype=VALUE_DTYPE, offset=HEADER.size).reshape(height, width)

    if not np.all(np.isfinite(values)):
        raise FingerprintFormatError("fingerprint contains non-finite values")

    return CameraFingerprint(values.astype(np.float64), image_count, bool(postprocessed), label)


def write_fingerprint(fingerprint, filename):
    """ Writes a fingerprint to a file.

    Arguments:
        fingerprint (CameraFingerprint): fingerprint
        filename (str): file path
    """
    with open(filename, 'wb') as stream:
        stream.write(dump_fingerprint(fingerprint))


def read_fingerprint(filename, label=''):
    """ Reads a fingerprint from a file.

    Arguments:
        filename (str): file path
        label (str): camera label to attach (optional)

    Returns:
        CameraFingerprint: fingerprint
    """
    with open(filename, 'rb') as stream:
        return parse_fingerprint(stream.read(), label)
