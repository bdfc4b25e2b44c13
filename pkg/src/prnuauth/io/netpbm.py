""" This module implements reading and writing of binary Netpbm images (P5 graymaps, P6 pixmaps).

Only 8-bit samples (maxval <= 255) are supported. Header comments (#) are accepted
anywhere between header tokens, as in the Netpbm convention.

"""
import numpy as np

from ..errors import MalformedHeaderError, UnsupportedDepthError, TruncatedPayloadError
from ..model.image import LuminanceImage

WHITESPACE = b' \t\n\r\v\f'

BT601_WEIGHTS = np.array([0.299, 0.587, 0.114])


def _read_bytes(data):
    if isinstance(data, (bytes, bytearray, memoryview)):
        return bytes(data)
    return data.read()


def _parse_header(data, magic):
    """ Parse a Netpbm header.

    Arguments:
        data (bytes): whole file contents
        magic (bytes): expected magic number (b'P5' or b'P6')

    Returns:
        tuple: width, height, maxval, payload offset
    """

    if data[:2] != magic:
        raise MalformedHeaderError("Expected '{}' magic number, got {!r}".format(magic.decode(), data[:2]))

    pos = 2
    tokens = []

    while len(tokens) < 3:
        if pos >= len(data):
            raise MalformedHeaderError("Unexpected end of header")

        char = data[pos:pos + 1]

        if char in WHITESPACE:
            pos += 1
        elif char == b'#':
            end = data.find(b'\n', pos)
            if end < 0:
                raise MalformedHeaderError("Unterminated header comment")
            pos = end + 1
        else:
            start = pos
            while pos < len(data) and data[pos:pos + 1] not in WHITESPACE and data[pos:pos + 1] != b'#':
                pos += 1
            token = data[start:pos]
            if not token.isdigit():
                raise MalformedHeaderError("Invalid header field {!r}".format(token))
            tokens.append(int(token))

    # exactly one whitespace byte separates the header from the raster
    if pos >= len(data) or data[pos:pos + 1] not in WHITESPACE:
        raise MalformedHeaderError("Missing whitespace after maxval")

    width, height, maxval = tokens

    if width < 1 or height < 1:
        raise MalformedHeaderError("Invalid image size {}x{}".format(width, height))

    if maxval < 1:
        raise MalformedHeaderError("Invalid maxval {}".format(maxval))

    if maxval > 255:
        raise UnsupportedDepthError("unsupported depth: maxval {} (only 8-bit images are supported)".format(maxval))

    return width, height, maxval, pos + 1


def _read_raster(data, offset, width, height, channels):
    expected = width * height * channels
    payload = data[offset:offset + expected]

    if len(payload) < expected:
        raise TruncatedPayloadError("truncated payload: expected {} bytes, got {}".format(expected, len(payload)))

    raster = np.frombuffer(payload, dtype=np.uint8).astype(np.float64)

    if channels == 1:
        return raster.reshape(height, width)
    return raster.reshape(height, width, channels)


def load_pgm(stream):
    """ Decode a binary (P5) graymap.

    Arguments:
        stream: bytes or binary file object

    Returns:
        LuminanceImage: image with the exact sample values of the stream
    """
    data = _read_bytes(stream)
    width, height, _, offset = _parse_header(data, b'P5')
    return LuminanceImage(_read_raster(data, offset, width, height, 1))


def load_ppm_luminance(stream):
    """ Decode a binary (P6) pixmap and convert it to luminance with BT.601 weights.

    Arguments:
        stream: bytes or binary file object

    Returns:
        LuminanceImage: luminance image, Y = 0.299 R + 0.587 G + 0.114 B
    """
    data = _read_bytes(stream)
    width, height, _, offset = _parse_header(data, b'P6')
    rgb = _read_raster(data, offset, width, height, 3)
    return LuminanceImage(np.clip(rgb.dot(BT601_WEIGHTS), 0, 255))


def save_pgm(image, stream):
    """ Encode an image as a binary (P5) graymap. Values are rounded to the nearest integer.

    Arguments:
        image (LuminanceImage): image to encode
        stream: binary file object
    """
    raster = np.clip(np.rint(image.pixels), 0, 255).astype(np.uint8)
    stream.write('P5\n{} {}\n255\n'.format(image.width, image.height).encode('ascii'))
    stream.write(raster.tobytes())


def read_image(filename):
    """ Reads an image file, dispatching on its magic number (P5 or P6).

    Arguments:
        filename (str): file path

    Returns:
        LuminanceImage: luminance image
    """
    with open(filename, 'rb') as stream:
        data = stream.read()

    if data[:2] == b'P6':
        return load_ppm_luminance(data)
    return load_pgm(data)


def save_image(image, filename):
    """ Writes an image to a PGM file.

    Arguments:
        image (LuminanceImage): image
        filename (str): file path
    """
    with open(filename, 'wb') as stream:
        save_pgm(image, stream)
