"""
Exceptions raised across the toolkit.

Service-level errors carry an error code so that the JSON facade and the command line
can report them in a stable, machine-readable way.

"""


class ErrorCode(object):
    """ Enumeration of machine-readable error codes. """
    UNKNOWN_CUSTOMER = 'UNKNOWN_CUSTOMER'
    DUPLICATE_ENROLLMENT = 'DUPLICATE_ENROLLMENT'
    INSUFFICIENT_IMAGES = 'INSUFFICIENT_IMAGES'
    DEGENERATE_FINGERPRINT = 'DEGENERATE_FINGERPRINT'
    DIMENSION_MISMATCH = 'DIMENSION_MISMATCH'
    BAD_REQUEST = 'BAD_REQUEST'
    IO_ERROR = 'IO_ERROR'


class PrnuError(Exception):
    """ Base class for all toolkit errors. """
    error_code = ErrorCode.BAD_REQUEST


class ParameterRangeError(PrnuError, ValueError):
    """ A numeric argument is outside its allowed range. """


class ImageFormatError(PrnuError, ValueError):
    """ An image stream could not be decoded. """
    error_code = ErrorCode.IO_ERROR


class MalformedHeaderError(ImageFormatError):
    """ The Netpbm header is missing or invalid. """


class UnsupportedDepthError(ImageFormatError):
    """ The image uses more than 8 bits per sample. """


class TruncatedPayloadError(ImageFormatError):
    """ The pixel payload is shorter than the header promises. """


class FingerprintFormatError(PrnuError, ValueError):
    """ A fingerprint file has a bad magic number or an inconsistent size. """
    error_code = ErrorCode.IO_ERROR


class DimensionMismatchError(PrnuError, ValueError):
    """ Inputs that must share a shape do not. """
    error_code = ErrorCode.DIMENSION_MISMATCH


class DegenerateFingerprintError(PrnuError, ValueError):
    """ A fingerprint carries no usable signal (e.g. all zeros). """
    error_code = ErrorCode.DEGENERATE_FINGERPRINT


class DegenerateCorrelationError(PrnuError, ValueError):
    """ The correlation plane has no energy outside the exclusion window. """
    error_code = ErrorCode.DEGENERATE_FINGERPRINT


class InsufficientImagesError(PrnuError, ValueError):
    """ Too few images were supplied. """
    error_code = ErrorCode.INSUFFICIENT_IMAGES


class DuplicateEnrollmentError(PrnuError):
    """ The customer is already enrolled. """
    error_code = ErrorCode.DUPLICATE_ENROLLMENT


class UnknownCustomerError(PrnuError, KeyError):
    """ The customer has no enrollment record. """
    error_code = ErrorCode.UNKNOWN_CUSTOMER

    def __str__(self):
        # KeyError would otherwise quote the message
        return str(self.args[0]) if self.args else ''


class ImageTooSmallError(PrnuError, ValueError):
    """ An image is too small for the requested wavelet depth. """
    error_code = ErrorCode.DIMENSION_MISMATCH


class InvalidStateError(PrnuError, ValueError):
    """ An operation was applied to an object in the wrong state (e.g. post-processing twice). """
