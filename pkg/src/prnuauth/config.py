"""
This module holds the tunable parameters shared by extraction, matching and the
authentication service, together with the command-line configuration object.

"""
import os

from .errors import ParameterRangeError


class Parameter(object):
    """ Enumeration of parameters common to the whole toolkit. """
    THRESHOLD = 0
    EXCLUSION_HALF_WIDTH = 1
    NOISE_VARIANCE = 2
    WAVELET = 3
    LEVELS = 4
    WINDOW_SIZES = 5
    SATURATION = 6
    MIN_ENROLLMENT = 7
    RECOMMENDED_ENROLLMENT = 8
    PROCESSES = 9


default_parameters = {
    Parameter.THRESHOLD: 50.0,
    Parameter.EXCLUSION_HALF_WIDTH: 5,
    Parameter.NOISE_VARIANCE: 9.0,
    Parameter.WAVELET: 'db8',
    Parameter.LEVELS: 4,
    Parameter.WINDOW_SIZES: (3, 5, 7, 9),
    Parameter.SATURATION: 250.0,
    Parameter.MIN_ENROLLMENT: 15,
    Parameter.RECOMMENDED_ENROLLMENT: 20,
    Parameter.PROCESSES: 1,
}

STORE_ENV_VAR = 'PRNU_STORE'


def set_default_parameter(parameter, value):
    """ Change the value for a given parameter (see list of supported parameters).

    Arguments:
        parameter (Parameter): parameter type
        value: parameter value
    """

    global default_parameters
    default_parameters[parameter] = value


def get_parameter(parameter, value=None):
    """ Resolve an optional override against the current defaults.

    Arguments:
        parameter (Parameter): parameter type
        value: explicit value (optional)

    Returns:
        the explicit value if given, otherwise the default
    """
    if value is not None:
        return value
    return default_parameters[parameter]


class CliConfig(object):
    """ Settings shared by all command-line operations. """

    def __init__(self, store_root=None, threshold=None, exclusion_half_width=None, verbosity=0):
        """
        Arguments:
            store_root (str): fingerprint store directory (default: $PRNU_STORE)
            threshold (float): PCE decision threshold (default: 50)
            exclusion_half_width (int): half width of the PCE exclusion window (default: 5)
            verbosity (int): number of -v flags given
        """
        self.store_root = store_root if store_root is not None else os.environ.get(STORE_ENV_VAR)
        self.threshold = float(get_parameter(Parameter.THRESHOLD, threshold))
        self.exclusion_half_width = int(get_parameter(Parameter.EXCLUSION_HALF_WIDTH, exclusion_half_width))
        self.verbosity = verbosity

        if not self.threshold > 0:
            raise ParameterRangeError("Threshold must be positive (got {})".format(self.threshold))

        if self.exclusion_half_width < 1:
            raise ParameterRangeError("Exclusion half width must be at least 1 (got {})".format(
                self.exclusion_half_width))

    @classmethod
    def from_args(cls, args):
        """ Build a configuration from parsed command-line arguments.

        Arguments:
            args (argparse.Namespace): parsed arguments

        Returns:
            CliConfig: configuration
        """
        return cls(store_root=getattr(args, 'store', None),
                   threshold=getattr(args, 'threshold', None),
                   exclusion_half_width=getattr(args, 'exclusion', None),
                   verbosity=getattr(args, 'verbose', 0) or 0)
