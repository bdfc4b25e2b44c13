""" Command-line interface.

Exit codes are a stable contract:

    0   success / match / authenticated
    1   clean negative decision (no match, not authenticated)
    2   operational error

Every JSON result is printed as a single line on stdout.

"""
import argparse
import json
import logging
import sys
import warnings

from . import __version__
from .auth.service import AuthService
from .auth.store import FingerprintStore
from .config import CliConfig, Parameter, default_parameters
from .errors import ParameterRangeError, PrnuError
from .imaging.geometry import reconcile
from .io.fpfile import read_fingerprint, write_fingerprint
from .io.netpbm import read_image
from .prnu.calibration import match_table, null_calibration, summarize_null
from .prnu.extraction import accumulate, fingerprint_from_frames, postprocess
from .prnu.matching import decide, pce
from .synth.camera import DEFAULT_SIGMA, DEFAULT_STRENGTH, write_fixture

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'


class ExitCode(object):
    """ Enumeration of process exit codes. """
    SUCCESS = 0
    NEGATIVE = 1
    ERROR = 2


def _emit(payload):
    print(json.dumps(payload, sort_keys=True))


def _service(args, config):
    if not config.store_root:
        raise ParameterRangeError("No store given (use --store or set PRNU_STORE)")
    return AuthService(FingerprintStore(config.store_root), threshold=config.threshold,
                       exclusion_half_width=config.exclusion_half_width,
                       processes=getattr(args, 'processes', None))


def cmd_extract(args, config):
    images = [read_image(path) for path in args.images]

    if args.width or args.height:
        width = args.width or images[0].width
        height = args.height or images[0].height
        fingerprint = fingerprint_from_frames(images, width, height, processes=args.processes,
                                              label=args.camera_label)
    else:
        fingerprint = postprocess(accumulate(images, processes=args.processes, label=args.camera_label))

    write_fingerprint(fingerprint, args.out)
    print('images={} {}x{}'.format(fingerprint.image_count, fingerprint.width, fingerprint.height))
    return ExitCode.SUCCESS


def cmd_match(args, config):
    fp_a = read_fingerprint(args.fp_a)
    fp_b = read_fingerprint(args.fp_b)

    if fp_a.shape != fp_b.shape:
        logger.warning("Fingerprint sizes differ (%dx%d vs %dx%d), cropping to common size",
                       fp_a.width, fp_a.height, fp_b.width, fp_b.height)
        fp_a, fp_b = reconcile(fp_a, fp_b)

    report = pce(fp_a, fp_b, config.exclusion_half_width)
    decision = decide(report, config.threshold)

    payload = report.to_dict()
    payload.update(decision.to_dict())
    _emit(payload)

    return ExitCode.SUCCESS if decision.matched else ExitCode.NEGATIVE


def cmd_synth(args, config):
    manifest = write_fixture(args.out, args.seed, args.count, args.width, args.height,
                             strength=args.strength, sigma=args.sigma)
    _emit({key: manifest[key] for key in ('seed', 'strength', 'sigma', 'count', 'pattern_file')})
    return ExitCode.SUCCESS


def _register(args, config, renew):
    service = _service(args, config)
    images = [read_image(path) for path in args.images]
    operation = service.reenroll if renew else service.enroll

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter('always')
        record = operation(args.customer, images, args.camera_label)

    for warning in caught:
        print('warning: {}'.format(warning.message), file=sys.stderr)

    _emit(record.to_dict())
    return ExitCode.SUCCESS


def cmd_enroll(args, config):
    return _register(args, config, renew=False)


def cmd_reenroll(args, config):
    return _register(args, config, renew=True)


def cmd_verify(args, config):
    service = _service(args, config)
    frames = [read_image(path) for path in args.frames]
    decision = service.verify(args.customer, args.face_result == 'pass', frames)
    _emit(decision.to_dict())
    return ExitCode.SUCCESS if decision.authenticated else ExitCode.NEGATIVE


def cmd_revoke(args, config):
    _emit(_service(args, config).revoke(args.customer))
    return ExitCode.SUCCESS


def _labelled(arguments):
    fingerprints = {}
    for argument in arguments:
        label, _, path = argument.rpartition('=')
        path = path or argument
        fingerprints[label or path] = read_fingerprint(path, label or path)
    return fingerprints


def cmd_table(args, config):
    table = match_table(_labelled(args.reference), _labelled(args.probe), threshold=config.threshold,
                        exclusion_half_width=config.exclusion_half_width)
    for row in table.itertuples(index=False):
        _emit({'reference': row.reference, 'probe': row.probe, 'pce': float(row.pce),
               'peak_correlation': float(row.peak_correlation), 'matched': bool(row.matched)})
    return ExitCode.SUCCESS


def cmd_calibrate(args, config):
    sample = null_calibration(args.trials, args.size, args.size, args.seed,
                              exclusion_half_width=config.exclusion_half_width, threshold=config.threshold)
    summary = summarize_null(sample, config.threshold)
    _emit({key: float(value) for key, value in summary.items()})
    return ExitCode.SUCCESS


def build_parser():
    """ Build the argument parser.

    Returns:
        argparse.ArgumentParser: parser
    """
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--store', help='fingerprint store directory (default: $PRNU_STORE)')
    common.add_argument('--threshold', type=float,
                        help='PCE decision threshold (default: {})'.format(default_parameters[Parameter.THRESHOLD]))
    common.add_argument('--exclusion', type=int,
                        help='PCE exclusion half width (default: {})'.format(
                            default_parameters[Parameter.EXCLUSION_HALF_WIDTH]))
    common.add_argument('--processes', type=int, default=None, help='worker processes for residual extraction')
    common.add_argument('-v', '--verbose', action='count', default=0, help='increase logging verbosity')

    parser = argparse.ArgumentParser(prog='prnuauth', description='PRNU camera fingerprinting and '
                                                                  'two-factor camera authentication')
    parser.add_argument('--version', action='version', version='%(prog)s ' + __version__)
    sub = parser.add_subparsers(dest='command')
    sub.required = True

    p = sub.add_parser('extract', parents=[common], help='compute a fingerprint from images')
    p.add_argument('images', nargs='+', help='PGM/PPM images from one camera')
    p.add_argument('--out', required=True, help='output fingerprint file')
    p.add_argument('--width', type=int, help='resize images to this width first')
    p.add_argument('--height', type=int, help='resize images to this height first')
    p.add_argument('--camera-label', default='', help='camera name')
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser('match', parents=[common], help='score two fingerprint files')
    p.add_argument('fp_a', help='first fingerprint file')
    p.add_argument('fp_b', help='second fingerprint file')
    p.set_defaults(func=cmd_match)

    p = sub.add_parser('synth', parents=[common], help='write a synthetic capture set')
    p.add_argument('--seed', type=int, default=0, help='camera seed (default: 0)')
    p.add_argument('--count', type=int, default=20, help='number of captures (default: 20)')
    p.add_argument('--width', type=int, default=512, help='image width (default: 512)')
    p.add_argument('--height', type=int, default=512, help='image height (default: 512)')
    p.add_argument('--strength', type=float, default=DEFAULT_STRENGTH, help='pattern strength (default: 0.02)')
    p.add_argument('--sigma', type=float, default=DEFAULT_SIGMA, help='read noise sigma (default: 2)')
    p.add_argument('--out', required=True, help='output directory')
    p.set_defaults(func=cmd_synth)

    for name, func, text in (('enroll', cmd_enroll, 'register a customer camera'),
                             ('reenroll', cmd_reenroll, 'replace a customer camera')):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument('--customer', required=True, help='customer id')
        p.add_argument('--camera-label', default='', help='camera name')
        p.add_argument('images', nargs='+', help='enrollment images')
        p.set_defaults(func=func)

    p = sub.add_parser('verify', parents=[common], help='authenticate a customer')
    p.add_argument('--customer', required=True, help='customer id')
    p.add_argument('--face-result', required=True, choices=['pass', 'fail'], help='face recognition verdict')
    p.add_argument('frames', nargs='+', help='probe frames')
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser('revoke', parents=[common], help='remove a customer enrollment')
    p.add_argument('--customer', required=True, help='customer id')
    p.set_defaults(func=cmd_revoke)

    p = sub.add_parser('table', parents=[common], help='score probe fingerprints against references')
    p.add_argument('--reference', action='append', required=True, help='[label=]fingerprint file')
    p.add_argument('--probe', action='append', required=True, help='[label=]fingerprint file')
    p.set_defaults(func=cmd_table)

    p = sub.add_parser('calibrate', parents=[common], help='sample the null PCE distribution')
    p.add_argument('--trials', type=int, default=200, help='number of random pairs (default: 200)')
    p.add_argument('--size', type=int, default=256, help='fingerprint side (default: 256)')
    p.add_argument('--seed', type=int, default=0, help='base seed (default: 0)')
    p.set_defaults(func=cmd_calibrate)

    return parser


def main(argv=None):
    """ Run the command line.

    Arguments:
        argv (list): arguments (default: sys.argv[1:])

    Returns:
        int: exit code
    """
    parser = build_parser()

    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code

    logging.basicConfig(level=max(logging.DEBUG, logging.WARNING - 10 * args.verbose), format=LOG_FORMAT)

    try:
        config = CliConfig.from_args(args)
        return args.func(args, config)
    except (PrnuError, ValueError, IOError, OSError) as e:
        print('error: {}'.format(e), file=sys.stderr)
        return ExitCode.ERROR


if __name__ == '__main__':
    sys.exit(main())
