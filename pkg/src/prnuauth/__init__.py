
__version__ = '0.1.0'

from .io.netpbm import load_pgm, load_ppm_luminance, save_pgm, read_image, save_image
from .io.fpfile import read_fingerprint, write_fingerprint

from .imaging.geometry import resize_bilinear, center_crop, fit_to, reconcile

from .model.image import LuminanceImage
from .model.fingerprint import NoiseResidual, CameraFingerprint

from .prnu.wavelet import dwt2, idwt2
from .prnu.denoise import denoise, residual
from .prnu.extraction import accumulate, postprocess, fingerprint_from_frames
from .prnu.matching import normalize_fp, correlation_plane, pce, decide, PceReport, MatchDecision
from .prnu.calibration import null_calibration, summarize_null, match_table

from .synth.camera import SyntheticCamera, gen_pattern, gen_scene, capture, degrade, make_camera, write_fixture

from .auth.store import FingerprintStore
from .auth.service import AuthService, AuthDecision, EnrollmentRecord

from .config import Parameter, set_default_parameter
