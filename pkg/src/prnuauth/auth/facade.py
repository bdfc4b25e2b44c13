""" This module implements a JSON request/response facade over the authentication service.

Requests are objects with a "type" field:

    Register   {customer_id, camera_label, image_paths[]}  -> {image_count, enrolled_at}
    Reregister {customer_id, camera_label, image_paths[]}  -> {image_count, enrolled_at}
    Verify     {customer_id, face_ok, frame_paths[]}       -> {authenticated, face_ok, camera_ok, pce}
    Revoke     {customer_id}                               -> {customer_id, revoked_at}

Failures are answered with {error_code, message}.

"""
import json
import logging

from ..errors import ErrorCode, PrnuError
from ..io.netpbm import read_image

logger = logging.getLogger(__name__)


class BadRequest(PrnuError, ValueError):
    """ The request is malformed. """
    error_code = ErrorCode.BAD_REQUEST


def _field(message, name, kind):
    if name not in message:
        raise BadRequest("Missing field '{}'".format(name))
    value = message[name]
    if not isinstance(value, kind):
        raise BadRequest("Field '{}' has the wrong type".format(name))
    return value


def _load_images(message, name):
    paths = _field(message, name, list)
    if not all(isinstance(path, str) for path in paths):
        raise BadRequest("Field '{}' must list file paths".format(name))
    return [read_image(path) for path in paths]


def _register(service, message, renew=False):
    customer_id = _field(message, 'customer_id', str)
    camera_label = _field(message, 'camera_label', str) if 'camera_label' in message else ''
    images = _load_images(message, 'image_paths')
    operation = service.reenroll if renew else service.enroll
    record = operation(customer_id, images, camera_label)
    return {'image_count': record.image_count, 'enrolled_at': record.to_dict()['enrolled_at']}


def _verify(service, message):
    customer_id = _field(message, 'customer_id', str)
    face_ok = _field(message, 'face_ok', bool)
    frames = _load_images(message, 'frame_paths')
    decision = service.verify(customer_id, face_ok, frames)
    return {'authenticated': decision.authenticated,
            'face_ok': decision.face_ok,
            'camera_ok': decision.camera_ok,
            'pce': decision.pce}


def _revoke(service, message):
    return service.revoke(_field(message, 'customer_id', str))


HANDLERS = {
    'Register': lambda service, message: _register(service, message),
    'Reregister': lambda service, message: _register(service, message, renew=True),
    'Verify': _verify,
    'Revoke': _revoke,
}


def error_response(error):
    """ Build an error response.

    Arguments:
        error (Exception): raised error

    Returns:
        dict: {error_code, message}
    """
    if isinstance(error, PrnuError):
        code = error.error_code
    elif isinstance(error, (IOError, OSError)):
        code = ErrorCode.IO_ERROR
    else:
        code = ErrorCode.BAD_REQUEST
    return {'error_code': code, 'message': str(error)}


def handle_request(service, message):
    """ Dispatch a request message to the service.

    Arguments:
        service (AuthService): authentication service
        message (dict): request

    Returns:
        dict: response or error response
    """
    try:
        if not isinstance(message, dict):
            raise BadRequest("Request must be a JSON object")

        kind = message.get('type')
        if kind not in HANDLERS:
            raise BadRequest("Unknown request type '{}'".format(kind))

        return HANDLERS[kind](service, message)

    except (PrnuError, ValueError, IOError, OSError) as e:
        logger.info("Request failed: %s", e)
        return error_response(e)


def handle_json(service, text):
    """ Dispatch a JSON-encoded request and encode the response.

    Arguments:
        service (AuthService): authentication service
        text (str): JSON request

    Returns:
        str: JSON response
    """
    try:
        message = json.loads(text)
    except ValueError as e:
        return json.dumps(error_response(BadRequest("Invalid JSON: {}".format(e))))

    return json.dumps(handle_request(service, message), sort_keys=True)
