"""
Read-only verification API.

Each endpoint runs the same service call as the matching CLI subcommand and
returns its report inside the standard response envelope. Data errors map to
400 (bad argument) or 404 (missing bundle).
"""
import logging
from functools import wraps

from flask import Blueprint, current_app, request

from ..errors import BundleNotFoundError, ToolkitError
from ..repositories import CURVE_BUNDLE, load_bundle, load_curve_bundle
from ..services import modular, weyl
from ..services.mathieu import verify_mathieu
from .utils import api_response, report_to_dict

logger = logging.getLogger(__name__)

verification_bp = Blueprint('verification', __name__, url_prefix='/api')


def _handle_toolkit_errors(view):
    @wraps(view)
    def wrapper(*args, **kwargs):
        try:
            return view(*args, **kwargs)
        except BundleNotFoundError as e:
            return api_response(status_code=404, message=str(e), error="Not Found")
        except (ToolkitError, ValueError) as e:
            return api_response(status_code=400, message=str(e), error="Bad Request")
    return wrapper


def _data_dir():
    return current_app.config.get("GENUS_DATA_DIR")


def _curve_db():
    """Curve table named by CREMONA_BUNDLE (default cremona-25000), cached on the app."""
    cache = current_app.extensions.setdefault('genus_curve_db', {})
    name = current_app.config.get("CREMONA_BUNDLE", CURVE_BUNDLE)
    if name not in cache:
        if name == CURVE_BUNDLE:
            cache[name] = load_curve_bundle(_data_dir())
        else:
            cache[name] = load_bundle(name, _data_dir())
    return cache[name]


@verification_bp.route('/mathieu', methods=['GET'])
@_handle_toolkit_errors
def get_mathieu():
    bundle = load_bundle('mathieu', _data_dir())
    report = verify_mathieu(bundle.data)
    return api_response(data=report_to_dict(report), meta={"files": bundle.checksums})


@verification_bp.route('/weyl/<label>', methods=['GET'])
@_handle_toolkit_errors
def get_weyl(label):
    """Weyl report for a label such as E8. Query params: rotation=true|false."""
    rotation = request.args.get('rotation', 'false').lower() in ('1', 'true', 'yes')
    root_type, rank = weyl.parse_label(label)
    report = weyl.weyl_report(root_type, rank, rotation=rotation)
    return api_response(data=report_to_dict(report))


@verification_bp.route('/modular/x0/<int:level>', methods=['GET'])
@_handle_toolkit_errors
def get_x0_genus(level):
    return api_response(data=report_to_dict(modular.x0_certificate(level)))


@verification_bp.route('/modular/genus-zero', methods=['GET'])
@_handle_toolkit_errors
def get_genus_zero():
    """Query params: bound (default 1000)."""
    try:
        bound = int(request.args.get('bound', modular.GENUS_ZERO_SWEEP))
    except ValueError:
        return api_response(status_code=400, message="bound must be an integer", error="Bad Request")
    return api_response(data=report_to_dict(modular.genus_zero_report(bound)))


@verification_bp.route('/steinberg/<int:p>', methods=['GET'])
@_handle_toolkit_errors
def get_steinberg(p):
    bundle = _curve_db()
    report = modular.steinberg_witness(p, bundle.data)
    return api_response(data=report_to_dict(report), meta={"files": bundle.checksums})
