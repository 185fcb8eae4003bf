"""Inscribed rectangles and cyclic quadrilaterals in smooth Jordan curves.

Thin wrapper over the C++ core: curves are Fourier series, solvers return
plain dicts decoded from the core's JSON reports.
"""

import json

try:
    from . import _core
except ImportError:  # running against a build tree
    import _core

from ._version import __version__

FourierCurve = _core.FourierCurve
EmbeddingError = _core.EmbeddingError
OrbitIntegrityError = _core.OrbitIntegrityError
LedgerError = _core.LedgerError

make_ellipse = _core.make_ellipse
perturb = _core.perturb
check_embedded = _core.check_embedded
residual_rect = _core.residual_rect
residual_quad = _core.residual_quad
render_svg = _core.render_svg


def curve_from_json(text):
    if not isinstance(text, str):
        text = json.dumps(text)
    return _core.curve_from_json(text)


def solve_rect(curve, phi=None, right_angle=False, **kwargs):
    """Solve the rectangle system. Pass phi in radians or right_angle=True."""
    if right_angle:
        phi = 0.0
    elif phi is None:
        raise TypeError("phi is required unless right_angle=True")
    return json.loads(_core.solve_rect(curve, phi, right_angle, **kwargs))


def solve_quad(curve, s, t, phi, **kwargs):
    return json.loads(_core.solve_quad(curve, s, t, phi, **kwargs))


def topology_check(report, global_sign=1):
    if not isinstance(report, str):
        report = json.dumps(report)
    return json.loads(_core.topology_check(report, global_sign))


__all__ = [
    "__version__",
    "FourierCurve",
    "EmbeddingError",
    "OrbitIntegrityError",
    "LedgerError",
    "make_ellipse",
    "perturb",
    "check_embedded",
    "curve_from_json",
    "residual_rect",
    "residual_quad",
    "solve_rect",
    "solve_quad",
    "topology_check",
    "render_svg",
]
