"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``INDCONTROL_PURE_PYTHON=1`` to force the fallback.
"""

import contextlib
import os

from . import _pykernels

try:
    if os.environ.get("INDCONTROL_PURE_PYTHON"):
        raise ImportError("pure-Python kernels requested")
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

_AVAILABLE = {"python": _pykernels}
if _compiled is not None:
    _AVAILABLE["cython"] = _compiled

kernels = _compiled if _compiled is not None else _pykernels
BACKEND = "cython" if _compiled is not None else "python"


def available():
    return sorted(_AVAILABLE)


@contextlib.contextmanager
def use(name):
    """Temporarily route all kernel calls through backend ``name``."""
    global kernels, BACKEND
    if name not in _AVAILABLE:
        raise ValueError(f"kernel backend {name!r} not available (have {available()})")
    saved = kernels, BACKEND
    kernels, BACKEND = _AVAILABLE[name], name
    try:
        yield kernels
    finally:
        kernels, BACKEND = saved
