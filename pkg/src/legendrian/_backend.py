"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the NumPy twins in
``_pykernels`` are used. ``use_backend`` switches explicitly (for benchmarks
and tests).
"""
from . import _pykernels

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

_active = _compiled if _compiled is not None else _pykernels


def available():
    names = ["python"]
    if _compiled is not None:
        names.insert(0, "cython")
    return names


def current():
    return "cython" if _active is _compiled and _compiled is not None else "python"


def use_backend(name):
    global _active
    if name == "cython":
        if _compiled is None:
            raise ImportError("compiled kernels are not built")
        _active = _compiled
    elif name == "python":
        _active = _pykernels
    else:
        raise ValueError(f"unknown backend {name!r}")


def get(name=None):
    """Kernel namespace for ``name`` (default: the active backend)."""
    if name is None:
        return _active
    if name == "cython":
        if _compiled is None:
            raise ImportError("compiled kernels are not built")
        return _compiled
    if name == "python":
        return _pykernels
    raise ValueError(f"unknown backend {name!r}")
