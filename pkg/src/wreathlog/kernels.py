"""Kernel selection: compiled ``_ckernels`` when importable, else pure Python.

Set ``WREATHLOG_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _pykernels

if os.environ.get("WREATHLOG_PURE_PYTHON"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _pykernels

collect = _impl.collect
BACKEND = "cython" if _impl is not _pykernels else "python"
