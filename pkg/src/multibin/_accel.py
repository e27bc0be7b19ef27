"""Numba switch.

Kernels are decorated with :func:`jit`.  When numba is importable and the
environment variable ``MULTIBIN_DISABLE_NUMBA`` is unset (or ``0``), they are
compiled with ``numba.njit``; otherwise they run as plain Python over numpy
arrays.  Either way the undecorated function stays reachable as
``kernel.py_func`` so both paths can be compared in one process.
"""

import os

_flag = os.environ.get("MULTIBIN_DISABLE_NUMBA", "").strip().lower()
_disabled = _flag not in ("", "0", "false", "no")

try:
    if _disabled:
        raise ImportError
    from numba import njit as _njit

    NUMBA_ENABLED = True
except ImportError:
    _njit = None
    NUMBA_ENABLED = False


def jit(func):
    if NUMBA_ENABLED:
        return _njit(cache=True)(func)
    func.py_func = func
    return func


def backend() -> str:
    return "numba" if NUMBA_ENABLED else "python"
