"""Numba acceleration plumbing.

Hot kernels live in :mod:`vecbandit._kernels` and are compiled with
``numba.njit`` when available.  Setting the environment variable
``VECBANDIT_DISABLE_NUMBA=1`` (or any of ``true``/``yes``) before import
forces the pure NumPy/Python fallback path: the same functions run
uncompiled and the run loops dispatch to their reference implementations.
Both paths produce bit-identical results; only speed differs.
"""

import os
import warnings

_flag = os.environ.get("VECBANDIT_DISABLE_NUMBA", "").strip().lower()
_disabled = _flag in ("1", "true", "yes", "on")

NUMBA_AVAILABLE = False

if not _disabled:
    try:
        from numba import njit as _numba_njit

        NUMBA_AVAILABLE = True
    except ImportError:
        warnings.warn(
            "numba could not be imported; falling back to the pure "
            "NumPy/Python path (expect much slower experiment runs)"
        )

#: True when compiled kernels are in use for run loops.
ACCELERATED = NUMBA_AVAILABLE and not _disabled


def njit(*args, **kwargs):
    """``numba.njit`` when acceleration is on, identity decorator otherwise."""
    if ACCELERATED:
        return _numba_njit(*args, **kwargs)
    if args and callable(args[0]) and not kwargs:
        return args[0]

    def decorator(func):
        return func

    return decorator
