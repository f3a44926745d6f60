"""Optional numba acceleration.

Set ``TWISTORLINES_NUMBA=0`` to force the pure-numpy kernels even when numba
is installed. The flag is read once at import time.
"""

import os

try:
    import numba

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None
    HAS_NUMBA = False

USE_NUMBA = HAS_NUMBA and os.environ.get("TWISTORLINES_NUMBA", "1").strip().lower() not in (
    "0",
    "false",
    "no",
    "off",
)


def njit(fn):
    """``numba.njit(cache=True)`` when numba is importable, identity otherwise."""
    if HAS_NUMBA:
        return numba.njit(cache=True, nogil=True)(fn)
    return fn


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
