"""Numba dispatch.

Kernels are compiled with ``numba.njit`` unless numba is missing or the
``METAOPT_DISABLE_NUMBA`` environment variable is set to a truthy value, in
which case the pure-numpy implementations are used instead.
"""

import os

_FLAG = os.environ.get("METAOPT_DISABLE_NUMBA", "").strip().lower()

try:
    import numba
except ImportError:  # pragma: no cover - numba is an optional extra
    numba = None

NUMBA_AVAILABLE = numba is not None
USE_NUMBA = NUMBA_AVAILABLE and _FLAG in ("", "0", "false", "no")


def njit(fn):
    """Compile ``fn`` in nopython mode, or raise if numba is absent."""
    if numba is None:
        raise ImportError("numba is not installed")
    return numba.njit(cache=True, nogil=True)(fn)
