"""Numba switch for the solver kernels.

Set ``BURNCOPS_DISABLE_NUMBA=1`` to run every kernel as plain Python over
numpy arrays. Both paths execute the same source, so results are identical;
only speed differs.
"""

from __future__ import annotations

import os

NUMBA_DISABLED = os.environ.get("BURNCOPS_DISABLE_NUMBA", "").strip() not in ("", "0")

try:
    from numba import njit as _njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    NUMBA_AVAILABLE = False

USE_NUMBA = NUMBA_AVAILABLE and not NUMBA_DISABLED


def kernel(func):
    """Compile ``func`` with ``numba.njit`` unless the fallback is selected."""
    if USE_NUMBA:
        return _njit(cache=True, nogil=True)(func)
    return func


def backend_name() -> str:
    return "numba" if USE_NUMBA else "python"
