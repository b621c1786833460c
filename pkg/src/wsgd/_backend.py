"""Kernel backend selection.

The compiled extension is preferred; the pure-Python module is the
fallback.  Both expose the same functions with identical numerical
behavior.  Set WSGD_PURE=1 to force the fallback (used by benchmarks
and backend-parity tests).
"""

from __future__ import annotations

import os

from . import _pure

if os.environ.get("WSGD_PURE", "").strip() in ("", "0"):
    try:
        from . import _core as kernels
    except ImportError:
        kernels = _pure
else:
    kernels = _pure

BACKEND: str = kernels.BACKEND


def backend_name() -> str:
    """Name of the active kernel backend: 'compiled' or 'pure'."""
    return BACKEND
