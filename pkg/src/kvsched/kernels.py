"""Hot-loop kernels with a compiled backend when available.

Set ``KVSCHED_PURE_PYTHON=1`` to force the pure-Python fallback.
"""
from __future__ import annotations

import os

if os.environ.get("KVSCHED_PURE_PYTHON", "") not in ("", "0"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

BACKEND: str = _impl.BACKEND
static_profile = _impl.static_profile
search_starts = _impl.search_starts

__all__ = ["BACKEND", "search_starts", "static_profile"]
