"""Kernel backend selection.

Prefers the compiled extension; falls back to the pure-Python kernels
when it is missing. Set TOPOPROBE_BACKEND=python to force the fallback
(used by the backend-equivalence tests and the benchmark).
"""

from __future__ import annotations

import os

from . import _core_py

if os.environ.get("TOPOPROBE_BACKEND", "").lower() == "python":
    _impl = _core_py
else:
    try:
        from . import _core as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _core_py

BACKEND: str = _impl.BACKEND
kruskal_merge_flags = _impl.kruskal_merge_flags
h1_pairs = _impl.h1_pairs
