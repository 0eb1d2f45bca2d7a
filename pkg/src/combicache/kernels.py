"""Backend selection for the hot GF(2^16) kernel.

The compiled core is used when it imports; set ``COMBICACHE_PURE=1`` to
force the numpy fallback.
"""
from __future__ import annotations

import os

from . import _gfpy

if os.environ.get("COMBICACHE_PURE"):
    _impl = _gfpy
else:
    try:
        from . import _gfcore as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _gfpy

gf_matmul = _impl.gf_matmul
BACKEND: str = _impl.BACKEND
