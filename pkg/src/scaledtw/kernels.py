"""Kernel backend selection.

The compiled extension is preferred; set ``SCALEDTW_PURE=1`` to force the
pure-Python kernels (used by the benchmark and the backend parity tests).
"""
import os

from . import _kernels_py

if os.environ.get("SCALEDTW_PURE"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:  # extension not built
        _impl = _kernels_py
        BACKEND = "python"

closure = _impl.closure
image = _impl.image
is_closed = _impl.is_closed

__all__ = ["BACKEND", "closure", "image", "is_closed"]
