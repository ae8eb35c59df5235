"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``TWISTALG_PURE=1`` to force the fallback.
"""

import os

from . import _kernels_py

BACKEND = "python"

if os.environ.get("TWISTALG_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
else:
    _impl = _kernels_py

rref_modp = _impl.rref_modp
series_mul_modp = _impl.series_mul_modp

__all__ = ["BACKEND", "rref_modp", "series_mul_modp"]
