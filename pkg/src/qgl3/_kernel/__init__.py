"""Mod-p elimination kernels: compiled extension with pure-Python fallback.

Set QGL3_PURE_KERNEL=1 to force the fallback (used by the benchmark and the
equivalence tests).
"""

from __future__ import annotations

import os

from . import fallback

if os.environ.get("QGL3_PURE_KERNEL"):
    rref_mod = fallback.rref_mod
    reduce_rows_mod = fallback.reduce_rows_mod
    KERNEL = "python"
else:
    try:
        from . import _modp

        rref_mod = _modp.rref_mod
        reduce_rows_mod = _modp.reduce_rows_mod
        KERNEL = "cython"
    except ImportError:  # pragma: no cover - environment without the extension
        rref_mod = fallback.rref_mod
        reduce_rows_mod = fallback.reduce_rows_mod
        KERNEL = "python"

__all__ = ["KERNEL", "rref_mod", "reduce_rows_mod", "fallback"]
