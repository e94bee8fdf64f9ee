"""Kernel backend selection.

Prefers the compiled Cython backend; falls back to the pure-Python twin.
Set CITKIT_PURE=1 to force the fallback (used by the benchmark and tests).
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("CITKIT_PURE"):
    _impl = _kernels_py
    BACKEND = "pure"
else:
    try:
        from . import _kernels_cy as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "pure"

ball_make = _impl.ball_make
ball_is_zero = _impl.ball_is_zero
ball_normalize = _impl.ball_normalize
ball_add = _impl.ball_add
ball_mul = _impl.ball_mul
ball_scale_int = _impl.ball_scale_int
ball_div_uint = _impl.ball_div_uint
poly_mul = _impl.poly_mul
poly_rem_monic = _impl.poly_rem_monic
