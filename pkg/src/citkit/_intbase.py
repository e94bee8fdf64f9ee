"""Arbitrary-precision integer backend.

Mantissas in the ball-arithmetic kernels go through ``mpz`` so that very
high working precisions (tens of thousands of bits) get GMP's quasi-linear
multiplication. Everything degrades gracefully to plain ``int``.
"""

from __future__ import annotations

import math

try:
    import gmpy2

    mpz = gmpy2.mpz
    isqrt = gmpy2.isqrt
    HAVE_GMPY2 = True
except ImportError:  # pragma: no cover - exercised only without gmpy2
    mpz = int
    isqrt = math.isqrt
    HAVE_GMPY2 = False
