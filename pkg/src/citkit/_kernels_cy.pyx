# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled backend for the hot kernels.

Object-level arithmetic (mantissas stay arbitrary precision); the win over
the pure twin is dispatch and loop overhead, which dominates at the small
working precisions of the randomized engines.  Mirrors _kernels_py exactly.
"""

from citkit._intbase import isqrt as _isqrt, mpz as _mpz


def ball_make(re, im, rad, exp):
    return (_mpz(re), _mpz(im), _mpz(rad), exp)


def ball_is_zero(b):
    return not (b[0] or b[1] or b[2])


def ball_normalize(b, prec):
    cdef Py_ssize_t m, sh
    re, im, rad, e = b
    m = max(abs(re).bit_length(), abs(im).bit_length(), rad.bit_length())
    if m <= prec:
        return b
    sh = m - prec
    return (re >> sh, im >> sh, (rad >> sh) + 3, e + sh)


def ball_add(x, y, prec):
    cdef Py_ssize_t d
    rex, imx, rx, ex = x
    rey, imy, ry, ey = y
    if not (rex or imx or rx):
        return y
    if not (rey or imy or ry):
        return x
    if ex == ey:
        return ball_normalize((rex + rey, imx + imy, rx + ry, ex), prec)
    if ex < ey:
        rex, imx, rx, ex, rey, imy, ry, ey = rey, imy, ry, ey, rex, imx, rx, ex
    d = ex - ey
    mag_y = abs(rey) + abs(imy) + ry
    if mag_y.bit_length() - d < -(prec + 8):
        return ball_normalize((rex, imx, rx + (mag_y >> d) + 1, ex), prec)
    return ball_normalize(
        ((rex << d) + rey, (imx << d) + imy, (rx << d) + ry, ey), prec
    )


def ball_mul(x, y, prec):
    rex, imx, rx, ex = x
    rey, imy, ry, ey = y
    re = rex * rey - imx * imy
    im = rex * imy + imx * rey
    rad = 0
    if rx or ry:
        mx = _isqrt(rex * rex + imx * imx) + 1
        my = _isqrt(rey * rey + imy * imy) + 1
        rad = mx * ry + my * rx + rx * ry
    return ball_normalize((re, im, rad, ex + ey), prec)


def ball_scale_int(x, k, prec):
    re, im, rad, e = x
    return ball_normalize((re * k, im * k, rad * abs(k), e), prec)


def ball_div_uint(x, k, prec):
    re, im, rad, e = x
    return ball_normalize((re // k, im // k, rad // k + 3, e), prec)


def poly_mul(list a, list b):
    cdef Py_ssize_t i, j, la = len(a), lb = len(b)
    if la == 0 or lb == 0:
        return []
    cdef list out = [0] * (la + lb - 1)
    for i in range(la):
        ai = a[i]
        if ai:
            for j in range(lb):
                bj = b[j]
                if bj:
                    out[i + j] = out[i + j] + ai * bj
    return out


def poly_rem_monic(list a, list m):
    cdef Py_ssize_t dm = len(m) - 1
    cdef Py_ssize_t i, j, base
    cdef list r = list(a)
    for i in range(len(r) - 1, dm - 1, -1):
        c = r[i]
        if c:
            r[i] = 0
            base = i - dm
            for j in range(dm):
                mj = m[j]
                if mj:
                    r[base + j] = r[base + j] - c * mj
    del r[dm:]
    while r and not r[len(r) - 1]:
        r.pop()
    return r
