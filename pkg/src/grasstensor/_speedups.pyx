# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled exact-integer kernels.

All arithmetic is on int64 storage with 128-bit intermediates.  Any value
that would leave the int64 range is reported back to the caller, which then
recomputes with Python integers (see ``kernels``).
"""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free
from libc.stdint cimport int64_t, uint8_t

cdef extern from *:
    """
    typedef __int128 gt_i128;
    static inline gt_i128 gt_abs128(gt_i128 x) { return x < 0 ? -x : x; }
    static inline gt_i128 gt_gcd128(gt_i128 a, gt_i128 b) {
        a = gt_abs128(a); b = gt_abs128(b);
        while (b != 0) { gt_i128 t = a % b; a = b; b = t; }
        return a;
    }
    """
    ctypedef long long i128 "gt_i128"
    i128 abs128 "gt_abs128"(i128 x) nogil
    i128 gcd128 "gt_gcd128"(i128 a, i128 b) nogil

cnp.import_array()

cdef int64_t I64_MAX = 9223372036854775807
cdef int64_t I64_MIN = -I64_MAX - 1


cdef inline bint fits(i128 x) noexcept nogil:
    return x <= <i128>I64_MAX and x >= <i128>I64_MIN


cdef int det_inplace(int64_t* a, Py_ssize_t n, int64_t* out) noexcept nogil:
    """Bareiss elimination on a row-major n x n buffer.  Returns 0 on success,
    1 on int64 overflow."""
    cdef Py_ssize_t k, i, j, p
    cdef int64_t prev = 1, tmp
    cdef int sign = 1
    cdef i128 t
    if n == 0:
        out[0] = 1
        return 0
    for k in range(n - 1):
        if a[k * n + k] == 0:
            p = -1
            for i in range(k + 1, n):
                if a[i * n + k] != 0:
                    p = i
                    break
            if p < 0:
                out[0] = 0
                return 0
            for j in range(n):
                tmp = a[k * n + j]
                a[k * n + j] = a[p * n + j]
                a[p * n + j] = tmp
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                t = (<i128>a[i * n + j]) * a[k * n + k] - (<i128>a[i * n + k]) * a[k * n + j]
                t = t / prev
                if not fits(t):
                    return 1
                a[i * n + j] = <int64_t>t
        prev = a[k * n + k]
    out[0] = sign * a[(n - 1) * n + (n - 1)]
    return 0


def det(cnp.int64_t[:, ::1] m):
    """Exact determinant of a square int64 matrix, or ``None`` on overflow."""
    cdef Py_ssize_t n = m.shape[0]
    cdef int64_t* buf = <int64_t*>malloc(n * n * sizeof(int64_t) + 8)
    cdef int64_t val = 0
    cdef int status
    cdef Py_ssize_t i, j
    for i in range(n):
        for j in range(n):
            buf[i * n + j] = m[i, j]
    status = det_inplace(buf, n, &val)
    free(buf)
    if status:
        return None
    return val


def minors(cnp.int64_t[:, ::1] m, cnp.intp_t[:, ::1] cols,
           cnp.int64_t[::1] out, cnp.uint8_t[::1] overflow):
    """Determinants of ``m[:, cols[r]]`` for each row r of ``cols``.

    Results land in ``out``; rows whose computation overflowed get
    ``overflow[r] = 1`` and must be recomputed by the caller.
    """
    cdef Py_ssize_t n = m.shape[0]
    cdef Py_ssize_t count = cols.shape[0]
    cdef Py_ssize_t r, i, j
    cdef int64_t val
    cdef int64_t* buf = <int64_t*>malloc(n * n * sizeof(int64_t) + 8)
    with nogil:
        for r in range(count):
            for i in range(n):
                for j in range(n):
                    buf[i * n + j] = m[i, cols[r, j]]
            if det_inplace(buf, n, &val):
                overflow[r] = 1
                out[r] = 0
            else:
                overflow[r] = 0
                out[r] = val
    free(buf)


def rank(cnp.int64_t[:, ::1] m):
    """Exact rank over the rationals of an int64 matrix, or ``None`` on overflow.

    Fraction-free row elimination; each updated row is divided by its content
    so entries stay small on structured inputs.  The input is not modified.
    """
    cdef Py_ssize_t rows = m.shape[0], ncols = m.shape[1]
    cdef Py_ssize_t r, c, j, p
    cdef Py_ssize_t rk = 0
    cdef int64_t piv, f, tmp
    cdef i128 g, t, pp, ff
    cdef bint overflow = False
    cdef cnp.ndarray[cnp.int64_t, ndim=2] work = np.array(m, dtype=np.int64, order="C")
    cdef int64_t* a = <int64_t*>work.data
    cdef i128* row = <i128*>malloc((ncols + 1) * sizeof(i128))
    with nogil:
        for c in range(ncols):
            if rk == rows:
                break
            p = -1
            for r in range(rk, rows):
                if a[r * ncols + c] != 0:
                    p = r
                    break
            if p < 0:
                continue
            if p != rk:
                for j in range(c, ncols):
                    tmp = a[rk * ncols + j]
                    a[rk * ncols + j] = a[p * ncols + j]
                    a[p * ncols + j] = tmp
            piv = a[rk * ncols + c]
            for r in range(rk + 1, rows):
                f = a[r * ncols + c]
                if f == 0:
                    continue
                g = gcd128(piv, f)
                pp = piv / g
                ff = f / g
                g = 0
                for j in range(c, ncols):
                    t = a[r * ncols + j] * pp - a[rk * ncols + j] * ff
                    row[j] = t
                    if t != 0:
                        g = gcd128(g, t)
                if g > 1:
                    for j in range(c, ncols):
                        row[j] = row[j] / g
                for j in range(c, ncols):
                    if not fits(row[j]):
                        overflow = True
                        break
                    a[r * ncols + j] = <int64_t>row[j]
                if overflow:
                    break
            if overflow:
                break
            rk += 1
    free(row)
    if overflow:
        return None
    return rk
