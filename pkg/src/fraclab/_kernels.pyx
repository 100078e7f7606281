# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled lattice sums over half-space offset tables.

Offset tables ``w`` cover the half space of lattice offsets k:
  1-D: w[k] for k = 0..N-1 (w[0] ignored)
  2-D: w[k1, k2 + N - 1] for k1 = 0..N-1, k2 = -(N-1)..N-1, using only
       k1 > 0, or k1 == 0 and k2 > 0.
Each output node is owned by one thread and accumulated in a fixed offset
order, so results do not depend on the thread count.
"""

import numpy as np
cimport numpy as cnp
from cython.parallel cimport prange
from libc.math cimport fabs, pow

cnp.import_array()


def pair_sum_1d(const double[::1] f, const double[::1] w, int parity, int nthreads=1):
    """out[i] = sum_{k>0} w[k] (f[i+k] + parity f[i-k]), zero outside the box."""
    cdef Py_ssize_t N = f.shape[0]
    cdef Py_ssize_t i, k, kmax
    cdef double s, fp, fm
    cdef double par = parity
    out = np.zeros(N)
    cdef double[::1] o = out
    for i in prange(N, nogil=True, num_threads=nthreads, schedule="static"):
        s = 0.0
        kmax = N - 1 - i
        if i > kmax:
            kmax = i
        for k in range(1, kmax + 1):
            fp = 0.0
            fm = 0.0
            if i + k < N:
                fp = f[i + k]
            if i - k >= 0:
                fm = f[i - k]
            s = s + w[k] * (fp + par * fm)
        o[i] = s
    return out


def pair_sum_2d(const double[:, ::1] f, const double[:, ::1] w, int parity, int nthreads=1):
    """Two-dimensional analogue of :func:`pair_sum_1d`."""
    cdef Py_ssize_t N = f.shape[0]
    cdef Py_ssize_t c = N - 1
    cdef Py_ssize_t idx, i1, i2, k1, k2, lo, hi, plo, phi, mlo, mhi
    cdef double s
    cdef double par = parity
    cdef bint okp, okm
    out = np.zeros((N, N))
    cdef double[:, ::1] o = out
    for idx in prange(N * N, nogil=True, num_threads=nthreads, schedule="static"):
        i1 = idx // N
        i2 = idx - i1 * N
        s = 0.0
        for k1 in range(0, N):
            okp = i1 + k1 < N
            okm = i1 - k1 >= 0
            if not okp and not okm:
                break
            # k2 windows where f[i1+k1, i2+k2] resp. f[i1-k1, i2-k2] exist
            plo = -i2
            phi = N - 1 - i2
            mlo = i2 - N + 1
            mhi = i2
            if k1 == 0:
                plo = 1
                mlo = 1
            if not okp:
                plo = N
                phi = -N
            if not okm:
                mlo = N
                mhi = -N
            lo = plo if plo < mlo else mlo
            hi = phi if phi > mhi else mhi
            for k2 in range(lo, hi + 1):
                if k2 >= plo and k2 <= phi:
                    if k2 >= mlo and k2 <= mhi:
                        s = s + w[k1, k2 + c] * (f[i1 + k1, i2 + k2] + par * f[i1 - k1, i2 - k2])
                    else:
                        s = s + w[k1, k2 + c] * f[i1 + k1, i2 + k2]
                else:
                    s = s + w[k1, k2 + c] * (par * f[i1 - k1, i2 - k2])
        o[i1, i2] = s
    return out


def absdiff_sum_1d(const double[::1] f, const double[::1] w, double p, int nthreads=1):
    """out[i] = sum_{k != 0, i+k in box} w[|k|] |f[i+k] - f[i]|^p."""
    cdef Py_ssize_t N = f.shape[0]
    cdef Py_ssize_t i, k, kmax
    cdef double s, fi, d
    out = np.zeros(N)
    cdef double[::1] o = out
    for i in prange(N, nogil=True, num_threads=nthreads, schedule="static"):
        s = 0.0
        fi = f[i]
        kmax = N - 1 - i
        if i > kmax:
            kmax = i
        for k in range(1, kmax + 1):
            d = 0.0
            if i + k < N:
                d = _powabs(f[i + k] - fi, p)
            if i - k >= 0:
                d = d + _powabs(f[i - k] - fi, p)
            s = s + w[k] * d
        o[i] = s
    return out


def absdiff_sum_2d(const double[:, ::1] f, const double[:, ::1] w, double p, int nthreads=1):
    """Two-dimensional analogue of :func:`absdiff_sum_1d` (w even in k)."""
    cdef Py_ssize_t N = f.shape[0]
    cdef Py_ssize_t c = N - 1
    cdef Py_ssize_t idx, i1, i2, k1, k2, k2lo, k2max, a, b
    cdef double s, fi, d
    cdef bint okp, okm
    out = np.zeros((N, N))
    cdef double[:, ::1] o = out
    for idx in prange(N * N, nogil=True, num_threads=nthreads, schedule="static"):
        i1 = idx // N
        i2 = idx - i1 * N
        fi = f[i1, i2]
        s = 0.0
        k2max = N - 1 - i2
        if i2 > k2max:
            k2max = i2
        for k1 in range(0, N):
            okp = i1 + k1 < N
            okm = i1 - k1 >= 0
            if not okp and not okm:
                break
            if k1 == 0:
                k2lo = 1
            else:
                k2lo = -k2max
            for k2 in range(k2lo, k2max + 1):
                d = 0.0
                a = i2 + k2
                b = i2 - k2
                if okp and a >= 0 and a < N:
                    d = _powabs(f[i1 + k1, a] - fi, p)
                if okm and b >= 0 and b < N:
                    d = d + _powabs(f[i1 - k1, b] - fi, p)
                s = s + w[k1, k2 + c] * d
        o[i1, i2] = s
    return out


def absdiff_max_1d(const double[::1] f, const double[::1] w, int nthreads=1):
    """out[i] = max_{k != 0, i+k in box} w[|k|] |f[i+k] - f[i]|."""
    cdef Py_ssize_t N = f.shape[0]
    cdef Py_ssize_t i, k, kmax
    cdef double m, fi, d
    out = np.zeros(N)
    cdef double[::1] o = out
    for i in prange(N, nogil=True, num_threads=nthreads, schedule="static"):
        m = 0.0
        fi = f[i]
        kmax = N - 1 - i
        if i > kmax:
            kmax = i
        for k in range(1, kmax + 1):
            if i + k < N:
                d = w[k] * fabs(f[i + k] - fi)
                if d > m:
                    m = d
            if i - k >= 0:
                d = w[k] * fabs(f[i - k] - fi)
                if d > m:
                    m = d
        o[i] = m
    return out


def absdiff_max_2d(const double[:, ::1] f, const double[:, ::1] w, int nthreads=1):
    """Two-dimensional analogue of :func:`absdiff_max_1d`."""
    cdef Py_ssize_t N = f.shape[0]
    cdef Py_ssize_t c = N - 1
    cdef Py_ssize_t idx, i1, i2, k1, k2, k2lo, k2max, a, b
    cdef double m, fi, d
    cdef bint okp, okm
    out = np.zeros((N, N))
    cdef double[:, ::1] o = out
    for idx in prange(N * N, nogil=True, num_threads=nthreads, schedule="static"):
        i1 = idx // N
        i2 = idx - i1 * N
        fi = f[i1, i2]
        m = 0.0
        k2max = N - 1 - i2
        if i2 > k2max:
            k2max = i2
        for k1 in range(0, N):
            okp = i1 + k1 < N
            okm = i1 - k1 >= 0
            if not okp and not okm:
                break
            if k1 == 0:
                k2lo = 1
            else:
                k2lo = -k2max
            for k2 in range(k2lo, k2max + 1):
                a = i2 + k2
                b = i2 - k2
                if okp and a >= 0 and a < N:
                    d = w[k1, k2 + c] * fabs(f[i1 + k1, a] - fi)
                    if d > m:
                        m = d
                if okm and b >= 0 and b < N:
                    d = w[k1, k2 + c] * fabs(f[i1 - k1, b] - fi)
                    if d > m:
                        m = d
        o[i1, i2] = m
    return out


cdef inline double _powabs(double x, double p) nogil:
    if p == 1.0:
        return fabs(x)
    if p == 2.0:
        return x * x
    return pow(fabs(x), p)
