# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementation of the hot kernels.

Scalar C loops over the same accelerated series as the NumPy fallback.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport M_PI, fabs, fmod, log, sin

from ._coeffs import SERIES_COEFFS

BACKEND = "compiled"

cdef int _N_COEFFS = len(SERIES_COEFFS)
cdef double[30] _C
for _i, _c in enumerate(SERIES_COEFFS):
    _C[_i] = _c


cdef double _lob_scalar(double theta) nogil:
    cdef double phi = fmod(theta, M_PI)
    cdef double sign = 1.0
    cdef double r, acc, rk
    cdef int n
    if phi < 0.0:
        phi += M_PI
    if phi > 0.5 * M_PI:
        phi = M_PI - phi
        sign = -1.0
    if phi == 0.0:
        return 0.0
    r = (phi / M_PI) * (phi / M_PI)
    acc = 0.0
    rk = 1.0
    for n in range(_N_COEFFS):
        rk *= r
        acc += _C[n] * rk
    return sign * phi * (1.0 - log(2.0 * phi) + acc)


def lobachevsky(theta):
    """Lobachevsky function, elementwise on a float64 array."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] t = \
        np.ascontiguousarray(theta, dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty_like(t)
    cdef Py_ssize_t i, n = t.shape[0]
    for i in range(n):
        out[i] = _lob_scalar(t[i])
    return out.reshape(np.shape(theta))


def neg_log_2sin(theta):
    """-log|2 sin(theta)| elementwise; +inf where sin vanishes."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] t = \
        np.ascontiguousarray(theta, dtype=np.float64).ravel()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty_like(t)
    cdef Py_ssize_t i, n = t.shape[0]
    cdef double s, phi
    for i in range(n):
        phi = fmod(t[i], M_PI)
        if phi < 0.0:
            phi += M_PI
        # within rounding error of a zero of sin (the float pi included)
        if phi < 1e-15 or M_PI - phi < 1e-15:
            out[i] = float("inf")
            continue
        s = fabs(2.0 * sin(t[i]))
        out[i] = -log(s)
    return out.reshape(np.shape(theta))


def volume_half_sum(x):
    """0.5 * sum of Lobachevsky over a float64 array."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] t = \
        np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef double acc = 0.0
    cdef Py_ssize_t i, n = t.shape[0]
    for i in range(n):
        acc += _lob_scalar(t[i])
    return 0.5 * acc
