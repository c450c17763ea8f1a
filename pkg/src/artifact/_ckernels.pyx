# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled angle-form kernels; same contract as _kernels_py."""

import numpy as np
cimport numpy as cnp
from libc.math cimport M_PI

cnp.import_array()


def arg_grad4(w1, w2, coeffs):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] a1 = np.ascontiguousarray(np.ravel(w1), dtype=complex)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] a2 = np.ascontiguousarray(
        np.broadcast_to(np.asarray(w2, dtype=complex), np.shape(w1)).ravel())
    cdef Py_ssize_t n = a1.shape[0], k
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.zeros((n, 4))
    cdef double ca = coeffs[0], cb = coeffs[1], cc = coeffs[2], cd = coeffs[3]
    cdef double x1, y1, x2, y2, re, im, r2, pr, pi_, s = 1.0 / (2.0 * M_PI)
    for k in range(n):
        x1 = a1[k].real; y1 = a1[k].imag; x2 = a2[k].real; y2 = a2[k].imag
        # term A: a = w1 - w2, da = (1, i, -1, -i); Im(da/a) with 1/a = conj(a)/|a|^2
        if ca != 0:
            re = x1 - x2; im = y1 - y2; r2 = re * re + im * im
            pr = ca * re / r2; pi_ = -ca * im / r2
            out[k, 0] += pi_; out[k, 1] += pr; out[k, 2] -= pi_; out[k, 3] -= pr
        # term B: a = conj(w1) - w2, da = (1, -i, -1, -i)
        if cb != 0:
            re = x1 - x2; im = -y1 - y2; r2 = re * re + im * im
            pr = cb * re / r2; pi_ = -cb * im / r2
            out[k, 0] += pi_; out[k, 1] -= pr; out[k, 2] -= pi_; out[k, 3] -= pr
        # term C: a = conj(w1) + w2, da = (1, -i, 1, i)
        if cc != 0:
            re = x1 + x2; im = -y1 + y2; r2 = re * re + im * im
            pr = cc * re / r2; pi_ = -cc * im / r2
            out[k, 0] += pi_; out[k, 1] -= pr; out[k, 2] += pi_; out[k, 3] += pr
        # term D: a = w1 + w2, da = (1, i, 1, i)
        if cd != 0:
            re = x1 + x2; im = y1 + y2; r2 = re * re + im * im
            pr = cd * re / r2; pi_ = -cd * im / r2
            out[k, 0] += pi_; out[k, 1] += pr; out[k, 2] += pi_; out[k, 3] += pr
        out[k, 0] *= s; out[k, 1] *= s; out[k, 2] *= s; out[k, 3] *= s
    return out.reshape(np.shape(w1) + (4,))


def eta_grad(w):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] a = np.ascontiguousarray(np.ravel(w), dtype=complex)
    cdef Py_ssize_t n = a.shape[0], k
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.empty((n, 2))
    cdef double x, y, r2
    for k in range(n):
        x = a[k].real; y = a[k].imag; r2 = (x * x + y * y) * 2.0 * M_PI
        out[k, 0] = -y / r2
        out[k, 1] = x / r2
    return out.reshape(np.shape(w) + (2,))
