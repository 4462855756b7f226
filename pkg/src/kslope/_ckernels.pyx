# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled per-node kernels; same contract as :mod:`kslope._pykernels`."""

import numpy as np
cimport numpy as cnp
from libc.math cimport log, exp, INFINITY, isfinite

cdef extern from "complex.h" nogil:
    double cabs(double complex)
    double complex conj(double complex)

cnp.import_array()


def weighted_log_norm(coeffs, logw, z, bint want_grad=False):
    cdef double complex[:, ::1] c = np.ascontiguousarray(coeffs, dtype=np.complex128)
    cdef double[::1] lw = np.ascontiguousarray(logw, dtype=np.float64)
    cdef double complex[::1] zz = np.ascontiguousarray(z, dtype=np.complex128).reshape(-1)
    cdef Py_ssize_t K = c.shape[0], L = c.shape[1], n = zz.shape[0]
    cdef Py_ssize_t i, k, j
    cdef double complex zi, v, dv, num
    cdef double shift, total, term, a, da
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] lse = out
    grad_arr = np.zeros(n, dtype=np.complex128) if want_grad else None
    cdef double complex[::1] grad
    if want_grad:
        grad = grad_arr
    if K == 0:
        out[:] = -np.inf
        return out, grad_arr

    vals_arr = np.empty(K, dtype=np.complex128)
    dvals_arr = np.empty(K, dtype=np.complex128)
    logabs_arr = np.empty(K, dtype=np.float64)
    cdef double complex[::1] vals = vals_arr
    cdef double complex[::1] dvals = dvals_arr
    cdef double[::1] logabs = logabs_arr

    with nogil:
        for i in range(n):
            zi = zz[i]
            shift = -INFINITY
            for k in range(K):
                v = c[k, L - 1]
                dv = 0
                for j in range(L - 2, -1, -1):
                    dv = dv * zi + v
                    v = v * zi + c[k, j]
                vals[k] = v
                dvals[k] = dv
                a = cabs(v)
                if a > 0:
                    logabs[k] = log(a)
                    term = 2.0 * lw[k] + 2.0 * logabs[k]
                    if term > shift:
                        shift = term
                else:
                    logabs[k] = -INFINITY
            if not isfinite(shift):
                lse[i] = -INFINITY
                continue
            total = 0.0
            for k in range(K):
                if isfinite(logabs[k]):
                    total += exp(2.0 * lw[k] + 2.0 * logabs[k] - shift)
            lse[i] = shift + log(total)
            if want_grad:
                num = 0
                for k in range(K):
                    da = cabs(dvals[k])
                    if da > 0 and isfinite(logabs[k]):
                        num = num + exp(2.0 * lw[k] + log(da) + logabs[k] - shift) * (
                            (dvals[k] / da) * conj(vals[k] / exp(logabs[k]))
                        )
                grad[i] = num / total
    return out, grad_arr
