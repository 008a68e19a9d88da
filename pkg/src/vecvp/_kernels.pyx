# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled cone kernels.

Loop order and accumulation order are identical to ``_kernels_py`` so the
two backends return bit-identical doubles (the extension is built with
``-ffp-contract=off``).
"""
import numpy as np

from libc.math cimport sqrt, INFINITY


def margins(const double[:, ::1] normals, const double[:, ::1] values):
    cdef Py_ssize_t n = values.shape[0]
    cdef Py_ssize_t nf = normals.shape[0]
    cdef Py_ssize_t m = normals.shape[1]
    cdef Py_ssize_t i, j, k
    cdef double s, best
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] res = out
    for i in range(n):
        best = INFINITY
        for j in range(nf):
            s = 0.0
            for k in range(m):
                s += normals[j, k] * values[i, k]
            if s < best:
                best = s
        res[i] = best
    return out


def distances(
    const double[:, ::1] normals,
    const double[:, :, ::1] projectors,
    const double[:, ::1] values,
    double feas_rel,
):
    cdef Py_ssize_t n = values.shape[0]
    cdef Py_ssize_t nf = normals.shape[0]
    cdef Py_ssize_t m = normals.shape[1]
    cdef Py_ssize_t nproj = projectors.shape[0]
    cdef Py_ssize_t i, q, j, k, l
    cdef double s, nrm, feas, best, d
    cdef bint ok
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] res = out
    r_buf = np.empty(m, dtype=np.float64)
    z_buf = np.empty(m, dtype=np.float64)
    cdef double[::1] r = r_buf
    cdef double[::1] z = z_buf
    for i in range(n):
        s = 0.0
        for k in range(m):
            s += values[i, k] * values[i, k]
        nrm = sqrt(s)
        feas = feas_rel * (1.0 + nrm)
        best = INFINITY
        for q in range(nproj):
            for k in range(m):
                s = 0.0
                for l in range(m):
                    s += projectors[q, k, l] * values[i, l]
                r[k] = s
                z[k] = values[i, k] - s
            ok = True
            for j in range(nf):
                s = 0.0
                for k in range(m):
                    s += normals[j, k] * z[k]
                if s < -feas:
                    ok = False
                    break
            if ok:
                s = 0.0
                for k in range(m):
                    s += r[k] * r[k]
                d = sqrt(s)
                if d < best:
                    best = d
        res[i] = best
    return out
