# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: labeling-sum enumeration and cyclic Jacobi sweeps.

Contracts match the numpy fallbacks in ``_kernels_py``.
"""

from libc.stdlib cimport free, malloc
from libc.math cimport sqrt, fabs

import numpy as np

IS_COMPILED = True


def labelsum_range(int q, coeffs, values, offsets, long long start, long long stop):
    """Sum of per-vertex entry products over labelings in ``[start, stop)``."""
    cdef long long[:, ::1] cf = np.ascontiguousarray(coeffs, dtype=np.int64)
    cdef double complex[::1] vals = np.ascontiguousarray(values, dtype=np.complex128)
    cdef long long[::1] offs = np.ascontiguousarray(offsets, dtype=np.int64)
    cdef Py_ssize_t n_vertices = cf.shape[0]
    cdef Py_ssize_t n_edges = cf.shape[1]
    cdef double complex acc
    with nogil:
        acc = _labelsum(q, n_vertices, n_edges, cf, vals, offs, start, stop)
    return complex(acc)


cdef double complex _labelsum(
    int q,
    Py_ssize_t n_vertices,
    Py_ssize_t n_edges,
    long long[:, ::1] cf,
    double complex[::1] vals,
    long long[::1] offs,
    long long start,
    long long stop,
) nogil:
    cdef double complex acc = 0
    cdef double complex prod
    cdef long long lab, rem
    cdef Py_ssize_t v, e
    cdef int *digits
    cdef long long *idx
    if stop <= start:
        return acc
    digits = <int *> malloc(n_edges * sizeof(int))
    idx = <long long *> malloc(n_vertices * sizeof(long long))
    if (digits == NULL and n_edges > 0) or idx == NULL:
        if digits != NULL:
            free(digits)
        if idx != NULL:
            free(idx)
        return acc
    # seed the odometer at `start` (edge n_edges-1 is the least significant digit)
    rem = start
    for e in range(n_edges - 1, -1, -1):
        digits[e] = <int> (rem % q)
        rem //= q
    for v in range(n_vertices):
        idx[v] = offs[v]
        for e in range(n_edges):
            idx[v] += cf[v, e] * digits[e]

    lab = start
    while True:
        prod = 1
        for v in range(n_vertices):
            prod *= vals[idx[v]]
        acc += prod
        lab += 1
        if lab >= stop:
            break
        e = n_edges - 1
        while True:
            digits[e] += 1
            if digits[e] < q:
                for v in range(n_vertices):
                    idx[v] += cf[v, e]
                break
            digits[e] = 0
            for v in range(n_vertices):
                idx[v] -= cf[v, e] * (q - 1)
            e -= 1
    free(digits)
    free(idx)
    return acc


def jacobi_diagonalize(h, double rel_tol=1e-14, int max_sweeps=100):
    """In-place cyclic Jacobi on a Hermitian matrix; returns the off/total ratio."""
    cdef double complex[:, ::1] m = h
    cdef Py_ssize_t n = m.shape[0]
    cdef double total, off, skip, ratio
    if n <= 1:
        return 0.0
    total = _fro_norm(m, n)
    if total == 0.0:
        return 0.0
    skip = 0.1 * rel_tol * total / n
    with nogil:
        ratio = _jacobi(m, n, rel_tol, max_sweeps, total, skip)
    return ratio


cdef double _fro_norm(double complex[:, ::1] m, Py_ssize_t n):
    cdef double acc = 0.0
    cdef Py_ssize_t i, j
    cdef double complex z
    for i in range(n):
        for j in range(n):
            z = m[i, j]
            acc += z.real * z.real + z.imag * z.imag
    return sqrt(acc)


cdef double _offdiag(double complex[:, ::1] m, Py_ssize_t n) nogil:
    cdef double acc = 0.0
    cdef Py_ssize_t i, j
    cdef double complex z
    for i in range(n):
        for j in range(n):
            if i != j:
                z = m[i, j]
                acc += z.real * z.real + z.imag * z.imag
    return sqrt(acc)


cdef double _jacobi(
    double complex[:, ::1] m,
    Py_ssize_t n,
    double rel_tol,
    int max_sweeps,
    double total,
    double skip,
) nogil:
    cdef int sweep
    cdef Py_ssize_t p, s, k
    cdef double off, mag, app, ass, tau, t, c, sn
    cdef double complex apq, phase, cp, cs
    for sweep in range(max_sweeps):
        off = _offdiag(m, n)
        if off <= rel_tol * total:
            return off / total
        for p in range(n - 1):
            for s in range(p + 1, n):
                apq = m[p, s]
                mag = sqrt(apq.real * apq.real + apq.imag * apq.imag)
                if mag <= skip:
                    continue
                phase = apq / mag
                app = m[p, p].real
                ass = m[s, s].real
                tau = (ass - app) / (2.0 * mag)
                if fabs(tau) > 1e12:
                    t = 1.0 / (2.0 * tau)
                else:
                    t = (1.0 if tau >= 0.0 else -1.0) / (fabs(tau) + sqrt(1.0 + tau * tau))
                c = 1.0 / sqrt(1.0 + t * t)
                sn = t * c
                for k in range(n):
                    cp = m[k, p]
                    cs = m[k, s]
                    m[k, p] = c * cp - sn * phase.conjugate() * cs
                    m[k, s] = sn * cp + c * phase.conjugate() * cs
                for k in range(n):
                    cp = m[p, k]
                    cs = m[s, k]
                    m[p, k] = c * cp - sn * phase * cs
                    m[s, k] = sn * cp + c * phase * cs
                m[p, s] = 0
                m[s, p] = 0
                m[p, p] = m[p, p].real
                m[s, s] = m[s, s].real
    return _offdiag(m, n) / total
