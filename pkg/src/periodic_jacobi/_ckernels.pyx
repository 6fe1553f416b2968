# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels (see ``_kernels_py`` for the contract)."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, fmax, fmin

cnp.import_array()

NAME = "cython"

cdef double _EPS = np.finfo(float).eps
cdef double _TINY = np.finfo(float).tiny

ctypedef fused scalar:
    double
    double complex


cdef Py_ssize_t _count(const double[::1] d, const double[::1] e2, Py_ssize_t n,
                       double x, double pivmin) nogil:
    cdef Py_ssize_t i, count = 0
    cdef double q = d[0] - x
    if fabs(q) < pivmin:
        q = -pivmin
    if q < 0:
        count += 1
    for i in range(1, n):
        q = d[i] - x - e2[i - 1] / q
        if fabs(q) < pivmin:
            q = -pivmin
        if q < 0:
            count += 1
    return count


def sturm_count(diag, off, double x):
    cdef const double[::1] d = np.ascontiguousarray(diag, dtype=float)
    e2a = np.ascontiguousarray(off, dtype=float) ** 2
    cdef double[::1] e2 = e2a
    cdef double pivmin = _TINY * max(1.0, float(e2a.max(initial=1.0)))
    return _count(d, e2, d.shape[0], x, pivmin)


def tridiag_eigvals(diag, off, double abstol):
    cdef const double[::1] d = np.ascontiguousarray(diag, dtype=float)
    cdef cnp.ndarray offa = np.ascontiguousarray(off, dtype=float)
    e2a = offa ** 2
    cdef double[::1] e2 = e2a
    cdef Py_ssize_t n = d.shape[0], i, k
    cdef double pivmin = _TINY * max(1.0, float(e2a.max(initial=1.0)))
    cdef double[::1] radii = np.zeros(n)
    for i in range(n - 1):
        radii[i] += fabs(offa[i])
        radii[i + 1] += fabs(offa[i])
    cdef double glo = d[0] - radii[0], ghi = d[0] + radii[0]
    for i in range(1, n):
        glo = fmin(glo, d[i] - radii[i])
        ghi = fmax(ghi, d[i] + radii[i])
    cdef double span = fmax(fmax(fabs(glo), fabs(ghi)), _TINY)
    glo -= 2 * _EPS * span + 2 * _TINY
    ghi += 2 * _EPS * span + 2 * _TINY
    out = np.empty(n)
    cdef double[::1] o = out
    cdef double lo, hi, mid, lo_prev = glo
    with nogil:
        for k in range(n):
            lo = lo_prev
            hi = ghi
            while True:
                mid = 0.5 * (lo + hi)
                if hi - lo <= abstol or mid <= lo or mid >= hi:
                    break
                if _count(d, e2, n, mid, pivmin) > k:
                    hi = mid
                else:
                    lo = mid
            o[k] = 0.5 * (lo + hi)
            lo_prev = lo
    return out


cdef void _table(const double[::1] alpha, Py_ssize_t n_max, scalar[::1] x,
                 bint star, bint deriv, scalar[:, ::1] v, scalar[:, ::1] dv) nogil:
    cdef Py_ssize_t m = x.shape[0], period = alpha.shape[0], i, n
    cdef scalar c
    for i in range(m):
        if star:
            v[0, i] = 0
            if n_max >= 1:
                v[1, i] = 2
        else:
            v[0, i] = 1
            if n_max >= 1:
                v[1, i] = 2 * x[i] - alpha[0]
                if deriv:
                    dv[1, i] = 2
        for n in range(1, n_max):
            c = 2 * x[i] - alpha[n % period]
            v[n + 1, i] = c * v[n, i] - v[n - 1, i]
            if deriv:
                dv[n + 1, i] = 2 * v[n, i] + c * dv[n, i] - dv[n - 1, i]


def recurrence_table(alpha, Py_ssize_t n_max, x, bint star, bint deriv):
    xa = np.asarray(x)
    shape = xa.shape
    dtype = complex if np.iscomplexobj(xa) else float
    flat = np.array(xa.ravel(), dtype=dtype)
    cdef const double[::1] al = np.ascontiguousarray(alpha, dtype=float)
    vals = np.zeros((n_max + 1, flat.shape[0]), dtype=dtype)
    ders = np.zeros_like(vals) if deriv else np.zeros((1, 1), dtype=dtype)
    cdef double[::1] xr
    cdef double[:, ::1] vr, dr
    cdef double complex[::1] xc
    cdef double complex[:, ::1] vc, dc
    if dtype is complex:
        xc, vc, dc = flat, vals, ders
        _table(al, n_max, xc, star, deriv, vc, dc)
    else:
        xr, vr, dr = flat, vals, ders
        _table(al, n_max, xr, star, deriv, vr, dr)
    vals = vals.reshape((n_max + 1,) + shape)
    if deriv:
        return vals, ders.reshape((n_max + 1,) + shape)
    return vals


def continued_fraction(alpha, z, Py_ssize_t depth):
    za = np.asarray(z, dtype=complex)
    shape = za.shape
    cdef double complex[::1] zz = np.array(za.ravel())
    cdef const double[::1] al = np.ascontiguousarray(alpha, dtype=float)
    cdef Py_ssize_t m = zz.shape[0], period = al.shape[0], i, n
    out = np.empty(m, dtype=complex)
    cdef double complex[::1] o = out
    cdef double complex tail, den
    cdef double floor = 1e3 * _TINY
    cdef bint ok = True
    with nogil:
        for i in range(m):
            tail = 0
            for n in range(depth - 1, -1, -1):
                den = 2 * zz[i] - al[n % period] - tail
                if fabs(den.real) + fabs(den.imag) < floor:
                    ok = False
                    den = floor
                tail = 1 / den
            o[i] = 2 * tail
    res = out.reshape(shape)
    if res.ndim == 0:
        res = res[()]
    return res, ok
