# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels. Signatures mirror ``_pykernels``."""

import numpy as np

from libc.math cimport sqrt, hypot, pow, cos, sin, NAN, INFINITY, isfinite

DEF KIND_FINITE = 0
DEF KIND_ZERO = 1
DEF KIND_INF = 2


cdef inline double _dual(double a, double b, double c, double d, double x, double y) nogil:
    if not (y > b and y > d):
        return NAN
    return y * (hypot((x - a) / (y - b), 1.0) + hypot((x - c) / (y - d), 1.0))


cdef inline double _combine(double u, double v, int kind, double p) nogil:
    cdef double m
    if kind == KIND_ZERO:
        return sqrt(u * v)
    if kind == KIND_INF:
        return u if u > v else v
    # pow() is slow; the common exponents have exact shortcuts
    if p == 1.0:
        return u + v
    if p == 2.0:
        return hypot(u, v)
    if p > 0:
        m = u if u > v else v
    else:
        m = u if u < v else v
    return m * pow(pow(u / m, p) + pow(v / m, p), 1.0 / p)


cdef inline double _lp(double ax, double ay, double bx, double by,
                       double x, double y, int kind, double p) nogil:
    cdef double x1, x2
    if not (y > ay and y > by):
        return NAN
    x1 = (ax * y - ay * x) / (y - ay)
    x2 = (bx * y - by * x) / (y - by)
    return _combine(hypot(x - x1, y), hypot(x - x2, y), kind, p)


cpdef double dual_value(double a, double b, double c, double d, double x, double y):
    return _dual(a, b, c, d, x, y)


def dual_objective(double a, double b, double c, double d, xs, ys):
    cdef const double[::1] X = np.ascontiguousarray(xs, dtype=np.float64)
    cdef const double[::1] Y = np.ascontiguousarray(ys, dtype=np.float64)
    cdef Py_ssize_t i, n = X.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = _dual(a, b, c, d, X[i], Y[i])
    return out


def segment_pair(double ax, double ay, double bx, double by, double x, double y):
    cdef double x1 = (ax * y - ay * x) / (y - ay)
    cdef double x2 = (bx * y - by * x) / (y - by)
    return hypot(x - x1, y), hypot(x - x2, y)


cpdef double lp_value(double ax, double ay, double bx, double by,
                      double x, double y, int kind, double p):
    return _lp(ax, ay, bx, by, x, y, kind, p)


def lp_objective(double ax, double ay, double bx, double by, xs, ys, int kind, double p):
    cdef const double[::1] X = np.ascontiguousarray(xs, dtype=np.float64)
    cdef const double[::1] Y = np.ascontiguousarray(ys, dtype=np.float64)
    cdef Py_ssize_t i, n = X.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            o[i] = _lp(ax, ay, bx, by, X[i], Y[i], kind, p)
    return out


def phi_values(double a, double b, double c, double d, ts):
    cdef const double[::1] T = np.ascontiguousarray(ts, dtype=np.float64)
    cdef Py_ssize_t i, n = T.shape[0]
    cdef double t, rb, rd, q
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            t = T[i]
            if not (t >= b):
                o[i] = NAN
                continue
            q = 1.0 - (b / t) * (b / t)
            rb = sqrt(q) if q > 0 else 0.0
            rd = sqrt(1.0 - (d / t) * (d / t))
            o[i] = ((b * d - t * t) * (rb + rd) + b * d * (c - a) / t) / (b * rd + d * rb)
    return out


def philo_lengths(double vx, double vy, double w1x, double w1y, double w2x, double w2y,
                  double dx, double dy, thetas):
    cdef const double[::1] T = np.ascontiguousarray(thetas, dtype=np.float64)
    cdef Py_ssize_t i, n = T.shape[0]
    cdef double ux, uy, s1, s2, L
    cdef double px = dx - vx, py = dy - vy
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            ux = cos(T[i])
            uy = sin(T[i])
            s1 = -(w1x * py - w1y * px) / (w1x * uy - w1y * ux)
            s2 = -(w2x * py - w2y * px) / (w2x * uy - w2y * ux)
            L = s2 - s1
            if s1 < 0 and s2 > 0 and isfinite(L):
                o[i] = L
            else:
                o[i] = INFINITY
    return out
