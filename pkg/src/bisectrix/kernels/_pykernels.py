"""Numpy implementations of the hot kernels (fallback for the Cython build)."""

import math

import numpy as np

KIND_FINITE = 0
KIND_ZERO = 1
KIND_INF = 2


def dual_value(a, b, c, d, x, y):
    if not y > b or not y > d:
        return math.nan
    return y * (math.hypot((x - a) / (y - b), 1.0) + math.hypot((x - c) / (y - d), 1.0))


def dual_objective(a, b, c, d, xs, ys):
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = ys * (np.hypot((xs - a) / (ys - b), 1.0) + np.hypot((xs - c) / (ys - d), 1.0))
    out[~((ys > b) & (ys > d))] = np.nan
    return out


def _combine(u, v, kind, p):
    if kind == KIND_ZERO:
        return math.sqrt(u * v)
    if kind == KIND_INF:
        return max(u, v)
    m = max(u, v) if p > 0 else min(u, v)
    return m * ((u / m) ** p + (v / m) ** p) ** (1.0 / p)


def segment_pair(ax, ay, bx, by, x, y):
    x1 = (ax * y - ay * x) / (y - ay)
    x2 = (bx * y - by * x) / (y - by)
    return math.hypot(x - x1, y), math.hypot(x - x2, y)


def lp_value(ax, ay, bx, by, x, y, kind, p):
    if not (y > ay and y > by):
        return math.nan
    u, v = segment_pair(ax, ay, bx, by, x, y)
    return _combine(u, v, kind, p)


def lp_objective(ax, ay, bx, by, xs, ys, kind, p):
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        u = np.hypot(xs - (ax * ys - ay * xs) / (ys - ay), ys)
        v = np.hypot(xs - (bx * ys - by * xs) / (ys - by), ys)
        if kind == KIND_ZERO:
            out = np.sqrt(u * v)
        elif kind == KIND_INF:
            out = np.maximum(u, v)
        else:
            m = np.maximum(u, v) if p > 0 else np.minimum(u, v)
            out = m * ((u / m) ** p + (v / m) ** p) ** (1.0 / p)
    out[~((ys > ay) & (ys > by))] = np.nan
    return out


def phi_values(a, b, c, d, ts):
    ts = np.asarray(ts, dtype=float)
    with np.errstate(invalid="ignore"):
        rb = np.sqrt(np.maximum(1.0 - (b / ts) ** 2, 0.0))
        rd = np.sqrt(1.0 - (d / ts) ** 2)
        num = (b * d - ts * ts) * (rb + rd) + b * d * (c - a) / ts
        out = num / (b * rd + d * rb)
    out[~(ts >= b)] = np.nan
    return out


def philo_lengths(vx, vy, w1x, w1y, w2x, w2y, dx, dy, thetas):
    """Length of the transversal through (dx, dy) with direction angle theta.

    The rays leave (vx, vy) along unit vectors w1, w2. Directions that do not
    produce a transversal with the point between the two hits give ``inf``.
    """
    th = np.asarray(thetas, dtype=float)
    ux, uy = np.cos(th), np.sin(th)
    px, py = dx - vx, dy - vy
    with np.errstate(divide="ignore", invalid="ignore"):
        s1 = -(w1x * py - w1y * px) / (w1x * uy - w1y * ux)
        s2 = -(w2x * py - w2y * px) / (w2x * uy - w2y * ux)
        out = s2 - s1
    ok = (s1 < 0) & (s2 > 0) & np.isfinite(out)
    out[~ok] = np.inf
    return out
