"""Real roots of quartic polynomials by Ferrari's method with Newton polishing."""

from __future__ import annotations

import cmath
import math

from .errors import LeadingZero


def _cubic_roots(p2: float, p1: float, p0: float) -> list[complex]:
    """Roots of the monic cubic ``m^3 + p2 m^2 + p1 m + p0`` (Cardano)."""
    shift = p2 / 3.0
    p = p1 - p2 * p2 / 3.0
    q = 2.0 * p2**3 / 27.0 - p2 * p1 / 3.0 + p0
    if p == 0.0 and q == 0.0:
        return [complex(-shift)] * 3
    disc = cmath.sqrt(q * q / 4.0 + p**3 / 27.0)
    u3 = -q / 2.0 + disc
    if abs(u3) < abs(-q / 2.0 - disc):
        u3 = -q / 2.0 - disc
    u = u3 ** (1.0 / 3.0)
    omega = complex(-0.5, math.sqrt(3.0) / 2.0)
    roots = []
    for k in range(3):
        uk = u * omega**k
        roots.append(uk - p / (3.0 * uk) - shift)
    return roots


def _horner(coeffs: tuple[float, ...], x: float) -> tuple[float, float]:
    """Value and derivative of the polynomial with leading-first coefficients."""
    val, der = 0.0, 0.0
    for c in coeffs:
        der = der * x + val
        val = val * x + c
    return val, der


def _ferrari(b: float, c: float, d: float, e: float) -> list[complex]:
    """Complex roots of ``x^4 + b x^3 + c x^2 + d x + e``."""
    shift = b / 4.0
    p = c - 3.0 * b * b / 8.0
    q = d - b * c / 2.0 + b**3 / 8.0
    r = e - b * d / 4.0 + b * b * c / 16.0 - 3.0 * b**4 / 256.0
    scale = max(abs(p), math.sqrt(abs(r)), abs(q) ** (2.0 / 3.0), 1e-300)
    if abs(q) <= 1e-14 * scale**1.5:
        roots = []
        for z in (cmath.sqrt(p * p / 4.0 - r) - p / 2.0, -cmath.sqrt(p * p / 4.0 - r) - p / 2.0):
            w = cmath.sqrt(z)
            roots.extend([w - shift, -w - shift])
        return roots
    # resolvent: 8m^3 + 8p m^2 + (2p^2 - 8r) m - q^2 = 0; take the largest real root
    cands = _cubic_roots(p, p * p / 4.0 - r, -q * q / 8.0)
    m = max(cands, key=lambda z: z.real).real
    for _ in range(8):
        f = ((m + p) * m + (p * p / 4.0 - r)) * m - q * q / 8.0
        df = (3.0 * m + 2.0 * p) * m + (p * p / 4.0 - r)
        if df == 0.0:
            break
        step = f / df
        m -= step
        if abs(step) <= 1e-16 * abs(m):
            break
    if m <= 0.0:
        m = max(m, 1e-300)
    s = math.sqrt(2.0 * m)
    roots = []
    for sign in (1.0, -1.0):
        # y^2 - sign*s*y + (p/2 + m + sign*q/(2s)) = 0
        cst = p / 2.0 + m + sign * q / (2.0 * s)
        disc = cmath.sqrt(s * s - 4.0 * cst)
        roots.append((sign * s + disc) / 2.0 - shift)
        roots.append((sign * s - disc) / 2.0 - shift)
    return roots


def quartic_roots(c4: float, c3: float, c2: float, c1: float, c0: float) -> list[float]:
    """Sorted distinct real roots of ``c4 x^4 + c3 x^3 + c2 x^2 + c1 x + c0``.

    Each root is Newton-polished and accepted when ``|p(x)|`` is below
    ``1e-12 * sum |c_i| |x|^i`` (the rounding scale of evaluating p at x,
    which reduces to a multiple of max|c_i| for |x| <= 1). Roots closer than
    ``1e-10 * max(1, |x|)``, or separated only by values below that bound,
    are reported once.
    """
    if c4 == 0.0:
        raise LeadingZero("leading coefficient is zero; deflate first")
    coeffs = (c4, c3, c2, c1, c0)

    def bound(x):
        ax = abs(x)
        return 1e-12 * ((((abs(c4) * ax + abs(c3)) * ax + abs(c2)) * ax + abs(c1)) * ax + abs(c0))

    found = []
    for z in _ferrari(c3 / c4, c2 / c4, c1 / c4, c0 / c4):
        x = z.real
        val, der = _horner(coeffs, x)
        for _ in range(60):
            if der == 0.0:
                break
            nx = x - val / der
            nval, nder = _horner(coeffs, nx)
            if abs(nval) >= abs(val):
                break
            x, val, der = nx, nval, nder
        if abs(val) < bound(x):
            found.append((x, abs(val)))
    found.sort()
    out: list[tuple[float, float]] = []
    for x, res in found:
        if out:
            px, pres = out[-1]
            close = abs(x - px) <= 1e-10 * max(1.0, abs(x))
            if not close:
                mid = 0.5 * (x + px)
                close = abs(_horner(coeffs, mid)[0]) < bound(mid)
            if close:
                if res < pres:
                    out[-1] = (x, res)
                continue
        out.append((x, res))
    return [x for x, _ in out]
