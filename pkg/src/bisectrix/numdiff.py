"""Central finite differences for scalar functions of two variables."""

from __future__ import annotations

from typing import Callable

Func2 = Callable[[float, float], float]


def central_gradient(f: Func2, x: float, y: float, h: float) -> tuple[float, float]:
    fx = (f(x + h, y) - f(x - h, y)) / (2.0 * h)
    fy = (f(x, y + h) - f(x, y - h)) / (2.0 * h)
    return fx, fy


def central_hessian(f: Func2, x: float, y: float, h: float) -> tuple[float, float, float]:
    """Return ``(fxx, fxy, fyy)`` from the nine-point stencil."""
    f0 = f(x, y)
    fxx = (f(x + h, y) - 2.0 * f0 + f(x - h, y)) / (h * h)
    fyy = (f(x, y + h) - 2.0 * f0 + f(x, y - h)) / (h * h)
    fxy = (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h)) / (4.0 * h * h)
    return fxx, fxy, fyy
