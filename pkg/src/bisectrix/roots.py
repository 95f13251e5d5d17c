"""Bracketing scalar solvers: sign bisection and golden-section search."""

from __future__ import annotations

import math
from typing import Callable

from .errors import ConvergenceError

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def bisect_sign(
    func: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    sign_lo: float | None = None,
    rel_width: float = 0.0,
    max_iter: int = 200,
) -> float:
    """Root of ``func`` on ``[lo, hi]`` by bisection.

    With ``rel_width=0`` the loop runs until the midpoint is no longer strictly
    inside the bracket, then returns whichever endpoint has the smaller
    ``|func|``. ``sign_lo`` lets the caller supply a known sign at ``lo`` when
    evaluating there is ill-conditioned.
    """
    flo = func(lo) if sign_lo is None else sign_lo
    lo_known = sign_lo is None
    fhi = func(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise ConvergenceError(f"no sign change on [{lo}, {hi}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi or (hi - lo) <= rel_width * max(abs(lo), abs(hi)):
            break
        fm = func(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo, lo_known = mid, fm, True
        else:
            hi, fhi = mid, fm
    else:
        raise ConvergenceError("bisection hit its iteration cap")
    if not lo_known:
        return hi
    return lo if abs(flo) < abs(fhi) else hi


def golden_section(
    func: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    width: float = 1e-13,
    max_iter: int = 400,
) -> tuple[float, float]:
    """Shrink a bracket around the minimum of a unimodal ``func``.

    Returns the final ``(lo, hi)`` bracket. Function values are never taken at
    the endpoints, so open intervals with blow-up at the ends are fine.
    """
    x1 = hi - INV_PHI * (hi - lo)
    x2 = lo + INV_PHI * (hi - lo)
    f1, f2 = func(x1), func(x2)
    for _ in range(max_iter):
        if hi - lo <= width:
            return lo, hi
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - INV_PHI * (hi - lo)
            f1 = func(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + INV_PHI * (hi - lo)
            f2 = func(x2)
    return lo, hi
