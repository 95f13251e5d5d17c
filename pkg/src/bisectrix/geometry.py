"""Planar primitives shared by the solvers.

Lines are carried by two points rather than implicit coefficients, so the
constructions read the same way as labelled diagrams: a line *through* D and
A, the foot of the perpendicular from K *onto* CD, and so on.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

from .errors import (
    CoincidentPoints,
    DegenerateTriangle,
    OppositeSides,
    ParallelLines,
    PointsOnLine,
    VerticalPair,
)

PARALLEL_REL = 1e-12
DEGENERATE_AREA_REL = 1e-14
DEFAULT_ABS_TOL = 1e-10


@dataclass(frozen=True, slots=True)
class Point2:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite coordinates ({self.x}, {self.y})")

    def __add__(self, other: Point2) -> Point2:
        return Point2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: Point2) -> Point2:
        return Point2(self.x - other.x, self.y - other.y)

    def __mul__(self, k: float) -> Point2:
        return Point2(self.x * k, self.y * k)

    __rmul__ = __mul__

    def __truediv__(self, k: float) -> Point2:
        return Point2(self.x / k, self.y / k)

    def __neg__(self) -> Point2:
        return Point2(-self.x, -self.y)

    def dot(self, other: Point2) -> float:
        return self.x * other.x + self.y * other.y

    def cross(self, other: Point2) -> float:
        return self.x * other.y - self.y * other.x

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def dist(self, other: Point2) -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def unit(self) -> Point2:
        n = self.norm()
        return Point2(self.x / n, self.y / n)

    def as_tuple(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass(frozen=True, slots=True)
class Line2:
    p: Point2
    q: Point2

    def __post_init__(self):
        if self.p.dist(self.q) <= 0.0:
            raise CoincidentPoints("a line needs two distinct points")

    @property
    def direction(self) -> Point2:
        return self.q - self.p

    def signed_side(self, pt: Point2) -> float:
        """Cross product of the carrier direction with ``pt - p`` (positive = left)."""
        return self.direction.cross(pt - self.p)

    def distance(self, pt: Point2) -> float:
        return abs(self.signed_side(pt)) / self.direction.norm()


X_AXIS = Line2(Point2(0.0, 0.0), Point2(1.0, 0.0))


@dataclass(frozen=True, slots=True)
class Tolerance:
    abs: float = DEFAULT_ABS_TOL
    rel: float = 1e-12

    def __post_init__(self):
        if not (self.abs > 0 and self.rel > 0):
            raise ValueError("tolerances must be positive")


def default_tolerance() -> Tolerance:
    """Default tolerance; ``BISECTRIX_TOL`` overrides the absolute part."""
    raw = os.environ.get("BISECTRIX_TOL")
    if raw is None:
        return Tolerance()
    return Tolerance(abs=float(raw))


@dataclass(frozen=True, slots=True)
class RigidMap:
    """``p -> R(rotation) @ S(p) + translation`` where S mirrors x when ``reflection``."""

    rotation: float = 0.0
    translation: Point2 = Point2(0.0, 0.0)
    reflection: bool = False

    def apply(self, p: Point2) -> Point2:
        x = -p.x if self.reflection else p.x
        cs, sn = math.cos(self.rotation), math.sin(self.rotation)
        return Point2(cs * x - sn * p.y + self.translation.x, sn * x + cs * p.y + self.translation.y)

    def inverse(self, p: Point2) -> Point2:
        v = p - self.translation
        cs, sn = math.cos(self.rotation), math.sin(self.rotation)
        x, y = cs * v.x + sn * v.y, -sn * v.x + cs * v.y
        return Point2(-x if self.reflection else x, y)

    @property
    def is_identity(self) -> bool:
        return self.rotation == 0.0 and not self.reflection and self.translation == Point2(0.0, 0.0)


def intersect_lines(l1: Line2, l2: Line2) -> Point2:
    d1, d2 = l1.direction, l2.direction
    den = d1.cross(d2)
    if abs(den) < PARALLEL_REL * d1.norm() * d2.norm():
        raise ParallelLines("lines are parallel within tolerance")
    s = (l2.p - l1.p).cross(d2) / den
    return l1.p + d1 * s


def perp_foot(p: Point2, line: Line2) -> Point2:
    d = line.direction
    s = (p - line.p).dot(d) / d.dot(d)
    return line.p + d * s


def triangle_area(a: Point2, b: Point2, c: Point2) -> float:
    """Unsigned area; raises on collinear input."""
    area = 0.5 * abs((b - a).cross(c - a))
    longest = max(a.dist(b), b.dist(c), c.dist(a))
    if area < DEGENERATE_AREA_REL * longest * longest:
        raise DegenerateTriangle("points are collinear within tolerance")
    return area


def cevian_foot(d: Point2, e: Point2, ratio: float) -> Point2:
    """Point K on segment de with |dK| / |Ke| = ratio."""
    return d + (e - d) * (ratio / (1.0 + ratio))


def angle_bisector_foot(c: Point2, d: Point2, e: Point2) -> Point2:
    """Foot on de of the internal bisector from c."""
    triangle_area(c, d, e)
    dc, ce = d.dist(c), c.dist(e)
    return d + (e - d) * (dc / (dc + ce))


def circum_area(a: Point2, b: Point2, c: Point2) -> tuple[float, float]:
    """Return ``(circumradius, area)``."""
    area = triangle_area(a, b, c)
    return a.dist(b) * b.dist(c) * c.dist(a) / (4.0 * area), area


def angle_at(vertex: Point2, p: Point2, q: Point2) -> float:
    """Unsigned angle at ``vertex`` between the rays towards p and q."""
    u, v = p - vertex, q - vertex
    return abs(math.atan2(u.cross(v), u.dot(v)))


def canonicalize(pA: Point2, pB: Point2, line: Line2, side_witness: Point2):
    """Move a scene so ``line`` becomes y=0 with both points above it.

    The higher image is labelled A, and the map mirrors x when needed so that
    A is left of B. Returns ``(SceneDual, RigidMap)``; compare
    ``map.apply(pA)`` with the scene's A to see whether labels were swapped.
    """
    from .dual import SceneDual

    if pA.dist(pB) == 0.0:
        raise CoincidentPoints("the two points coincide")
    scale = max(pA.dist(pB), line.distance(pA), line.distance(pB))
    sa, sb, sw = (line.signed_side(p) / line.direction.norm() for p in (pA, pB, side_witness))
    for s in (sa, sb, sw):
        if abs(s) <= 1e-14 * scale:
            raise PointsOnLine("a point lies on the line")
    if not (sa * sw > 0 and sb * sw > 0):
        raise OppositeSides("points are not on the witness side of the line")

    d = line.direction
    theta = -math.atan2(d.y, d.x)
    if sw < 0:
        theta += math.pi
    theta = math.atan2(math.sin(theta), math.cos(theta))
    shift = RigidMap(rotation=theta).apply(line.p)
    m = RigidMap(rotation=theta, translation=-shift)
    ia, ib = m.apply(pA), m.apply(pB)
    hi, lo = _order(ia, ib)
    if abs(hi.x - lo.x) <= 1e-14 * scale:
        raise VerticalPair("segment AB is perpendicular to the line")
    if hi.x > lo.x:
        # S(R p + t) == R(-theta) S p + S t
        m = RigidMap(
            rotation=-theta if theta != math.pi else theta,
            translation=Point2(-m.translation.x, m.translation.y),
            reflection=True,
        )
        hi, lo = _order(m.apply(pA), m.apply(pB))
    return SceneDual(hi.x, hi.y, lo.x, lo.y), m


def _order(p: Point2, q: Point2) -> tuple[Point2, Point2]:
    if p.y == q.y:
        return (p, q) if p.x < q.x else (q, p)
    return (p, q) if p.y > q.y else (q, p)
