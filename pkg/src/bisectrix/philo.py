"""Philo's line: the shortest segment through a point, cut off by an angle.

A transversal through D is parameterised by its direction angle theta. With
the rays leaving the vertex at angles w1 < w2 (counter-clockwise, opening
below pi), every theta in (w2, w1 + pi) gives a segment EF with E on the
first ray, F on the second and D between them; the length blows up at both
ends of that interval. The optimum is characterised by |ED| = |FG| where G
is the foot of the perpendicular from the vertex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConvergenceError, NoTransversal
from .geometry import Line2, Point2, perp_foot
from .roots import bisect_sign, golden_section


@dataclass(frozen=True)
class AngleScene:
    vertex: Point2
    dir1: Point2
    dir2: Point2
    interior: Point2

    def __post_init__(self):
        object.__setattr__(self, "dir1", self.dir1.unit())
        object.__setattr__(self, "dir2", self.dir2.unit())
        cr = self.dir1.cross(self.dir2)
        if abs(cr) < 1e-12:
            raise NoTransversal("the rays are collinear; the angle must lie strictly between 0 and pi")
        rel = self.interior - self.vertex
        # coordinates of D in the (dir1, dir2) basis
        alpha = rel.cross(self.dir2) / cr
        beta = self.dir1.cross(rel) / cr
        if not (alpha > 0 and beta > 0):
            raise NoTransversal("the point is not strictly inside the angle")

    @classmethod
    def from_angle(cls, angle: float, interior: Point2, vertex: Point2 = Point2(0.0, 0.0)) -> AngleScene:
        """Vertex at ``vertex``, first ray along +x, second at ``angle`` radians."""
        return cls(vertex, Point2(1.0, 0.0), Point2(math.cos(angle), math.sin(angle)), interior)

    @property
    def ccw(self) -> bool:
        return self.dir1.cross(self.dir2) > 0

    def _rays(self) -> tuple[Point2, Point2]:
        return (self.dir1, self.dir2) if self.ccw else (self.dir2, self.dir1)

    def theta_interval(self) -> tuple[float, float]:
        r1, r2 = self._rays()
        w1 = math.atan2(r1.y, r1.x)
        w2 = math.atan2(r2.y, r2.x)
        if w2 <= w1:
            w2 += 2.0 * math.pi
        return w2, w1 + math.pi

    def scaled(self, k: float) -> AngleScene:
        return AngleScene(self.vertex * k, self.dir1, self.dir2, self.interior * k)

    def _offsets(self, theta: float) -> tuple[float, float, Point2]:
        r1, r2 = self._rays()
        u = Point2(math.cos(theta), math.sin(theta))
        rel = self.interior - self.vertex
        s1 = -r1.cross(rel) / r1.cross(u)
        s2 = -r2.cross(rel) / r2.cross(u)
        return s1, s2, u

    def endpoints(self, theta: float) -> tuple[Point2, Point2]:
        """(E, F) with E on ``dir1`` and F on ``dir2``."""
        s1, s2, u = self._offsets(theta)
        p1, p2 = self.interior + u * s1, self.interior + u * s2
        return (p1, p2) if self.ccw else (p2, p1)

    def length(self, theta: float) -> float:
        s1, s2, _ = self._offsets(theta)
        if not (s1 < 0 < s2):
            return math.inf
        return s2 - s1

    def length_slope(self, theta: float) -> float:
        """d length / d theta."""
        r1, r2 = self._rays()
        u = Point2(math.cos(theta), math.sin(theta))
        du = Point2(-u.y, u.x)
        rel = self.interior - self.vertex
        out = 0.0
        for sign, w in ((-1.0, r1), (1.0, r2)):
            cu = w.cross(u)
            out += sign * w.cross(rel) * w.cross(du) / (cu * cu)
        return out

    def lengths(self, thetas) -> np.ndarray:
        r1, r2 = self._rays()
        v, d = self.vertex, self.interior
        return kernels.philo_lengths(v.x, v.y, r1.x, r1.y, r2.x, r2.y, d.x, d.y, thetas)


@dataclass(frozen=True)
class PhiloSolution:
    E: Point2
    F: Point2
    G: Point2
    length: float
    theta: float
    residual: float


def _characterization_gap(s: AngleScene, theta: float) -> float:
    # signed along EF: unsigned |ED| = |FG| also holds at a spurious line
    # where G falls outside the segment
    E, F = s.endpoints(theta)
    G = perp_foot(s.vertex, Line2(E, F))
    u = (F - E).unit()
    return (s.interior - E).dot(u) - (F - G).dot(u)


def _solution_at(s: AngleScene, theta: float) -> PhiloSolution:
    E, F = s.endpoints(theta)
    G = perp_foot(s.vertex, Line2(E, F))
    return PhiloSolution(
        E=E,
        F=F,
        G=G,
        length=E.dist(F),
        theta=theta,
        residual=abs(E.dist(s.interior) - F.dist(G)),
    )


def philo_solve(s: AngleScene) -> PhiloSolution:
    """Shortest transversal through the interior point.

    Golden-section search narrows the minimiser of |EF|(theta) down to the
    width where length comparisons stop being informative; the bracket is
    then finished by bisection on the sign of the analytic slope.
    """
    lo, hi = s.theta_interval()
    pad = 1e-12 * (hi - lo)
    glo, ghi = golden_section(s.length, lo + pad, hi - pad, width=1e-7 * (hi - lo))
    slo, shi = s.length_slope(glo), s.length_slope(ghi)
    if slo < 0 < shi:
        theta = bisect_sign(s.length_slope, glo, ghi)
    else:
        theta = 0.5 * (glo + ghi)
    return _solution_at(s, theta)


def philo_by_characterization(s: AngleScene) -> PhiloSolution:
    """Independent path: root of |ED| - |FG| over the whole transversal interval."""
    lo, hi = s.theta_interval()
    span = hi - lo
    a, b = lo + 1e-9 * span, hi - 1e-9 * span
    ga, gb = _characterization_gap(s, a), _characterization_gap(s, b)
    shrink = 1e-9
    while (ga > 0) == (gb > 0):
        shrink *= 1e-2
        if shrink < 1e-15:
            raise ConvergenceError("|ED| - |FG| has no sign change on the transversal interval")
        a, b = lo + shrink * span, hi - shrink * span
        ga, gb = _characterization_gap(s, a), _characterization_gap(s, b)
    theta = bisect_sign(lambda t: _characterization_gap(s, t), a, b)
    return _solution_at(s, theta)


def philo_right_angle(p: float, q: float) -> tuple[float, Point2, Point2]:
    """Closed form for the axis-aligned right angle and D = (p, q)."""
    if not (p > 0 and q > 0):
        raise NoTransversal("the point must lie in the open first quadrant")
    tan = (q / p) ** (1.0 / 3.0)
    E = Point2(p + q / tan, 0.0)
    F = Point2(0.0, q + p * tan)
    return (p ** (2.0 / 3.0) + q ** (2.0 / 3.0)) ** 1.5, E, F


@dataclass(frozen=True)
class TransversalCheck:
    min_excess: float
    placement_residual: float
    samples: int


def transversal_check(s: AngleScene, sol: PhiloSolution, n: int = 10_000, seed: int = 0) -> TransversalCheck:
    """Check that D and G sit symmetrically about the midpoint of EF and that
    ``n`` random other transversals through D are all longer."""
    mid = (sol.E + sol.F) * 0.5
    placement = abs(mid.dist(s.interior) - mid.dist(sol.G)) / sol.length
    lo, hi = s.theta_interval()
    rng = np.random.default_rng(seed)
    thetas = rng.uniform(lo, hi, n)
    thetas = thetas[thetas != sol.theta]
    lens = s.lengths(thetas)
    return TransversalCheck(min_excess=float(np.min(lens) - sol.length), placement_residual=placement, samples=len(thetas))


def scan_minimum(s: AngleScene, n: int = 1_000_000) -> tuple[float, float]:
    """Brute-force ``(theta, length)`` on a uniform grid (an oracle, not a solver)."""
    lo, hi = s.theta_interval()
    thetas = np.linspace(lo, hi, n + 2)[1:-1]
    lens = s.lengths(thetas)
    i = int(np.argmin(lens))
    return float(thetas[i]), float(lens[i])


@dataclass(frozen=True)
class IncenterScenario:
    vertices: dict
    incenter: Point2
    solutions: dict
    shortest: str


def incenter_345() -> IncenterScenario:
    """Philo lines through the incenter of the 3-4-5 right triangle, one per angle."""
    O, X, Y = Point2(0.0, 0.0), Point2(4.0, 0.0), Point2(0.0, 3.0)
    inc = Point2(1.0, 1.0)
    verts = {"O": O, "X": X, "Y": Y}
    sols = {}
    for name, v, p, q in (("O", O, X, Y), ("X", X, Y, O), ("Y", Y, O, X)):
        scene = AngleScene(v, p - v, q - v, inc)
        sols[name] = philo_solve(scene)
    shortest = min(sols, key=lambda k: sols[k].length)
    return IncenterScenario(vertices=verts, incenter=inc, solutions=sols, shortest=shortest)
