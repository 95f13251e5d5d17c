"""Shortest pair of cevian-like segments through two points above a line.

Given A(a, b) and B(c, d) above y = 0 (canonical frame: a < c, b >= d > 0),
an apex C1(x, y) with y > b sends rays through A and B that hit the line at
D1 and E1. The objective is

    f(x, y) = |C1 D1| + |C1 E1| = y * (hypot((x-a)/(y-b), 1) + hypot((x-c)/(y-d), 1)).

The minimum exists iff b == d or sigma = d - b + d(c-a)/sqrt(b^2-d^2) > 0.
When it exists the optimal triangle CDE has |AD| = |BE| = t0, where t0 is the
root of the locus ordinate ``phi``; otherwise f only approaches its infimum
at the corner (a, b).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import (
    ConsistencyError,
    ConvergenceError,
    DegenerateApex,
    DomainViolation,
    InvalidScene,
    IsoscelesDegenerate,
    NotApplicable,
    ParallelLines,
)
from .geometry import (
    X_AXIS,
    Line2,
    Point2,
    angle_bisector_foot,
    circum_area,
    intersect_lines,
    perp_foot,
)
from .numdiff import central_gradient
from .quartic import quartic_roots
from .roots import bisect_sign


@dataclass(frozen=True, slots=True)
class SceneDual:
    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        vals = (self.a, self.b, self.c, self.d)
        if not all(math.isfinite(v) for v in vals):
            raise InvalidScene(f"non-finite scene {vals}")
        if not self.a < self.c:
            raise InvalidScene("canonical frame needs a < c")
        if not self.b >= self.d:
            raise InvalidScene("canonical frame needs b >= d")
        if not self.d > 0:
            raise InvalidScene("both points must lie above y = 0")

    @property
    def A(self) -> Point2:
        return Point2(self.a, self.b)

    @property
    def B(self) -> Point2:
        return Point2(self.c, self.d)

    @property
    def diameter(self) -> float:
        """Largest distance among A, B and their feet on the line."""
        return max(math.hypot(self.c - self.a, self.b), math.hypot(self.c - self.a, self.b - self.d))

    @property
    def scale(self) -> float:
        return 1.0 + self.diameter

    def scaled(self, k: float) -> SceneDual:
        return SceneDual(k * self.a, k * self.b, k * self.c, k * self.d)


class Case(enum.Enum):
    MIN_EXISTS = "MinExists"
    INFIMUM_ONLY = "InfimumOnly"


@dataclass(frozen=True)
class Classification:
    sigma: float
    case: Case


@dataclass(frozen=True)
class OptimalityReport:
    """Scale-relative residuals of the stationarity conditions at an apex.

    ``cond1``: equal perpendiculars |K1L1| = |K2M1|.
    ``cond2``: |C1D1| + |C1E1| = |D1H|^2/|L1D1| + |E1H|^2/|M1E1|.
    ``coincidence``: distance of K1 and K2 from the bisector foot U.
    ``reduced`` is set when a base angle is right and one of K1, K2 is at
    infinity; ``cond1`` is then NaN and coincidence uses the finite point.
    """

    grad_norm: float
    cond1_residual: float
    cond2_residual: float
    coincidence: float
    fd_grad_error: float
    reduced: bool = False
    points: dict = field(default_factory=dict, compare=False)

    def worst(self) -> float:
        vals = [self.grad_norm, self.cond2_residual, self.coincidence]
        if not self.reduced:
            vals.append(self.cond1_residual)
        return max(vals)


@dataclass(frozen=True)
class TriangleConfig:
    C: Point2
    D: Point2
    E: Point2
    A: Point2
    B: Point2
    K: Point2
    L: Point2
    M: Point2
    A0: Point2
    B0: Point2
    C0: Point2
    P: Point2 | None = None
    Q: Point2 | None = None

    def named_points(self) -> dict[str, Point2]:
        out = {k: getattr(self, k) for k in ("C", "D", "E", "A", "B", "K", "L", "M", "A0", "B0", "C0")}
        if self.P is not None:
            out["P"] = self.P
        if self.Q is not None:
            out["Q"] = self.Q
        return out


@dataclass(frozen=True)
class MinimumFound:
    C: Point2
    D: Point2
    E: Point2
    value: float
    t0: float
    report: OptimalityReport
    config: TriangleConfig


@dataclass(frozen=True)
class InfimumOnly:
    limit_point: Point2
    infimum: float
    sigma: float


DualSolution = MinimumFound | InfimumOnly


def _check_domain(s: SceneDual, c1: Point2) -> None:
    if not c1.y > s.b:
        raise DomainViolation(f"apex ordinate {c1.y} must exceed b = {s.b}")


def ray_hits(s: SceneDual, c1: Point2) -> tuple[Point2, Point2]:
    """Points where the rays from ``c1`` through A and B meet y = 0."""
    _check_domain(s, c1)
    x, y = c1.x, c1.y
    x1 = (s.a * y - s.b * x) / (y - s.b)
    x2 = (s.c * y - s.d * x) / (y - s.d)
    return Point2(x1, 0.0), Point2(x2, 0.0)


def eval_objective(s: SceneDual, c1: Point2) -> float:
    _check_domain(s, c1)
    x, y = c1.x, c1.y
    return y * (math.hypot((x - s.a) / (y - s.b), 1.0) + math.hypot((x - s.c) / (y - s.d), 1.0))


def objective_batch(s: SceneDual, xs, ys) -> np.ndarray:
    """Vectorised f; NaN outside the domain y > b."""
    return kernels.dual_objective(s.a, s.b, s.c, s.d, xs, ys)


def grad_objective(s: SceneDual, c1: Point2) -> tuple[float, float]:
    _check_domain(s, c1)
    x, y = c1.x, c1.y
    u1, v1 = x - s.a, y - s.b
    u2, v2 = x - s.c, y - s.d
    r1, r2 = math.hypot(u1, v1), math.hypot(u2, v2)
    fx = y * (u1 / (v1 * r1) + u2 / (v2 * r2))
    fy = r1 / v1 + r2 / v2 - y * (u1 * u1 / (r1 * v1 * v1) + u2 * u2 / (r2 * v2 * v2))
    return fx, fy


def _term_hessian(x: float, y: float, px: float, py: float) -> tuple[float, float, float]:
    # second derivatives of y * hypot(x - px, y - py) / (y - py)
    u, v = x - px, y - py
    r2 = u * u + v * v
    r3 = r2 * math.sqrt(r2)
    hxx = y * v / r3
    hxy = -u * (py * (u * u + 2.0 * v * v) + v**3) / (v * v * r3)
    hyy = u * u * (py * (2.0 * u * u + 3.0 * v * v) + v**3) / (v**3 * r3)
    return hxx, hxy, hyy


def hessian(s: SceneDual, c1: Point2) -> tuple[float, float, float]:
    """Analytic ``(fxx, fxy, fyy)``."""
    _check_domain(s, c1)
    h1 = _term_hessian(c1.x, c1.y, s.a, s.b)
    h2 = _term_hessian(c1.x, c1.y, s.c, s.d)
    return h1[0] + h2[0], h1[1] + h2[1], h1[2] + h2[2]


@dataclass(frozen=True)
class HessianDiagnostics:
    fxx: float
    detH_f1: float
    detH_f: float


def hessian_diagnostics(s: SceneDual, c1: Point2) -> HessianDiagnostics:
    """Convexity in x, and the (negative) Hessian determinants.

    ``detH_f1`` uses the closed form -b^2 (x-a)^2 / ((y-b)^4 ((x-a)^2 + (y-b)^2))
    for the A-term alone; ``detH_f`` is the determinant of the full Hessian.
    """
    _check_domain(s, c1)
    fxx, fxy, fyy = hessian(s, c1)
    u, v = c1.x - s.a, c1.y - s.b
    det1 = -(s.b**2) * u * u / (v**4 * (u * u + v * v))
    return HessianDiagnostics(fxx=fxx, detH_f1=det1, detH_f=fxx * fyy - fxy * fxy)


def det_hessian_on_ab(s: SceneDual, lam: float) -> float:
    """Closed-form det Hess f at (lam+1)A - lam B (on line AB, beyond A)."""
    if not s.b > s.d:
        raise NotApplicable("closed form needs b > d")
    if not lam > 0:
        raise DomainViolation("lam must be positive")
    a, b, c, d = s.a, s.b, s.c, s.d
    num = ((lam + 1.0) ** 2 * b + d * lam * lam) ** 2 * (a - c) ** 2
    den = (b - d) ** 4 * lam**4 * ((a - c) ** 2 + (b - d) ** 2) * (lam + 1.0) ** 4
    return -num / den


def directional_limit(s: SceneDual, k1: float, k2: float) -> float:
    """lim_{t->0+} f(a + k1 t, b + k2 t)."""
    if not s.b > s.d:
        raise NotApplicable("the corner limit is infinite when b = d")
    if not k2 > 0:
        raise DomainViolation("k2 must be positive")
    return s.b * (math.sqrt((k1 * k1 + k2 * k2) / (k2 * k2)) + math.hypot(s.b - s.d, s.a - s.c) / (s.b - s.d))


def existence_sigma(s: SceneDual) -> float:
    if s.b == s.d:
        return math.inf
    return s.d - s.b + s.d * (s.c - s.a) / math.sqrt(s.b * s.b - s.d * s.d)


def classify_existence(s: SceneDual) -> Classification:
    sigma = existence_sigma(s)
    case = Case.MIN_EXISTS if (s.b == s.d or sigma > 0) else Case.INFIMUM_ONLY
    return Classification(sigma=sigma, case=case)


def infimum_value(s: SceneDual) -> float:
    if classify_existence(s).case is Case.MIN_EXISTS:
        raise NotApplicable("the minimum is attained; there is no corner infimum")
    return s.b * (1.0 + math.sqrt(1.0 + (s.a - s.c) ** 2 / (s.b - s.d) ** 2))


def phi_numerator(s: SceneDual, t: float) -> float:
    if not t >= s.b:
        raise DomainViolation(f"t = {t} below b = {s.b}")
    a, b, c, d = s.a, s.b, s.c, s.d
    rb = math.sqrt(max(1.0 - (b / t) ** 2, 0.0))
    rd = math.sqrt(1.0 - (d / t) ** 2)
    return (b * d - t * t) * (rb + rd) + b * d * (c - a) / t


def phi(s: SceneDual, t: float) -> float:
    """Ordinate of the crossing of L1K1 and M1K2 when |AD1| = |BE1| = t."""
    if not s.b > s.d:
        raise NotApplicable("phi is defined in the b > d frame")
    num = phi_numerator(s, t)
    b, d = s.b, s.d
    rb = math.sqrt(max(1.0 - (b / t) ** 2, 0.0))
    rd = math.sqrt(1.0 - (d / t) ** 2)
    return num / (b * rd + d * rb)


def solve_phi_root(s: SceneDual, max_iter: int = 200) -> float:
    """Unique root t0 > b of phi, by doubling then bisection."""
    if s.b == s.d:
        raise NotApplicable("b = d is solved by symmetry")
    sigma = existence_sigma(s)
    if not sigma > 0:
        raise NotApplicable(f"sigma = {sigma} <= 0: phi has no root above b")
    hi = 2.0 * s.b
    for _ in range(max_iter):
        if phi(s, hi) < 0:
            break
        hi *= 2.0
    else:
        raise ConvergenceError("could not bracket the root of phi")
    # sign at b is sigma's; evaluating phi exactly at t = b is avoided
    return bisect_sign(lambda t: phi(s, t), s.b, hi, sign_lo=1.0, max_iter=max_iter)


QUOTED_QUARTIC_ERRATA = (
    "The commonly quoted form of this quartic has coefficients "
    "x^3: 2bda - 2bc, x: -2ab^2d^2 + 2abd^3 + 2b^2cd - 2bcd^2 and constant terms "
    "-2ab^2cd + b^2c^2, each missing one factor of d (the polynomial is then "
    "not homogeneous). Eliminating the radicals from phi(t) = 0 with "
    "lam = sqrt(t^2 - d^2) gives "
    "(b^2-d^2) lam^4 - 2bd(c-a) lam^3 - 2d(b-d)(b^2-d^2) lam^2 "
    "+ 2bd^2(b-d)(c-a) lam + d^2(b-d)^2(b^2-d^2) + b^2d^2(c-a)^2 = 0, "
    "which agrees with the quoted form only when d = 1."
)


def quoted_quartic_coeffs(s: SceneDual) -> tuple[float, float, float, float, float]:
    a, b, c, d = s.a, s.b, s.c, s.d
    return (
        b * b - d * d,
        2 * b * d * a - 2 * b * c,
        -2 * b**3 * d + 2 * b * b * d * d + 2 * b * d**3 - 2 * d**4,
        -2 * a * b * b * d * d + 2 * a * b * d**3 + 2 * b * b * c * d - 2 * b * c * d * d,
        a * a * b * b * d * d + b**4 * d * d - 2 * b**3 * d**3 + 2 * b * d**5 - d**6
        - 2 * a * b * b * c * d + b * b * c * c,
    )


def derived_quartic_coeffs(s: SceneDual) -> tuple[float, float, float, float, float]:
    a, b, c, d = s.a, s.b, s.c, s.d
    k, e, dl = c - a, d * (b - d), b * b - d * d
    return (
        dl,
        -2.0 * b * d * k,
        -2.0 * dl * e,
        2.0 * b * d * k * e,
        dl * e * e + (b * d * k) ** 2,
    )


@dataclass(frozen=True)
class QuarticCheck:
    coeffs: tuple[float, ...]
    validated: bool
    derived: tuple[float, ...]
    derived_validated: bool
    lam: float | None
    t: float | None
    near_degenerate: bool
    errata: str | None


def _quartic_match(s: SceneDual, coeffs, tol: float) -> tuple[float, float] | None:
    if coeffs[0] == 0.0:
        return None
    best = None
    for lam in quartic_roots(*coeffs):
        t = math.sqrt(s.d * s.d + lam * lam)
        if t < s.b:
            continue
        r = abs(phi(s, t))
        if r < tol and (best is None or r < best[2]):
            best = (lam, t, r)
    return None if best is None else best[:2]


def dual_quartic(s: SceneDual, tol: float = 1e-8) -> QuarticCheck:
    """Quartic in lam with t0^2 = d^2 + lam^2, cross-validated against phi.

    ``coeffs``/``validated`` refer to the commonly quoted form; ``derived``
    comes from eliminating radicals. ``lam``/``t`` are taken from whichever
    set validates, preferring the quoted one.
    """
    if not s.b > s.d:
        raise NotApplicable("the quartic is stated for b > d")
    quoted = quoted_quartic_coeffs(s)
    derived = derived_quartic_coeffs(s)
    near = abs(derived[0]) < 1e-8 * max(abs(c) for c in derived)
    hit_p = _quartic_match(s, quoted, tol)
    hit_d = _quartic_match(s, derived, tol)
    hit = hit_p or hit_d
    return QuarticCheck(
        coeffs=quoted,
        validated=hit_p is not None,
        derived=derived,
        derived_validated=hit_d is not None,
        lam=None if hit is None else hit[0],
        t=None if hit is None else hit[1],
        near_degenerate=near,
        errata=None if hit_p is not None else QUOTED_QUARTIC_ERRATA,
    )


def apex_ordinate_closed_form(s: SceneDual, t: float) -> float:
    a, b, c, d = s.a, s.b, s.c, s.d
    sd, sb = math.sqrt(t * t - d * d), math.sqrt(t * t - b * b)
    return d * b * (sd * b - d * sb) * (sd + sb - a + c) / (t * t * (b * b - d * d))


def _configuration(s: SceneDual, C: Point2, D: Point2, E: Point2) -> TriangleConfig:
    A, B = s.A, s.B
    K = angle_bisector_foot(C, D, E)
    L = perp_foot(K, Line2(C, D))
    M = perp_foot(K, Line2(C, E))
    A0, B0, C0 = Point2(A.x, 0.0), Point2(B.x, 0.0), Point2(C.x, 0.0)
    P = Q = None
    if s.b != s.d:
        try:
            P = intersect_lines(Line2(A, B), X_AXIS)
            Q = intersect_lines(Line2(M, L), X_AXIS)
        except ParallelLines:
            P = Q = None
    return TriangleConfig(C=C, D=D, E=E, A=A, B=B, K=K, L=L, M=M, A0=A0, B0=B0, C0=C0, P=P, Q=Q)


def reconstruct(s: SceneDual, t0: float, check_tol: float = 1e-10) -> TriangleConfig:
    """Optimal triangle from the common offset t0 = |AD| = |BE|."""
    if not t0 > s.b:
        raise DomainViolation("t0 must exceed b")
    D = Point2(s.a - math.sqrt(t0 * t0 - s.b * s.b), 0.0)
    E = Point2(s.c + math.sqrt(t0 * t0 - s.d * s.d), 0.0)
    try:
        C = intersect_lines(Line2(D, s.A), Line2(E, s.B))
    except ParallelLines as exc:
        raise DegenerateApex("the rays DA and EB are parallel") from exc
    cfg = _configuration(s, C, D, E)
    sc = s.scale
    if abs(s.A.dist(C) - cfg.L.dist(D)) > check_tol * sc or abs(s.B.dist(C) - cfg.M.dist(E)) > check_tol * sc:
        raise ConsistencyError("|AC| = |LD| or |BC| = |ME| fails at the reconstructed apex")
    if s.b > s.d and (s.b - s.d) > 1e-6 * s.b:
        y0 = apex_ordinate_closed_form(s, t0)
        if abs(y0 - C.y) > 1e-8 * abs(C.y):
            raise ConsistencyError(f"apex ordinate {C.y} disagrees with closed form {y0}")
    return cfg


def candidate_config(s: SceneDual, c1: Point2) -> TriangleConfig:
    """Configuration for an arbitrary apex (not necessarily optimal)."""
    D1, E1 = ray_hits(s, c1)
    return _configuration(s, c1, D1, E1)


def _perp_to_base(foot: Point2, apex: Point2, base_pt: Point2) -> Point2 | None:
    # point on y=0 where the perpendicular to (apex, base_pt) at foot lands
    side = apex - base_pt
    normal = Point2(-side.y, side.x)
    try:
        return intersect_lines(Line2(foot, foot + normal), X_AXIS)
    except ParallelLines:
        return None


def verify_optimality(s: SceneDual, cfg: TriangleConfig) -> OptimalityReport:
    C, D, E = cfg.C, cfg.D, cfg.E
    sc = s.scale
    H = perp_foot(C, X_AXIS)
    ac, bc = s.A.dist(C), s.B.dist(C)
    L1 = D + (C - D).unit() * ac
    M1 = E + (C - E).unit() * bc
    K1 = _perp_to_base(L1, C, D)
    K2 = _perp_to_base(M1, C, E)
    U = angle_bisector_foot(C, D, E)
    reduced = K1 is None or K2 is None
    if reduced:
        cond1 = math.nan
    else:
        cond1 = abs(K1.dist(L1) - K2.dist(M1)) / sc
    rhs = D.dist(H) ** 2 / L1.dist(D) + E.dist(H) ** 2 / M1.dist(E)
    cond2 = abs(C.dist(D) + C.dist(E) - rhs) / sc
    gaps = [k.dist(U) for k in (K1, K2) if k is not None]
    coincidence = max(gaps) / sc
    fx, fy = grad_objective(s, C)
    h = 1e-6 * sc
    fdx, fdy = central_gradient(lambda x, y: eval_objective(s, Point2(x, y)), C.x, C.y, h)
    pts = {"H": H, "L1": L1, "M1": M1, "U": U}
    if K1 is not None:
        pts["K1"] = K1
    if K2 is not None:
        pts["K2"] = K2
    return OptimalityReport(
        grad_norm=math.hypot(fx, fy) / sc,
        cond1_residual=cond1,
        cond2_residual=cond2,
        coincidence=coincidence,
        fd_grad_error=math.hypot(fx - fdx, fy - fdy) / sc,
        reduced=reduced,
        points=pts,
    )


def _solve_symmetric(s: SceneDual) -> Point2:
    xm = 0.5 * (s.a + s.c)

    def fy(y):
        return grad_objective(s, Point2(xm, y))[1]

    w = s.c - s.a
    lo = s.b + 1e-3 * (s.b + w)
    while fy(lo) >= 0:
        lo = s.b + 0.5 * (lo - s.b)
        if lo - s.b < 1e-300:
            raise ConvergenceError("could not bracket the symmetric apex from below")
    hi = 2.0 * s.b + w
    while fy(hi) <= 0:
        hi = s.b + 2.0 * (hi - s.b)
    return Point2(xm, bisect_sign(fy, lo, hi))


def solve_dual(s: SceneDual) -> DualSolution:
    cls = classify_existence(s)
    if cls.case is Case.INFIMUM_ONLY:
        return InfimumOnly(limit_point=s.A, infimum=infimum_value(s), sigma=cls.sigma)
    if s.b == s.d:
        apex = _solve_symmetric(s)
        D1, _ = ray_hits(s, apex)
        t0 = s.A.dist(D1)
    else:
        t0 = solve_phi_root(s)
    cfg = reconstruct(s, t0)
    report = verify_optimality(s, cfg)
    value = cfg.C.dist(cfg.D) + cfg.C.dist(cfg.E)
    return MinimumFound(C=cfg.C, D=cfg.D, E=cfg.E, value=value, t0=t0, report=report, config=cfg)


@dataclass(frozen=True)
class IdentityResiduals:
    """Relative residuals |lhs - rhs| / (|lhs| + |rhs|) of six triangle identities.

    1. |PE| = |QD| = |DE| |DC0| / (|EC0| - |DC0|)
    2. |DE| = |A0B0| + area / R
    3. |AA0| / |BB0| = |CE| / |CD|
    4. |CA| + |CB| = |DE|^2 / (|CE| + |CD|)
    5. |PQ| = |DE|^3 / (|CE|^2 - |CD|^2)
    6. |CA| / |CB| = |DC0| / |EC0|

    Identities 1 and 5 need P and Q, so they are NaN for isosceles triangles.
    ``quoted_1`` is the residual of the frequently quoted variant
    |PE| = |DE|^2 / (|B0C0| - |A0C0|), which does not hold in general.
    """

    residuals: tuple[float, float, float, float, float, float]
    quoted_1: float

    def evaluated(self) -> list[float]:
        return [r for r in self.residuals if not math.isnan(r)]


def _rel(lhs: float, rhs: float) -> float:
    den = abs(lhs) + abs(rhs)
    return 0.0 if den == 0 else abs(lhs - rhs) / den


def triangle_identities(cfg: TriangleConfig) -> IdentityResiduals:
    C, D, E, A, B = cfg.C, cfg.D, cfg.E, cfg.A, cfg.B
    A0, B0, C0 = cfg.A0, cfg.B0, cfg.C0
    CD, CE, DE = C.dist(D), C.dist(E), D.dist(E)
    R, area = circum_area(C, D, E)
    r2 = _rel(DE, A0.dist(B0) + area / R)
    r3 = _rel(A.dist(A0) / B.dist(B0), CE / CD)
    r4 = _rel(C.dist(A) + C.dist(B), DE * DE / (CE + CD))
    r6 = _rel(C.dist(A) / C.dist(B), D.dist(C0) / E.dist(C0))
    if cfg.P is None or cfg.Q is None or CD == CE:
        r1 = r5 = quoted = math.nan
    else:
        P, Q = cfg.P, cfg.Q
        # orientation-free: the shorter side plays the role of CD
        if CD < CE:
            dd, ee, dc0, ec0 = D, E, D.dist(C0), E.dist(C0)
        else:
            dd, ee, dc0, ec0 = E, D, E.dist(C0), D.dist(C0)
        rhs1 = DE * dc0 / (ec0 - dc0)
        r1 = max(_rel(P.dist(ee), Q.dist(dd)), _rel(P.dist(ee), rhs1))
        quoted = _rel(P.dist(ee), DE * DE / abs(B0.dist(C0) - A0.dist(C0)))
        r5 = _rel(P.dist(Q), DE**3 / abs(CE * CE - CD * CD))
    return IdentityResiduals(residuals=(r1, r2, r3, r4, r5, r6), quoted_1=quoted)


def corner_bound_margin(cfg: TriangleConfig) -> float:
    """(|AA0| + |AP|) - (|CD| + |CE|) for the optimal triangle; positive at every optimum."""
    if cfg.P is None:
        raise IsoscelesDegenerate("AB is parallel to DE; P does not exist")
    C, D, E = cfg.C, cfg.D, cfg.E
    # the corner the domain can approach is the higher of A and B
    top, foot = (cfg.A, cfg.A0) if cfg.A.y >= cfg.B.y else (cfg.B, cfg.B0)
    return top.dist(foot) + top.dist(cfg.P) - (C.dist(D) + C.dist(E))
