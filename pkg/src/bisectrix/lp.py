"""l_p variants of the two-segment objective.

The combined length of the two segments is ``(u^p + v^p)^(1/p)``; p = 1 is the
sum handled in :mod:`bisectrix.dual`, p -> 0 gives sqrt(u v) and p = inf the
max. For p = inf there is a closed-form optimum; for other p this module
offers a derivative-free search and a counterexample hunter built on the
cevian construction |DK| / |KE| = (|DC| / |CE|)^p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from . import kernels
from .dual import SceneDual, ray_hits
from .errors import DegenerateTriangle, DomainViolation, HypothesisViolation, NotFound, ParallelLines
from .geometry import (
    X_AXIS,
    Line2,
    Point2,
    canonicalize,
    cevian_foot,
    intersect_lines,
    perp_foot,
    triangle_area,
)


@dataclass(frozen=True)
class NormExponent:
    kind: int
    p: float = math.nan

    @classmethod
    def finite(cls, p: float) -> NormExponent:
        if p == 0 or not math.isfinite(p):
            raise ValueError("finite exponents must be non-zero and finite; use ZERO or INF")
        return cls(kernels.KIND_FINITE, float(p))

    @classmethod
    def parse(cls, raw) -> NormExponent:
        """Accept 0, ``"inf"``/``math.inf`` or any other real."""
        if isinstance(raw, str):
            low = raw.strip().lower()
            if low in ("inf", "infinity", "+inf"):
                return INF
            raw = float(low)
        if raw == 0:
            return ZERO
        if math.isinf(raw) and raw > 0:
            return INF
        return cls.finite(raw)

    def combine(self, u: float, v: float) -> float:
        if self.kind == kernels.KIND_ZERO:
            return math.sqrt(u * v)
        if self.kind == kernels.KIND_INF:
            return max(u, v)
        p = self.p
        m = max(u, v) if p > 0 else min(u, v)
        return m * ((u / m) ** p + (v / m) ** p) ** (1.0 / p)

    def to_json(self):
        if self.kind == kernels.KIND_ZERO:
            return 0
        if self.kind == kernels.KIND_INF:
            return "inf"
        return self.p

    def __str__(self) -> str:
        return str(self.to_json())


ZERO = NormExponent(kernels.KIND_ZERO)
INF = NormExponent(kernels.KIND_INF)
ONE = NormExponent(kernels.KIND_FINITE, 1.0)


def eval_lp(s: SceneDual, p: NormExponent, c1: Point2) -> float:
    D1, E1 = ray_hits(s, c1)
    return p.combine(c1.dist(D1), c1.dist(E1))


def lp_batch(s: SceneDual, p: NormExponent, xs, ys) -> np.ndarray:
    return kernels.lp_objective(s.a, s.b, s.c, s.d, xs, ys, p.kind, p.p)


# ---------------------------------------------------------------- l_inf


@dataclass(frozen=True)
class LinfMinimum:
    C: Point2
    value: float
    k0: float
    balance: float


@dataclass(frozen=True)
class LinfInfimum:
    infimum: float
    k0: float


def linf_k0(s: SceneDual) -> float:
    return ((s.b + s.d) / (s.c - s.a)) ** (1.0 / 3.0)


def solve_linf(s: SceneDual) -> LinfMinimum | LinfInfimum:
    """Closed-form minimiser of max(|C1D1|, |C1E1|).

    The optimal triangle is isosceles with tan of the base angles equal to
    k0 = ((b + d) / (c - a))^(1/3); it exists iff k0 > (b - d) / (c - a).
    ``balance`` is the measured gap between the two segment lengths.
    """
    a, b, c, d = s.a, s.b, s.c, s.d
    k0 = linf_k0(s)
    if not k0 > (b - d) / (c - a):
        return LinfInfimum(infimum=b * math.sqrt(((c - a) / (b - d)) ** 2 + 1.0), k0=k0)
    x = 0.5 * (a + c) - (b - d) / (2.0 * k0)
    y = 0.5 * (b + d) - k0 * (a - c) / 2.0
    C = Point2(x, y)
    D1, E1 = ray_hits(s, C)
    u, v = C.dist(D1), C.dist(E1)
    return LinfMinimum(C=C, value=max(u, v), k0=k0, balance=abs(u - v) / max(u, v))


@dataclass(frozen=True)
class LinfChallenge:
    min_margin_max: float
    margin_AP: float
    apex_gap: float
    C: Point2
    D: Point2
    E: Point2
    P: Point2


def _domain_samples(s: SceneDual, n: int, rng: np.random.Generator, centre: Point2) -> tuple[np.ndarray, np.ndarray]:
    """Mixture of broad, apex-local and corner-local points with y > b."""
    w = s.scale
    n1, n2 = n // 2, n // 4
    n3 = n - n1 - n2
    xs = np.concatenate(
        [
            rng.uniform(s.a - 4 * w, s.c + 4 * w, n1),
            centre.x + rng.normal(0.0, 0.05 * w, n2),
            s.a + rng.normal(0.0, 0.05 * w, n3),
        ]
    )
    ys = np.concatenate(
        [
            s.b + w * np.exp(rng.uniform(math.log(1e-4), math.log(8.0), n1)),
            centre.y + rng.normal(0.0, 0.05 * w, n2),
            s.b + w * np.exp(rng.uniform(math.log(1e-6), math.log(0.1), n3)),
        ]
    )
    keep = ys > s.b
    return xs[keep], ys[keep]


def linf_challenge_check(s: SceneDual, n_samples: int = 10_000, seed: int = 0) -> LinfChallenge:
    """Monte-Carlo check of the l_inf optimality of the isosceles triangle.

    Builds D, E from lines through A and B with slopes +-k0 and returns
    min over challengers of max(|C1D1|, |C1E1|) - |CD| and |AP| - |CD|.
    """
    if not s.b > s.d:
        raise HypothesisViolation("needs |AA0| > |BB0|, i.e. b > d")
    sol = solve_linf(s)
    if not isinstance(sol, LinfMinimum):
        raise HypothesisViolation("A and B do not lie on the sides of the isosceles triangle")
    k0 = sol.k0
    D = Point2(s.a - s.b / k0, 0.0)
    E = Point2(s.c + s.d / k0, 0.0)
    C = intersect_lines(Line2(D, s.A), Line2(E, s.B))
    P = intersect_lines(Line2(s.A, s.B), X_AXIS)
    cd = C.dist(D)
    rng = np.random.default_rng(seed)
    xs, ys = _domain_samples(s, n_samples, rng, C)
    vals = lp_batch(s, INF, xs, ys)
    far = np.hypot(xs - C.x, ys - C.y) > 1e-12 * s.scale
    return LinfChallenge(
        min_margin_max=float(np.min(vals[far]) - cd),
        margin_AP=s.A.dist(P) - cd,
        apex_gap=C.dist(sol.C),
        C=C,
        D=D,
        E=E,
        P=P,
    )


# ---------------------------------------------------------------- cevian scenes


@dataclass(frozen=True)
class CevianScene:
    C: Point2
    D: Point2
    E: Point2
    p: float
    A: Point2
    B: Point2
    K: Point2
    L: Point2
    M: Point2

    def segments_from(self, c1: Point2) -> tuple[float, float]:
        """|C1D1|, |C1E1| for the rays C1A, C1B against line DE (general position)."""
        base = Line2(self.D, self.E)
        out = []
        for q in (self.A, self.B):
            hit = intersect_lines(Line2(c1, q), base)
            # the hit must lie beyond q as seen from c1
            if (hit - c1).dot(q - c1) <= 0 or c1.dist(hit) < c1.dist(q):
                raise DomainViolation("ray from the challenger misses line DE")
            out.append(c1.dist(hit))
        return out[0], out[1]

    def objective(self, c1: Point2, p: NormExponent) -> float:
        return p.combine(*self.segments_from(c1))

    def apex_value(self, p: NormExponent) -> float:
        return p.combine(self.C.dist(self.D), self.C.dist(self.E))

    def to_dual(self) -> tuple[SceneDual, object]:
        return canonicalize(self.A, self.B, Line2(self.D, self.E), self.C)


def build_cevian_scene(C: Point2, D: Point2, E: Point2, p: float) -> CevianScene:
    """Cevian CK with |DK| / |KE| = (|DC| / |CE|)^p, feet L, M of K on CD, CE,
    and A, B with vector AC = DL and BC = EM."""
    triangle_area(C, D, E)
    ratio = (D.dist(C) / C.dist(E)) ** p
    K = cevian_foot(D, E, ratio)
    L = perp_foot(K, Line2(C, D))
    M = perp_foot(K, Line2(C, E))
    A = C - (L - D)
    B = C - (M - E)
    return CevianScene(C=C, D=D, E=E, p=float(p), A=A, B=B, K=K, L=L, M=M)


# ---------------------------------------------------------------- numeric search


@dataclass(frozen=True)
class MinimizeResult:
    best: Point2
    value: float
    boundary_flag: bool
    restarts: int


def numeric_minimize(s: SceneDual, p: NormExponent, starts: int = 32, seed: int = 0) -> MinimizeResult:
    """Multi-start Nelder-Mead over the open domain y > b + eps.

    The search runs in (x, log(y - b - eps)) so the corner at A stays
    reachable; ``boundary_flag`` marks a best point within 10 eps of y = b.
    """
    w = s.scale
    eps = 1e-9 * w
    base = s.b + eps

    def obj(z):
        y = base + math.exp(min(z[1], 700.0))
        if not y > s.b:
            return math.inf
        return kernels.lp_value(s.a, s.b, s.c, s.d, z[0], y, p.kind, p.p)

    def enc(x, y):
        return np.array([x, math.log(max(y - base, 1e-300))])

    rng = np.random.default_rng(seed)
    seeds = [
        enc(0.5 * (s.a + s.c), s.b + 0.5 * w),
        enc(s.a, s.b + 0.01 * w),
        enc(s.c, s.b + 0.01 * w),
    ]
    while len(seeds) < starts:
        x = rng.uniform(s.a - w, s.c + w)
        y = s.b + w * math.exp(rng.uniform(math.log(1e-3), math.log(5.0)))
        seeds.append(enc(x, y))
    seeds = seeds[:starts]

    opts = {"xatol": 1e-13, "fatol": 1e-15, "maxiter": 6000, "maxfev": 12000}
    results = []
    for i, z0 in enumerate(seeds):
        r = minimize(obj, z0, method="Nelder-Mead", options=opts)
        # restart once from the incumbent with a fresh simplex
        r2 = minimize(obj, r.x, method="Nelder-Mead", options=opts)
        best = r2 if r2.fun <= r.fun else r
        results.append((float(best.fun), i, best.x))
    results.sort(key=lambda item: (item[0], item[1]))
    val, _, z = results[0]
    y = base + math.exp(min(z[1], 700.0))
    return MinimizeResult(best=Point2(float(z[0]), y), value=val, boundary_flag=(y - s.b) < 10 * eps, restarts=starts)


# ---------------------------------------------------------------- counterexamples


@dataclass(frozen=True)
class Certificate:
    scene: CevianScene
    challenger: Point2
    g_at_C: float
    g_at_C1: float
    margin: float
    seed: int
    exponent: NormExponent
    trials: int
    probes: int

    def revalidate(self) -> float:
        """Margin recomputed from the stored points through the general-position path."""
        g_c = self.scene.apex_value(self.exponent)
        g_c1 = self.scene.objective(self.challenger, self.exponent)
        return g_c - g_c1


def sample_triangle(rng: np.random.Generator) -> tuple[Point2, Point2, Point2] | None:
    """Triangle on base D(0,0), E(1,0), acute at D and E, |CD|/|CE| log-uniform in [1e-3, 1]."""
    r = math.exp(rng.uniform(math.log(1e-3), 0.0))
    th = rng.uniform(0.01, math.pi / 2 - 0.01)
    k = 1.0 / (r * r) - 1.0
    if k < 1e-12:
        return None
    cs = math.cos(th)
    rho = (-cs + math.sqrt(cs * cs + k)) / k
    C = Point2(rho * cs, rho * math.sin(th))
    if not 0.0 < C.x < 1.0:
        return None
    return C, Point2(0.0, 0.0), Point2(1.0, 0.0)


_PROBE_EPS = 10.0 ** -np.arange(1, 9)
_PROBE_ANG = np.linspace(0.05, math.pi - 0.05, 8)


def find_counterexample(p_case: NormExponent, budget: int = 100_000, seed: int = 1) -> Certificate:
    """Search for a cevian scene where some C1 beats the apex C.

    Triangles are biased towards small |CD| and probes sit in shrinking
    half-discs above the higher of A and B (the corner the domain can reach).
    ``budget`` counts probe evaluations. Raises :class:`NotFound` when it runs out.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    if p_case.kind == kernels.KIND_INF:
        raise ValueError("the cevian construction needs a finite exponent or ZERO")
    rng = np.random.default_rng(seed)
    ex, ey = np.meshgrid(_PROBE_EPS, _PROBE_ANG, indexing="ij")
    dx, dy = (ex * np.cos(ey)).ravel(), (ex * np.sin(ey)).ravel()
    used = trials = 0
    best = -math.inf
    while used < budget:
        tri = sample_triangle(rng)
        if tri is None:
            continue
        trials += 1
        try:
            sc = build_cevian_scene(*tri, p_case.p if p_case.kind == kernels.KIND_FINITE else 0.0)
        except DegenerateTriangle:
            continue
        A, B = sc.A, sc.B
        if not (A.y > 0 and B.y > 0):
            continue
        top = A if A.y >= B.y else B
        xs, ys = top.x + dx, top.y + dy
        take = min(len(xs), budget - used)
        xs, ys = xs[:take], ys[:take]
        used += take
        vals = kernels.lp_objective(A.x, A.y, B.x, B.y, xs, ys, p_case.kind, p_case.p)
        g_c = sc.apex_value(p_case)
        margins = g_c - vals
        ok = np.isfinite(margins)
        if not ok.any():
            continue
        i = int(np.argmax(np.where(ok, margins, -np.inf)))
        best = max(best, float(margins[i]) / g_c)
        # relative guard against rounding-level "wins"
        if margins[i] > 1e-12 * g_c:
            c1 = Point2(float(xs[i]), float(ys[i]))
            try:
                g_c1 = sc.objective(c1, p_case)
            except (DomainViolation, ParallelLines):
                continue
            if not g_c - g_c1 > 0:
                continue
            return Certificate(
                scene=sc,
                challenger=c1,
                g_at_C=g_c,
                g_at_C1=g_c1,
                margin=g_c - g_c1,
                seed=seed,
                exponent=p_case,
                trials=trials,
                probes=used,
            )
    raise NotFound("budget exhausted without a counterexample", budget=budget, trials=trials, best_margin=best)
