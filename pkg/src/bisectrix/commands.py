"""Command handlers shared by the CLI, the renderer and report revalidation.

Each handler takes a validated :class:`SceneFile` and returns a
:class:`Outcome`: the JSON result payload, an optional geometry payload
(named points plus drawing hints for the SVG renderer) and the seed used.
Domain outcomes that the caller asked for but cannot have (an infimum where
a minimum was requested, an exhausted search) are raised as
:class:`DomainOutcome` so they map to exit code 1 with a structured body.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import dual, lp, philo
from .errors import BisectrixError, IsoscelesDegenerate, NotFound
from .geometry import Line2, Point2, Tolerance, X_AXIS, intersect_lines
from .scenefile import SCHEMA_VERSION, SceneFile

COMMANDS = (
    "classify",
    "solve-dual",
    "solve-linf",
    "solve-lp",
    "philo",
    "problem4",
    "counterexample",
    "verify-identities",
)

# which scene kinds each command accepts
ACCEPTS = {
    "classify": ("dual",),
    "solve-dual": ("dual",),
    "solve-linf": ("dual",),
    "solve-lp": ("dual",),
    "philo": ("angle", "scenario"),
    "problem4": ("angle",),
    "counterexample": ("search",),
    "verify-identities": ("dual", "triangle"),
}

RANDOMIZED = ("solve-lp", "problem4", "counterexample")


class DomainOutcome(BisectrixError):
    """A well-formed request whose answer is a structured refusal."""

    def __init__(self, code: str, message: str, payload: dict | None = None, geometry: dict | None = None):
        super().__init__(message)
        self.code = code
        self.payload = payload or {}
        self.geometry = geometry


@dataclass
class Outcome:
    result: dict
    geometry: dict | None = None
    seed: int | None = None


def num(x: float):
    """JSON-safe float: non-finite values become strings, NaN becomes null."""
    if x is None:
        return None
    x = float(x)
    if math.isnan(x):
        return None
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def pt(p: Point2 | None):
    return None if p is None else [num(p.x), num(p.y)]


def geometry(points: dict, *, baseline=None, segments=(), right_angles=(), corner=None) -> dict:
    """Drawing payload: ``right_angles`` entries are (vertex, toward1, toward2)."""
    names = set(points)
    for group in (segments, right_angles, [baseline] if baseline else []):
        for item in group:
            missing = [n for n in item if n not in names]
            if missing:
                raise AssertionError(f"geometry refers to unknown points {missing}")
    return {
        "points": {k: pt(v) for k, v in points.items()},
        "baseline": list(baseline) if baseline else None,
        "segments": [list(s) for s in segments],
        "right_angles": [list(r) for r in right_angles],
        "corner": corner,
    }


def _require_seed(scene: SceneFile) -> int:
    seed = scene.get("seed")
    if seed is None:
        raise DomainOutcome("MISSING_SEED", "randomized commands need an explicit seed")
    return seed


# ---------------------------------------------------------------- dual family


def _corner_geometry(s: dual.SceneDual, corner: bool) -> dict:
    pts = {"A": s.A, "B": s.B, "A0": Point2(s.a, 0.0), "B0": Point2(s.c, 0.0)}
    segs = [("A", "A0"), ("B", "B0"), ("A", "B")]
    base = ("A0", "B0")
    if s.b != s.d:
        pts["P"] = intersect_lines(Line2(s.A, s.B), X_AXIS)
        segs.append(("B", "P"))
        base = ("A0", "P")
    return geometry(
        pts,
        baseline=base,
        segments=segs,
        right_angles=[("A0", "A", "B0"), ("B0", "B", "A0")],
        corner="A" if corner else None,
    )


def _config_geometry(cfg: dual.TriangleConfig, extra: dict) -> dict:
    pts = dict(cfg.named_points())
    scale = 1.0 + max(p.norm() for p in pts.values())
    # auxiliary points only when they add something to the picture
    for name, p in extra.items():
        if all(p.dist(q) > 1e-9 * scale for q in pts.values()):
            pts[name] = p
    segs = [("C", "D"), ("C", "E"), ("C", "K"), ("K", "L"), ("K", "M"), ("A", "A0"), ("B", "B0"), ("C", "C0")]
    if "P" in pts:
        segs += [("A", "P"), ("D", "P")]
    if "Q" in pts:
        segs += [("L", "Q"), ("D", "Q")]
    rights = [("L", "C", "K"), ("M", "C", "K"), ("A0", "A", "E"), ("B0", "B", "E"), ("C0", "C", "E")]
    return geometry(pts, baseline=("D", "E"), segments=segs, right_angles=rights)


def _report_json(r: dual.OptimalityReport) -> dict:
    return {
        "grad_norm": num(r.grad_norm),
        "cond1_residual": num(r.cond1_residual),
        "cond2_residual": num(r.cond2_residual),
        "coincidence": num(r.coincidence),
        "fd_grad_error": num(r.fd_grad_error),
        "reduced": r.reduced,
    }


def cmd_classify(scene: SceneFile, tol: Tolerance) -> Outcome:
    s = scene.dual()
    cls = dual.classify_existence(s)
    res = {"case": cls.case.value, "sigma": num(cls.sigma)}
    corner = cls.case is dual.Case.INFIMUM_ONLY
    if corner:
        res["infimum"] = num(dual.infimum_value(s))
        res["limit_point"] = pt(s.A)
    return Outcome(res, _corner_geometry(s, corner))


def _minimum(s: dual.SceneDual) -> dual.MinimumFound:
    sol = dual.solve_dual(s)
    if isinstance(sol, dual.InfimumOnly):
        raise DomainOutcome(
            "INFIMUM_ONLY",
            "no minimum exists; the infimum is approached at the corner A",
            {"sigma": num(sol.sigma), "infimum": num(sol.infimum), "limit_point": pt(sol.limit_point)},
            _corner_geometry(s, True),
        )
    return sol


def cmd_solve_dual(scene: SceneFile, tol: Tolerance) -> Outcome:
    s = scene.dual()
    sol = _minimum(s)
    cfg = sol.config
    res = {
        "case": dual.Case.MIN_EXISTS.value,
        "C": pt(sol.C),
        "D": pt(sol.D),
        "E": pt(sol.E),
        "value": num(sol.value),
        "t0": num(sol.t0),
        "optimality": _report_json(sol.report),
        "within_tolerance": sol.report.worst() <= tol.abs,
        "config": {k: pt(v) for k, v in cfg.named_points().items()},
    }
    if s.b > s.d:
        q = dual.dual_quartic(s)
        res["quartic"] = {
            "quoted": [num(c) for c in q.coeffs],
            "quoted_validated": q.validated,
            "derived": [num(c) for c in q.derived],
            "derived_validated": q.derived_validated,
            "lambda": num(q.lam),
            "errata": q.errata,
        }
    return Outcome(res, _config_geometry(cfg, sol.report.points))


def cmd_solve_linf(scene: SceneFile, tol: Tolerance) -> Outcome:
    s = scene.dual()
    sol = lp.solve_linf(s)
    if isinstance(sol, lp.LinfInfimum):
        raise DomainOutcome(
            "INFIMUM_ONLY",
            "the max-norm problem has no minimum for this scene",
            {"infimum": num(sol.infimum), "k0": num(sol.k0), "limit_point": pt(s.A)},
            _corner_geometry(s, True),
        )
    D, E = dual.ray_hits(s, sol.C)
    res = {
        "case": dual.Case.MIN_EXISTS.value,
        "C": pt(sol.C),
        "D": pt(D),
        "E": pt(E),
        "value": num(sol.value),
        "k0": num(sol.k0),
        "balance": num(sol.balance),
        "within_tolerance": sol.balance <= tol.abs,
    }
    pts = {"C": sol.C, "D": D, "E": E, "A": s.A, "B": s.B}
    return Outcome(res, geometry(pts, baseline=("D", "E"), segments=[("C", "D"), ("C", "E")]))


def cmd_solve_lp(scene: SceneFile, tol: Tolerance) -> Outcome:
    s = scene.dual()
    seed = _require_seed(scene)
    p = scene.exponent(default=1.0)
    starts = scene.get("starts", 32)
    if starts < 1:
        raise DomainOutcome("BAD_STARTS", "starts must be at least 1")
    r = lp.numeric_minimize(s, p, starts=starts, seed=seed)
    res = {
        "p": p.to_json(),
        "best": pt(r.best),
        "value": num(r.value),
        "boundary_flag": r.boundary_flag,
        "starts": r.restarts,
    }
    pts = {"C1": r.best, "A": s.A, "B": s.B}
    D1, E1 = dual.ray_hits(s, r.best)
    pts.update({"D1": D1, "E1": E1})
    geo = geometry(pts, baseline=("D1", "E1"), segments=[("C1", "D1"), ("C1", "E1")], corner="A" if r.boundary_flag else None)
    return Outcome(res, geo, seed=seed)


def cmd_verify_identities(scene: SceneFile, tol: Tolerance) -> Outcome:
    if scene.kind == "triangle":
        # the supplied triangle with A, B from its bisector construction;
        # a non-unit exponent deliberately gives a non-optimal configuration
        p = scene.exponent(default=1.0)
        if p.kind == lp.INF.kind:
            raise DomainOutcome("BAD_EXPONENT", "the cevian construction needs p = 0 or a finite p")
        pval = 0.0 if p.kind == lp.ZERO.kind else p.p
        sc = lp.build_cevian_scene(scene.point("C"), scene.point("D"), scene.point("E"), pval)
        s, rigid = sc.to_dual()
        cfg = dual.candidate_config(s, rigid.apply(sc.C))
        source = "triangle"
    else:
        s = scene.dual()
        cfg = _minimum(s).config
        source = "optimum"
    ids = dual.triangle_identities(cfg)
    res = {
        "source": source,
        "residuals": [num(r) for r in ids.residuals],
        "max_residual": num(max(ids.evaluated())),
        "quoted_identity_1": num(ids.quoted_1),
        "isosceles": cfg.P is None,
    }
    try:
        res["corner_bound_margin"] = num(dual.corner_bound_margin(cfg))
    except IsoscelesDegenerate:
        res["corner_bound_margin"] = None
    res["within_tolerance"] = max(ids.evaluated()) <= max(tol.abs, 1e-9)
    return Outcome(res, _config_geometry(cfg, {}))


# ---------------------------------------------------------------- philo family


def _philo_geometry(s: philo.AngleScene, sol: philo.PhiloSolution) -> dict:
    pts = {"B": s.vertex, "D": s.interior, "E": sol.E, "F": sol.F, "G": sol.G}
    return geometry(
        pts,
        baseline=("B", "E"),
        segments=[("B", "F"), ("E", "F"), ("B", "G")],
        right_angles=[("G", "B", "F")],
    )


def _philo_json(sol: philo.PhiloSolution) -> dict:
    return {
        "E": pt(sol.E),
        "F": pt(sol.F),
        "G": pt(sol.G),
        "length": num(sol.length),
        "theta": num(sol.theta),
        "residual": num(sol.residual),
    }


def _is_axis_right_angle(s: philo.AngleScene) -> bool:
    return s.vertex == Point2(0.0, 0.0) and s.dir1 == Point2(1.0, 0.0) and s.dir2 == Point2(0.0, 1.0)


def cmd_philo(scene: SceneFile, tol: Tolerance) -> Outcome:
    if scene.kind == "scenario":
        sc = philo.incenter_345()
        res = {"scenario": scene.get("name"), "incenter": pt(sc.incenter), "shortest": sc.shortest}
        res["solutions"] = {k: _philo_json(v) for k, v in sc.solutions.items()}
        pts = dict(sc.vertices)
        pts["I"] = sc.incenter
        segs = [("O", "Y"), ("X", "Y")]
        for k, v in sc.solutions.items():
            pts[f"E_{k}"], pts[f"F_{k}"] = v.E, v.F
            segs.append((f"E_{k}", f"F_{k}"))
        return Outcome(res, geometry(pts, baseline=("O", "X"), segments=segs))
    s = scene.angle()
    sol = philo.philo_solve(s)
    res = _philo_json(sol)
    res["within_tolerance"] = sol.residual <= max(tol.abs, 1e-8 * sol.length)
    if _is_axis_right_angle(s):
        length, E, F = philo.philo_right_angle(s.interior.x, s.interior.y)
        res["closed_form"] = {"length": num(length), "E": pt(E), "F": pt(F)}
    return Outcome(res, _philo_geometry(s, sol))


def cmd_transversal_check(scene: SceneFile, tol: Tolerance) -> Outcome:
    s = scene.angle()
    seed = _require_seed(scene)
    n = scene.get("n", 10_000)
    if n < 1:
        raise DomainOutcome("BAD_SAMPLES", "n must be at least 1")
    sol = philo.philo_solve(s)
    chk = philo.transversal_check(s, sol, n=n, seed=seed)
    res = {
        "solution": _philo_json(sol),
        "min_excess": num(chk.min_excess),
        "placement_residual": num(chk.placement_residual),
        "samples": chk.samples,
        "holds": chk.min_excess > 0 and chk.placement_residual < 1e-8,
    }
    return Outcome(res, _philo_geometry(s, sol), seed=seed)


# ---------------------------------------------------------------- counterexamples


def cmd_counterexample(scene: SceneFile, tol: Tolerance) -> Outcome:
    p = scene.exponent()
    seed, budget = scene.get("seed"), scene.get("budget")
    if p.kind == lp.INF.kind:
        raise DomainOutcome("BAD_EXPONENT", "the cevian construction needs p = 0 or a finite p")
    if budget < 1:
        raise DomainOutcome("BAD_BUDGET", "budget must be at least 1")
    try:
        cert = lp.find_counterexample(p, budget=budget, seed=seed)
    except NotFound as exc:
        raise DomainOutcome(
            "NOT_FOUND",
            str(exc),
            {"p": p.to_json(), "budget": exc.budget, "trials": exc.trials, "best_relative_margin": num(exc.best_margin)},
        ) from exc
    sc = cert.scene
    pts = {"C": sc.C, "D": sc.D, "E": sc.E, "A": sc.A, "B": sc.B, "K": sc.K, "L": sc.L, "M": sc.M, "C1": cert.challenger}
    base = Line2(sc.D, sc.E)
    pts["D1"] = intersect_lines(Line2(cert.challenger, sc.A), base)
    pts["E1"] = intersect_lines(Line2(cert.challenger, sc.B), base)
    res = {
        "p": p.to_json(),
        "scene": {k: pt(getattr(sc, k)) for k in ("C", "D", "E", "A", "B", "K", "L", "M")},
        "challenger": pt(cert.challenger),
        "g_at_C": num(cert.g_at_C),
        "g_at_C1": num(cert.g_at_C1),
        "margin": num(cert.margin),
        "revalidated_margin": num(cert.revalidate()),
        "trials": cert.trials,
        "probes": cert.probes,
    }
    geo = geometry(
        pts,
        baseline=("D", "E"),
        segments=[("C", "D"), ("C", "E"), ("C", "K"), ("K", "L"), ("K", "M"), ("C1", "D1"), ("C1", "E1")],
        right_angles=[("L", "C", "K"), ("M", "C", "K")],
    )
    return Outcome(res, geo, seed=seed)


HANDLERS = {
    "classify": cmd_classify,
    "solve-dual": cmd_solve_dual,
    "solve-linf": cmd_solve_linf,
    "solve-lp": cmd_solve_lp,
    "philo": cmd_philo,
    "problem4": cmd_transversal_check,
    "counterexample": cmd_counterexample,
    "verify-identities": cmd_verify_identities,
}


def run(command: str, scene: SceneFile, tol: Tolerance, argv: list[str] | None = None) -> tuple[int, dict]:
    """Execute ``command`` and return ``(exit_code, report)``; exit code is 0 or 1."""
    if command not in HANDLERS:
        raise ValueError(f"unknown command {command!r}")
    report: dict = {"schema_version": SCHEMA_VERSION, "command": command}
    if argv is not None:
        report["argv"] = list(argv)
    report["input"] = scene.to_json()
    code = 0
    geo = None
    seed = scene.get("seed")
    try:
        if scene.kind not in ACCEPTS[command]:
            raise DomainOutcome(
                "WRONG_SCENE_KIND", f"{command} accepts {', '.join(ACCEPTS[command])} scenes, not {scene.kind!r}"
            )
        out = HANDLERS[command](scene, tol)
        report["result"] = out.result
        geo = out.geometry
        seed = out.seed if out.seed is not None else seed
    except DomainOutcome as exc:
        code = 1
        report["error"] = {"code": exc.code, "message": str(exc), **exc.payload}
        geo = exc.geometry
    except BisectrixError as exc:
        code = 1
        report["error"] = {"code": exc.code, "message": str(exc)}
    if geo is not None:
        report["geometry"] = geo
    report["tolerances"] = {"abs": tol.abs, "rel": tol.rel}
    report["seed"] = seed
    return code, report
