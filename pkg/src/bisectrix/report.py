"""Report files: serialization and closed-loop revalidation.

A report echoes its input scene, so it can be re-run through the same
handler. :func:`revalidate` compares every numeric leaf of the stored result
with the recomputation and also spot-checks the headline numbers directly
against the library (objective at the stored apex, length of the stored
segment, and so on).
"""

from __future__ import annotations

import json

from . import commands, dual, lp
from .errors import ConsistencyError, SceneFileError
from .geometry import Point2, Tolerance
from .scenefile import SCHEMA_VERSION, SceneFile

REVALIDATE_REL = 1e-12

# keys that legitimately differ between runs or are pure echoes
_VOLATILE = {"wall_time", "argv"}


def dumps(report: dict) -> str:
    """Canonical text form: two-space indent, shortest round-trip floats."""
    return json.dumps(report, indent=2, allow_nan=False) + "\n"


def loads(text: str) -> dict:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SceneFileError(f"invalid report JSON: {exc}") from exc
    if not isinstance(obj, dict) or obj.get("schema_version") != SCHEMA_VERSION:
        raise SceneFileError(f"not a schema_version {SCHEMA_VERSION} report")
    for key in ("command", "input", "tolerances"):
        if key not in obj:
            raise SceneFileError(f"report lacks {key!r}")
    return obj


def _compare(stored, fresh, path: str, worst: list) -> None:
    if isinstance(stored, dict) and isinstance(fresh, dict):
        if set(stored) - _VOLATILE != set(fresh) - _VOLATILE:
            raise ConsistencyError(f"{path}: key sets differ")
        for k in stored:
            if k not in _VOLATILE:
                _compare(stored[k], fresh[k], f"{path}.{k}", worst)
    elif isinstance(stored, list) and isinstance(fresh, list):
        if len(stored) != len(fresh):
            raise ConsistencyError(f"{path}: lengths differ")
        for i, (a, b) in enumerate(zip(stored, fresh)):
            _compare(a, b, f"{path}[{i}]", worst)
    elif isinstance(stored, float) or isinstance(fresh, float):
        if isinstance(stored, bool) or isinstance(fresh, bool):
            raise ConsistencyError(f"{path}: type mismatch")
        gap = abs(stored - fresh) / max(1.0, abs(stored), abs(fresh))
        worst[0] = max(worst[0], gap)
        if gap > REVALIDATE_REL:
            raise ConsistencyError(f"{path}: stored {stored!r} vs recomputed {fresh!r}")
    elif stored != fresh:
        raise ConsistencyError(f"{path}: stored {stored!r} vs recomputed {fresh!r}")


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(1.0, abs(a), abs(b))


def _direct_checks(report: dict, scene: SceneFile) -> float:
    """Independent library evaluations of the headline numbers."""
    res = report.get("result")
    if res is None:
        return 0.0
    cmd = report["command"]
    gaps = [0.0]
    if cmd == "classify":
        gaps.append(_rel(res["sigma"], dual.existence_sigma(scene.dual())) if res["sigma"] != "inf" else 0.0)
    elif cmd == "solve-dual":
        gaps.append(_rel(res["value"], dual.eval_objective(scene.dual(), Point2(*res["C"]))))
    elif cmd == "solve-linf":
        gaps.append(_rel(res["value"], lp.eval_lp(scene.dual(), lp.INF, Point2(*res["C"]))))
    elif cmd == "solve-lp":
        p = lp.NormExponent.parse(res["p"])
        gaps.append(_rel(res["value"], lp.eval_lp(scene.dual(), p, Point2(*res["best"]))))
    elif cmd == "philo" and "length" in res:
        gaps.append(_rel(res["length"], Point2(*res["E"]).dist(Point2(*res["F"]))))
    elif cmd == "counterexample":
        sc = res["scene"]
        C, D, E = (Point2(*sc[k]) for k in "CDE")
        p = scene.exponent()
        cev = lp.build_cevian_scene(C, D, E, 0.0 if p.kind == lp.ZERO.kind else p.p)
        margin = cev.apex_value(p) - cev.objective(Point2(*res["challenger"]), p)
        gaps.append(_rel(res["margin"], margin))
        if not margin > 0:
            raise ConsistencyError("certificate margin is not positive on re-evaluation")
    worst = max(gaps)
    if worst > REVALIDATE_REL:
        raise ConsistencyError(f"{cmd}: direct re-evaluation differs by {worst:.3e}")
    return worst


def revalidate(report: dict) -> float:
    """Re-run a report and return the largest relative deviation found.

    Raises :class:`ConsistencyError` when any number moves by more than
    ``1e-12`` (relative to ``max(1, |value|)``).
    """
    scene = SceneFile.parse(report["input"])
    tol = Tolerance(**report["tolerances"])
    _, fresh = commands.run(report["command"], scene, tol)
    worst = [0.0]
    for key in ("result", "error", "geometry"):
        if (key in report) != (key in fresh):
            raise ConsistencyError(f"{key!r} present in only one of stored and recomputed reports")
        if key in report:
            _compare(report[key], fresh[key], key, worst)
    return max(worst[0], _direct_checks(report, scene))

