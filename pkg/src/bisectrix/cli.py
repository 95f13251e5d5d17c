"""Command-line front end.

Every subcommand reads its scene either from flags or from ``--json-in``
(a scene file, ``-`` for stdin) and prints one JSON report on stdout.
Exit codes: 0 success, 1 domain outcome (structured JSON on stdout),
2 usage error (message on stderr).
"""

from __future__ import annotations

import argparse
import hashlib
import math
import sys
import time

from . import commands, report, svg
from .errors import BisectrixError, SceneFileError
from .geometry import default_tolerance
from .scenefile import SCHEMA_VERSION, SceneFile

DUAL_FLAGS = ("a", "b", "c", "d")


def _add_dual_flags(p: argparse.ArgumentParser) -> None:
    for name in DUAL_FLAGS:
        p.add_argument(f"--{name}", type=float, help=f"canonical-frame coordinate {name}")


def _add_angle_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--right-angle", action="store_true", help="rays along +x and +y from the origin")
    p.add_argument("--angle-deg", type=float, help="rays along +x and at this angle from the origin")
    p.add_argument("--px", type=float, help="x of the interior point")
    p.add_argument("--py", type=float, help="y of the interior point")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bisectrix", description="Shortest-cevian solvers and checkers.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--json-in", metavar="FILE", help="read the scene from a JSON file ('-' for stdin)")
        p.add_argument("--timing", action="store_true", help="include wall_time in the report")
        return p

    _add_dual_flags(add("classify", "decide whether the minimum exists"))
    _add_dual_flags(add("solve-dual", "optimal apex for the sum of the two segments"))
    _add_dual_flags(add("solve-linf", "closed-form apex for the max of the two segments"))

    p = add("solve-lp", "multi-start simplex search for the l_p objective")
    _add_dual_flags(p)
    p.add_argument("--p", help="exponent: a real, 0 or inf (default 1)")
    p.add_argument("--seed", type=int)
    p.add_argument("--starts", type=int)

    p = add("philo", "shortest segment through a point inside an angle")
    _add_angle_flags(p)
    p.add_argument("--incenter-345", action="store_true", help="the three lines through the 3-4-5 incenter")

    p = add("problem4", "Monte-Carlo check that every other transversal is longer")
    _add_angle_flags(p)
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int)

    p = add("counterexample", "search cevian scenes where the apex is beaten")
    p.add_argument("--p", type=int, choices=(0, 1, 2))
    p.add_argument("--seed", type=int)
    p.add_argument("--budget", type=int)

    p = add("verify-identities", "triangle identities and the corner bound at the optimum")
    _add_dual_flags(p)
    p.add_argument("--scene-file", metavar="FILE", help="same as --json-in")

    p = sub.add_parser("render", help="draw a report as SVG", description="draw a report as SVG")
    p.add_argument("--in", dest="in_path", metavar="FILE", help="report JSON ('-' for stdin)")
    p.add_argument("--json-in", metavar="FILE", help="same as --in")
    p.add_argument("--out", required=True, metavar="FILE", help="SVG output path")
    p.add_argument("--timing", action="store_true", help=argparse.SUPPRESS)
    return parser


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise SceneFileError(f"cannot read {path}: {exc.strerror}") from exc


SCENE_FLAGS = {
    "classify": DUAL_FLAGS,
    "solve-dual": DUAL_FLAGS,
    "solve-linf": DUAL_FLAGS,
    "solve-lp": DUAL_FLAGS + ("p", "seed", "starts"),
    "philo": ("right_angle", "angle_deg", "px", "py", "incenter_345"),
    "problem4": ("right_angle", "angle_deg", "px", "py", "n", "seed"),
    "counterexample": ("p", "seed", "budget"),
    "verify-identities": DUAL_FLAGS,
}


def _given(args, names) -> list[str]:
    # identity checks: 0.0 == False, and --a 0 is a given flag
    return [n for n in names if getattr(args, n) is not None and getattr(args, n) is not False]


def _angle_fields(parser, args) -> dict:
    if args.right_angle and args.angle_deg is not None:
        parser.error("--right-angle and --angle-deg are mutually exclusive")
    if args.px is None or args.py is None:
        parser.error("--px and --py are required")
    if args.right_angle:
        d2 = [0.0, 1.0]
    elif args.angle_deg is not None:
        rad = math.radians(args.angle_deg)
        d2 = [math.cos(rad), math.sin(rad)]
    else:
        parser.error("give --right-angle or --angle-deg")
    return {"vertex": [0.0, 0.0], "dir1": [1.0, 0.0], "dir2": d2, "interior": [args.px, args.py]}


def _scene_from_flags(parser, args) -> SceneFile:
    cmd = args.command
    if cmd in ("classify", "solve-dual", "solve-linf", "solve-lp", "verify-identities"):
        missing = [n for n in DUAL_FLAGS if getattr(args, n) is None]
        if missing:
            parser.error("missing " + ", ".join(f"--{n}" for n in missing))
        vals = {n: getattr(args, n) for n in DUAL_FLAGS}
        if cmd == "solve-lp":
            if args.seed is None:
                parser.error("solve-lp needs --seed")
            p = args.p
            if p is not None and p.strip().lower() != "inf":
                try:
                    p = float(p)
                except ValueError:
                    parser.error(f"--p must be a real number or inf, got {args.p!r}")
            elif p is not None:
                p = "inf"
            vals.update(p=p, seed=args.seed, starts=args.starts)
        return SceneFile.build("dual", **vals)
    if cmd == "philo":
        if args.incenter_345:
            others = _given(args, ("right_angle", "angle_deg", "px", "py"))
            if others:
                parser.error("--incenter-345 takes no other scene flags")
            return SceneFile.build("scenario", name="incenter-345")
        return SceneFile.build("angle", **_angle_fields(parser, args))
    if cmd == "problem4":
        if args.seed is None:
            parser.error("problem4 needs --seed")
        return SceneFile.build("angle", n=args.n, seed=args.seed, **_angle_fields(parser, args))
    if cmd == "counterexample":
        if args.p is None or args.seed is None:
            parser.error("counterexample needs --p and --seed")
        budget = 100_000 if args.budget is None else args.budget
        return SceneFile.build("search", p=args.p, seed=args.seed, budget=budget)
    raise AssertionError(cmd)


def _emit(rep: dict) -> None:
    sys.stdout.write(report.dumps(rep))


def _render(parser, args, started: float) -> int:
    if (args.in_path is None) == (args.json_in is None):
        parser.error("render needs exactly one of --in / --json-in")
    src = args.in_path or args.json_in
    rep = report.loads(_read(src))
    body = {"schema_version": SCHEMA_VERSION, "command": "render", "input": src}
    try:
        text = svg.svg_text(rep)
    except BisectrixError as exc:
        body["error"] = {"code": exc.code, "message": str(exc)}
        _emit(body)
        return 1
    data = text.encode("utf-8")
    with open(args.out, "wb") as fh:
        fh.write(data)
    body["result"] = {"out": args.out, "bytes": len(data), "sha256": hashlib.sha256(data).hexdigest()}
    if args.timing:
        body["wall_time"] = time.perf_counter() - started
    _emit(body)
    return 0


def _dispatch(parser, args, argv) -> int:
    started = time.perf_counter()
    if args.command == "render":
        return _render(parser, args, started)
    src = args.json_in
    if args.command == "verify-identities" and args.scene_file is not None:
        if src is not None:
            parser.error("--scene-file and --json-in are the same option; give one")
        src = args.scene_file
    if src is not None:
        clash = _given(args, SCENE_FLAGS[args.command])
        if clash:
            parser.error("--json-in cannot be combined with " + ", ".join("--" + c.replace("_", "-") for c in clash))
        scene = SceneFile.loads(_read(src))
        if args.command in commands.RANDOMIZED and scene.get("seed") is None:
            parser.error(f"{args.command} needs a seed in the scene file")
    else:
        scene = _scene_from_flags(parser, args)
    try:
        tol = default_tolerance()
    except ValueError as exc:
        parser.error(f"BISECTRIX_TOL: {exc}")
    code, rep = commands.run(args.command, scene, tol, argv=argv)
    if args.timing:
        rep["wall_time"] = time.perf_counter() - started
    _emit(rep)
    return code


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _dispatch(parser, args, argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    except SceneFileError as exc:
        print(f"bisectrix: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
