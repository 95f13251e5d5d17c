"""JSON scene files (schema_version 1).

A scene file is a flat object with ``schema_version``, ``kind`` and the
fields listed in :data:`KINDS` for that kind. Points are ``[x, y]`` arrays,
exponents are a real, ``0`` or ``"inf"``. Unknown fields are rejected so a
typo never silently falls back to a default.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any

from .dual import SceneDual
from .errors import SceneFileError
from .geometry import Point2
from .lp import NormExponent
from .philo import AngleScene

SCHEMA_VERSION = 1

REAL, POINT, EXPONENT, INT, NAME = "real", "point", "exponent", "int", "name"

# kind -> ordered (field, type, required)
KINDS: dict[str, tuple[tuple[str, str, bool], ...]] = {
    "dual": (
        ("a", REAL, True),
        ("b", REAL, True),
        ("c", REAL, True),
        ("d", REAL, True),
        ("p", EXPONENT, False),
        ("seed", INT, False),
        ("starts", INT, False),
    ),
    "angle": (
        ("vertex", POINT, True),
        ("dir1", POINT, True),
        ("dir2", POINT, True),
        ("interior", POINT, True),
        ("n", INT, False),
        ("seed", INT, False),
    ),
    "triangle": (
        ("C", POINT, True),
        ("D", POINT, True),
        ("E", POINT, True),
        ("p", EXPONENT, False),
    ),
    "search": (
        ("p", EXPONENT, True),
        ("seed", INT, True),
        ("budget", INT, True),
    ),
    "scenario": (("name", NAME, True),),
}

SCENARIOS = ("incenter-345",)


def _real(name: str, raw: Any) -> float:
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise SceneFileError(f"field {name!r} must be a number")
    val = float(raw)
    if not math.isfinite(val):
        raise SceneFileError(f"field {name!r} must be finite")
    return val


def _field(name: str, typ: str, raw: Any):
    if typ == REAL:
        return _real(name, raw)
    if typ == POINT:
        if not isinstance(raw, (list, tuple)) or len(raw) != 2:
            raise SceneFileError(f"field {name!r} must be an [x, y] pair")
        return (_real(name, raw[0]), _real(name, raw[1]))
    if typ == EXPONENT:
        if isinstance(raw, bool):
            raise SceneFileError(f"field {name!r} must be a real, 0 or \"inf\"")
        if isinstance(raw, str):
            if raw != "inf":
                raise SceneFileError(f"field {name!r}: the only accepted string is \"inf\"")
            return "inf"
        val = _real(name, raw)
        return 0 if val == 0 else val
    if typ == INT:
        if isinstance(raw, bool) or not isinstance(raw, int) or raw < 0:
            raise SceneFileError(f"field {name!r} must be a non-negative integer")
        return int(raw)
    if typ == NAME:
        if raw not in SCENARIOS:
            raise SceneFileError(f"unknown scenario {raw!r}; known: {', '.join(SCENARIOS)}")
        return raw
    raise AssertionError(typ)


@dataclass(frozen=True)
class SceneFile:
    kind: str
    fields: dict

    @classmethod
    def parse(cls, obj: Any) -> SceneFile:
        if not isinstance(obj, dict):
            raise SceneFileError("a scene file must be a JSON object")
        if obj.get("schema_version") != SCHEMA_VERSION:
            raise SceneFileError(f"schema_version must be {SCHEMA_VERSION}")
        kind = obj.get("kind")
        if kind not in KINDS:
            raise SceneFileError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
        layout = KINDS[kind]
        known = {name for name, _, _ in layout} | {"schema_version", "kind"}
        extra = sorted(set(obj) - known)
        if extra:
            raise SceneFileError(f"unknown field(s) for kind {kind!r}: {', '.join(extra)}")
        fields = {}
        for name, typ, required in layout:
            if name in obj:
                fields[name] = _field(name, typ, obj[name])
            elif required:
                raise SceneFileError(f"missing field {name!r} for kind {kind!r}")
        return cls(kind, fields)

    @classmethod
    def loads(cls, text: str) -> SceneFile:
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SceneFileError(f"invalid JSON: {exc}") from exc
        return cls.parse(obj)

    @classmethod
    def build(cls, kind: str, **values) -> SceneFile:
        """Validate keyword values as if they came from a file; ``None`` means absent."""
        obj = {"schema_version": SCHEMA_VERSION, "kind": kind}
        obj.update({k: v for k, v in values.items() if v is not None})
        return cls.parse(obj)

    def to_json(self) -> dict:
        out: dict[str, Any] = {"schema_version": SCHEMA_VERSION, "kind": self.kind}
        for name, typ, _ in KINDS[self.kind]:
            if name in self.fields:
                val = self.fields[name]
                out[name] = list(val) if typ == POINT else val
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2) + "\n"

    def get(self, name: str, default=None):
        return self.fields.get(name, default)

    def point(self, name: str) -> Point2:
        return Point2(*self.fields[name])

    def exponent(self, default=None) -> NormExponent | None:
        raw = self.fields.get("p", default)
        return None if raw is None else NormExponent.parse(raw)

    def dual(self) -> SceneDual:
        self._need("dual")
        f = self.fields
        return SceneDual(f["a"], f["b"], f["c"], f["d"])

    def angle(self) -> AngleScene:
        self._need("angle")
        return AngleScene(self.point("vertex"), self.point("dir1"), self.point("dir2"), self.point("interior"))

    def _need(self, kind: str) -> None:
        if self.kind != kind:
            raise SceneFileError(f"expected a {kind!r} scene, got {self.kind!r}")
