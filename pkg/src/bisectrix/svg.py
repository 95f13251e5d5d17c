"""Deterministic SVG 1.1 figures from a report's geometry payload.

The baseline is the only ``<line>`` element; every other segment is a
``<path>`` so structural checks can count lines unambiguously. Coordinates
are written with six decimals and y is flipped so the figure reads with the
base line at the bottom.
"""

from __future__ import annotations

import math
from pathlib import Path
from xml.sax.saxutils import escape

from .errors import NonGeometricReport

CANVAS = 600.0

STYLE = (
    ".baseline{stroke:#000;stroke-width:1.5}"
    ".seg{stroke:#333;stroke-width:1;fill:none}"
    ".right{stroke:#777;stroke-width:0.8;fill:none}"
    ".pt{fill:#c0392b}"
    ".infimum{fill:none;stroke:#1f618d;stroke-width:1.5}"
    ".label{font-family:sans-serif;font-size:13px;fill:#000}"
)


def _f(v: float) -> str:
    s = f"{v:.6f}"
    return "0.000000" if s == "-0.000000" else s


class _Frame:
    def __init__(self, pts: list[tuple[float, float]]):
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        self.minx, self.maxy = min(xs), max(ys)
        span = max(max(xs) - self.minx, self.maxy - min(ys))
        if span <= 0:
            span = 1.0
        self.margin = 0.1 * span
        self.k = CANVAS / span
        self.width = (max(xs) - self.minx + 2 * self.margin) * self.k
        self.height = (self.maxy - min(ys) + 2 * self.margin) * self.k
        self.span = span

    def __call__(self, p) -> tuple[float, float]:
        return (p[0] - self.minx + self.margin) * self.k, (self.maxy - p[1] + self.margin) * self.k


def _right_marker(v, p1, p2, size: float):
    u1 = (p1[0] - v[0], p1[1] - v[1])
    u2 = (p2[0] - v[0], p2[1] - v[1])
    n1, n2 = math.hypot(*u1), math.hypot(*u2)
    if n1 == 0 or n2 == 0:
        return None
    s = min(size, 0.4 * n1, 0.4 * n2)
    a = (v[0] + s * u1[0] / n1, v[1] + s * u1[1] / n1)
    c = (v[0] + s * u2[0] / n2, v[1] + s * u2[1] / n2)
    b = (a[0] + c[0] - v[0], a[1] + c[1] - v[1])
    return a, b, c


def svg_text(report: dict) -> str:
    geo = report.get("geometry")
    if not geo or not geo.get("points"):
        raise NonGeometricReport(f"report for {report.get('command')!r} has no geometric payload")
    pts = {k: tuple(v) for k, v in geo["points"].items() if v is not None}
    fr = _Frame(list(pts.values()))
    r = 4.0
    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_f(fr.width)}" height="{_f(fr.height)}" '
        f'viewBox="0 0 {_f(fr.width)} {_f(fr.height)}">',
        f"<title>{escape(str(report.get('command', '')))}</title>",
        f"<style>{STYLE}</style>",
    ]
    base = geo.get("baseline")
    if base:
        (x1, y1), (x2, y2) = fr(pts[base[0]]), fr(pts[base[1]])
        out.append(f'<line class="baseline" x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}"/>')
    for a, b in geo.get("segments", []):
        (x1, y1), (x2, y2) = fr(pts[a]), fr(pts[b])
        out.append(f'<path class="seg" d="M {_f(x1)} {_f(y1)} L {_f(x2)} {_f(y2)}"/>')
    for v, p1, p2 in geo.get("right_angles", []):
        mk = _right_marker(pts[v], pts[p1], pts[p2], 0.03 * fr.span)
        if mk is None:
            continue
        (ax, ay), (bx, by), (cx, cy) = (fr(q) for q in mk)
        out.append(f'<path class="right" d="M {_f(ax)} {_f(ay)} L {_f(bx)} {_f(by)} L {_f(cx)} {_f(cy)}"/>')
    corner = geo.get("corner")
    if corner:
        cx, cy = fr(pts[corner])
        h = 3 * r
        out.append(f'<rect class="infimum" x="{_f(cx - h)}" y="{_f(cy - h)}" width="{_f(2 * h)}" height="{_f(2 * h)}"/>')
    for name, p in pts.items():
        x, y = fr(p)
        out.append(f'<circle class="pt" cx="{_f(x)}" cy="{_f(y)}" r="{_f(r)}"/>')
        out.append(f'<text class="label" x="{_f(x + 1.5 * r)}" y="{_f(y - 1.5 * r)}">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_svg(report: dict, out_path) -> Path:
    path = Path(out_path)
    path.write_bytes(svg_text(report).encode("utf-8"))
    return path
