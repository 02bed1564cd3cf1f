"""Deterministic SVG figures: a geometry panel with an optional signature plot below."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

import numpy as np

WIDTH = 600.0
SIG_HEIGHT = 200.0
MARGIN = 0.05
PALETTE = ("#000000", "#1f4fd1", "#d1261f", "#1d8f3a", "#8a2be2", "#d17a00", "#008b8b")


@dataclass
class Curve:
    points: np.ndarray
    closed: bool = True
    color: str = "#000000"
    width: float = 1.5
    label: str = ""


@dataclass
class Segment:
    start: tuple
    end: tuple
    color: str = "#000000"
    width: float = 1.5
    dashed: bool = False


@dataclass
class Fill:
    points: np.ndarray
    color: str = "#1f4fd1"


@dataclass
class Disk:
    center: tuple
    radius: float
    color: str = "#1d8f3a"


@dataclass
class Trace:
    values: np.ndarray
    color: str = "#000000"
    label: str = ""


@dataclass
class Scene:
    curves: list = field(default_factory=list)
    segments: list = field(default_factory=list)
    fills: list = field(default_factory=list)
    disks: list = field(default_factory=list)
    traces: list = field(default_factory=list)
    marker: int | None = None  # highlighted signature index
    title: str = ""

    def is_empty(self) -> bool:
        return not (self.curves or self.segments or self.fills or self.disks or self.traces)


def _f(x: float) -> str:
    s = f"{x:.3f}"
    return "0.000" if s == "-0.000" else s


def _bbox(scene: Scene):
    pts = []
    for c in scene.curves:
        pts.append(np.asarray(c.points, dtype=float).reshape(-1, 2))
    for f in scene.fills:
        pts.append(np.asarray(f.points, dtype=float).reshape(-1, 2))
    for s in scene.segments:
        pts.append(np.array([s.start, s.end], dtype=float))
    for d in scene.disks:
        cx, cy = d.center
        pts.append(np.array([[cx - d.radius, cy - d.radius], [cx + d.radius, cy + d.radius]]))
    if not pts:
        return None
    allp = np.vstack(pts)
    if not np.all(np.isfinite(allp)):
        raise ValueError("scene has non-finite coordinates")
    lo, hi = allp.min(axis=0), allp.max(axis=0)
    span = np.maximum(hi - lo, 1e-12)
    pad = MARGIN * span.max()
    return lo - pad, hi + pad


def emit_svg(scene: Scene) -> str:
    """Render ``scene``; identical scenes give byte-identical output."""
    if scene.is_empty():
        return '<svg xmlns="http://www.w3.org/2000/svg" width="1" height="1" viewBox="0 0 1 1"/>\n'

    box = _bbox(scene)
    body = []
    geo_h = 0.0
    if box is not None:
        lo, hi = box
        scale = WIDTH / (hi[0] - lo[0])
        geo_h = (hi[1] - lo[1]) * scale

        def tx(p):
            return _f((p[0] - lo[0]) * scale), _f((hi[1] - p[1]) * scale)

        def pts(arr):
            return " ".join(",".join(tx(p)) for p in np.asarray(arr, dtype=float).reshape(-1, 2))

        body.append('<g id="geometry">')
        for f in scene.fills:
            body.append(
                f'<polygon points="{pts(f.points)}" fill="{f.color}" fill-opacity="0.4" stroke="none"/>'
            )
        for c in scene.curves:
            tag = "polygon" if c.closed else "polyline"
            body.append(
                f'<{tag} points="{pts(c.points)}" fill="none" stroke="{c.color}" '
                f'stroke-width="{_f(c.width)}" stroke-linejoin="round"/>'
            )
        for s in scene.segments:
            (x1, y1), (x2, y2) = tx(s.start), tx(s.end)
            dash = ' stroke-dasharray="4,3"' if s.dashed else ""
            body.append(
                f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{s.color}" '
                f'stroke-width="{_f(s.width)}"{dash}/>'
            )
        for d in scene.disks:
            cx, cy = tx(d.center)
            body.append(
                f'<circle cx="{cx}" cy="{cy}" r="{_f(d.radius * scale)}" fill="{d.color}" '
                f'fill-opacity="0.4" stroke="{d.color}"/>'
            )
        body.append("</g>")

    height = geo_h
    if scene.traces:
        top = geo_h + 10.0
        body.extend(_signature_panel(scene, top))
        height = top + SIG_HEIGHT
    height = max(height, 1.0)
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(WIDTH)}" height="{_f(height)}" '
        f'viewBox="0 0 {_f(WIDTH)} {_f(height)}">'
    )
    if scene.title:
        head += f"\n<title>{escape(scene.title)}</title>"
    return "\n".join([head, *body, "</svg>"]) + "\n"


def _signature_panel(scene: Scene, top: float) -> list[str]:
    vals = [np.asarray(t.values, dtype=float) for t in scene.traces]
    n = max(len(v) for v in vals)
    vmin = min(float(v.min()) for v in vals if len(v))
    vmax = max(float(v.max()) for v in vals if len(v))
    if vmax - vmin < 1e-15:
        vmin, vmax = vmin - 0.5 * max(abs(vmin), 1e-12), vmax + 0.5 * max(abs(vmax), 1e-12)
    left, right = 40.0, WIDTH - 10.0
    y0, y1 = top + SIG_HEIGHT - 20.0, top + 10.0

    def px(i):
        return left + (right - left) * (i / max(n - 1, 1))

    def py(v):
        return y0 + (y1 - y0) * (v - vmin) / (vmax - vmin)

    out = ['<g id="signature">']
    out.append(
        f'<rect x="{_f(left)}" y="{_f(y1)}" width="{_f(right - left)}" height="{_f(y0 - y1)}" '
        'fill="none" stroke="#888888" stroke-width="0.5"/>'
    )
    out.append(f'<text x="2" y="{_f(y1 + 8)}" font-size="9">{_f(vmax)}</text>')
    out.append(f'<text x="2" y="{_f(y0)}" font-size="9">{_f(vmin)}</text>')
    if scene.marker is not None:
        mx = _f(px(scene.marker))
        out.append(
            f'<line x1="{mx}" y1="{_f(y1)}" x2="{mx}" y2="{_f(y0)}" stroke="#1d8f3a" stroke-width="1"/>'
        )
    for t, v in zip(scene.traces, vals):
        p = " ".join(f"{_f(px(i))},{_f(py(x))}" for i, x in enumerate(v))
        out.append(f'<polyline points="{p}" fill="none" stroke="{t.color}" stroke-width="1"/>')
    out.append("</g>")
    return out


def chain_segments(complex_, chain, color="#000000", dashed=False) -> list[Segment]:
    """Edges of a 1-chain as segments, stroke width growing with |coefficient|."""
    segs = []
    for e, c in chain.items():
        a, b = complex_.edges[e]
        segs.append(
            Segment(
                tuple(complex_.vertices[a]),
                tuple(complex_.vertices[b]),
                color,
                1.5 + math.log2(abs(c)),
                dashed,
            )
        )
    return segs


def complex_segments(complex_, color="#bbbbbb") -> list[Segment]:
    return [
        Segment(tuple(complex_.vertices[a]), tuple(complex_.vertices[b]), color, 0.5)
        for a, b in complex_.edges
    ]


def chain_fills(complex_, chain, color="#1f4fd1") -> list[Fill]:
    return [Fill(complex_.vertices[complex_.triangles[t]], color) for t, _ in chain.items()]
