"""Deterministic SVG 1.1 output for layered documents.

Document coordinates are y-up; the emitter flips them into SVG's y-down frame.
Numbers are rounded to 6 decimals with trailing zeros stripped. Path data uses
only the M, L, A and Z commands.
"""
from __future__ import annotations

import math
from xml.sax.saxutils import escape, quoteattr

import numpy as np

from fibgeom.layout import Document


def fmt(v: float) -> str:
    s = f"{float(v):.6f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


class _Writer:
    def __init__(self, height):
        self.height = height
        self.lines = []

    def y(self, v):
        return self.height - v

    def pt(self, x, y):
        return f"{fmt(x)} {fmt(self.y(y))}"

    def emit(self, text, depth):
        self.lines.append("  " * depth + text)


def _style_attrs(style):
    parts = []
    for key in ("stroke", "fill", "opacity"):
        if key in style:
            val = fmt(style[key]) if key == "opacity" else str(style[key])
            parts.append(f"{key}={quoteattr(val)}")
    if "stroke_width" in style:
        parts.append(f'stroke-width="{fmt(style["stroke_width"])}"')
    return " ".join(parts)


def _arc_path(w, center, radius, start, end):
    sx, sy = center[0] + radius * math.cos(start), center[1] + radius * math.sin(start)
    ex, ey = center[0] + radius * math.cos(end), center[1] + radius * math.sin(end)
    sweep = end - start
    large = 1 if abs(sweep) > math.pi else 0
    # counterclockwise in y-up coordinates is sweep-flag 0 after the flip
    flag = 0 if sweep > 0 else 1
    r = fmt(radius)
    return f"M {w.pt(sx, sy)} A {r} {r} 0 {large} {flag} {w.pt(ex, ey)}"


def _polygon_path(w, pts):
    head, *rest = pts
    return "M " + w.pt(*head) + "".join(f" L {w.pt(*p)}" for p in rest) + " Z"


def _line(w, l, depth, cls=None):
    c = f' class="{cls}"' if cls else ""
    w.emit(
        f'<line{c} x1="{fmt(l[0])}" y1="{fmt(w.y(l[1]))}" x2="{fmt(l[2])}" y2="{fmt(w.y(l[3]))}"/>',
        depth,
    )


def _render_tiling(w, p, depth):
    for s in p["squares"]:
        w.emit(
            f'<rect data-index="{s["index"]}" x="{fmt(s["x"])}" y="{fmt(w.y(s["y"] + s["side"]))}" '
            f'width="{fmt(s["side"])}" height="{fmt(s["side"])}"/>',
            depth,
        )


def _render_spiral(w, p, depth):
    for a in p["arcs"]:
        w.emit(f'<path class="arc" d="{_arc_path(w, a["center"], a["radius"], a["start"], a["end"])}"/>', depth)


def _render_guides(w, p, depth):
    for key in ("lines", "phi_lines", "thirds", "diagonals"):
        for l in p.get(key, ()):
            _line(w, l, depth, key.replace("_", "-"))
    for x, y, rw, rh in p.get("nested_rects", ()):
        d = _polygon_path(w, [(x, y), (x + rw, y), (x + rw, y + rh), (x, y + rh)])
        w.emit(f'<path class="nested-rect" d="{d}"/>', depth)


def _render_markers(w, p, depth, radius):
    for m in p["points"]:
        w.emit(f'<circle class="focal" cx="{fmt(m["x"])}" cy="{fmt(w.y(m["y"]))}" r="{fmt(radius)}"/>', depth)
        if m.get("label"):
            w.emit(
                f'<text x="{fmt(m["x"] + radius)}" y="{fmt(w.y(m["y"] + radius))}" font-size="{fmt(4 * radius)}">'
                f'{escape(m["label"])}</text>',
                depth,
            )


def _render_figure(w, p, depth):
    for layer in p["layers"]:
        w.emit(f'<g class="view" opacity="{fmt(layer["weight"])}" data-label={quoteattr(layer.get("label", ""))}>', depth)
        for (x1, y1), (x2, y2) in layer["segments"]:
            w.emit(f'<path d="M {w.pt(x1, y1)} L {w.pt(x2, y2)}"/>', depth + 1)
        w.emit("</g>", depth)


def _rgb(color):
    r, g, b = (int(round(255 * max(0.0, min(1.0, c)))) for c in color)
    return f"#{r:02x}{g:02x}{b:02x}"


def _render_scene(w, p, depth, canvas):
    W, H = canvas
    scale = np.diag([W, H])
    for e in p["elements"]:
        a11, a12, a21, a22, b1, b2 = e["matrix"]
        A = scale @ np.array([[a11, a12], [a21, a22]])
        b = scale @ np.array([b1, b2])
        color = _rgb(e["color"])
        shape = e["shape"]
        if shape == "disk":
            U, s, _ = np.linalg.svd(A)
            u = U[:, 0]
            rot = -math.degrees(math.atan2(u[1], u[0]))
            p0 = b + s[0] * u
            p1 = b - s[0] * u
            rx, ry = fmt(s[0]), fmt(s[1])
            d = (
                f"M {w.pt(*p0)} A {rx} {ry} {fmt(rot)} 1 0 {w.pt(*p1)} "
                f"A {rx} {ry} {fmt(rot)} 1 0 {w.pt(*p0)} Z"
            )
            w.emit(f'<path class="disk" fill="{color}" d="{d}"/>', depth)
        elif shape == "segment":
            p0, p1 = b, A @ np.array([1.0, 0.0]) + b
            width = e.get("stroke", 0.01) * min(W, H)
            w.emit(
                f'<path class="segment" stroke="{color}" stroke-width="{fmt(width)}" '
                f'd="M {w.pt(*p0)} L {w.pt(*p1)}"/>',
                depth,
            )
        else:
            if shape == "triangle":
                verts = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]
            else:
                verts = e.get("vertices") or [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
            placed = [A @ np.asarray(v, dtype=float) + b for v in verts]
            w.emit(f'<path class="{shape}" fill="{color}" d="{_polygon_path(w, placed)}"/>', depth)


def _render_raster_ref(w, p, depth):
    x0, y0, x1, y1 = p["box"]
    w.emit(
        f'<image href={quoteattr(p["href"])} x="{fmt(x0)}" y="{fmt(w.y(y1))}" '
        f'width="{fmt(x1 - x0)}" height="{fmt(y1 - y0)}" preserveAspectRatio="none"/>',
        depth,
    )


def render_svg(d: Document) -> bytes:
    """Serialise a document; identical documents give identical bytes."""
    W, H = (float(v) for v in d.canvas)
    w = _Writer(H)
    marker_r = 0.01 * max(W, H)
    w.lines.append('<?xml version="1.0" encoding="UTF-8"?>')
    w.emit(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{fmt(W)}" height="{fmt(H)}" '
        f'viewBox="0 0 {fmt(W)} {fmt(H)}">',
        0,
    )
    if not d.layers:
        w.emit('<g id="root"/>', 1)
    else:
        w.emit('<g id="root" stroke-width="{}">'.format(fmt(0.002 * max(W, H))), 1)
        for i, layer in enumerate(d.layers):
            name = f' data-name={quoteattr(layer.name)}' if layer.name else ""
            w.emit(f'<g id="layer-{i}" class="{layer.kind}"{name} {_style_attrs(layer.style)}>', 2)
            p = layer.payload
            if layer.kind == "tiling":
                _render_tiling(w, p, 3)
            elif layer.kind == "spiral":
                _render_spiral(w, p, 3)
            elif layer.kind == "guides":
                _render_guides(w, p, 3)
            elif layer.kind == "markers":
                _render_markers(w, p, 3, marker_r)
            elif layer.kind == "figure":
                _render_figure(w, p, 3)
            elif layer.kind == "scene":
                _render_scene(w, p, 3, (W, H))
            elif layer.kind == "raster-ref":
                _render_raster_ref(w, p, 3)
            w.emit("</g>", 2)
        w.emit("</g>", 1)
    w.emit("</svg>", 0)
    return ("\n".join(w.lines) + "\n").encode("utf-8")
