"""Layered documents and the Fibonacci-guided layout pipeline."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from fibgeom.errors import DomainError
from fibgeom.golden import ArcChain, GuideSet, Tiling, build_fibonacci_tiling, phi_guides, spiral_from_tiling

LAYER_KINDS = ("tiling", "spiral", "guides", "markers", "figure", "scene", "raster-ref")

DEFAULT_STYLES = {
    "tiling": {"stroke": "#222222", "fill": "none", "opacity": 1.0},
    "spiral": {"stroke": "#b22222", "fill": "none", "opacity": 1.0},
    "guides": {"stroke": "#4682b4", "fill": "none", "opacity": 0.6},
    "markers": {"stroke": "#000000", "fill": "#ffd700", "opacity": 1.0},
    "figure": {"stroke": "#000000", "fill": "none", "opacity": 1.0},
    "scene": {"stroke": "none", "fill": "#000000", "opacity": 1.0},
    "raster-ref": {"stroke": "none", "fill": "none", "opacity": 1.0},
}


@dataclass
class DocLayer:
    kind: str
    payload: dict
    style: dict = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        if self.kind not in LAYER_KINDS:
            raise DomainError(f"unknown layer kind {self.kind!r}")
        style = dict(DEFAULT_STYLES[self.kind])
        style.update(self.style)
        if not 0.0 <= float(style["opacity"]) <= 1.0:
            raise DomainError(f"opacity must lie in [0, 1], got {style['opacity']!r}")
        self.style = style

    def to_dict(self):
        return {"kind": self.kind, "name": self.name, "style": self.style, "payload": self.payload}


@dataclass
class Document:
    canvas: tuple[float, float] = (1.0, 1.0)
    layers: list[DocLayer] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def add(self, kind, payload, name="", **style):
        self.layers.append(DocLayer(kind, payload, style, name))
        return self

    def to_dict(self):
        return {
            "canvas": list(self.canvas),
            "layers": [l.to_dict() for l in self.layers],
            "metadata": self.metadata,
        }

    def to_json(self, indent=None) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)

    @classmethod
    def from_dict(cls, obj):
        return cls(
            tuple(obj["canvas"]),
            [DocLayer(l["kind"], l["payload"], l.get("style", {}), l.get("name", "")) for l in obj["layers"]],
            obj.get("metadata", {}),
        )

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


# ---- payload helpers -----------------------------------------------------


def tiling_payload(t: Tiling) -> dict:
    return {
        "squares": [
            {"index": s.index, "x": s.origin[0], "y": s.origin[1], "side": s.side, "direction": s.direction}
            for s in t.squares
        ],
        "bounds": list(t.bounds),
        "unit": t.unit,
        "winding": t.winding,
    }


def spiral_payload(c: ArcChain) -> dict:
    return {
        "arcs": [{"center": list(a.center), "radius": a.radius, "start": a.start, "end": a.end} for a in c.arcs],
        "junctions": [list(j) for j in c.junctions],
    }


def guides_payload(g: GuideSet) -> dict:
    return {
        "canvas": list(g.canvas),
        "phi_lines": [list(l) for l in g.phi_lines],
        "thirds": [list(l) for l in g.thirds],
        "diagonals": [list(l) for l in g.diagonals],
        "nested_rects": [list(r) for r in g.nested_rects],
    }


def alignment_lines(t: Tiling) -> list[list[float]]:
    """Edges of every intermediate Fibonacci rectangle, deduplicated, in construction order."""
    seen = set()
    lines = []
    x0 = y0 = math.inf
    x1 = y1 = -math.inf
    for sq in t.squares:
        a, b, c, d = sq.corners
        x0, y0, x1, y1 = min(x0, a), min(y0, b), max(x1, c), max(y1, d)
        for seg in ((x0, y0, x1, y0), (x1, y0, x1, y1), (x0, y1, x1, y1), (x0, y0, x0, y1)):
            key = tuple(round(v, 9) for v in seg)
            if key not in seen:
                seen.add(key)
                lines.append(list(seg))
    return lines


@dataclass(frozen=True)
class LayoutParams:
    n_squares: int = 8
    unit: float = 1.0
    focal_labels: tuple[str, ...] | None = None
    include_guides: bool = True
    seed: int = 0
    guide_depth: int = 3


def _gradient_flow(chain: ArcChain) -> list[dict]:
    """Unit tangent of the spiral at the midpoint of each arc (direction of travel)."""
    flow = []
    for k, a in enumerate(chain.arcs, start=1):
        mid = 0.5 * (a.start + a.end)
        flow.append({"square": k, "axis": [-math.sin(mid), math.cos(mid)]})
    return flow


def compose_layout(p: LayoutParams) -> Document:
    """Tiling, quarter-arc spiral, focal markers at arc junctions, rectangle-edge
    alignment lines, and optional phi guides on an ``F(n) x F(n+1)`` canvas.

    With ``focal_labels=None`` every junction gets an unlabeled marker; otherwise
    the first ``len(focal_labels)`` junctions are marked.
    """
    if p.n_squares < 1 or not p.unit > 0:
        raise DomainError("layout needs n_squares >= 1 and unit > 0")
    tiling = build_fibonacci_tiling(p.n_squares, p.unit)
    tiling = tiling.translated(-tiling.bounds[0], -tiling.bounds[1])
    chain = spiral_from_tiling(tiling)
    junctions = chain.focal_points()
    labels = [""] * len(junctions) if p.focal_labels is None else list(p.focal_labels)
    if len(labels) > len(junctions):
        raise DomainError(f"{len(labels)} focal labels but only {len(junctions)} spiral junctions")

    W, H = tiling.width, tiling.height
    doc = Document(canvas=(W, H))
    doc.add("tiling", tiling_payload(tiling), name="fibonacci-tiling")
    doc.add("spiral", spiral_payload(chain), name="golden-spiral")
    doc.add(
        "markers",
        {"points": [{"x": x, "y": y, "label": lab} for (x, y), lab in zip(junctions, labels)]},
        name="focal-points",
    )
    doc.add("guides", {"lines": alignment_lines(tiling)}, name="rectangle-alignment", opacity=0.4)
    if p.include_guides:
        doc.add("guides", guides_payload(phi_guides(W, H, p.guide_depth)), name="phi-guides")
    doc.metadata = {
        "winding": tiling.winding,
        "n_squares": p.n_squares,
        "unit": p.unit,
        "seed": p.seed,
        "gradient_flow": _gradient_flow(chain),
    }
    return doc
