"""Wireframe meshes in n dimensions, plane-rotation viewpoints, weighted multi-view
superposition, and affine scenes built from prototype shapes."""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np

from fibgeom.errors import DomainError
from fibgeom.ifs import AffineMap2, RasterField

PROTOTYPES = ("disk", "segment", "triangle", "polygon")
UNIT_TRIANGLE = ((0.0, 0.0), (1.0, 0.0), (0.0, 1.0))
UNIT_SQUARE = ((0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0))
DEFAULT_STROKE = 0.01


@dataclass(frozen=True)
class Mesh:
    dim: int
    vertices: np.ndarray
    edges: tuple[tuple[int, int], ...]
    facets: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != self.dim:
            raise DomainError(f"vertices must be an array of {self.dim}-vectors")
        seen = set()
        for i, j in self.edges:
            if not (0 <= i < len(v) and 0 <= j < len(v)) or i == j:
                raise DomainError(f"bad edge ({i}, {j})")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise DomainError(f"duplicate edge {key}")
            seen.add(key)
        object.__setattr__(self, "vertices", v)


def hypercube_mesh(n: int) -> Mesh:
    """Vertices at all +-1 vectors; edges join vertices differing in one coordinate."""
    if isinstance(n, bool) or not isinstance(n, int) or not 2 <= n <= 6:
        raise DomainError(f"hypercube dimension must be in 2..6, got {n!r}")
    # vertex v has coordinate j = +1 iff bit j of v is set
    verts = np.array([[1.0 if (v >> j) & 1 else -1.0 for j in range(n)] for v in range(1 << n)])
    edges = tuple((v, v | (1 << j)) for v in range(1 << n) for j in range(n) if not (v >> j) & 1)
    return Mesh(n, verts, edges)


@dataclass(frozen=True)
class Viewpoint:
    """An ordered list of plane rotations ``((axis_i, axis_j), angle)`` plus a layer weight."""

    rotations: tuple[tuple[tuple[int, int], float], ...] = ()
    weight: float = 1.0
    label: str = ""

    def matrix(self, dim: int) -> np.ndarray:
        """Composed rotation; the first listed rotation is applied first."""
        R = np.eye(dim)
        for (i, j), angle in self.rotations:
            if i == j or not (0 <= i < dim and 0 <= j < dim):
                raise DomainError(f"rotation plane ({i}, {j}) invalid for dimension {dim}")
            G = np.eye(dim)
            c, s = math.cos(angle), math.sin(angle)
            G[i, i] = c
            G[j, j] = c
            G[i, j] = -s
            G[j, i] = s
            R = G @ R
        return R

    @classmethod
    def from_dict(cls, obj):
        rots = tuple(((int(r["plane"][0]), int(r["plane"][1])), float(r["angle"])) for r in obj.get("rotations", ()))
        return cls(rots, float(obj.get("weight", 1.0)), str(obj.get("label", "")))

    def to_dict(self):
        return {
            "rotations": [{"plane": list(p), "angle": a} for p, a in self.rotations],
            "weight": self.weight,
            "label": self.label,
        }


def load_views(text):
    obj = json.loads(text)
    if isinstance(obj, dict):
        obj = obj.get("views", [])
    return [Viewpoint.from_dict(v) for v in obj]


@dataclass(frozen=True)
class Wireframe2D:
    points: np.ndarray  # (V, 2)
    edges: tuple[tuple[int, int], ...]

    @property
    def segments(self) -> np.ndarray:
        """``(E, 2, 2)`` array of endpoint pairs."""
        if not self.edges:
            return np.zeros((0, 2, 2))
        e = np.asarray(self.edges)
        return np.stack((self.points[e[:, 0]], self.points[e[:, 1]]), axis=1)


def project(mesh: Mesh, view: Viewpoint) -> Wireframe2D:
    """Rotate, then keep coordinates 0 and 1 (orthographic)."""
    R = view.matrix(mesh.dim)
    rotated = mesh.vertices @ R.T
    return Wireframe2D(rotated[:, :2].copy(), mesh.edges)


@dataclass(frozen=True)
class Layer:
    segments: np.ndarray
    weight: float
    label: str = ""


@dataclass(frozen=True)
class LayeredFigure:
    layers: tuple[Layer, ...]

    def to_payload(self):
        return {
            "layers": [
                {"segments": l.segments.tolist(), "weight": l.weight, "label": l.label} for l in self.layers
            ]
        }


def cubist_superpose(mesh: Mesh, views) -> LayeredFigure:
    """One layer per view; weights are rescaled to sum to 1."""
    views = list(views)
    if not views:
        raise DomainError("need at least one view")
    weights = np.array([v.weight for v in views], dtype=float)
    if np.any(weights < 0) or not np.all(np.isfinite(weights)):
        raise DomainError("view weights must be finite and non-negative")
    total = math.fsum(weights.tolist())
    if total == 0:
        raise DomainError("view weights are all zero")
    layers = tuple(
        Layer(project(mesh, v).segments, float(w / total), v.label or f"view {k}")
        for k, (v, w) in enumerate(zip(views, weights))
    )
    return LayeredFigure(layers)


# ---- affine scenes -------------------------------------------------------


def rotation(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def placement_matrix(translate=(0.0, 0.0), rotate=0.0, scale=(1.0, 1.0)) -> AffineMap2:
    """``x -> R(rotate) diag(scale) x + translate``."""
    return AffineMap2(rotation(rotate) @ np.diag(np.asarray(scale, dtype=float)), np.asarray(translate, dtype=float))


def decompose_placement(m: AffineMap2):
    """Split ``A x + b`` into ``(b, theta, (s1, s2), alpha)`` with
    ``A = R(theta) R(alpha) diag(s1, s2) R(-alpha)``; ``s2 < 0`` encodes a reflection."""
    U, s, Vt = np.linalg.svd(m.linear)
    if np.linalg.det(U) < 0:
        U[:, 1] *= -1
        s = s.copy()
        s[1] *= -1
    if np.linalg.det(Vt) < 0:
        Vt[1, :] *= -1
        s = s.copy()
        s[1] *= -1
    # A = U S Vt = (U Vt)(V S Vt)
    R = U @ Vt
    V = Vt.T
    theta = math.atan2(R[1, 0], R[0, 0])
    alpha = math.atan2(V[1, 0], V[0, 0])
    return tuple(m.offset.tolist()), theta, (float(s[0]), float(s[1])), alpha


def _segments_intersect(p1, p2, q1, q2):
    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    d1, d2 = orient(q1, q2, p1), orient(q1, q2, p2)
    d3, d4 = orient(p1, p2, q1), orient(p1, p2, q2)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) and 0 not in (d1, d2, d3, d4):
        return True

    def on_segment(a, b, c):
        return min(a[0], b[0]) <= c[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= c[1] <= max(a[1], b[1])

    return (
        (d1 == 0 and on_segment(q1, q2, p1))
        or (d2 == 0 and on_segment(q1, q2, p2))
        or (d3 == 0 and on_segment(p1, p2, q1))
        or (d4 == 0 and on_segment(p1, p2, q2))
    )


def is_simple_polygon(vertices) -> bool:
    v = [tuple(map(float, p)) for p in vertices]
    n = len(v)
    if n < 3:
        return False
    for i, j in itertools.combinations(range(n), 2):
        if j == i + 1 or (i == 0 and j == n - 1):
            continue
        if _segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]):
            return False
    area2 = sum(v[i][0] * v[(i + 1) % n][1] - v[(i + 1) % n][0] * v[i][1] for i in range(n))
    return area2 != 0


@dataclass(frozen=True)
class Element:
    shape: str
    placement: AffineMap2
    color: tuple[float, float, float] = (1.0, 1.0, 1.0)
    vertices: tuple[tuple[float, float], ...] | None = None  # prototype polygon, prototype space
    stroke: float = DEFAULT_STROKE  # segment thickness in canvas units
    label: str = ""

    def prototype_vertices(self):
        if self.shape == "triangle":
            return UNIT_TRIANGLE
        if self.shape == "polygon":
            return self.vertices or UNIT_SQUARE
        raise DomainError(f"{self.shape} has no polygon vertices")

    def placed_vertices(self) -> np.ndarray:
        return self.placement(np.asarray(self.prototype_vertices(), dtype=float))

    def ellipse_axes(self):
        """Semi-axes of a placed disk, largest first."""
        if self.shape != "disk":
            raise DomainError("ellipse_axes applies to disks only")
        return tuple(np.linalg.svd(self.placement.linear, compute_uv=False).tolist())

    def to_dict(self):
        d = {"shape": self.shape, "matrix": self.placement.to_row(), "color": list(self.color)}
        if self.vertices is not None:
            d["vertices"] = [list(p) for p in self.vertices]
        if self.shape == "segment":
            d["stroke"] = self.stroke
        if self.label:
            d["label"] = self.label
        return d


@dataclass(frozen=True)
class Scene:
    elements: tuple[Element, ...] = field(default=())

    def to_payload(self):
        return {"elements": [e.to_dict() for e in self.elements]}


def _element_from_descriptor(k, d) -> Element:
    shape = d.get("shape")
    if shape not in PROTOTYPES:
        raise DomainError(f"element {k}: unknown prototype {shape!r}; expected one of {PROTOTYPES}")
    if "matrix" in d:
        placement = AffineMap2.from_row(d["matrix"])
    else:
        placement = placement_matrix(d.get("translate", (0.0, 0.0)), float(d.get("rotate", 0.0)), d.get("scale", (1.0, 1.0)))
    det = placement.determinant
    if not abs(det) > 1e-14:
        raise DomainError(f"element {k}: singular placement (determinant {det!r})")
    color = tuple(float(c) for c in d.get("color", (1.0, 1.0, 1.0)))
    if len(color) != 3 or any(not 0 <= c <= 1 for c in color):
        raise DomainError(f"element {k}: color must be three values in [0, 1]")
    vertices = None
    if shape == "polygon" and d.get("vertices") is not None:
        vertices = tuple((float(p[0]), float(p[1])) for p in d["vertices"])
        if not is_simple_polygon(vertices):
            raise DomainError(f"element {k}: polygon is not simple")
    stroke = float(d.get("stroke", DEFAULT_STROKE))
    if not stroke > 0:
        raise DomainError(f"element {k}: stroke must be positive")
    return Element(shape, placement, color, vertices, stroke, str(d.get("label", "")))


def build_scene(spec) -> Scene:
    """Build a scene from element descriptors.

    Each descriptor has ``shape`` (disk, segment, triangle, polygon), a colour,
    and either ``translate``/``rotate``/``scale`` or a raw ``matrix`` row
    ``[a11, a12, a21, a22, b1, b2]``. Polygons may carry ``vertices``; the
    default is the unit square.
    """
    if isinstance(spec, dict):
        spec = spec.get("elements", [])
    return Scene(tuple(_element_from_descriptor(k, d) for k, d in enumerate(spec)))


def _points_in_polygon(px, py, poly):
    """Even-odd crossing test, vectorised over sample points."""
    inside = np.zeros(px.shape, dtype=bool)
    n = len(poly)
    for i in range(n):
        x1, y1 = poly[i]
        x2, y2 = poly[(i + 1) % n]
        if y1 == y2:
            continue
        crosses = (y1 > py) != (y2 > py)
        xint = x1 + (py - y1) * (x2 - x1) / (y2 - y1)
        inside ^= crosses & (px < xint)
    return inside


def _segment_distance(px, py, a, b):
    d = b - a
    L2 = float(d @ d)
    t = np.clip(((px - a[0]) * d[0] + (py - a[1]) * d[1]) / L2, 0.0, 1.0)
    return np.hypot(px - (a[0] + t * d[0]), py - (a[1] + t * d[1]))


def cell_centers(g: int):
    c = (np.arange(g) + 0.5) / g
    return np.meshgrid(c, c)  # xs[iy, ix], ys[iy, ix]


def element_mask(e: Element, g: int) -> np.ndarray:
    """Boolean ``g x g`` mask of cells whose centre lies in the placed element."""
    xs, ys = cell_centers(g)
    if e.shape == "disk":
        inv = np.linalg.inv(e.placement.linear)
        dx = xs - e.placement.offset[0]
        dy = ys - e.placement.offset[1]
        u = inv[0, 0] * dx + inv[0, 1] * dy
        v = inv[1, 0] * dx + inv[1, 1] * dy
        return u * u + v * v <= 1.0
    if e.shape == "segment":
        a, b = e.placement(np.array([[0.0, 0.0], [1.0, 0.0]]))
        return _segment_distance(xs, ys, a, b) <= e.stroke / 2
    return _points_in_polygon(xs, ys, e.placed_vertices())


def rasterize_scene(s: Scene, g: int) -> RasterField:
    """Additive colour superposition over the unit-square canvas, clamped to [0, 1]."""
    if isinstance(g, bool) or not isinstance(g, int) or g < 8:
        raise DomainError(f"grid size must be an integer >= 8, got {g!r}")
    img = np.zeros((g, g, 3))
    for e in s.elements:
        img[element_mask(e, g)] += np.asarray(e.color)
    return RasterField(np.clip(img, 0.0, 1.0), (0.0, 0.0, 1.0, 1.0))
