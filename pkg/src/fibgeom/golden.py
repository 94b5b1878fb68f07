"""Golden-rectangle tilings, quarter-arc and logarithmic spirals, and phi guides.

All coordinates are in canvas units with the y axis pointing up. Squares are
attached counterclockwise around the growing rectangle::

    +-------+----+
    |       | 3  |      seed 1 at the origin, 2 to its right (east),
    |   4   +--+-+      then north, west, south, east, ...
    |       |1 |2|
    +-------+--+-+
    |     5      |
    +------------+
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from fibgeom.errors import DomainError, InvariantError, RankError
from fibgeom.fibonacci import PHI, fib_exact

MAX_SQUARES = 40
LOG_SPIRAL_B = math.log(PHI) / (math.pi / 2)

# attachment directions in degrees, cycling counterclockwise from square 2
_CYCLE = (0, 90, 180, 270)
# the seed square's arc sweeps as if it had been attached to the south
_SEED_DIRECTION = 270


@dataclass(frozen=True)
class Square:
    origin: tuple[float, float]
    side: float
    index: int
    direction: int  # degrees: side of the rectangle this square was attached to

    @property
    def corners(self):
        x, y = self.origin
        s = self.side
        return (x, y, x + s, y + s)


@dataclass(frozen=True)
class Tiling:
    squares: tuple[Square, ...]
    bounds: tuple[float, float, float, float]
    unit: float = 1.0
    winding: str = "counterclockwise"

    @property
    def width(self):
        return self.bounds[2] - self.bounds[0]

    @property
    def height(self):
        return self.bounds[3] - self.bounds[1]

    def translated(self, dx, dy):
        squares = tuple(
            Square((s.origin[0] + dx, s.origin[1] + dy), s.side, s.index, s.direction) for s in self.squares
        )
        x0, y0, x1, y1 = self.bounds
        return Tiling(squares, (x0 + dx, y0 + dy, x1 + dx, y1 + dy), self.unit, self.winding)

    def validate(self):
        """Raise InvariantError unless sides are Fibonacci multiples, interiors are disjoint and
        the squares exactly cover the bounds."""
        if not self.squares:
            raise InvariantError("tiling has no squares")
        tol = 1e-9 * self.unit * max(1.0, self.width, self.height)
        for k, sq in enumerate(self.squares, start=1):
            if sq.index != k or abs(sq.side - fib_exact(k) * self.unit) > tol:
                raise InvariantError(f"square {k} has side {sq.side}, expected F({k})*unit")
        boxes = [sq.corners for sq in self.squares]
        for i in range(len(boxes)):
            a = boxes[i]
            if a[0] < self.bounds[0] - tol or a[1] < self.bounds[1] - tol or a[2] > self.bounds[2] + tol or a[3] > self.bounds[3] + tol:
                raise InvariantError(f"square {i + 1} leaves the bounds")
            for j in range(i + 1, len(boxes)):
                b = boxes[j]
                overlap_x = min(a[2], b[2]) - max(a[0], b[0])
                overlap_y = min(a[3], b[3]) - max(a[1], b[1])
                if overlap_x > tol and overlap_y > tol:
                    raise InvariantError(f"squares {i + 1} and {j + 1} overlap")
        area = sum(sq.side**2 for sq in self.squares)
        if abs(area - self.width * self.height) > tol * max(1.0, self.width + self.height):
            raise InvariantError("squares do not cover the bounding rectangle")


def _attach(bounds, side, direction):
    x0, y0, x1, y1 = bounds
    if direction in (0, 180):
        edge = y1 - y0
    else:
        edge = x1 - x0
    if not math.isclose(edge, side, rel_tol=1e-12):
        raise InvariantError(f"cannot attach side {side} to an edge of length {edge}")
    if direction == 0:
        return (x1, y0), (x0, y0, x1 + side, y1)
    if direction == 90:
        return (x0, y1), (x0, y0, x1, y1 + side)
    if direction == 180:
        return (x0 - side, y0), (x0 - side, y0, x1, y1)
    return (x0, y0 - side), (x0, y0 - side, x1, y1)


def build_fibonacci_tiling(n_squares: int, unit: float = 1.0) -> Tiling:
    """Grow a tiling of ``n_squares`` Fibonacci squares, attaching each new square
    to the full side of the current rectangle, counterclockwise.

    The bounds end up as an ``F(n) x F(n+1)`` rectangle (times ``unit``).
    """
    if isinstance(n_squares, bool) or not isinstance(n_squares, int) or n_squares < 1:
        raise DomainError(f"n_squares must be an integer >= 1, got {n_squares!r}")
    if n_squares > MAX_SQUARES:
        raise DomainError(f"n_squares is capped at {MAX_SQUARES}, got {n_squares}")
    if not unit > 0 or not math.isfinite(unit):
        raise DomainError(f"unit must be positive, got {unit!r}")

    squares = [Square((0.0, 0.0), unit, 1, _SEED_DIRECTION)]
    bounds = (0.0, 0.0, unit, unit)
    for k in range(2, n_squares + 1):
        side = fib_exact(k) * unit
        direction = _CYCLE[(k - 2) % 4]
        origin, bounds = _attach(bounds, side, direction)
        squares.append(Square(origin, side, k, direction))
    return Tiling(tuple(squares), bounds, unit)


@dataclass(frozen=True)
class Arc:
    center: tuple[float, float]
    radius: float
    start: float  # radians, counterclockwise sweep from start to end
    end: float

    def point(self, angle):
        c, s = _unit(angle)
        return (self.center[0] + self.radius * c, self.center[1] + self.radius * s)

    @property
    def start_point(self):
        return self.point(self.start)

    @property
    def end_point(self):
        return self.point(self.end)


@dataclass(frozen=True)
class ArcChain:
    arcs: tuple[Arc, ...]
    junctions: tuple[tuple[float, float], ...]

    def focal_points(self):
        """Curvature jumps of the quarter-arc spiral, i.e. the arc junctions."""
        return list(self.junctions)


_AXES = ((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0))


def _unit(angle):
    """``(cos, sin)``, exact at multiples of a right angle so arc ends land on square corners."""
    q = angle / (math.pi / 2)
    k = round(q)
    if abs(q - k) < 1e-12:
        return _AXES[k % 4]
    return math.cos(angle), math.sin(angle)


def _arc_for_square(sq: Square) -> Arc:
    start_deg = (sq.direction - 90) % 360
    start = math.radians(start_deg)
    end = math.radians(start_deg + 90)
    qx = round(math.cos(start) + math.cos(end))
    qy = round(math.sin(start) + math.sin(end))
    x, y = sq.origin
    center = (x if qx > 0 else x + sq.side, y if qy > 0 else y + sq.side)
    return Arc(center, sq.side, start, end)


def spiral_from_tiling(t: Tiling) -> ArcChain:
    """One quarter arc per square, radius equal to the side, chained end to start."""
    t.validate()
    arcs = tuple(_arc_for_square(sq) for sq in t.squares)
    tol = 1e-9 * t.unit
    junctions = []
    for k in range(len(arcs) - 1):
        a = arcs[k].end_point
        b = arcs[k + 1].start_point
        gap = math.hypot(a[0] - b[0], a[1] - b[1])
        if gap > tol:
            raise InvariantError(f"arcs {k + 1} and {k + 2} are {gap} apart")
        junctions.append(b)
    return ArcChain(arcs, tuple(junctions))


def _line_intersection(p1, p2, q1, q2):
    d1 = (p2[0] - p1[0], p2[1] - p1[1])
    d2 = (q2[0] - q1[0], q2[1] - q1[1])
    den = d1[0] * d2[1] - d1[1] * d2[0]
    if den == 0:
        raise InvariantError("diagonals are parallel")
    s = ((q1[0] - p1[0]) * d2[1] - (q1[1] - p1[1]) * d2[0]) / den
    return (p1[0] + s * d1[0], p1[1] + s * d1[1])


def _diagonal_avoiding(bounds, corner):
    x0, y0, x1, y1 = bounds
    return (x0 + x1 - corner[0], corner[1]), (corner[0], y0 + y1 - corner[1])


def _nearest_corner(bounds, p):
    x0, y0, x1, y1 = bounds
    corners = [(x0, y0), (x1, y0), (x0, y1), (x1, y1)]
    return min(corners, key=lambda c: math.hypot(c[0] - p[0], c[1] - p[1]))


def spiral_pole(t: Tiling) -> tuple[float, float]:
    """Estimate the pole of the golden spiral.

    Each arc ends on a corner of its bounding rectangle; the pole is where the
    other diagonals of the last two bounding rectangles cross.
    """
    if len(t.squares) < 3:
        raise DomainError("pole estimate needs at least 3 squares")
    chain = spiral_from_tiling(t)
    boxes = [sq.corners for sq in t.squares[:-1]]
    prev_bounds = (
        min(b[0] for b in boxes),
        min(b[1] for b in boxes),
        max(b[2] for b in boxes),
        max(b[3] for b in boxes),
    )
    big = _diagonal_avoiding(t.bounds, _nearest_corner(t.bounds, chain.arcs[-1].end_point))
    small = _diagonal_avoiding(prev_bounds, _nearest_corner(prev_bounds, chain.arcs[-2].end_point))
    return _line_intersection(*big, *small)


def junction_distance_ratios(t: Tiling) -> list[float]:
    """Ratios of successive junction distances from the estimated pole (outer / inner)."""
    pole = spiral_pole(t)
    chain = spiral_from_tiling(t)
    dist = [math.hypot(j[0] - pole[0], j[1] - pole[1]) for j in chain.junctions]
    return [dist[k + 1] / dist[k] for k in range(len(dist) - 1)]


def log_spiral_points(a: float, theta0: float, theta1: float, steps: int) -> np.ndarray:
    """Sample ``r = a exp(b theta)`` with ``b = ln(phi)/(pi/2)``; returns a ``(steps, 2)`` array."""
    if not a > 0:
        raise DomainError(f"a must be positive, got {a!r}")
    if not theta1 > theta0:
        raise DomainError(f"need theta1 > theta0, got {theta0!r}, {theta1!r}")
    if isinstance(steps, bool) or not isinstance(steps, int) or steps < 2:
        raise DomainError(f"steps must be an integer >= 2, got {steps!r}")
    theta = np.linspace(theta0, theta1, steps)
    r = a * np.exp(LOG_SPIRAL_B * theta)
    return np.column_stack((r * np.cos(theta), r * np.sin(theta)))


@dataclass(frozen=True)
class GuideSet:
    """Compositional guides; every line is ``(x1, y1, x2, y2)``, rectangles are ``(x, y, w, h)``."""

    canvas: tuple[float, float]
    phi_lines: tuple[tuple[float, float, float, float], ...]
    thirds: tuple[tuple[float, float, float, float], ...]
    diagonals: tuple[tuple[float, float, float, float], ...]
    nested_rects: tuple[tuple[float, float, float, float], ...] = field(default=())

    def all_lines(self):
        return self.phi_lines + self.thirds + self.diagonals


def phi_guides(W: float, H: float, depth: int = 0) -> GuideSet:
    """Golden-section lines, thirds, diagonals, and ``depth`` nested rectangles.

    The nested rectangles have widths ``W / phi**k`` (``k = 0 .. depth-1``), keep the
    canvas aspect, and are anchored at the corner ``(W, H)``, the corner closest
    to the primary intersection ``(W/phi, H/phi)``.
    """
    if not (W > 0 and H > 0) or not (math.isfinite(W) and math.isfinite(H)):
        raise DomainError(f"canvas must have positive size, got {W!r} x {H!r}")
    if isinstance(depth, bool) or not isinstance(depth, int) or depth < 0:
        raise DomainError(f"depth must be an integer >= 0, got {depth!r}")
    xs = (W / PHI, W - W / PHI)
    ys = (H / PHI, H - H / PHI)
    phi_lines = tuple((x, 0.0, x, H) for x in xs) + tuple((0.0, y, W, y) for y in ys)
    thirds = (
        (W / 3, 0.0, W / 3, H),
        (2 * W / 3, 0.0, 2 * W / 3, H),
        (0.0, H / 3, W, H / 3),
        (0.0, 2 * H / 3, W, 2 * H / 3),
    )
    diagonals = ((0.0, 0.0, W, H), (0.0, H, W, 0.0))
    rects = []
    for k in range(depth):
        w = W / PHI**k
        h = H / PHI**k
        rects.append((W - w, H - h, w, h))
    return GuideSet((W, H), phi_lines, thirds, diagonals, tuple(rects))


@dataclass(frozen=True)
class DecayModel:
    """Luminance ``I(x) = i0 * exp(-k x)``."""

    i0: float
    k: float

    def __call__(self, x):
        return self.i0 * np.exp(-self.k * np.asarray(x, dtype=float))


def fit_exponential_decay(samples) -> DecayModel:
    """Least-squares line through ``(x, log I)``; exact on noiseless data."""
    data = np.asarray(samples, dtype=float)
    if data.ndim != 2 or data.shape[1] != 2:
        raise DomainError("samples must be a sequence of (x, I) pairs")
    x, intensity = data[:, 0], data[:, 1]
    if not np.all(np.isfinite(data)):
        raise DomainError("samples must be finite")
    if np.any(intensity <= 0):
        raise DomainError("intensities must be positive")
    if len(x) < 3:
        raise DomainError(f"need at least 3 samples, got {len(x)}")
    xm = x.mean()
    dx = x - xm
    sxx = float(dx @ dx)
    if sxx == 0.0:
        raise RankError("all samples share one x value")
    if len(np.unique(x)) != len(x):
        raise DomainError("sample x values must be distinct")
    y = np.log(intensity)
    ym = y.mean()
    slope = float(dx @ (y - ym)) / sxx
    return DecayModel(i0=math.exp(ym - slope * xm), k=-slope)


def fibonacci_spacing_score(coords, terms: int) -> float:
    """Largest relative deviation of the gap pattern from 1:1:2:3:5:8:...

    Gaps are normalised by the first gap; 0 means perfect Fibonacci spacing.
    """
    if isinstance(terms, bool) or not isinstance(terms, int) or terms < 3:
        raise DomainError(f"terms must be an integer >= 3, got {terms!r}")
    c = np.asarray(coords, dtype=float)
    if c.ndim != 1 or len(c) != terms + 1:
        raise DomainError(f"expected {terms + 1} coordinates, got {c.size}")
    gaps = np.diff(c)
    if np.any(gaps <= 0):
        raise DomainError("coordinates must be strictly increasing")
    target = np.array([fib_exact(k) for k in range(1, terms + 1)], dtype=float)
    return float(np.max(np.abs(gaps / gaps[0] - target) / target))
