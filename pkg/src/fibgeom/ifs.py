"""Affine iterated function systems: chaos game, measure rasters, Moran dimension."""
from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from fibgeom import kernels
from fibgeom.errors import DomainError, ValidationError

RNG_ALGORITHM = "numpy.PCG64/SeedSequence([seed, chain])"
DEFAULT_BURN_IN = 64
OUTSIDE_TOLERANCE = 1e-3
MORAN_TOL = 1e-12
MORAN_MAX_ITER = 200


def spectral_norm_2x2(A) -> float:
    """Largest singular value of a 2x2 matrix from the closed form."""
    (a, b), (c, d) = np.asarray(A, dtype=float)
    fro = a * a + b * b + c * c + d * d
    det = a * d - b * c
    disc = math.sqrt(max(fro * fro - 4 * det * det, 0.0))
    return math.sqrt((fro + disc) / 2)


@dataclass(frozen=True)
class AffineMap2:
    linear: np.ndarray
    offset: np.ndarray

    def __post_init__(self):
        lin = np.asarray(self.linear, dtype=float).reshape(2, 2)
        off = np.asarray(self.offset, dtype=float).reshape(2)
        object.__setattr__(self, "linear", lin)
        object.__setattr__(self, "offset", off)

    @classmethod
    def from_row(cls, row):
        """``[a11, a12, a21, a22, b1, b2]``."""
        if len(row) != 6:
            raise DomainError(f"an affine map row needs 6 numbers, got {len(row)}")
        a11, a12, a21, a22, b1, b2 = (float(v) for v in row)
        return cls(np.array([[a11, a12], [a21, a22]]), np.array([b1, b2]))

    def to_row(self):
        return [*self.linear.ravel().tolist(), *self.offset.tolist()]

    def __call__(self, points):
        return np.asarray(points, dtype=float) @ self.linear.T + self.offset

    @property
    def contraction(self) -> float:
        return spectral_norm_2x2(self.linear)

    @property
    def determinant(self) -> float:
        return float(np.linalg.det(self.linear))

    def fixed_point(self):
        return np.linalg.solve(np.eye(2) - self.linear, self.offset)


@dataclass(frozen=True)
class IfsSystem:
    maps: tuple[AffineMap2, ...]
    probabilities: tuple[float, ...] = field(default=())

    def __post_init__(self):
        maps = tuple(self.maps)
        if not maps:
            raise ValidationError("an IFS needs at least one map")
        probs = tuple(float(p) for p in self.probabilities) or tuple(1.0 / len(maps) for _ in maps)
        if len(probs) != len(maps):
            raise ValidationError(f"{len(maps)} maps but {len(probs)} probabilities")
        if any(not p > 0 for p in probs):
            raise ValidationError("probabilities must be positive")
        if abs(math.fsum(probs) - 1.0) > 1e-12:
            raise ValidationError(f"probabilities sum to {math.fsum(probs)!r}, not 1")
        for i, m in enumerate(maps):
            c = m.contraction
            if not c < 1:
                raise ValidationError(f"map {i} is not contractive: largest singular value {c!r}")
        object.__setattr__(self, "maps", maps)
        object.__setattr__(self, "probabilities", probs)

    @classmethod
    def from_json(cls, text_or_obj):
        obj = json.loads(text_or_obj) if isinstance(text_or_obj, (str, bytes)) else text_or_obj
        try:
            rows = obj["maps"]
        except (KeyError, TypeError):
            raise ValidationError("IFS JSON needs a 'maps' array of 6-number rows") from None
        return cls(tuple(AffineMap2.from_row(r) for r in rows), tuple(obj.get("probabilities", ())))

    def to_json(self):
        return json.dumps({"maps": [m.to_row() for m in self.maps], "probabilities": list(self.probabilities)})

    @property
    def contraction(self) -> float:
        return max(m.contraction for m in self.maps)

    def bounding_radius(self) -> float:
        """Radius about the origin of a ball mapped into itself by every map; contains the attractor."""
        return max(float(np.hypot(*m.offset)) for m in self.maps) / (1 - self.contraction)

    def similarity_ratios(self, rtol=1e-12):
        """Contraction ratios if every map is a similarity, else None."""
        ratios = []
        for m in self.maps:
            s = np.linalg.svd(m.linear, compute_uv=False)
            if abs(s[0] - s[1]) > rtol * max(s[0], 1e-300):
                return None
            ratios.append(float(s[0]))
        return ratios

    def _stacked(self):
        A = np.stack([m.linear for m in self.maps])
        b = np.stack([m.offset for m in self.maps])
        return A, b


def sierpinski_system() -> IfsSystem:
    """Three half-scale maps toward the corners (0,0), (1,0), (0,1)."""
    half = np.eye(2) / 2
    return IfsSystem(tuple(AffineMap2(half, off) for off in ([0, 0], [0.5, 0], [0, 0.5])))


def moran_bisection(ratios, tol: float = MORAN_TOL, max_iter: int = MORAN_MAX_ITER) -> tuple[float, int]:
    """Solve ``sum r_i**d = 1`` by bisection; returns ``(d, iterations)``."""
    r = np.asarray(list(ratios), dtype=float)
    if r.size == 0:
        raise DomainError("need at least one ratio")
    if np.any(~(r > 0)) or np.any(~(r < 1)):
        raise DomainError(f"ratios must lie in (0, 1), got {r.tolist()}")

    def excess(d):
        return math.fsum((r**d).tolist()) - 1.0

    lo, hi = 0.0, 1.0
    if excess(lo) < 0:
        raise DomainError("bracket check failed at d = 0")
    while excess(hi) > 0:
        lo, hi = hi, 2 * hi
    iterations = 0
    while hi - lo > tol:
        if iterations >= max_iter:
            raise DomainError(f"bisection did not reach {tol} within {max_iter} iterations")
        mid = 0.5 * (lo + hi)
        if excess(mid) > 0:
            lo = mid
        else:
            hi = mid
        iterations += 1
    return 0.5 * (lo + hi), iterations


def moran_dimension(ratios) -> float:
    return moran_bisection(ratios)[0]


@dataclass(frozen=True)
class PointCloud:
    points: np.ndarray
    seed: int
    burn_in: int
    n_chains: int = 1
    rng: str = RNG_ALGORITHM


def _chain_lengths(n_points, n_chains):
    base, rem = divmod(n_points, n_chains)
    return [base + (1 if i < rem else 0) for i in range(n_chains)]


def _run_chain(sys: IfsSystem, A, b, length, seed, chain, burn_in):
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, chain])))
    idx = rng.choice(len(sys.maps), size=length + burn_in, p=np.asarray(sys.probabilities))
    return kernels.chaos_iterate(A, b, idx.astype(np.int64), 0.0, 0.0, burn_in)


def chaos_game(
    sys: IfsSystem,
    n_points: int,
    seed: int = 0,
    burn_in: int = DEFAULT_BURN_IN,
    n_chains: int = 1,
    workers: int = 1,
) -> PointCloud:
    """Random iteration from the origin with map ``i`` drawn with probability ``p_i``.

    ``n_chains`` independent chains are seeded from ``(seed, chain index)`` and
    concatenated in chain order, so the output never depends on ``workers``.
    """
    if not isinstance(sys, IfsSystem):
        raise ValidationError("sys must be an IfsSystem")
    for name, v, lo in (("n_points", n_points, 1), ("burn_in", burn_in, 0), ("n_chains", n_chains, 1), ("workers", workers, 1), ("seed", seed, 0)):
        if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < lo:
            raise DomainError(f"{name} must be an integer >= {lo}, got {v!r}")
    if n_chains > n_points:
        raise DomainError("more chains than points")
    A, b = sys._stacked()
    lengths = _chain_lengths(n_points, n_chains)
    jobs = [(sys, A, b, length, int(seed), i, burn_in) for i, length in enumerate(lengths)]
    if workers == 1 or n_chains == 1:
        parts = [_run_chain(*job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda job: _run_chain(*job), jobs))
    return PointCloud(np.concatenate(parts), int(seed), burn_in, n_chains)


@dataclass(frozen=True)
class RasterField:
    """Grid of samples over ``box = (xmin, ymin, xmax, ymax)``.

    ``grid[iy, ix]`` with row 0 at ``ymin``; shape ``(g, g)`` or ``(g, g, 3)``.
    """

    grid: np.ndarray
    box: tuple[float, float, float, float] = (0.0, 0.0, 1.0, 1.0)
    outside: int = 0

    @property
    def g(self):
        return self.grid.shape[0]

    @property
    def channels(self):
        return 1 if self.grid.ndim == 2 else self.grid.shape[2]


def _check_box(box):
    xmin, ymin, xmax, ymax = (float(v) for v in box)
    if not (xmax > xmin and ymax > ymin):
        raise DomainError(f"box must have positive extent, got {box!r}")
    return xmin, ymin, xmax, ymax


def rasterize_measure(cloud: PointCloud, box, g: int) -> RasterField:
    """Histogram the cloud on a ``g x g`` grid and normalise to total mass 1.

    Points outside ``box`` are counted in ``RasterField.outside``; more than
    0.1% outside is an error.
    """
    if isinstance(g, bool) or not isinstance(g, int) or g < 8:
        raise DomainError(f"grid size must be an integer >= 8, got {g!r}")
    xmin, ymin, xmax, ymax = _check_box(box)
    pts = np.asarray(cloud.points if isinstance(cloud, PointCloud) else cloud, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        raise DomainError("empty point cloud")
    counts, outside = kernels.histogram2d(pts, xmin, ymin, xmax, ymax, g)
    if outside > OUTSIDE_TOLERANCE * len(pts):
        raise DomainError(f"{outside} of {len(pts)} points fall outside the box {box!r}")
    total = counts.sum()
    if total == 0:
        raise DomainError("no points inside the box")
    return RasterField(counts / total, (xmin, ymin, xmax, ymax), int(outside))


def pushforward_field(field: RasterField, sys: IfsSystem) -> np.ndarray:
    """``sum_i p_i (field o T_i^-1)`` with each cell's mass moved to the cell of its mapped centre."""
    A, b = sys._stacked()
    pushed, _lost = kernels.pushforward(
        np.ascontiguousarray(field.grid, dtype=float), A, b, np.asarray(sys.probabilities), *field.box
    )
    return pushed


def invariance_residual(field: RasterField, sys: IfsSystem) -> float:
    """L1 distance between a measure raster and its pushforward under the IFS."""
    grid = np.asarray(field.grid)
    if grid.ndim != 2 or grid.shape[0] != grid.shape[1]:
        raise DomainError(f"expected a square single-channel grid, got shape {grid.shape}")
    _check_box(field.box)
    return float(np.abs(pushforward_field(field, sys) - grid).sum())


def deterministic_attractor(sys: IfsSystem, depth: int, start=(0.0, 0.0)) -> np.ndarray:
    """All images of ``start`` under words of length ``depth``; a cross-check for small systems."""
    if len(sys.maps) > 4 or depth > 8:
        raise DomainError("deterministic iteration is limited to depth <= 8 and <= 4 maps")
    pts = np.asarray([start], dtype=float)
    for _ in range(depth):
        pts = np.concatenate([m(pts) for m in sys.maps])
    return pts
