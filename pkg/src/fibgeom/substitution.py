"""Fibonacci substitution a -> ab, b -> a, its spectrum, and the 1D quasicrystal chain."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from fibgeom.errors import DomainError, SizeError
from fibgeom.fibonacci import PHI

MAX_WORD_ITERS = 35
MAX_CHAIN_ITERS = 30
SAFE_WINDOW_FRACTION = 0.8
TILE_LENGTHS = {"a": PHI, "b": 1.0}

SUBSTITUTION_MATRIX = np.array([[1, 1], [1, 0]])


def _check_iters(n, cap):
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise DomainError(f"iteration count must be an integer >= 0, got {n!r}")
    if n > cap:
        raise SizeError(f"iteration count capped at {cap}, got {n}")


def substitute(word: str) -> str:
    """Apply one step of a -> ab, b -> a."""
    # "A" is a placeholder so the b -> a rewrite does not touch fresh a's
    return word.replace("a", "A").replace("b", "a").replace("A", "ab")


def iterate_substitution(n: int) -> str:
    """Return sigma^n("a"). Its length is F(n+2)."""
    _check_iters(n, MAX_WORD_ITERS)
    word = "a"
    for _ in range(n):
        word = substitute(word)
    return word


@dataclass(frozen=True)
class SpectrumReport:
    eigenvalues: tuple[float, float]
    frequency_vector: tuple[float, float]


def substitution_spectrum() -> SpectrumReport:
    """Eigenvalues of the substitution matrix and its normalised Perron eigenvector."""
    values, vectors = np.linalg.eigh(SUBSTITUTION_MATRIX.astype(float))
    order = np.argsort(values)[::-1]
    values = values[order]
    perron = np.abs(vectors[:, order[0]])
    freq = perron / perron.sum()
    return SpectrumReport((float(values[0]), float(values[1])), (float(freq[0]), float(freq[1])))


def letter_ratio(w: str) -> float:
    """(# of a) / (# of b)."""
    nb = w.count("b")
    if nb == 0:
        raise DomainError("letter ratio is undefined for a word without b")
    return w.count("a") / nb


def letter_counts(w: str) -> tuple[int, int]:
    return w.count("a"), w.count("b")


@dataclass(frozen=True)
class Chain:
    """Fibonacci chain: tiles of sigma^n(a) laid end to end, a of length phi, b of length 1."""

    points: np.ndarray  # left endpoints, strictly increasing, starting at 0
    tile_types: str
    n: int

    @property
    def total_length(self) -> float:
        na, nb = letter_counts(self.tile_types)
        return na * PHI + nb

    def __len__(self):
        return len(self.tile_types)

    def to_csv_rows(self):
        return [(i, t, float(p)) for i, (t, p) in enumerate(zip(self.tile_types, self.points))]


def build_chain(n: int) -> Chain:
    """Chain for sigma^n(a). Each left endpoint is computed as ``#a * phi + #b`` of
    its prefix, so rounding does not accumulate along the chain."""
    _check_iters(n, MAX_CHAIN_ITERS)
    word = iterate_substitution(n)
    is_a = np.frombuffer(word.encode("ascii"), dtype=np.uint8) == ord("a")
    na = np.concatenate(([0], np.cumsum(is_a)[:-1]))
    idx = np.arange(len(word))
    nb = idx - na
    points = na * PHI + nb
    return Chain(points=points, tile_types=word, n=n)


@dataclass(frozen=True)
class InflationReport:
    matched: int
    unmatched: int
    max_dist: float
    window: tuple[float, float]


def inflation_residual(c: Chain, tol: float = 1e-9) -> InflationReport:
    """Check that ``phi*L`` and ``phi*L + phi`` land on the points of the next chain.

    The offset is the long-tile length. With tiles normalised to a = 1, b = 1/phi
    it reads ``L = phi L u (phi L + 1)``; here tiles are scaled by phi.
    Only inflated points inside ``[0, 0.8 * total_length]`` are checked, which
    keeps away from the finite chain's right edge.
    """
    if len(c) == 0:
        raise DomainError("chain is empty")
    if c.n < 4:
        raise DomainError(f"inflation check needs a chain with n >= 4, got n={c.n}")
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    refined = build_chain(c.n + 1).points
    inflated = np.concatenate((PHI * c.points, PHI * c.points + TILE_LENGTHS["a"]))
    hi = SAFE_WINDOW_FRACTION * c.total_length
    inflated = np.sort(inflated[(inflated >= 0) & (inflated <= hi)])
    pos = np.searchsorted(refined, inflated)
    left = refined[np.clip(pos - 1, 0, len(refined) - 1)]
    right = refined[np.clip(pos, 0, len(refined) - 1)]
    dist = np.minimum(np.abs(inflated - left), np.abs(inflated - right))
    ok = dist <= tol
    max_dist = float(dist[ok].max()) if np.any(ok) else 0.0
    return InflationReport(int(ok.sum()), int((~ok).sum()), max_dist, (0.0, float(hi)))
