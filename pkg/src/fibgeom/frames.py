"""Finite frames of raster atoms: Gram matrix, canonical dual, analysis/synthesis,
and reconstruction after coefficient erasures.

Inner products are plain sums over cells.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from fibgeom.errors import DomainError
from fibgeom.projection import Scene, element_mask

RANK_RTOL = 1e-10
RECONSTRUCTION_RTOL = 1e-8


@dataclass(frozen=True)
class AtomSet:
    """Atoms sharing one grid shape (usually ``g x g``)."""

    atoms: np.ndarray  # (K, *shape)
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        a = np.asarray(self.atoms, dtype=float)
        if a.ndim < 2 or a.shape[0] == 0:
            raise DomainError("need at least one atom")
        flat = a.reshape(a.shape[0], -1)
        zero = np.flatnonzero(~np.any(flat != 0, axis=1))
        if zero.size:
            raise DomainError(f"atom {int(zero[0])} is identically zero")
        labels = tuple(self.labels) or tuple(f"atom {k}" for k in range(a.shape[0]))
        if len(labels) != a.shape[0]:
            raise DomainError("one label per atom")
        object.__setattr__(self, "atoms", a)
        object.__setattr__(self, "labels", labels)

    def __len__(self):
        return self.atoms.shape[0]

    @property
    def shape(self):
        return self.atoms.shape[1:]

    @property
    def matrix(self) -> np.ndarray:
        """Atoms as rows of a ``K x cells`` matrix."""
        return self.atoms.reshape(len(self), -1)

    def subset(self, keep) -> "AtomSet":
        keep = list(keep)
        return AtomSet(self.atoms[keep], tuple(self.labels[k] for k in keep))


def atoms_from_scene(s: Scene, g: int) -> AtomSet:
    """One indicator atom per scene element (colour dropped)."""
    if not s.elements:
        raise DomainError("scene has no elements")
    atoms = []
    for k, e in enumerate(s.elements):
        mask = element_mask(e, g)
        if not mask.any():
            name = e.label or f"{e.shape} #{k}"
            raise DomainError(f"element {k} ({name}) covers no cell centre of the canvas")
        atoms.append(mask.astype(float))
    return AtomSet(np.stack(atoms), tuple(e.label or f"{e.shape} #{k}" for k, e in enumerate(s.elements)))


@dataclass(frozen=True)
class FrameData:
    gram: np.ndarray
    gram_pinv: np.ndarray
    dual_atoms: np.ndarray  # same shape as the atom stack
    rank: int
    eigenvalues: np.ndarray  # Gram eigenvalues, descending

    @property
    def condition_estimate(self) -> float:
        """Ratio of largest to smallest nonzero Gram eigenvalue."""
        nz = self.eigenvalues[: self.rank]
        return float(nz[0] / nz[-1]) if self.rank else float("inf")


def compute_frame(atoms: AtomSet) -> FrameData:
    """Gram matrix and canonical dual ``g_k = sum_j (G^+)_{kj} phi_j``."""
    X = atoms.matrix
    G = X @ X.T
    G = 0.5 * (G + G.T)
    w, V = np.linalg.eigh(G)
    order = np.argsort(w)[::-1]
    w, V = w[order], V[:, order]
    norm = float(w[0]) if w.size else 0.0
    keep = w > RANK_RTOL * norm
    rank = int(keep.sum())
    Vk = V[:, keep]
    pinv = (Vk / w[keep]) @ Vk.T
    duals = (pinv @ X).reshape(atoms.atoms.shape)
    return FrameData(G, pinv, duals, rank, w)


def _check_field(f, atoms: AtomSet):
    arr = np.asarray(f.grid if hasattr(f, "grid") else f, dtype=float)
    if arr.shape != atoms.shape:
        raise DomainError(f"field shape {arr.shape} does not match atom grid {atoms.shape}")
    return arr


def analyze(f, atoms: AtomSet, frame: FrameData | None = None) -> np.ndarray:
    """Coefficients ``<f, g_k>`` against the canonical dual atoms."""
    arr = _check_field(f, atoms)
    frame = frame or compute_frame(atoms)
    return frame.dual_atoms.reshape(len(atoms), -1) @ arr.ravel()


def synthesize(coeffs, atoms: AtomSet) -> np.ndarray:
    """``sum_k c_k phi_k``."""
    c = np.asarray(coeffs, dtype=float)
    if c.shape != (len(atoms),):
        raise DomainError(f"expected {len(atoms)} coefficients, got shape {c.shape}")
    return (c @ atoms.matrix).reshape(atoms.shape)


def reconstruct(f, atoms: AtomSet, frame: FrameData | None = None) -> np.ndarray:
    return synthesize(analyze(f, atoms, frame), atoms)


@dataclass(frozen=True)
class ErasureReport:
    erased: tuple[int, ...]
    reconstructible: bool
    residual_norm: float
    condition_estimate: float
    surviving_rank: int

    def to_dict(self):
        return {
            "erased": list(self.erased),
            "reconstructible": self.reconstructible,
            "residual_norm": self.residual_norm,
            "condition_estimate": self.condition_estimate,
            "surviving_rank": self.surviving_rank,
        }


def erasure_test(f, atoms: AtomSet, erased) -> ErasureReport:
    """Drop the erased coefficients, rebuild the dual from the survivors, and reconstruct."""
    arr = _check_field(f, atoms)
    erased = tuple(sorted(set(int(i) for i in erased)))
    if any(not 0 <= i < len(atoms) for i in erased):
        raise DomainError(f"erased indices {erased} out of range for {len(atoms)} atoms")
    survivors = [k for k in range(len(atoms)) if k not in erased]
    if not survivors:
        raise DomainError("cannot erase every atom")
    sub = atoms.subset(survivors)
    frame = compute_frame(sub)
    rec = reconstruct(arr, sub, frame)
    residual = float(np.linalg.norm(arr - rec))
    ok = residual <= RECONSTRUCTION_RTOL * float(np.linalg.norm(arr))
    return ErasureReport(erased, ok, residual, frame.condition_estimate, frame.rank)
