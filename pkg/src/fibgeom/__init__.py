"""Fibonacci geometry: exact sequences, golden layouts, substitution chains,
IFS measures, multi-view projections and frame reconstruction."""
from fibgeom.errors import (
    DomainError,
    FibGeomError,
    InvariantError,
    PrecisionError,
    RankError,
    SizeError,
    ValidationError,
)
from fibgeom.fibonacci import PHI, PSI, binet_real, fib_exact, lucas_exact, pisano_period, successive_ratio
from fibgeom.kernels import BACKEND

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DomainError",
    "FibGeomError",
    "InvariantError",
    "PHI",
    "PSI",
    "PrecisionError",
    "RankError",
    "SizeError",
    "ValidationError",
    "binet_real",
    "fib_exact",
    "lucas_exact",
    "pisano_period",
    "successive_ratio",
]
