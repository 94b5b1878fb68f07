"""Exact Fibonacci and Lucas arithmetic, identities, and combinatorial counters.

Index convention throughout: F(0) = 0, F(1) = 1. Python integers are
arbitrary precision, so exact values never overflow.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from fibgeom import kernels
from fibgeom.errors import DomainError, PrecisionError

BINET_MAX_N = 70
EXHAUSTIVE_MAX_M = 25


@dataclass(frozen=True)
class GoldenConstants:
    phi: float
    psi: float


GOLDEN = GoldenConstants(phi=(1 + math.sqrt(5)) / 2, psi=(1 - math.sqrt(5)) / 2)
PHI = GOLDEN.phi
PSI = GOLDEN.psi


class FibPair(NamedTuple):
    """``(F(n), F(n+1))``."""

    f_n: int
    f_n1: int


def _check_index(n, minimum=0):
    if isinstance(n, bool) or not isinstance(n, int):
        raise DomainError(f"index must be an integer, got {n!r}")
    if n < minimum:
        raise DomainError(f"index must be >= {minimum}, got {n}")


def fib_pair(n: int) -> FibPair:
    """Fast doubling: returns ``(F(n), F(n+1))`` in O(log n) big-int multiplications."""
    _check_index(n)
    a, b = 0, 1
    for bit in bin(n)[2:]:
        # (F(k), F(k+1)) -> (F(2k), F(2k+1))
        c = a * (2 * b - a)
        d = a * a + b * b
        a, b = (d, c + d) if bit == "1" else (c, d)
    return FibPair(a, b)


def fib_exact(n: int) -> int:
    return fib_pair(n).f_n


def lucas_exact(n: int) -> int:
    """L(n) with L(0) = 2, L(1) = 1, via L(n) = 2 F(n+1) - F(n)."""
    f_n, f_n1 = fib_pair(n)
    return 2 * f_n1 - f_n


def fib_matrix_power(n: int) -> tuple[tuple[int, int], tuple[int, int]]:
    """``[[1, 1], [1, 0]] ** n`` by exact square-and-multiply."""
    _check_index(n)

    def mul(x, y):
        return (
            (x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]),
            (x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]),
        )

    result = ((1, 0), (0, 1))
    base = ((1, 1), (1, 0))
    while n:
        if n & 1:
            result = mul(result, base)
        base = mul(base, base)
        n >>= 1
    return result


def binet_real(n: int) -> float:
    """Binet's closed form in double precision.

    Capped at ``n = 70``: past that the float result can drift by more than
    0.5 from the true integer, so rounding would no longer recover F(n).
    """
    _check_index(n)
    if n > BINET_MAX_N:
        raise PrecisionError(f"binet_real is exact to rounding only for n <= {BINET_MAX_N}, got {n}")
    return (PHI**n - PSI**n) / math.sqrt(5)


def successive_ratio(n: int, exact: bool = False) -> float | Fraction:
    """F(n+1)/F(n). With ``exact=True`` the ratio is returned as a Fraction."""
    _check_index(n, minimum=2)
    f_n, f_n1 = fib_pair(n)
    if exact:
        return Fraction(f_n1, f_n)
    # int / int is correctly rounded in Python
    return f_n1 / f_n


def pisano_period(k: int) -> int:
    """Smallest p > 0 with F(p) = 0 and F(p+1) = 1 (mod k), by direct scan."""
    _check_index(k, minimum=2)
    a, b = 0, 1
    # the period never exceeds 6k
    for p in range(1, 6 * k + 1):
        a, b = b, (a + b) % k
        if a == 0 and b == 1:
            return p
    raise AssertionError(f"no Pisano period found for k={k} within 6k")


def count_strip_tilings(m: int) -> int:
    """Count tilings of a 1 x m strip by 1x1 and 1x2 tiles by exhaustive depth-first enumeration."""
    _check_index(m)
    if m > EXHAUSTIVE_MAX_M:
        raise DomainError(f"exhaustive enumeration is capped at m <= {EXHAUSTIVE_MAX_M}, got {m}")
    count = 0
    stack = [0]
    while stack:
        covered = stack.pop()
        if covered == m:
            count += 1
            continue
        stack.append(covered + 1)
        if covered + 2 <= m:
            stack.append(covered + 2)
    return count


def count_no_adjacent_ones(m: int) -> int:
    """Count length-m binary strings with no two adjacent ones by scanning all 2**m strings.

    The result is F(m+2). (The often quoted "length n-1 gives F(n)" is off by one.)
    """
    _check_index(m)
    if m > EXHAUSTIVE_MAX_M:
        raise DomainError(f"exhaustive enumeration is capped at m <= {EXHAUSTIVE_MAX_M}, got {m}")
    return kernels.count_no_adjacent_ones(m)


def fib_table(n: int, mod: int | None = None, lucas: bool = False) -> list[dict]:
    """Rows ``n, F, [L], ratio, [F mod k]`` for indices ``0..n``; ratio is blank where F(n) = 0."""
    _check_index(n)
    if mod is not None:
        _check_index(mod, minimum=2)
    rows = []
    a, b = 0, 1
    for i in range(n + 1):
        row = {"n": i, "F": a}
        if lucas:
            row["L"] = 2 * b - a
        row["ratio"] = b / a if a else None
        if mod is not None:
            row[f"F_mod_{mod}"] = a % mod
        rows.append(row)
        a, b = b, a + b
    return rows
