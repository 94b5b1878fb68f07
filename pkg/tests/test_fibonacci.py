import itertools
import math
from decimal import Decimal, getcontext
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fibgeom.errors import DomainError, PrecisionError
from fibgeom.fibonacci import (
    GOLDEN,
    PHI,
    binet_real,
    count_no_adjacent_ones,
    count_strip_tilings,
    fib_exact,
    fib_matrix_power,
    fib_pair,
    fib_table,
    lucas_exact,
    pisano_period,
    successive_ratio,
)


def naive_fib(n):
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def naive_lucas(n):
    a, b = 2, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def brute_pisano(k):
    """Minimal period of (F(n) mod k) found by comparing the sequence with its shifts."""
    seq = [naive_fib(i) % k for i in range(12 * k + 2)]
    for p in range(1, 6 * k + 1):
        if all(seq[i] == seq[i + p] for i in range(6 * k)):
            return p


@pytest.mark.parametrize("n, expected", [(7, 13), (0, 0), (1, 1), (50, 12586269025)])
def test_fib_exact_examples(n, expected):
    assert fib_exact(n) == expected
    assert naive_fib(n) == expected


def test_fib_matches_naive_recurrence():
    for n in range(0, 301):
        assert fib_exact(n) == naive_fib(n)


def test_no_overflow_past_f93():
    assert fib_exact(94) == 19740274219868223167
    assert fib_exact(94) > 2**64


@pytest.mark.parametrize("bad", [-1, -10, 2.0, True, "3"])
def test_fib_rejects_bad_index(bad):
    with pytest.raises(DomainError):
        fib_exact(bad)


@pytest.mark.parametrize("n, expected", [(0, 2), (1, 1), (6, 18), (10, 123)])
def test_lucas_examples(n, expected):
    assert lucas_exact(n) == expected
    assert naive_lucas(n) == expected


def test_lucas_identity():
    for n in range(1, 200):
        assert lucas_exact(n) == fib_exact(n - 1) + fib_exact(n + 1)


def test_lucas_rejects_negative():
    with pytest.raises(DomainError):
        lucas_exact(-1)


def test_fib_pair():
    for n in range(50):
        assert fib_pair(n) == (naive_fib(n), naive_fib(n + 1))


def test_golden_constants():
    assert abs(GOLDEN.phi * GOLDEN.psi + 1) < 1e-12
    assert abs(GOLDEN.phi - GOLDEN.psi - math.sqrt(5)) < 1e-12


@pytest.mark.parametrize("n, expected, tol", [(10, 55.0, 1e-6), (1, 1.0, 1e-12), (40, 102334155.0, 0.5)])
def test_binet_examples(n, expected, tol):
    assert abs(binet_real(n) - expected) < tol


def test_binet_rounds_to_exact_up_to_cap():
    for n in range(0, 71):
        assert abs(binet_real(n) - fib_exact(n)) < 0.5
        assert round(binet_real(n)) == fib_exact(n)


def test_binet_cap():
    with pytest.raises(PrecisionError):
        binet_real(71)


def test_successive_ratio_examples():
    assert successive_ratio(2) == 2.0
    assert successive_ratio(10) == 89 / 55
    assert successive_ratio(10, exact=True) == Fraction(89, 55)
    assert abs(successive_ratio(40) - PHI) <= 1e-15


@pytest.mark.parametrize("bad", [0, 1, -3])
def test_successive_ratio_domain(bad):
    with pytest.raises(DomainError):
        successive_ratio(bad)


def test_ratio_convergence_and_alternation():
    getcontext().prec = 80
    phi = (1 + Decimal(5).sqrt()) / 2
    prev_sign = None
    for n in range(30, 71):
        assert abs(successive_ratio(n) - PHI) < 1e-10
        r = successive_ratio(n, exact=True)
        diff = Decimal(r.numerator) / Decimal(r.denominator) - phi
        sign = diff > 0
        if prev_sign is not None:
            assert sign != prev_sign
        prev_sign = sign


def test_matrix_power_identity():
    for n in range(1, 91):
        (a, b), (c, d) = fib_matrix_power(n)
        assert (a, b, c, d) == (naive_fib(n + 1), naive_fib(n), naive_fib(n), naive_fib(n - 1))


def test_gcd_identity():
    assert math.gcd(fib_exact(12), fib_exact(18)) == 8 == fib_exact(6)
    for m in range(1, 61):
        for n in range(1, 61):
            assert math.gcd(fib_exact(m), fib_exact(n)) == fib_exact(math.gcd(m, n))


@pytest.mark.parametrize("k, expected", [(2, 3), (10, 60), (7, 16)])
def test_pisano_examples(k, expected):
    assert pisano_period(k) == expected
    assert brute_pisano(k) == expected


def test_pisano_matches_brute_force():
    for k in range(2, 60):
        assert pisano_period(k) == brute_pisano(k)


def test_pisano_repeats():
    for k in range(2, 201):
        p = pisano_period(k)
        seq = [fib_exact(i) % k for i in range(2 * p)]
        assert seq[p:] == seq[:p]


def test_pisano_domain():
    with pytest.raises(DomainError):
        pisano_period(1)


def brute_tilings(m):
    """Count ordered {1,2} sequences summing to m by listing every candidate sequence."""
    count = 0
    for length in range(m + 1):
        for parts in itertools.product((1, 2), repeat=length):
            if sum(parts) == m:
                count += 1
    return count


def brute_strings(m):
    return sum(1 for s in itertools.product("01", repeat=m) if "11" not in "".join(s))


@pytest.mark.parametrize("m, expected", [(0, 1), (4, 5), (10, 89)])
def test_strip_tiling_examples(m, expected):
    assert count_strip_tilings(m) == expected
    assert brute_tilings(m) == expected


@pytest.mark.parametrize("m, expected", [(0, 1), (3, 5), (4, 8)])
def test_no_adjacent_examples(m, expected):
    assert count_no_adjacent_ones(m) == expected
    assert brute_strings(m) == expected


def test_combinatorial_counts_match_fibonacci():
    for m in range(0, 21):
        assert count_strip_tilings(m) == fib_exact(m + 1)
        assert count_no_adjacent_ones(m) == fib_exact(m + 2)


def test_binary_string_index_is_not_the_quoted_one():
    # "strings of length n-1 counted by F(n)" would give F(4) = 3 for length 3; the true count is 5
    assert count_no_adjacent_ones(3) == 5 != fib_exact(4)


def test_exhaustive_cap():
    assert count_no_adjacent_ones(25) == fib_exact(27)
    with pytest.raises(DomainError):
        count_strip_tilings(26)
    with pytest.raises(DomainError):
        count_no_adjacent_ones(26)


def test_fib_table():
    rows = fib_table(10, mod=10, lucas=True)
    assert [r["F"] for r in rows] == [naive_fib(i) for i in range(11)]
    assert rows[6]["L"] == 18
    assert rows[0]["ratio"] is None
    assert rows[10]["ratio"] == 89 / 55
    assert rows[7]["F_mod_10"] == 3


@given(st.integers(min_value=0, max_value=2000))
def test_recurrence_property(n):
    assert fib_exact(n + 2) == fib_exact(n + 1) + fib_exact(n)


@given(st.integers(min_value=0, max_value=500), st.integers(min_value=0, max_value=500))
def test_addition_formula(m, n):
    # F(m+n) = F(m) F(n+1) + F(m-1) F(n), written for m >= 0 via F(m+1) - F(m)
    f_m1 = fib_exact(m + 1) - fib_exact(m) if m else 1
    assert fib_exact(m + n) == fib_exact(m) * fib_exact(n + 1) + f_m1 * fib_exact(n)


def test_bigint_decimal_roundtrip():
    v = fib_exact(300)
    assert int(str(v)) == v
