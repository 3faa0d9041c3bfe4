import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coprimeperm.primes import (
    BoundedReal,
    PrimeBasis,
    as_primes,
    constant_c,
    euler_factor,
    log_euler_factor,
    paper_params,
    sieve_primes,
)


def trial_division_primes(limit):
    return [m for m in range(2, limit + 1) if all(m % d for d in range(2, math.isqrt(m) + 1))]


@pytest.mark.parametrize(
    "limit, expected",
    [(10, [2, 3, 5, 7]), (1, []), (0, []), (30, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29])],
)
def test_sieve_examples(limit, expected):
    assert sieve_primes(limit) == expected


def test_sieve_matches_trial_division_up_to_1e4():
    reference = trial_division_primes(10**4)
    assert sieve_primes(10**4) == reference
    # every prefix, not only the full range
    for limit in range(0, 2000):
        assert sieve_primes(limit) == [p for p in reference if p <= limit]


def test_prime_basis_invariants():
    b = PrimeBasis(13)
    assert b.primes == (2, 3, 5, 7, 11, 13)
    assert PrimeBasis(13, exclude_two=True).primes == (3, 5, 7, 11, 13)
    assert 7 in b and 9 not in b
    assert as_primes([5, 3, 3]) == (3, 5)
    with pytest.raises(ValueError):
        as_primes([3, 9])


def test_paper_params_values():
    n = 10**6
    par = paper_params(n)
    assert par.W == pytest.approx(math.exp(2**-10 * math.sqrt(math.log(n) * math.log(math.log(n)))), rel=1e-15)
    par16 = paper_params(16)
    assert par16.k == pytest.approx(2**-5 * math.sqrt(math.log(16) / math.log(math.log(16))), rel=1e-15)
    for p in (par, par16):
        assert p.alpha == pytest.approx(math.exp(-p.k * math.log(p.k)), rel=1e-15)


def test_paper_params_monotone():
    grid = [paper_params(n) for n in (16, 10**2, 10**4, 10**6, 10**9)]
    assert all(a.W < b.W for a, b in zip(grid, grid[1:]))
    assert all(a.k < b.k for a, b in zip(grid, grid[1:]))


@pytest.mark.parametrize("n", [0, 1, 15])
def test_paper_params_rejects_small_n(n):
    with pytest.raises(ValueError):
        paper_params(n)


def test_euler_factor_small_primes():
    assert euler_factor(2) == BoundedReal(0.5, 0.5)
    f3 = euler_factor(3)
    assert 2 ** (4 / 3) / 3 in f3
    assert f3.mid == pytest.approx(0.8399473666, abs=1e-10)
    assert f3.width < 1e-14


def direct_euler_factor(p):
    return (p - 1) ** (2 * (1 - 1 / p)) / (p * (p - 2) ** (1 - 2 / p))


@pytest.mark.parametrize("p", [5, 7, 11, 101, 997])
def test_euler_factor_agrees_with_direct_formula(p):
    assert euler_factor(p).mid == pytest.approx(direct_euler_factor(p), rel=1e-13)


def test_euler_factor_large_prime():
    p = 10**5 + 3
    f = euler_factor(p)
    assert 1 - 3 / p**2 < f.lo and f.hi < 1


def test_log_factor_near_minus_inverse_square():
    # log factor = -1/p^2 + O(1/p^3)
    for p in (1009, 10007, 100003):
        assert log_euler_factor(p).mid * p**2 == pytest.approx(-1, abs=5 / p)


@settings(max_examples=200, deadline=None)
@given(
    st.fractions(min_value=-100, max_value=100, max_denominator=1000),
    st.fractions(min_value=-100, max_value=100, max_denominator=1000),
)
def test_bounded_real_encloses_rational_arithmetic(x, y):
    X, Y = BoundedReal.exact(x), BoundedReal.exact(y)
    for got, exact in ((X + Y, x + y), (X - Y, x - y), (X * Y, x * y)):
        assert Fraction(got.lo) <= exact <= Fraction(got.hi)
    if y != 0:
        q = X / Y
        assert Fraction(q.lo) <= x / y <= Fraction(q.hi)


def test_bounded_real_rejects_inverted():
    with pytest.raises(ValueError):
        BoundedReal(1.0, 0.0)


def test_constant_cutoff_three_encloses_finite_product():
    c = constant_c(3)
    assert 0.5 * 2 ** (4 / 3) / 3 in c
    assert c.lo < c.hi


def test_constant_nested_and_bracketed():
    cutoffs = [3, 10, 100, 1000, 10**4, 10**5]
    intervals = [constant_c(x) for x in cutoffs]
    for wide, narrow in zip(intervals, intervals[1:]):
        assert wide.contains(narrow)
    last = intervals[-1]
    assert 1 / 3.73 < last.lo and last.hi < 1 / 2.5


def test_constant_rejects_small_cutoff():
    with pytest.raises(ValueError):
        constant_c(2)
