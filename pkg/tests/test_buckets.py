import math
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coprimeperm.buckets import (
    Domain,
    bucket_prime_count,
    default_depth,
    exact_bucket_size_pie,
    format_partition,
    large_prime_recip_sum,
    parse_partition,
    partition,
    pie_partial_sum,
    predicted_size,
)
from coprimeperm.primes import PrimeBasis, sieve_primes

SMALL_PRIMES = sieve_primes(50)


def as_lists(part):
    return {k: v.tolist() for k, v in part.buckets.items()}


def test_partition_interval_example():
    part = partition(Domain.interval(10), [2, 3], 3)
    assert as_lists(part) == {(): [1, 5, 7], (2,): [2, 4, 8, 10], (3,): [3, 9], (2, 3): [6]}
    assert part.overflow.tolist() == []


def test_partition_odd_example():
    part = partition(Domain.odd(5), [3], 2)
    assert as_lists(part) == {(): [1, 5, 7], (3,): [3, 9]}


def test_partition_empty_basis():
    part = partition(Domain.interval(7), [], 1)
    assert as_lists(part) == {(): list(range(1, 8))}


def test_partition_overflow_threshold():
    part = partition(Domain.interval(30), [2, 3, 5], 2)
    assert part.overflow.tolist() == [6, 10, 12, 15, 18, 20, 24, 30]
    assert (2, 3) not in part.buckets


def brute_divisor_sets(values, basis):
    return {x: tuple(p for p in basis if x % p == 0) for x in values}


@settings(max_examples=60, deadline=None)
@given(
    n=st.integers(1, 3000),
    odd=st.booleans(),
    basis=st.lists(st.sampled_from(SMALL_PRIMES), max_size=6, unique=True),
    k=st.integers(1, 5),
)
def test_partition_matches_per_element_classification(n, odd, basis, k):
    domain = Domain.odd(n) if odd else Domain.interval(n)
    part = partition(domain, basis, k)
    sets = brute_divisor_sets(domain.members().tolist(), sorted(basis))
    total = sum(len(v) for v in part.buckets.values()) + len(part.overflow)
    assert total == n
    for key, members in part.buckets.items():
        assert len(key) < k
        assert list(members) == sorted(members)
        assert all(sets[x] == key for x in members.tolist())
    assert all(len(sets[x]) >= k for x in part.overflow.tolist())


def test_partition_is_deterministic():
    a = partition(Domain.interval(5000), [3, 5, 7], 2)
    b = partition(Domain.interval(5000), [7, 5, 3], 2)
    assert format_partition(a) == format_partition(b)


def test_predicted_size():
    assert predicted_size(30, [2], [2, 3]) == pytest.approx(10)
    assert predicted_size(17, [], []) == 17
    expected = 10**6 * math.prod(1 - 1 / p for p in sieve_primes(30))
    assert predicted_size(10**6, [], PrimeBasis(30)) == pytest.approx(expected, rel=1e-14)


def test_pie_examples():
    assert exact_bucket_size_pie(10, [2], [2, 3]) == 4
    assert exact_bucket_size_pie(1000, [3, 7], [3, 7]) == 1000 // 21
    assert len(partition(Domain.interval(10), [2, 3], 3).bucket([2])) == 4


def test_pie_rejects_negative_depth_and_large_complement():
    with pytest.raises(ValueError):
        exact_bucket_size_pie(10, [], [2, 3], depth=-1)
    with pytest.raises(ValueError):
        exact_bucket_size_pie(10**6, [], sieve_primes(120))


def test_pie_depth_brackets_exact_value():
    rng = np.random.default_rng(5)
    for _ in range(100):
        n = int(rng.integers(1, 10**6 + 1))
        basis = [p for p in SMALL_PRIMES if rng.random() < 0.5]
        S = [p for p in basis if rng.random() < 0.2]
        exact = exact_bucket_size_pie(n, S, basis)
        for d in range(len(basis) + 1):
            bracket = exact_bucket_size_pie(n, S, basis, depth=d)
            assert bracket.lo <= exact <= bracket.hi
            partial = pie_partial_sum(n, S, basis, d)
            # even depth over-counts, odd depth under-counts
            assert partial >= exact if d % 2 == 0 else partial <= exact


def test_pie_full_depth_truncation_is_exact():
    basis = [3, 5, 7]
    exact = exact_bucket_size_pie(10**5, [], basis)
    assert exact_bucket_size_pie(10**5, [], basis, depth=default_depth(1)).width == 0
    assert exact_bucket_size_pie(10**5, [], basis, depth=default_depth(1)).lo == exact


def test_large_prime_recip_sum():
    assert large_prime_recip_sum(2**5 * 3**4, 10) == 0
    assert large_prime_recip_sum(11 * 13, 10) == Fraction(24, 143)
    assert large_prime_recip_sum(101, 100) == Fraction(1, 101)
    assert large_prime_recip_sum(101, 100) < 100**-0.5


def test_bucket_prime_count():
    part = partition(Domain.interval(30), [2, 3], 3)
    assert bucket_prime_count(part, [], 5) == 2
    assert bucket_prime_count(part, [], 31) == 0
    with pytest.raises(ValueError):
        bucket_prime_count(part, [], 3)


def test_bucket_prime_density_in_large_regime():
    # 1e6 with basis primes <= 7, q between 11 and n^(1/3): density within 2/q
    n = 10**6
    basis = [2, 3, 5, 7]
    part = partition(Domain.interval(n), basis, 3)
    for q in (11, 13, 29, 97):
        for key, members in part.buckets.items():
            if len(members) < 1000:
                continue
            assert bucket_prime_count(part, key, q) <= 2 * len(members) / q


def test_overflow_small_at_scale():
    part = partition(Domain.interval(10**6), sieve_primes(50), 5)
    assert len(part.overflow) / 10**6 <= 0.05


def test_format_roundtrip():
    part = partition(Domain.odd(40), [3, 5, 7], 2)
    text = format_partition(part)
    back = parse_partition(text)
    assert back.domain == part.domain and back.primes == part.primes and back.k == part.k
    assert as_lists(back) == as_lists(part)
    assert back.overflow.tolist() == part.overflow.tolist()
    assert text.splitlines()[1].startswith("{}: 1 11 13")


def test_all_subsets_agree_with_scan_on_one_instance():
    n, basis = 250000, (3, 5, 11, 13, 29)
    part = partition(Domain.interval(n), basis, len(basis) + 1)
    for size in range(len(basis) + 1):
        for S in combinations(basis, size):
            assert exact_bucket_size_pie(n, S, basis) == len(part.bucket(S))
