import math
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coprimeperm.acceptance import template_violations
from coprimeperm.buckets import Domain, partition
from coprimeperm.template import (
    STAR,
    beta_target,
    entropy,
    label_distribution,
    random_assignment,
    zp_law,
)


def test_zp_law():
    law = zp_law(3, 9)
    assert law.as_vector() == (Fraction(1, 3),) * 3
    assert law.entropy() == pytest.approx(math.log(3))
    assert zp_law(3, 10).as_vector() == (Fraction(3, 10), Fraction(3, 10), Fraction(4, 10))
    with pytest.raises(ValueError):
        zp_law(11, 10)
    assert zp_law(11, 10, allow_degenerate=True).prob_00 == 1


def test_entropy():
    assert entropy([1.0, 0.0]) == 0
    for m in (1, 2, 7):
        assert entropy([1 / m] * m) == pytest.approx(math.log(m))
    assert entropy([0.5, 0.25, 0.25]) == pytest.approx(1.5 * math.log(2))
    with pytest.raises(ValueError):
        entropy([0.5, 0.6])
    with pytest.raises(ValueError):
        entropy([1.5, -0.5])


def test_beta_target():
    assert beta_target([], [], 15, [3, 5]) == pytest.approx(3)
    assert beta_target([3], [], 9, [3]) == pytest.approx(3)
    assert beta_target([3], [3], 9, [3], allow_overlap=True) == 0
    with pytest.raises(ValueError):
        beta_target([3], [3], 9, [3])
    with pytest.raises(ValueError):
        beta_target([], [], 9, [2, 3])


def brute_label_mass(S, primes, T):
    """Probability of label T by expanding over each free prime separately."""
    free = [p for p in primes if p not in S]
    pr = Fraction(1)
    for p in free:
        pr *= Fraction(1, p - 1) if p in T else Fraction(p - 2, p - 1)
    return pr


@pytest.mark.parametrize("primes", [(3,), (3, 5), (3, 5, 7), (3, 5, 7, 11, 13)])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_label_distribution_sums_to_one(primes, k):
    for size in range(len(primes) + 1):
        for S in combinations(primes, size):
            dist = label_distribution(S, primes, k)
            assert sum(dist.values()) == 1
            assert all(v >= 0 for v in dist.values())
            assert all(not set(T) & set(S) and len(T) < k for T in dist if T != STAR)
            free = [p for p in primes if p not in S]
            big = sum(
                (brute_label_mass(S, primes, T) for r in range(k, len(free) + 1) for T in combinations(free, r)),
                Fraction(0),
            )
            assert dist[STAR] == big


def test_label_distribution_bucket_of_three():
    # the only disjoint label is the empty set, and it takes all the mass
    assert label_distribution((3,), (3,), 2) == {(): 1, STAR: 0}
    assert label_distribution((), (3,), 2) == {(): Fraction(1, 2), (3,): Fraction(1, 2), STAR: 0}


def test_expected_label_counts_match_target():
    # |B_S1| * P(label S2) reproduces the product formula exactly on the predicted sizes
    primes = (3, 5, 7)
    n = Fraction(10**5)
    for S1 in [(), (3,), (5, 7)]:
        size = n
        for p in primes:
            size *= Fraction(1, p) if p in S1 else 1 - Fraction(1, p)
        dist = label_distribution(S1, primes, 3)
        for S2, pr in dist.items():
            if S2 == STAR:
                continue
            assert float(size * pr) == pytest.approx(beta_target(S1, S2, int(n), primes), rel=1e-12)


def make_parts(n, basis, k):
    return partition(Domain.interval(n), basis, k), partition(Domain.odd(n), basis, k)


def test_empty_basis_labels_everything_empty():
    left, right = make_parts(50, [], 1)
    assignment, weights = random_assignment(left, right, np.random.default_rng(0))
    assert set(assignment.phi1.values()) == {()} and set(assignment.phi2.values()) == {()}
    assert weights.beta == {((), ()): 50}
    assert weights.star1 == weights.star2 == 0


@settings(max_examples=40, deadline=None)
@given(
    n=st.integers(2, 3000),
    basis=st.lists(st.sampled_from([3, 5, 7, 11, 13]), max_size=5, unique=True),
    k=st.integers(1, 4),
    seed=st.integers(0, 2**32 - 1),
)
def test_assignment_structure(n, basis, k, seed):
    left, right = make_parts(n, basis, k)
    assignment, weights = random_assignment(left, right, np.random.default_rng(seed))
    assert template_violations(assignment, weights, left, right) == []
    assert weights.star1 == weights.star2


def test_left_label_counts_equal_beta():
    left, right = make_parts(3000, [3, 5], 2)
    assignment, weights = random_assignment(left, right, np.random.default_rng(1))
    for S1, members in left.buckets.items():
        for S2 in left.keys():
            if set(S1) & set(S2):
                continue
            kept = [x for x in members.tolist() if assignment.phi1[x] == S2]
            assert len(kept) == weights.beta[(S1, S2)]


def test_assignment_seeded():
    left, right = make_parts(2000, [3, 5, 7], 2)
    a1, w1 = random_assignment(left, right, np.random.default_rng(5))
    a2, w2 = random_assignment(left, right, np.random.default_rng(5))
    assert a1 == a2 and w1 == w2


def test_rejects_basis_with_two():
    left, right = make_parts(20, [2, 3], 2)
    with pytest.raises(ValueError):
        random_assignment(left, right, np.random.default_rng(0))


@pytest.mark.parametrize("seed", range(5))
def test_concentration_at_scale(seed):
    n, basis = 10**5, (3, 5, 7)
    left, right = make_parts(n, basis, 3)
    _, weights = random_assignment(left, right, np.random.default_rng(seed))
    for (S1, S2), b in weights.beta.items():
        target = beta_target(S1, S2, n, basis)
        assert abs(b - target) <= 0.10 * target


def test_weights_csv():
    left, right = make_parts(200, [3], 2)
    _, weights = random_assignment(left, right, np.random.default_rng(2))
    lines = weights.to_csv().splitlines()
    assert lines[0] == "S1,S2,beta"
    assert lines[1].startswith("{},{},")
    assert lines[-2] == f"*,,{weights.star1}" and lines[-1] == f",*,{weights.star2}"
    assert sum(weights.rho.values()) * 200 == pytest.approx(sum(weights.beta.values()))
