import math

import numpy as np
import pytest

from coprimeperm.counting import permanent
from coprimeperm.matching import (
    BipartiteGraph,
    complement_max_degree,
    find_k_factor,
    hopcroft_karp,
    matching_count_lower_bound,
    max_flow,
    random_coprime_matching,
)


def scan_complement_degree(adj):
    n_left, n_right = adj.shape
    degs = [n_right - sum(adj[i]) for i in range(n_left)] + [n_left - sum(adj[:, j]) for j in range(n_right)]
    return max(degs)


def test_complement_degree_simple():
    full = BipartiteGraph(np.ones((4, 4), dtype=bool))
    assert complement_max_degree(full) == 0
    adj = np.ones((4, 4), dtype=bool)
    adj[1, 2] = False
    assert complement_max_degree(BipartiteGraph(adj)) == 1


def test_complement_degree_matches_scan():
    rng = np.random.default_rng(0)
    for _ in range(50):
        adj = rng.random((int(rng.integers(1, 15)), int(rng.integers(1, 15)))) < 0.6
        assert complement_max_degree(BipartiteGraph(adj)) == scan_complement_degree(adj)


def test_max_flow_small_network():
    # classic 4-node diamond with a cross arc
    arcs = [(0, 1, 3), (0, 2, 2), (1, 2, 1), (1, 3, 2), (2, 3, 3)]
    value, flows = max_flow(4, arcs, 0, 3)
    assert value == 5
    assert all(0 <= f <= c for f, (_, _, c) in zip(flows, arcs))


def test_k_factor_one_is_a_perfect_matching():
    adj = np.array([[1, 1, 0], [0, 1, 1], [1, 0, 0]], dtype=bool)
    sub = find_k_factor(BipartiteGraph(adj), 1)
    assert sub is not None
    assert (sub.sum(0) == 1).all() and (sub.sum(1) == 1).all()
    assert not (sub & ~adj).any()


def test_k_factor_not_found_above_min_degree():
    adj = np.ones((5, 5), dtype=bool)
    adj[0, :2] = False
    assert find_k_factor(BipartiteGraph(adj), 4) is None
    assert find_k_factor(BipartiteGraph(adj), 6) is None
    assert find_k_factor(BipartiteGraph(adj), 0).sum() == 0


def test_k_factor_in_dense_regime():
    rng = np.random.default_rng(1)
    for _ in range(200):
        n = int(rng.integers(1, 61))
        adj = np.ones((n, n), dtype=bool)
        for _ in range(int(rng.integers(0, n // 3 + 1))):
            adj[np.arange(n), rng.permutation(n)] = False
        G = BipartiteGraph(adj)
        delta = complement_max_degree(G)
        assert 3 * delta <= n
        k = n - 2 * delta
        sub = find_k_factor(G, k)
        assert sub is not None
        assert (sub.sum(0) == k).all() and (sub.sum(1) == k).all()
        assert not (sub & ~adj).any()


def test_matching_lower_bound_values():
    assert matching_count_lower_bound(3, 0) == pytest.approx((3 / math.e) ** 3)
    assert matching_count_lower_bound(3, 0) <= math.factorial(3)
    assert matching_count_lower_bound(9, 3) == pytest.approx((3 / math.e) ** 9)
    assert matching_count_lower_bound(2000, 0) == math.inf
    with pytest.raises(ValueError):
        matching_count_lower_bound(5, 2)


def test_matching_lower_bound_below_permanent():
    rng = np.random.default_rng(2)
    for _ in range(200):
        n = int(rng.integers(1, 13))
        adj = np.ones((n, n), dtype=bool)
        # arbitrary missing edges, then keep only instances in the regime
        adj &= rng.random((n, n)) > rng.random() * 0.3
        delta = complement_max_degree(BipartiteGraph(adj))
        if 3 * delta > n:
            continue
        assert permanent(adj) >= matching_count_lower_bound(n, delta)


def test_random_coprime_matching_examples():
    rng = np.random.default_rng(0)
    assert random_coprime_matching([1], [1], rng) == [(1, 1)]
    got = random_coprime_matching([2, 4], [3, 9], rng)
    assert sorted(a for a, _ in got) == [2, 4] and sorted(b for _, b in got) == [3, 9]
    assert random_coprime_matching([2], [4], rng) is None
    assert random_coprime_matching([], [], rng) == []
    with pytest.raises(ValueError):
        random_coprime_matching([1, 2], [1], rng)


def test_random_coprime_matching_detects_hall_violation():
    rng = np.random.default_rng(4)
    # 6 and 10 can only go to 1; no perfect matching
    assert random_coprime_matching([6, 10, 7], [1, 2, 4], rng) is None


def test_random_coprime_matching_is_valid_and_seeded():
    A = list(range(1, 1200, 2))
    B = list(range(1, 601))
    m1 = random_coprime_matching(A, B, np.random.default_rng(42))
    m2 = random_coprime_matching(A, B, np.random.default_rng(42))
    assert m1 == m2
    assert sorted(a for a, _ in m1) == A and sorted(b for _, b in m1) == B
    assert all(math.gcd(a, b) == 1 for a, b in m1)


def test_hopcroft_karp_repairs_bad_greedy_start():
    # greedy start 0-0 blocks vertex 1, which only knows 0
    neighbors = [[0, 1], [0]]
    ml, mr = hopcroft_karp(neighbors, 2, [0, -1], [0, -1])
    assert ml == [1, 0]


def test_hopcroft_karp_maximum_size_against_kfactor():
    rng = np.random.default_rng(8)
    for _ in range(100):
        n = int(rng.integers(1, 20))
        adj = rng.random((n, n)) < 0.25
        ml, _ = hopcroft_karp([np.flatnonzero(r).tolist() for r in adj], n)
        has_perfect = find_k_factor(BipartiteGraph(adj), 1) is not None
        assert (min(ml, default=0) >= 0) == has_perfect
