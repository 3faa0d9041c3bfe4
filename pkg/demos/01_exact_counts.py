"""
Exact counts of coprime permutations
====================================

C(n) counts permutations sigma of [n] with gcd(m, sigma(m)) = 1 for all m.
It is the permanent of the 0/1 coprimality matrix, so Ryser's formula gives
it in O(2^n n) time instead of n! enumeration.
"""

import math

import numpy as np

from coprimeperm import brute_force_count, coprimality_graph, count_C, count_C0, permanent

# The coprimality matrix for n = 6
g = coprimality_graph(range(1, 7), range(1, 7))
print(g.adjacency.astype(int))
print("perm =", permanent(g.adjacency))

# brute force agrees on small n
for n in range(1, 9):
    print(n, count_C(n), brute_force_count(n, "C"))

# Even sizes factor through bijections from odds to [n]: C(2n) = C0(n)^2
for n in range(1, 9):
    print(f"C({2 * n}) = {count_C(2 * n)}   C0({n})^2 = {count_C0(n) ** 2}")

# A 22 x 22 permanent runs through the compiled modular kernel
print("C(22) =", count_C(22))

# compared with n!, the count is exponentially small
for n in (10, 16, 22):
    print(n, count_C(n) / math.factorial(n))

# the permanent of the all-ones matrix is n!
print(permanent(np.ones((7, 7), dtype=np.int64)), math.factorial(7))
