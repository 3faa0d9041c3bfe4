"""Counting, bounding and sampling coprime permutations.

A permutation sigma of [n] is coprime when gcd(m, sigma(m)) = 1 for every m.
The package computes exact counts through permanents, encloses the limiting
constant c with C(n) = n! (c + o(1))^n, decomposes ranges by small-prime
divisor patterns, and samples coprime bijections with a bucketed matching
procedure.
"""

from .buckets import Domain, exact_bucket_size_pie, partition, predicted_size
from .counting import brute_force_count, coprimality_graph, count_C, count_C0, count_Ck, permanent
from .matching import BipartiteGraph, complement_max_degree, find_k_factor, random_coprime_matching
from .primes import BoundedReal, PrimeBasis, constant_c, euler_factor, paper_params, sieve_primes
from .sampler import lift_to_permutation, sample_coprime_bijection, validate_coprime
from .template import beta_target, entropy, random_assignment, zp_law

__version__ = "0.1.0"

__all__ = [
    "BipartiteGraph",
    "BoundedReal",
    "Domain",
    "PrimeBasis",
    "beta_target",
    "brute_force_count",
    "complement_max_degree",
    "constant_c",
    "coprimality_graph",
    "count_C",
    "count_C0",
    "count_Ck",
    "entropy",
    "euler_factor",
    "exact_bucket_size_pie",
    "find_k_factor",
    "lift_to_permutation",
    "paper_params",
    "partition",
    "permanent",
    "predicted_size",
    "random_assignment",
    "random_coprime_matching",
    "sample_coprime_bijection",
    "sieve_primes",
    "validate_coprime",
    "zp_law",
]
