"""
Sampling coprime bijections
===========================

The sampler builds a bijection f from the odd numbers below 2n onto [n]
with gcd(j, f(j)) = 1, matching bucket pairs one at a time. Two such
samples lift to a coprime permutation of [2n].
"""

from coprimeperm import lift_to_permutation, sample_coprime_bijection, validate_coprime
from coprimeperm.counting import odd_interval
from coprimeperm.sampler import invert

n = 5000
out = sample_coprime_bijection(n, (3, 5, 7, 11), 3, rng=7)
print("valid:", validate_coprime(out.f, odd_interval(n), range(1, n + 1)))
print("first values:", [(j, out.f[j]) for j in odd_interval(12)])
print("diagnostics:", {k: v for k, v in out.diagnostics.items() if k != "pair_sizes"})

# success rate over a handful of seeds
ok = 0
for seed in range(20):
    try:
        sample_coprime_bijection(2000, (3, 5, 7), 3, rng=seed)
        ok += 1
    except Exception as exc:
        print(seed, exc)
print("successes:", ok, "/ 20")

# lifting two independent samples to a permutation of [2n]
second = sample_coprime_bijection(n, (3, 5, 7, 11), 3, rng=8)
sigma = lift_to_permutation(invert(second.f), out.f)
print("lifted permutation valid:", validate_coprime(sigma, range(1, 2 * n + 1), range(1, 2 * n + 1)))
