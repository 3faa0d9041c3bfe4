"""
Buckets and the template
========================

Integers are grouped by which small primes divide them. The template
decides how many members of each bucket on the left should map into each
bucket on the right, approximating an entropy-maximising target.
"""

import numpy as np

from coprimeperm import Domain, beta_target, exact_bucket_size_pie, partition, predicted_size, random_assignment
from coprimeperm.buckets import format_partition

# a small partition, printed in the text format
part = partition(Domain.interval(30), [2, 3, 5], 2)
print(format_partition(part))

# bucket sizes against the density prediction and the inclusion-exclusion count
n, basis, k = 10**5, (3, 5, 7, 11), 3
left = partition(Domain.interval(n), basis, k)
for key, size in sorted(left.sizes().items()):
    exact = exact_bucket_size_pie(n, key, basis)
    print(key, size, exact, round(predicted_size(n, key, basis), 1))
print("overflow:", len(left.overflow))

# random assignment on both sides, and how close beta lands to the target;
# the smallest pairs (a few hundred members) fluctuate the most
right = partition(Domain.odd(n), basis, k)
assignment, weights = random_assignment(left, right, np.random.default_rng(0))
worst = max(abs(b - beta_target(S1, S2, n, basis)) / beta_target(S1, S2, n, basis)
            for (S1, S2), b in weights.beta.items())
print("pairs:", len(weights.beta), "worst relative deviation:", round(worst, 4))
print("star mass:", weights.star1, weights.star2)
print(weights.to_csv().splitlines()[:6])
