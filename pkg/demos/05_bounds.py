"""
Concentration and bounds
========================

Chernoff tails are checked against simulated binomial and hypergeometric
samples, and the upper-bound product over primes is compared with c.
"""

import math

import numpy as np

from coprimeperm import PrimeBasis, constant_c
from coprimeperm.bounds import chernoff_tail, convergence_table, empirical_tail, table_to_csv, upper_bound_log_rate

rng = np.random.default_rng(1)
for mean in (10, 100):
    for delta in (0.1, 0.3, 0.5, 1.0):
        b = empirical_tail("binomial", mean, delta, 20000, rng)
        h = empirical_tail("hypergeometric", mean, delta, 20000, rng)
        print(f"mean={mean:>4} delta={delta:.1f}  bound={chernoff_tail(mean, delta):.4f}  bin={b:.4f}  hyp={h:.4f}")

# the product over primes up to L decreases toward c from above
c = constant_c(10**6)
for L in (2, 10, 100, 10**4, 10**6):
    print(L, math.exp(upper_bound_log_rate(PrimeBasis(L))))
print("c in", (c.lo, c.hi))

# the convergence table with the constant column
print(table_to_csv(convergence_table(16), 10**5))
