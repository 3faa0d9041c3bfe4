"""
The limiting constant
=====================

C(n) = n! (c + o(1))^n, where c is an Euler product over primes. Every
factor is computed in outward-rounded interval arithmetic, and the tail
beyond the cutoff is bounded explicitly, so each result is an enclosure.
"""

import math

from coprimeperm import constant_c, euler_factor

# The first few local factors
for p in (2, 3, 5, 7, 11):
    f = euler_factor(p)
    print(p, f.lo, f.hi)

# Enclosures shrink as the cutoff grows
for cutoff in (10, 10**3, 10**5, 10**6):
    c = constant_c(cutoff)
    print(f"cutoff={cutoff:>8}  [{c.lo:.12f}, {c.hi:.12f}]  width={c.width:.2e}")

c = constant_c(10**6)
print("c ~", c.mid, " 1/c ~", 1 / c.mid)

# the n-th root of C(n)/n! drifts slowly toward c
from coprimeperm import count_C

for n in (8, 14, 20, 22):
    print(n, math.exp((math.log(count_C(n)) - math.log(math.factorial(n))) / n))
