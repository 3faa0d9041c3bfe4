"""Exact counts of coprime permutations and bijections via permanents.

Ryser's formula with Gray-code column updates:

    perm(A) = (-1)^n sum_{S subset of cols} (-1)^{|S|} prod_i sum_{j in S} a_ij

Small matrices run through a pure-Python big-integer walk.  Larger ones go
through a compiled walk that evaluates the same sum modulo several primes
and recombines by CRT; the moduli are chosen so their product exceeds twice
the Hadamard-style bound prod_i sum_j |a_ij|, which pins the exact value.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numba
import numpy as np

__all__ = [
    "MAX_BRUTE",
    "MAX_DIM",
    "CoprimalityGraph",
    "brute_force_count",
    "coprimality_graph",
    "count",
    "count_C",
    "count_C0",
    "count_Ck",
    "odd_interval",
    "permanent",
]

MAX_DIM = 30
MAX_BRUTE = 9
_PYTHON_MAX_DIM = 12
_VARIANTS = ("C", "C0", "Ck")

# primes just below 2^31: a reduced residue (< 2^31) times a partial
# product reduced the same way stays below 2^62
_MODULI = (2147483647, 2147483629, 2147483587, 2147483579, 2147483563, 2147483549)


def odd_interval(n: int) -> list[int]:
    """The first n odd positive integers, 1, 3, ..., 2n-1."""
    return list(range(1, 2 * n, 2))


@dataclass(frozen=True, eq=False)
class CoprimalityGraph:
    """Bipartite graph between two integer lists, edge iff the gcd is 1.

    With ``modulus`` set, the edge condition is gcd(a, b, modulus) = 1.
    """

    left: tuple[int, ...]
    right: tuple[int, ...]
    adjacency: np.ndarray
    modulus: int | None = None

    @property
    def shape(self) -> tuple[int, int]:
        return self.adjacency.shape


def coprimality_graph(left: Sequence[int], right: Sequence[int], modulus: int | None = None) -> CoprimalityGraph:
    left = tuple(int(x) for x in left)
    right = tuple(int(x) for x in right)
    if not left or not right:
        raise ValueError("both sides must be nonempty")
    if modulus is not None and modulus < 1:
        raise ValueError("modulus must be >= 1")
    g = np.gcd.outer(np.asarray(left, dtype=np.int64), np.asarray(right, dtype=np.int64))
    if modulus is not None:
        g = np.gcd(g, modulus)
    adj = g == 1
    adj.setflags(write=False)
    return CoprimalityGraph(left, right, adj, modulus)


def _as_square_matrix(matrix) -> np.ndarray:
    if isinstance(matrix, CoprimalityGraph):
        matrix = matrix.adjacency
    a = np.asarray(matrix)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"permanent needs a square matrix, got shape {a.shape}")
    if a.shape[0] > MAX_DIM:
        raise ValueError(f"dimension {a.shape[0]} exceeds the cap of {MAX_DIM}")
    if a.dtype == bool:
        a = a.astype(np.int64)
    if not np.issubdtype(a.dtype, np.integer):
        raise TypeError("permanent is exact and needs an integer matrix")
    return a.astype(np.int64)


def _ryser_python(a: np.ndarray) -> int:
    n = a.shape[0]
    cols = [[int(x) for x in a[:, j]] for j in range(n)]
    row_sums = [0] * n
    total = 0
    sign = 1
    prev_gray = 0
    for i in range(1, 1 << n):
        gray = i ^ (i >> 1)
        j = (gray ^ prev_gray).bit_length() - 1
        col = cols[j]
        if gray & (1 << j):
            for r in range(n):
                row_sums[r] += col[r]
        else:
            for r in range(n):
                row_sums[r] -= col[r]
        prev_gray = gray
        sign = -sign
        prod = 1
        for s in row_sums:
            if s == 0:
                prod = 0
                break
            prod *= s
        total += sign * prod
    return total if n % 2 == 0 else -total


@numba.njit(cache=True)
def _ryser_mod_kernel(a, moduli, group):
    n = a.shape[0]
    m = moduli.shape[0]
    acc = np.zeros(m, dtype=np.int64)
    row_sums = np.zeros(n, dtype=np.int64)
    sign = 1
    prev_gray = 0
    for i in range(1, 1 << n):
        gray = i ^ (i >> 1)
        diff = gray ^ prev_gray
        j = 0
        while (diff >> j) != 1:
            j += 1
        if gray & diff:
            for r in range(n):
                row_sums[r] += a[r, j]
        else:
            for r in range(n):
                row_sums[r] -= a[r, j]
        prev_gray = gray
        sign = -sign
        zero = False
        for r in range(n):
            if row_sums[r] == 0:
                zero = True
                break
        if zero:
            continue
        for t in range(m):
            q = moduli[t]
            prod = 1
            r = 0
            while r < n:
                # exact product of up to `group` row sums, then one reduction
                part = 1
                stop = min(n, r + group)
                while r < stop:
                    part *= row_sums[r]
                    r += 1
                part %= q
                prod = (prod * part) % q
            if sign > 0:
                acc[t] = (acc[t] + prod) % q
            else:
                acc[t] = (acc[t] - prod) % q
    if n % 2 == 1:
        for t in range(m):
            acc[t] = (-acc[t]) % moduli[t]
    return acc


def _crt_signed(residues: Sequence[int], moduli: Sequence[int]) -> int:
    x, mod = 0, 1
    for r, q in zip(residues, moduli):
        # solve x + mod*t = r (mod q)
        t = ((int(r) - x) * pow(mod, -1, q)) % q
        x += mod * t
        mod *= q
    return x - mod if x > mod // 2 else x


def _ryser_modular(a: np.ndarray) -> int:
    abs_rows = np.abs(a).sum(axis=1)
    bound = 1
    for s in abs_rows.tolist():
        bound *= int(s)
    if bound == 0:
        return 0
    moduli = []
    prod = 1
    for q in _MODULI:
        moduli.append(q)
        prod *= q
        if prod > 2 * bound:
            break
    else:
        raise OverflowError("not enough CRT moduli for this matrix")
    max_row = max(int(abs_rows.max()), 2)
    group = max(1, int(62 / math.log2(max_row + 1)) - 1)
    residues = _ryser_mod_kernel(np.ascontiguousarray(a), np.asarray(moduli, dtype=np.int64), group)
    return _crt_signed(residues.tolist(), moduli)


def permanent(matrix, method: str = "auto") -> int:
    """Exact permanent of a square integer matrix or a CoprimalityGraph.

    ``method`` is "python" (big-integer Ryser), "compiled" (modular Ryser
    plus CRT) or "auto", which picks by dimension.
    """
    a = _as_square_matrix(matrix)
    n = a.shape[0]
    if n == 0:
        return 1
    if method == "auto":
        method = "python" if n <= _PYTHON_MAX_DIM else "compiled"
    if method == "python":
        return _ryser_python(a)
    if method == "compiled":
        return _ryser_modular(a)
    raise ValueError(f"unknown method {method!r}")


def _check_n(n: int, cap: int = MAX_DIM):
    if not 1 <= n <= cap:
        raise ValueError(f"n must lie in [1, {cap}], got {n}")


def _ck_modulus(kparam: int) -> int:
    if kparam < 1:
        raise ValueError("kparam must be >= 1")
    return math.factorial(kparam)


@lru_cache(maxsize=None)
def count_C(n: int) -> int:
    """Number of coprime permutations of [n]."""
    _check_n(n)
    r = range(1, n + 1)
    return permanent(coprimality_graph(r, r))


@lru_cache(maxsize=None)
def count_C0(n: int) -> int:
    """Number of bijections f from the first n odd numbers onto [n] with gcd(j, f(j)) = 1."""
    _check_n(n)
    return permanent(coprimality_graph(odd_interval(n), range(1, n + 1)))


@lru_cache(maxsize=None)
def count_Ck(n: int, kparam: int) -> int:
    """Number of permutations of [n] with gcd(l, sigma(l), kparam!) = 1."""
    _check_n(n)
    r = range(1, n + 1)
    return permanent(coprimality_graph(r, r, modulus=_ck_modulus(kparam)))


def count(variant: str, n: int, kparam: int | None = None, method: str = "permanent") -> int:
    """Dispatch on variant ("C", "C0", "Ck") and method ("permanent", "brute")."""
    if variant not in _VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if variant == "Ck" and kparam is None:
        raise ValueError("variant Ck needs kparam")
    if method == "brute":
        return brute_force_count(n, variant, kparam)
    if method != "permanent":
        raise ValueError(f"unknown method {method!r}")
    if variant == "C":
        return count_C(n)
    if variant == "C0":
        return count_C0(n)
    return count_Ck(n, kparam)


def brute_force_count(n: int, variant: str = "C", kparam: int | None = None) -> int:
    """Count by running over all n! bijections and testing each gcd directly."""
    if not 1 <= n <= MAX_BRUTE:
        raise ValueError(f"brute force is limited to 1 <= n <= {MAX_BRUTE}")
    codomain = list(range(1, n + 1))
    if variant == "C":
        domain, modulus = codomain, 0
    elif variant == "C0":
        domain, modulus = odd_interval(n), 0
    elif variant == "Ck":
        if kparam is None:
            raise ValueError("variant Ck needs kparam")
        domain, modulus = codomain, _ck_modulus(kparam)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    gcd = math.gcd
    total = 0
    for image in itertools.permutations(codomain):
        if all(gcd(x, y, modulus) == 1 for x, y in zip(domain, image)):
            total += 1
    return total
