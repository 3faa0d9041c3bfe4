"""Split an integer range into buckets by its exact set of small-prime divisors.

A bucket key is the sorted tuple of basis primes dividing an element.  Keys
with at least ``k`` primes are not kept separately; those elements go to the
overflow list.  Two domains are supported: the interval [n] = {1..n} and the
odd interval {1, 3, ..., 2n-1}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping

import numpy as np

from .primes import BoundedReal, PrimeBasis, as_primes, is_prime

__all__ = [
    "MAX_DOMAIN",
    "MAX_PIE_TERMS_LOG2",
    "BucketPartition",
    "Domain",
    "bucket_prime_count",
    "default_depth",
    "exact_bucket_size_pie",
    "format_key",
    "format_partition",
    "large_prime_recip_sum",
    "parse_key",
    "parse_partition",
    "partition",
    "pie_partial_sum",
    "predicted_size",
]

MAX_DOMAIN = 10**8
MAX_PIE_TERMS_LOG2 = 25

Key = tuple[int, ...]


@dataclass(frozen=True)
class Domain:
    """Either the interval [n] ("interval") or the first n odd numbers ("odd")."""

    kind: str
    n: int

    def __post_init__(self):
        if self.kind not in ("interval", "odd"):
            raise ValueError(f"unknown domain kind {self.kind!r}")
        if self.n < 1:
            raise ValueError("domain must be nonempty")

    @classmethod
    def interval(cls, n: int) -> "Domain":
        return cls("interval", n)

    @classmethod
    def odd(cls, n: int) -> "Domain":
        return cls("odd", n)

    def members(self) -> np.ndarray:
        if self.kind == "interval":
            return np.arange(1, self.n + 1, dtype=np.int64)
        return np.arange(1, 2 * self.n, 2, dtype=np.int64)

    def __len__(self):
        return self.n


@dataclass(frozen=True, eq=False)
class BucketPartition:
    domain: Domain
    primes: tuple[int, ...]
    k: int
    buckets: Mapping[Key, np.ndarray]
    overflow: np.ndarray

    def bucket(self, key: Iterable[int]) -> np.ndarray:
        key = tuple(sorted(key))
        b = self.buckets.get(key)
        if b is None:
            if len(key) >= self.k or any(p not in self.primes for p in key):
                raise KeyError(f"{key} is not a keyed bucket of this partition")
            return np.empty(0, dtype=np.int64)
        return b

    def sizes(self) -> dict[Key, int]:
        return {key: len(v) for key, v in self.buckets.items()}

    def keys(self) -> list[Key]:
        """All admissible keys (subsets of the basis of size < k), including empty buckets."""
        out = []
        for size in range(min(self.k, len(self.primes) + 1)):
            out.extend(combinations(self.primes, size))
        return out


def _divisor_masks(values: np.ndarray, primes: tuple[int, ...]) -> tuple[np.ndarray, np.ndarray]:
    mask = np.zeros(values.shape, dtype=np.int64)
    count = np.zeros(values.shape, dtype=np.int64)
    for i, p in enumerate(primes):
        hit = values % p == 0
        mask |= hit.astype(np.int64) << i
        count += hit
    return mask, count


def _mask_to_key(mask: int, primes: tuple[int, ...]) -> Key:
    return tuple(p for i, p in enumerate(primes) if mask >> i & 1)


def partition(domain: Domain, basis: PrimeBasis | Iterable[int], k: int) -> BucketPartition:
    """Scan the domain once and group each element by its basis-divisor set."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if len(domain) > MAX_DOMAIN:
        raise ValueError(f"domain larger than {MAX_DOMAIN} elements")
    primes = as_primes(basis)
    if len(primes) > 62:
        raise ValueError("at most 62 basis primes are supported")
    values = domain.members()
    mask, count = _divisor_masks(values, primes)
    keyed = count < k
    overflow = values[~keyed]
    kv, km = values[keyed], mask[keyed]
    order = np.argsort(km, kind="stable")
    kv, km = kv[order], km[order]
    uniq, starts = np.unique(km, return_index=True)
    buckets = {}
    for m, chunk in zip(uniq.tolist(), np.split(kv, starts[1:])):
        chunk.setflags(write=False)
        buckets[_mask_to_key(m, primes)] = chunk
    overflow.setflags(write=False)
    return BucketPartition(domain, primes, k, buckets, overflow)


def predicted_size(n: int, S: Iterable[int], basis: PrimeBasis | Iterable[int]) -> float:
    """n * prod_{p in S} 1/p * prod_{p in basis \\ S} (1 - 1/p)."""
    primes = as_primes(basis)
    S = set(S)
    if not S <= set(primes):
        raise ValueError("S must be a subset of the basis")
    out = float(n)
    for p in primes:
        out *= 1 / p if p in S else 1 - 1 / p
    return out


def default_depth(k: int) -> int:
    return 4 * k


def _pie_terms(n: int, base: int, rest: tuple[int, ...], depth: float):
    """Yield (|T|, floor(n / (base * prod T))) over subsets T of rest with |T| <= depth.

    Branches whose product already exceeds n contribute only zeros and are cut.
    """
    def walk(start, prod, size):
        yield size, n // prod
        if size >= depth:
            return
        for i in range(start, len(rest)):
            nxt = prod * rest[i]
            if nxt > n:
                # rest is ascending, so every later extension is also > n
                break
            yield from walk(i + 1, nxt, size + 1)

    yield from walk(0, base, 0)


def pie_partial_sum(n: int, S: Iterable[int], basis: PrimeBasis | Iterable[int], depth: float) -> int:
    """Alternating inclusion-exclusion sum over T with |T| <= depth."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    primes = as_primes(basis)
    S = tuple(sorted(set(S)))
    if not set(S) <= set(primes):
        raise ValueError("S must be a subset of the basis")
    rest = tuple(p for p in primes if p not in S)
    if depth == math.inf and len(rest) > MAX_PIE_TERMS_LOG2:
        raise ValueError(
            f"{len(rest)} primes outside S exceed the 2^{MAX_PIE_TERMS_LOG2} term budget; "
            "use partition() to scan instead"
        )
    base = math.prod(S)
    return sum(-v if size % 2 else v for size, v in _pie_terms(n, base, rest, depth))


def exact_bucket_size_pie(n: int, S: Iterable[int], basis: PrimeBasis | Iterable[int], depth: float = math.inf):
    """Size of the bucket S inside [n] by inclusion-exclusion.

    With ``depth`` infinite the exact integer is returned.  With a finite
    depth d the truncations at d and d + 1 are returned as a BoundedReal;
    consecutive Bonferroni truncations always bracket the exact count.
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    if depth == math.inf:
        return pie_partial_sum(n, S, basis, math.inf)
    a = pie_partial_sum(n, S, basis, depth)
    b = pie_partial_sum(n, S, basis, depth + 1)
    return BoundedReal(BoundedReal.exact(min(a, b)).lo, BoundedReal.exact(max(a, b)).hi)


def _prime_divisors(m: int) -> list[int]:
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1 if d == 2 else 2
    if m > 1:
        out.append(m)
    return out


def large_prime_recip_sum(ell: int, W: float) -> Fraction:
    """Sum of 1/p over the prime divisors p > W of ell."""
    if ell < 1:
        raise ValueError("ell must be >= 1")
    return sum((Fraction(1, p) for p in _prime_divisors(ell) if p > W), Fraction(0))


def bucket_prime_count(part: BucketPartition, S: Iterable[int], q: int) -> int:
    """Number of multiples of the prime q inside bucket S."""
    if q in part.primes:
        raise ValueError(f"{q} is a basis prime; the bucket already fixes divisibility by it")
    if not is_prime(q):
        raise ValueError(f"{q} is not prime")
    members = part.bucket(S)
    return int(np.count_nonzero(members % q == 0))


def format_key(key: Iterable[int]) -> str:
    return "{" + ",".join(str(p) for p in key) + "}"


def parse_key(text: str) -> Key:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise ValueError(f"malformed key {text!r}")
    body = text[1:-1].strip()
    return tuple(int(x) for x in body.split(",")) if body else ()


def format_partition(part: BucketPartition) -> str:
    """Line-oriented text: a header, one "key: members" line per bucket, then overflow."""
    lines = [
        f"# domain={part.domain.kind} n={part.domain.n} "
        f"basis={','.join(map(str, part.primes))} k={part.k}"
    ]
    for key in sorted(part.buckets, key=lambda s: (len(s), s)):
        lines.append(f"{format_key(key)}: " + " ".join(map(str, part.buckets[key].tolist())))
    lines.append("overflow: " + " ".join(map(str, part.overflow.tolist())))
    return "\n".join(line.rstrip() for line in lines) + "\n"


def parse_partition(text: str) -> BucketPartition:
    lines = text.strip("\n").splitlines()
    header = dict(item.split("=", 1) for item in lines[0].lstrip("# ").split())
    basis = header["basis"]
    primes = tuple(int(p) for p in basis.split(",")) if basis else ()
    domain = Domain(header["domain"], int(header["n"]))
    buckets = {}
    overflow = np.empty(0, dtype=np.int64)
    for line in lines[1:]:
        label, _, rest = line.partition(":")
        members = np.array([int(x) for x in rest.split()], dtype=np.int64)
        if label == "overflow":
            overflow = members
        else:
            buckets[parse_key(label)] = members
    return BucketPartition(domain, primes, int(header["k"]), buckets, overflow)
