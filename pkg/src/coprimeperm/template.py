"""The entropy-maximizing target and randomized balanced label assignments.

Every element x of the left bucket B_S (a subset of [n]) gets a provisional
label T, a bucket key of size < k disjoint from S, with probability

    prod_{p in T} 1/(p-1) * prod_{p in basis \\ (S u T)} (1 - 1/(p-1)),

and the label STAR for the leftover mass.  The right side (odd domain) is
labelled the same way.  The count of left S1-elements labelled S2 and right
S2-elements labelled S1 are then trimmed to their minimum, so both sides
agree on every beta(S1, S2).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import numpy as np

from .buckets import BucketPartition, Key, format_key
from .primes import as_primes

__all__ = [
    "STAR",
    "Assignment",
    "TemplateWeights",
    "ZpLaw",
    "beta_target",
    "entropy",
    "label_distribution",
    "random_assignment",
    "zp_law",
]

STAR = "*"


@dataclass(frozen=True)
class ZpLaw:
    """Law of (p | m, p | sigma(m)) for one prime; (1, 1) has probability 0."""

    p: int
    n: int
    prob_10: Fraction
    prob_01: Fraction
    prob_00: Fraction

    def as_vector(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.prob_10, self.prob_01, self.prob_00)

    def entropy(self) -> float:
        return entropy([float(x) for x in self.as_vector()])


def zp_law(p: int, n: int, allow_degenerate: bool = False) -> ZpLaw:
    if p > n and not allow_degenerate:
        raise ValueError(f"p = {p} exceeds n = {n}")
    side = Fraction(n // p, n)
    return ZpLaw(p, n, side, side, 1 - 2 * side)


def entropy(dist: Sequence[float]) -> float:
    """Shannon entropy in nats, with 0 log 0 = 0."""
    d = np.asarray(dist, dtype=float)
    if d.ndim != 1 or np.any(d < 0) or abs(d.sum() - 1.0) > 1e-12:
        raise ValueError("not a probability vector")
    nz = d[d > 0]
    return float(-(nz * np.log(nz)).sum())


def _odd_basis(basis) -> tuple[int, ...]:
    primes = as_primes(basis)
    if 2 in primes:
        raise ValueError("the basis must exclude 2 (the factor 1 - 2/2 vanishes)")
    return primes


def beta_target(S1: Iterable[int], S2: Iterable[int], n: int, basis, allow_overlap: bool = False) -> float:
    """n * prod_{S1} 1/p * prod_{S2} 1/p * prod_{basis \\ (S1 u S2)} (1 - 2/p)."""
    primes = _odd_basis(basis)
    S1, S2 = set(S1), set(S2)
    if S1 & S2:
        if allow_overlap:
            return 0.0
        raise ValueError("S1 and S2 overlap")
    out = float(n)
    for p in primes:
        if p in S1 or p in S2:
            out /= p
        else:
            out *= 1 - 2 / p
    return out


def label_distribution(S: Iterable[int], primes: Sequence[int], k: int) -> dict:
    """Exact provisional label probabilities for an element of bucket S, STAR included."""
    S = set(S)
    free = [p for p in primes if p not in S]
    out: dict = {}
    for size in range(min(k, len(free) + 1)):
        for T in combinations(free, size):
            pr = Fraction(1)
            for p in free:
                pr *= Fraction(1, p - 1) if p in T else 1 - Fraction(1, p - 1)
            out[T] = pr
    out[STAR] = 1 - sum(out.values(), Fraction(0))
    return out


@dataclass
class TemplateWeights:
    n: int
    beta: dict[tuple[Key, Key], int]
    star1: int
    star2: int

    @property
    def rho(self) -> dict[tuple[Key, Key], float]:
        return {pair: b / self.n for pair, b in self.beta.items()}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["S1", "S2", "beta"])
        for (s1, s2), b in sorted(self.beta.items(), key=lambda kv: (len(kv[0][0]), kv[0][0], len(kv[0][1]), kv[0][1])):
            w.writerow([format_key(s1), format_key(s2), b])
        w.writerow([STAR, "", self.star1])
        w.writerow(["", STAR, self.star2])
        return buf.getvalue()


@dataclass
class Assignment:
    """Labels for the left domain (phi1) and the right domain (phi2)."""

    phi1: dict[int, object]
    phi2: dict[int, object]


def _draw_labels(members: np.ndarray, dist: Mapping, rng: np.random.Generator) -> list:
    labels = list(dist)
    probs = [dist[x] for x in labels]
    denom = math.lcm(*(p.denominator for p in probs))
    if denom < 2**62:
        # exact categorical draw on a common denominator
        cuts = np.cumsum([p.numerator * (denom // p.denominator) for p in probs])
        idx = np.searchsorted(cuts, rng.integers(0, denom, size=len(members)), side="right")
    else:
        idx = rng.choice(len(labels), size=len(members), p=np.array([float(p) for p in probs]))
    return [labels[i] for i in idx]


def random_assignment(left: BucketPartition, right: BucketPartition, rng: np.random.Generator):
    """Draw provisional labels on both sides, then trim to a balanced template.

    Returns (Assignment, TemplateWeights).  Surplus elements of an (S1, S2)
    group are sent to STAR largest-first, so the kept elements are the
    smallest ones.
    """
    if left.primes != right.primes or left.k != right.k:
        raise ValueError("partitions must share basis and k")
    primes = _odd_basis(left.primes)
    k = left.k
    if len(left.domain) != len(right.domain):
        raise ValueError("domains must have the same size")

    def provisional(part):
        groups: dict[tuple[Key, object], list[int]] = {}
        for S in part.keys():
            members = part.bucket(S)
            if not len(members):
                continue
            labels = _draw_labels(members, label_distribution(S, primes, k), rng)
            for x, lab in zip(members.tolist(), labels):
                groups.setdefault((S, lab), []).append(x)
        return groups

    g1 = provisional(left)
    g2 = provisional(right)

    keys = left.keys()
    beta: dict[tuple[Key, Key], int] = {}
    phi1: dict[int, object] = {int(x): STAR for x in left.overflow}
    phi2: dict[int, object] = {int(x): STAR for x in right.overflow}
    for S1 in keys:
        for S2 in keys:
            if set(S1) & set(S2):
                continue
            side1 = g1.get((S1, S2), [])
            side2 = g2.get((S2, S1), [])
            b = min(len(side1), len(side2))
            beta[(S1, S2)] = b
            for i, x in enumerate(side1):
                phi1[x] = S2 if i < b else STAR
            for i, y in enumerate(side2):
                phi2[y] = S1 if i < b else STAR
    for S in keys:
        for x in g1.get((S, STAR), []):
            phi1[x] = STAR
        for y in g2.get((S, STAR), []):
            phi2[y] = STAR
    star1 = sum(1 for v in phi1.values() if v == STAR)
    star2 = sum(1 for v in phi2.values() if v == STAR)
    return Assignment(phi1, phi2), TemplateWeights(len(left.domain), beta, star1, star2)
