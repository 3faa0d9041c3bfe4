"""Randomized construction of coprime bijections from the odd interval onto [n].

The procedure fixes a balanced template (see ``template``), shuffles each
bucket on both sides, matches every labelled group (S1, S2) with its mirror
group by a coprime matching, and finally absorbs the STAR elements into the
large (empty, empty) group before matching it.  Two such bijections lift to
a coprime permutation of [2n].
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .buckets import BucketPartition, Domain, Key, format_key, partition
from .matching import random_coprime_matching
from .primes import PrimeBasis, as_primes, sieve_primes
from .template import STAR, TemplateWeights, random_assignment

__all__ = [
    "SampleOutcome",
    "SamplingFailure",
    "default_basis",
    "invert",
    "lift_to_permutation",
    "outcome_to_csv",
    "sample_coprime_bijection",
    "validate_coprime",
]

ABSORB = "absorb"


@dataclass
class SampleOutcome:
    """A coprime bijection f from {1, 3, ..., 2n-1} onto [n].

    ``R_B`` (inside [n]) and ``R_C`` (inside the odd interval) are the
    elements routed through STAR labels.  ``routes`` records, for every odd
    j, the group (S1, S2) it was matched through, or ABSORB.
    """

    n: int
    f: dict[int, int]
    R_B: frozenset[int]
    R_C: frozenset[int]
    weights: TemplateWeights
    routes: dict[int, object] = field(repr=False)
    diagnostics: dict = field(default_factory=dict)


class SamplingFailure(RuntimeError):
    def __init__(self, message: str, pair, diagnostics: dict):
        super().__init__(message)
        self.pair = pair
        self.diagnostics = diagnostics


def default_basis(n: int) -> tuple[int, ...]:
    """Odd primes up to min(13, n^(1/4))."""
    cutoff = min(13, int(math.floor(n**0.25 + 1e-9)))
    return tuple(p for p in sieve_primes(cutoff) if p != 2)


def validate_coprime(mapping: Mapping[int, int] | Iterable[tuple[int, int]], domain=None, codomain=None) -> bool:
    """True iff every pair (x, mapping(x)) has gcd 1.

    When ``domain``/``codomain`` are given, also require the map to be a
    bijection between them.
    """
    pairs = list(mapping.items()) if isinstance(mapping, Mapping) else [tuple(p) for p in mapping]
    xs = [x for x, _ in pairs]
    ys = [y for _, y in pairs]
    if len(set(xs)) != len(xs) or len(set(ys)) != len(ys):
        return False
    if domain is not None and set(xs) != set(domain):
        return False
    if codomain is not None and set(ys) != set(codomain):
        return False
    return all(math.gcd(x, y) == 1 for x, y in pairs)


def invert(mapping: Mapping[int, int]) -> dict[int, int]:
    out = {v: k for k, v in mapping.items()}
    if len(out) != len(mapping):
        raise ValueError("mapping is not injective")
    return out


def lift_to_permutation(f_even: Mapping[int, int], f_odd: Mapping[int, int]) -> dict[int, int]:
    """Combine g: [n] -> odds and f: odds -> [n] into a coprime permutation of [2n].

    sigma(2m) = g(m) and sigma(j) = 2 f(j) for odd j.  Since g(m) is odd,
    gcd(2m, g(m)) = gcd(m, g(m)); since j is odd, gcd(j, 2 f(j)) = gcd(j, f(j)).
    """
    n = len(f_even)
    odds = range(1, 2 * n, 2)
    if not validate_coprime(f_even, range(1, n + 1), odds):
        raise ValueError("f_even is not a coprime bijection [n] -> odd interval")
    if not validate_coprime(f_odd, odds, range(1, n + 1)):
        raise ValueError("f_odd is not a coprime bijection odd interval -> [n]")
    sigma = {2 * m: int(g) for m, g in f_even.items()}
    sigma.update({int(j): 2 * int(v) for j, v in f_odd.items()})
    return dict(sorted(sigma.items()))


def _pair_seed(master: np.random.SeedSequence, attempt: int, pair, primes) -> np.random.Generator:
    def mask(S):
        return sum(1 << primes.index(p) for p in S)

    if pair == ABSORB:
        key = (attempt, 1 << 62)
    else:
        key = (attempt, mask(pair[0]), mask(pair[1]))
    return np.random.default_rng(np.random.SeedSequence(master.entropy, spawn_key=master.spawn_key + key))


def _shuffled_labels(part: BucketPartition, phi: Mapping[int, object], rng) -> dict[int, object]:
    """Label of sigma(m) for every m, with sigma a uniform shuffle inside each bucket."""
    out = {}
    for members in part.buckets.values():
        src = members.tolist()
        perm = rng.permutation(len(src))
        for m, i in zip(src, perm.tolist()):
            out[m] = phi[src[i]]
    for m in part.overflow.tolist():
        out[m] = STAR
    return out


def _key_of(x: int, primes) -> Key:
    return tuple(p for p in primes if x % p == 0)


def sample_coprime_bijection(
    n: int,
    basis: PrimeBasis | Iterable[int] | None = None,
    k: int = 3,
    rng: np.random.Generator | int | None = None,
    max_retries: int = 20,
    left: BucketPartition | None = None,
    right: BucketPartition | None = None,
) -> SampleOutcome:
    """Run the bucketed matching procedure; raise SamplingFailure after max_retries.

    ``rng`` may be a seed or a Generator.  Prebuilt partitions of [n] and of
    the odd interval can be passed to skip the scan when sampling repeatedly.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if max_retries < 1:
        raise ValueError("max_retries must be >= 1")
    primes = default_basis(n) if basis is None else as_primes(basis)
    if 2 in primes:
        raise ValueError("the basis must exclude 2")
    if isinstance(rng, np.random.Generator):
        master = np.random.SeedSequence(int(rng.integers(0, 2**63)))
    else:
        master = np.random.SeedSequence(rng)
    main_rng = np.random.default_rng(master)

    left = left or partition(Domain.interval(n), primes, k)
    right = right or partition(Domain.odd(n), primes, k)
    if left.primes != primes or right.primes != primes or left.k != k or right.k != k:
        raise ValueError("partitions do not match basis/k")

    assignment, weights = random_assignment(left, right, main_rng)
    diagnostics = {"retries": 0, "assignment_draws": 1, "failures": []}
    failures = 0
    for attempt in range(max_retries):
        lab_B = _shuffled_labels(left, assignment.phi1, main_rng)
        lab_C = _shuffled_labels(right, assignment.phi2, main_rng)
        groups_B: dict[tuple[Key, Key], list[int]] = {}
        groups_C: dict[tuple[Key, Key], list[int]] = {}
        R_B, R_C = [], []
        for S1, members in left.buckets.items():
            for m in members.tolist():
                lab = lab_B[m]
                if lab == STAR:
                    R_B.append(m)
                else:
                    groups_B.setdefault((S1, lab), []).append(m)
        R_B.extend(left.overflow.tolist())
        for S2, members in right.buckets.items():
            for m in members.tolist():
                lab = lab_C[m]
                if lab == STAR:
                    R_C.append(m)
                else:
                    groups_C.setdefault((lab, S2), []).append(m)
        R_C.extend(right.overflow.tolist())

        f: dict[int, int] = {}
        routes: dict[int, object] = {}
        failed_pair = None
        for pair in sorted(groups_B, key=lambda p: (len(p[0]), p[0], len(p[1]), p[1])):
            if pair == ((), ()):
                continue
            m = random_coprime_matching(groups_B[pair], groups_C.get(pair, []), _pair_seed(master, attempt, pair, primes))
            if m is None:
                failed_pair = pair
                break
            for b, c in m:
                f[c] = b
                routes[c] = pair
        if failed_pair is None:
            pool_B = groups_B.get(((), ()), []) + R_B
            pool_C = groups_C.get(((), ()), []) + R_C
            m = random_coprime_matching(pool_B, pool_C, _pair_seed(master, attempt, ABSORB, primes))
            if m is None:
                failed_pair = ABSORB
            else:
                for b, c in m:
                    f[c] = b
                    routes[c] = ABSORB
        if failed_pair is None:
            diagnostics.update(
                retries=attempt,
                star1=weights.star1,
                star2=weights.star2,
                absorb_size=len(pool_B),
                pair_sizes={f"{format_key(a)}->{format_key(b)}": len(v) for (a, b), v in sorted(groups_B.items())},
            )
            f = dict(sorted(f.items()))
            if not validate_coprime(f, range(1, 2 * n, 2), range(1, n + 1)):
                raise AssertionError("internal error: sampler produced an invalid bijection")
            return SampleOutcome(n, f, frozenset(R_B), frozenset(R_C), weights, routes, diagnostics)

        failures += 1
        diagnostics["failures"].append(
            failed_pair if failed_pair == ABSORB else f"{format_key(failed_pair[0])}->{format_key(failed_pair[1])}"
        )
        if failures % 3 == 0:
            assignment, weights = random_assignment(left, right, main_rng)
            diagnostics["assignment_draws"] += 1
    diagnostics["retries"] = max_retries
    raise SamplingFailure(f"no valid matching after {max_retries} attempts", failed_pair, diagnostics)


def outcome_to_csv(mapping: Mapping[int, int]) -> str:
    return "".join(f"{j}, {v}\n" for j, v in sorted(mapping.items()))


def outcome_diagnostics_json(outcome: SampleOutcome) -> str:
    return json.dumps(outcome.diagnostics, sort_keys=True)
