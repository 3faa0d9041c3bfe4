"""Acceptance checks, runnable from pytest or ``coprimeperm verify``.

Each check returns a CheckResult; ``run`` prints one PASS/FAIL line each.
Regression fixtures were produced by this package and are compared exactly
(counts) or to the stated tolerance (floats).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from itertools import combinations
from typing import Callable

import numpy as np

from . import bounds, buckets, counting, matching, primes, sampler, template
from .cache import CacheCorruption, CountCache

__all__ = ["CHECKS", "CheckResult", "run"]

# C(n), permutations of [n] with gcd(m, sigma(m)) = 1 for all m
C_FIXTURE = {
    1: 1, 2: 1, 3: 3, 4: 4, 5: 28, 6: 16, 7: 256, 8: 324, 9: 3600, 10: 3600,
    11: 129744, 12: 63504, 13: 3521232, 14: 3459600, 15: 60891840,
    16: 91240704, 17: 8048712960, 18: 3554067456, 19: 425476094976,
    20: 320265446400, 21: 12474417291264, 22: 16417666704384,
}

# C0(n), coprime bijections from the first n odd numbers onto [n]
C0_FIXTURE = {
    1: 1, 2: 2, 3: 4, 4: 18, 5: 60, 6: 252, 7: 1860, 8: 9552, 9: 59616,
    10: 565920, 11: 4051872,
}

CONSTANT_CUTOFF = 10**6
CONSTANT_MIDPOINT = 0.3772953462

# (C(n)/n!)^(1/n)
RATE_FIXTURE = {
    1: 1.0, 2: 0.7071067811865476, 3: 0.7937005259840998, 4: 0.6389431042462724,
    5: 0.7474727370761363, 6: 0.5302303478369091, 7: 0.6533044745008242,
    8: 0.5471772858189655, 9: 0.5989537305121906, 10: 0.5007880382008832,
    11: 0.5940348994499312, 12: 0.47519516132302403, 13: 0.5625818504384371,
    14: 0.48485908582496795, 15: 0.5142851281241981, 16: 0.4623523449445832,
    17: 0.5330213240819704, 18: 0.4492269615158639, 19: 0.5162149226724648,
    20: 0.4528655382598829, 21: 0.48431447084446017, 22: 0.4403955757664365,
}

SAMPLER_N = 5000
SAMPLER_BASIS = (3, 5, 7, 11)
SAMPLER_K = 3
SAMPLER_RUNS = 100
SAMPLER_MIN_RATE = 0.9


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name:<12} {self.detail}  ({self.seconds:.1f}s)"


def check_oracle() -> CheckResult:
    bad = [n for n in range(1, counting.MAX_BRUTE + 1) if counting.count_C(n) != counting.brute_force_count(n, "C")]
    small = [counting.count_C(n) for n in range(1, 5)] == [1, 1, 3, 4]
    drift = [n for n in range(10, 23) if counting.count_C(n) != C_FIXTURE[n]]
    ok = not bad and small and not drift
    return CheckResult("oracle", ok, f"brute mismatches={bad} fixture drift={drift}")


def check_even_reduction() -> CheckResult:
    eq = [n for n in range(1, 11) if counting.count_C(2 * n) != counting.count_C0(n) ** 2]
    ineq = [n for n in range(2, 10) if counting.count_C(2 * n + 1) < 2 * counting.count_C0(n - 1) ** 2]
    drift = [n for n in range(1, 12) if counting.count_C0(n) != C0_FIXTURE[n]]
    return CheckResult(
        "even-reduction", not eq and not ineq and not drift,
        f"identity failures={eq} inequality failures={ineq} C0 drift={drift}",
    )


def check_constant() -> CheckResult:
    c = primes.constant_c(CONSTANT_CUTOFF)
    ok = (
        c.width <= 1e-5
        and 1 / 3.73 < c.mid < 1 / 2.5
        and abs(c.mid - CONSTANT_MIDPOINT) < 5e-11
    )
    return CheckResult("constant", ok, f"[{c.lo:.12f}, {c.hi:.12f}] width={c.width:.2e} mid={c.mid:.10f}")


def check_euler_tail() -> CheckResult:
    bad = []
    for p in primes.sieve_primes(10**5):
        if p == 2:
            continue
        f = primes.euler_factor(p)
        if not (1 - 3 / p**2 <= f.lo and f.hi < 1):
            bad.append(p)
    return CheckResult("euler-tail", not bad, f"violations={bad[:10]}")


def _random_basis(rng, pool):
    mask = rng.random(len(pool)) < 0.5
    return tuple(p for p, m in zip(pool, mask) if m)


def check_buckets(instances: int = 100, seed: int = 20240501) -> CheckResult:
    rng = np.random.default_rng(seed)
    pool = primes.sieve_primes(50)
    failures = []
    for _ in range(instances):
        n = int(rng.integers(1, 10**6 + 1))
        basis = _random_basis(rng, pool)
        k = int(rng.integers(1, len(basis) + 2))
        part = buckets.partition(buckets.Domain.interval(n), basis, k)
        total = sum(len(v) for v in part.buckets.values()) + len(part.overflow)
        if total != n:
            failures.append((n, basis, k, "partition sum"))
            continue
        over = part.overflow
        over_keys = {}
        if len(over):
            mask, _ = buckets._divisor_masks(over, basis)
            vals, cnts = np.unique(mask, return_counts=True)
            over_keys = {buckets._mask_to_key(int(v), basis): int(c) for v, c in zip(vals, cnts)}
        for size in range(len(basis) + 1):
            for S in combinations(basis, size):
                scanned = len(part.bucket(S)) if size < k else over_keys.get(S, 0)
                if buckets.exact_bucket_size_pie(n, S, basis) != scanned:
                    failures.append((n, basis, k, S))
    return CheckResult("buckets", not failures, f"{instances} instances, failures={failures[:3]}")


def _random_dense_graph(rng, n):
    """Complete graph minus a union of d <= n/3 random perfect matchings."""
    d = int(rng.integers(0, n // 3 + 1))
    adj = np.ones((n, n), dtype=bool)
    for _ in range(d):
        adj[np.arange(n), rng.permutation(n)] = False
    return matching.BipartiteGraph(adj)


def check_matching(instances: int = 200, seed: int = 7) -> CheckResult:
    rng = np.random.default_rng(seed)
    failures = []
    for _ in range(instances):
        n = int(rng.integers(1, 13))
        G = _random_dense_graph(rng, n)
        delta = matching.complement_max_degree(G)
        if 3 * delta > n:
            failures.append((n, delta, "generator"))
            continue
        perm = counting.permanent(G.adj)
        if not perm >= matching.matching_count_lower_bound(n, delta):
            failures.append((n, delta, "bound"))
        k = n - 2 * delta
        sub = matching.find_k_factor(G, k)
        if sub is None or (sub & ~G.adj).any() or set(sub.sum(0)) | set(sub.sum(1)) != {k}:
            failures.append((n, delta, "k-factor"))
    return CheckResult("matching", not failures, f"{instances} graphs, failures={failures[:3]}")


def check_chernoff(samples: int = 10**5, seed: int = 11) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = -1.0
    bad = []
    for kind in ("binomial", "hypergeometric"):
        for mean in (10, 100, 1000):
            for delta in (0.1, 0.5, 1, 2):
                freq = bounds.empirical_tail(kind, mean, delta, samples, rng)
                excess = freq - bounds.chernoff_tail(mean, delta)
                worst = max(worst, excess)
                if excess > 0.01:
                    bad.append((kind, mean, delta, freq))
    return CheckResult("chernoff", not bad, f"max(freq - bound)={worst:.4f} violations={bad}")


def check_sampler(runs: int = SAMPLER_RUNS) -> CheckResult:
    left = buckets.partition(buckets.Domain.interval(SAMPLER_N), SAMPLER_BASIS, SAMPLER_K)
    right = buckets.partition(buckets.Domain.odd(SAMPLER_N), SAMPLER_BASIS, SAMPLER_K)
    odds = range(1, 2 * SAMPLER_N, 2)
    target = range(1, SAMPLER_N + 1)
    successes = invalid = 0
    for seed in range(runs):
        try:
            out = sampler.sample_coprime_bijection(
                SAMPLER_N, SAMPLER_BASIS, SAMPLER_K, rng=seed, max_retries=20, left=left, right=right
            )
        except sampler.SamplingFailure:
            continue
        successes += 1
        if not sampler.validate_coprime(out.f, odds, target):
            invalid += 1
    rate = successes / runs
    return CheckResult(
        "sampler", invalid == 0 and rate >= SAMPLER_MIN_RATE,
        f"success rate={rate:.2f} invalid={invalid}",
    )


def template_violations(assignment, weights, left, right) -> list[str]:
    """Structural checks on an assignment: disjointness, balance, conservation."""
    out = []
    star = template.STAR
    for part, phi in ((left, assignment.phi1), (right, assignment.phi2)):
        for x in part.overflow.tolist():
            if phi[x] != star:
                out.append(f"overflow {x} not starred")
        for S, members in part.buckets.items():
            for x in members.tolist():
                lab = phi[x]
                if lab != star and set(lab) & set(S):
                    out.append(f"{x} in {S} labelled {lab}")
    for S1, members in left.buckets.items():
        labs = [assignment.phi1[x] for x in members.tolist()]
        for S2 in left.keys():
            if set(S1) & set(S2):
                continue
            n1 = sum(1 for lab in labs if lab == S2)
            n2 = sum(1 for y in right.bucket(S2).tolist() if assignment.phi2[y] == S1)
            if not n1 == n2 == weights.beta[(S1, S2)]:
                out.append(f"unbalanced {(S1, S2)}: {n1} vs {n2} vs {weights.beta[(S1, S2)]}")
    for part, phi, first in ((left, assignment.phi1, True), (right, assignment.phi2, False)):
        for S in part.keys():
            row = sum(b for (s1, s2), b in weights.beta.items() if (s1 if first else s2) == S)
            starred = sum(1 for x in part.bucket(S).tolist() if phi[x] == star)
            if row + starred != len(part.bucket(S)):
                out.append(f"conservation broken at {S}")
    n_star1 = sum(1 for v in assignment.phi1.values() if v == star)
    n_star2 = sum(1 for v in assignment.phi2.values() if v == star)
    if (n_star1, n_star2) != (weights.star1, weights.star2):
        out.append("star masses disagree")
    return out


def check_template(instances: int = 50, seed: int = 3) -> CheckResult:
    rng = np.random.default_rng(seed)
    pool = [3, 5, 7, 11, 13]
    failures = []
    for _ in range(instances):
        n = int(rng.integers(2, 20001))
        basis = _random_basis(rng, pool)
        k = int(rng.integers(1, 4))
        left = buckets.partition(buckets.Domain.interval(n), basis, k)
        right = buckets.partition(buckets.Domain.odd(n), basis, k)
        assignment, weights = template.random_assignment(left, right, rng)
        problems = template_violations(assignment, weights, left, right)
        if problems:
            failures.append((n, basis, k, problems[:2]))
    return CheckResult("template", not failures, f"{instances} instances, failures={failures[:2]}")


def check_convergence(n_max: int = 22) -> CheckResult:
    rows = bounds.convergence_table(n_max)
    bad = [
        r.n for r in rows
        if not (math.isfinite(r.rate) and 0 < r.rate <= 1 and math.isclose(r.rate, RATE_FIXTURE[r.n], rel_tol=1e-12))
    ]
    return CheckResult("convergence", not bad, f"r_22={rows[-1].rate:.6f} out-of-range or drifted={bad}")


def check_cache(path=None, recompute_max_n: int = 24) -> CheckResult:
    """Checksums of every cached entry, plus recomputation of the affordable ones."""
    cache = CountCache(path)
    try:
        entries = cache.read()
    except CacheCorruption as exc:
        return CheckResult("cache", False, f"corrupt cache: {exc}")
    wrong = []
    for (variant, n, kparam), value in sorted(entries.items(), key=str):
        if n <= recompute_max_n and counting.count(variant, n, kparam) != value:
            wrong.append((variant, n, kparam))
    return CheckResult("cache", not wrong, f"{len(entries)} entries at {cache.path}, mismatches={wrong}")


CHECKS: dict[str, Callable[[], CheckResult]] = {
    "oracle": check_oracle,
    "even-reduction": check_even_reduction,
    "constant": check_constant,
    "euler-tail": check_euler_tail,
    "buckets": check_buckets,
    "matching": check_matching,
    "chernoff": check_chernoff,
    "sampler": check_sampler,
    "template": check_template,
    "convergence": check_convergence,
    "cache": check_cache,
}


def timed(fn: Callable[[], CheckResult]) -> CheckResult:
    t0 = time.perf_counter()
    res = fn()
    res.seconds = time.perf_counter() - t0
    return res


def run(only: list[str] | None = None, echo: Callable[[str], None] = print) -> list[CheckResult]:
    names = only or list(CHECKS)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise KeyError(f"unknown checks {unknown}; choose from {list(CHECKS)}")
    results = []
    for name in names:
        res = timed(CHECKS[name])
        echo(res.line())
        results.append(res)
    return results
