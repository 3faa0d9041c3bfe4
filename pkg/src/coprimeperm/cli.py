"""Command-line front end.

Exit codes: 0 success, 1 validation or limit error, 2 sampler failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import acceptance, bounds, buckets, counting, primes, sampler
from .cache import CacheCorruption, CountCache

EXIT_OK, EXIT_INVALID, EXIT_SAMPLER = 0, 1, 2


def _cmd_count(args) -> int:
    if args.variant == "Ck" and args.kparam is None:
        raise ValueError("--kparam is required for variant Ck")
    kparam = args.kparam if args.variant == "Ck" else None
    cache = CountCache()
    cached = cache.get(args.variant, args.n, kparam) if args.method == "permanent" else None
    value = cached if cached is not None else counting.count(args.variant, args.n, kparam, args.method)
    if cached is None:
        cache.put(args.variant, args.n, kparam, value)
    print(value)
    return EXIT_OK


def _cmd_constant(args) -> int:
    c = primes.constant_c(args.cutoff)
    print(f"lo={c.lo!r}")
    print(f"hi={c.hi!r}")
    print(f"mid={c.mid!r}")
    return EXIT_OK


def _cmd_sample(args) -> int:
    basis = tuple(p for p in primes.sieve_primes(args.basis_max) if p != 2)
    try:
        first = sampler.sample_coprime_bijection(args.n, basis, args.k, rng=args.seed, max_retries=args.max_retries)
        if args.lift:
            second = sampler.sample_coprime_bijection(
                args.n, basis, args.k, rng=[args.seed, 1], max_retries=args.max_retries
            )
    except sampler.SamplingFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(json.dumps({"failed_pair": str(exc.pair), **exc.diagnostics}, sort_keys=True, default=str), file=sys.stderr)
        return EXIT_SAMPLER
    if args.lift:
        sigma = sampler.lift_to_permutation(sampler.invert(second.f), first.f)
        if not sampler.validate_coprime(sigma, range(1, 2 * args.n + 1), range(1, 2 * args.n + 1)):
            raise AssertionError("lifted permutation failed validation")
        sys.stdout.write(sampler.outcome_to_csv(sigma))
        diag = {"first": first.diagnostics, "second": second.diagnostics}
    else:
        sys.stdout.write(sampler.outcome_to_csv(first.f))
        diag = first.diagnostics
    print(json.dumps(diag, sort_keys=True, default=str))
    return EXIT_OK


def _cmd_buckets(args) -> int:
    domain = buckets.Domain.odd(args.n) if args.odd else buckets.Domain.interval(args.n)
    basis = primes.sieve_primes(args.basis_max)
    if args.exclude_two:
        basis = [p for p in basis if p != 2]
    sys.stdout.write(buckets.format_partition(buckets.partition(domain, basis, args.k)))
    return EXIT_OK


def _cmd_table(args) -> int:
    rows = bounds.convergence_table(args.n_max)
    cutoff = args.cutoff or None
    out = bounds.table_to_json(rows, cutoff) + "\n" if args.json else bounds.table_to_csv(rows, cutoff)
    sys.stdout.write(out)
    return EXIT_OK


def _cmd_verify(args) -> int:
    results = acceptance.run(args.only or None)
    return EXIT_OK if all(r.passed for r in results) else EXIT_INVALID


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coprimeperm", description="Coprime permutation counts, constant and sampler.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="exact count of C(n), C0(n) or Ck(n)")
    p.add_argument("--variant", choices=["C", "C0", "Ck"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kparam", type=int)
    p.add_argument("--method", choices=["permanent", "brute"], default="permanent")
    p.set_defaults(func=_cmd_count)

    p = sub.add_parser("constant", help="rigorous enclosure of the limiting constant")
    p.add_argument("--cutoff", type=int, required=True)
    p.set_defaults(func=_cmd_constant)

    p = sub.add_parser("sample", help="sample a coprime bijection odd interval -> [n]")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--basis-max", type=int, required=True)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--max-retries", type=int, default=20)
    p.add_argument("--lift", action="store_true", help="emit a coprime permutation of [2n]")
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("buckets", help="print the bucket partition")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--basis-max", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--odd", action="store_true", help="use the odd interval 1, 3, ..., 2n-1")
    p.add_argument("--exclude-two", action="store_true")
    p.set_defaults(func=_cmd_buckets)

    p = sub.add_parser("table", help="convergence table of (C(n)/n!)^(1/n)")
    p.add_argument("--n-max", type=int, default=22)
    p.add_argument("--cutoff", type=int, default=10**6, help="cutoff for the constant column (0 omits it)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_table)

    p = sub.add_parser("verify", help="run the acceptance checks")
    p.add_argument("--only", action="append", choices=list(acceptance.CHECKS))
    p.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, CacheCorruption) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
