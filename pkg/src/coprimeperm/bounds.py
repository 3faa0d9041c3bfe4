"""Chernoff tails, the entropy upper-bound rate and the convergence table."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass
from typing import Iterable

import numpy as np

from .counting import MAX_DIM, count_C
from .primes import PrimeBasis, as_primes, constant_c, euler_factor, paper_params

__all__ = [
    "TableRow",
    "chernoff_tail",
    "convergence_table",
    "empirical_tail",
    "table_to_csv",
    "table_to_json",
    "upper_bound_log_rate",
    "upper_bound_slack_log",
]


def chernoff_tail(mean: float, delta: float) -> float:
    """exp(-delta^2 mean / (2 + delta)), an upper bound on P[X >= (1 + delta) E X]."""
    if mean <= 0:
        raise ValueError("mean must be positive")
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    return min(1.0, max(0.0, math.exp(-(delta**2) * mean / (2 + delta))))


def empirical_tail(kind: str, mean: float, delta: float, samples: int, rng: np.random.Generator) -> float:
    """Monte-Carlo frequency of X >= (1 + delta) mean.

    "binomial": X ~ Bin(10 mean, 1/10), a sum of independent indicators.
    "hypergeometric": X counts marked items in 10 mean draws without
    replacement from 100 mean items of which 10 mean are marked.
    """
    m = int(round(mean))
    if kind == "binomial":
        x = rng.binomial(10 * m, 0.1, size=samples)
    elif kind == "hypergeometric":
        x = rng.hypergeometric(10 * m, 90 * m, 10 * m, size=samples)
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return float(np.mean(x >= (1 + delta) * m))


def upper_bound_log_rate(basis: PrimeBasis | Iterable[int]) -> float:
    """Sum over the basis of log(euler factor); p = 2 contributes log(1/2)."""
    primes = as_primes(basis)
    if 2 not in primes:
        raise ValueError("the basis must include 2")
    return math.fsum(math.log(euler_factor(p).mid) for p in primes)


def upper_bound_slack_log(n: int) -> float:
    """Log of the slack factor exp(7 n alpha^(1/3) + n / W), kept apart from the main term."""
    par = paper_params(n)
    return 7 * n * par.alpha ** (1 / 3) + n / par.W


@dataclass(frozen=True)
class TableRow:
    n: int
    count: int
    rate: float


def convergence_table(n_max: int) -> list[TableRow]:
    """Rows (n, C(n), (C(n)/n!)^(1/n)) for 1 <= n <= n_max."""
    if not 1 <= n_max <= MAX_DIM:
        raise ValueError(f"n_max must lie in [1, {MAX_DIM}]")
    rows = []
    for n in range(1, n_max + 1):
        c = count_C(n)
        rate = math.exp((math.log(c) - math.log(math.factorial(n))) / n)
        rows.append(TableRow(n, c, rate))
    return rows


def table_to_csv(rows: list[TableRow], constant_cutoff: int | None = None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = ["n", "C(n)", "rate"]
    c_mid = constant_c(constant_cutoff).mid if constant_cutoff else None
    if c_mid is not None:
        header.append("c")
    w.writerow(header)
    for r in rows:
        line = [r.n, str(r.count), repr(r.rate)]
        if c_mid is not None:
            line.append(repr(c_mid))
        w.writerow(line)
    return buf.getvalue()


def table_to_json(rows: list[TableRow], constant_cutoff: int | None = None) -> str:
    out = {"rows": [dict(asdict(r), count=str(r.count)) for r in rows]}
    if constant_cutoff:
        c = constant_c(constant_cutoff)
        out["constant"] = {"cutoff": constant_cutoff, "lo": c.lo, "hi": c.hi, "mid": c.mid}
    return json.dumps(out, indent=2)
