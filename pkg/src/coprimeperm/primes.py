"""Prime sieving, asymptotic parameters and the limiting constant.

The constant is

    c = prod_p (p-1)^{2(1-1/p)} / (p (p-2)^{1-2/p}),

with the p = 2 factor taken to be exactly 1/2.  It is evaluated as a
rigorous enclosure: a finite product in outward-rounded interval
arithmetic, widened by an explicit bound on the tail over large primes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

__all__ = [
    "BoundedReal",
    "PaperParams",
    "PrimeBasis",
    "as_primes",
    "constant_c",
    "euler_factor",
    "is_prime",
    "log_euler_factor",
    "paper_params",
    "sieve_primes",
]

_INF = math.inf


def _down(x: float, ulps: int = 1) -> float:
    for _ in range(ulps):
        x = math.nextafter(x, -_INF)
    return x


def _up(x: float, ulps: int = 1) -> float:
    for _ in range(ulps):
        x = math.nextafter(x, _INF)
    return x


# libm transcendental functions are not guaranteed correctly rounded; two ulps
# on each side covers glibc's documented error for log/log1p/exp.
_LIBM_ULPS = 2


@dataclass(frozen=True)
class BoundedReal:
    """Closed interval [lo, hi] known to contain an exact real value.

    Every arithmetic operation rounds outward, so the result still encloses
    the exact result of the operation applied to any enclosed values.
    """

    lo: float
    hi: float

    def __post_init__(self):
        if not (self.lo <= self.hi):
            raise ValueError(f"invalid interval [{self.lo}, {self.hi}]")

    @classmethod
    def exact(cls, value) -> "BoundedReal":
        """Enclose a number (int, Fraction, float) that may not be a float."""
        x = float(value)
        if isinstance(value, float) or x == value:
            return cls(x, x)
        return cls(_down(x), _up(x))

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def contains(self, other: "BoundedReal") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def _coerce(self, other) -> "BoundedReal":
        return other if isinstance(other, BoundedReal) else BoundedReal.exact(other)

    def __add__(self, other):
        o = self._coerce(other)
        return BoundedReal(_down(self.lo + o.lo), _up(self.hi + o.hi))

    __radd__ = __add__

    def __neg__(self):
        return BoundedReal(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        products = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return BoundedReal(_down(min(products)), _up(max(products)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o.lo <= 0.0 <= o.hi:
            raise ZeroDivisionError("interval divisor contains zero")
        quotients = (self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi)
        return BoundedReal(_down(min(quotients)), _up(max(quotients)))

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def exp(self) -> "BoundedReal":
        lo = max(0.0, _down(math.exp(self.lo), _LIBM_ULPS))
        return BoundedReal(lo, _up(math.exp(self.hi), _LIBM_ULPS))

    def log(self) -> "BoundedReal":
        if self.lo <= 0.0:
            raise ValueError("log of an interval reaching 0")
        return BoundedReal(_down(math.log(self.lo), _LIBM_ULPS), _up(math.log(self.hi), _LIBM_ULPS))

    def log1p(self) -> "BoundedReal":
        if self.lo <= -1.0:
            raise ValueError("log1p of an interval reaching -1")
        return BoundedReal(
            _down(math.log1p(self.lo), _LIBM_ULPS), _up(math.log1p(self.hi), _LIBM_ULPS)
        )

    def __repr__(self):
        return f"BoundedReal([{self.lo!r}, {self.hi!r}])"


def sieve_primes(limit: int) -> list[int]:
    """Primes in [2, limit], ascending (sieve of Eratosthenes)."""
    if limit < 2:
        return []
    is_p = np.ones(limit + 1, dtype=bool)
    is_p[:2] = False
    for q in range(2, math.isqrt(limit) + 1):
        if is_p[q]:
            is_p[q * q :: q] = False
    return np.flatnonzero(is_p).tolist()


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    if m % 2 == 0:
        return m == 2
    for d in range(3, math.isqrt(m) + 1, 2):
        if m % d == 0:
            return False
    return True


@dataclass(frozen=True)
class PrimeBasis:
    """The small primes up to a cutoff, optionally without 2."""

    limit: int
    exclude_two: bool = False
    primes: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        if self.limit < 1:
            raise ValueError("limit must be positive")
        ps = sieve_primes(self.limit)
        if self.exclude_two:
            ps = [p for p in ps if p != 2]
        object.__setattr__(self, "primes", tuple(ps))

    def __iter__(self):
        return iter(self.primes)

    def __len__(self):
        return len(self.primes)

    def __contains__(self, p) -> bool:
        return p in self.primes


def as_primes(basis: PrimeBasis | Iterable[int]) -> tuple[int, ...]:
    """Normalize a basis argument to a sorted tuple of distinct primes."""
    if isinstance(basis, PrimeBasis):
        return basis.primes
    ps = tuple(sorted(set(int(p) for p in basis)))
    for p in ps:
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
    return ps


@dataclass(frozen=True)
class PaperParams:
    n: int
    W: float
    k: float
    alpha: float


def paper_params(n: int) -> PaperParams:
    """The cutoff W, the pattern-size threshold k and alpha = exp(-k log k)."""
    if n < 16:
        raise ValueError("paper_params needs n >= 16 so that log log n > 0")
    L = math.log(n)
    LL = math.log(L)
    W = math.exp(2.0**-10 * math.sqrt(L * LL))
    k = 2.0**-5 * math.sqrt(L / LL)
    alpha = math.exp(-k * math.log(k))
    return PaperParams(n=n, W=W, k=k, alpha=alpha)


def log_euler_factor(p: int) -> BoundedReal:
    """Enclosure of the natural log of the Euler factor at p.

    Writing log(p-1) = log p + log1p(-1/p) and log(p-2) = log p + log1p(-2/p),
    the log p terms cancel exactly, leaving

        2(1-1/p) log1p(-1/p) - (1-2/p) log1p(-2/p),

    which stays accurate for large p where the factor is 1 - O(1/p^2).
    """
    if p == 2:
        return -BoundedReal.exact(2).log()
    if p < 2:
        raise ValueError("p must be prime")
    inv = 1 / BoundedReal.exact(p)
    a = (-inv).log1p()
    b = (-2 * inv).log1p()
    return 2 * (1 - inv) * a - (1 - 2 * inv) * b


def euler_factor(p: int) -> BoundedReal:
    """Enclosure of (p-1)^{2(1-1/p)} / (p (p-2)^{1-2/p}); exactly 1/2 at p = 2."""
    if p == 2:
        return BoundedReal(0.5, 0.5)
    if p == 3:
        # (p-2)^{1/3} = 1, leaving 2^{4/3}/3
        return (BoundedReal.exact(4 / 3) * BoundedReal.exact(2).log()).exp() / 3
    return log_euler_factor(p).exp()


def constant_c(cutoff: int) -> BoundedReal:
    """Rigorous enclosure of the full Euler product over all primes.

    The factors for p <= cutoff are multiplied in log space.  For p >= 3 the
    bound |log factor(p)| <= 3/p^2 gives a tail of at most
    sum_{m > cutoff} 3/m^2 <= 3/cutoff in absolute log value.
    """
    if cutoff < 3:
        raise ValueError("cutoff must be >= 3")
    los = []
    his = []
    for p in sieve_primes(cutoff):
        f = log_euler_factor(p)
        los.append(f.lo)
        his.append(f.hi)
    # fsum is correctly rounded, so one further ulp outward is a rigorous bound
    total = BoundedReal(_down(math.fsum(los)), _up(math.fsum(his)))
    tail = BoundedReal.exact(3) / cutoff
    total = total + BoundedReal(-tail.hi, tail.hi)
    return total.exp()
