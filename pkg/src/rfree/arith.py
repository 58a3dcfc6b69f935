"""Exact and high-precision arithmetic shared by every other module.

Provides:
    sieve_mobius   -- mu(d) and Mertens prefix sums M(n) up to a limit
    mobius         -- scalar mu(n) by trial division (independent of the sieve)
    integer_root   -- floor(x^(1/r)) in pure integer arithmetic
    bernoulli      -- exact Bernoulli numbers, B_1 = +1/2 convention
    faulhaber_sum  -- sum_{m<=M} m^e via the Bernoulli formula
    zeta_value     -- zeta(s) for integer s >= 2 with a rigorous error radius
    Enclosure      -- a closed rational interval guaranteed to contain a value

Everything that feeds an exact identity is integer or Fraction arithmetic;
floats never touch a quantity that a test compares exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache

from .errors import InvariantViolationError

# Euler's constant to 50 decimal places, stored rather than computed; only
# used as a comparison constant for harmonic-sum bounds.
EULER_GAMMA = Fraction(
    57721566490153286060651209008240243104215933593992, 10**50
)


# ---------------------------------------------------------------------------
# Mobius sieve
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MobiusTable:
    """Sieved mu values and Mertens prefix sums, 1-indexed.

    mu[n] is mu(n) for 1 <= n <= limit (index 0 is an unused sentinel), and
    mertens[n] = sum_{d<=n} mu(d). Immutable after construction; safe to share
    across scan workers.
    """

    limit: int
    mu: list[int]
    mertens: list[int]

    def mertens_at(self, n: int) -> int:
        if not 0 <= n <= self.limit:
            raise ValueError(f"n={n} outside sieved range [0, {self.limit}]")
        return self.mertens[n]


def sieve_mobius(limit: int) -> MobiusTable:
    """Build a MobiusTable up to ``limit`` with a linear sieve.

    Raises ValueError for limit < 1.
    """
    if limit < 1:
        raise ValueError("sieve limit must be >= 1")
    mu = [0] * (limit + 1)
    mu[1] = 1
    is_comp = bytearray(limit + 1)
    primes: list[int] = []
    for i in range(2, limit + 1):
        if not is_comp[i]:
            primes.append(i)
            mu[i] = -1
        for p in primes:
            ip = i * p
            if ip > limit:
                break
            is_comp[ip] = 1
            if i % p == 0:
                mu[ip] = 0
                break
            mu[ip] = -mu[i]
    mertens = [0] * (limit + 1)
    acc = 0
    for n in range(1, limit + 1):
        acc += mu[n]
        mertens[n] = acc
    return MobiusTable(limit=limit, mu=mu, mertens=mertens)


def mobius(n: int) -> int:
    """mu(n) by trial division; the sieve-independent reference."""
    if n < 1:
        raise ValueError("mobius is defined for n >= 1")
    if n == 1:
        return 1
    count = 0
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            count += 1
        p += 1 if p == 2 else 2
    if n > 1:
        count += 1
    return -1 if count % 2 else 1


def primes_upto(limit: int) -> list[int]:
    """All primes <= limit (simple Eratosthenes)."""
    if limit < 2:
        return []
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = b"\x00" * len(flags[p * p :: p])
    return [i for i in range(2, limit + 1) if flags[i]]


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of n >= 1 as {prime: exponent}."""
    if n < 1:
        raise ValueError("factorize is defined for n >= 1")
    factors: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def rfree_sieve(limit: int, r: int) -> bytearray:
    """Indicator of r-free integers in [0, limit].

    entry[n] = 1 iff no prime p has p^r | n. entry[0] = 0 by convention
    (zero is divisible by every prime power). For r = 1 only n = 1 survives.
    """
    if limit < 0:
        raise ValueError("limit must be >= 0")
    if r < 1:
        raise ValueError("r must be >= 1")
    flags = bytearray([1]) * (limit + 1)
    flags[0] = 0
    for p in primes_upto(integer_root(limit, r) if limit else 0):
        q = p**r
        flags[q :: q] = b"\x00" * len(flags[q :: q])
    return flags


# ---------------------------------------------------------------------------
# Integer r-th roots
# ---------------------------------------------------------------------------

def integer_root(x: int, r: int) -> int:
    """floor(x^(1/r)) for x >= 0, r >= 1, by integer Newton iteration.

    Never goes through floats, so perfect powers land exactly: the result t
    satisfies t^r <= x < (t+1)^r.
    """
    if x < 0:
        raise ValueError("x must be >= 0")
    if r < 1:
        raise ValueError("r must be >= 1")
    if r == 1 or x < 2:
        return x
    if r == 2:
        return math.isqrt(x)
    if x < (1 << r):
        return 1
    # initial guess >= true root
    t = 1 << -(-x.bit_length() // r)
    while True:
        nt = ((r - 1) * t + x // t ** (r - 1)) // r
        if nt >= t:
            break
        t = nt
    while t**r > x:
        t -= 1
    while (t + 1) ** r <= x:
        t += 1
    return t


# ---------------------------------------------------------------------------
# Bernoulli numbers and Faulhaber sums
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BernoulliSeq:
    """B_0 .. B_{len-1} as exact Fractions, with B_1 = +1/2."""

    values: tuple[Fraction, ...]

    def __getitem__(self, i: int) -> Fraction:
        return self.values[i]

    def __len__(self) -> int:
        return len(self.values)


@lru_cache(maxsize=None)
def _bernoulli_values(count: int) -> tuple[Fraction, ...]:
    # Akiyama-Tanigawa; yields the B_1 = +1/2 convention directly.
    row = [Fraction(0)] * count
    out = []
    for m in range(count):
        row[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            row[j - 1] = j * (row[j - 1] - row[j])
        out.append(row[0])
    return tuple(out)


def bernoulli(count: int) -> BernoulliSeq:
    """First ``count`` Bernoulli numbers, second convention (B_1 = +1/2)."""
    if count < 1:
        raise ValueError("count must be >= 1")
    return BernoulliSeq(values=_bernoulli_values(count))


def faulhaber_sum(upper: int, e: int) -> int:
    """sum_{m=1}^{upper} m^e, exactly, via the Bernoulli expansion.

    Uses (1/(e+1)) * sum_j C(e+1, j) B_j upper^(e+1-j) with B_1 = +1/2; a
    non-integral result means the convention broke somewhere and raises
    InvariantViolationError.
    """
    if upper < 0:
        raise ValueError("upper must be >= 0")
    if e < 0:
        raise ValueError("e must be >= 0")
    if upper == 0:
        return 0
    B = _bernoulli_values(e + 1)
    total = Fraction(0)
    for j in range(e + 1):
        total += math.comb(e + 1, j) * B[j] * upper ** (e + 1 - j)
    total /= e + 1
    if total.denominator != 1:
        raise InvariantViolationError(
            f"faulhaber_sum({upper}, {e}) produced non-integer {total}"
        )
    return total.numerator


# ---------------------------------------------------------------------------
# zeta(s) with rigorous enclosure
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ZetaValue:
    """An enclosure of zeta(s): the true value lies in [value - error_radius,
    value + error_radius] by construction. ``depth`` is the truncation depth
    of the accelerated alternating series; the radius shrinks geometrically
    as depth grows.
    """

    s: int
    value: Fraction
    error_radius: Fraction
    depth: int

    @property
    def lo(self) -> Fraction:
        return self.value - self.error_radius

    @property
    def hi(self) -> Fraction:
        return self.value + self.error_radius

    def reciprocal(self) -> "Enclosure":
        """Enclosure of 1/zeta(s); valid because zeta(s) > 1 > 0 for s >= 2."""
        return Enclosure(1 / self.hi, 1 / self.lo)


def zeta_enclosure(s: int, depth: int) -> ZetaValue:
    """zeta(s) at a fixed truncation depth n.

    Evaluates the eta-series acceleration with Chebyshev weights
    (P. Borwein, "An efficient algorithm for the Riemann zeta function",
    CMS Conf. Proc. 27, 2000, Algorithm 2): with
    d_k = n * sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!),

        zeta(s) = -1/(d_n (1 - 2^(1-s))) * sum_{k<n} (-1)^k (d_k - d_n)/(k+1)^s
                  + err,   |err| <= 3 / ((3+sqrt(8))^n |1 - 2^(1-s)|).

    All arithmetic is exact rational; the radius uses 29/5 < 3+sqrt(8) so the
    stated bound is itself rigorous.
    """
    if s < 2:
        raise ValueError("zeta enclosure requires integer s >= 2")
    if depth < 1:
        raise ValueError("depth must be >= 1")
    n = depth
    term = Fraction(1)
    d = [Fraction(1)]
    for i in range(1, n + 1):
        term *= Fraction(4 * (n + i - 1) * (n - i + 1), (2 * i - 1) * (2 * i))
        d.append(d[-1] + term)
    acc = Fraction(0)
    for k in range(n):
        t = Fraction(d[k] - d[n], (k + 1) ** s)
        acc += -t if k % 2 else t
    one_minus = Fraction(2 ** (s - 1) - 1, 2 ** (s - 1))
    value = -acc / (d[n] * one_minus)
    radius = Fraction(3) / (Fraction(29, 5) ** n * one_minus)
    return ZetaValue(s=s, value=value, error_radius=radius, depth=n)


@lru_cache(maxsize=None)
def zeta_value(s: int, target_precision: Fraction = Fraction(1, 10**30)) -> ZetaValue:
    """zeta(s) with error_radius <= target_precision, depth chosen adaptively."""
    if s < 2:
        raise ValueError("zeta_value requires integer s >= 2")
    target = Fraction(target_precision)
    if target <= 0:
        raise ValueError("target_precision must be positive")
    one_minus = Fraction(2 ** (s - 1) - 1, 2 ** (s - 1))
    depth = 1
    while Fraction(3) / (Fraction(29, 5) ** depth * one_minus) > target:
        depth += 1
    return zeta_enclosure(s, depth)


# ---------------------------------------------------------------------------
# Rational interval helper
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Enclosure:
    """Closed interval [lo, hi] of exact rationals containing a real value."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"empty enclosure: [{self.lo}, {self.hi}]")

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def radius(self) -> Fraction:
        return (self.hi - self.lo) / 2

    def contains(self, q) -> bool:
        return self.lo <= q <= self.hi

    def intersects(self, other: "Enclosure") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def abs(self) -> "Enclosure":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return Enclosure(-self.hi, -self.lo)
        return Enclosure(Fraction(0), max(-self.lo, self.hi))

    def rsub(self, c) -> "Enclosure":
        """Enclosure of c - self for an exact scalar c."""
        return Enclosure(c - self.hi, c - self.lo)

    def scale(self, c) -> "Enclosure":
        """Enclosure of c * self for an exact scalar c >= 0."""
        if c < 0:
            raise ValueError("scale expects a nonnegative scalar")
        return Enclosure(self.lo * c, self.hi * c)

    def div_pos(self, den_lo: Fraction, den_hi: Fraction) -> "Enclosure":
        """Enclosure of self / d for d in [den_lo, den_hi], 0 < den_lo."""
        if den_lo <= 0 or den_lo > den_hi:
            raise ValueError("divisor interval must be positive")
        lo = self.lo / den_lo if self.lo < 0 else self.lo / den_hi
        hi = self.hi / den_hi if self.hi < 0 else self.hi / den_lo
        return Enclosure(lo, hi)


# ---------------------------------------------------------------------------
# Decimal rendering
# ---------------------------------------------------------------------------

def format_fraction(q: Fraction, places: int) -> str:
    """Fixed-point decimal string of q with ``places`` fractional digits.

    Round-half-up on the last digit; pure integer arithmetic, so output is
    deterministic across platforms.
    """
    if places < 0:
        raise ValueError("places must be >= 0")
    q = Fraction(q)
    sign = "-" if q < 0 else ""
    num = abs(q.numerator) * 10**places
    scaled, rem = divmod(num, q.denominator)
    if 2 * rem >= q.denominator:
        scaled += 1
    digits = str(scaled)
    if places == 0:
        return sign + digits
    digits = digits.rjust(places + 1, "0")
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def fraction_to_decimal(q: Fraction, places: int) -> Decimal:
    """q as a Decimal with ``places`` fractional digits (same rounding as
    format_fraction)."""
    return Decimal(format_fraction(q, places))


def ln_decimal(x: int, digits: int = 40) -> Decimal:
    """Natural log of a positive integer as a Decimal with ``digits`` of
    working precision. Used only for normalization denominators, never for
    quantities compared exactly."""
    if x <= 0:
        raise ValueError("ln_decimal expects a positive integer")
    with localcontext() as ctx:
        ctx.prec = digits
        return Decimal(x).ln()
