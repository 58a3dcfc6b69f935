"""Generalized Jordan totients and their partial sums.

J_k^r(n) counts k-tuples in [1, n]^k that are jointly relatively r-prime
with n: no d > 1 has d^r dividing n and every coordinate (equivalently, no
prime q does). Two closed forms exist and are cross-checked on every call:

    divisor sum:    sum_{d^r | n} mu(d) (n/d^r)^k
    Euler product:  n^k * prod_{p^r | n} (1 - p^(-rk))

For k = 0 both collapse to the r-free indicator of n. Partial sums
sum_{n<=x} J_{k-1}^r(n) come in a direct reference loop and a Bernoulli
expansion over d <= floor(x^(1/r)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .arith import (
    MobiusTable,
    _bernoulli_values,
    factorize,
    integer_root,
    mobius,
    rfree_sieve,
)
from .errors import InvariantViolationError, ResourceLimitError

DEFAULT_TUPLE_BUDGET = 10**7


@dataclass(frozen=True)
class TotientParams:
    """Power r >= 1 and dimension k >= 0 of a generalized Jordan totient."""

    r: int
    k: int

    def __post_init__(self) -> None:
        if self.r < 1:
            raise ValueError("r must be >= 1")
        if self.k < 0:
            raise ValueError("k must be >= 0")


def _jordan_divisor_sum(n: int, r: int, k: int, factors: dict[int, int]) -> int:
    # Enumerate exactly the d with d^r | n from the exponent bounds, then
    # weight by a trial-division mu independent of any sieve.
    divisors = [1]
    for p, a in factors.items():
        emax = a // r
        if emax == 0:
            continue
        powers = [p**e for e in range(emax + 1)]
        divisors = [d * q for d in divisors for q in powers]
    total = 0
    for d in divisors:
        mu = mobius(d)
        if mu:
            total += mu * (n // d**r) ** k
    return total


def _jordan_euler_product(n: int, r: int, k: int, factors: dict[int, int]) -> int:
    value = Fraction(n**k)
    for p, a in factors.items():
        if a >= r:
            value *= 1 - Fraction(1, p ** (r * k))
    if value.denominator != 1:
        raise InvariantViolationError(
            f"Euler product for J_{k}^{r}({n}) is non-integral: {value}"
        )
    return value.numerator


def jordan(n: int, params: TotientParams) -> int:
    """J_k^r(n), computed via both closed forms.

    Raises InvariantViolationError if the divisor-sum and Euler-product
    routes disagree (they never should; the check is the point).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    factors = factorize(n)
    by_sum = _jordan_divisor_sum(n, params.r, params.k, factors)
    by_product = _jordan_euler_product(n, params.r, params.k, factors)
    if by_sum != by_product:
        raise InvariantViolationError(
            f"J_{params.k}^{params.r}({n}): divisor sum {by_sum} "
            f"!= Euler product {by_product}"
        )
    return by_sum


def jordan_oracle(
    n: int, params: TotientParams, budget: int = DEFAULT_TUPLE_BUDGET
) -> int:
    """J_k^r(n) by full enumeration of [1, n]^k; the ground-truth definition.

    A tuple counts iff gcd(n, x_1, ..., x_k) is r-free. Enumeration size is
    n^k and must stay within ``budget``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n**params.k > budget:
        raise ResourceLimitError(
            f"jordan_oracle needs {n**params.k} tuples, budget is {budget}"
        )
    rfree = rfree_sieve(n, params.r)
    gcd = math.gcd
    count = 0
    for t in product(range(1, n + 1), repeat=params.k):
        if rfree[gcd(n, *t)]:
            count += 1
    return count


def partial_sum_direct(x: int, params: TotientParams) -> int:
    """sum_{n<=x} J_{k-1}^r(n) by a plain loop; the reference implementation.

    params.k >= 1; the summand dimension is k - 1.
    """
    if x < 0:
        raise ValueError("x must be >= 0")
    if params.k < 1:
        raise ValueError("partial sums need k >= 1")
    inner = TotientParams(r=params.r, k=params.k - 1)
    return sum(jordan(n, inner) for n in range(1, x + 1))


def partial_sum_bernoulli(x: int, params: TotientParams, table: MobiusTable) -> int:
    """sum_{n<=x} J_{k-1}^r(n) via the Bernoulli expansion

        (1/k) sum_{j=0}^{k-1} C(k, j) B_j sum_{d^r<=x} mu(d) floor(x/d^r)^(k-j)

    with B_1 = +1/2. Floors are integer division, accumulation is exact, and
    a non-integral total raises InvariantViolationError.
    """
    if x < 0:
        raise ValueError("x must be >= 0")
    k, r = params.k, params.r
    if k < 1:
        raise ValueError("partial sums need k >= 1")
    if x == 0:
        return 0
    root = integer_root(x, r)
    if table.limit < root:
        raise ValueError(
            f"table sieved to {table.limit} but floor(x^(1/r)) = {root}"
        )
    # Integer inner sums T[m] = sum_d mu(d) floor(x/d^r)^m for m = 1..k,
    # shared across the j-loop.
    inner = [0] * (k + 1)
    mu = table.mu
    for d in range(1, root + 1):
        m = mu[d]
        if not m:
            continue
        q = x // d**r
        qp = 1
        if m == 1:
            for e in range(1, k + 1):
                qp *= q
                inner[e] += qp
        else:
            for e in range(1, k + 1):
                qp *= q
                inner[e] -= qp
    B = _bernoulli_values(k)
    total = Fraction(0)
    for j in range(k):
        total += math.comb(k, j) * B[j] * inner[k - j]
    total /= k
    if total.denominator != 1:
        raise InvariantViolationError(
            f"Bernoulli partial sum at x={x}, r={r}, k={k} "
            f"is non-integral: {total}"
        )
    return total.numerator
