"""The closed polynomial identity tying box counts to totient partial sums.

For k >= 1 the count V(r, k, x) equals the formal polynomial

    ((2X + 1)^(k+1) - (2X - 1)^(k+1)) / (2(k + 1))

evaluated umbral-style: the monomial X^j is replaced by
j * sum_{n<=x} J_{j-1}^r(n) for j >= 1, and X^0 by 0. The substitution with
X^0 -> 1 instead is a useful negative control; it breaks equality already
at k = 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .arith import MobiusTable, integer_root, sieve_mobius
from .errors import InvariantViolationError
from .jordan import TotientParams, jordan, partial_sum_bernoulli
from .lattice import CountParams, count_fast, count_oracle


@dataclass(frozen=True)
class UmbralPolynomial:
    """Exact coefficients c_0..c_{k+1} of the difference polynomial.

    Only degrees j with j == k (mod 2) survive; in particular c_{k+1} = 0 and
    c_k = 2^k. Every denominator divides 2(k+1).
    """

    k: int
    coefficients: tuple[Fraction, ...]


@dataclass(frozen=True)
class IdentityCheck:
    """Outcome of one identity comparison; both sides kept for diagnosis."""

    r: int
    k: int
    x: int
    umbral: int
    fast: int
    oracle: int | None = None
    zero_split: int | None = None

    @property
    def equal(self) -> bool:
        if self.umbral != self.fast:
            return False
        if self.oracle is not None and self.oracle != self.umbral:
            return False
        return True


def umbral_coefficients(k: int) -> UmbralPolynomial:
    """Expand ((2X+1)^(k+1) - (2X-1)^(k+1)) / (2(k+1)) exactly."""
    if k < 1:
        raise ValueError("k must be >= 1")
    coeffs = []
    for j in range(k + 2):
        if (k + 1 - j) % 2 == 1:
            coeffs.append(Fraction(math.comb(k + 1, j) * 2**j, k + 1))
        else:
            coeffs.append(Fraction(0))
    return UmbralPolynomial(k=k, coefficients=tuple(coeffs))


def umbral_eval(
    x: int,
    r: int,
    k: int,
    table: MobiusTable | None = None,
    constant_substitution: int = 0,
) -> int:
    """Evaluate the polynomial with X^j -> j * sum_{n<=x} J_{j-1}^r(n).

    ``constant_substitution`` is the value assigned to X^0 and exists only
    for the negative control; the identity requires 0 there. Must equal
    count_fast for the zero-inclusive box convention; a non-integral result
    raises InvariantViolationError.
    """
    if x < 0:
        raise ValueError("x must be >= 0")
    if r < 1 or k < 1:
        raise ValueError("r and k must be >= 1")
    if table is None:
        table = sieve_mobius(max(integer_root(x, r), 1))
    poly = umbral_coefficients(k)
    total = poly.coefficients[0] * constant_substitution
    for j in range(1, k + 2):
        c = poly.coefficients[j]
        if c:
            s = partial_sum_bernoulli(x, TotientParams(r=r, k=j), table)
            total += c * j * s
    if total.denominator != 1:
        raise InvariantViolationError(
            f"umbral evaluation at r={r}, k={k}, x={x} is non-integral: "
            f"{total} (convention mismatch)"
        )
    return total.numerator


def zero_coordinate_expansion(x: int, r: int, k: int) -> int:
    """Debug evaluator: count by splitting on the number of zero coordinates,

        sum_{i=0}^{k-1} C(k, i) 2^(k-i)
            sum_{n<=x} sum_{j=0}^{k-i-1} (-1)^(k-i-1-j) C(k-i, j) J_j^r(n)

    Slower than umbral_eval; used by identity_check to localize a mismatch.
    """
    if x < 0:
        raise ValueError("x must be >= 0")
    if r < 1 or k < 1:
        raise ValueError("r and k must be >= 1")
    jmax = k - 1
    sums = [0] * (jmax + 1)
    for n in range(1, x + 1):
        for j in range(jmax + 1):
            sums[j] += jordan(n, TotientParams(r=r, k=j))
    total = 0
    for i in range(k):
        inner = 0
        for j in range(k - i):
            sign = -1 if (k - i - 1 - j) % 2 else 1
            inner += sign * math.comb(k - i, j) * sums[j]
        total += math.comb(k, i) * 2 ** (k - i) * inner
    return total


def identity_check(
    r: int,
    k: int,
    x: int,
    table: MobiusTable | None = None,
    oracle_budget: int | None = None,
    debug: bool = False,
) -> IdentityCheck:
    """Compare umbral_eval against count_fast (and count_oracle when a
    budget is given and the box fits). Mismatch is a result, not an error;
    ``debug`` adds the zero-coordinate expansion to the report."""
    if table is None:
        table = sieve_mobius(max(integer_root(x, r), 1))
    lhs = umbral_eval(x, r, k, table=table)
    rhs = count_fast(CountParams(r=r, k=k, x=x), table)
    oracle = None
    if oracle_budget is not None and (2 * x + 1) ** k <= oracle_budget:
        oracle = count_oracle(CountParams(r=r, k=k, x=x), budget=oracle_budget)
    zero_split = None
    if debug or lhs != rhs:
        zero_split = zero_coordinate_expansion(x, r, k)
    return IdentityCheck(
        r=r, k=k, x=x, umbral=lhs, fast=rhs, oracle=oracle, zero_split=zero_split
    )
