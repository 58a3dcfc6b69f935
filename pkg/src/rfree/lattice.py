"""Counting relatively r-prime k-tuples in the box [-x, x]^k.

V(r, k, x) counts tuples for which no prime q has q^r dividing every
coordinate; equivalently gcd(|x_1|, ..., |x_k|) is nonzero and r-free. The
all-zero tuple never counts, tuples containing a unit always do, and tuples
with some (not all) zero coordinates count whenever the nonzero part does.

count_oracle enumerates the box and is the ground truth. count_fast inverts
with the Mobius sieve:

    V = sum_{d <= floor(x^(1/r))} mu(d) (2 floor(x/d^r) + 1)^k - M(floor(x^(1/r)))

where the Mertens subtraction cancels the all-zero tuple, which every d
counts. The error term is measured against (2x)^k / zeta(rk).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from itertools import product

from .arith import (
    Enclosure,
    MobiusTable,
    ZetaValue,
    fraction_to_decimal,
    integer_root,
    ln_decimal,
    rfree_sieve,
    sieve_mobius,
    zeta_value,
)
from .errors import ResourceLimitError

DEFAULT_BOX_BUDGET = 10**8
DEFAULT_PRECISION = Fraction(1, 10**30)


@dataclass(frozen=True)
class CountParams:
    """Power r >= 1, dimension k >= 1, box half-width x >= 0."""

    r: int
    k: int
    x: int

    def __post_init__(self) -> None:
        if self.r < 1:
            raise ValueError("r must be >= 1")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.x < 0:
            raise ValueError("x must be >= 0")


@dataclass(frozen=True)
class CountRecord:
    """One scan row: exact count, main-term and error enclosures, and the
    normalized error for the applicable asymptotic case."""

    params: CountParams
    V: int
    main_term: Enclosure
    error: Enclosure
    normalized_error: Decimal

    @property
    def x(self) -> int:
        return self.params.x

    @property
    def density(self) -> Fraction:
        """V / (2x+1)^k, the box density; converges to 1/zeta(rk)."""
        return Fraction(self.V, (2 * self.params.x + 1) ** self.params.k)


def count_oracle(params: CountParams, budget: int = DEFAULT_BOX_BUDGET) -> int:
    """V by full enumeration of {-x..x}^k; the defining count."""
    x, k, r = params.x, params.k, params.r
    if (2 * x + 1) ** k > budget:
        raise ResourceLimitError(
            f"count_oracle needs {(2 * x + 1) ** k} tuples, budget is {budget}"
        )
    rfree = rfree_sieve(x, r)
    gcd = math.gcd
    count = 0
    for t in product(range(-x, x + 1), repeat=k):
        if rfree[gcd(*t)]:
            count += 1
    return count


def count_fast(params: CountParams, table: MobiusTable) -> int:
    """V by Mobius inversion over d <= floor(x^(1/r)); exact."""
    x, k, r = params.x, params.k, params.r
    root = integer_root(x, r)
    if table.limit < root:
        raise ValueError(
            f"table sieved to {table.limit} but floor(x^(1/r)) = {root}"
        )
    mu = table.mu
    total = 0
    for d in range(1, root + 1):
        m = mu[d]
        if m:
            total += m * (2 * (x // d**r) + 1) ** k
    return total - table.mertens_at(root)


def error_normalization(params: CountParams) -> Decimal:
    """Denominator for the normalized error, by asymptotic case:

        x log x     when (r, k) = (1, 2)
        x^(1/r)     when r >= 2 and k = 1
        x^(k-1)     otherwise
    """
    r, k, x = params.r, params.k, params.x
    if r == 1 and k == 2:
        if x < 2:
            raise ValueError("x log x normalization needs x >= 2")
        with localcontext() as ctx:
            ctx.prec = 50
            return Decimal(x) * ln_decimal(x)
    if x < 1:
        raise ValueError("normalization needs x >= 1")
    if r >= 2 and k == 1:
        # fixed-point floor(x^(1/r)) at 30 fractional digits
        scale = 10**30
        t = integer_root(x * scale**r, r)
        return Decimal(t).scaleb(-30)
    return Decimal(x ** (k - 1))


def count_record(
    params: CountParams,
    precision: Fraction = DEFAULT_PRECISION,
    table: MobiusTable | None = None,
    zeta: ZetaValue | None = None,
    places: int | None = None,
) -> CountRecord:
    """Assemble the full record for one (r, k, x).

    The main term (2x)^k / zeta(rk) and the error V - main are enclosures
    propagating the zeta radius; normalized_error is a representative decimal
    (midpoint over the case denominator). ``places`` defaults to the digit
    count of ``precision``.
    """
    x, k, r = params.x, params.k, params.r
    if x < 1:
        raise ValueError("count_record needs x >= 1")
    if table is None:
        table = sieve_mobius(max(integer_root(x, r), 1))
    if zeta is None:
        zeta = zeta_value(r * k, Fraction(precision))
    V = count_fast(params, table)
    box = (2 * x) ** k
    main = Enclosure(box / zeta.hi, box / zeta.lo)
    error = main.rsub(V)
    if places is None:
        places = decimal_places(precision)
    if r == 1 and k == 2 and x < 2:
        # x log x vanishes at x = 1; the count is fine, the ratio is not.
        normalized = Decimal("NaN")
    else:
        norm = error_normalization(params)
        with localcontext() as ctx:
            ctx.prec = places + 30
            normalized = fraction_to_decimal(error.abs().mid, places + 10) / norm
            normalized = normalized.quantize(Decimal(1).scaleb(-places))
    return CountRecord(
        params=params,
        V=V,
        main_term=main,
        error=error,
        normalized_error=normalized,
    )


def decimal_places(precision: Fraction) -> int:
    """Number of fractional digits implied by an enclosure target, e.g.
    1e-30 -> 30. At least one digit."""
    precision = Fraction(precision)
    if precision <= 0:
        raise ValueError("precision must be positive")
    places = 1
    while Fraction(1, 10**places) > precision and places < 1000:
        places += 1
    return places
