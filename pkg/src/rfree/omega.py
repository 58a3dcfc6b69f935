"""Fractional-part sums, witness sequences, residual scans: the machinery
that makes the error term's non-decay measurable.

The central sum, in normalized form, is

    sum_{d <= floor(x^(1/r))} mu(d) d^(-rj) {x / d^r}^i

with the fractional part computed as (x mod d^r) / d^r by big-integer
modulus, never by floating division. The constructed witnesses can run to
seventy-plus digits, where floats carry no information at all.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Callable, NamedTuple

from .arith import (
    Enclosure,
    MobiusTable,
    ZetaValue,
    integer_root,
    mobius,
    primes_upto,
    sieve_mobius,
    zeta_value,
)
from .errors import ResourceLimitError
from .lattice import (
    DEFAULT_PRECISION,
    CountParams,
    CountRecord,
    count_record,
    decimal_places,
)

EXACT_ROOT_LIMIT = 10**5
_SCALE = 10**45        # fixed-point denominator for residual enclosures
_ROOT_SCALE = 10**12   # fixed-point denominator for real r-th roots


@dataclass(frozen=True)
class FracSumParams:
    """Parameters of the normalized fractional-part sum: weight d^(-r*j),
    fractional part raised to the i-th power, evaluated at x."""

    r: int
    j: int
    i: int
    x: int

    def __post_init__(self) -> None:
        if self.r < 1:
            raise ValueError("r must be >= 1")
        if self.j < 0 or self.i < 0:
            raise ValueError("exponents must be >= 0")
        if self.x < 0:
            raise ValueError("x must be >= 0")


class FracSumFloat(NamedTuple):
    """Float-mode result: value plus a linear accumulated-error estimate
    (one ulp per term; an estimate, not a rigorous bound)."""

    value: float
    error_estimate: float


def frac_sum(
    params: FracSumParams, table: MobiusTable, mode: str = "exact"
) -> Fraction | FracSumFloat:
    """The full sum over d <= floor(x^(1/r)).

    Exact mode returns a Fraction and is guarded at floor(x^(1/r)) <= 1e5;
    beyond that use truncated_frac_sum. Float mode trades exactness for
    speed and reports its error estimate.
    """
    r, j, i, x = params.r, params.j, params.i, params.x
    root = integer_root(x, r)
    if mode == "exact" and root > EXACT_ROOT_LIMIT:
        raise ResourceLimitError(
            f"floor(x^(1/r)) = {root} exceeds exact-mode guard "
            f"{EXACT_ROOT_LIMIT}; use truncated_frac_sum"
        )
    if table.limit < root:
        raise ValueError(f"table sieved to {table.limit}, need {root}")
    mu = table.mu
    if mode == "exact":
        total = Fraction(0)
        for d in range(1, root + 1):
            m = mu[d]
            if not m:
                continue
            drr = d**r
            rem = x % drr
            if i and not rem:
                continue
            term = Fraction(rem, drr) ** i / d ** (r * j)
            total += term if m == 1 else -term
        return total
    if mode == "float":
        eps = 2.220446049250313e-16
        value = 0.0
        abs_acc = 0.0
        count = 0
        for d in range(1, root + 1):
            m = mu[d]
            if not m:
                continue
            drr = d**r
            term = ((x % drr) / drr) ** i / d ** (r * j)
            value += term if m == 1 else -term
            abs_acc += term
            count += 1
        return FracSumFloat(value=value, error_estimate=(count + 2) * eps * abs_acc)
    raise ValueError(f"unknown mode {mode!r}")


def truncated_frac_sum(
    params: FracSumParams, cutoff: int
) -> tuple[Fraction, Fraction]:
    """(finite part over d <= cutoff, rigorous bound on the rest).

    Tail bound: |sum_{d > D} mu(d) d^(-rj) {..}^i| <= sum_{d > D} d^(-rj)
    <= D^(1-rj)/(rj - 1), needing rj >= 2. Only x mod d^r for d <= cutoff is
    computed, so x may be arbitrarily large. When cutoff already covers
    floor(x^(1/r)) the tail is exactly zero.
    """
    r, j, i, x = params.r, params.j, params.i, params.x
    rj = r * j
    if rj < 2:
        raise ValueError("tail bound requires r*j >= 2")
    if cutoff < 2:
        raise ValueError("cutoff must be >= 2")
    root = integer_root(x, r)
    top = min(cutoff, root)
    finite = Fraction(0)
    for d in range(1, top + 1):
        m = mobius(d)
        if not m:
            continue
        drr = d**r
        rem = x % drr
        if i and not rem:
            continue
        term = Fraction(rem, drr) ** i / d**rj
        finite += term if m == 1 else -term
    if cutoff >= root:
        tail = Fraction(0)
    else:
        tail = Fraction(1, cutoff ** (rj - 1) * (rj - 1))
    return finite, tail


# ---------------------------------------------------------------------------
# Witness constructions
# ---------------------------------------------------------------------------

def witness_large(r: int, k: int, count: int) -> list[int]:
    """First ``count`` integers >= 3^r congruent to 2^r - 1 mod 2^r.

    At these x the fractional-part sum with weight d^(-rk) is provably
    negative; the construction needs r >= 2 and rk >= 4.
    """
    if r < 2:
        raise ValueError("witness construction requires r >= 2")
    if r * k < 4:
        raise ValueError("witness construction requires r*k >= 4")
    if count < 1:
        raise ValueError("count must be >= 1")
    modulus = 2**r
    start = 3**r
    first = start + (modulus - 1 - start) % modulus
    return [first + n * modulus for n in range(count)]


def witness_small(r: int, m: int) -> int:
    """m^2 * prod_{3 <= p <= 97, p prime} p^r, for the rk in {2, 3} cases.

    m must be coprime to 2 and to every odd prime below 100 (m = 1, 101,
    103, ... all qualify). For r = 2, m = 1 the result has 73 digits.
    """
    if r not in (2, 3):
        raise ValueError("small-case witnesses exist for r in {2, 3} only")
    if m < 1:
        raise ValueError("m must be >= 1")
    odd_primes = primes_upto(100)[1:]
    if m % 2 == 0 or any(m % p == 0 for p in odd_primes):
        raise ValueError("m must be coprime to 2 and all odd primes < 100")
    x = m * m
    for p in odd_primes:
        x *= p**r
    return x


@dataclass(frozen=True)
class WitnessReport:
    """Certified evaluation of the fractional-part sum at one witness x.

    upper_bound = finite_part + tail_bound is a rigorous upper bound on the
    true sum; verdict is "negative" exactly when that bound is below zero.
    target_bound is the stricter constant the construction aims for, kept
    for comparison (None when no branch applies).
    """

    x: int
    finite_part: Fraction
    tail_bound: Fraction
    upper_bound: Fraction
    verdict: str
    target_bound: Fraction | None

    @property
    def negative(self) -> bool:
        return self.verdict == "negative"


def certify_witness(x: int, r: int, k: int, cutoff: int | None = None) -> WitnessReport:
    """Evaluate sum_d mu(d) d^(-rk) {x/d^r} at a witness with certified tail.

    cutoff=None evaluates exactly when floor(x^(1/r)) <= 1e5, else truncates
    at 100. The applicable target bound is -1/2^(rk+1) + 1/2^(r(k+1)) for
    r >= 2, rk >= 4, and -1/20 for the (r, k) in {(2,1), (3,1)} cases.
    """
    if x < 0:
        raise ValueError("x must be >= 0")
    root = integer_root(x, r)
    if cutoff is None:
        cutoff = root if 2 <= root <= EXACT_ROOT_LIMIT else max(100, 2)
    params = FracSumParams(r=r, j=k, i=1, x=x)
    finite, tail = truncated_frac_sum(params, cutoff)
    upper = finite + tail
    if r >= 2 and r * k >= 4:
        target = Fraction(-1, 2 ** (r * k + 1)) + Fraction(1, 2 ** (r * (k + 1)))
    elif k == 1 and r in (2, 3):
        target = Fraction(-1, 20)
    else:
        target = None
    return WitnessReport(
        x=x,
        finite_part=finite,
        tail_bound=tail,
        upper_bound=upper,
        verdict="negative" if upper < 0 else "inconclusive",
        target_bound=target,
    )


# ---------------------------------------------------------------------------
# Residual enclosures (principal-term quality)
# ---------------------------------------------------------------------------

def _mu_power_sum_bounds(
    dmax: int, s: int, mu_of: Callable[[int], int]
) -> tuple[int, int]:
    # Fixed-point bounds: lo/_SCALE <= sum_{d<=dmax} mu(d)/d^s <= hi/_SCALE.
    lo = hi = 0
    for d in range(1, dmax + 1):
        m = mu_of(d)
        if not m:
            continue
        q, rem = divmod(_SCALE, d**s)
        if m == 1:
            lo += q
            hi += q + (1 if rem else 0)
        else:
            lo -= q + (1 if rem else 0)
            hi -= q
    return lo, hi


def _reciprocal_fixed_point(zeta: ZetaValue) -> tuple[int, int]:
    # Outward-rounded fixed-point bounds on 1/zeta(s).
    recip = zeta.reciprocal()
    lo = math.floor(recip.lo * _SCALE)
    hi = math.ceil(recip.hi * _SCALE)
    return lo, hi


def mertens_residual(
    x: int, s: int, zeta: ZetaValue, table: MobiusTable | None = None
) -> Enclosure:
    """Enclosure of sum_{d<=x} mu(d)/d^s - 1/zeta(s).

    Decays like x^(1-s); the scan utility multiplies by x^(s-1) to exhibit
    the bounded scaled residual.
    """
    if x < 1:
        raise ValueError("x must be >= 1")
    if s < 2:
        raise ValueError("s must be >= 2")
    if zeta.s != s:
        raise ValueError(f"zeta enclosure is for s={zeta.s}, not {s}")
    mu_of = table.mu.__getitem__ if table is not None else mobius
    if table is not None and table.limit < x:
        raise ValueError(f"table sieved to {table.limit}, need {x}")
    slo, shi = _mu_power_sum_bounds(x, s, mu_of)
    rlo, rhi = _reciprocal_fixed_point(zeta)
    return Enclosure(Fraction(slo - rhi, _SCALE), Fraction(shi - rlo, _SCALE))


def mertens_residual_scan(
    x_max: int, s: int, zeta: ZetaValue, table: MobiusTable
) -> Iterator[tuple[int, Fraction]]:
    """Yield (x, sup |residual| * x^(s-1)) for x = 1..x_max, incrementally."""
    if table.limit < x_max:
        raise ValueError(f"table sieved to {table.limit}, need {x_max}")
    if zeta.s != s:
        raise ValueError(f"zeta enclosure is for s={zeta.s}, not {s}")
    rlo, rhi = _reciprocal_fixed_point(zeta)
    mu = table.mu
    slo = shi = 0
    for x in range(1, x_max + 1):
        m = mu[x]
        if m:
            q, rem = divmod(_SCALE, x**s)
            if m == 1:
                slo += q
                shi += q + (1 if rem else 0)
            else:
                slo -= q + (1 if rem else 0)
                shi -= q
        sup_abs = max(shi - rlo, rhi - slo)  # >= |residual| * _SCALE
        yield x, Fraction(sup_abs * x ** (s - 1), _SCALE)


def _root_interval(x: int, r: int) -> tuple[Fraction, Fraction]:
    # [lo, hi] containing the real x^(1/r), via a scaled integer root.
    if r == 1:
        return Fraction(x), Fraction(x)
    t = integer_root(x * _ROOT_SCALE**r, r)
    return Fraction(t, _ROOT_SCALE), Fraction(t + 1, _ROOT_SCALE)


def proposition_residual(
    x: int, k: int, r: int, zeta: ZetaValue, table: MobiusTable | None = None
) -> Enclosure:
    """Enclosure of (sum_{d^r<=x} mu(d) x^k/d^(rk) - x^k/zeta(rk)) / x^(1/r).

    Bounded as x grows; the scan utility exhibits that.
    """
    if x < 1:
        raise ValueError("x must be >= 1")
    if r * k < 2:
        raise ValueError("requires r*k >= 2")
    if zeta.s != r * k:
        raise ValueError(f"zeta enclosure is for s={zeta.s}, not {r * k}")
    root = integer_root(x, r)
    mu_of = table.mu.__getitem__ if table is not None else mobius
    if table is not None and table.limit < root:
        raise ValueError(f"table sieved to {table.limit}, need {root}")
    slo, shi = _mu_power_sum_bounds(root, r * k, mu_of)
    rlo, rhi = _reciprocal_fixed_point(zeta)
    xk = x**k
    numer = Enclosure(Fraction(xk * (slo - rhi), _SCALE), Fraction(xk * (shi - rlo), _SCALE))
    return numer.div_pos(*_root_interval(x, r))


def proposition_residual_scan(
    x_max: int, k: int, r: int, zeta: ZetaValue, table: MobiusTable
) -> Iterator[tuple[int, Fraction]]:
    """Yield (x, sup of the scaled |residual|) for x = 1..x_max."""
    root_max = integer_root(x_max, r)
    if table.limit < root_max:
        raise ValueError(f"table sieved to {table.limit}, need {root_max}")
    if zeta.s != r * k:
        raise ValueError(f"zeta enclosure is for s={zeta.s}, not {r * k}")
    rlo, rhi = _reciprocal_fixed_point(zeta)
    mu = table.mu
    s = r * k
    slo = shi = 0
    d = 0
    for x in range(1, x_max + 1):
        root = integer_root(x, r)
        while d < root:
            d += 1
            m = mu[d]
            if not m:
                continue
            q, rem = divmod(_SCALE, d**s)
            if m == 1:
                slo += q
                shi += q + (1 if rem else 0)
            else:
                slo -= q + (1 if rem else 0)
                shi -= q
        xk = x**k
        numer = Enclosure(
            Fraction(xk * (slo - rhi), _SCALE), Fraction(xk * (shi - rlo), _SCALE)
        )
        scaled = numer.div_pos(*_root_interval(x, r))
        yield x, scaled.abs().hi


# ---------------------------------------------------------------------------
# Error-term scans
# ---------------------------------------------------------------------------

MAX_SCAN_RECORDS = 10**6

_WORKER_STATE: dict = {}


def _scan_worker_init(limit: int, s: int, precision: Fraction) -> None:
    _WORKER_STATE["table"] = sieve_mobius(limit)
    _WORKER_STATE["zeta"] = zeta_value(s, precision)


def _scan_worker_chunk(args) -> list[CountRecord]:
    r, k, xs, precision, places = args
    table = _WORKER_STATE["table"]
    zeta = _WORKER_STATE["zeta"]
    return [
        count_record(CountParams(r=r, k=k, x=x), precision, table, zeta, places)
        for x in xs
    ]


def error_scan(
    r: int,
    k: int,
    x_min: int,
    x_max: int,
    step: int = 1,
    precision: Fraction = DEFAULT_PRECISION,
    workers: int = 1,
    table: MobiusTable | None = None,
    max_records: int = MAX_SCAN_RECORDS,
    sieve_limit: int | None = None,
) -> Iterator[CountRecord]:
    """Emit a CountRecord per sampled x, in ascending order.

    Deterministic for fixed arguments regardless of worker count: records
    are computed independently and merged in x order, and every quantity is
    exact or derived from the same fixed-precision zeta enclosure.
    ``sieve_limit`` presizes the Mobius table beyond the scan's own needs.
    """
    if x_min < 2:
        raise ValueError("x_min must be >= 2")
    if x_max < x_min:
        raise ValueError("x_max must be >= x_min")
    if step < 1:
        raise ValueError("step must be >= 1")
    xs = range(x_min, x_max + 1, step)
    if len(xs) > max_records:
        raise ResourceLimitError(
            f"scan would emit {len(xs)} records, limit is {max_records}"
        )
    precision = Fraction(precision)
    places = decimal_places(precision)
    limit = max(integer_root(x_max, r), 1, sieve_limit or 1)
    if workers <= 1:
        if table is None:
            table = sieve_mobius(limit)
        zeta = zeta_value(r * k, precision)
        for x in xs:
            yield count_record(CountParams(r=r, k=k, x=x), precision, table, zeta, places)
        return
    from concurrent.futures import ProcessPoolExecutor

    chunk_size = max(1, math.ceil(len(xs) / (workers * 4)))
    chunks = [
        (r, k, list(xs[i : i + chunk_size]), precision, places)
        for i in range(0, len(xs), chunk_size)
    ]
    with ProcessPoolExecutor(
        max_workers=workers,
        initializer=_scan_worker_init,
        initargs=(limit, r * k, precision),
    ) as pool:
        for records in pool.map(_scan_worker_chunk, chunks):
            yield from records


@dataclass(frozen=True)
class OmegaRatioReport:
    """Two-window non-decay summary of |normalized_error| over a scan."""

    split: int
    max_early: Decimal
    max_late: Decimal
    ratio: Decimal


def omega_ratio_report(records: Iterable, window_split: int) -> OmegaRatioReport:
    """Max |normalized_error| before and after the split, and their ratio.

    ratio = max_late / max_early; a ratio near zero means the normalized
    error decays, which is what the non-decay evidence must rule out.
    Raises ValueError if either window is empty. ``records`` is anything
    with .x and .normalized_error attributes (CountRecord or a parsed row).
    """
    max_early: Decimal | None = None
    max_late: Decimal | None = None
    for rec in records:
        v = abs(rec.normalized_error)
        if rec.x < window_split:
            max_early = v if max_early is None else max(max_early, v)
        else:
            max_late = v if max_late is None else max(max_late, v)
    if max_early is None or max_late is None:
        raise ValueError("both scan windows must be nonempty")
    with localcontext() as ctx:
        ctx.prec = 40
        if max_late == 0:
            ratio = Decimal(0) if max_early else Decimal(1)
        elif max_early == 0:
            ratio = Decimal("Infinity")
        else:
            ratio = max_late / max_early
    return OmegaRatioReport(
        split=window_split, max_early=max_early, max_late=max_late, ratio=ratio
    )
