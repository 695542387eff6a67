"""The constants t(m), A(m, n) and the A(m, 2) sweep."""

import logging
import math
import multiprocessing
import time
from dataclasses import dataclass, field
from functools import lru_cache, partial
from typing import Callable, List, Optional, Tuple

from sympy.utilities.iterables import partitions

from .bernoulli import divides_num, get_table, num_b_over_2m, set_table
from .bernoulli_cache import BernoulliTable
from .errors import DomainError, KOSweepError
from .exact import (
    Prime,
    as_odd_prime,
    gcd_many,
    multiplicative_order,
    p_adic_valuation,
    primes_up_to,
)

logger = logging.getLogger(__name__)

STRATEGIES = ("four_condition", "full_gcd", "cross_check")

CITE_INDEX_BOUND = "odd-primary-index-bound"


@dataclass(frozen=True)
class ObstructionConstant:
    """t(m) = (2^(2m-1) - 1) * Num(B_m / 2m), and t(0) = 1."""

    m: int
    value: int
    factor_power: int
    factor_num: int

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "value": str(self.value),
            "factors": [str(self.factor_power), str(self.factor_num)],
        }


def t_constant(m: int) -> ObstructionConstant:
    """The ObstructionConstant for m >= 0."""
    if m < 0:
        raise DomainError("m must be nonnegative")
    if m == 0:
        return ObstructionConstant(0, 1, 1, 1)
    power = 2 ** (2 * m - 1) - 1
    num = num_b_over_2m(m)
    return ObstructionConstant(m, power * num, power, num)


@lru_cache(maxsize=None)
def t_value(m: int) -> int:
    """Just the value of t(m)."""
    return t_constant(m).value


def a_constant(m: int, n: int) -> int:
    """gcd of prod t(m_i) over multisets {m_1..m_n} of nonnegative m_i summing to m."""
    if m < 0:
        raise DomainError("m must be nonnegative")
    if n < 1:
        raise DomainError("n must be positive")
    if m == 0:
        return 1
    if n == 1:
        return t_value(m)
    g = 0
    # zero parts are t(0) = 1, so partitions with at most n parts suffice
    for parts in partitions(m, m=n):
        g = math.gcd(g, math.prod(t_value(k) ** mult for k, mult in parts.items()))
        if g == 1:
            break
    return g


def four_condition_gcd(m: int) -> int:
    """gcd of t(i) t(m - i) for i = 0, 1, 2, 3 (i <= m)."""
    return gcd_many(t_value(i) * t_value(m - i) for i in range(min(3, m) + 1))


@dataclass(frozen=True)
class IndexBound:
    """The odd-primary index of J_(2n+q, 4m-2n-q) in pi_4m(ko) divides value."""

    n: int
    q: int
    m: int
    value: int
    citation: str = CITE_INDEX_BOUND

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "q": self.q,
            "m": self.m,
            "value": str(self.value),
            "citation": self.citation,
        }


def j_index_bound(n: int, q: int, m: int) -> IndexBound:
    """The index bound A(m, n) for J_(2n+q, 4m-2n-q)."""
    if n < 1 or q < 0 or m < 0:
        raise DomainError("need n >= 1, q >= 0, m >= 0")
    return IndexBound(n, q, m, a_constant(m, n))


@lru_cache(maxsize=None)
def _vp_power_factor(k: int, p: int) -> int:
    """v_p(2^(2k-1) - 1) from the order of 2 and lifting the exponent."""
    order = multiplicative_order(2, p)
    exponent = 2 * k - 1
    if exponent % order:
        return 0
    return p_adic_valuation(2**order - 1, p) + p_adic_valuation(exponent // order, p)


def vp_t(k: int, p: int) -> int:
    """v_p(t(k)) without the exact numerator; the Num part is capped at 1."""
    if k == 0:
        return 0
    return _vp_power_factor(k, p) + (1 if divides_num(p, k) else 0)


def vp_j(n: int, m: int, p: Prime) -> int:
    """v_p of the index j_(2n, 4m-2n) for p with 4m + 1 < 2p - 3."""
    if n < 1 or m < 0:
        raise DomainError("need n >= 1 and m >= 0")
    p = as_odd_prime(p)
    if not 4 * m + 1 < 2 * p - 3:
        raise DomainError("outside sharpness range")
    if m == 0:
        return 0
    return min(
        sum(mult * vp_t(k, p) for k, mult in parts.items())
        for parts in partitions(m, m=n)
    )


def sharpness_prime_bound(m: int) -> int:
    """Primes above this bound that divide A(m, n) divide the true index."""
    return 2 * m + 2


def split_small_primes(value: int, bound: int) -> Tuple[int, int]:
    """(part built from primes <= bound, cofactor with only larger primes)."""
    small = 1
    for p in primes_up_to(bound):
        while value % p == 0:
            value //= p
            small *= p
    return small, value


def sharp_part(m: int, n: int) -> int:
    """Cofactor of A(m, n) after removing primes <= 2m + 2."""
    return split_small_primes(a_constant(m, n), sharpness_prime_bound(m))[1]


def away_from_two_range(dimension: int, verified_m: int) -> int:
    """Degrees k below this value are odd-primary surjective in dimension 4l.

    A(m, 2) = 1 for m <= verified_m gives A(m, 2l) = 1 for m <= verified_m * l.
    """
    if dimension % 4 or dimension < 6:
        raise DomainError("dimension must be a multiple of 4 and at least 6")
    return (verified_m - 1) * dimension


def splitting_multiplier_valuation(m: int, p: Prime) -> int:
    """v_p of the multiplier of the p-local splitting map on pi_(4m-d-1)."""
    if m < 1:
        raise DomainError("m must be positive")
    p = as_odd_prime(p)
    return p_adic_valuation(t_value(m), p)


@dataclass(frozen=True)
class SweepRow:
    m: int
    four_condition: Optional[int] = None
    full_gcd: Optional[int] = None


@dataclass
class SweepReport:
    m_max: int
    strategy: str
    wall_time: float = 0.0
    rows: List[SweepRow] = field(default_factory=list)

    def gcd_for(self, row: SweepRow) -> int:
        """The gcd a row is judged by: A(m, 2) itself unless only four splits ran."""
        return row.four_condition if self.strategy == "four_condition" else row.full_gcd

    @property
    def failures(self) -> List[int]:
        return [row.m for row in self.rows if self.gcd_for(row) != 1]

    def to_dict(self) -> dict:
        return {
            "m_max": self.m_max,
            "strategy": self.strategy,
            "failures": self.failures,
            "seconds": f"{self.wall_time:.3f}",
        }

    def csv_rows(self) -> List[Tuple[int, int]]:
        return [(row.m, self.gcd_for(row)) for row in self.rows]


def _sweep_row(m: int, strategy: str) -> SweepRow:
    four = four_condition_gcd(m) if strategy != "full_gcd" else None
    full = a_constant(m, 2) if strategy != "four_condition" else None
    if strategy == "cross_check" and four == 1 and full != 1:
        raise KOSweepError(f"four-condition gcd is 1 but A({m}, 2) = {full}")
    return SweepRow(m, four, full)


def _init_worker(table: BernoulliTable):
    set_table(table)


def sweep_a2(
    m_max: int,
    strategy: str = "cross_check",
    workers: int = 1,
    table: Optional[BernoulliTable] = None,
    progress: Optional[Callable[[int, int], None]] = None,
) -> SweepReport:
    """Check A(m, 2) = 1 for 2 <= m <= m_max; rows come back in order of m."""
    if m_max < 2:
        raise DomainError("m_max must be at least 2")
    if strategy not in STRATEGIES:
        raise DomainError(f"unknown strategy {strategy!r}")

    # single writer: the table is complete before any worker reads it
    table = table or get_table()
    table.extend_to(m_max)
    set_table(table)

    logger.info("Sweeping A(m, 2) for m <= %d (%s, %d workers)", m_max, strategy, workers)
    start = time.perf_counter()
    ms = range(2, m_max + 1)
    work = partial(_sweep_row, strategy=strategy)
    rows: List[SweepRow] = []

    def collect(results):
        for row in results:
            rows.append(row)
            if progress:
                progress(len(rows), len(ms))

    if workers <= 1:
        collect(map(work, ms))
    else:
        chunksize = max(1, len(ms) // (4 * workers))
        with multiprocessing.Pool(
            workers, initializer=_init_worker, initargs=(table,)
        ) as pool:
            collect(pool.imap(work, ms, chunksize=chunksize))

    report = SweepReport(
        m_max=m_max,
        strategy=strategy,
        wall_time=time.perf_counter() - start,
        rows=rows,
    )
    logger.info(
        "Sweep finished in %.3fs with %d failures", report.wall_time, len(report.failures)
    )
    return report
