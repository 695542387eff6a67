"""Bernoulli numbers in the Milnor-Stasheff convention and prime regularity.

Here B_m is the positive rational |B_2m| of the modern signed convention, so
x/(e^x - 1) = 1 - x/2 + sum (-1)^(m+1) B_m x^(2m)/(2m)!, B_1 = 1/6,
B_2 = 1/30, B_6 = 691/2730. Num(.) is taken sign-blind throughout.
"""

import math
from fractions import Fraction
from functools import lru_cache
from typing import List

import sympy

from .bernoulli_cache import BernoulliTable
from .errors import DomainError, KOSweepError
from .exact import Prime, as_odd_prime, multiplicative_order

_table = BernoulliTable()


def get_table() -> BernoulliTable:
    """The process-wide table used by bernoulli_exact."""
    return _table


def set_table(table: BernoulliTable):
    """Install a prebuilt (e.g. cached) table; sweep workers share it read-only."""
    global _table
    _table = table


def bernoulli_exact(m: int) -> Fraction:
    """B_m, exact."""
    if m < 1:
        raise DomainError("index starts at 1")
    return _table.value(m)


def von_staudt_denominator(m: int) -> int:
    """Product of the primes p with (p - 1) | 2m."""
    return math.prod(d + 1 for d in sympy.divisors(2 * m) if sympy.isprime(d + 1))


def num_b_over_2m(m: int) -> int:
    """|Num(B_m / 2m)|, with the value 1 at m = 0."""
    if m == 0:
        return 1
    return abs((bernoulli_exact(m) / (2 * m)).numerator)


class _ResidueTable:
    """Signed modern B_0, B_2, B_4, ... reduced mod p, extended on demand.

    Uses sum_{j<=2k} C(2k+1, j) B_j = 0 with only even j and B_1 = -1/2; every
    inverse needed (of 2 and of 2k+1 <= p-2) exists mod p.
    """

    def __init__(self, p: int):
        self.p = p
        fact = [1] * p
        for i in range(1, p):
            fact[i] = fact[i - 1] * i % p
        inv_fact = [1] * p
        inv_fact[p - 1] = pow(fact[p - 1], -1, p)
        for i in range(p - 1, 0, -1):
            inv_fact[i - 1] = inv_fact[i] * i % p
        self.fact = fact
        self.inv_fact = inv_fact
        self.half = pow(2, -1, p)
        self.residues = [1]

    def __getitem__(self, k: int) -> int:
        """Residue of B_2k for 0 <= k <= (p - 3)/2."""
        if not 0 <= k <= (self.p - 3) // 2:
            raise KOSweepError(f"B_{2 * k} is not tabulated mod {self.p}")
        while len(self.residues) <= k:
            self._extend()
        return self.residues[k]

    def _extend(self):
        p, fact, inv_fact = self.p, self.fact, self.inv_fact
        k = len(self.residues)
        n = 2 * k + 1
        s = 0
        for j in range(k):
            binom = fact[n] * inv_fact[2 * j] * inv_fact[n - 2 * j] % p
            s += binom * self.residues[j]
        s -= n * self.half
        self.residues.append(-s * pow(n, -1, p) % p)


# Tables are O(p) each; only the most recently used primes are kept.
@lru_cache(maxsize=64)
def _residue_table(p: int) -> _ResidueTable:
    return _ResidueTable(p)


def _reduced_index(m: int, p: int) -> int:
    """m' with 2m' == 2m mod (p - 1) and 1 <= m', 2m' <= p - 3."""
    r = (2 * m) % (p - 1)
    return r // 2


def _bernoulli_mod_p(m: int, p: int) -> int:
    m_red = _reduced_index(m, p)
    if m_red == 0:
        raise DomainError("not a p-integer")
    # Kummer: B_2m/2m == B_2m'/2m' mod p for the signed numbers; the
    # Milnor-Stasheff value carries the sign (-1)^(m+1).
    residue = _residue_table(p)[m_red] * pow(2 * m_red, -1, p) % p
    return residue if m % 2 == 1 else -residue % p


def bernoulli_mod_p(m: int, p: Prime) -> int:
    """Residue of B_m/(2m) mod p for odd p with (p - 1) not dividing 2m."""
    if m < 1:
        raise DomainError("index starts at 1")
    as_odd_prime(p)
    return _bernoulli_mod_p(m, p)


def _divides_num(p: int, m: int) -> bool:
    if m == 0 or (2 * m) % (p - 1) == 0:
        # von Staudt: p sits in the denominator
        return False
    return _residue_table(p)[_reduced_index(m, p)] == 0


def divides_num(p: Prime, m: int) -> bool:
    """True iff p divides Num(B_m / 2m)."""
    as_odd_prime(p)
    return _divides_num(p, m)


def irregular_indices(p: Prime) -> List[int]:
    """All m with 2m <= p - 3 and p | Num(B_m / 2m)."""
    as_odd_prime(p)
    return [m for m in range(1, (p - 3) // 2 + 1) if _divides_num(p, m)]


def is_regular(p: Prime) -> bool:
    """True iff p divides no Num(B_m / 2m)."""
    return not irregular_indices(p)


def divides_odd_power_minus_one(p: Prime) -> bool:
    """Finite test: p | 2^(2m-1) - 1 for some m <= (p - 1)/2."""
    as_odd_prime(p)
    return any(pow(2, 2 * m - 1, p) == 1 for m in range(1, (p - 1) // 2 + 1))


def is_very_regular(p: Prime) -> bool:
    """Regular, and dividing no 2^(2m-1) - 1 (ord_p(2) even)."""
    if not is_regular(p):
        return False
    order_even = multiplicative_order(2, p) % 2 == 0
    if order_even == divides_odd_power_minus_one(p):
        raise KOSweepError(f"order-parity criterion disagrees with finite test at {p}")
    return order_even
