"""Exact integer and rational arithmetic shared by every other module."""

import math
from fractions import Fraction
from typing import Iterable, List, NewType

import sympy

from .errors import DomainError

# Canonical form (lowest terms, positive denominator, 0 == 0/1) is enforced
# by Fraction at construction, so equality is structural.
Rational = Fraction

Prime = NewType("Prime", int)

# sympy.isprime is deterministic below 2**64; everything the sweep generates
# stays far below this.
PRIMALITY_BOUND = 2**64


def as_prime(value: int) -> Prime:
    """Certify that value is prime and return it as a Prime."""
    value = int(value)
    if value >= PRIMALITY_BOUND:
        raise DomainError(f"{value} is outside the deterministic primality range")
    if not sympy.isprime(value):
        raise DomainError(f"{value} is not prime")
    return Prime(value)


def as_odd_prime(value: int) -> Prime:
    """Certify that value is an odd prime."""
    if int(value) == 2:
        raise DomainError("odd primes only")
    return as_prime(value)


def primes_up_to(bound: int) -> List[Prime]:
    """All primes <= bound in ascending order; empty below 2."""
    if bound < 2:
        return []
    return [Prime(int(p)) for p in sympy.primerange(2, bound + 1)]


def multiplicative_order(a: int, p: Prime) -> int:
    """Least k >= 1 with a**k == 1 mod p."""
    if a % p == 0:
        raise DomainError("not a unit")
    return int(sympy.n_order(a % p, p))


def p_adic_valuation(x: int, p: Prime) -> int:
    """Largest k with p**k dividing x."""
    if x == 0:
        raise DomainError("valuation of zero")
    return int(sympy.multiplicity(p, abs(x)))


def gcd_many(values: Iterable[int]) -> int:
    """gcd of the absolute values; 0 for an empty input."""
    return math.gcd(*values)
