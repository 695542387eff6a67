"""Ahat- and L-numbers of manifolds given by their Pontrjagin numbers."""

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Dict, Mapping, Optional

from .bernoulli import bernoulli_exact
from .errors import DomainError
from .ko import KOElement
from .lattice import IntegralLattice, Vector, build, copies, evaluate, hyperbolic, represent
from .series import (
    Monomial,
    PontPolynomial,
    genus_polynomials,
    monomial_text,
    parse_monomial,
)


def _integer(value, what: str) -> int:
    """Exact integer from a JSON number or decimal string; no truncation."""
    if isinstance(value, bool):
        raise DomainError(f"{what} must be an integer, got {value!r}")
    try:
        exact = Fraction(value)
    except (TypeError, ValueError, OverflowError) as e:
        raise DomainError(f"{what} must be an integer, got {value!r}") from e
    if exact.denominator != 1:
        raise DomainError(f"{what} must be an integer, got {value!r}")
    return exact.numerator


@dataclass(frozen=True)
class PontNumbers:
    """<p_I, [M]> for the monomials p_I of total degree = dimension."""

    dimension: int
    values: Mapping[Monomial, int] = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        if self.dimension <= 0 or self.dimension % 4:
            raise DomainError("dimension must be a positive multiple of 4")
        cleaned: Dict[Monomial, int] = {}
        for monomial, value in self.values.items():
            key = tuple(sorted(monomial))
            if 4 * sum(key) != self.dimension:
                raise DomainError(
                    f"monomial {key} does not have degree {self.dimension}"
                )
            if int(value):
                cleaned[key] = int(value)
        object.__setattr__(self, "values", cleaned)

    def value(self, monomial: Monomial) -> int:
        return self.values.get(tuple(sorted(monomial)), 0)

    def __add__(self, other: "PontNumbers") -> "PontNumbers":
        if self.dimension != other.dimension:
            raise DomainError("dimensions differ")
        keys = set(self.values) | set(other.values)
        return PontNumbers(
            self.dimension, {k: self.value(k) + other.value(k) for k in keys}
        )

    def scale(self, c: int) -> "PontNumbers":
        return PontNumbers(self.dimension, {k: c * v for k, v in self.values.items()})

    @classmethod
    def from_dict(cls, data: Mapping) -> "PontNumbers":
        """Build from {name, dimension, pontrjagin: {"p1^2": n, "p2": n, ...}}."""
        try:
            dimension = _integer(data["dimension"], "dimension")
            raw = data.get("pontrjagin", {})
            values = {parse_monomial(k): _integer(v, k) for k, v in raw.items()}
        except (KeyError, AttributeError) as e:
            raise DomainError(f"bad manifold description: {e}") from e
        return cls(dimension, values, str(data.get("name", "")))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "dimension": self.dimension,
            "pontrjagin": {
                monomial_text(k): str(v)
                for k, v in sorted(self.values.items())
            },
        }


def load_manifold(path: str) -> PontNumbers:
    """Read a manifold description from a JSON file."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise DomainError(f"cannot read manifold file {path}: {e}") from e
    return PontNumbers.from_dict(data)


@lru_cache(maxsize=None)
def genus_polynomial(kind: str, dimension: int) -> PontPolynomial:
    """The degree-`dimension` component of the Ahat or L class."""
    return genus_polynomials(kind, dimension // 4)[-1]


def _pair(kind: str, x: PontNumbers) -> Fraction:
    poly = genus_polynomial(kind, x.dimension)
    return sum(
        (c * x.value(monomial) for monomial, c in poly.terms.items()), Fraction(0)
    )


def ahat_number(x: PontNumbers) -> Fraction:
    """The Ahat-number of x."""
    return _pair("Ahat", x)


def signature_number(x: PontNumbers) -> Fraction:
    """The L-number, i.e. the signature by Hirzebruch's theorem."""
    return _pair("L", x)


def ko_ahat(x: PontNumbers) -> KOElement:
    """The KO-valued Ahat invariant: Ahat * beta^r or (Ahat/2) * beta^r kappa."""
    ahat = ahat_number(x)
    coefficient = ahat / 2 if x.dimension % 8 == 4 else ahat
    if coefficient.denominator != 1:
        raise DomainError("not a spin certificate")
    return KOElement(x.dimension, coefficient.numerator)


CERTIFICATES = {
    "k3": PontNumbers(4, {(1,): -48}, "K3"),
    "plumbing8": PontNumbers(8, {(1, 1): 0, (2,): -(2**5) * 3**2 * 5}, "plumbing8"),
}

# 28 copies of -E8 close up to the plumbing manifold (28 homotopy 7-spheres).
PLUMBING_COPIES = 28


def builtin(name: str) -> PontNumbers:
    """One of the built-in certificates by name."""
    try:
        return CERTIFICATES[name]
    except KeyError:
        raise DomainError(f"unknown built-in manifold {name!r}") from None


def intersection_form(name: str) -> IntegralLattice:
    """Middle-dimensional intersection form of a built-in certificate."""
    if name == "k3":
        return build("k3_form")
    if name == "plumbing8":
        return copies(build("e8_negative"), PLUMBING_COPIES)
    raise DomainError(f"unknown built-in manifold {name!r}")


@dataclass(frozen=True)
class BundleCertificate:
    """A vector a whose associated bundle matches the tangent Pontrjagin class."""

    manifold: str
    pontrjagin_class: str
    vector: Optional[Vector]
    form_value: Optional[int]
    bundle_value: Optional[int]
    tangent_value: int

    @property
    def holds(self) -> bool:
        return self.bundle_value == self.tangent_value

    def to_dict(self) -> dict:
        return {
            "manifold": self.manifold,
            "class": self.pontrjagin_class,
            "vector": None if self.vector is None else list(self.vector),
            "form_value": None if self.form_value is None else str(self.form_value),
            "bundle_value": None if self.bundle_value is None else str(self.bundle_value),
            "tangent_value": str(self.tangent_value),
            "holds": self.holds,
        }


def k3_bundle_certificate(bound: int = 8) -> BundleCertificate:
    """p1(L_a^2) = 4 q(a) must equal p1(TK) = -48, so q(a) = -12."""
    tangent = builtin("k3").value((1,))
    form = build("k3_form")
    a = represent(form, tangent // 4, "any", bound)
    q = None if a is None else evaluate(form, a)
    return BundleCertificate(
        "k3", "p1", a, q, None if q is None else 4 * q, tangent
    )


# the even class a is repeated on each of 12 copies of S^4 x S^4
SPHERE_PRODUCT_COPIES = 12


def plumbing_bundle_certificate() -> BundleCertificate:
    """p2 = 12 q0(a) for an even a in H with q0(a) = 8s must equal p2(TM)."""
    tangent = builtin("plumbing8").value((2,))
    s, remainder = divmod(tangent, 8 * SPHERE_PRODUCT_COPIES)
    if remainder:
        return BundleCertificate("plumbing8", "p2", None, None, None, tangent)
    form = hyperbolic()
    a = represent(form, 8 * s, "even_vector", 2 * abs(s) + 2)
    q = None if a is None else evaluate(form, a)
    return BundleCertificate(
        "plumbing8",
        "p2",
        a,
        q,
        None if q is None else SPHERE_PRODUCT_COPIES * q,
        tangent,
    )


BUNDLE_CERTIFICATES = {
    "k3": k3_bundle_certificate,
    "plumbing8": plumbing_bundle_certificate,
}

def rational_surjectivity_coefficient(m: int) -> Fraction:
    """(-1)^(m+1) (2^(2m) - 2) B_m / (2m)!, nonzero for every m >= 1."""
    if m < 1:
        raise DomainError("index starts at 1")
    sign = 1 if m % 2 else -1
    return sign * (2 ** (2 * m) - 2) * bernoulli_exact(m) / factorial(2 * m)
