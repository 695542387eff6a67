"""Truncated power series over the rationals and multiplicative sequences."""

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Tuple, Union

from .errors import DomainError

Scalar = Union[int, Fraction]
Monomial = Tuple[int, ...]


@dataclass(frozen=True)
class TruncatedSeries:
    """c_0 + c_1 x + ... + c_N x^N; nothing beyond x^N is ever consulted."""

    order: int
    coefficients: Tuple[Fraction, ...]

    def __post_init__(self):
        if self.order < 0:
            raise DomainError("truncation order must be nonnegative")
        if len(self.coefficients) != self.order + 1:
            raise DomainError("coefficient count must be order + 1")

    @classmethod
    def from_coefficients(cls, coefficients: Iterable[Scalar], order: int):
        """Pad or cut the given coefficients to the truncation order."""
        coeffs = [Fraction(c) for c in coefficients][: order + 1]
        coeffs += [Fraction(0)] * (order + 1 - len(coeffs))
        return cls(order, tuple(coeffs))

    @classmethod
    def from_function(cls, order: int, coefficient: Callable[[int], Scalar]):
        """Coefficients coefficient(0) .. coefficient(order)."""
        return cls(order, tuple(Fraction(coefficient(k)) for k in range(order + 1)))

    @classmethod
    def constant(cls, value: Scalar, order: int):
        """The constant series value."""
        return cls.from_coefficients([value], order)

    def __getitem__(self, k: int) -> Fraction:
        return self.coefficients[k] if 0 <= k <= self.order else Fraction(0)

    def _check_order(self, other: "TruncatedSeries"):
        if self.order != other.order:
            raise DomainError(
                f"truncation orders differ: {self.order} != {other.order}"
            )

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check_order(other)
        return TruncatedSeries(
            self.order,
            tuple(a + b for a, b in zip(self.coefficients, other.coefficients)),
        )

    def __neg__(self) -> "TruncatedSeries":
        return self.scale(-1)

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self + (-other)

    def __mul__(self, other) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            return self.scale(other)
        self._check_order(other)
        a, b = self.coefficients, other.coefficients
        return TruncatedSeries(
            self.order,
            tuple(
                sum((a[i] * b[k - i] for i in range(k + 1)), Fraction(0))
                for k in range(self.order + 1)
            ),
        )

    __rmul__ = __mul__

    def scale(self, c: Scalar) -> "TruncatedSeries":
        c = Fraction(c)
        return TruncatedSeries(self.order, tuple(c * a for a in self.coefficients))

    def reciprocal(self) -> "TruncatedSeries":
        """1/f for f with nonzero constant term."""
        a = self.coefficients
        if a[0] == 0:
            raise DomainError("reciprocal of a series with zero constant term")
        inv0 = 1 / a[0]
        b = [inv0]
        for k in range(1, self.order + 1):
            s = sum((a[i] * b[k - i] for i in range(1, k + 1)), Fraction(0))
            b.append(-s * inv0)
        return TruncatedSeries(self.order, tuple(b))

    def substitute_scaled(self, c: Scalar) -> "TruncatedSeries":
        """f(c x)."""
        c = Fraction(c)
        return TruncatedSeries(
            self.order, tuple(a * c**k for k, a in enumerate(self.coefficients))
        )

    def shift_down(self, k: int) -> "TruncatedSeries":
        """f / x^k for f whose first k coefficients vanish; order drops by k."""
        if k > self.order:
            raise DomainError("shift exceeds truncation order")
        if any(self.coefficients[:k]):
            raise DomainError(f"series is not divisible by x^{k}")
        return TruncatedSeries(self.order - k, self.coefficients[k:])

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise DomainError("cannot raise the truncation order")
        return TruncatedSeries(order, self.coefficients[: order + 1])

    def derivative(self) -> List[Fraction]:
        return [k * a for k, a in enumerate(self.coefficients)][1:]

    def log(self) -> "TruncatedSeries":
        """log f for f with constant term 1, via log f = integral of f'/f."""
        if self.coefficients[0] != 1:
            raise DomainError("log needs constant term 1")
        quotient = (
            TruncatedSeries.from_coefficients(self.derivative(), self.order)
            * self.reciprocal()
        )
        return TruncatedSeries.from_coefficients(
            [0] + [quotient[k - 1] / k for k in range(1, self.order + 1)], self.order
        )

    def exp(self) -> "TruncatedSeries":
        """exp g for g with constant term 0, via n E_n = sum k g_k E_(n-k)."""
        g = self.coefficients
        if g[0] != 0:
            raise DomainError("exp needs constant term 0")
        e = [Fraction(1)]
        for n in range(1, self.order + 1):
            e.append(sum((k * g[k] * e[n - k] for k in range(1, n + 1)), Fraction(0)) / n)
        return TruncatedSeries(self.order, tuple(e))

    def is_zero(self) -> bool:
        return not any(self.coefficients)


SERIES_OPS = (
    "add",
    "mul",
    "reciprocal",
    "scale",
    "substitute_scaled_variable",
    "shift_down",
    "truncate",
    "log",
    "exp",
)


def series_arith(op: str, *args) -> TruncatedSeries:
    """Dispatch one of the series operations by name."""
    if op == "add":
        a, b = args
        return a + b
    if op == "mul":
        a, b = args
        return a * b
    if op == "reciprocal":
        (a,) = args
        return a.reciprocal()
    if op == "scale":
        a, c = args
        return a.scale(c)
    if op == "substitute_scaled_variable":
        a, c = args
        return a.substitute_scaled(c)
    if op == "shift_down":
        a, k = args
        return a.shift_down(k)
    if op == "truncate":
        a, order = args
        return a.truncate(order)
    if op == "log":
        (a,) = args
        return a.log()
    if op == "exp":
        (a,) = args
        return a.exp()
    raise DomainError(f"unknown series operation {op!r}")


def _exp_coefficient(k: int) -> Fraction:
    return Fraction(1, factorial(k))


def elementary(kind: str, order: int) -> TruncatedSeries:
    """Exact expansion of one of the standard series, all in the variable x."""
    if order < 0:
        raise DomainError("truncation order must be nonnegative")
    if kind == "exp":
        return TruncatedSeries.from_function(order, _exp_coefficient)
    if kind == "sinh":
        return TruncatedSeries.from_function(
            order, lambda k: _exp_coefficient(k) if k % 2 else 0
        )
    if kind == "cosh":
        return TruncatedSeries.from_function(
            order, lambda k: 0 if k % 2 else _exp_coefficient(k)
        )
    if kind == "sinh_over_x":
        return TruncatedSeries.from_function(
            order, lambda k: 0 if k % 2 else _exp_coefficient(k + 1)
        )
    if kind == "x_over_sinh":
        return elementary("sinh_over_x", order).reciprocal()
    if kind == "x_over_tanh":
        return elementary("cosh", order) * elementary("x_over_sinh", order)
    if kind == "half_x_over_sinh_half":
        return elementary("x_over_sinh", order).substitute_scaled(Fraction(1, 2))
    raise DomainError(f"unknown elementary series {kind!r}")


# Characteristic series in a formal root x of a Pontrjagin class (p = x^2).
GENUS_SERIES = {
    "Ahat": "half_x_over_sinh_half",
    "L": "x_over_tanh",
}


def _monomial_degree(monomial: Monomial) -> int:
    return 4 * sum(monomial)


def monomial_text(monomial: Monomial) -> str:
    if not monomial:
        return "1"
    parts = []
    for i in sorted(set(monomial)):
        power = monomial.count(i)
        parts.append(f"p{i}" if power == 1 else f"p{i}^{power}")
    return "*".join(parts)


def parse_monomial(text: str) -> Monomial:
    """Parse 'p1', 'p1^2', 'p1*p2' into a sorted index multiset."""
    indices: List[int] = []
    for factor in text.replace(" ", "").split("*"):
        base, _, power = factor.partition("^")
        if not base.startswith("p") or not base[1:].isdigit() or int(base[1:]) < 1:
            raise DomainError(f"bad Pontrjagin monomial {text!r}")
        if power and not power.isdigit():
            raise DomainError(f"bad Pontrjagin monomial {text!r}")
        indices += [int(base[1:])] * (int(power) if power else 1)
    return tuple(sorted(indices))


def _fraction_text(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


@dataclass(frozen=True)
class PontPolynomial:
    """Homogeneous polynomial of cohomological degree 4j in p_1, p_2, ..."""

    degree: int
    terms: Mapping[Monomial, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.degree <= 0 or self.degree % 4:
            raise DomainError("degree must be a positive multiple of 4")
        cleaned = {}
        for monomial, c in self.terms.items():
            key = tuple(sorted(monomial))
            if _monomial_degree(key) != self.degree:
                raise DomainError(f"monomial {key} has the wrong degree")
            if c:
                cleaned[key] = cleaned.get(key, Fraction(0)) + Fraction(c)
        object.__setattr__(self, "terms", {k: v for k, v in cleaned.items() if v})

    def coefficient(self, monomial: Iterable[int]) -> Fraction:
        return self.terms.get(tuple(sorted(monomial)), Fraction(0))

    def __add__(self, other: "PontPolynomial") -> "PontPolynomial":
        if self.degree != other.degree:
            raise DomainError("cannot add polynomials of different degree")
        return PontPolynomial(self.degree, _poly_add(self.terms, other.terms))

    def __mul__(self, other) -> "PontPolynomial":
        if not isinstance(other, PontPolynomial):
            return PontPolynomial(
                self.degree, {k: v * Fraction(other) for k, v in self.terms.items()}
            )
        return PontPolynomial(
            self.degree + other.degree, _poly_mul(self.terms, other.terms)
        )

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, PontPolynomial):
            return NotImplemented
        return self.degree == other.degree and dict(self.terms) == dict(other.terms)

    def __hash__(self):
        return hash((self.degree, tuple(sorted(self.terms.items()))))

    def evaluate(self, values: Mapping[int, Scalar]) -> Fraction:
        """Substitute numbers for p_i (missing p_i read as 0)."""
        total = Fraction(0)
        for monomial, c in self.terms.items():
            term = c
            for i in monomial:
                term *= Fraction(values.get(i, 0))
            total += term
        return total

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(
            f"({_fraction_text(self.terms[m])})*{monomial_text(m)}"
            for m in sorted(self.terms)
        )

    def __str__(self):
        return self.to_text()


def _poly_add(a: Mapping[Monomial, Fraction], b: Mapping[Monomial, Fraction]):
    out: Dict[Monomial, Fraction] = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, Fraction(0)) + v
    return {k: v for k, v in out.items() if v}


def _poly_mul(a: Mapping[Monomial, Fraction], b: Mapping[Monomial, Fraction]):
    out: Dict[Monomial, Fraction] = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            key = tuple(sorted(ka + kb))
            out[key] = out.get(key, Fraction(0)) + va * vb
    return {k: v for k, v in out.items() if v}


def _power_sums(max_j: int, roots: int) -> List[Dict[Monomial, Fraction]]:
    """Power sums s_1..s_max_j of the squared roots in terms of p_i (Newton)."""
    def e(i: int):
        return {(i,): Fraction(1)} if i <= roots else {}

    s: List[Dict[Monomial, Fraction]] = [{}]
    for k in range(1, max_j + 1):
        acc: Dict[Monomial, Fraction] = {}
        for i in range(1, k):
            sign = 1 if i % 2 == 1 else -1
            term = _poly_mul(e(i), s[k - i])
            acc = _poly_add(acc, {m: sign * c for m, c in term.items()})
        sign = 1 if k % 2 == 1 else -1
        acc = _poly_add(acc, {m: sign * k * c for m, c in e(k).items()})
        s.append(acc)
    return s


def genus_polynomials(
    kind: str, max_j: int, roots: Optional[int] = None
) -> List[PontPolynomial]:
    """Multiplicative sequence K_1..K_max_j of the Ahat- or L-genus.

    prod_i Q(z_i) over formal roots z_i = x_i^2 equals
    exp(sum_k a_k s_k) with log Q(z) = sum_k a_k z^k, and the power sums s_k
    are rewritten in p_i = e_i(z) by Newton's identities.
    """
    if kind not in GENUS_SERIES:
        raise DomainError(f"unknown genus {kind!r}")
    if max_j < 1:
        raise DomainError("max_j must be at least 1")
    roots = max_j if roots is None else roots
    if roots < 1:
        raise DomainError("at least one formal root is needed")

    char = elementary(GENUS_SERIES[kind], 2 * max_j)
    q = TruncatedSeries.from_coefficients(
        [char[2 * k] for k in range(max_j + 1)], max_j
    )
    a = q.log()
    s = _power_sums(max_j, roots)
    weighted = [{}] + [
        {m: a[k] * c for m, c in s[k].items()} for k in range(1, max_j + 1)
    ]

    components: List[Dict[Monomial, Fraction]] = [{(): Fraction(1)}]
    for n in range(1, max_j + 1):
        acc: Dict[Monomial, Fraction] = {}
        for k in range(1, n + 1):
            term = _poly_mul(weighted[k], components[n - k])
            acc = _poly_add(acc, {m: k * c for m, c in term.items()})
        components.append({m: c / n for m, c in acc.items()})

    return [PontPolynomial(4 * j, components[j]) for j in range(1, max_j + 1)]
