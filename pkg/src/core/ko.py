"""pi_*(ko) = Z[eta, kappa, beta]/(2 eta, eta^3, kappa^2 - 4 beta, kappa eta)."""

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .errors import DomainError
from .obstruction import CITE_INDEX_BOUND, a_constant

KIND_Z = "Z"
KIND_Z2 = "Z2"
KIND_ZERO = "zero"

# Stable identifiers for the statements a surjectivity report relies on.
CITE_RATIONAL = "rational-surjectivity"
CITE_MOD2 = "mod2-surjectivity"
CITE_INTEGRAL = "integral-surjectivity"

Exponents = Tuple[int, int, int]  # powers of eta, kappa, beta


def _basis_exponents(n: int) -> Optional[Exponents]:
    """Exponents of the additive generator in degree n, None if the group is 0."""
    r, residue = divmod(n, 8)
    return {0: (0, 0, r), 4: (0, 1, r), 1: (1, 0, r), 2: (2, 0, r)}.get(residue)


def _generator_name(exponents: Exponents) -> str:
    eta, kappa, beta = exponents
    parts = []
    if eta:
        parts.append("η" if eta == 1 else "η²")
    if beta:
        parts.append("β" if beta == 1 else f"β^{beta}")
    if kappa:
        parts.append("κ")
    return "·".join(parts) or "1"


@dataclass(frozen=True)
class KOGroup:
    degree: int
    kind: str
    generator_name: str

    def to_dict(self) -> dict:
        return {"degree": self.degree, "kind": self.kind, "generator": self.generator_name}


def ko_group(n: int) -> KOGroup:
    """KO_n(pt) = pi_n(ko) with its named generator (connective grading)."""
    if n < 0:
        raise DomainError("degree must be nonnegative")
    exponents = _basis_exponents(n)
    if exponents is None:
        return KOGroup(n, KIND_ZERO, "")
    kind = KIND_Z2 if exponents[0] else KIND_Z
    return KOGroup(n, kind, _generator_name(exponents))


def ko_table(n_max: int) -> List[KOGroup]:
    """pi_0(ko) through pi_n_max(ko)."""
    return [ko_group(n) for n in range(n_max + 1)]


@dataclass(frozen=True)
class KOElement:
    """coefficient times the additive generator of pi_degree(ko)."""

    degree: int
    coefficient: int = 1
    generator_name: str = field(default="", compare=False)

    def __post_init__(self):
        group = ko_group(self.degree)
        coefficient = int(self.coefficient)
        if group.kind == KIND_Z2:
            coefficient %= 2
        elif group.kind == KIND_ZERO:
            coefficient = 0
        object.__setattr__(self, "coefficient", coefficient)
        object.__setattr__(self, "generator_name", group.generator_name)

    def is_zero(self) -> bool:
        return self.coefficient == 0

    def __add__(self, other: "KOElement") -> "KOElement":
        if self.degree != other.degree:
            raise DomainError("cannot add elements of different degree")
        return KOElement(self.degree, self.coefficient + other.coefficient)

    def __mul__(self, other) -> "KOElement":
        if isinstance(other, KOElement):
            return ring_multiply(self, other)
        return KOElement(self.degree, self.coefficient * int(other))

    __rmul__ = __mul__

    def to_text(self) -> str:
        if self.is_zero():
            return "0"
        if self.coefficient == 1:
            return self.generator_name
        return f"{self.coefficient}·{self.generator_name}"

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "coefficient": str(self.coefficient),
            "generator": self.generator_name,
        }


def ring_multiply(a: KOElement, b: KOElement) -> KOElement:
    """Product in pi_*(ko), rewritten in the additive basis."""
    degree = a.degree + b.degree
    if a.is_zero() or b.is_zero():
        return KOElement(degree, 0)
    ea, eb = _basis_exponents(a.degree), _basis_exponents(b.degree)
    eta, kappa, beta = (x + y for x, y in zip(ea, eb))
    coefficient = a.coefficient * b.coefficient
    if eta >= 3 or (eta and kappa):
        return KOElement(degree, 0)
    if kappa == 2:
        kappa, beta, coefficient = 0, beta + 1, 4 * coefficient
    assert _basis_exponents(degree) == (eta, kappa, beta)
    return KOElement(degree, coefficient)


@dataclass(frozen=True)
class SurjectivityReport:
    """What is known about A_k(W, g0): pi_k(R+(W)) -> KO_(k+d+1)."""

    d: int
    k: int
    target: KOGroup
    rational_surjective: bool
    mod2_surjective: bool
    integrally_surjective: bool
    index_m: Optional[int] = None
    index_n: Optional[int] = None
    index_q: Optional[int] = None
    index_bound: Optional[int] = None
    citations: Tuple[str, ...] = ()

    @property
    def away_from_two_surjective(self) -> Optional[bool]:
        return None if self.index_bound is None else self.index_bound == 1

    def to_dict(self) -> dict:
        index = None
        if self.index_bound is not None:
            index = {
                "m": self.index_m,
                "n": self.index_n,
                "q": self.index_q,
                "value": str(self.index_bound),
            }
        return {
            "d": self.d,
            "k": self.k,
            "target": self.target.to_dict(),
            "rational_surjective": self.rational_surjective,
            "mod2_surjective": self.mod2_surjective,
            "integrally_surjective": self.integrally_surjective,
            "index_bound": index,
            "away_from_two_surjective": self.away_from_two_surjective,
            "citations": list(self.citations),
        }


def surjectivity_report(d: int, k: int) -> SurjectivityReport:
    """Surjectivity flags for the secondary index map in dimension d, degree k."""
    if d < 6 or k < 0:
        raise DomainError("outside theorem hypotheses")
    target = ko_group(k + d + 1)
    rational = target.kind == KIND_Z
    mod2 = target.kind == KIND_Z2
    integral = d % 2 == 0 and k <= d - 1

    citations = []
    if rational:
        citations.append(CITE_RATIONAL)
    if mod2:
        citations.append(CITE_MOD2)
    if integral:
        citations.append(CITE_INTEGRAL)

    index = {}
    if rational:
        # J_(2n+q, 4m-2n-q) with d = 2n + q
        n, q = divmod(d, 2)
        m = (k + d + 1) // 4
        index = {"index_m": m, "index_n": n, "index_q": q, "index_bound": a_constant(m, n)}
        citations.append(CITE_INDEX_BOUND)

    return SurjectivityReport(
        d=d,
        k=k,
        target=target,
        rational_surjective=rational,
        mod2_surjective=mod2,
        integrally_surjective=integral,
        citations=tuple(citations),
        **index,
    )
