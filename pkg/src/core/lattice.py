"""Integral symmetric bilinear forms: E8, the hyperbolic plane and K3."""

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

import sympy

from .errors import DomainError, KOSweepError

Vector = Tuple[int, ...]

# Bourbaki numbering: chain 1-3-4-5-6-7-8 with node 2 attached to node 4.
E8_EDGES = ((1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4))

PARITIES = ("any", "even_vector")


@dataclass(frozen=True)
class IntegralLattice:
    """A free abelian group with a symmetric integer Gram matrix."""

    gram: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.gram)
        n = len(rows)
        if n == 0:
            raise DomainError("rank must be positive")
        if any(len(row) != n for row in rows):
            raise DomainError("Gram matrix must be square")
        if any(rows[i][j] != rows[j][i] for i in range(n) for j in range(i)):
            raise DomainError("Gram matrix must be symmetric")
        object.__setattr__(self, "gram", rows)

    @property
    def rank(self) -> int:
        return len(self.gram)

    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    def to_json(self) -> str:
        return json.dumps([list(row) for row in self.gram])

    @classmethod
    def from_json(cls, text: str) -> "IntegralLattice":
        try:
            rows = json.loads(text)
        except json.JSONDecodeError as e:
            raise DomainError(f"Gram matrix is not valid JSON: {e}") from e
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            raise DomainError("Gram matrix must be a JSON array of integer rows")
        if not all(isinstance(x, int) for r in rows for x in r):
            raise DomainError("Gram matrix entries must be integers")
        return cls(tuple(tuple(r) for r in rows))


def hyperbolic() -> IntegralLattice:
    """The hyperbolic plane H, Gram [[0, 1], [1, 0]]."""
    return IntegralLattice(((0, 1), (1, 0)))


def e8_positive() -> IntegralLattice:
    """Positive definite E8 from the Cartan matrix."""
    gram = [[2 if i == j else 0 for j in range(8)] for i in range(8)]
    for a, b in E8_EDGES:
        gram[a - 1][b - 1] = gram[b - 1][a - 1] = -1
    return IntegralLattice(tuple(tuple(row) for row in gram))


def scaled(lattice: IntegralLattice, c: int) -> IntegralLattice:
    """The same lattice with its form multiplied by c."""
    return IntegralLattice(tuple(tuple(c * x for x in row) for row in lattice.gram))


def direct_sum(*lattices: IntegralLattice) -> IntegralLattice:
    """Block-diagonal sum, in the order given."""
    if not lattices:
        raise DomainError("direct sum of nothing")
    n = sum(l.rank for l in lattices)
    gram = [[0] * n for _ in range(n)]
    offset = 0
    for l in lattices:
        for i, row in enumerate(l.gram):
            gram[offset + i][offset : offset + l.rank] = row
        offset += l.rank
    return IntegralLattice(tuple(tuple(row) for row in gram))


def copies(lattice: IntegralLattice, count: int) -> IntegralLattice:
    """Direct sum of count copies of lattice."""
    return direct_sum(*([lattice] * count))


LATTICE_KINDS = ("e8_negative", "hyperbolic", "k3_form")


def build(kind: str) -> IntegralLattice:
    """One of the named forms; k3_form is 2(-E8) + 3H in that order."""
    if kind == "hyperbolic":
        return hyperbolic()
    if kind == "e8_negative":
        return scaled(e8_positive(), -1)
    if kind == "k3_form":
        neg_e8 = build("e8_negative")
        return direct_sum(neg_e8, neg_e8, hyperbolic(), hyperbolic(), hyperbolic())
    raise DomainError(f"unknown lattice {kind!r}")


def determinant(lattice: IntegralLattice) -> int:
    """Exact determinant of the Gram matrix."""
    return int(sympy.Matrix(lattice.gram).det())


def is_unimodular(lattice: IntegralLattice) -> bool:
    """True iff the determinant is 1 or -1."""
    return abs(determinant(lattice)) == 1


def signature(lattice: IntegralLattice) -> int:
    """#positive - #negative, by exact symmetric Gaussian reduction."""
    n = lattice.rank
    a = [[Fraction(x) for x in row] for row in lattice.gram]
    active = list(range(n))
    balance = 0
    while active:
        k = next((i for i in active if a[i][i] != 0), None)
        if k is None:
            pair = next(
                (
                    (i, j)
                    for idx, i in enumerate(active)
                    for j in active[idx + 1 :]
                    if a[i][j] != 0
                ),
                None,
            )
            if pair is None:
                raise DomainError("Gram matrix is degenerate")
            i, j = pair
            # e_i -> e_i + e_j makes the diagonal entry 2 a_ij
            for t in active:
                a[i][t] += a[j][t]
            for t in active:
                a[t][i] += a[t][j]
            k = i
        d = a[k][k]
        balance += 1 if d > 0 else -1
        active.remove(k)
        column = [i for i in active if a[i][k] != 0]
        for i in column:
            f = a[i][k] / d
            for j in column:
                a[i][j] -= f * a[k][j]
    return balance


def evaluate(lattice: IntegralLattice, v: Sequence[int]) -> int:
    """q(v) = v^T G v."""
    if len(v) != lattice.rank:
        raise DomainError(f"vector has length {len(v)}, lattice has rank {lattice.rank}")
    g = lattice.gram
    return sum(
        v[i] * g[i][j] * v[j]
        for i in range(lattice.rank)
        if v[i]
        for j in range(lattice.rank)
        if v[j]
    )


def hyperbolic_summands(lattice: IntegralLattice) -> List[Tuple[int, int]]:
    """Index pairs (i, j) spanning an orthogonal summand with Gram [[0,1],[1,0]]."""
    g = lattice.gram
    found = []
    for i in range(lattice.rank - 1):
        j = i + 1
        if (g[i][i], g[i][j], g[j][j]) != (0, 1, 0):
            continue
        if any(g[i][t] for t in range(lattice.rank) if t != j) or any(
            g[j][t] for t in range(lattice.rank) if t != i
        ):
            continue
        found.append((i, j))
    return found


def _shells(rank: int, bound: int) -> Iterable[Vector]:
    """Vectors with |coordinates| <= bound by increasing max-norm, lex within a shell."""
    yield (0,) * rank
    for r in range(1, bound + 1):
        for v in itertools.product(range(-r, r + 1), repeat=rank):
            if max(abs(x) for x in v) == r:
                yield v


def _factor(p: int, bound: int) -> Tuple[int, int]:
    """(a, b) with a*b = p, |a|, |b| <= bound and the least such a >= 0."""
    if p == 0:
        return 0, 0
    for a in range(1, bound + 1):
        if p % a == 0 and abs(p // a) <= bound:
            return a, p // a
    raise KOSweepError(f"{p} is not a product within bound {bound}")


def _hyperbolic_search(
    rank: int, summands: List[Tuple[int, int]], target: int, bound: int
) -> Optional[Vector]:
    """A vector supported on the hyperbolic summands with q(v) = target.

    On a summand q(a e + b f) = 2ab, so this is sum(a_i b_i) = target/2 with
    every a_i, b_i in [-bound, bound]. Reachable sums are kept as bitsets
    (bit s + offset set when s is reachable by the remaining summands).
    """
    if target % 2:
        return None
    half = target // 2
    products = sorted({a * b for a in range(bound + 1) for b in range(-bound, bound + 1)})
    span = bound * bound
    offset = span * len(summands)

    # reachable[k]: sums attainable by summands k, k+1, ...
    reachable = [0] * (len(summands) + 1)
    reachable[-1] = 1 << offset
    for k in range(len(summands) - 1, -1, -1):
        mask = 0
        for p in products:
            mask |= reachable[k + 1] << p if p >= 0 else reachable[k + 1] >> -p
        reachable[k] = mask
    if abs(half) > offset or not (reachable[0] >> (half + offset)) & 1:
        return None

    v = [0] * rank
    remaining = half
    for k, (i, j) in enumerate(summands):
        rest = reachable[k + 1]
        candidates = [
            q
            for q in products
            if abs(remaining - q) <= offset and (rest >> (remaining - q + offset)) & 1
        ]
        p = min(candidates, key=lambda q: (abs(remaining - q), q))
        v[i], v[j] = _factor(p, bound)
        if k == 0 and p == 0 and bound:
            v[i] = 1  # (1, 0) in the first summand, as for any (1, target/2)
        remaining -= p
    return tuple(v)


def represent(
    lattice: IntegralLattice, target: int, parity: str = "any", bound: int = 8
) -> Optional[Vector]:
    """A vector v with q(v) = target and |v_i| <= bound, or None.

    With hyperbolic summands only their coordinates are searched, filling
    the first summand as far as possible: a target within reach of one
    summand comes back as (1, target/2), or (2, target/4) for even vectors.
    Without one the box is searched shell by shell and the lexicographically
    least vector of the smallest shell wins.
    """
    if parity not in PARITIES:
        raise DomainError(f"unknown parity {parity!r}")
    if bound < 0:
        raise DomainError("bound must be nonnegative")
    even = lattice.is_even()
    if even and target % 2:
        return None
    if parity == "even_vector" and target % (8 if even else 4):
        return None

    # Even vectors are 2w with q(w) = target/4.
    if parity == "even_vector":
        scale, goal, reach = 2, target // 4, bound // 2
    else:
        scale, goal, reach = 1, target, bound

    summands = hyperbolic_summands(lattice)
    if summands:
        w = _hyperbolic_search(lattice.rank, summands, goal, reach)
    else:
        w = next(
            (u for u in _shells(lattice.rank, reach) if evaluate(lattice, u) == goal),
            None,
        )
    if w is None:
        return None
    v = tuple(scale * x for x in w)

    if evaluate(lattice, v) != target or (
        parity == "even_vector" and any(x % 2 for x in v)
    ):
        raise KOSweepError(f"represent produced an invalid vector {v}")
    return v
