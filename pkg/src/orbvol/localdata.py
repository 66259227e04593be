"""Local data for odd orthogonal groups over nonarchimedean local fields.

Covers the two forms of type B_r (split and non-quasi-split), the maximal
parahoric types obtained by deleting vertices of the local diagram, their
lambda-factors both in closed form and recomputed from orders of finite
groups of Lie type, the diagram-automorphism bound used in index estimates,
and the product-formula sign bookkeeping that forces the parity condition on
nonsplit places.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator

from .errors import IllegalType
from .numberfields import _prime_power_split


class Form(Enum):
    SPLIT = "split"  # diagram Delta_1
    NONSPLIT = "nonsplit"  # diagram Delta_2

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class ParahoricType:
    """A maximal parahoric type: the deleted vertex set of the local diagram.

    For the split form the deletable sets are {0} (identified with {1}: the
    two types are conjugate in the adjoint group and {0} is the canonical
    representative), the symmetric pair {0,1}, a middle vertex {i} with
    2 <= i <= r-1, or the end vertex {r}.  For the nonsplit form: {0},
    a middle vertex {i} with 1 <= i <= r-2, or {r-1}.
    """

    form: Form
    vertices: tuple[int, ...]
    rank: int

    def __post_init__(self):
        if self.rank < 2:
            raise IllegalType(f"rank must be >= 2, got {self.rank}")
        verts = tuple(sorted(self.vertices))
        if self.form is Form.SPLIT and verts == (1,):
            verts = (0,)  # conjugate to deleting vertex 0
        object.__setattr__(self, "vertices", verts)
        if not self._legal():
            raise IllegalType(f"{self.form} type {verts} is illegal at rank {self.rank}")

    def _legal(self) -> bool:
        r, v = self.rank, self.vertices
        if self.form is Form.SPLIT:
            if v in ((0,), (0, 1), (r,)):
                return True
            return len(v) == 1 and 2 <= v[0] <= r - 1
        if v in ((0,), (r - 1,)):
            return True
        return len(v) == 1 and 1 <= v[0] <= r - 2

    @property
    def is_hyperspecial(self) -> bool:
        return self.form is Form.SPLIT and self.vertices == (0,)

    def __str__(self) -> str:
        diagram = "D1" if self.form is Form.SPLIT else "D2"
        return f"{diagram}-{{{','.join(map(str, self.vertices))}}}"


def legal_types(r: int) -> Iterator[ParahoricType]:
    """All maximal parahoric types at rank r, split rows first, in table order."""
    yield ParahoricType(Form.SPLIT, (0,), r)
    yield ParahoricType(Form.SPLIT, (0, 1), r)
    for i in range(2, r):
        yield ParahoricType(Form.SPLIT, (i,), r)
    yield ParahoricType(Form.SPLIT, (r,), r)
    yield ParahoricType(Form.NONSPLIT, (0,), r)
    for i in range(1, r - 1):
        yield ParahoricType(Form.NONSPLIT, (i,), r)
    yield ParahoricType(Form.NONSPLIT, (r - 1,), r)


@dataclass(frozen=True)
class LocalPlaceData:
    """A finite place: residue field size and the parahoric type chosen there."""

    q: int
    type: ParahoricType

    def __post_init__(self):
        if self.q < 2:
            raise ValueError("residue size must be >= 2")
        _prime_power_split(self.q)  # raises unless q is a prime power

    @property
    def nonsplit(self) -> bool:
        return self.type.form is Form.NONSPLIT


# --------------------------------------------------------------------------
# lambda-factors: closed form


def lambda_factor(place: LocalPlaceData, r: int) -> Fraction:
    """Closed-form lambda of the maximal type at a place with residue size q."""
    t = place.type
    if t.rank != r:
        raise IllegalType(f"type has rank {t.rank}, expected {r}")
    q = Fraction(place.q)
    v = t.vertices
    if t.form is Form.SPLIT:
        if v == (0,):
            return Fraction(1)
        if v == (0, 1):
            return (q ** (2 * r) - 1) / (q - 1)
        if v == (r,):
            return (q**r + 1) / 2
        i = v[0]
        num = q**i + 1
        for nu in range(i + 1, r + 1):
            num *= q ** (2 * nu) - 1
        den = Fraction(2)
        for nu in range(1, r - i + 1):
            den *= q ** (2 * nu) - 1
        return num / den
    if v == (0,):
        return (q ** (2 * r) - 1) / (2 * (q + 1))
    if v == (r - 1,):
        return (q**r - 1) / 2
    i = v[0]
    num = q ** (i + 1) - 1
    for nu in range(i + 2, r + 1):
        num *= q ** (2 * nu) - 1
    den = Fraction(2)
    for nu in range(1, r - i):
        den *= q ** (2 * nu) - 1
    return num / den


# --------------------------------------------------------------------------
# lambda-factors recomputed from orders of finite groups of Lie type


@dataclass(frozen=True)
class FiniteGroupOrder:
    """Order of a (product of) finite group(s) of Lie type over GF(q)."""

    label: str
    order: int
    positive_roots: int

    def __mul__(self, other: "FiniteGroupOrder") -> "FiniteGroupOrder":
        return FiniteGroupOrder(
            f"{self.label} x {other.label}",
            self.order * other.order,
            self.positive_roots + other.positive_roots,
        )


def so_odd_order(m: int, q: int) -> FiniteGroupOrder:
    """#SO_{2m+1}(q) = q^(m^2) * prod_{i=1}^{m} (q^(2i) - 1); type B_m has m^2 positive roots."""
    order = q ** (m * m)
    for i in range(1, m + 1):
        order *= q ** (2 * i) - 1
    return FiniteGroupOrder(f"SO{2 * m + 1}({q})", order, m * m)


def o_even_order(m: int, q: int, plus: bool) -> FiniteGroupOrder:
    """#O^±_{2m}(q) = 2 q^(m(m-1)) (q^m -+ 1) prod_{i=1}^{m-1} (q^(2i) - 1); type D_m."""
    if m == 0:
        return FiniteGroupOrder("O0", 1, 0)
    order = 2 * q ** (m * (m - 1)) * (q**m - (1 if plus else -1))
    for i in range(1, m):
        order *= q ** (2 * i) - 1
    sign = "+" if plus else "-"
    return FiniteGroupOrder(f"O{2 * m}{sign}({q})", order, m * (m - 1))


def gl1_order(q: int) -> FiniteGroupOrder:
    return FiniteGroupOrder(f"GL1({q})", q - 1, 0)


def reductive_quotient(place: LocalPlaceData, r: int) -> FiniteGroupOrder:
    """Reductive quotient of the special fiber attached to the parahoric type."""
    t = place.type
    q, v = place.q, t.vertices
    if t.form is Form.SPLIT:
        if v == (0,):
            return so_odd_order(r, q)
        if v == (0, 1):
            return gl1_order(q) * so_odd_order(r - 1, q)
        if v == (r,):
            return o_even_order(r, q, plus=True)
        i = v[0]
        return o_even_order(i, q, plus=True) * so_odd_order(r - i, q)
    if v == (0,):
        return o_even_order(1, q, plus=False) * so_odd_order(r - 1, q)
    if v == (r - 1,):
        return o_even_order(r, q, plus=False)
    i = v[0]
    return o_even_order(i + 1, q, plus=False) * so_odd_order(r - i - 1, q)


def lambda_factor_via_orders(place: LocalPlaceData, r: int) -> Fraction:
    """lambda = q^-N(qs) #G_qs / (q^-N(G) #G) with G_qs the split SO_{2r+1}."""
    t = place.type
    if t.rank != r:
        raise IllegalType(f"type has rank {t.rank}, expected {r}")
    q = place.q
    quasi_split = so_odd_order(r, q)
    quotient = reductive_quotient(place, r)
    return Fraction(
        q**quotient.positive_roots * quasi_split.order,
        q**quasi_split.positive_roots * quotient.order,
    )


# --------------------------------------------------------------------------
# diagram-automorphism bound and sign invariants


def xi_order(place: LocalPlaceData) -> int:
    """Upper bound on the order of the type stabilizer in the diagram automorphisms.

    The nonsplit diagram is rigid; in the split diagram only the hyperspecial
    type {0} moves under the unique flip, every other type is fixed, so the
    stabilizer has order 2.
    """
    if place.type.form is Form.NONSPLIT or place.type.is_hyperspecial:
        return 1
    return 2


def epsilon_finite(split: bool) -> int:
    """Sign invariant at a finite place: +1 iff the group is split there."""
    return 1 if split else -1


def epsilon_archimedean(r: int, is_identity_place: bool) -> int:
    """Sign invariant at a real place.

    At the noncompact (identity) place the sign is +1 iff r = 0,1 mod 4; at
    the compact places it is +1 iff r = 0,3 mod 4.
    """
    if r < 2:
        raise ValueError("rank must be >= 2")
    if is_identity_place:
        return 1 if r % 4 in (0, 1) else -1
    return 1 if r % 4 in (0, 3) else -1


def parity_check(r: int, degree: int, finite_nonsplit_count: int) -> bool:
    """Product formula: the total number of places with sign -1 must be even."""
    if r < 2 or degree < 1 or finite_nonsplit_count < 0:
        raise ValueError("bad arguments to parity_check")
    minus = 0
    if epsilon_archimedean(r, True) == -1:
        minus += 1
    if epsilon_archimedean(r, False) == -1:
        minus += degree - 1
    minus += finite_nonsplit_count
    return minus % 2 == 0


def required_nonsplit_parity(r: int, degree: int) -> int:
    """0 or 1: the parity the count of nonsplit finite places must have."""
    return 0 if parity_check(r, degree, 0) else 1


def minimal_nonsplit_lambda(q: int, r: int) -> tuple[Fraction, ParahoricType]:
    """Smallest lambda among nonsplit types at residue size q, with its type.

    Ties go to the earlier table row.
    """
    best: tuple[Fraction, ParahoricType] | None = None
    for t in legal_types(r):
        if t.form is not Form.NONSPLIT:
            continue
        lam = lambda_factor(LocalPlaceData(q, t), r)
        if best is None or lam < best[0]:
            best = (lam, t)
    assert best is not None
    return best
