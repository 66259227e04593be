"""Special values of zeta and L-functions.

Exact values at non-positive arguments come from Bernoulli numbers: the
Riemann zeta directly, Dedekind zeta of a real quadratic field through its
Kronecker character, and Dedekind zeta of higher-degree totally real fields
through a validated Euler-product enclosure at the reflected positive argument
pushed through the functional equation and reconstructed to a rational.

For a totally real field k of degree d and even s = 2i the functional
equation reads

    |zeta_k(1-2i)| = zeta_k(2i) * D_k^(2i - 1/2) * (2 (2i-1)! / (2 pi)^(2i))^d

with sign (-1)^(d i); multiplying over i = 1..r eliminates every
transcendental factor, which is what makes the exact volume pipeline close.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional

from .errors import (
    NotFundamental,
    OddCharacter,
    ReconstructionFailed,
    UncertifiedPrime,
)
from .exact import bernoulli, bernoulli_polynomial, max_certified_denominator, rational_reconstruct
from .intervals import DEFAULT_PRECISION, RealInterval
from .numberfields import (
    FieldDescriptor,
    _is_fundamental_discriminant,
    primes_up_to,
    splitting_type,
)

DEFAULT_PRIME_BOUND = 10**4
_MAX_PRIME_BOUND_ESCALATIONS = 8


class ZetaMethod(Enum):
    BERNOULLI_EXACT = "bernoulli_exact"
    FUNCTIONAL_EQUATION_RECONSTRUCTED = "functional_equation_reconstructed"
    EULER_PRODUCT_ENCLOSURE = "euler_product_enclosure"


@dataclass(frozen=True)
class ZetaValue:
    argument: int
    exact: Optional[Fraction]
    enclosure: Optional[RealInterval]
    method: ZetaMethod

    def __post_init__(self):
        if self.argument <= 0 and self.exact is None:
            raise ValueError("non-positive arguments must carry an exact value")
        if self.argument >= 2:
            if self.enclosure is None:
                raise ValueError("positive arguments must carry an enclosure")
            if not self.enclosure.lower_fraction() > 1:
                raise ValueError("zeta enclosure at s >= 2 must stay above 1")
        if self.exact is not None and self.enclosure is not None:
            if self.exact not in self.enclosure:
                raise ValueError("exact value escapes its own enclosure")


# --------------------------------------------------------------------------
# Riemann zeta at negative odd integers


def riemann_zeta_negative(i: int) -> Fraction:
    """zeta(1-2i) = -B_{2i}/(2i)."""
    if i < 1:
        raise ValueError("need i >= 1")
    return -bernoulli(2 * i) / (2 * i)


# --------------------------------------------------------------------------
# quadratic characters


@dataclass(frozen=True)
class DirichletCharacter:
    """Real character given by its value table on residues mod the conductor."""

    conductor: int
    values: tuple[int, ...]  # index a in [0, conductor) -> value in {-1, 0, +1}

    def __post_init__(self):
        f = self.conductor
        if f < 1 or len(self.values) != f:
            raise ValueError("value table must cover residues mod the conductor")
        for a in range(f):
            expected_zero = math.gcd(a, f) != 1
            if expected_zero != (self.values[a] == 0):
                raise ValueError("character must vanish exactly on non-units")
        units = [a for a in range(f) if math.gcd(a, f) == 1]
        for a in units:
            for b in units:
                if self.values[a * b % f] != self.values[a] * self.values[b]:
                    raise ValueError("character is not multiplicative")

    def __call__(self, n: int) -> int:
        return self.values[n % self.conductor]

    @property
    def is_even(self) -> bool:
        if self.conductor == 1:
            return True
        return self.values[self.conductor - 1] == 1

    @classmethod
    def trivial(cls) -> "DirichletCharacter":
        return cls(1, (1,))


def kronecker_symbol(d: int, n: int) -> int:
    """Kronecker symbol (d/n) for n >= 0."""
    if n == 0:
        return 1 if d in (1, -1) else 0
    if math.gcd(d, n) != 1:
        return 0
    result = 1
    a, b = d, n
    while b % 2 == 0:
        b //= 2
        if a % 8 in (3, 5):
            result = -result
    a %= b
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if b % 8 in (3, 5):
                result = -result
        a, b = b, a
        if a % 4 == 3 and b % 4 == 3:
            result = -result
        a %= b
    return result if b == 1 else 0


def kronecker_character(d: int) -> DirichletCharacter:
    """The quadratic character attached to a fundamental discriminant d > 0."""
    if d < 1 or not _is_fundamental_discriminant(d):
        raise NotFundamental(f"{d} is not a fundamental discriminant of a real quadratic field")
    if d == 1:
        return DirichletCharacter.trivial()
    return DirichletCharacter(d, tuple(kronecker_symbol(d, a) for a in range(d)))


def generalized_bernoulli(n: int, chi: DirichletCharacter) -> Fraction:
    """B_{n,chi} = f^(n-1) * sum_{a=1}^{f} chi(a) B_n(a/f)."""
    f = chi.conductor
    total = Fraction(0)
    for a in range(1, f + 1):
        v = chi(a)
        if v:
            total += v * bernoulli_polynomial(n, Fraction(a, f))
    return Fraction(f) ** (n - 1) * total


def dirichlet_l_negative(chi: DirichletCharacter, i: int) -> Fraction:
    """L(1-2i, chi) = -B_{2i,chi}/(2i) for an even character chi."""
    if i < 1:
        raise ValueError("need i >= 1")
    if not chi.is_even:
        raise OddCharacter(f"character mod {chi.conductor} is odd")
    return -generalized_bernoulli(2 * i, chi) / (2 * i)


# --------------------------------------------------------------------------
# Euler-product enclosures of zeta_k(s) for even s >= 2


def dedekind_zeta_positive_enclosure(
    field: FieldDescriptor,
    s: int,
    prime_bound: int = DEFAULT_PRIME_BOUND,
    precision: int = DEFAULT_PRECISION,
) -> RealInterval:
    """Enclosure of zeta_k(s) from the Euler product over primes p <= prime_bound.

    Every place above an included prime contributes (1 - q^-s)^-1 once
    (ramified places count once, not with multiplicity).  The omitted factors
    are absorbed into the rigorous tail estimate

        log(tail) <= d * B^(1-s) / (s-1),

    valid because the prime powers p^m with p > B are distinct integers > B.
    Raises UncertifiedPrime when a prime below the bound lacks certified
    splitting data and the record carries no override.
    """
    if s < 2 or s % 2:
        raise ValueError("positive arguments are even integers >= 2")
    if prime_bound < 100:
        raise ValueError("prime bound must be at least 100")
    _require_certified_index_primes(field, prime_bound)
    acc = RealInterval.from_fraction(1, precision)
    # factors with q^-s below the working precision are folded into the tail
    tail_start = prime_bound
    for p in primes_up_to(prime_bound):
        if s * (p.bit_length() - 1) >= precision + 16:
            tail_start = p - 1
            break
        st = splitting_type(field, p)
        if not st.certified:
            raise UncertifiedPrime(p, field.label)
        for f, _e in st.factors:
            qs = p ** (s * f)
            acc = acc * RealInterval.from_fraction(Fraction(qs, qs - 1), precision)
    tail_exponent = Fraction(field.degree, (s - 1) * tail_start ** (s - 1))
    widen = RealInterval.from_fraction(tail_exponent, precision).exp()
    return RealInterval(acc.lower, (acc * widen).upper, precision)


def _require_certified_index_primes(field: FieldDescriptor, prime_bound: int) -> None:
    """Uncertified primes are exactly those dividing the index; vet them up front."""
    idx = field.index
    p = 2
    while p * p <= idx:
        if idx % p == 0:
            while idx % p == 0:
                idx //= p
            if p <= prime_bound and not splitting_type(field, p).certified:
                raise UncertifiedPrime(p, field.label)
        p += 1
    if idx > 1 and idx <= prime_bound and not splitting_type(field, idx).certified:
        raise UncertifiedPrime(idx, field.label)


# --------------------------------------------------------------------------
# exact Dedekind zeta at negative odd arguments


def _gamma_factor_fraction(i: int, degree: int, discriminant: int) -> Fraction:
    """Rational part of the reflection factor: D^(2i) * (2 (2i-1)!)^d."""
    return Fraction(discriminant) ** (2 * i) * Fraction(2 * math.factorial(2 * i - 1)) ** degree


def functional_equation_image(
    zeta_at_2i: RealInterval,
    field: FieldDescriptor,
    i: int,
    precision: int = DEFAULT_PRECISION,
) -> RealInterval:
    """Enclosure of |zeta_k(1-2i)| from an enclosure of zeta_k(2i)."""
    num = zeta_at_2i * _gamma_factor_fraction(i, field.degree, field.discriminant)
    two_pi = RealInterval.pi(precision) * 2
    den = RealInterval.from_fraction(field.discriminant, precision).sqrt() * (
        two_pi ** (2 * i * field.degree)
    )
    return num / den


def functional_equation_preimage(
    abs_zeta_negative: Fraction,
    field: FieldDescriptor,
    i: int,
    precision: int = DEFAULT_PRECISION,
) -> RealInterval:
    """Enclosure of zeta_k(2i) recovered from the exact |zeta_k(1-2i)|."""
    two_pi = RealInterval.pi(precision) * 2
    num = RealInterval.from_fraction(field.discriminant, precision).sqrt() * (
        two_pi ** (2 * i * field.degree)
    )
    den = _gamma_factor_fraction(i, field.degree, field.discriminant)
    return num * Fraction(abs_zeta_negative, 1) / den


def zeta_negative_sign(degree: int, i: int) -> int:
    """Sign of zeta_k(1-2i) for a totally real field of the given degree."""
    return -1 if (degree * i) % 2 else 1


def default_denominator_bound(field: FieldDescriptor, r: int) -> int:
    """Denominator cap 2*(2r)!*D^(2r) used when the caller does not supply one."""
    return 2 * math.factorial(2 * r) * field.discriminant ** (2 * r)


def dedekind_zeta_negative(
    field: FieldDescriptor,
    i: int,
    denominator_bound: Optional[int] = None,
    prime_bound: int = DEFAULT_PRIME_BOUND,
    precision: int = DEFAULT_PRECISION,
) -> ZetaValue:
    """Exact zeta_k(1-2i) for a totally real field.

    Degree 1 is the Riemann value, degree 2 factors through the Kronecker
    character, and degree >= 3 runs the analytic route: Euler-product
    enclosure of zeta_k(2i), functional equation, continued-fraction
    reconstruction.  The reconstruction is accepted only when two
    consecutive rungs of the prime-bound ladder reconstruct the same
    rational; otherwise the bound escalates geometrically and the search
    ends in ReconstructionFailed.
    """
    if i < 1:
        raise ValueError("need i >= 1")
    if denominator_bound is None:
        denominator_bound = default_denominator_bound(field, i)
    if field.degree == 1:
        return ZetaValue(1 - 2 * i, riemann_zeta_negative(i), None, ZetaMethod.BERNOULLI_EXACT)
    if field.degree == 2:
        chi = kronecker_character(field.discriminant)
        value = riemann_zeta_negative(i) * dirichlet_l_negative(chi, i)
        return ZetaValue(1 - 2 * i, value, None, ZetaMethod.BERNOULLI_EXACT)
    return _zeta_negative_reconstructed(field, i, denominator_bound, prime_bound, precision)


def _reconstruct_at(field, i, bound_cap, prime_bound, precision):
    enclosure = dedekind_zeta_positive_enclosure(field, 2 * i, prime_bound, precision)
    image = functional_equation_image(enclosure, field, i, precision)
    n_eff = max_certified_denominator(image.width(), cap=bound_cap)
    if n_eff < 1:
        return image, None
    return image, rational_reconstruct(image, n_eff)


def _zeta_negative_reconstructed(field, i, denominator_bound, prime_bound, precision):
    sign = zeta_negative_sign(field.degree, i)
    bound = prime_bound
    image, candidate = _reconstruct_at(field, i, denominator_bound, bound, precision)
    for _ in range(_MAX_PRIME_BOUND_ESCALATIONS):
        bound *= 2
        image2, candidate2 = _reconstruct_at(field, i, denominator_bound, bound, precision)
        if candidate is not None and candidate == candidate2:
            return ZetaValue(
                1 - 2 * i,
                sign * candidate,
                None,
                ZetaMethod.FUNCTIONAL_EQUATION_RECONSTRUCTED,
            )
        image, candidate = image2, candidate2
    raise ReconstructionFailed(
        f"zeta_{field.label}(1-2*{i}) did not stabilize below prime bound {bound}"
    )


def dedekind_zeta_value_positive(
    field: FieldDescriptor,
    s: int,
    prime_bound: int = DEFAULT_PRIME_BOUND,
    precision: int = DEFAULT_PRECISION,
) -> ZetaValue:
    """ZetaValue wrapper for positive even arguments (enclosure method)."""
    enc = dedekind_zeta_positive_enclosure(field, s, prime_bound, precision)
    return ZetaValue(s, None, enc, ZetaMethod.EULER_PRODUCT_ENCLOSURE)
