"""Validated real arithmetic: closed intervals with MPFR endpoints and outward rounding.

Every operation returns an interval that encloses the exact real result; the
lower endpoint is rounded toward -inf and the upper toward +inf, so no epsilon
comparisons are needed anywhere downstream.  Endpoints are binary floats, hence
exactly convertible to `Fraction`, which keeps all comparisons against exact
rationals decidable.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

import gmpy2
from gmpy2 import mpfr, mpq, mpz

DEFAULT_PRECISION = 256

_CTX_CACHE: dict[tuple[int, bool], "gmpy2.context"] = {}


def _ctx(precision: int, up: bool):
    key = (precision, up)
    ctx = _CTX_CACHE.get(key)
    if ctx is None:
        ctx = gmpy2.context(
            precision=precision,
            round=gmpy2.RoundUp if up else gmpy2.RoundDown,
        )
        _CTX_CACHE[key] = ctx
    return ctx


def _to_fraction(x: mpfr) -> Fraction:
    q = mpq(x)
    return Fraction(int(q.numerator), int(q.denominator))


Rat = Union[int, Fraction]


class RealInterval:
    """Closed interval [lower, upper] carrying its working precision in bits."""

    __slots__ = ("lower", "upper", "precision")

    def __init__(self, lower: mpfr, upper: mpfr, precision: int):
        if not lower <= upper:
            raise ValueError(f"invalid interval: {lower} > {upper}")
        self.lower = lower
        self.upper = upper
        self.precision = precision

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_fraction(cls, value: Rat, precision: int = DEFAULT_PRECISION) -> "RealInterval":
        value = Fraction(value)
        num, den = mpz(value.numerator), mpz(value.denominator)
        lo = _ctx(precision, False).div(num, den)
        hi = _ctx(precision, True).div(num, den)
        return cls(lo, hi, precision)

    @classmethod
    def exact_zero(cls, precision: int = DEFAULT_PRECISION) -> "RealInterval":
        return cls(mpfr(0), mpfr(0), precision)

    @classmethod
    def pi(cls, precision: int = DEFAULT_PRECISION) -> "RealInterval":
        return cls(_ctx(precision, False).const_pi(), _ctx(precision, True).const_pi(), precision)

    # -- views -------------------------------------------------------------

    def lower_fraction(self) -> Fraction:
        return _to_fraction(self.lower)

    def upper_fraction(self) -> Fraction:
        return _to_fraction(self.upper)

    def width(self) -> Fraction:
        return self.upper_fraction() - self.lower_fraction()

    def midpoint(self) -> Fraction:
        return (self.lower_fraction() + self.upper_fraction()) / 2

    def relative_width(self) -> Fraction:
        mag = min(abs(self.lower_fraction()), abs(self.upper_fraction()))
        if mag == 0:
            return Fraction(0) if self.width() == 0 else Fraction(1)
        return self.width() / mag

    def __contains__(self, value: Rat) -> bool:
        value = Fraction(value)
        return self.lower_fraction() <= value <= self.upper_fraction()

    def contains_interval(self, other: "RealInterval") -> bool:
        return (
            self.lower_fraction() <= other.lower_fraction()
            and other.upper_fraction() <= self.upper_fraction()
        )

    def __repr__(self) -> str:
        return f"RealInterval({self.lower!r}, {self.upper!r}, prec={self.precision})"

    def __str__(self) -> str:
        return f"[{self.lower}, {self.upper}]"

    # -- certified comparisons ----------------------------------------------

    def certainly_less_than(self, other: Union["RealInterval", Rat]) -> bool:
        if isinstance(other, RealInterval):
            return self.upper_fraction() < other.lower_fraction()
        return self.upper_fraction() < Fraction(other)

    def certainly_greater_than(self, other: Union["RealInterval", Rat]) -> bool:
        if isinstance(other, RealInterval):
            return self.lower_fraction() > other.upper_fraction()
        return self.lower_fraction() > Fraction(other)

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other) -> "RealInterval":
        if isinstance(other, RealInterval):
            return other
        if isinstance(other, (int, Fraction)):
            return RealInterval.from_fraction(other, self.precision)
        return NotImplemented

    def _prec_with(self, other: "RealInterval") -> int:
        return max(self.precision, other.precision)

    def __neg__(self) -> "RealInterval":
        return RealInterval(-self.upper, -self.lower, self.precision)

    def __abs__(self) -> "RealInterval":
        if self.lower >= 0:
            return self
        if self.upper <= 0:
            return -self
        return RealInterval(mpfr(0), max(-self.lower, self.upper), self.precision)

    def __add__(self, other) -> "RealInterval":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p = self._prec_with(other)
        return RealInterval(
            _ctx(p, False).add(self.lower, other.lower),
            _ctx(p, True).add(self.upper, other.upper),
            p,
        )

    __radd__ = __add__

    def __sub__(self, other) -> "RealInterval":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p = self._prec_with(other)
        return RealInterval(
            _ctx(p, False).sub(self.lower, other.upper),
            _ctx(p, True).sub(self.upper, other.lower),
            p,
        )

    def __rsub__(self, other) -> "RealInterval":
        return (-self).__add__(other)

    def __mul__(self, other) -> "RealInterval":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p = self._prec_with(other)
        dn, up = _ctx(p, False), _ctx(p, True)
        pairs = [
            (self.lower, other.lower),
            (self.lower, other.upper),
            (self.upper, other.lower),
            (self.upper, other.upper),
        ]
        lo = min(dn.mul(a, b) for a, b in pairs)
        hi = max(up.mul(a, b) for a, b in pairs)
        return RealInterval(lo, hi, p)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RealInterval":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.lower <= 0 <= other.upper:
            raise ZeroDivisionError("division by an interval containing zero")
        p = self._prec_with(other)
        dn, up = _ctx(p, False), _ctx(p, True)
        pairs = [
            (self.lower, other.lower),
            (self.lower, other.upper),
            (self.upper, other.lower),
            (self.upper, other.upper),
        ]
        lo = min(dn.div(a, b) for a, b in pairs)
        hi = max(up.div(a, b) for a, b in pairs)
        return RealInterval(lo, hi, p)

    def __rtruediv__(self, other) -> "RealInterval":
        return self._coerce(other).__truediv__(self)

    def __pow__(self, n: int) -> "RealInterval":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return RealInterval.from_fraction(1, self.precision) / self.__pow__(-n)
        p = self.precision
        dn, up = _ctx(p, False), _ctx(p, True)
        if n == 0:
            return RealInterval.from_fraction(1, p)
        if self.lower >= 0:
            return RealInterval(dn.pow(self.lower, n), up.pow(self.upper, n), p)
        if self.upper <= 0:
            if n % 2 == 0:
                return RealInterval(dn.pow(self.upper, n), up.pow(self.lower, n), p)
            return RealInterval(dn.pow(self.lower, n), up.pow(self.upper, n), p)
        # straddles zero
        if n % 2 == 0:
            hi = max(up.pow(self.lower, n), up.pow(self.upper, n))
            return RealInterval(mpfr(0), hi, p)
        return RealInterval(dn.pow(self.lower, n), up.pow(self.upper, n), p)

    def sqrt(self) -> "RealInterval":
        if self.lower < 0:
            raise ValueError("sqrt of an interval reaching below zero")
        p = self.precision
        return RealInterval(_ctx(p, False).sqrt(self.lower), _ctx(p, True).sqrt(self.upper), p)

    def exp(self) -> "RealInterval":
        p = self.precision
        return RealInterval(_ctx(p, False).exp(self.lower), _ctx(p, True).exp(self.upper), p)

    def with_precision(self, precision: int) -> "RealInterval":
        if precision >= self.precision:
            return RealInterval(self.lower, self.upper, precision)
        return RealInterval(
            _ctx(precision, False).add(self.lower, mpz(0)),
            _ctx(precision, True).add(self.upper, mpz(0)),
            precision,
        )


def fraction_pow(base: Rat, exponent: int) -> Fraction:
    """Exact integer power of a rational, negative exponents allowed."""
    return Fraction(base) ** exponent


def sqrt_interval(n: Rat, precision: int = DEFAULT_PRECISION) -> RealInterval:
    """Enclosure of sqrt(n) for a non-negative rational n."""
    return RealInterval.from_fraction(n, precision).sqrt()


def exp_of_fraction(x: Rat, precision: int = DEFAULT_PRECISION) -> RealInterval:
    """Enclosure of exp(x) for rational x."""
    return RealInterval.from_fraction(x, precision).exp()
