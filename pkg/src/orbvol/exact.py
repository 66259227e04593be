"""Exact rational kernel: Bernoulli numbers and polynomials, rational reconstruction.

Rational values throughout the package are stdlib `fractions.Fraction`
instances, which already guarantee lowest terms and a positive denominator.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, isqrt
from typing import Optional

from .errors import AmbiguousInterval
from .intervals import RealInterval

_BERNOULLI_CACHE: dict[int, Fraction] = {0: Fraction(1), 1: Fraction(-1, 2)}


def bernoulli(m: int) -> Fraction:
    """Bernoulli number B_m in the convention B_1 = -1/2.

    With this convention zeta(1-m) = -B_m/m for m >= 2, and B_m = 0 for odd
    m >= 3.  Computed by the recurrence sum_{j=0}^{m} C(m+1, j) B_j = 0 with
    memoization; indices stay small (~60) at desk scale.
    """
    if m < 0:
        raise ValueError("Bernoulli index must be non-negative")
    if m in _BERNOULLI_CACHE:
        return _BERNOULLI_CACHE[m]
    if m % 2 == 1:
        _BERNOULLI_CACHE[m] = Fraction(0)
        return _BERNOULLI_CACHE[m]
    # fill even indices bottom-up to keep recursion shallow
    known = max(k for k in _BERNOULLI_CACHE if k % 2 == 0)
    for n in range(known + 2, m + 1, 2):
        s = Fraction(0)
        for j in range(n):
            bj = _BERNOULLI_CACHE.get(j, Fraction(0))
            if bj:
                s += comb(n + 1, j) * bj
        _BERNOULLI_CACHE[n] = -s / (n + 1)
    return _BERNOULLI_CACHE[m]


def bernoulli_polynomial(m: int, x: Fraction) -> Fraction:
    """Bernoulli polynomial B_m(x) = sum_j C(m,j) B_j x^(m-j)."""
    if m < 0:
        raise ValueError("Bernoulli index must be non-negative")
    x = Fraction(x)
    acc = Fraction(0)
    xpow = Fraction(1)
    # accumulate from j = m downward so the power of x grows by one each step
    for j in range(m, -1, -1):
        bj = bernoulli(j)
        if bj:
            acc += comb(m, j) * bj * xpow
        xpow *= x
    return acc


def _convergents(x: Fraction, max_denominator: int):
    """Continued-fraction convergents h/k of x with k <= max_denominator."""
    h0, k0 = 1, 0
    a = x.numerator // x.denominator
    h1, k1 = a, 1
    rem = x - a
    yield Fraction(h1, k1)
    while rem != 0:
        rem = 1 / rem
        a = rem.numerator // rem.denominator
        rem -= a
        h0, k0, h1, k1 = h1, k1, a * h1 + h0, a * k1 + k0
        if k1 > max_denominator:
            return
        yield Fraction(h1, k1)


def rational_reconstruct(x: RealInterval, denominator_bound: int) -> Optional[Fraction]:
    """The unique rational p/q with q <= denominator_bound inside x, or None.

    Requires width(x) < 1/(2*denominator_bound^2): two distinct rationals with
    denominators <= N differ by at least 1/N^2, so the interval can hold at
    most one of them, and that one must be a continued-fraction convergent of
    the midpoint.  Raises AmbiguousInterval when the interval is too wide to
    certify uniqueness.
    """
    if denominator_bound < 1:
        raise ValueError("denominator bound must be positive")
    width = x.width()
    if 2 * denominator_bound * denominator_bound * width >= 1:
        raise AmbiguousInterval(
            f"width {float(width):.3g} too large for denominator bound {denominator_bound}"
        )
    lo, hi = x.lower_fraction(), x.upper_fraction()
    mid = (lo + hi) / 2
    for cand in _convergents(mid, denominator_bound):
        if lo <= cand <= hi:
            return cand
    return None


def max_certified_denominator(width: Fraction, cap: Optional[int] = None) -> int:
    """Largest N with width < 1/(2 N^2), optionally capped."""
    if width <= 0:
        n = cap if cap is not None else 10**30
    else:
        inv = 1 / (2 * width)
        # largest N with N^2 < inv
        n = isqrt(inv.numerator // inv.denominator)
        while n * n >= inv:
            n -= 1
    if cap is not None:
        n = min(n, cap)
    return max(n, 0)
