"""Totally real number-field descriptors and prime-splitting data.

Field invariants (degree, discriminant, class number, defining polynomial) are
ingested from JSON-Lines tables and never recomputed here; what this module
does compute is the factorization pattern of the defining polynomial modulo
primes, which gives the true splitting of a prime whenever the prime does not
divide the index of the equation order (Dedekind).  Primes dividing the index
are flagged uncertified unless the record carries an explicit override.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from math import gcd, isqrt
from typing import BinaryIO, Iterable, Optional, Union

from .errors import InvariantViolation, ParseError, UncertifiedPrime

# --------------------------------------------------------------------------
# descriptors


@dataclass(frozen=True)
class FieldDescriptor:
    """A totally real number field as recorded in an external table."""

    label: str
    degree: int
    discriminant: int
    class_number: int
    polynomial: tuple[int, ...]  # ascending coefficients, monic
    splitting_overrides: tuple[tuple[int, tuple[tuple[int, int], ...]], ...] = ()

    def __post_init__(self):
        if self.degree < 1:
            raise InvariantViolation(f"{self.label}: degree must be >= 1")
        if len(self.polynomial) != self.degree + 1:
            raise InvariantViolation(f"{self.label}: polynomial length != degree+1")
        if self.polynomial[-1] != 1:
            raise InvariantViolation(f"{self.label}: polynomial is not monic")
        if self.class_number < 1:
            raise InvariantViolation(f"{self.label}: class number must be positive")
        if self.degree == 1 and self.discriminant != 1:
            raise InvariantViolation(f"{self.label}: degree 1 forces discriminant 1")
        if self.degree >= 2 and self.discriminant <= 1:
            raise InvariantViolation(f"{self.label}: totally real field needs positive discriminant")
        if self.degree == 2 and not _is_fundamental_discriminant(self.discriminant):
            raise InvariantViolation(f"{self.label}: {self.discriminant} is not a fundamental discriminant")
        if self.degree >= 2:
            quot, rem = divmod(polynomial_discriminant(self.polynomial), self.discriminant)
            if rem != 0 or quot <= 0 or isqrt(quot) ** 2 != quot:
                raise InvariantViolation(
                    f"{self.label}: disc(poly) is not a square multiple of the field discriminant"
                )

    @property
    def index(self) -> int:
        """Index of the equation order in the maximal order (up to sign conventions)."""
        if self.degree == 1:
            return 1
        return isqrt(polynomial_discriminant(self.polynomial) // self.discriminant)

    def override_for(self, p: int) -> Optional[tuple[tuple[int, int], ...]]:
        for q, factors in self.splitting_overrides:
            if q == p:
                return factors
        return None

    def record(self) -> dict:
        rec = {
            "label": self.label,
            "degree": self.degree,
            "disc": self.discriminant,
            "h": self.class_number,
            "poly": list(self.polynomial),
        }
        if self.splitting_overrides:
            rec["splitting_overrides"] = [
                {"p": p, "factors": [list(fe) for fe in factors]}
                for p, factors in self.splitting_overrides
            ]
        return rec


RATIONAL_FIELD = FieldDescriptor("1.1", 1, 1, 1, (0, 1))


@dataclass(frozen=True)
class SplittingType:
    """Factorization pattern of a prime: (residue degree f, ramification e) per place."""

    prime: int
    factors: tuple[tuple[int, int], ...]
    certified: bool

    def __post_init__(self):
        if sum(f * e for f, e in self.factors) == 0:
            raise InvariantViolation("empty splitting pattern")

    def residue_sizes(self) -> tuple[int, ...]:
        return tuple(self.prime**f for f, _ in self.factors)


# --------------------------------------------------------------------------
# integer polynomial discriminant (Sylvester resultant, fraction-free Bareiss)


def polynomial_discriminant(coeffs: Union[tuple[int, ...], list[int]]) -> int:
    """Discriminant of a monic integer polynomial given by ascending coefficients."""
    n = len(coeffs) - 1
    if n < 1:
        raise ValueError("constant polynomial")
    if n == 1:
        return 1
    f = list(coeffs)
    fp = [i * f[i] for i in range(1, n + 1)]
    res = _resultant(f, fp)
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * res  # leading coefficient is 1


def _resultant(f: list[int], g: list[int]) -> int:
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    mat = [[0] * size for _ in range(size)]
    for i in range(n):
        for j, c in enumerate(reversed(f)):
            mat[i][i + j] = c
    for i in range(m):
        for j, c in enumerate(reversed(g)):
            mat[n + i][i + j] = c
    return _bareiss_det(mat)


def _bareiss_det(mat: list[list[int]]) -> int:
    n = len(mat)
    m = [row[:] for row in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


# --------------------------------------------------------------------------
# polynomial factorization patterns over GF(p)


def _ptrim(f: tuple[int, ...]) -> tuple[int, ...]:
    i = len(f)
    while i > 0 and f[i - 1] == 0:
        i -= 1
    return f[:i]


def _pmul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _ptrim(tuple(out))


def _pdivmod(a, b, p):
    a = list(a)
    db = len(b) - 1
    inv = pow(b[-1], p - 2, p)
    q = [0] * max(len(a) - db, 0)
    for da in range(len(a) - 1, db - 1, -1):
        c = a[da] * inv % p
        if c:
            q[da - db] = c
            for i in range(db + 1):
                a[da - db + i] = (a[da - db + i] - c * b[i]) % p
    return _ptrim(tuple(q)), _ptrim(tuple(a))


def _pgcd(a, b, p):
    a, b = _ptrim(tuple(x % p for x in a)), _ptrim(tuple(x % p for x in b))
    while b:
        a, b = b, _pdivmod(a, b, p)[1]
    if a and a[-1] != 1:
        inv = pow(a[-1], p - 2, p)
        a = tuple(c * inv % p for c in a)
    return a


def _ppowmod(base, e, mod, p):
    result = (1,)
    base = _pdivmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = _pdivmod(_pmul(result, base, p), mod, p)[1]
        e >>= 1
        if e:
            base = _pdivmod(_pmul(base, base, p), mod, p)[1]
    return result


def _pderiv(f, p):
    return _ptrim(tuple((i * f[i]) % p for i in range(1, len(f))))


def _distinct_degrees(g: tuple[int, ...], p: int) -> list[int]:
    """Degrees (with repetition) of the irreducible factors of squarefree monic g."""
    degs: list[int] = []
    h = (0, 1)  # x
    k = 0
    while len(g) - 1 >= 2 * (k + 1):
        k += 1
        h = _ppowmod(h, p, g, p)
        diff = list(h) + [0] * max(0, 2 - len(h))
        diff[1] = (diff[1] - 1) % p
        d = _pgcd(g, tuple(diff), p)
        if len(d) > 1:
            degs.extend([k] * ((len(d) - 1) // k))
            g = _pdivmod(g, d, p)[0]
            h = _pdivmod(h, g, p)[1]
    if len(g) > 1:
        degs.append(len(g) - 1)
    return degs


def factorization_pattern(coeffs: Iterable[int], p: int) -> tuple[tuple[int, int], ...]:
    """(degree, multiplicity) pairs of the irreducible factors of a monic poly mod p.

    Squarefree decomposition handles the char-p collapse f = g(x^p) = g(x)^p;
    distinct-degree factorization via gcd with x^(p^k) - x sorts each
    squarefree part by factor degree.
    """
    f = _ptrim(tuple(int(c) % p for c in coeffs))
    if len(f) <= 1:
        raise ValueError("polynomial vanishes mod p; not monic?")
    out: list[tuple[int, int]] = []
    stack = [(f, 1)]
    while stack:
        g, mult = stack.pop()
        if len(g) <= 1:
            continue
        d = _pderiv(g, p)
        if not d:
            root = _ptrim(tuple(g[i] for i in range(0, len(g), p)))
            stack.append((root, mult * p))
            continue
        c = _pgcd(g, d, p)
        w = _pdivmod(g, c, p)[0]
        i = 1
        while len(w) > 1:
            y = _pgcd(w, c, p)
            z = _pdivmod(w, y, p)[0]
            if len(z) > 1:
                out.extend((deg, mult * i) for deg in _distinct_degrees(z, p))
            w = y
            c = _pdivmod(c, y, p)[0]
            i += 1
        if len(c) > 1:
            root = _ptrim(tuple(c[i] for i in range(0, len(c), p)))
            stack.append((root, mult * p))
    return tuple(sorted(out))


# --------------------------------------------------------------------------
# splitting types with a synchronized memo table

_SPLITTING_CACHE: dict[tuple[FieldDescriptor, int], SplittingType] = {}
_SPLITTING_LOCK = threading.Lock()


def splitting_type(field: FieldDescriptor, p: int) -> SplittingType:
    """Splitting pattern of the prime p in the field.

    The pattern is read off the factorization of the defining polynomial mod p,
    certified when p does not divide the index of the equation order.  Records
    may override uncertified primes with true splitting data, which counts as
    certified.
    """
    key = (field, p)
    with _SPLITTING_LOCK:
        cached = _SPLITTING_CACHE.get(key)
    if cached is not None:
        return cached
    override = field.override_for(p)
    if override is not None:
        result = SplittingType(p, tuple(sorted(tuple(fe) for fe in override)), True)
    else:
        pattern = factorization_pattern(field.polynomial, p)
        certified = field.index % p != 0
        result = SplittingType(p, pattern, certified)
    if sum(f * e for f, e in result.factors) != field.degree:
        raise InvariantViolation(
            f"{field.label}: splitting of {p} does not sum to the degree"
        )
    with _SPLITTING_LOCK:
        _SPLITTING_CACHE[key] = result
    return result


def has_place_of_residue_size(field: FieldDescriptor, q: int, prime_bound: int) -> bool:
    """Whether the field has a finite place of norm exactly q = p^f."""
    p, f = _prime_power_split(q)
    if p > prime_bound:
        raise ValueError(f"residue size {q} exceeds prime bound {prime_bound}")
    st = splitting_type(field, p)
    if not st.certified:
        raise UncertifiedPrime(p, field.label)
    return any(fj == f for fj, _ in st.factors)


def _prime_power_split(q: int) -> tuple[int, int]:
    if q < 2:
        raise ValueError("residue size must be >= 2")
    for p in range(2, isqrt(q) + 1):
        if q % p == 0:
            f = 0
            while q % p == 0:
                q //= p
                f += 1
            if q != 1:
                raise ValueError("residue size must be a prime power")
            return p, f
    return q, 1


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31):
        if n % p == 0:
            return n == p
    i = 37
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, n + 1, i)))
    return [i for i in range(2, n + 1) if sieve[i]]


def _is_squarefree(n: int) -> bool:
    i = 2
    while i * i <= n:
        if n % (i * i) == 0:
            return False
        i += 1
    return True


def _is_fundamental_discriminant(d: int) -> bool:
    if d == 1:
        return True
    if d % 4 == 1:
        return _is_squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and _is_squarefree(m)
    return False


# --------------------------------------------------------------------------
# field table ingestion (JSON Lines, '#' comments)

REQUIRED_KEYS = ("label", "degree", "disc", "h", "poly")


def ingest_field_table(source: Union[BinaryIO, bytes, str]) -> list[FieldDescriptor]:
    """Parse a JSON-Lines field table into sorted descriptors.

    One JSON object per line; '#'-prefixed lines and blank lines are ignored.
    Duplicate labels are rejected.  Returns descriptors sorted by
    (degree, discriminant, label).
    """
    if isinstance(source, bytes):
        text = source.decode("utf-8")
    elif isinstance(source, str):
        text = source
    else:
        text = source.read().decode("utf-8")
    fields: list[FieldDescriptor] = []
    seen: set[str] = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            rec = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise ParseError(lineno, f"invalid JSON: {exc.msg}") from exc
        if not isinstance(rec, dict):
            raise ParseError(lineno, "record is not a JSON object")
        missing = [k for k in REQUIRED_KEYS if k not in rec]
        if missing:
            raise ParseError(lineno, f"missing keys: {', '.join(missing)}")
        label = rec["label"]
        if label in seen:
            raise ParseError(lineno, f"duplicate label {label!r}")
        seen.add(label)
        overrides = tuple(
            (entry["p"], tuple(tuple(fe) for fe in entry["factors"]))
            for entry in rec.get("splitting_overrides", ())
        )
        try:
            fd = FieldDescriptor(
                label=label,
                degree=int(rec["degree"]),
                discriminant=int(rec["disc"]),
                class_number=int(rec["h"]),
                polynomial=tuple(int(c) for c in rec["poly"]),
                splitting_overrides=overrides,
            )
        except InvariantViolation as exc:
            raise InvariantViolation(f"line {lineno}: {exc}") from exc
        fields.append(fd)
    fields.sort(key=lambda f: (f.degree, f.discriminant, f.label))
    return fields


def serialize_field_table(fields: Iterable[FieldDescriptor]) -> str:
    return "\n".join(json.dumps(f.record(), separators=(", ", ": ")) for f in fields) + "\n"
