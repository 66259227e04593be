"""Exception types shared across the package."""


class OrbvolError(Exception):
    """Base class for all orbvol-specific errors."""


class AmbiguousInterval(OrbvolError):
    """Interval too wide to certify a unique rational below the denominator bound."""


class ReconstructionFailed(OrbvolError):
    """Rational reconstruction did not stabilize after exhausting the escalation ladder."""


class ParseError(OrbvolError):
    """Malformed field-table record.  Carries the 1-based line number."""

    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class InvariantViolation(OrbvolError):
    """A structurally valid record failed a mathematical consistency check."""


class UncertifiedPrime(OrbvolError):
    """Splitting data at the deciding prime is uncertified and no override was supplied."""

    def __init__(self, prime: int, label: str = ""):
        where = f" in {label}" if label else ""
        super().__init__(f"splitting of p={prime}{where} is uncertified (p divides the polynomial index)")
        self.prime = prime


class NotFundamental(OrbvolError):
    """Argument is not the discriminant of a real quadratic field."""


class OddCharacter(OrbvolError):
    """L(1-2i, chi) at even arguments requires an even character."""


class IllegalType(OrbvolError):
    """Parahoric type outside the legal range for the given form and rank."""


class ParityViolation(OrbvolError):
    """Global sign condition fails: the number of nonsplit places has the wrong parity."""
