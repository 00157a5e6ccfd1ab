"""Exception hierarchy shared by all modules."""


class LatticeError(Exception):
    """Base class for everything this package raises on purpose."""


class InvalidInput(LatticeError):
    """A precondition on user-supplied data failed."""


class InvalidAnchor(InvalidInput):
    """The anchor class of an enumeration query has nonpositive self-intersection."""


class InfeasibleQuery(LatticeError):
    """No real solution exists: the requested norm/pairing violate the index bound."""


class CapTooSmall(InvalidInput):
    """A search cap below the certified minimum was requested."""


class InvalidPattern(InvalidInput):
    """A Gram pattern fails its shape invariants."""


class UnsatisfiablePairingSpec(LatticeError):
    """No isotropic witnesses realize the requested pairing matrix."""

    def __init__(self, message, proven=False):
        super().__init__(message)
        self.proven = proven  # True when ruled out exactly, False when a budget ran out


class DecompositionNotFound(LatticeError):
    """The bounded decomposition search was exhausted.

    Reaching this contradicts the structure theorems the search implements, so
    it signals a bug rather than an expected outcome.
    """


class TheoremViolation(LatticeError):
    """Computed data contradicts a statement that is supposed to be a theorem."""


class OverflowGuard(LatticeError):
    """An intermediate bound certificate exceeded the configured safety limit."""


class ParseError(LatticeError):
    """Class-expression syntax error, with position information."""

    def __init__(self, message, position, expected=None):
        detail = f"{message} at position {position}"
        if expected:
            detail += f" (expected {expected})"
        super().__init__(detail)
        self.position = position
        self.expected = expected


class UnboundNameError(LatticeError):
    """A class expression referenced a name with no binding."""
