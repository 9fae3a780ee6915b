"""Exception taxonomy shared by all modules.

Every failure a peer can provoke with a crafted message maps to one class
here, so callers can tell tampering apart from programming errors.
"""


class KnotlockError(Exception):
    """Base class for all library errors."""


# numeric
class InvalidInput(KnotlockError, ValueError):
    pass


class InvalidModulus(KnotlockError, ValueError):
    pass


# braid_core
class DifferentComponents(KnotlockError):
    """Twist slide requested between strands of different closure components."""


class NothingToSlide(KnotlockError):
    """Twist slide requested from a strand carrying no half-twist."""


# codec / linkage
class DuplicatePrime(KnotlockError, ValueError):
    pass


class NotPrime(KnotlockError, ValueError):
    pass


class PrecisionBreach(KnotlockError):
    """A transmitted real was not precise enough to pin down an integer."""


class NotAPowerOfAlpha(KnotlockError):
    """A prime multiplicity is not a pure power of the encoding base."""


class PrimeCollision(KnotlockError, ValueError):
    """Two sides of a link share a prime."""


# protocol
class NoValidPrime(KnotlockError):
    """Responder cannot pick enough fresh primes below the challenger's N."""


class ProtocolStateError(KnotlockError):
    """Operation called in the wrong session phase or role."""


# wire
class WireError(KnotlockError, ValueError):
    pass


class BadMagic(WireError):
    pass


class BadVersion(WireError):
    pass


class BadField(WireError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class TruncatedDocument(WireError):
    pass
