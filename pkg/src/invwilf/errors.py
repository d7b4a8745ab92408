"""Exception hierarchy shared by every module."""
from __future__ import annotations


class InvWilfError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInput(InvWilfError, ValueError):
    """Malformed sequence or pattern text, or an object violating its invariant."""


class EmptyWord(InvalidInput):
    pass


class InvalidPattern(InvalidInput):
    pass


class InvalidSequence(InvalidInput):
    pass


class LengthMismatch(InvalidInput):
    pass


class EnumerationCapExceeded(InvWilfError):
    pass


class NotAnOccurrence(InvWilfError):
    pass


class DistinctValueMismatch(InvWilfError):
    pass


class MissingOccurrence(NotAnOccurrence):
    def __init__(self, position: int, message: str | None = None):
        self.position = position
        super().__init__(message or f"position {position} is not an occurrence of the source pattern")


class UnsupportedPair(InvWilfError):
    """No change rule (or exchange family) is defined for the requested pattern pair."""


class RuleNotNonOverlapping(UnsupportedPair):
    pass


class TerminationGuardExceeded(InvWilfError):
    pass


class LevelSetNotContained(InvWilfError):
    pass


class TransientQObserved(InvWilfError):
    pass


class AuditFailure(InvWilfError):
    def __init__(self, position: int, check: str, detail: str = ""):
        self.position = position
        self.check = check
        super().__init__(f"audit failure at position {position} [{check}] {detail}".rstrip())


class MismatchWitness(InvWilfError):
    def __init__(self, sequence, reason: str):
        self.sequence = tuple(sequence)
        self.reason = reason
        super().__init__(f"{reason}: {''.join(map(str, sequence))}")


class UnknownFormat(InvWilfError, ValueError):
    pass


class InconsistentTriple(InvWilfError):
    pass
