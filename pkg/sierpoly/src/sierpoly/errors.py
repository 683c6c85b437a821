"""Exception hierarchy shared by every sierpoly module.

The CLI turns any ``SierpolyError`` into a one-line diagnostic and exit
status 1; anything else is a bug and keeps its traceback.
"""

from __future__ import annotations


class SierpolyError(Exception):
    """Base class for expected, user-facing failures."""


class InvalidSideCount(SierpolyError, ValueError):
    def __init__(self, r: int) -> None:
        super().__init__(f"r must be at least 3 (got {r})")
        self.r = r


class MultipleOfFour(SierpolyError, ValueError):
    def __init__(self, r: int) -> None:
        super().__init__(f"r must not be a multiple of 4 (got {r})")
        self.r = r


class MalformedAddress(SierpolyError, ValueError):
    def __init__(self, text: str, reason: str) -> None:
        super().__init__(f"malformed address {text!r}: {reason}")
        self.text = text
        self.reason = reason


class SequenceParseError(SierpolyError, ValueError):
    """Grammar violation in a sequence such as ``1(54)*``."""

    def __init__(self, text: str, position: int, reason: str) -> None:
        super().__init__(f"cannot parse sequence {text!r} at position {position}: {reason}")
        self.text = text
        self.position = position
        self.reason = reason


class BudgetExceeded(SierpolyError):
    def __init__(
        self,
        message: str,
        *,
        suggestion: str = "",
        largest_level: int | None = None,
    ) -> None:
        full = f"{message}; {suggestion}" if suggestion else message
        super().__init__(full)
        self.suggestion = suggestion
        self.largest_level = largest_level


class NotStabilized(SierpolyError):
    """A horofunction restriction kept changing over the final probe window."""

    def __init__(self, probe_kind: str, samples: int) -> None:
        super().__init__(
            f"{probe_kind} profile not constant over the last samples "
            f"({samples} samples); extend the level range"
        )
        self.probe_kind = probe_kind
        self.samples = samples


class ProfileMismatch(SierpolyError):
    pass


class InternalInvariantError(SierpolyError):
    """A structural identity failed; points at an indexing bug, not bad input."""


class NoAntipodalPoint(SierpolyError, ValueError):
    """Even r whose frame path A -> B has odd length: no vertex of it is equidistant from both ends.

    Seen at r = 10, where f = 3.
    """

    def __init__(self, r: int, m: int, length: int) -> None:
        super().__init__(
            f"r={r} has no antipodal point at level {m}: d(A, B) = {length} is odd"
        )
        self.r = r
        self.m = m
        self.length = length


class UnsupportedBasepoint(SierpolyError, ValueError):
    """Boundary experiments need a basepoint of the form w . j^inf."""

    def __init__(self, text: str) -> None:
        super().__init__(f"basepoint {text} is not eventually constant")
        self.text = text
