"""Exception hierarchy shared by every module in the package."""

from __future__ import annotations


class RetroPQError(Exception):
    """Base class for all errors raised by this package."""


# --- order-statistic tree -------------------------------------------------

class DuplicateKey(RetroPQError):
    """Key is already stored in the tree (or element already on the timeline)."""


class KeyNotFound(RetroPQError):
    """Key is not stored in the tree."""


class RankOutOfRange(RetroPQError):
    """Rank argument outside 1..size."""


# --- min-y range searching ------------------------------------------------

class DuplicateCoordinate(RetroPQError):
    """A stored point already uses this x or this y coordinate."""


class PointNotFound(RetroPQError):
    """Point is not in the structure."""


# --- retroactive timeline -------------------------------------------------

class DuplicateTime(RetroPQError):
    """An update already exists at this time."""


class NoOperationAtTime(RetroPQError):
    """No update exists at this time."""


class WrongOperationKind(RetroPQError):
    """The update at this time is not of the addressed kind."""


class InvalidTimeline(RetroPQError):
    """The operation history violates the monotonic-queue consistency rules.

    ``time`` points at the first offending update.
    """

    def __init__(self, message: str, time=None):
        super().__init__(message)
        self.time = time


class EmptyExtract(InvalidTimeline):
    """An extract-min fires while the queue is empty."""


class MonotonicityViolation(InvalidTimeline):
    """An element below the last extracted value is inserted."""


# --- trace format & workload generation ------------------------------------

class TraceError(RetroPQError):
    """Problem in a trace file; ``line`` is 1-based."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class TraceSyntaxError(TraceError):
    """Malformed trace line (unknown opcode, wrong field count, junk)."""


class NonIntegerField(TraceError):
    """A field is not a decimal integer in the signed 64-bit range."""


class GenerationStuck(RetroPQError):
    """Rejection sampling failed too many times in a row; params are infeasible."""
