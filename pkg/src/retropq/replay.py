"""Brute-force replay over an operation history; the ground truth everywhere.

Every function takes the history as a list of :class:`OpRecord` sorted by
strictly increasing time and recomputes the answer from scratch against a
plain binary heap. Nothing here is fast on purpose: O(m log m) per call,
no caching, no incremental state.
"""

from __future__ import annotations

import bisect
import heapq
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Optional, Tuple

from .errors import EmptyExtract, KeyNotFound, MonotonicityViolation

EMPTY_EXTRACT = "empty-extract"
MONOTONICITY = "monotonicity"


class OpKind(Enum):
    INSERT = "insert"
    EXTRACT = "extract"


@dataclass(frozen=True)
class OpRecord:
    """One retroactive update pinned to a time; ``key`` is set for inserts."""

    time: int
    kind: OpKind
    key: Optional[int] = None


def insert_op(time, key) -> OpRecord:
    return OpRecord(time, OpKind.INSERT, key)


def extract_op(time) -> OpRecord:
    return OpRecord(time, OpKind.EXTRACT)


def as_op_list(records: Iterable[OpRecord]) -> List[OpRecord]:
    """Sort by time and check the uniqueness the replay relies on."""
    ops = sorted(records, key=lambda r: r.time)
    for a, b in zip(ops, ops[1:]):
        if a.time == b.time:
            raise ValueError(f"two updates share time {a.time!r}")
    keys = [op.key for op in ops if op.kind is OpKind.INSERT]
    if len(keys) != len(set(keys)):
        raise ValueError("insert keys are not distinct")
    return ops


@dataclass(frozen=True)
class ValidityReport:
    ok: bool
    time: Optional[int] = None
    violation: Optional[str] = None  # EMPTY_EXTRACT or MONOTONICITY

    def raise_if_invalid(self) -> None:
        if self.ok:
            return
        if self.violation == EMPTY_EXTRACT:
            raise EmptyExtract(f"extract-min on empty queue at time {self.time!r}",
                               time=self.time)
        raise MonotonicityViolation(
            f"insert below the last extracted value at time {self.time!r}",
            time=self.time)


def get_min(ops: List[OpRecord], t) -> Optional[int]:
    """Minimum element alive at time t; updates at exactly t are applied."""
    heap: List[int] = []
    for op in ops:
        if op.time > t:
            break
        if op.kind is OpKind.INSERT:
            heapq.heappush(heap, op.key)
        else:
            if not heap:
                raise EmptyExtract(f"extract-min on empty queue at time {op.time!r}",
                                   time=op.time)
            heapq.heappop(heap)
    return heap[0] if heap else None


def last_extracted(ops: List[OpRecord], t) -> Optional[int]:
    """Value removed by the latest extract-min at or before t, or None."""
    heap: List[int] = []
    last: Optional[int] = None
    for op in ops:
        if op.time > t:
            break
        if op.kind is OpKind.INSERT:
            heapq.heappush(heap, op.key)
        else:
            if not heap:
                raise EmptyExtract(f"extract-min on empty queue at time {op.time!r}",
                                   time=op.time)
            last = heapq.heappop(heap)
    return last


def exists(ops: List[OpRecord], x, t) -> bool:
    """Does element x survive the replay up to and including time t?"""
    if all(op.key != x for op in ops if op.kind is OpKind.INSERT):
        raise KeyNotFound(f"element never inserted: {x!r}")
    heap: List[int] = []
    alive: set = set()
    for op in ops:
        if op.time > t:
            break
        if op.kind is OpKind.INSERT:
            heapq.heappush(heap, op.key)
            alive.add(op.key)
        else:
            if not heap:
                raise EmptyExtract(f"extract-min on empty queue at time {op.time!r}",
                                   time=op.time)
            alive.discard(heapq.heappop(heap))
    return x in alive


def extracted_sequence(ops: List[OpRecord]) -> List[Tuple[int, int]]:
    """Chronological (extraction time, extracted key) pairs of a full replay."""
    heap: List[int] = []
    out: List[Tuple[int, int]] = []
    for op in ops:
        if op.kind is OpKind.INSERT:
            heapq.heappush(heap, op.key)
        else:
            if not heap:
                raise EmptyExtract(f"extract-min on empty queue at time {op.time!r}",
                                   time=op.time)
            out.append((op.time, heapq.heappop(heap)))
    return out


def validate(ops: List[OpRecord]) -> ValidityReport:
    """Replay the history checking, record by record, that no extract-min
    fires on an empty queue and that no insert goes below the last value
    extracted before it. Reports the first offending record."""
    heap: List[int] = []
    last: Optional[int] = None
    for op in ops:
        if op.kind is OpKind.INSERT:
            if last is not None and op.key <= last:
                return ValidityReport(False, op.time, MONOTONICITY)
            heapq.heappush(heap, op.key)
        else:
            if not heap:
                return ValidityReport(False, op.time, EMPTY_EXTRACT)
            last = heapq.heappop(heap)
    return ValidityReport(True)


def validate_via_sequence(ops: List[OpRecord]) -> bool:
    """Alternative acceptance formulation, computed independently of
    :func:`validate`: replay must complete, the extracted values must be
    nondecreasing over time, and every insert must exceed whatever the
    sequence says was last extracted before it."""
    try:
        seq = extracted_sequence(ops)
    except EmptyExtract:
        return False
    values = [v for _, v in seq]
    if any(a > b for a, b in zip(values, values[1:])):
        return False
    times = [t for t, _ in seq]
    for op in ops:
        if op.kind is not OpKind.INSERT:
            continue
        before = bisect.bisect_left(times, op.time)
        if before and op.key <= values[before - 1]:
            return False
    return True
