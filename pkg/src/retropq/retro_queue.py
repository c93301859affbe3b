"""Fully retroactive monotonic min-priority queue.

The queue is a timeline of updates (element inserts and extract-mins, each
pinned to a unique time) that can be edited at any past time and queried at
any time. Three structures are kept in lockstep:

* an order-statistic tree over the element values,
* an order-statistic tree over the extract-min times,
* a min-y range-search structure over (insertion time, value) points.

``last_extracted(t)`` pairs the k-th extraction with the k-th smallest
element (the pairing is forced in a monotonic queue), so it is a
predecessor search plus a rank/select hop: O(log m). ``get_min(t)`` then
asks the range structure for the lowest point in
(-inf, t] x (last_extracted(t), inf).

All retroactive updates cost O(log m) plus one range-structure update where
one is needed; nothing is ever replayed. In ``checked`` mode every update is
first vetted by the replay oracle (O(m log m)) and rejected updates leave
the queue untouched; unchecked mode trusts the caller and is what the
benchmarks run.
"""

from __future__ import annotations

from typing import List, Optional, Union

from . import replay
from .errors import (
    DuplicateKey,
    DuplicateTime,
    NoOperationAtTime,
    WrongOperationKind,
)
from .order_stat_tree import OrderStatTree
from .range_search import BACKENDS, MinYRangeSearch, Point, QueryRect
from .replay import OpKind, OpRecord, ValidityReport


class MonotonicRetroQueue:
    """Timeline of a monotonic min-priority queue, editable at past times.

    ``backend`` picks the range-search structure ("rangetree" or "naive");
    an already-built instance is also accepted. With ``checked=True`` every
    update is validated against the replay oracle before it is applied.
    """

    def __init__(self, backend: Union[str, MinYRangeSearch] = "rangetree",
                 checked: bool = False):
        if isinstance(backend, str):
            try:
                backend = BACKENDS[backend]()
            except KeyError:
                raise ValueError(f"unknown backend {backend!r}") from None
        self._elements: OrderStatTree = OrderStatTree()
        self._extract_times: OrderStatTree = OrderStatTree()
        self._points: MinYRangeSearch = backend
        self._ops: dict = {}
        self.checked = checked

    def __len__(self) -> int:
        """Number of updates currently on the timeline."""
        return len(self._ops)

    @property
    def backend_name(self) -> str:
        return self._points.name

    @property
    def element_count(self) -> int:
        """Elements currently inserted somewhere on the timeline."""
        return len(self._elements)

    @property
    def extract_count(self) -> int:
        """Extract-min updates currently on the timeline."""
        return len(self._extract_times)

    def operations(self) -> List[OpRecord]:
        """The timeline as a time-sorted operation list."""
        return sorted(self._ops.values(), key=lambda r: r.time)

    # -- retroactive updates -------------------------------------------

    def insert_insert(self, t, x) -> None:
        """Add an insert(x) update at time t."""
        if t in self._ops:
            raise DuplicateTime(f"an update already exists at time {t!r}")
        if x in self._elements:
            raise DuplicateKey(f"element already on the timeline: {x!r}")
        rec = replay.insert_op(t, x)
        self._vet(add=rec)
        self._elements.insert(x)
        self._points.insert(Point(t, x))
        self._ops[t] = rec

    def delete_insert(self, t) -> int:
        """Remove the insert update at time t; returns the removed element."""
        rec = self._require(t, OpKind.INSERT)
        self._vet(drop=t)
        self._elements.delete(rec.key)
        self._points.remove(Point(t, rec.key))
        del self._ops[t]
        return rec.key

    def insert_extract(self, t) -> None:
        """Add an extract-min update at time t."""
        if t in self._ops:
            raise DuplicateTime(f"an update already exists at time {t!r}")
        rec = replay.extract_op(t)
        self._vet(add=rec)
        self._extract_times.insert(t)
        self._ops[t] = rec

    def delete_extract(self, t) -> None:
        """Remove the extract-min update at time t."""
        self._require(t, OpKind.EXTRACT)
        self._vet(drop=t)
        self._extract_times.delete(t)
        del self._ops[t]

    # -- queries at any time -------------------------------------------

    def last_extracted(self, t) -> Optional[int]:
        """Value removed by the latest extract-min at or before t, or None."""
        last_time = self._extract_times.predecessor(t)
        if last_time is None:
            return None
        k = self._extract_times.rank(last_time)
        return self._elements.select(k)

    def get_min(self, t) -> Optional[int]:
        """Minimum element alive at time t, or None.

        An element inserted exactly at t is already alive; the element
        extracted exactly at t is already gone.
        """
        floor = self.last_extracted(t)
        found = self._points.min_y_in(QueryRect(x_max=t, y_floor=floor))
        return None if found is None else found.y

    def extraction_time(self, x) -> Optional[int]:
        """When element x gets extracted, or None if it never is."""
        k = self._elements.rank(x)
        if k <= len(self._extract_times):
            return self._extract_times.select(k)
        return None

    def validate(self) -> ValidityReport:
        """Replay the whole timeline through the oracle's consistency check."""
        return replay.validate(self.operations())

    # -- internals -------------------------------------------------------

    def _require(self, t, kind: OpKind) -> OpRecord:
        rec = self._ops.get(t)
        if rec is None:
            raise NoOperationAtTime(f"no update at time {t!r}")
        if rec.kind is not kind:
            raise WrongOperationKind(
                f"update at time {t!r} is {rec.kind.value}, not {kind.value}")
        return rec

    def _vet(self, add: Optional[OpRecord] = None, drop=None) -> None:
        # Checked mode: validate the would-be timeline before touching any
        # structure, so a rejected update cannot be observed at all.
        if not self.checked:
            return
        ops = [rec for time, rec in self._ops.items() if time != drop]
        if add is not None:
            ops.append(add)
        ops.sort(key=lambda r: r.time)
        replay.validate(ops).raise_if_invalid()
