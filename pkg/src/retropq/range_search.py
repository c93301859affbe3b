"""Dynamic 2D point sets answering "lowest point inside a 2-sided rectangle".

The query region is (-inf, x_max] x (y_floor, inf): x_max is inclusive,
y_floor is exclusive, and an absent y_floor means the region is unbounded
below. Within one structure all x coordinates are distinct and all y
coordinates are distinct.

Two interchangeable backends:

* ``NaiveMinY`` scans every point per query. It is the reference oracle.
* ``RangeTreeMinY`` is a dynamic range tree: a weight-balanced primary tree
  keyed by x whose every node carries a secondary order-statistic tree over
  the y values of its subtree. A query decomposes the x-prefix into
  O(log n) canonical subtrees and takes the cheapest successor-above-floor
  from each secondary tree, so queries cost O(log^2 n). Updates touch one
  root-to-leaf path of secondary trees (O(log^2 n) amortized); primary
  balance is restored by rebuilding the offending subtree in place, and
  removals blank the node but keep it for routing until a global rebuild
  reclaims the structure once fewer than half the slots are live.
"""

from __future__ import annotations

import heapq
from typing import Iterator, List, NamedTuple, Optional, Tuple

from .errors import DuplicateCoordinate, PointNotFound
from .order_stat_tree import OrderStatTree

# Rebuild the subtree rooted at a node once either child holds more than
# ALPHA of the node's slots. 7/10 keeps the height under 1.95 * log2(slots).
_ALPHA_NUM = 7
_ALPHA_DEN = 10


class Point(NamedTuple):
    x: int  # insertion time
    y: int  # element value


class QueryRect(NamedTuple):
    x_max: int
    y_floor: Optional[int] = None  # exclusive; None means unbounded below


def _smallest_above(ys: OrderStatTree, floor: Optional[int]) -> Optional[int]:
    """Least stored y strictly above ``floor`` (min of all if floor is None)."""
    n = len(ys)
    if n == 0:
        return None
    if floor is None:
        return ys.select(1)
    pred = ys.predecessor(floor)
    at_or_below = 0 if pred is None else ys.rank(pred)
    if at_or_below + 1 > n:
        return None
    return ys.select(at_or_below + 1)


class MinYRangeSearch:
    """Common contract of the two backends."""

    name = "abstract"

    def insert(self, p: Point) -> None:
        raise NotImplementedError

    def remove(self, p: Point) -> None:
        raise NotImplementedError

    def min_y_in(self, rect: QueryRect) -> Optional[Point]:
        raise NotImplementedError

    def __len__(self) -> int:
        raise NotImplementedError


class NaiveMinY(MinYRangeSearch):
    """Reference backend: dictionary of points, linear scan per query."""

    name = "naive"

    def __init__(self):
        self._by_x: dict = {}
        self._by_y: dict = {}

    def __len__(self) -> int:
        return len(self._by_x)

    def insert(self, p: Point) -> None:
        p = Point(*p)
        if p.x in self._by_x:
            raise DuplicateCoordinate(f"x={p.x!r} already used")
        if p.y in self._by_y:
            raise DuplicateCoordinate(f"y={p.y!r} already used")
        self._by_x[p.x] = p
        self._by_y[p.y] = p

    def remove(self, p: Point) -> None:
        p = Point(*p)
        if self._by_x.get(p.x) != p:
            raise PointNotFound(f"no stored point {p!r}")
        del self._by_x[p.x]
        del self._by_y[p.y]

    def min_y_in(self, rect: QueryRect) -> Optional[Point]:
        x_max, floor = rect
        best: Optional[Point] = None
        for p in self._by_x.values():
            if p.x > x_max:
                continue
            if floor is not None and p.y <= floor:
                continue
            if best is None or p.y < best.y:
                best = p
        return best


class _PNode:
    """Primary-tree node. ``live`` is False once the point was removed; the
    node then still routes by its x until a rebuild drops it."""

    __slots__ = ("x", "y", "live", "slots", "live_count", "left", "right", "ys")

    def __init__(self, x: int, y: int):
        self.x = x
        self.y = y
        self.live = True
        self.slots = 1       # allocated nodes in subtree, dead included
        self.live_count = 1  # live points in subtree
        self.left: Optional[_PNode] = None
        self.right: Optional[_PNode] = None
        self.ys: OrderStatTree = OrderStatTree.from_sorted([y])


def _slots(node: Optional[_PNode]) -> int:
    return 0 if node is None else node.slots


def _live(node: Optional[_PNode]) -> int:
    return 0 if node is None else node.live_count


class RangeTreeMinY(MinYRangeSearch):
    name = "rangetree"

    def __init__(self):
        self._root: Optional[_PNode] = None
        self._by_x: dict = {}
        self._by_y: dict = {}

    def __len__(self) -> int:
        return len(self._by_x)

    # -- updates -------------------------------------------------------

    def insert(self, p: Point) -> None:
        p = Point(*p)
        if p.x in self._by_x:
            raise DuplicateCoordinate(f"x={p.x!r} already used")
        if p.y in self._by_y:
            raise DuplicateCoordinate(f"y={p.y!r} already used")

        # Locate the attachment point first so the error cases above cannot
        # leave half-updated secondary trees behind.
        path: List[_PNode] = []
        node = self._root
        revive: Optional[_PNode] = None
        while node is not None:
            path.append(node)
            if p.x < node.x:
                node = node.left
            elif p.x > node.x:
                node = node.right
            else:
                revive = node  # a dead node still routing this x
                break

        self._by_x[p.x] = p
        self._by_y[p.y] = p

        if revive is not None:
            for anc in path:
                anc.ys.insert(p.y)
                anc.live_count += 1
            revive.live = True
            revive.y = p.y
            return

        fresh = _PNode(p.x, p.y)
        if not path:
            self._root = fresh
            return
        for anc in path:
            anc.ys.insert(p.y)
            anc.slots += 1
            anc.live_count += 1
        parent = path[-1]
        if p.x < parent.x:
            parent.left = fresh
        else:
            parent.right = fresh
        self._restore_balance(path)

    def remove(self, p: Point) -> None:
        p = Point(*p)
        if self._by_x.get(p.x) != p:
            raise PointNotFound(f"no stored point {p!r}")
        node = self._root
        while node is not None and node.x != p.x:
            node.ys.delete(p.y)
            node.live_count -= 1
            node = node.left if p.x < node.x else node.right
        assert node is not None and node.live
        node.ys.delete(p.y)
        node.live_count -= 1
        node.live = False
        del self._by_x[p.x]
        del self._by_y[p.y]
        # Compact once live points drop below half of the allocated slots.
        if self._root is not None and 2 * self._root.live_count < self._root.slots:
            self._root = self._build_live(sorted(self._by_x.values()))

    # -- queries -------------------------------------------------------

    def min_y_in(self, rect: QueryRect) -> Optional[Point]:
        x_max, floor = rect
        best: Optional[int] = None
        node = self._root
        while node is not None:
            if node.x <= x_max:
                # Node and its whole left subtree sit inside the x-range.
                if node.live and (floor is None or node.y > floor):
                    if best is None or node.y < best:
                        best = node.y
                if node.left is not None:
                    cand = _smallest_above(node.left.ys, floor)
                    if cand is not None and (best is None or cand < best):
                        best = cand
                node = node.right
            else:
                node = node.left
        return None if best is None else self._by_y[best]

    # -- rebuilding ----------------------------------------------------

    def _restore_balance(self, path: List[_PNode]) -> None:
        # Rebuild the highest node whose weight balance broke. Tombstones are
        # kept so ancestor slot counts (and their balance) stay untouched.
        for depth, node in enumerate(path):
            if (_slots(node.left) * _ALPHA_DEN > node.slots * _ALPHA_NUM
                    or _slots(node.right) * _ALPHA_DEN > node.slots * _ALPHA_NUM):
                entries = list(self._entries(node))
                rebuilt, _ = self._build_entries(entries, 0, len(entries))
                if depth == 0:
                    self._root = rebuilt
                else:
                    parent = path[depth - 1]
                    if parent.left is node:
                        parent.left = rebuilt
                    else:
                        parent.right = rebuilt
                return

    @staticmethod
    def _entries(node: Optional[_PNode]) -> Iterator[Tuple[int, int, bool]]:
        """All slots of a subtree in x order, dead ones included."""
        if node is not None:
            yield from RangeTreeMinY._entries(node.left)
            yield (node.x, node.y, node.live)
            yield from RangeTreeMinY._entries(node.right)

    @staticmethod
    def _build_entries(
        entries: List[Tuple[int, int, bool]], lo: int, hi: int
    ) -> Tuple[Optional[_PNode], List[int]]:
        """Perfectly balanced subtree over entries[lo:hi]; returns the root
        and the sorted live y values so parents can merge instead of sort."""
        if lo >= hi:
            return None, []
        mid = (lo + hi) // 2
        x, y, live = entries[mid]
        node = _PNode(x, y)
        node.live = live
        node.left, left_ys = RangeTreeMinY._build_entries(entries, lo, mid)
        node.right, right_ys = RangeTreeMinY._build_entries(entries, mid + 1, hi)
        node.slots = hi - lo
        node.live_count = len(left_ys) + len(right_ys) + (1 if live else 0)
        own = [y] if live else []
        ys = list(heapq.merge(left_ys, own, right_ys))
        node.ys = OrderStatTree.from_sorted(ys)
        return node, ys

    @staticmethod
    def _build_live(points: List[Point]) -> Optional[_PNode]:
        entries = [(p.x, p.y, True) for p in points]
        node, _ = RangeTreeMinY._build_entries(entries, 0, len(entries))
        return node

    # -- introspection (tests) ------------------------------------------

    def canonical_cover(self, x_max: int) -> List[int]:
        """Live y values covered by the canonical decomposition of x <= x_max."""
        out: List[int] = []
        node = self._root
        while node is not None:
            if node.x <= x_max:
                if node.live:
                    out.append(node.y)
                if node.left is not None:
                    out.extend(node.left.ys)
                node = node.right
            else:
                node = node.left
        return out

    def validate(self) -> None:
        """Assert counters, x-order, weight balance and secondary coherence."""

        def check(node: Optional[_PNode], lo, hi) -> Tuple[int, int, List[int]]:
            if node is None:
                return 0, 0, []
            assert (lo is None or lo < node.x) and (hi is None or node.x < hi), (
                "x order broken"
            )
            lslots, llive, lys = check(node.left, lo, node.x)
            rslots, rlive, rys = check(node.right, node.x, hi)
            own = [node.y] if node.live else []
            ys = sorted(lys + own + rys)
            assert node.slots == lslots + rslots + 1, "stale slot counter"
            assert node.live_count == llive + rlive + len(own), "stale live counter"
            assert list(node.ys) == ys, "secondary tree out of sync with subtree"
            assert lslots * _ALPHA_DEN <= node.slots * _ALPHA_NUM, "left too heavy"
            assert rslots * _ALPHA_DEN <= node.slots * _ALPHA_NUM, "right too heavy"
            node.ys.validate()
            return node.slots, node.live_count, ys

        slots, live, ys = check(self._root, None, None)
        assert live == len(self._by_x) == len(self._by_y)
        assert live * 2 >= slots or slots <= 1, "too many tombstones"
        assert ys == sorted(self._by_y.keys())


BACKENDS = {
    NaiveMinY.name: NaiveMinY,
    RangeTreeMinY.name: RangeTreeMinY,
}
