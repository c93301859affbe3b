"""Order-statistic tree: a weight-balanced BST with subtree-size counters.

Supports insert, delete, 1-based rank/select and inclusive predecessor, all
in O(log n) worst case. Keys may be anything totally ordered; they must be
distinct. Rebalancing uses single/double rotations with the weight-balance
parameters (delta, gamma) = (3, 2), which are safe for both insert and
delete. A child's weight is at most 3/4 of its parent's, so the height is
bounded by log(n + 1) / log(4/3) ~ 2.41 * log2(n + 1).
"""

from __future__ import annotations

from typing import Generic, Iterator, Optional, Sequence, TypeVar

from .errors import DuplicateKey, KeyNotFound, RankOutOfRange

K = TypeVar("K")

_DELTA = 3
_GAMMA = 2

# When True, every rebalance asserts the local weight invariant it is meant
# to restore. Enabled by the test suite; off by default for speed.
DEBUG_CHECKS = False


class _Node(Generic[K]):
    __slots__ = ("key", "size", "left", "right")

    def __init__(self, key: K):
        self.key = key
        self.size = 1
        self.left: Optional[_Node[K]] = None
        self.right: Optional[_Node[K]] = None


def _size(node: Optional[_Node[K]]) -> int:
    return 0 if node is None else node.size


def _weight(node: Optional[_Node[K]]) -> int:
    # Weight counts leaves of the extended tree, so the empty tree weighs 1.
    return _size(node) + 1


def _refresh(node: _Node[K]) -> None:
    node.size = 1 + _size(node.left) + _size(node.right)


def _rotate_left(node: _Node[K]) -> _Node[K]:
    pivot = node.right
    node.right = pivot.left
    pivot.left = node
    _refresh(node)
    _refresh(pivot)
    return pivot


def _rotate_right(node: _Node[K]) -> _Node[K]:
    pivot = node.left
    node.left = pivot.right
    pivot.right = node
    _refresh(node)
    _refresh(pivot)
    return pivot


def _rebalance(node: _Node[K]) -> _Node[K]:
    lw = _weight(node.left)
    rw = _weight(node.right)
    if rw > _DELTA * lw:
        if _weight(node.right.left) < _GAMMA * _weight(node.right.right):
            node = _rotate_left(node)
        else:
            node.right = _rotate_right(node.right)
            node = _rotate_left(node)
    elif lw > _DELTA * rw:
        if _weight(node.left.right) < _GAMMA * _weight(node.left.left):
            node = _rotate_right(node)
        else:
            node.left = _rotate_left(node.left)
            node = _rotate_right(node)
    if DEBUG_CHECKS:
        assert _weight(node.left) <= _DELTA * _weight(node.right)
        assert _weight(node.right) <= _DELTA * _weight(node.left)
    return node


def _insert(node: Optional[_Node[K]], key: K) -> _Node[K]:
    if node is None:
        return _Node(key)
    if key < node.key:
        node.left = _insert(node.left, key)
    elif key > node.key:
        node.right = _insert(node.right, key)
    else:
        raise DuplicateKey(f"key already present: {key!r}")
    node.size += 1
    return _rebalance(node)


def _pop_min(node: _Node[K]) -> tuple[K, Optional[_Node[K]]]:
    if node.left is None:
        return node.key, node.right
    key, node.left = _pop_min(node.left)
    node.size -= 1
    return key, _rebalance(node)


def _delete(node: Optional[_Node[K]], key: K) -> Optional[_Node[K]]:
    if node is None:
        raise KeyNotFound(f"key not present: {key!r}")
    if key < node.key:
        node.left = _delete(node.left, key)
    elif key > node.key:
        node.right = _delete(node.right, key)
    else:
        if node.left is None:
            return node.right
        if node.right is None:
            return node.left
        node.key, node.right = _pop_min(node.right)
    node.size -= 1
    return _rebalance(node)


class OrderStatTree(Generic[K]):
    """Dynamic set of distinct ordered keys with rank/select access.

    ``rank`` and ``select`` are mutually inverse and 1-based;
    ``predecessor(bound)`` returns the largest stored key <= bound.
    """

    __slots__ = ("_root",)

    def __init__(self):
        self._root: Optional[_Node[K]] = None

    @classmethod
    def from_sorted(cls, keys: Sequence[K]) -> "OrderStatTree[K]":
        """Bulk-build from a strictly increasing sequence in O(n)."""

        def build(lo: int, hi: int) -> Optional[_Node[K]]:
            if lo >= hi:
                return None
            mid = (lo + hi) // 2
            node = _Node(keys[mid])
            node.left = build(lo, mid)
            node.right = build(mid + 1, hi)
            node.size = hi - lo
            return node

        tree: OrderStatTree[K] = cls()
        tree._root = build(0, len(keys))
        return tree

    def __len__(self) -> int:
        return _size(self._root)

    def __contains__(self, key: K) -> bool:
        node = self._root
        while node is not None:
            if key < node.key:
                node = node.left
            elif key > node.key:
                node = node.right
            else:
                return True
        return False

    def __iter__(self) -> Iterator[K]:
        def walk(node: Optional[_Node[K]]) -> Iterator[K]:
            if node is not None:
                yield from walk(node.left)
                yield node.key
                yield from walk(node.right)

        return walk(self._root)

    def insert(self, key: K) -> None:
        """Add ``key``; raises DuplicateKey if already present."""
        self._root = _insert(self._root, key)

    def delete(self, key: K) -> None:
        """Remove ``key``; raises KeyNotFound if absent."""
        self._root = _delete(self._root, key)

    def rank(self, key: K) -> int:
        """1-based position of ``key`` in sorted order; raises KeyNotFound."""
        node = self._root
        below = 0
        while node is not None:
            if key < node.key:
                node = node.left
            elif key > node.key:
                below += _size(node.left) + 1
                node = node.right
            else:
                return below + _size(node.left) + 1
        raise KeyNotFound(f"key not present: {key!r}")

    def select(self, i: int) -> K:
        """The i-th smallest stored key (1-based); raises RankOutOfRange."""
        if not 1 <= i <= _size(self._root):
            raise RankOutOfRange(f"rank {i} outside 1..{_size(self._root)}")
        node = self._root
        while True:
            left = _size(node.left)
            if i <= left:
                node = node.left
            elif i == left + 1:
                return node.key
            else:
                i -= left + 1
                node = node.right

    def predecessor(self, bound: K) -> Optional[K]:
        """Largest stored key <= bound (inclusive), or None."""
        node = self._root
        best: Optional[K] = None
        while node is not None:
            if node.key <= bound:
                best = node.key
                node = node.right
            else:
                node = node.left
        return best

    def validate(self) -> None:
        """Assert every structural invariant; used by tests."""
        import math

        def check(node: Optional[_Node[K]]) -> tuple[int, int]:
            if node is None:
                return 0, 0
            lsize, lheight = check(node.left)
            rsize, rheight = check(node.right)
            assert node.size == lsize + rsize + 1, "stale size counter"
            assert _weight(node.left) <= _DELTA * _weight(node.right), "left too heavy"
            assert _weight(node.right) <= _DELTA * _weight(node.left), "right too heavy"
            if node.left is not None:
                assert node.left.key < node.key, "BST order broken on the left"
            if node.right is not None:
                assert node.key < node.right.key, "BST order broken on the right"
            return node.size, max(lheight, rheight) + 1

        size, height = check(self._root)
        assert size == len(self)
        if size > 1:
            assert height <= 2.5 * math.log2(size) + 2, (
                f"height {height} exceeds bound for size {size}"
            )
