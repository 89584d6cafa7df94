"""Balanced multi-item binary search tree (T-tree).

Each node owns a sorted run of up to ``y1`` (key, payload) items plus
parent/left/right pointers, combining the binary search structure of an
AVL tree with the per-node storage utilization of a B-tree.  Searches use
the marked-node descent: walk down comparing the probe only against each
node's minimum key, remember the last node whose minimum did not exceed
the probe, and binary-search that bounding node once a leaf is passed.

Insert and delete keep three invariants: item order within and across
nodes, AVL balance over nodes, and a best-effort minimum occupancy of
``y2`` items for interior nodes (refilled by borrowing from the greatest
lower bound leaf).
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from typing import Any, Iterator, NamedTuple

from locdb.index.stats import AccessStats

__all__ = ["DuplicateKeyError", "SearchResult", "TNode", "TTree", "ValidationResult"]

KEY_MIN = 0
KEY_MAX = 2**64  # keys are unsigned 64-bit integers (dense numeric plans)


class DuplicateKeyError(ValueError):
    """Insert of a key that is already present."""


class SearchResult(NamedTuple):
    found: bool
    payload: Any
    stats: AccessStats


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


class TNode:
    __slots__ = ("keys", "values", "parent", "left", "right", "height",
                 "min_key", "max_key")

    def __init__(self, keys: list[int], values: list[Any],
                 parent: "TNode | None" = None):
        self.keys = keys
        self.values = values
        self.parent = parent
        self.left: TNode | None = None
        self.right: TNode | None = None
        self.height = 0  # edges on the longest downward path
        self.refresh_bounds()

    def refresh_bounds(self) -> None:
        if self.keys:
            self.min_key = self.keys[0]
            self.max_key = self.keys[-1]

    def is_interior(self) -> bool:
        return self.left is not None and self.right is not None

    def is_leaf(self) -> bool:
        return self.left is None and self.right is None

    def __repr__(self) -> str:  # debugging aid
        return f"TNode({self.keys[:4]}{'...' if len(self.keys) > 4 else ''})"


def _h(node: TNode | None) -> int:
    return -1 if node is None else node.height


def _update_height(node: TNode) -> None:
    node.height = 1 + max(_h(node.left), _h(node.right))


def _balance(node: TNode) -> int:
    return _h(node.left) - _h(node.right)


class TTree:
    """T-tree keyed by unsigned integers with opaque payloads."""

    def __init__(self, y1: int = 15, y2: int | None = None):
        if y1 < 1:
            raise ValueError("y1 must be >= 1")
        self.y1 = y1
        self.y2 = min(y1, max(1, -(-y1 // 2))) if y2 is None else y2
        if not 1 <= self.y2 <= y1:
            raise ValueError("y2 must be in [1, y1]")
        self.root: TNode | None = None
        self.size = 0
        self.node_count = 0

    # -- queries -----------------------------------------------------------

    def __len__(self) -> int:
        return self.size

    def __contains__(self, key: int) -> bool:
        return self.search(key).found

    def height(self) -> int:
        """Number of node levels (0 for an empty tree)."""
        return 0 if self.root is None else self.root.height + 1

    def search(self, key: int) -> SearchResult:
        """Marked-node descent followed by binary search of the bounding node.

        Every node on the descent counts as one visit and one comparison
        (probe vs node minimum); the final binary search adds its own
        comparisons.  A missing key reports found=False, never raises.
        """
        stats = AccessStats()
        node = self.root
        marked: TNode | None = None
        while node is not None:
            stats.nodes_visited += 1
            stats.comparisons += 1
            if key < node.min_key:
                node = node.left
            else:
                marked = node
                node = node.right
        if marked is None:
            return SearchResult(False, None, stats)
        keys = marked.keys
        lo, hi = 0, len(keys)
        while lo < hi:
            mid = (lo + hi) // 2
            stats.comparisons += 1
            if keys[mid] < key:
                lo = mid + 1
            else:
                hi = mid
        if lo < len(keys):
            stats.comparisons += 1
            if keys[lo] == key:
                return SearchResult(True, marked.values[lo], stats)
        return SearchResult(False, None, stats)

    def items(self) -> Iterator[tuple[int, Any]]:
        """In-order (key, payload) pairs."""
        stack: list[TNode] = []
        node = self.root
        while stack or node is not None:
            while node is not None:
                stack.append(node)
                node = node.left
            node = stack.pop()
            yield from zip(node.keys, node.values)
            node = node.right

    def keys_in_order(self) -> list[int]:
        return [k for k, _ in self.items()]

    # -- mutation ----------------------------------------------------------

    def insert(self, key: int, payload: Any = None) -> None:
        key = self._check_key(key)
        if self.root is None:
            self.root = self._new_node([key], [payload], None)
            self.size = 1
            return
        node, bounding = self._bounding_or_last(key)
        if bounding:
            i = bisect_left(node.keys, key)
            if i < len(node.keys) and node.keys[i] == key:
                raise DuplicateKeyError(f"key {key} already present")
            if len(node.keys) < self.y1:
                node.keys.insert(i, key)
                node.values.insert(i, payload)
                node.refresh_bounds()
                self.size += 1
                return
            # full bounding node: make room by pushing the current minimum
            # down to the greatest-lower-bound position
            node.keys.insert(i, key)
            node.values.insert(i, payload)
            evicted_key = node.keys.pop(0)
            evicted_val = node.values.pop(0)
            node.refresh_bounds()
            self.size += 1
            self._insert_as_glb(node, evicted_key, evicted_val)
            return
        # fell off the tree at `node`; key lies outside its range
        if len(node.keys) < self.y1:
            i = bisect_left(node.keys, key)
            node.keys.insert(i, key)
            node.values.insert(i, payload)
            node.refresh_bounds()
            self.size += 1
            return
        child = self._new_node([key], [payload], node)
        if key < node.min_key:
            node.left = child
        else:
            node.right = child
        self.size += 1
        self._rebalance_up(node)

    def delete(self, key: int) -> None:
        key = self._check_key(key)
        node, bounding = self._bounding_or_last(key)
        if node is None or not bounding:
            raise KeyError(key)
        i = bisect_left(node.keys, key)
        if i >= len(node.keys) or node.keys[i] != key:
            raise KeyError(key)
        node.keys.pop(i)
        node.values.pop(i)
        node.refresh_bounds()
        self.size -= 1
        self._repair_after_removal(node)

    def validate(self) -> ValidationResult:
        """Check every structural invariant; report the first violation."""
        try:
            total = self._validate_node(self.root, "root", None, None, None)
        except _Violation as v:
            return ValidationResult(False, str(v))
        if total != self.size:
            return ValidationResult(
                False, f"size mismatch: counted {total}, recorded {self.size}")
        return ValidationResult(True)

    # -- internals ---------------------------------------------------------

    def _check_key(self, key: int) -> int:
        if not isinstance(key, int) or isinstance(key, bool):
            raise TypeError(f"key must be an integer, got {type(key).__name__}")
        if not KEY_MIN <= key < KEY_MAX:
            raise ValueError(f"key {key} outside unsigned 64-bit range")
        return key

    def _new_node(self, keys, values, parent) -> TNode:
        self.node_count += 1
        return TNode(keys, values, parent)

    def _bounding_or_last(self, key: int) -> tuple[TNode | None, bool]:
        node = self.root
        last = None
        while node is not None:
            last = node
            if key < node.min_key:
                node = node.left
            elif key > node.max_key:
                node = node.right
            else:
                return node, True
        return last, False

    def _insert_as_glb(self, node: TNode, key: int, value: Any) -> None:
        # `key` was node's minimum: greater than the whole left subtree,
        # smaller than everything remaining in `node`
        if node.left is None:
            node.left = self._new_node([key], [value], node)
            self._rebalance_up(node)
            return
        donor = node.left
        while donor.right is not None:
            donor = donor.right
        if len(donor.keys) < self.y1:
            donor.keys.append(key)
            donor.values.append(value)
            donor.refresh_bounds()
            return
        donor.right = self._new_node([key], [value], donor)
        self._rebalance_up(donor)

    def _repair_after_removal(self, node: TNode) -> None:
        if node.is_interior():
            while len(node.keys) < self.y2:
                donor = node.left
                while donor.right is not None:
                    donor = donor.right
                if len(donor.keys) > 1:
                    node.keys.insert(0, donor.keys.pop())
                    node.values.insert(0, donor.values.pop())
                    node.refresh_bounds()
                    donor.refresh_bounds()
                elif not node.keys:
                    # must not leave an interior node empty: absorb the
                    # single-item donor and unlink it
                    node.keys.insert(0, donor.keys.pop())
                    node.values.insert(0, donor.values.pop())
                    node.refresh_bounds()
                    self._unlink(donor)
                    return
                else:
                    break  # below target but non-empty; donors exhausted
            return
        if node.keys:
            return
        self._unlink(node)

    def _unlink(self, node: TNode) -> None:
        # node holds no items and has at most one child
        child = node.left if node.left is not None else node.right
        parent = node.parent
        if child is not None:
            child.parent = parent
        if parent is None:
            self.root = child
        elif parent.left is node:
            parent.left = child
        else:
            parent.right = child
        node.parent = node.left = node.right = None
        self.node_count -= 1
        if parent is not None:
            self._rebalance_up(parent)

    def _rebalance_up(self, node: TNode | None) -> None:
        while node is not None:
            _update_height(node)
            if abs(_balance(node)) > 1:
                node = self._restore_balance(node)
            node = node.parent

    def _restore_balance(self, node: TNode) -> TNode:
        if _balance(node) > 1:
            if _balance(node.left) < 0:
                self._rotate_left(node.left)
            new_root = self._rotate_right(node)
        else:
            if _balance(node.right) > 0:
                self._rotate_right(node.right)
            new_root = self._rotate_left(node)
        # a rotation can promote a slim leaf into an interior position;
        # top it back up toward the occupancy target
        for n in (new_root, new_root.left, new_root.right):
            if n is not None and n.is_interior() and len(n.keys) < self.y2:
                self._refill_from_glb(n)
        return new_root

    def _refill_from_glb(self, node: TNode) -> None:
        while len(node.keys) < self.y2:
            donor = node.left
            while donor.right is not None:
                donor = donor.right
            if len(donor.keys) <= 1:
                return  # never empty a donor during refill
            node.keys.insert(0, donor.keys.pop())
            node.values.insert(0, donor.values.pop())
            node.refresh_bounds()
            donor.refresh_bounds()

    def _rotate_left(self, a: TNode) -> TNode:
        r = a.right
        a.right = r.left
        if r.left is not None:
            r.left.parent = a
        r.left = a
        r.parent = a.parent
        if a.parent is None:
            self.root = r
        elif a.parent.left is a:
            a.parent.left = r
        else:
            a.parent.right = r
        a.parent = r
        _update_height(a)
        _update_height(r)
        return r

    def _rotate_right(self, a: TNode) -> TNode:
        l = a.left
        a.left = l.right
        if l.right is not None:
            l.right.parent = a
        l.right = a
        l.parent = a.parent
        if a.parent is None:
            self.root = l
        elif a.parent.left is a:
            a.parent.left = l
        else:
            a.parent.right = l
        a.parent = l
        _update_height(a)
        _update_height(l)
        return l

    def _validate_node(self, node: TNode | None, path: str,
                       lo: int | None, hi: int | None,
                       parent: TNode | None) -> int:
        if node is None:
            return 0
        if node.parent is not parent:
            raise _Violation(f"{path}: bad parent pointer")
        if not node.keys:
            raise _Violation(f"{path}: empty node")
        if len(node.keys) > self.y1:
            raise _Violation(f"{path}: {len(node.keys)} items exceeds y1={self.y1}")
        if len(node.keys) != len(node.values):
            raise _Violation(f"{path}: key/value length mismatch")
        for a, b in zip(node.keys, node.keys[1:]):
            if not a < b:
                raise _Violation(f"{path}: items not strictly increasing ({a} !< {b})")
        if node.min_key != node.keys[0] or node.max_key != node.keys[-1]:
            raise _Violation(f"{path}: stale min/max cache")
        if lo is not None and node.min_key <= lo:
            raise _Violation(f"{path}: subtree order violated (min {node.min_key} <= bound {lo})")
        if hi is not None and node.max_key >= hi:
            raise _Violation(f"{path}: subtree order violated (max {node.max_key} >= bound {hi})")
        left_n = self._validate_node(node.left, path + ".left", lo, node.min_key, node)
        right_n = self._validate_node(node.right, path + ".right", node.max_key, hi, node)
        expect_h = 1 + max(_h(node.left), _h(node.right))
        if node.height != expect_h:
            raise _Violation(f"{path}: cached height {node.height} != {expect_h}")
        if abs(_balance(node)) > 1:
            raise _Violation(f"{path}: AVL balance violated (factor {_balance(node)})")
        return left_n + right_n + len(node.keys)


class _Violation(Exception):
    pass
