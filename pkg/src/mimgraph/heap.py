"""Addressable binary min-heap with decrease-key.

The search keeps one live entry per item and lowers its key in place, so
the queue never holds stale duplicates. Keys are comparable tuples; the
item with the smallest key wins find-min.
"""

from __future__ import annotations

from typing import Any, Hashable


class AddressableMinHeap:
    def __init__(self) -> None:
        self._items: list[Hashable] = []
        self._keys: dict[Hashable, Any] = {}
        self._pos: dict[Hashable, int] = {}

    def __len__(self) -> int:
        return len(self._items)

    def __contains__(self, item: Hashable) -> bool:
        return item in self._pos

    def key_of(self, item: Hashable):
        return self._keys[item]

    def insert(self, item: Hashable, key) -> None:
        if item in self._pos:
            raise KeyError(f"item already queued: {item!r}")
        self._keys[item] = key
        self._items.append(item)
        self._pos[item] = len(self._items) - 1
        self._sift_up(len(self._items) - 1)

    def find_min(self) -> Hashable:
        if not self._items:
            raise IndexError("find-min on empty heap")
        return self._items[0]

    def min_key(self):
        if not self._items:
            raise IndexError("min-key on empty heap")
        return self._keys[self._items[0]]

    def delete_min(self) -> tuple[Hashable, Any]:
        if not self._items:
            raise IndexError("delete-min on empty heap")
        top = self._items[0]
        key = self._keys.pop(top)
        del self._pos[top]
        last = self._items.pop()
        if self._items:
            self._items[0] = last
            self._pos[last] = 0
            self._sift_down(0)
        return top, key

    def decrease_key(self, item: Hashable, new_key) -> None:
        old = self._keys[item]
        if new_key > old:
            raise ValueError(f"decrease-key would raise key: {new_key!r} > {old!r}")
        self._keys[item] = new_key
        self._sift_up(self._pos[item])

    def _sift_up(self, i: int) -> None:
        items, keys, pos = self._items, self._keys, self._pos
        item = items[i]
        key = keys[item]
        while i > 0:
            parent = (i - 1) >> 1
            if key < keys[items[parent]]:
                items[i] = items[parent]
                pos[items[i]] = i
                i = parent
            else:
                break
        items[i] = item
        pos[item] = i

    def _sift_down(self, i: int) -> None:
        items, keys, pos = self._items, self._keys, self._pos
        n = len(items)
        item = items[i]
        key = keys[item]
        while True:
            child = 2 * i + 1
            if child >= n:
                break
            right = child + 1
            if right < n and keys[items[right]] < keys[items[child]]:
                child = right
            if keys[items[child]] < key:
                items[i] = items[child]
                pos[items[i]] = i
                i = child
            else:
                break
        items[i] = item
        pos[item] = i
