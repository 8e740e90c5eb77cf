import itertools
import logging
import math
import os
from functools import reduce
from typing import Hashable, Iterable, Iterator, Sequence, TypeVar

logger = logging.getLogger("__main__")

T = TypeVar("T")


class UnionFind:
    """
    Disjoint sets over hashable items, with an optional parity bit per item
    relative to its representative.
    """

    def __init__(self, items: Iterable[Hashable] = ()):
        self._parent: dict = {}
        self._parity: dict = {}
        for item in items:
            self.add(item)

    def add(self, item: Hashable) -> None:
        if item not in self._parent:
            self._parent[item] = item
            self._parity[item] = 0

    def find(self, item: Hashable) -> Hashable:
        return self._find(item)[0]

    def _find(self, item: Hashable) -> tuple[Hashable, int]:
        self.add(item)
        path = []
        while self._parent[item] != item:
            path.append(item)
            item = self._parent[item]
        root = item
        # compress, accumulating parity from the far end of the path
        parity = 0
        for node in reversed(path):
            parity ^= self._parity[node]
            self._parent[node] = root
            self._parity[node] = parity
        return root, (self._parity[path[0]] if path else 0)

    def union(self, a: Hashable, b: Hashable, parity: int = 0) -> bool:
        """
        Joins a and b, asking that their parities differ by `parity`.
        :return: False if this contradicts an earlier union, else True.
        """
        root_a, parity_a = self._find(a)
        root_b, parity_b = self._find(b)
        if root_a == root_b:
            return (parity_a ^ parity_b) == parity
        self._parent[root_b] = root_a
        self._parity[root_b] = parity_a ^ parity_b ^ parity
        return True

    def parity(self, item: Hashable) -> int:
        return self._find(item)[1]

    def groups(self) -> list[list]:
        buckets: dict = {}
        for item in self._parent:
            buckets.setdefault(self.find(item), []).append(item)
        return list(buckets.values())


def rotate_to_minimum(cycle: Sequence[T]) -> tuple[T, ...]:
    """
    Cyclic rotation of a sequence that starts at its smallest element.
    """
    if not cycle:
        return tuple()
    start = min(range(len(cycle)), key=lambda i: cycle[i])
    return tuple(cycle[start:]) + tuple(cycle[:start])


def gcd_all(values: Iterable[int]) -> int:
    return reduce(math.gcd, (abs(int(v)) for v in values), 0)


def natural_key(identifier: str) -> tuple:
    """
    Sort key that orders "R2" before "R10".
    """
    head = identifier.rstrip("0123456789")
    tail = identifier[len(head):]
    return head, int(tail) if tail else -1


def set_partitions(n: int, blocks: int | None = None) -> Iterator[tuple[int, ...]]:
    """
    Set partitions of range(n) as restricted growth strings: item i gets a block label
    at most one more than every label before it.
    :param blocks: if given, only partitions with exactly this many blocks.
    """
    def extend(prefix: list[int], top: int) -> Iterator[tuple[int, ...]]:
        if len(prefix) == n:
            if blocks is None or top + 1 == blocks:
                yield tuple(prefix)
            return
        remaining = n - len(prefix) - 1
        for label in range(top + 2):
            used = max(top, label) + 1
            if blocks is not None and (used > blocks or used + remaining < blocks):
                continue
            yield from extend(prefix + [label], used - 1)

    yield from extend([], -1)


def minimal_hitting_sets(families: Iterable[Iterable[T]]) -> list[frozenset]:
    """
    Inclusion-minimal sets meeting every member of the family, smallest first.
    """
    members = [frozenset(family) for family in families]
    universe = sorted(set().union(*members), key=str)
    found: list[frozenset] = []
    for size in range(len(universe) + 1):
        for chosen in itertools.combinations(universe, size):
            candidate = frozenset(chosen)
            if any(earlier <= candidate for earlier in found):
                continue
            if all(candidate & member for member in members):
                found.append(candidate)
    return found


def make_sure_filepath_exists(filename: str) -> None:
    if os.path.isabs(filename):
        logger.debug(f"Path {filename} is absolute.")
        path = filename
    else:
        path = os.path.join(os.getcwd(), filename)
        logger.debug(f"Path {filename} is not absolute, using {path}.")
    if os.path.exists(path):
        logger.debug("Path already existed.")
        return
    dirname = os.path.dirname(path)
    if dirname and not os.path.exists(dirname):
        os.makedirs(dirname)
