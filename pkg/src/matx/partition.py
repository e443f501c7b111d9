"""Partitioning a ground set into disjoint bases.

Two independent routes decide whether ``M`` is a k-matroid:

* :func:`partition_into_bases` -- shortest augmenting paths in the exchange
  digraph of ``k`` copies of ``M`` (matroid partitioning), constructive;
* :func:`violating_set` -- exhaustive search for ``A`` with ``k*r(A) < |A|``
  over all subsets, using the rank table kernel.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import CapExceeded, NotABasis, NotKMatroid
from .matroid import Matroid, elements, fmt_set, rank, to_mask

VIOLATION_CAP = 20


@dataclass(frozen=True)
class BasePartition:
    blocks: tuple[int, ...]
    matroid: Matroid | None = field(default=None, compare=False, repr=False)

    @property
    def k(self) -> int:
        return len(self.blocks)

    def __str__(self):
        return " | ".join(fmt_set(b) for b in self.blocks)


@dataclass(frozen=True)
class UnionViolation:
    subset: int
    k: int
    rank: int

    def __str__(self):
        return f"A={fmt_set(self.subset)}: {self.k}*r(A)={self.k * self.rank} < |A|={self.subset.bit_count()}"


def _augment(M: Matroid, sets: list[int], owner: dict, s: int):
    """Shortest augmenting path inserting ``s``; returns the new ``sets`` or,
    when no path exists, the set of elements reachable from ``s``."""
    k = len(sets)
    parent = {s: None}
    queue = deque([s])
    while queue:
        x = queue.popleft()
        bx = 1 << x
        here = owner.get(x)
        sink = next((i for i in range(k) if i != here and M.is_independent(sets[i] | bx)), None)
        if sink is not None:
            new = list(sets)
            new[sink] |= bx
            while parent[x] is not None:
                prev, i = parent[x]
                new[i] = new[i] & ~bx | (1 << prev)
                x, bx = prev, 1 << prev
            return new
        for i in range(k):
            if i == here:
                continue
            for y in elements(sets[i]):
                if y in parent:
                    continue
                if M.is_independent(sets[i] & ~(1 << y) | bx):
                    parent[y] = (x, i)
                    queue.append(y)
    return sum(1 << y for y in parent)


def _partition(M: Matroid, k: int, ground: int):
    """``(blocks, None)`` on success, ``(None, reachable_set)`` when an
    augmentation fails, ``(None, None)`` on a plain size mismatch."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if ground.bit_count() != k * M.r:
        return None, None
    if k == 0:
        return (), None
    sets = [0] * k
    owner: dict = {}
    for s in elements(ground):
        res = _augment(M, sets, owner, s)
        if isinstance(res, int):
            return None, res
        sets = res
        owner = {x: i for i, b in enumerate(sets) for x in elements(b)}
    return tuple(sorted(sets, key=elements)), None


def partition_into_bases(M: Matroid, k: int, within=None) -> BasePartition | None:
    """Partition of ``within`` (default: the whole ground set) into ``k``
    disjoint bases of ``M``, or ``None``.  Blocks are sorted lexicographically."""
    ground = M.ground if within is None else to_mask(within, M.n)
    blocks, _ = _partition(M, k, ground)
    return None if blocks is None else BasePartition(blocks, M)


def union_certificate(M: Matroid, k: int) -> UnionViolation | None:
    """A violating set found by the augmenting search (not minimal)."""
    if M.loops:
        loop = M.loops & -M.loops
        return UnionViolation(loop, k, 0)
    ground = M.ground
    sets = [0] * k
    owner: dict = {}
    for s in elements(ground):
        res = _augment(M, sets, owner, s)
        if isinstance(res, int):
            return UnionViolation(res, k, rank(M, res))
        sets = res
        owner = {x: i for i, b in enumerate(sets) for x in elements(b)}
    return None


def is_k_matroid(M: Matroid, k: int) -> bool:
    if k < 1:
        raise ValueError("k must be >= 1")
    if k * M.r != M.n or M.loops:
        return False
    return partition_into_bases(M, k) is not None


def violating_set(M: Matroid, k: int, cap: int = VIOLATION_CAP) -> UnionViolation | None:
    """Smallest (then lexicographically first) ``A`` with ``k*r(A) < |A|``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if M.n > cap:
        raise CapExceeded(f"exhaustive subset check limited to n <= {cap}, got {M.n}")
    rt = M.rank_table.astype(np.int64)
    sizes = np.bitwise_count(np.arange(1 << M.n, dtype=np.uint64)).astype(np.int64)
    bad = k * rt < sizes
    if not bad.any():
        return None
    smallest = sizes[bad].min()
    cands = np.flatnonzero(bad & (sizes == smallest))
    best = min((int(c) for c in cands), key=elements)
    return UnionViolation(best, k, int(rt[best]))


def iter_partitions(M: Matroid, k: int, within=None):
    """Every partition of ``within`` into ``k`` bases, each once, as sorted
    block tuples; the block holding the lowest uncovered element is chosen
    first (exhaustive backtracking)."""
    ground = M.ground if within is None else to_mask(within, M.n)
    if ground.bit_count() != k * M.r:
        return
    by_elem = [[b for b in M.bases if b >> e & 1] for e in range(M.n)]
    chosen: list[int] = []

    def rec(rest):
        if not rest:
            yield tuple(chosen)
            return
        low = (rest & -rest).bit_length() - 1
        for b in by_elem[low]:
            if b & rest == b:
                chosen.append(b)
                yield from rec(rest & ~b)
                chosen.pop()

    if k == 0:
        if ground == 0:
            yield ()
        return
    yield from rec(ground)


def _require_basis(M: Matroid, b: int):
    if b not in M.basis_set:
        raise NotABasis(f"{fmt_set(b)} is not a basis")


def is_complementary(M: Matroid, basis, k: int, check: bool = True) -> bool:
    """Whether ``E - B`` splits into ``k - 1`` disjoint bases."""
    b = to_mask(basis, M.n)
    _require_basis(M, b)
    if check and not is_k_matroid(M, k):
        raise NotKMatroid(f"matroid is not a {k}-matroid")
    blocks, _ = _partition(M, k - 1, M.ground & ~b)
    return blocks is not None


@lru_cache(maxsize=512)
def complementary_bases(M: Matroid, k: int) -> tuple[int, ...]:
    """Complementary bases in canonical basis order (cached per process)."""
    if not is_k_matroid(M, k):
        raise NotKMatroid(f"matroid is not a {k}-matroid")
    return tuple(b for b in M.bases if is_complementary(M, b, k, check=False))
