"""Basis graph, complementary basis graph and k-base graph of a matroid."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import kernels
from .errors import MatroidError, NotKMatroid, VertexCountCapExceeded
from .matroid import Matroid, digest
from .partition import complementary_bases, is_k_matroid, iter_partitions

VERTEX_CAP = 10**6
DIAMETER_LIMIT = 20_000

KINDS = ("basis", "complementary", "kbase", "kbase_modified")


@dataclass(frozen=True, eq=False)
class ExchangeGraph:
    """``vertices`` are basis masks, or for ``kind == "kbase"`` partitions as
    sorted tuples of block masks.  ``edges`` is an ``(m, 2)`` array of vertex
    index pairs ``i < j`` in lexicographic order."""

    kind: str
    vertices: tuple
    edges: np.ndarray
    provenance: dict = field(default_factory=dict)

    @property
    def edge_list(self) -> list[tuple[int, int]]:
        return [(int(a), int(b)) for a, b in self.edges]


@dataclass(frozen=True)
class GraphSummary:
    component_count: int
    component_sizes: tuple[int, ...]
    diameter_of_largest: int | None
    is_connected: bool
    diameter_skipped: bool = False


def _check_cap(count, cap):
    if count > cap:
        raise VertexCountCapExceeded(f"{count} vertices exceed cap {cap}")


def _edge_array(pairs) -> np.ndarray:
    arr = np.array(sorted(pairs), dtype=np.int64).reshape(-1, 2)
    return arr


def basis_graph(M: Matroid, cap: int = VERTEX_CAP) -> ExchangeGraph:
    _check_cap(len(M.bases), cap)
    edges = kernels.basis_edges(M.array, M.sorted_ints, M.sorted_to_canon, M.n)
    return ExchangeGraph("basis", M.bases, edges, {"matroid": digest(M), "k": None})


def complementary_basis_graph(M: Matroid, k: int, modified: bool = False,
                              cap: int = VERTEX_CAP) -> ExchangeGraph:
    """Basis graph induced on complementary bases; with ``modified`` (only for
    ``k == 2``) each basis is also joined to its complement."""
    if modified and k != 2:
        raise MatroidError("the modified complementary graph is defined for k = 2 only")
    verts = complementary_bases(M, k)
    _check_cap(len(verts), cap)
    pos = {b: i for i, b in enumerate(verts)}
    full = kernels.basis_edges(M.array, M.sorted_ints, M.sorted_to_canon, M.n)
    pairs = set()
    for a, b in full:
        ba, bb = M.bases[a], M.bases[b]
        if ba in pos and bb in pos:
            i, j = pos[ba], pos[bb]
            pairs.add((min(i, j), max(i, j)))
    if modified:
        for b, i in pos.items():
            j = pos[M.ground & ~b]
            if i != j:
                pairs.add((min(i, j), max(i, j)))
    kind = "kbase_modified" if modified else "complementary"
    return ExchangeGraph(kind, verts, _edge_array(pairs), {"matroid": digest(M), "k": k})


def k_base_graph(M: Matroid, k: int, allow_k2: bool = False,
                 cap: int = VERTEX_CAP) -> ExchangeGraph:
    """Graph on partitions into ``k`` bases, adjacent when sharing a block.
    ``k = 2`` needs ``allow_k2``."""
    if k < 2 or (k == 2 and not allow_k2):
        raise MatroidError("the k-base graph is defined for k >= 3 (k = 2 needs allow_k2)")
    if not is_k_matroid(M, k):
        raise NotKMatroid(f"matroid is not a {k}-matroid")
    verts = []
    for part in iter_partitions(M, k):
        verts.append(part)
        _check_cap(len(verts), cap)
    by_block = defaultdict(list)
    for i, part in enumerate(verts):
        for b in part:
            by_block[b].append(i)
    pairs = set()
    for members in by_block.values():
        pairs.update(combinations(members, 2))
    return ExchangeGraph("kbase", tuple(verts), _edge_array(pairs), {"matroid": digest(M), "k": k})


def csr(nv: int, edges: np.ndarray):
    if len(edges) == 0:
        return np.zeros(nv + 1, dtype=np.int64), np.zeros(0, dtype=np.int64)
    src = np.concatenate([edges[:, 0], edges[:, 1]])
    dst = np.concatenate([edges[:, 1], edges[:, 0]])
    order = np.lexsort((dst, src))
    src, dst = src[order], dst[order]
    indptr = np.zeros(nv + 1, dtype=np.int64)
    np.add.at(indptr, src + 1, 1)
    return np.cumsum(indptr), dst


def analyze(G: ExchangeGraph, diameter_limit: int = DIAMETER_LIMIT) -> GraphSummary:
    nv = len(G.vertices)
    if nv == 0:
        return GraphSummary(0, (), 0, True)
    labels = kernels.component_labels(nv, G.edges)
    roots, counts = np.unique(labels, return_counts=True)
    order = sorted(range(len(roots)), key=lambda t: (-counts[t], roots[t]))
    sizes = tuple(int(counts[t]) for t in order)
    largest = roots[order[0]]
    members = np.flatnonzero(labels == largest)
    if len(members) > diameter_limit:
        return GraphSummary(len(roots), sizes, None, len(roots) == 1, diameter_skipped=True)
    indptr, indices = csr(nv, G.edges)
    diam = kernels.max_eccentricity(indptr, indices, members)
    return GraphSummary(len(roots), sizes, diam, len(roots) == 1)
