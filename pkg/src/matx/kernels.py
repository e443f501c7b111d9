"""Bitset and graph kernels.

Two interchangeable backends implement the same functions:

* ``numba`` -- explicit loops compiled with ``@njit``;
* ``numpy`` -- vectorized array code, no compilation step.

The active backend is picked at import time from the ``MATX_KERNELS``
environment variable (``numba`` or ``numpy``).  When unset, numba is used if
it imports.  Both backends stay reachable through :func:`backend` so tests and
the benchmark can compare them.

Basis families are ``uint64`` arrays of bitmasks (bit ``i`` = element ``i``).
"""

import os
from contextlib import contextmanager
from types import SimpleNamespace

import numpy as np

try:
    import numba
    from numba import njit
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None

U1 = np.uint64(1)


# ---------------------------------------------------------------- numpy path

def _np_popcount(a):
    return np.bitwise_count(np.asarray(a, dtype=np.uint64)).astype(np.int64)


def _np_rank_table(bases, n):
    size = 1 << n
    indep = np.zeros(size, dtype=bool)
    indep[bases.astype(np.int64)] = True
    for b in range(n):
        v = indep.reshape(-1, 2, 1 << b)
        v[:, 0, :] |= v[:, 1, :]
    sizes = np.bitwise_count(np.arange(size, dtype=np.uint64)).astype(np.int8)
    rk = np.where(indep, sizes, np.int8(0))
    for b in range(n):
        v = rk.reshape(-1, 2, 1 << b)
        np.maximum(v[:, 1, :], v[:, 0, :], out=v[:, 1, :])
    return rk


def _np_rank_many(bases, masks):
    masks = np.asarray(masks, dtype=np.uint64)
    if len(bases) == 0 or len(masks) == 0:
        return np.zeros(len(masks), dtype=np.int64)
    out = np.empty(len(masks), dtype=np.int64)
    step = max(1, (1 << 22) // max(1, len(bases)))
    for s in range(0, len(masks), step):
        block = masks[s:s + step]
        out[s:s + step] = np.bitwise_count(block[:, None] & bases[None, :]).max(axis=1)
    return out


def _member(sorted_ints, values):
    pos = np.searchsorted(sorted_ints, values)
    pos = np.minimum(pos, len(sorted_ints) - 1)
    return sorted_ints[pos] == values, pos


def _np_exchange_violation(bases, sorted_ints, n, symmetric):
    m = len(bases)
    b1 = bases[:, None]
    b2 = bases[None, :]
    bad = np.zeros((m, m, n), dtype=bool)
    for e in range(n):
        be = np.uint64(1) << np.uint64(e)
        has_e = ((b1 & be) != 0) & ((b2 & be) == 0)
        if not has_e.any():
            continue
        ok = np.zeros((m, m), dtype=bool)
        for f in range(n):
            if f == e:
                continue
            bf = np.uint64(1) << np.uint64(f)
            cand = has_e & ((b2 & bf) != 0) & ((b1 & bf) == 0)
            if not cand.any():
                continue
            new1 = (b1 ^ be) | bf
            hit, _ = _member(sorted_ints, np.broadcast_to(new1, (m, m)))
            cand &= hit
            if symmetric:
                new2 = (b2 ^ bf) | be
                hit2, _ = _member(sorted_ints, np.broadcast_to(new2, (m, m)))
                cand &= hit2
            ok |= cand
        bad[:, :, e] = has_e & ~ok
    hits = np.argwhere(bad)
    if len(hits) == 0:
        return np.array([-1, -1, -1], dtype=np.int64)
    return hits[0].astype(np.int64)


def _np_basis_edges(bases, sorted_ints, sorted_to_canon, n):
    rows = []
    idx = np.arange(len(bases), dtype=np.int64)
    for e in range(n):
        be = np.uint64(1) << np.uint64(e)
        has_e = (bases & be) != 0
        for f in range(n):
            if f == e:
                continue
            bf = np.uint64(1) << np.uint64(f)
            sel = has_e & ((bases & bf) == 0)
            if not sel.any():
                continue
            new = (bases[sel] ^ be) | bf
            hit, pos = _member(sorted_ints, new)
            i = idx[sel][hit]
            j = sorted_to_canon[pos[hit]]
            keep = i < j
            rows.append(np.stack([i[keep], j[keep]], axis=1))
    if not rows:
        return np.zeros((0, 2), dtype=np.int64)
    return np.concatenate(rows).astype(np.int64)


def _np_component_labels(nv, edges):
    labels = np.arange(nv, dtype=np.int64)
    if len(edges) == 0:
        return labels
    u, v = edges[:, 0], edges[:, 1]
    while True:
        prev = labels.copy()
        lo = np.minimum(labels[u], labels[v])
        np.minimum.at(labels, u, lo)
        np.minimum.at(labels, v, lo)
        labels = labels[labels]
        if np.array_equal(labels, prev):
            return labels


def _np_bfs_levels(indptr, indices, source, nv):
    dist = np.full(nv, -1, dtype=np.int64)
    dist[source] = 0
    frontier = np.array([source], dtype=np.int64)
    level = 0
    while len(frontier):
        starts = indptr[frontier]
        lens = indptr[frontier + 1] - starts
        total = int(lens.sum())
        if total == 0:
            break
        offs = np.repeat(starts - np.cumsum(lens) + lens, lens) + np.arange(total)
        nbrs = np.unique(indices[offs])
        nbrs = nbrs[dist[nbrs] < 0]
        level += 1
        dist[nbrs] = level
        frontier = nbrs
    return dist


def _np_max_eccentricity(indptr, indices, members):
    nv = len(indptr) - 1
    best = 0
    for s in members:
        dist = _np_bfs_levels(indptr, indices, int(s), nv)
        best = max(best, int(dist.max()))
    return best


# ---------------------------------------------------------------- numba path

def _nb_popcount_scalar(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return np.int64((x * np.uint64(0x0101010101010101)) >> np.uint64(56))


def _nb_popcount(a):
    out = np.empty(a.shape[0], dtype=np.int64)
    for i in range(a.shape[0]):
        out[i] = _popcount_scalar(a[i])
    return out


def _nb_rank_table(bases, n):
    size = 1 << n
    indep = np.zeros(size, dtype=np.bool_)
    for b in bases:
        indep[np.int64(b)] = True
    for b in range(n):
        bit = 1 << b
        for m in range(size):
            if m & bit and indep[m]:
                indep[m ^ bit] = True
    rk = np.zeros(size, dtype=np.int8)
    for m in range(size):
        if indep[m]:
            rk[m] = _popcount_scalar(np.uint64(m))
    for b in range(n):
        bit = 1 << b
        for m in range(size):
            if m & bit and rk[m ^ bit] > rk[m]:
                rk[m] = rk[m ^ bit]
    return rk


def _nb_rank_many(bases, masks):
    out = np.zeros(masks.shape[0], dtype=np.int64)
    for k in range(masks.shape[0]):
        a = masks[k]
        cap = _popcount_scalar(a)
        if bases.shape[0]:
            cap = min(cap, _popcount_scalar(bases[0]))
        best = 0
        for b in bases:
            c = _popcount_scalar(b & a)
            if c > best:
                best = c
                if best == cap:
                    break
        out[k] = best
    return out


def _nb_contains(sorted_ints, v):
    p = np.searchsorted(sorted_ints, v)
    return p < sorted_ints.shape[0] and sorted_ints[p] == v


def _nb_exchange_violation(bases, sorted_ints, n, symmetric):
    m = bases.shape[0]
    out = np.full(3, -1, dtype=np.int64)
    for i in range(m):
        b1 = bases[i]
        for j in range(m):
            b2 = bases[j]
            d12 = b1 & ~b2
            d21 = b2 & ~b1
            for e in range(n):
                be = U1 << np.uint64(e)
                if not d12 & be:
                    continue
                found = False
                for f in range(n):
                    bf = U1 << np.uint64(f)
                    if not d21 & bf:
                        continue
                    if not _contains(sorted_ints, (b1 ^ be) | bf):
                        continue
                    if symmetric and not _contains(sorted_ints, (b2 ^ bf) | be):
                        continue
                    found = True
                    break
                if not found:
                    out[0] = i
                    out[1] = j
                    out[2] = e
                    return out
    return out


def _nb_basis_edges(bases, sorted_ints, sorted_to_canon, n):
    m = bases.shape[0]
    cap = 16
    buf = np.empty((cap, 2), dtype=np.int64)
    cnt = 0
    for i in range(m):
        b = bases[i]
        for e in range(n):
            be = U1 << np.uint64(e)
            if not b & be:
                continue
            for f in range(n):
                bf = U1 << np.uint64(f)
                if b & bf:
                    continue
                v = (b ^ be) | bf
                p = np.searchsorted(sorted_ints, v)
                if p < m and sorted_ints[p] == v:
                    j = sorted_to_canon[p]
                    if j > i:
                        if cnt == cap:
                            cap *= 2
                            nb = np.empty((cap, 2), dtype=np.int64)
                            nb[:cnt] = buf[:cnt]
                            buf = nb
                        buf[cnt, 0] = i
                        buf[cnt, 1] = j
                        cnt += 1
    return buf[:cnt].copy()


def _nb_find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def _nb_component_labels(nv, edges):
    parent = np.arange(nv, dtype=np.int64)
    for k in range(edges.shape[0]):
        a = _find(parent, edges[k, 0])
        b = _find(parent, edges[k, 1])
        if a < b:
            parent[b] = a
        elif b < a:
            parent[a] = b
    out = np.empty(nv, dtype=np.int64)
    for x in range(nv):
        out[x] = _find(parent, x)
    return out


def _nb_max_eccentricity(indptr, indices, members):
    nv = indptr.shape[0] - 1
    dist = np.full(nv, -1, dtype=np.int64)
    queue = np.empty(nv, dtype=np.int64)
    best = 0
    for s in members:
        dist[:] = -1
        dist[s] = 0
        head = 0
        tail = 1
        queue[0] = s
        while head < tail:
            x = queue[head]
            head += 1
            for p in range(indptr[x], indptr[x + 1]):
                y = indices[p]
                if dist[y] < 0:
                    dist[y] = dist[x] + 1
                    if dist[y] > best:
                        best = dist[y]
                    queue[tail] = y
                    tail += 1
    return best


if numba is not None:
    _popcount_scalar = njit(cache=True)(_nb_popcount_scalar)
    _contains = njit(cache=True)(_nb_contains)
    _find = njit(cache=True)(_nb_find)
    _numba_ns = SimpleNamespace(
        name="numba",
        popcount=njit(cache=True)(_nb_popcount),
        rank_table=njit(cache=True)(_nb_rank_table),
        rank_many=njit(cache=True)(_nb_rank_many),
        exchange_violation=njit(cache=True)(_nb_exchange_violation),
        basis_edges=njit(cache=True)(_nb_basis_edges),
        component_labels=njit(cache=True)(_nb_component_labels),
        max_eccentricity=njit(cache=True)(_nb_max_eccentricity),
    )
else:  # pragma: no cover
    _numba_ns = None

_numpy_ns = SimpleNamespace(
    name="numpy",
    popcount=_np_popcount,
    rank_table=_np_rank_table,
    rank_many=_np_rank_many,
    exchange_violation=_np_exchange_violation,
    basis_edges=_np_basis_edges,
    component_labels=_np_component_labels,
    max_eccentricity=_np_max_eccentricity,
)


def backend(name=None):
    """Return the kernel namespace for ``name`` (default: the active one)."""
    if name is None:
        return _active
    if name == "numba":
        if _numba_ns is None:
            raise RuntimeError("numba backend requested but numba is not importable")
        return _numba_ns
    if name == "numpy":
        return _numpy_ns
    raise ValueError(f"unknown kernel backend {name!r}")


def _select():
    want = os.environ.get("MATX_KERNELS", "").strip().lower()
    if want == "numpy" or (not want and _numba_ns is None):
        return _numpy_ns
    if want in ("", "numba"):
        return backend("numba")
    raise ValueError(f"MATX_KERNELS must be 'numba' or 'numpy', got {want!r}")


_active = _select()
BACKEND = _active.name


@contextmanager
def using(name):
    """Temporarily route the public wrappers through backend ``name``."""
    global _active
    prev, _active = _active, backend(name)
    try:
        yield _active
    finally:
        _active = prev


def _u64(a):
    return np.ascontiguousarray(a, dtype=np.uint64)


def popcount(a):
    return _active.popcount(_u64(a))


def rank_table(bases, n):
    """Rank of every subset of ``range(n)``, indexed by bitmask (int8)."""
    return _active.rank_table(_u64(bases), int(n))


def rank_many(bases, masks):
    return _active.rank_many(_u64(bases), _u64(masks))


def exchange_violation(bases, sorted_ints, n, symmetric=False):
    """First ``(i, j, e)`` in lexicographic order where the (symmetric) basis
    exchange fails for ``bases[i], bases[j]``; ``None`` if none."""
    out = _active.exchange_violation(_u64(bases), _u64(sorted_ints), int(n), bool(symmetric))
    if out[0] < 0:
        return None
    return int(out[0]), int(out[1]), int(out[2])


def basis_edges(bases, sorted_ints, sorted_to_canon, n):
    """Pairs ``(i, j)``, ``i < j``, of bases at symmetric difference 2, sorted."""
    edges = _active.basis_edges(
        _u64(bases), _u64(sorted_ints),
        np.ascontiguousarray(sorted_to_canon, dtype=np.int64), int(n),
    )
    if len(edges):
        edges = edges[np.lexsort((edges[:, 1], edges[:, 0]))]
    return edges


def component_labels(nv, edges):
    """Component label per vertex: the smallest vertex index in its component."""
    edges = np.ascontiguousarray(np.asarray(edges, dtype=np.int64).reshape(-1, 2))
    return _active.component_labels(int(nv), edges)


def max_eccentricity(indptr, indices, members):
    return int(_active.max_eccentricity(
        np.ascontiguousarray(indptr, dtype=np.int64),
        np.ascontiguousarray(indices, dtype=np.int64),
        np.ascontiguousarray(members, dtype=np.int64),
    ))
