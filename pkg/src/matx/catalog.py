"""Matroid catalogs: exhaustive small families and constructed examples.

Exhaustive mode builds every matroid of rank ``r`` on ``n`` elements up to
isomorphism by single-element extension: deleting the last element ``e``
leaves either a rank-``r`` matroid (``e`` not a coloop) or a rank-``r-1``
one plus a coloop.  Candidates are deduplicated by a canonical relabelling.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from . import kernels
from .errors import CapExceeded, MatroidError
from .matroid import Matroid, blow_up, elements, graphic, linear_gf, truncate, uniform

EXHAUSTIVE_MAX_R = 3
EXHAUSTIVE_MAX_N = 6
CANON_MAX_N = 8
GRAPH_MAX_VERTICES = 5
CONSTRUCTED_N_MAX = 8
MATRIX_LIMIT = 4096  # matrices [I | A] enumerated per (p, r, columns)


# ------------------------------------------------------------ canonical form

@lru_cache(maxsize=None)
def _block_perms(sizes: tuple[int, ...]) -> np.ndarray:
    """All rows ``q`` with ``q[i]`` the new slot of position ``i`` when only
    positions inside the same consecutive block of ``sizes`` may move."""
    out = np.zeros((1, 0), dtype=np.int64)
    start = 0
    for size in sizes:
        block = np.array(list(itertools.permutations(range(start, start + size))), dtype=np.int64)
        out = np.hstack([np.repeat(out, len(block), axis=0), np.tile(block, (len(out), 1))])
        start += size
    return out


def _class_perms(classes: list[list[int]]) -> np.ndarray:
    """Permutations ``perm[old] = new`` that keep each class in its own block
    of consecutive positions."""
    q = _block_perms(tuple(len(c) for c in classes))
    perms = np.empty_like(q)
    perms[:, [e for c in classes for e in c]] = q
    return perms


def canonical_form(M: Matroid) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """``(key, perm)``: the lexicographically least sorted mask tuple over
    relabellings, and a permutation attaining it.  Elements are first ordered
    by how many bases contain them; only relabellings preserving that order
    are tried, which keeps the form isomorphism-invariant."""
    n = M.n
    if n > CANON_MAX_N:
        raise CapExceeded(f"isomorphism dedup is limited to n <= {CANON_MAX_N}, got {n}")
    if n == 0:
        return tuple(M.bases), ()
    masks = np.array(M.bases, dtype=np.int64)
    bits = (masks[:, None] >> np.arange(n)) & 1          # (m, n)
    degree = bits.sum(axis=0)
    classes = [[e for e in range(n) if degree[e] == d] for d in sorted(set(degree.tolist()), reverse=True)]
    perms = _class_perms(classes)                          # (p, n)
    images = (bits[None, :, :] << perms[:, None, :]).sum(axis=2)   # (p, m)
    images.sort(axis=1)
    best = np.lexsort(images.T[::-1])[0]
    return tuple(int(x) for x in images[best]), tuple(int(x) for x in perms[best])


def relabel(M: Matroid, perm) -> Matroid:
    return Matroid._trusted(M.n, (sum(1 << perm[e] for e in elements(b)) for b in M.bases))


def canonical(M: Matroid) -> Matroid:
    return relabel(M, canonical_form(M)[1])


def dedupe(items):
    """Drop isomorphic repeats from ``(name, M)`` pairs, keeping first seen."""
    seen = set()
    out = []
    for name, M in items:
        key = (M.n, M.r, canonical_form(M)[0])
        if key not in seen:
            seen.add(key)
            out.append((name, M))
    return out


# ------------------------------------------------------------ exhaustive

def _is_matroid(M: Matroid) -> bool:
    return kernels.exchange_violation(M.array, M.sorted_ints, M.n) is None


@lru_cache(maxsize=None)
def _exhaustive(r: int, n: int) -> tuple[Matroid, ...]:
    if r < 0 or r > n:
        return ()
    if n == 0:
        return (Matroid(0, 0, (0,)),)
    e = 1 << (n - 1)
    found = {}
    for P in _exhaustive(r, n - 1):              # e is not a coloop
        if r == 0:
            cands = [Matroid(n, 0, (0,))]
        else:
            small = sorted({b & ~(1 << x) for b in P.bases for x in elements(b)}, key=elements)
            cands = []
            for size in range(len(small) + 1):
                for pick in itertools.combinations(small, size):
                    M = Matroid._trusted(n, P.bases + tuple(s | e for s in pick))
                    if size == 0 or _is_matroid(M):
                        cands.append(M)
        for M in cands:
            key, perm = canonical_form(M)
            if key not in found:
                found[key] = relabel(M, perm)
    for P in _exhaustive(r - 1, n - 1):          # e is a coloop
        M = Matroid._trusted(n, (b | e for b in P.bases))
        key, perm = canonical_form(M)
        if key not in found:
            found[key] = relabel(M, perm)
    return tuple(found[k] for k in sorted(found))


def exhaustive(r: int, n: int) -> list[Matroid]:
    """All matroids of rank ``r`` on ``n`` elements up to isomorphism, each in
    canonical labelling, ordered by canonical key."""
    if r > EXHAUSTIVE_MAX_R or n > EXHAUSTIVE_MAX_N:
        raise CapExceeded(
            f"exhaustive catalog limited to r <= {EXHAUSTIVE_MAX_R}, n <= {EXHAUSTIVE_MAX_N}")
    return list(_exhaustive(r, n))


# ------------------------------------------------------------ constructed

def _graphs(max_vertices: int):
    for v in range(1, max_vertices + 1):
        pairs = list(itertools.combinations(range(1, v + 1), 2))
        for bits in range(1 << len(pairs)):
            edges = [p for i, p in enumerate(pairs) if bits >> i & 1]
            if edges:
                yield v, edges


def _matrices(r: int, p: int, n_max: int):
    """``[I_r | A]`` over GF(p) for every ``A`` with up to ``n_max - r``
    columns, stopping when ``p**(r*cols)`` exceeds :data:`MATRIX_LIMIT`."""
    ident = [[int(i == j) for j in range(r)] for i in range(r)]
    for cols in range(1, n_max - r + 1):
        if p ** (r * cols) > MATRIX_LIMIT:
            break
        for flat in itertools.product(range(p), repeat=r * cols):
            yield [ident[i] + list(flat[i * cols:(i + 1) * cols]) for i in range(r)]


def constructed(r: int, n_max: int = CONSTRUCTED_N_MAX) -> list[tuple[str, Matroid]]:
    """Uniform, graphic (graphs on up to five vertices), small GF(2)/GF(3)
    matroids, single parallel extensions and truncations of rank ``r + 1``
    graphic matroids, up to isomorphism."""
    return list(_constructed(r, n_max))


@lru_cache(maxsize=None)
def _constructed(r: int, n_max: int):
    if n_max > CANON_MAX_N:
        raise CapExceeded(f"constructed catalog limited to n <= {CANON_MAX_N}")
    if r < 1:
        raise MatroidError("constructed catalog needs r >= 1")
    out = []
    for n in range(r, n_max + 1):
        out.append((f"U({r},{n})", uniform(r, n)))
    higher = []
    for v, edges in _graphs(GRAPH_MAX_VERTICES):
        if len(edges) > n_max:
            continue
        M = graphic(v, edges)
        name = "graphic:" + ",".join(f"{a}-{b}" for a, b in edges)
        if M.r == r:
            out.append((name, M))
        elif M.r == r + 1:
            higher.append((name, M))
    for p in (2, 3):
        for A in _matrices(r, p, n_max):
            body = ";".join("".join(map(str, row[r:])) for row in A)
            out.append((f"GF({p})[I|{body}]", linear_gf(A, p)))
    base = dedupe(out)
    extra = []
    for name, M in base:
        if M.n < n_max:
            extra.append((f"parallel({name},1)", blow_up(M, 1, 2)[0]))
    for name, M in dedupe(higher):
        extra.append((f"truncate({name})", truncate(M)))
    return tuple(dedupe(base + extra))


def catalog_generate(mode: str, r: int, n: int | None = None,
                     n_max: int | None = None) -> list[tuple[str, Matroid]]:
    """``(name, matroid)`` pairs.  Exhaustive mode takes either an exact ``n``
    or ``n_max`` (all sizes ``r..n_max``)."""
    if mode == "exhaustive":
        sizes = [n] if n is not None else range(r, (n_max if n_max is not None else EXHAUSTIVE_MAX_N) + 1)
        out = []
        for size in sizes:
            for i, M in enumerate(exhaustive(r, size)):
                out.append((f"r{r}n{size}#{i:02d}", M))
        return out
    if mode == "constructed":
        return constructed(r, n_max if n_max is not None else (n or CONSTRUCTED_N_MAX))
    raise MatroidError(f"unknown catalog mode {mode!r}")
