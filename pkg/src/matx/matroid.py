"""Matroids stored as explicit basis families over bitmasks.

Elements are 0-based integers; a subset of the ground set is an ``int``
bitmask (bit ``i`` set means element ``i`` is in the set).  Functions that take
a subset also accept any iterable of element indices.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import (
    DependentContraction,
    ElementNotExchangeable,
    ElementOutOfRange,
    EmptyFamily,
    EmptyGraph,
    ExchangeAxiomFailure,
    GroundSetTooLarge,
    InvalidRank,
    MatroidError,
    NonPrimeModulus,
    NotABasis,
    OverlappingArguments,
    RankCollapse,
    UnequalCardinality,
)

MAX_GROUND = 64

# independent-set tables are materialised only below this many entries
_INDEP_TABLE_LIMIT = 1 << 21


def elements(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def to_mask(items, n: int | None = None) -> int:
    """Bitmask of ``items`` (an int mask is passed through)."""
    if isinstance(items, (int, np.integer)):
        mask = int(items)
        if mask < 0 or (n is not None and mask >> n):
            raise ElementOutOfRange(f"subset mask {mask:#x} outside ground set of size {n}")
        return mask
    mask = 0
    for e in items:
        e = int(e)
        if e < 0 or (n is not None and e >= n):
            raise ElementOutOfRange(f"element {e} outside ground set of size {n}")
        mask |= 1 << e
    return mask


def fmt_set(mask: int, one_based: bool = True) -> str:
    off = 1 if one_based else 0
    return "{" + ",".join(str(e + off) for e in elements(mask)) + "}"


@dataclass(frozen=True)
class Matroid:
    """Immutable matroid: ground set ``range(n)``, rank ``r``, and the basis
    masks in lexicographic order of their sorted element tuples."""

    n: int
    r: int
    bases: tuple[int, ...]

    @classmethod
    def _trusted(cls, n: int, masks: Iterable[int]) -> "Matroid":
        if n > MAX_GROUND:
            raise GroundSetTooLarge(f"ground set of size {n} exceeds cap {MAX_GROUND}")
        uniq = sorted(set(masks), key=elements)
        if not uniq:
            raise EmptyFamily()
        return cls(n, uniq[0].bit_count(), tuple(uniq))

    def __repr__(self):
        return f"Matroid(n={self.n}, r={self.r}, bases={len(self.bases)})"

    @cached_property
    def ground(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def basis_set(self) -> frozenset:
        return frozenset(self.bases)

    @cached_property
    def index(self) -> dict:
        return {b: i for i, b in enumerate(self.bases)}

    @cached_property
    def array(self) -> np.ndarray:
        return np.array(self.bases, dtype=np.uint64)

    @cached_property
    def sorted_ints(self) -> np.ndarray:
        return np.sort(self.array)

    @cached_property
    def sorted_to_canon(self) -> np.ndarray:
        return np.argsort(self.array, kind="stable").astype(np.int64)

    @cached_property
    def _independent(self):
        if len(self.bases) << self.r > _INDEP_TABLE_LIMIT:
            return None
        out = set()
        for b in self.bases:
            elems = elements(b)
            for k in range(len(elems) + 1):
                for sub in itertools.combinations(elems, k):
                    out.add(sum(1 << e for e in sub))
        return frozenset(out)

    @cached_property
    def loops(self) -> int:
        covered = 0
        for b in self.bases:
            covered |= b
        return self.ground & ~covered

    @cached_property
    def coloops(self) -> int:
        common = self.ground
        for b in self.bases:
            common &= b
        return common

    @cached_property
    def rank_table(self) -> np.ndarray:
        """Rank of every subset by bitmask; only for ground sets up to 24."""
        if self.n > 24:
            raise GroundSetTooLarge("rank table needs n <= 24")
        return kernels.rank_table(self.array, self.n)

    def is_basis(self, mask: int) -> bool:
        return mask in self.basis_set

    def is_independent(self, mask: int) -> bool:
        table = self._independent
        if table is not None:
            return mask in table
        return any(b & mask == mask for b in self.bases)

    def rank(self, subset) -> int:
        return rank(self, subset)


@dataclass(frozen=True)
class ExchangeWitness:
    e: int
    f: int
    b1: int  # (B1 \ e) + f
    b2: int  # (B2 \ f) + e


@dataclass(frozen=True)
class MatroidMorphism:
    """Ground-set map ``mapping[x] = psi(x)`` from ``source`` to ``target``."""

    source: Matroid
    target: Matroid
    mapping: tuple[int, ...]

    def __post_init__(self):
        if len(self.mapping) != self.source.n:
            raise MatroidError("morphism map must be total on the source ground set")
        if any(not 0 <= y < self.target.n for y in self.mapping):
            raise ElementOutOfRange("morphism image outside target ground set")
        if self.source.r != self.target.r:
            raise MatroidError("morphism requires matroids of equal rank")

    def image(self, mask: int) -> int:
        out = 0
        for x in elements(mask):
            out |= 1 << self.mapping[x]
        return out

    @cached_property
    def fibres(self) -> tuple[int, ...]:
        pre = [0] * self.target.n
        for x, y in enumerate(self.mapping):
            pre[y] |= 1 << x
        return tuple(pre)

    def verify(self):
        return verify_morphism(self.source, self.target, self.mapping)


@dataclass(frozen=True)
class MorphismCheck:
    ok: bool
    basis: int | None = None   # target basis B'
    choice: int | None = None  # representative choice that is not a source basis

    def __bool__(self):
        return self.ok


# ------------------------------------------------------------ construction

def validate_bases(n: int, family: Iterable) -> Matroid:
    """Build a matroid from a basis family, checking the exchange axiom."""
    if n < 0:
        raise InvalidRank("ground size must be nonnegative")
    if n > MAX_GROUND:
        raise GroundSetTooLarge(f"ground set of size {n} exceeds cap {MAX_GROUND}")
    masks = [to_mask(s, n) for s in family]
    if not masks:
        raise EmptyFamily()
    size = masks[0].bit_count()
    for m in masks[1:]:
        if m.bit_count() != size:
            raise UnequalCardinality(masks[0], m)
    M = Matroid._trusted(n, masks)
    hit = kernels.exchange_violation(M.array, M.sorted_ints, n)
    if hit is not None:
        i, j, e = hit
        raise ExchangeAxiomFailure(M.bases[i], M.bases[j], e)
    return M


def uniform(r: int, n: int) -> Matroid:
    if not 0 <= r <= n:
        raise InvalidRank(f"uniform matroid needs 0 <= r <= n, got r={r}, n={n}")
    if n > MAX_GROUND:
        raise GroundSetTooLarge(f"ground set of size {n} exceeds cap {MAX_GROUND}")
    return Matroid._trusted(n, (sum(1 << e for e in c) for c in itertools.combinations(range(n), r)))


def graphic(vertex_count: int, edge_list: Sequence[tuple[int, int]]) -> Matroid:
    """Cycle matroid; vertices are numbered ``1..vertex_count``, element ``i``
    is ``edge_list[i]``.  Bases are the maximal spanning forests."""
    if vertex_count < 1 or not edge_list:
        raise EmptyGraph("graph needs at least one vertex and one edge")
    m = len(edge_list)
    if m > MAX_GROUND:
        raise GroundSetTooLarge(f"{m} edges exceed cap {MAX_GROUND}")
    for u, v in edge_list:
        if not (1 <= u <= vertex_count and 1 <= v <= vertex_count):
            raise ElementOutOfRange(f"edge {u}-{v} uses a vertex outside 1..{vertex_count}")
    edges = [(u - 1, v - 1) for u, v in edge_list]

    def components(sel):
        parent = list(range(vertex_count))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        merged = 0
        for i in sel:
            a, b = find(edges[i][0]), find(edges[i][1])
            if a == b:
                return None
            parent[b] = a
            merged += 1
        return merged

    rank_ = 0
    parent = list(range(vertex_count))
    for u, v in edges:
        while parent[u] != u:
            u = parent[u]
        while parent[v] != v:
            v = parent[v]
        if u != v:
            parent[v] = u
            rank_ += 1
    found = [
        sum(1 << i for i in c)
        for c in itertools.combinations(range(m), rank_)
        if components(c) is not None
    ]
    return Matroid._trusted(m, found)


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, int(p ** 0.5) + 1))


def gf_rank(rows: Sequence[Sequence[int]], p: int) -> int:
    mat = [[x % p for x in row] for row in rows]
    rank_, ncols = 0, len(mat[0]) if mat else 0
    for c in range(ncols):
        piv = next((i for i in range(rank_, len(mat)) if mat[i][c]), None)
        if piv is None:
            continue
        mat[rank_], mat[piv] = mat[piv], mat[rank_]
        inv = pow(mat[rank_][c], p - 2, p)
        mat[rank_] = [x * inv % p for x in mat[rank_]]
        for i in range(len(mat)):
            if i != rank_ and mat[i][c]:
                f = mat[i][c]
                mat[i] = [(a - f * b) % p for a, b in zip(mat[i], mat[rank_])]
        rank_ += 1
    return rank_


def linear_gf(matrix: Sequence[Sequence[int]], p: int) -> Matroid:
    """Column matroid of ``matrix`` over GF(p)."""
    if not _is_prime(p):
        raise NonPrimeModulus(f"{p} is not prime")
    if not matrix or not matrix[0]:
        raise InvalidRank("matrix must have at least one row and one column")
    n = len(matrix[0])
    if any(len(row) != n for row in matrix):
        raise MatroidError("matrix rows have different lengths")
    if n > MAX_GROUND:
        raise GroundSetTooLarge(f"{n} columns exceed cap {MAX_GROUND}")
    full = gf_rank(matrix, p)
    cols = [[row[c] for row in matrix] for c in range(n)]
    found = [
        sum(1 << i for i in c)
        for c in itertools.combinations(range(n), full)
        if gf_rank([cols[i] for i in c], p) == full
    ]
    return Matroid._trusted(n, found)


def truncate(M: Matroid) -> Matroid:
    """Truncation to rank ``r - 1`` (bases: independent sets of size r-1)."""
    if M.r == 0:
        raise InvalidRank("cannot truncate a rank-0 matroid")
    return Matroid._trusted(M.n, (b & ~(1 << e) for b in M.bases for e in elements(b)))


# ------------------------------------------------------------ rank & minors

def rank(M: Matroid, subset) -> int:
    a = to_mask(subset, M.n)
    cap = min(a.bit_count(), M.r)
    best = 0
    for b in M.bases:
        c = (a & b).bit_count()
        if c > best:
            best = c
            if best == cap:
                break
    return best


def _relabel(mask: int, keep: Sequence[int]) -> int:
    out = 0
    for new, old in enumerate(keep):
        if mask >> old & 1:
            out |= 1 << new
    return out


def restrict(M: Matroid, keep) -> tuple[Matroid, tuple[int, ...]]:
    """Restriction ``M|S`` (rank may drop).  Returns the matroid on
    ``range(|S|)`` and ``labels`` with ``labels[new] = old``."""
    s = to_mask(keep, M.n)
    labels = elements(s)
    top = max((b & s).bit_count() for b in M.bases)
    masks = {_relabel(b & s, labels) for b in M.bases if (b & s).bit_count() == top}
    return Matroid._trusted(len(labels), masks), labels


def minor(M: Matroid, delete=0, contract=0) -> tuple[Matroid, tuple[int, ...]]:
    """``M \\ D / C`` on ``E - (D | C)``, re-indexed in increasing order.

    Returns ``(minor, labels)`` with ``labels[new] = old``."""
    d = to_mask(delete, M.n)
    c = to_mask(contract, M.n)
    if d & c:
        raise OverlappingArguments("deleted and contracted sets intersect")
    if rank(M, c) != c.bit_count():
        raise DependentContraction(f"contracted set {fmt_set(c)} is dependent")
    labels = elements(M.ground & ~(d | c))
    masks = [_relabel(b & ~c, labels) for b in M.bases if b & c == c and not b & d]
    if not masks:
        raise RankCollapse("no basis survives the deletion")
    return Matroid._trusted(len(labels), masks), labels


def blow_up(M: Matroid, subset, k: int) -> tuple[Matroid, MatroidMorphism]:
    """Replace each element of ``subset`` by ``k`` parallel copies.

    Copies of element ``e`` are consecutive in the new ground set.  Returns the
    blown-up matroid and the collapsing morphism onto ``M``."""
    if k < 1:
        raise InvalidRank("blow-up multiplicity must be >= 1")
    a = to_mask(subset, M.n)
    mapping = []
    copies = []
    for e in range(M.n):
        mult = k if a >> e & 1 else 1
        copies.append(list(range(len(mapping), len(mapping) + mult)))
        mapping.extend([e] * mult)
    if len(mapping) > MAX_GROUND:
        raise GroundSetTooLarge(f"blow-up has {len(mapping)} elements, cap is {MAX_GROUND}")
    masks = []
    for b in M.bases:
        for pick in itertools.product(*(copies[e] for e in elements(b))):
            masks.append(sum(1 << x for x in pick))
    big = Matroid._trusted(len(mapping), masks)
    return big, MatroidMorphism(big, M, tuple(mapping))


# ------------------------------------------------------------ morphisms & exchange

def verify_morphism(M: Matroid, M2: Matroid, psi: Sequence[int]) -> MorphismCheck:
    """Check that every representative choice over every basis of ``M2`` is a
    basis of ``M``; on failure report the first offending choice."""
    if len(psi) != M.n:
        raise MatroidError("morphism map must be total on the source ground set")
    if M.r != M2.r:
        raise MatroidError("morphism requires matroids of equal rank")
    pre = [[] for _ in range(M2.n)]
    for x, y in enumerate(psi):
        if not 0 <= y < M2.n:
            raise ElementOutOfRange(f"image {y} outside target ground set")
        pre[y].append(x)
    for b in M2.bases:
        for pick in itertools.product(*(pre[y] for y in elements(b))):
            choice = sum(1 << x for x in pick)
            if choice not in M.basis_set:
                return MorphismCheck(False, b, choice)
    return MorphismCheck(True)


def symmetric_exchange_partners(M: Matroid, b1, b2, e: int) -> list[ExchangeWitness]:
    """All ``f`` in ``B2 - B1`` such that ``B1 - e + f`` and ``B2 - f + e`` are
    both bases, in increasing order of ``f``."""
    b1 = to_mask(b1, M.n)
    b2 = to_mask(b2, M.n)
    for b in (b1, b2):
        if b not in M.basis_set:
            raise NotABasis(f"{fmt_set(b)} is not a basis")
    if not (b1 >> e & 1) or b2 >> e & 1:
        raise MatroidError(f"element {e} is not in B1 \\ B2")
    out = []
    for f in elements(b2 & ~b1):
        n1 = b1 ^ (1 << e) | (1 << f)
        n2 = b2 ^ (1 << f) | (1 << e)
        if n1 in M.basis_set and n2 in M.basis_set:
            out.append(ExchangeWitness(e, f, n1, n2))
    if not out:
        raise ElementNotExchangeable(
            f"no symmetric exchange for e={e} between {fmt_set(b1)} and {fmt_set(b2)}"
        )
    return out


def symmetric_exchange_violation(M: Matroid):
    """First ``(B1, B2, e)`` violating symmetric exchange, or ``None``."""
    hit = kernels.exchange_violation(M.array, M.sorted_ints, M.n, symmetric=True)
    if hit is None:
        return None
    i, j, e = hit
    return M.bases[i], M.bases[j], e


def digest(M: Matroid) -> str:
    """Short content hash of the canonical basis list."""
    text = f"{M.n} {M.r} " + " ".join(f"{b:x}" for b in M.bases)
    return hashlib.sha256(text.encode()).hexdigest()[:16]
