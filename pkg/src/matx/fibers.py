"""Fibers of the toric map of a matroid and their connectivity under moves.

A degree-``d`` state is a multiset (or, for ``W3``, a sequence) of ``d``
bases; its union vector counts how many entries contain each element.  A
fiber is the set of all states sharing a union vector.  Three move sets act
on fibers:

``W1``  replace two entries by any two bases with the same multiset union;
``W2``  replace two entries by the result of a symmetric exchange;
``W3``  symmetric exchange between adjacent entries of a sequence, the
        exchanged pair written back in either order (``strict=True`` keeps
        only the in-place order).

Internally states are tuples of basis indices into ``M.bases``; the public
:class:`BaseMultiset` / :class:`BaseSequence` carry basis masks.
"""

from __future__ import annotations

import multiprocessing
from collections import defaultdict, deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement, permutations

from .errors import EntryNotMappedToBasis, FiberCapExceeded, LiftFailure, MatroidError, NotABasis
from .matroid import Matroid, MatroidMorphism, digest, elements, fmt_set, to_mask

W1, W2, W3 = "w1", "w2", "w3"
VARIANTS = (W1, W2, W3)
FIBER_CAP = 10**6


@dataclass(frozen=True)
class BaseMultiset:
    """Entries are basis masks sorted in the matroid's canonical basis order."""

    entries: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.entries)

    def union_vector(self, n: int) -> tuple[int, ...]:
        return union_vector(self.entries, n)

    def __str__(self):
        return "{" + " ".join(fmt_set(b) for b in self.entries) + "}"


@dataclass(frozen=True)
class BaseSequence(BaseMultiset):
    def __str__(self):
        return "(" + " ".join(fmt_set(b) for b in self.entries) + ")"


@dataclass(frozen=True)
class Move:
    """Entries at positions ``i < j`` (``old``) become ``new``.  For exchange
    moves ``e`` left entry ``i`` and ``f`` left entry ``j``."""

    variant: str
    i: int
    j: int
    old: tuple[int, int]
    new: tuple[int, int]
    e: int | None = None
    f: int | None = None


@dataclass(frozen=True)
class Counterexample:
    u: tuple[int, ...]
    reached: BaseMultiset
    unreached: BaseMultiset


@dataclass
class FiberReport:
    matroid: str
    degree: int
    variant: str
    fibers_total: int = 0
    fibers_connected: int = 0
    states_total: int = 0
    counterexamples: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.fibers_connected == self.fibers_total


def union_vector(entries, n: int) -> tuple[int, ...]:
    u = [0] * n
    for b in entries:
        for e in elements(b):
            u[e] += 1
    return tuple(u)


def multiset(M: Matroid, entries) -> BaseMultiset:
    masks = [_basis_mask(M, b) for b in entries]
    return BaseMultiset(tuple(sorted(masks, key=M.index.__getitem__)))


def sequence(M: Matroid, entries) -> BaseSequence:
    return BaseSequence(tuple(_basis_mask(M, b) for b in entries))


def _basis_mask(M, b):
    mask = to_mask(b, M.n)
    if mask not in M.basis_set:
        raise NotABasis(f"{fmt_set(mask)} is not a basis")
    return mask


# ------------------------------------------------------------ move tables

class _Moves:
    """Per-matroid caches of pairwise moves between basis indices."""

    def __init__(self, M: Matroid, strict: bool = False):
        self.M = M
        self.strict = strict
        self._sym: dict = {}
        self._w1: dict = {}

    def sym(self, a: int, b: int):
        """Symmetric exchanges ``(e, f, a2, b2)`` of bases ``a, b``."""
        key = (a, b)
        hit = self._sym.get(key)
        if hit is None:
            M = self.M
            ba, bb = M.bases[a], M.bases[b]
            hit = []
            for e in elements(ba & ~bb):
                for f in elements(bb & ~ba):
                    n1 = ba ^ (1 << e) | (1 << f)
                    n2 = bb ^ (1 << f) | (1 << e)
                    i1, i2 = M.index.get(n1), M.index.get(n2)
                    if i1 is not None and i2 is not None:
                        hit.append((e, f, i1, i2))
            self._sym[key] = hit
        return hit

    def same_union(self, a: int, b: int):
        """Unordered pairs ``(c, d)`` with ``chi_c + chi_d == chi_a + chi_b``."""
        key = (a, b) if a <= b else (b, a)
        hit = self._w1.get(key)
        if hit is None:
            M = self.M
            ba, bb = M.bases[a], M.bases[b]
            twos, diff = ba & bb, ba ^ bb
            free = elements(diff)
            seen = set()
            hit = []
            for pick in combinations(free, len(free) // 2):
                s = sum(1 << e for e in pick)
                c, d = M.index.get(twos | s), M.index.get(twos | (diff ^ s))
                if c is None or d is None:
                    continue
                pair = (c, d) if c <= d else (d, c)
                if pair not in seen:
                    seen.add(pair)
                    hit.append(pair)
            hit.sort()
            self._w1[key] = hit
        return hit

    def neighbors(self, state: tuple, variant: str):
        """``(move, new_state)`` pairs; self-loops dropped, first move kept."""
        out = {}
        bases = self.M.bases
        if variant == W3:
            for i in range(len(state) - 1):
                a, b = state[i], state[i + 1]
                if a == b:
                    continue
                for e, f, c, d in self.sym(a, b):
                    orders = ((c, d),) if self.strict else ((c, d), (d, c))
                    for x, y in orders:
                        new = state[:i] + (x, y) + state[i + 2:]
                        if new != state and new not in out:
                            out[new] = Move(W3, i, i + 1, (bases[a], bases[b]),
                                            (bases[x], bases[y]), e, f)
            return list(out.items())
        if variant not in (W1, W2):
            raise MatroidError(f"unknown variant {variant!r}")
        seen_pairs = set()
        for i, j in combinations(range(len(state)), 2):
            a, b = state[i], state[j]
            if (a, b) in seen_pairs:
                continue
            seen_pairs.add((a, b))
            rest = state[:i] + state[i + 1:j] + state[j + 1:]
            if variant == W2:
                if a == b:
                    continue
                repl = [((c, d), e, f) for e, f, c, d in self.sym(a, b)]
            else:
                repl = [((c, d), None, None) for c, d in self.same_union(a, b)]
            for (c, d), e, f in repl:
                new = tuple(sorted(rest + (c, d)))
                if new != state and new not in out:
                    out[new] = Move(variant, i, j, (bases[a], bases[b]), (bases[c], bases[d]), e, f)
        return list(out.items())


def _to_idx(M: Matroid, state: BaseMultiset) -> tuple:
    try:
        idx = tuple(M.index[b] for b in state.entries)
    except KeyError as exc:
        raise NotABasis(f"{fmt_set(exc.args[0])} is not a basis") from None
    return idx if isinstance(state, BaseSequence) else tuple(sorted(idx))


def _from_idx(M: Matroid, idx: tuple, ordered: bool) -> BaseMultiset:
    entries = tuple(M.bases[i] for i in idx)
    return BaseSequence(entries) if ordered else BaseMultiset(entries)


def _as_state(M, s, variant):
    if isinstance(s, BaseMultiset):
        if variant == W3 and not isinstance(s, BaseSequence):
            return sequence(M, s.entries)
        if variant != W3 and isinstance(s, BaseSequence):
            return multiset(M, s.entries)
        return s
    return sequence(M, s) if variant == W3 else multiset(M, s)


# ------------------------------------------------------------ public operations

def neighbors(M: Matroid, state, variant: str = W2, strict: bool = False):
    """All states one move away, as ``(Move, state)`` pairs."""
    state = _as_state(M, state, variant)
    moves = _Moves(M, strict)
    return [(mv, _from_idx(M, new, variant == W3))
            for new, mv in moves.neighbors(_to_idx(M, state), variant)]


def apply_move(M: Matroid, state: BaseMultiset, move: Move) -> BaseMultiset:
    entries = list(state.entries)
    if not 0 <= move.i < move.j < len(entries):
        raise MatroidError("move positions out of range")
    if (entries[move.i], entries[move.j]) != move.old:
        raise MatroidError("move does not match the state")
    if union_vector(move.old, M.n) != union_vector(move.new, M.n):
        raise MatroidError("move changes the union vector")
    for b in move.new:
        if b not in M.basis_set:
            raise NotABasis(f"{fmt_set(b)} is not a basis")
    if move.e is not None:
        b1, b2 = move.old
        if (b1 ^ (1 << move.e) | (1 << move.f), b2 ^ (1 << move.f) | (1 << move.e)) not in (
                move.new, move.new[::-1]):
            raise MatroidError("move is not the stated symmetric exchange")
    entries[move.i], entries[move.j] = move.new
    if isinstance(state, BaseSequence):
        if move.j != move.i + 1:
            raise MatroidError("sequence moves act on adjacent positions")
        return BaseSequence(tuple(entries))
    return BaseMultiset(tuple(sorted(entries, key=M.index.__getitem__)))


def enumerate_fiber(M: Matroid, u, d: int, cap: int = FIBER_CAP) -> list[BaseMultiset]:
    """All multisets of ``d`` bases with union vector ``u``, in lexicographic
    order of basis indices."""
    u = list(u)
    if len(u) != M.n:
        raise MatroidError(f"union vector must have length {M.n}")
    if sum(u) != d * M.r or any(x < 0 or x > d for x in u):
        return []
    elems = [elements(b) for b in M.bases]
    out: list = []
    chosen: list = []

    def rec(start, slots):
        if slots == 0:
            out.append(tuple(chosen))
            if len(out) > cap:
                raise FiberCapExceeded(f"fiber exceeds {cap} states")
            return
        for idx in range(start, len(elems)):
            es = elems[idx]
            if any(u[e] == 0 for e in es):
                continue
            for e in es:
                u[e] -= 1
            if max(u) <= slots - 1:
                chosen.append(idx)
                rec(idx, slots - 1)
                chosen.pop()
            for e in es:
                u[e] += 1

    rec(0, d)
    return [_from_idx(M, s, False) for s in out]


def _bfs(moves: _Moves, start: tuple, variant: str, target=None, cap: int = FIBER_CAP):
    parent = {start: None}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        if s == target:
            break
        for new, mv in moves.neighbors(s, variant):
            if new not in parent:
                parent[new] = (s, mv)
                if len(parent) > cap:
                    raise FiberCapExceeded(f"fiber search exceeds {cap} states")
                queue.append(new)
    return parent


def generation_path(M: Matroid, s1, s2, variant: str = W2, strict: bool = False,
                    cap: int = FIBER_CAP) -> list[Move] | None:
    """Shortest move sequence turning ``s1`` into ``s2``, or ``None``."""
    s1, s2 = _as_state(M, s1, variant), _as_state(M, s2, variant)
    if s1.union_vector(M.n) != s2.union_vector(M.n):
        raise MatroidError("states have different union vectors")
    a, b = _to_idx(M, s1), _to_idx(M, s2)
    parent = _bfs(_Moves(M, strict), a, variant, target=b, cap=cap)
    if b not in parent:
        return None
    path = []
    while parent[b] is not None:
        b, mv = parent[b]
        path.append(mv)
    return path[::-1]


def replay(M: Matroid, state, moves) -> BaseMultiset:
    for mv in moves:
        state = apply_move(M, state, mv)
    return state


def _fiber_buckets(M: Matroid, d: int, cap: int):
    from math import comb

    nb = len(M.bases)
    total = comb(nb + d - 1, d)
    if total > cap:
        raise FiberCapExceeded(f"{total} degree-{d} multisets exceed cap {cap}")
    weight = []
    for b in M.bases:
        w = 0
        for e in elements(b):
            w += (d + 1) ** e
        weight.append(w)
    buckets = defaultdict(list)
    for combo in combinations_with_replacement(range(nb), d):
        buckets[sum(weight[i] for i in combo)].append(combo)
    out = []
    for states in buckets.values():
        u = union_vector((M.bases[i] for i in states[0]), M.n)
        out.append((u, states))
    out.sort()
    return out


def fibers_of_degree(M: Matroid, d: int, cap: int = FIBER_CAP) -> list[tuple[tuple, list[BaseMultiset]]]:
    """Every degree-``d`` fiber as ``(union vector, states)``, sorted by ``u``."""
    return [(u, [_from_idx(M, s, False) for s in states]) for u, states in _fiber_buckets(M, d, cap)]


def _distinct_perms(state):
    return sorted(set(permutations(state)))


def _check_fibers(M: Matroid, variant: str, strict: bool, fibers, cap: int):
    moves = _Moves(M, strict)
    results = []
    for u, states in fibers:
        if variant == W3:
            verts = [p for s in states for p in _distinct_perms(s)]
        else:
            verts = states
        if len(verts) == 1:
            results.append((u, len(verts), None))
            continue
        members = set(verts)
        parent = _bfs(moves, verts[0], variant, cap=cap)
        stray = [s for s in parent if s not in members]
        if stray:
            raise AssertionError(f"move left the fiber {u}: {stray[0]}")
        if len(parent) == len(verts):
            results.append((u, len(verts), None))
        else:
            missing = next(s for s in verts if s not in parent)
            results.append((u, len(verts), (verts[0], missing)))
    return results


def _check_chunk(args):
    return _check_fibers(*args)


def check_white_degree(M: Matroid, d: int, variant: str = W2, strict: bool = False,
                       workers: int = 1, cap: int = FIBER_CAP) -> FiberReport:
    """Connectivity of every degree-``d`` fiber under ``variant`` moves."""
    if d < 2:
        raise MatroidError("degree must be >= 2")
    if variant not in VARIANTS:
        raise MatroidError(f"unknown variant {variant!r}")
    fibers = _fiber_buckets(M, d, cap)
    if variant == W3 and len(M.bases) ** d > cap:
        raise FiberCapExceeded(f"{len(M.bases) ** d} sequences exceed cap {cap}")
    if workers > 1 and len(fibers) > 1:
        chunks = [fibers[w::workers] for w in range(workers)]
        ctx = multiprocessing.get_context("fork")
        with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
            parts = pool.map(_check_chunk, [(M, variant, strict, c, cap) for c in chunks])
            results = sorted(r for part in parts for r in part)
    else:
        results = _check_fibers(M, variant, strict, fibers, cap)
    report = FiberReport(digest(M), d, variant)
    for u, size, bad in results:
        report.fibers_total += 1
        report.states_total += size
        if bad is None:
            report.fibers_connected += 1
        else:
            a, b = bad
            report.counterexamples.append(Counterexample(
                u, _from_idx(M, a, variant == W3), _from_idx(M, b, variant == W3)))
    return report


# ------------------------------------------------------------ morphism lifting

def image_state(psi: MatroidMorphism, state: BaseMultiset) -> BaseMultiset:
    imgs = []
    for b in state.entries:
        im = psi.image(b)
        if im.bit_count() != b.bit_count() or im not in psi.target.basis_set:
            raise EntryNotMappedToBasis(f"{fmt_set(b)} does not map to a basis")
        imgs.append(im)
    if isinstance(state, BaseSequence):
        return BaseSequence(tuple(imgs))
    return multiset(psi.target, imgs)


def _canonical_move(M: Matroid, cur: list, p: int, q: int, new_p: int, new_q: int, e: int, f: int):
    """W2 move on the canonical form of ``cur`` sending entry ``p`` to
    ``new_p`` (losing ``e``) and entry ``q`` to ``new_q`` (losing ``f``)."""
    order = sorted(range(len(cur)), key=lambda t: (M.index[cur[t]], t))
    pos = {t: k for k, t in enumerate(order)}
    i, j = pos[p], pos[q]
    if i < j:
        return Move(W2, i, j, (cur[p], cur[q]), (new_p, new_q), e, f)
    return Move(W2, j, i, (cur[q], cur[p]), (new_q, new_p), f, e)


def lift_path(psi: MatroidMorphism, s1, path: list[Move], s2=None) -> list[Move]:
    """Lift a W2 path in ``psi.target`` starting at ``psi(s1)`` to a W2 path in
    ``psi.source`` starting at ``s1``.  With ``s2`` given (same image as the end
    of ``path``), append within-preimage exchanges ending exactly at ``s2``."""
    M, T = psi.source, psi.target
    s1 = _as_state(M, s1, W2)
    img_state = image_state(psi, s1)
    cur = list(s1.entries)
    img = [psi.image(b) for b in cur]
    lifted = []
    for mv in path:
        if mv.variant != W2 or mv.e is None:
            raise LiftFailure("only symmetric-exchange (W2) moves can be lifted")
        img_state = apply_move(T, img_state, mv)
        a, b = mv.old
        p = next((t for t in range(len(img)) if img[t] == a), None)
        q = next((t for t in range(len(img)) if img[t] == b and t != p), None)
        if p is None or q is None:
            raise LiftFailure("move does not apply to the image state")
        e = next(x for x in elements(cur[p]) if psi.mapping[x] == mv.e)
        f = next(y for y in elements(cur[q]) if psi.mapping[y] == mv.f)
        n1 = cur[p] ^ (1 << e) | (1 << f)
        n2 = cur[q] ^ (1 << f) | (1 << e)
        if n1 not in M.basis_set or n2 not in M.basis_set:
            raise LiftFailure(f"exchange of {e} and {f} does not lift; psi is not a morphism")
        lifted.append(_canonical_move(M, cur, p, q, n1, n2, e, f))
        cur[p], cur[q] = n1, n2
        img[p], img[q] = mv.new
    if s2 is None:
        return lifted
    s2 = _as_state(M, s2, W2)
    if image_state(psi, s2) != img_state:
        raise MatroidError("target state does not have the image reached by the path")
    if union_vector(cur, M.n) != s2.union_vector(M.n):
        raise MatroidError("target state has a different union vector")
    # pair entries of cur with entries of s2 having the same image
    pool = defaultdict(list)
    for b in s2.entries:
        pool[psi.image(b)].append(b)
    goal = [pool[im].pop() for im in img]
    while True:
        i = next((t for t in range(len(cur)) if cur[t] != goal[t]), None)
        if i is None:
            return lifted
        x = elements(cur[i] & ~goal[i])[0]
        y = next(z for z in elements(goal[i]) if psi.mapping[z] == psi.mapping[x])
        j = next(t for t in range(len(cur))
                 if t != i and cur[t] >> y & 1 and not goal[t] >> y & 1)
        n1 = cur[i] ^ (1 << x) | (1 << y)
        n2 = cur[j] ^ (1 << y) | (1 << x)
        if n1 not in M.basis_set or n2 not in M.basis_set:
            raise LiftFailure("representative swap left the basis family; psi is not a morphism")
        lifted.append(_canonical_move(M, cur, i, j, n1, n2, x, y))
        cur[i], cur[j] = n1, n2


# ------------------------------------------------------------ saturation

def saturation_check(M: Matroid, s1, s2, basis, cap: int = FIBER_CAP,
                     shortcut: bool = True) -> bool:
    """Whether ``s1 + rn*B`` and ``s2 + rn*B`` are W2-connected, where ``n``
    is the degree of the binomial ``(s1, s2)``."""
    s1, s2 = _as_state(M, s1, W2), _as_state(M, s2, W2)
    if s1.union_vector(M.n) != s2.union_vector(M.n):
        raise MatroidError("states have different union vectors")
    b = _basis_mask(M, basis)
    if s1 == s2:
        return True
    moves = _Moves(M)
    a, t = _to_idx(M, s1), _to_idx(M, s2)
    if shortcut and t in _bfs(moves, a, W2, target=t, cap=cap):
        return True  # a path between s1, s2 survives any padding
    pad = (M.index[b],) * (M.r * s1.degree)
    a = tuple(sorted(a + pad))
    t = tuple(sorted(t + pad))
    return t in _bfs(moves, a, W2, target=t, cap=cap)
