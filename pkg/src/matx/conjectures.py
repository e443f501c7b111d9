"""Per-instance checkers built on the graph and fiber machinery.

* connectivity of the complementary basis graph of a k-matroid;
* the "kr + 1" shared-basis property for two elements ``x, y``;
* the count of non-complementary bases among disjoint bases, audited against
  ``r(r+2)! + s(r+1)!``;
* search for a blow-up labelling of disjoint bases;
* a bounded scan over a catalog of matroids.
"""

from __future__ import annotations

import itertools
import math
import multiprocessing
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .errors import CapExceeded, MatroidError, NotABasis, NotDisjoint, NotKMatroid, SizeMismatch
from .fibers import FIBER_CAP, VARIANTS, check_white_degree
from .graphs import VERTEX_CAP, analyze, complementary_basis_graph, k_base_graph
from .matroid import Matroid, MatroidMorphism, digest, elements, fmt_set, restrict, to_mask
from .partition import BasePartition, _partition, is_complementary, is_k_matroid

SCAN_NOTE = (
    "bounded scan: only the listed k and d are checked; deciding the question "
    "at rank r needs every k up to (r+3)!, far beyond this run"
)


@dataclass(frozen=True)
class ConnectivityCheck:
    connected: bool
    component_sizes: tuple[int, ...]
    vertices: int
    separated: tuple[int, int] | None = None  # bases in different components


@dataclass(frozen=True)
class KrPlusOneResult:
    applicable: bool
    holds: bool | None = None
    partition_x: BasePartition | None = None  # of E - x
    partition_y: BasePartition | None = None  # of E - y
    shared: int | None = None


@dataclass(frozen=True)
class BoundAudit:
    count: int
    bound: int
    ok: bool
    noncomplementary: tuple[int, ...] = ()


@dataclass(frozen=True)
class BlowupLabeling:
    blocks: tuple[int, ...]
    labels: dict  # element -> label index (position in sorted blocks[0])
    untouched: int = 0  # the set F

    def morphism(self, M: Matroid) -> MatroidMorphism:
        """The certified map ``M|(B1 u ... u Bk u F) -> M|(B1 u F)``."""
        union = 0
        for b in self.blocks:
            union |= b
        src, src_labels = restrict(M, union | self.untouched)
        dst, dst_labels = restrict(M, self.blocks[0] | self.untouched)
        back = {old: new for new, old in enumerate(dst_labels)}
        first = elements(self.blocks[0])
        mapping = []
        for old in src_labels:
            if old in self.labels:
                mapping.append(back[first[self.labels[old]]])
            else:
                mapping.append(back[old])
        return MatroidMorphism(src, dst, tuple(mapping))


def check_complementary_connected(M: Matroid, k: int, cap: int = VERTEX_CAP) -> ConnectivityCheck:
    if not is_k_matroid(M, k):
        raise NotKMatroid(f"matroid is not a {k}-matroid")
    G = complementary_basis_graph(M, k, cap=cap)
    s = analyze(G)
    sep = None
    if not s.is_connected:
        from . import kernels
        labels = kernels.component_labels(len(G.vertices), G.edges)
        other = next(i for i in range(len(labels)) if labels[i] != labels[0])
        sep = (G.vertices[0], G.vertices[other])
    return ConnectivityCheck(s.is_connected, s.component_sizes, len(G.vertices), sep)


def check_kr_plus_1(M: Matroid, k: int, x: int, y: int) -> KrPlusOneResult:
    """For ``|E| = kr + 1``: look for a basis ``D`` avoiding ``x, y`` that
    extends to partitions of both ``E - x`` and ``E - y`` into ``k`` bases."""
    if M.n != k * M.r + 1:
        raise SizeMismatch(f"ground set has {M.n} elements, need k*r+1 = {k * M.r + 1}")
    if x == y or not (0 <= x < M.n and 0 <= y < M.n):
        raise MatroidError("x and y must be distinct elements")
    ex, ey = M.ground & ~(1 << x), M.ground & ~(1 << y)
    if _partition(M, k, ex)[0] is None or _partition(M, k, ey)[0] is None:
        return KrPlusOneResult(False)
    avoid = (1 << x) | (1 << y)
    for d in M.bases:
        if d & avoid:
            continue
        px, _ = _partition(M, k - 1, ex & ~d)
        if px is None:
            continue
        py, _ = _partition(M, k - 1, ey & ~d)
        if py is None:
            continue
        part_x = BasePartition(tuple(sorted(px + (d,), key=elements)), M)
        part_y = BasePartition(tuple(sorted(py + (d,), key=elements)), M)
        return KrPlusOneResult(True, True, part_x, part_y, d)
    return KrPlusOneResult(True, False)


def noncomplementary_bound(r: int, s: int) -> int:
    return r * math.factorial(r + 2) + s * math.factorial(r + 1)


def audit_noncomplementary_bound(M: Matroid, k: int, s: int, D) -> BoundAudit:
    if s < 0:
        raise MatroidError("s must be nonnegative")
    masks = [to_mask(b, M.n) for b in D]
    if len(masks) != k - s:
        raise SizeMismatch(f"expected k - s = {k - s} bases, got {len(masks)}")
    for b in masks:
        if b not in M.basis_set:
            raise NotABasis(f"{fmt_set(b)} is not a basis")
    for a, b in itertools.combinations(masks, 2):
        if a & b:
            raise NotDisjoint(f"{fmt_set(a)} and {fmt_set(b)} intersect")
    if not is_k_matroid(M, k):
        raise NotKMatroid(f"matroid is not a {k}-matroid")
    bad = tuple(b for b in masks if not is_complementary(M, b, k, check=False))
    bound = noncomplementary_bound(M.r, s)
    return BoundAudit(len(bad), bound, len(bad) <= bound, bad)


def detect_blowup_containment(M: Matroid, blocks, untouched=0) -> BlowupLabeling | None:
    """Label ``blocks[1:]`` with the elements of ``blocks[0]`` so that the
    labelling collapses ``M|(B1 u ... u Bk u F)`` onto ``M|(B1 u F)``."""
    bl = [to_mask(b, M.n) for b in blocks]
    F = to_mask(untouched, M.n)
    if not bl:
        raise MatroidError("need at least one basis")
    for b in bl:
        if b not in M.basis_set:
            raise NotABasis(f"{fmt_set(b)} is not a basis")
    union = 0
    for b in bl:
        if b & union:
            raise NotDisjoint("bases are not pairwise disjoint")
        union |= b
    if F & union:
        raise NotDisjoint("F meets the bases")
    r = M.r
    first = elements(bl[0])
    # bases of M|(B1 u F) as (labels used, untouched part)
    targets = []
    for b in M.bases:
        if b & ~(bl[0] | F) == 0:
            targets.append((tuple(first.index(e) for e in elements(b & bl[0])), b & F))

    labels = {e: t for t, e in enumerate(first)}
    classes = [[e] for e in first]

    def consistent(new_block):
        for labs, rest in targets:
            for pick in itertools.product(*(classes[t] for t in labs)):
                if not any(new_block >> e & 1 for e in pick):
                    continue
                if sum(1 << e for e in pick) | rest not in M.basis_set:
                    return False
        return True

    if not consistent(bl[0]):
        return None

    degree = [0] * M.n
    for combo in itertools.combinations(elements(union), r):
        if sum(1 << e for e in combo) not in M.basis_set:
            for e in combo:
                degree[e] += 1
    order = sorted(range(1, len(bl)), key=lambda t: (-sum(degree[e] for e in elements(bl[t])), t))

    def rec(pos):
        if pos == len(order):
            return True
        b = bl[order[pos]]
        elems = elements(b)
        for perm in itertools.permutations(range(r)):
            for e, t in zip(elems, perm):
                labels[e] = t
                classes[t].append(e)
            if consistent(b) and rec(pos + 1):
                return True
            for e, t in zip(elems, perm):
                del labels[e]
                classes[t].pop()
        return False

    if not rec(0):
        return None
    return BlowupLabeling(tuple(bl), dict(sorted(labels.items())), F)


# ------------------------------------------------------------ catalog scan

@dataclass
class ScanOptions:
    k_range: tuple[int, ...] = (2, 3)
    d_range: tuple[int, ...] = (2,)
    variants: tuple[str, ...] = VARIANTS
    vertex_cap: int = VERTEX_CAP
    fiber_cap: int = FIBER_CAP


def _scan_one(item):
    name, M, opts = item
    entry = {"name": name, "matroid": digest(M), "n": M.n, "r": M.r, "checks": []}
    checks = entry["checks"]

    def record(check, params, fn):
        row = {"check": check, **params}
        try:
            row.update(fn())
        except CapExceeded as exc:
            row.update(status="skip", reason=str(exc))
        checks.append(row)

    for k in opts.k_range:
        if k < 2 or M.loops or k * M.r != M.n or not is_k_matroid(M, k):
            continue
        if k == 2:
            for modified in (False, True):
                def run(modified=modified):
                    s = analyze(complementary_basis_graph(M, 2, modified, cap=opts.vertex_cap))
                    return {"status": "pass" if s.is_connected else "fail",
                            "vertices": sum(s.component_sizes),
                            "components": s.component_count}
                record("complementary_modified" if modified else "complementary", {"k": 2}, run)
        else:
            def run(k=k):
                s = analyze(k_base_graph(M, k, cap=opts.vertex_cap))
                return {"status": "pass" if s.is_connected else "fail",
                        "vertices": sum(s.component_sizes),
                        "components": s.component_count}
            record("kbase", {"k": k}, run)
    for d in opts.d_range:
        for v in opts.variants:
            def run(d=d, v=v):
                rep = check_white_degree(M, d, v, cap=opts.fiber_cap)
                out = {"status": "pass" if rep.ok else "fail",
                       "fibers_total": rep.fibers_total,
                       "fibers_connected": rep.fibers_connected}
                if rep.counterexamples:
                    c = rep.counterexamples[0]
                    out["counterexample"] = {"u": list(c.u),
                                             "a": [elements(b) for b in c.reached.entries],
                                             "b": [elements(b) for b in c.unreached.entries]}
                return out
            record("white", {"d": d, "variant": v}, run)
    return entry


def corollary_scan(catalog, k_range=(2, 3), d_range=(2,), variants=VARIANTS,
                   workers: int = 1, vertex_cap: int = VERTEX_CAP,
                   fiber_cap: int = FIBER_CAP) -> dict:
    """Graph and fiber connectivity over ``catalog`` (pairs ``(name, M)``).
    The result only depends on the catalog order and caps, not on ``workers``."""
    opts = ScanOptions(tuple(k_range), tuple(d_range), tuple(variants), vertex_cap, fiber_cap)
    items = [(name, M, opts) for name, M in catalog]
    if workers > 1 and len(items) > 1:
        ctx = multiprocessing.get_context("fork")
        with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
            entries = list(pool.map(_scan_one, items, chunksize=max(1, len(items) // (4 * workers))))
    else:
        entries = [_scan_one(it) for it in items]
    totals = {"pass": 0, "fail": 0, "skip": 0}
    for e in entries:
        for c in e["checks"]:
            totals[c["status"]] += 1
    return {
        "entries": entries,
        "totals": totals,
        "k_range": list(opts.k_range),
        "d_range": list(opts.d_range),
        "variants": list(opts.variants),
        "note": SCAN_NOTE,
    }
