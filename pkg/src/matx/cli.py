"""``matx`` command line.

Exit codes: 0 answer produced / check passed, 1 check failed with a
counterexample, 2 usage or input error, 3 a size cap was exceeded.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
import time
from pathlib import Path

from . import fibers as fb
from .catalog import catalog_generate
from .conjectures import (
    audit_noncomplementary_bound, check_complementary_connected, check_kr_plus_1,
    corollary_scan, detect_blowup_containment,
)
from .errors import CapExceeded, ExchangeAxiomFailure, MatroidError
from .graphs import VERTEX_CAP, analyze, basis_graph, complementary_basis_graph, k_base_graph
from .io import canonical_json, dump_counterexample, dump_json, emit, make_report, parse_matroid
from .matroid import digest, elements, fmt_set, rank, to_mask
from .partition import is_complementary, is_k_matroid, partition_into_bases, union_certificate, violating_set

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3
KIND_CHOICES = ("basis", "complementary", "kbase", "kbase-modified")


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(message)


def _one_based(mask: int) -> list[int]:
    return [e + 1 for e in elements(mask)]


def _parse_set(text: str, n: int) -> int:
    items = [t for t in re.split(r"[\s,{}]+", text) if t]
    try:
        vals = [int(t) for t in items]
    except ValueError:
        raise _Usage(f"bad element set {text!r}") from None
    if any(not 1 <= v <= n for v in vals):
        raise _Usage(f"element set {text!r} outside 1..{n}")
    return to_mask([v - 1 for v in vals], n)


def _parse_sets(text: str, n: int) -> list[int]:
    """``"1 2; 3 4"`` -> masks."""
    return [_parse_set(part, n) for part in text.split(";") if part.strip()]


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in re.split(r"[\s,]+", text.strip()) if t]
    except ValueError:
        raise _Usage(f"bad integer list {text!r}") from None


def _env_int(name: str, default):
    val = os.environ.get(name)
    if val is None or val == "":
        return default
    try:
        return int(val)
    except ValueError:
        raise _Usage(f"{name} must be an integer") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="matx", description="Matroid exchange-graph and fiber checks.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def cmd(name, help_, needs_file=True):
        sp = sub.add_parser(name, help=help_)
        if needs_file:
            sp.add_argument("--file", required=True, help="matroid file")
        sp.add_argument("--json", action="store_true", help="print the canonical JSON report")
        sp.add_argument("--timing", action="store_true", help="add wall time to the JSON report")
        sp.add_argument("--cap", type=int, default=None, help="vertex/state cap (env MATX_CAP)")
        sp.add_argument("--workers", type=int, default=None, help="worker processes (env MATX_WORKERS)")
        sp.add_argument("--dump", default=None, metavar="DIR",
                        help="on a failed check, save the matroid and report to DIR")
        return sp

    cmd("validate", "check the exchange axiom and print a summary")
    sp = cmd("rank", "rank of a subset")
    sp.add_argument("--set", default=None, help="elements, e.g. '1 3' (default: ground set)")
    sp = cmd("kpart", "partition into k bases or a violating set")
    sp.add_argument("-k", type=int, required=True)
    sp = cmd("complementary", "complementary-basis test or graph connectivity")
    sp.add_argument("-k", type=int, required=True)
    sp.add_argument("--set", default=None, help="test a single basis")
    sp = cmd("graph", "build an exchange graph and report components")
    sp.add_argument("--kind", choices=KIND_CHOICES, default="basis")
    sp.add_argument("-k", type=int, default=None)
    sp.add_argument("--allow-k2", action="store_true", help="permit the k-base graph for k = 2")
    sp = cmd("fibers", "fiber connectivity in degree d")
    sp.add_argument("-d", type=int, required=True)
    sp.add_argument("--variant", choices=fb.VARIANTS, default=fb.W2)
    sp.add_argument("--strict", action="store_true", help="W3: keep the exchanged pair in place")
    sp = cmd("path", "shortest move path between two states")
    sp.add_argument("--from", dest="src", required=True, help="bases separated by ';'")
    sp.add_argument("--to", dest="dst", required=True)
    sp.add_argument("--variant", choices=fb.VARIANTS, default=fb.W2)
    sp.add_argument("--strict", action="store_true")
    sp = cmd("conjecture", "per-instance conjecture checks")
    sp.add_argument("which", choices=("complementary", "kr1", "audit", "blowup"))
    sp.add_argument("-k", type=int, default=None)
    sp.add_argument("-x", type=int, default=None)
    sp.add_argument("-y", type=int, default=None)
    sp.add_argument("-s", type=int, default=0, help="audit: k minus the number of bases")
    sp.add_argument("--bases", default=None, help="audit/blowup: bases separated by ';'")
    sp.add_argument("--untouched", default="", help="blowup: the set F")
    sp = cmd("scan", "graph and fiber checks over a catalog", needs_file=False)
    sp.add_argument("--file", action="append", default=[], help="matroid file (repeatable)")
    sp.add_argument("--mode", choices=("exhaustive", "constructed"), default=None)
    sp.add_argument("-r", type=int, default=None)
    sp.add_argument("--n-max", type=int, default=None)
    sp.add_argument("-k", default="2,3", help="k values, e.g. '2,3'")
    sp.add_argument("-d", default="2", help="degrees, e.g. '2,3'")
    sp.add_argument("--variant", action="append", choices=fb.VARIANTS, default=None)
    sp = cmd("catalog", "list (or write) a matroid catalog", needs_file=False)
    sp.add_argument("--mode", choices=("exhaustive", "constructed"), required=True)
    sp.add_argument("-r", type=int, required=True)
    sp.add_argument("-n", type=int, default=None)
    sp.add_argument("--n-max", type=int, default=None)
    sp.add_argument("--out", default=None, help="directory for one file per matroid")
    return p


# ------------------------------------------------------------ commands
# Each returns (exit code, text lines, result, witnesses, skipped).

def _validate(M, a):
    return EXIT_OK, [f"matroid: n={M.n} r={M.r} bases={len(M.bases)}"], \
        {"n": M.n, "r": M.r, "bases": len(M.bases), "digest": digest(M)}, {}, []


def _rank(M, a):
    s = M.ground if a.set is None else _parse_set(a.set, M.n)
    v = rank(M, s)
    return EXIT_OK, [f"rank {fmt_set(s)} = {v}"], {"set": _one_based(s), "rank": v}, {}, []


def _kpart(M, a):
    part = partition_into_bases(M, a.k) if a.k * M.r == M.n else None
    if part is not None:
        blocks = [_one_based(b) for b in part.blocks]
        return EXIT_OK, [f"partition: {part}"], {"k": a.k, "is_k_matroid": True}, \
            {"partition": blocks}, []
    viol = violating_set(M, a.k) if M.n <= 20 else union_certificate(M, a.k)
    if viol is None:
        msg = f"not a {a.k}-matroid: {a.k}*r = {a.k * M.r} != n = {M.n}"
        return EXIT_FAIL, [msg], {"k": a.k, "is_k_matroid": False, "reason": "size"}, {}, []
    return EXIT_FAIL, [f"not a {a.k}-matroid: {viol}"], \
        {"k": a.k, "is_k_matroid": False, "reason": "violation"}, \
        {"violation": {"set": _one_based(viol.subset), "rank": viol.rank}}, []


def _not_applicable(k):
    return EXIT_OK, [f"not applicable: not a {k}-matroid"], {"applicable": False, "k": k}, {}, []


def _complementary(M, a):
    if not is_k_matroid(M, a.k):
        return _not_applicable(a.k)
    if a.set is not None:
        b = _parse_set(a.set, M.n)
        ok = is_complementary(M, b, a.k, check=False)
        word = "complementary" if ok else "not complementary"
        return EXIT_OK, [f"{fmt_set(b)} is {word}"], \
            {"applicable": True, "basis": _one_based(b), "complementary": ok}, {}, []
    chk = check_complementary_connected(M, a.k, cap=a.cap)
    res = {"applicable": True, "connected": chk.connected, "vertices": chk.vertices,
           "component_sizes": list(chk.component_sizes)}
    if chk.connected:
        return EXIT_OK, [f"connected ({chk.vertices} vertices)"], res, {}, []
    u, v = chk.separated
    return EXIT_FAIL, [f"DISCONNECTED: {fmt_set(u)} and {fmt_set(v)} lie in different components"], \
        res, {"separated": [_one_based(u), _one_based(v)]}, []


def _graph(M, a):
    k = a.k
    if a.kind == "basis":
        G = basis_graph(M, cap=a.cap)
    elif a.kind in ("complementary", "kbase-modified"):
        k = 2 if k is None and a.kind == "kbase-modified" else k
        if k is None:
            raise _Usage("-k is required for this graph kind")
        if not is_k_matroid(M, k):
            return _not_applicable(k)
        G = complementary_basis_graph(M, k, modified=a.kind == "kbase-modified", cap=a.cap)
    else:
        if k is None:
            raise _Usage("-k is required for this graph kind")
        if not is_k_matroid(M, k):
            return _not_applicable(k)
        G = k_base_graph(M, k, allow_k2=a.allow_k2, cap=a.cap)
    s = analyze(G)
    res = {"kind": G.kind, "k": k, "vertices": len(G.vertices), "edges": len(G.edges),
           "components": s.component_count, "component_sizes": list(s.component_sizes),
           "diameter_of_largest": s.diameter_of_largest, "connected": s.is_connected}
    diam = "skipped" if s.diameter_skipped else s.diameter_of_largest
    line = (f"{G.kind} graph: {len(G.vertices)} vertices, {len(G.edges)} edges, "
            f"{s.component_count} component(s), diameter {diam}")
    return (EXIT_OK if s.is_connected else EXIT_FAIL), [line], res, {}, []


def _state_json(state):
    return [_one_based(b) for b in state.entries]


def _fibers(M, a):
    rep = fb.check_white_degree(M, a.d, a.variant, a.strict, workers=a.workers, cap=a.cap)
    res = {"degree": a.d, "variant": a.variant, "fibers_total": rep.fibers_total,
           "fibers_connected": rep.fibers_connected, "states_total": rep.states_total}
    lines = [f"degree {a.d} {a.variant}: {rep.fibers_connected}/{rep.fibers_total} fibers connected "
             f"({rep.states_total} states)"]
    wit = {}
    if rep.counterexamples:
        wit["disconnected"] = [{"u": list(c.u), "a": _state_json(c.reached), "b": _state_json(c.unreached)}
                               for c in rep.counterexamples]
        c = rep.counterexamples[0]
        lines.append(f"DISCONNECTED fiber u={list(c.u)}: {c.reached} cannot reach {c.unreached}")
    return (EXIT_OK if rep.ok else EXIT_FAIL), lines, res, wit, []


def _move_json(mv):
    out = {"variant": mv.variant, "i": mv.i, "j": mv.j,
           "old": [_one_based(b) for b in mv.old], "new": [_one_based(b) for b in mv.new]}
    if mv.e is not None:
        out["e"], out["f"] = mv.e + 1, mv.f + 1
    return out


def _path(M, a):
    make = fb.sequence if a.variant == fb.W3 else fb.multiset
    s1 = make(M, _parse_sets(a.src, M.n))
    s2 = make(M, _parse_sets(a.dst, M.n))
    path = fb.generation_path(M, s1, s2, a.variant, a.strict, cap=a.cap)
    res = {"variant": a.variant, "from": _state_json(s1), "to": _state_json(s2),
           "connected": path is not None}
    if path is None:
        return EXIT_FAIL, [f"no {a.variant} path from {s1} to {s2}"], res, {}, []
    res["length"] = len(path)
    lines = [f"path of length {len(path)}"]
    cur = s1
    for mv in path:
        cur = fb.apply_move(M, cur, mv)
        lines.append(f"  {cur}")
    return EXIT_OK, lines, res, {"path": [_move_json(mv) for mv in path]}, []


def _conjecture(M, a):
    if a.k is None:
        raise _Usage("-k is required")
    if a.which == "complementary":
        return _complementary(M, argparse.Namespace(k=a.k, set=None, cap=a.cap))
    if a.which == "kr1":
        if a.x is None or a.y is None:
            raise _Usage("-x and -y are required")
        for v in (a.x, a.y):
            if not 1 <= v <= M.n:
                raise _Usage(f"element {v} outside 1..{M.n}")
        r = check_kr_plus_1(M, a.k, a.x - 1, a.y - 1)
        if not r.applicable:
            return EXIT_OK, ["not applicable"], {"applicable": False}, {}, []
        res = {"applicable": True, "holds": r.holds}
        if not r.holds:
            return EXIT_FAIL, ["FAILS: no shared basis"], res, {}, []
        wit = {"shared": _one_based(r.shared),
               "partition_x": [_one_based(b) for b in r.partition_x.blocks],
               "partition_y": [_one_based(b) for b in r.partition_y.blocks]}
        return EXIT_OK, [f"holds: {r.partition_x}  /  {r.partition_y}  share {fmt_set(r.shared)}"], \
            res, wit, []
    if a.bases is None:
        raise _Usage("--bases is required")
    bases = _parse_sets(a.bases, M.n)
    if a.which == "audit":
        if not is_k_matroid(M, a.k):
            return _not_applicable(a.k)
        au = audit_noncomplementary_bound(M, a.k, a.s, bases)
        res = {"count": au.count, "bound": au.bound, "ok": au.ok}
        return (EXIT_OK if au.ok else EXIT_FAIL), [f"{au.count} non-complementary <= {au.bound}: {au.ok}"], \
            res, {"noncomplementary": [_one_based(b) for b in au.noncomplementary]}, []
    F = _parse_set(a.untouched, M.n)
    lab = detect_blowup_containment(M, bases, F)
    if lab is None:
        return EXIT_OK, ["no blow-up labelling"], {"found": False}, {}, []
    classes = [[e + 1 for e, t in lab.labels.items() if t == i] for i in range(M.r)]
    return EXIT_OK, ["labelling classes: " + " ".join("{" + ",".join(map(str, c)) + "}" for c in classes)], \
        {"found": True}, {"labels": {str(e + 1): t + 1 for e, t in lab.labels.items()}}, []


COMMANDS = {
    "validate": _validate, "rank": _rank, "kpart": _kpart, "complementary": _complementary,
    "graph": _graph, "fibers": _fibers, "path": _path, "conjecture": _conjecture,
}


def _scan(a):
    catalog, sources = [], []
    for f in a.file:
        text = Path(f).read_text()
        catalog.append((Path(f).stem, parse_matroid(text)))
        sources.append(text)
    if a.mode is not None:
        if a.r is None:
            raise _Usage("-r is required with --mode")
        catalog.extend(catalog_generate(a.mode, a.r, n_max=a.n_max))
    variants = tuple(a.variant) if a.variant else fb.VARIANTS
    ks, ds = _ints(a.k), _ints(a.d)
    rep = corollary_scan(catalog, ks, ds, variants, workers=a.workers,
                         vertex_cap=a.cap, fiber_cap=a.cap)
    skipped = [{"item": f"{e['name']}:{c['check']}", "reason": c["reason"]}
               for e in rep["entries"] for c in e["checks"] if c["status"] == "skip"]
    t = rep["totals"]
    lines = [f"{len(catalog)} matroids: {t['pass']} pass, {t['fail']} fail, {t['skip']} skipped",
             f"note: {rep['note']}"]
    for e in rep["entries"]:
        for c in e["checks"]:
            if c["status"] == "fail":
                lines.append(f"FAIL {e['name']} {c['check']} {c}")
    params = {"k_range": ks, "d_range": ds, "variants": list(variants), "mode": a.mode,
              "r": a.r, "n_max": a.n_max, "cap": a.cap}
    source = "".join(sources) if sources else None
    code = EXIT_FAIL if t["fail"] else EXIT_OK
    failed = {e["name"] for e in rep["entries"] if any(c["status"] == "fail" for c in e["checks"])}
    a.failed = [(name, M) for name, M in catalog if name in failed]
    return code, lines, rep, {}, skipped, params, source


def _catalog(a):
    cat = catalog_generate(a.mode, a.r, n=a.n, n_max=a.n_max)
    lines = [f"{name}  n={M.n} r={M.r} bases={len(M.bases)}  {digest(M)}" for name, M in cat]
    if a.out:
        out = Path(a.out)
        out.mkdir(parents=True, exist_ok=True)
        for name, M in cat:
            safe = re.sub(r"[^A-Za-z0-9_.-]+", "_", name)
            (out / f"{safe}.mat").write_text(emit(M))
    res = {"count": len(cat), "matroids": [{"name": name, "n": M.n, "r": M.r, "digest": digest(M)}
                                           for name, M in cat]}
    params = {"mode": a.mode, "r": a.r, "n": a.n, "n_max": a.n_max}
    return EXIT_OK, lines, res, {}, [], params, None


def _params(a) -> dict:
    skip = {"command", "json", "timing", "workers", "file", "cap", "dump"}
    out = {k: v for k, v in vars(a).items() if k not in skip}
    out["cap"] = a.cap
    return out


def run_cli(argv=None, out=None) -> tuple[int, dict | None]:
    """Run one command; returns ``(exit code, report)``."""
    out = sys.stdout if out is None else out
    err = sys.stderr
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        a = build_parser().parse_args(argv)
        cap = a.cap if a.cap is not None else _env_int("MATX_CAP", None)
        a.cap = cap if cap is not None else VERTEX_CAP
        workers = a.workers if a.workers is not None else _env_int("MATX_WORKERS", 1)
        a.workers = max(1, workers)
    except _Usage as exc:
        print(f"matx: error: {exc}", file=err)
        return EXIT_USAGE, None
    except SystemExit as exc:  # --help
        return (exc.code if isinstance(exc.code, int) else EXIT_USAGE), None
    start = time.perf_counter()
    M = None
    try:
        if a.command == "scan":
            code, lines, res, wit, skipped, params, source = _scan(a)
        elif a.command == "catalog":
            code, lines, res, wit, skipped, params, source = _catalog(a)
        else:
            source = Path(a.file).read_text()
            try:
                M = parse_matroid(source)
            except ExchangeAxiomFailure as exc:
                if a.command != "validate":
                    raise
                code, lines, wit, skipped = EXIT_FAIL, [f"invalid: {exc}"], {
                    "exchange_failure": {"b1": _one_based(exc.b1), "b2": _one_based(exc.b2), "e": exc.e + 1}}, []
                res = {"valid": False}
            else:
                code, lines, res, wit, skipped = COMMANDS[a.command](M, a)
                if a.command == "validate":
                    res["valid"] = True
            params = _params(a)
    except _Usage as exc:
        print(f"matx: error: {exc}", file=err)
        return EXIT_USAGE, None
    except CapExceeded as exc:
        print(f"matx: cap exceeded: {exc}", file=err)
        return EXIT_CAP, None
    except (MatroidError, OSError) as exc:
        print(f"matx: error: {exc}", file=err)
        return EXIT_USAGE, None
    timing = {"seconds": round(time.perf_counter() - start, 6)} if a.timing else None
    report = make_report(a.command, params, res, wit, skipped, source, timing)
    if code == EXIT_FAIL and getattr(a, "dump", None):
        failed = getattr(a, "failed", [(None, M)] if M is not None else [])
        for name, bad in failed:
            path = dump_counterexample(a.dump, bad, report, name and re.sub(r"[^A-Za-z0-9_.-]+", "_", name))
            print(f"matx: counterexample saved to {path}", file=err)
    if a.json:
        out.write(dump_json(report) if a.timing else canonical_json(report))
    else:
        out.write("\n".join(lines) + "\n")
    return code, report


def main(argv=None) -> int:
    code, _ = run_cli(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
