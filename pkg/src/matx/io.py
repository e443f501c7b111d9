"""Matroid text files and canonical JSON reports.

File format (1-based elements, ``#`` starts a comment)::

    matroid v1          # optional header
    kind bases          # or: graph, matrix
    n 4
    r 2
    1 2                 # one basis per line; "-" is the empty basis
    1 3
    ...

    kind graph
    vertices 4
    edges 1-2 1-3 2-3   # may repeat over several lines

    kind matrix
    p 3
    1 0 1 2             # one row per line
    0 1 1 1
"""

from __future__ import annotations

import hashlib
import json
import re
from pathlib import Path

import jsonschema

from .errors import MatroidError, MatroidSyntaxError
from .matroid import Matroid, digest, elements, graphic, linear_gf, validate_bases

FORMAT_VERSION = 1
SCHEMA_VERSION = 1

_TOKEN = re.compile(r"\S+")
_EDGE = re.compile(r"(\d+)-(\d+)$")


def _lines(text: str):
    """Non-blank lines as ``(lineno, [(column, token), ...])``."""
    for no, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        toks = [(m.start() + 1, m.group()) for m in _TOKEN.finditer(body)]
        if toks:
            yield no, toks


def _int(tok, no, col, what="integer"):
    try:
        return int(tok)
    except ValueError:
        raise MatroidSyntaxError(f"expected {what}, got {tok!r}", no, col) from None


def _keyed(lines, key):
    """Consume a ``key value`` line and return the integer value."""
    try:
        no, toks = next(lines)
    except StopIteration:
        raise MatroidSyntaxError(f"missing '{key}' line") from None
    (col, head), rest = toks[0], toks[1:]
    if head != key or len(rest) != 1:
        raise MatroidSyntaxError(f"expected '{key} <int>'", no, col)
    return _int(rest[0][1], no, rest[0][0])


def parse_matroid(text: str) -> Matroid:
    lines = _lines(text)
    try:
        no, toks = next(lines)
    except StopIteration:
        raise MatroidSyntaxError("empty matroid file") from None
    if toks[0][1] == "matroid":
        if len(toks) != 2 or toks[1][1] != f"v{FORMAT_VERSION}":
            col = toks[1][0] if len(toks) > 1 else toks[0][0]
            raise MatroidSyntaxError(f"unsupported header, expected 'matroid v{FORMAT_VERSION}'", no, col)
        try:
            no, toks = next(lines)
        except StopIteration:
            raise MatroidSyntaxError("missing 'kind' line", no + 1, 1) from None
    if toks[0][1] != "kind" or len(toks) != 2:
        raise MatroidSyntaxError("expected 'kind bases|graph|matrix'", no, toks[0][0])
    kind = toks[1][1]
    if kind == "bases":
        return _parse_bases(lines)
    if kind == "graph":
        return _parse_graph(lines)
    if kind == "matrix":
        return _parse_matrix(lines)
    raise MatroidSyntaxError(f"unknown kind {kind!r}", no, toks[1][0])


def _parse_bases(lines) -> Matroid:
    n = _keyed(lines, "n")
    r = _keyed(lines, "r")
    family, where = [], {}
    for no, toks in lines:
        if len(toks) == 1 and toks[0][1] == "-":
            items = []
        else:
            items = []
            for col, tok in toks:
                e = _int(tok, no, col, "element index")
                if not 1 <= e <= n:
                    raise MatroidSyntaxError(f"element {e} outside 1..{n}", no, col)
                items.append(e - 1)
        if len(set(items)) != len(items):
            raise MatroidSyntaxError("repeated element in basis", no, toks[0][0])
        if len(items) != r:
            raise MatroidSyntaxError(f"basis has {len(items)} elements, rank is {r}", no, toks[0][0])
        mask = sum(1 << e for e in items)
        where.setdefault(mask, no)
        family.append(mask)
    if not family:
        raise MatroidSyntaxError("no bases listed")
    try:
        return validate_bases(n, family)
    except MatroidError as exc:
        lines_hit = [where[b] for b in (getattr(exc, "b1", None), getattr(exc, "b2", None)) if b in where]
        if lines_hit:
            exc.args = (f"{exc.args[0]} (lines {', '.join(map(str, lines_hit))})",)
        raise


def _parse_graph(lines) -> Matroid:
    v = _keyed(lines, "vertices")
    edges = []
    for no, toks in lines:
        if toks[0][1] != "edges":
            raise MatroidSyntaxError("expected 'edges a-b ...'", no, toks[0][0])
        for col, tok in toks[1:]:
            m = _EDGE.match(tok)
            if not m:
                raise MatroidSyntaxError(f"bad edge {tok!r}, expected a-b", no, col)
            a, b = int(m.group(1)), int(m.group(2))
            if not (1 <= a <= v and 1 <= b <= v):
                raise MatroidSyntaxError(f"edge {tok} uses a vertex outside 1..{v}", no, col)
            edges.append((a, b))
    return graphic(v, edges)


def _parse_matrix(lines) -> Matroid:
    p = _keyed(lines, "p")
    rows = []
    for no, toks in lines:
        row = [_int(tok, no, col) for col, tok in toks]
        if rows and len(row) != len(rows[0]):
            raise MatroidSyntaxError(f"row has {len(row)} entries, expected {len(rows[0])}", no, toks[0][0])
        rows.append(row)
    if not rows:
        raise MatroidSyntaxError("matrix has no rows")
    return linear_gf(rows, p)


def parse_file(path) -> Matroid:
    return parse_matroid(Path(path).read_text())


def emit(M: Matroid) -> str:
    """Basis-list text; ``parse_matroid(emit(M)) == M``."""
    out = [f"matroid v{FORMAT_VERSION}", "kind bases", f"n {M.n}", f"r {M.r}"]
    for b in M.bases:
        out.append(" ".join(str(e + 1) for e in elements(b)) if b else "-")
    return "\n".join(out) + "\n"


# ------------------------------------------------------------ reports

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "required": ["schema", "command", "version", "input_hash", "parameters",
                 "result", "witnesses", "skipped"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "command": {"type": "string"},
        "version": {"type": "string"},
        "input_hash": {"type": ["string", "null"]},
        "parameters": {"type": "object"},
        "result": {"type": "object"},
        "witnesses": {"type": "object"},
        "skipped": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["item", "reason"],
                "properties": {"item": {"type": "string"}, "reason": {"type": "string"}},
            },
        },
        "timing": {"type": "object"},
    },
}


def input_hash(text: str | None) -> str | None:
    return None if text is None else hashlib.sha256(text.encode()).hexdigest()


def make_report(command: str, parameters: dict, result: dict, witnesses: dict | None = None,
                skipped: list | None = None, source: str | None = None,
                timing: dict | None = None) -> dict:
    from . import __version__
    report = {
        "schema": SCHEMA_VERSION,
        "command": command,
        "version": __version__,
        "input_hash": input_hash(source),
        "parameters": parameters,
        "result": result,
        "witnesses": witnesses or {},
        "skipped": sorted(skipped or [], key=lambda s: (s["item"], s["reason"])),
    }
    if timing is not None:
        report["timing"] = timing
    validate_report(report)
    return report


def validate_report(report: dict) -> None:
    """Raise :class:`MatroidError` unless ``report`` matches the schema."""
    try:
        jsonschema.validate(report, REPORT_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise MatroidError(f"invalid report: {exc.message}") from None


def canonical_json(report: dict) -> str:
    """Sorted keys, fixed separators, timing dropped."""
    body = {k: v for k, v in report.items() if k != "timing"}
    return json.dumps(body, sort_keys=True, indent=2) + "\n"


def dump_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def dump_counterexample(directory, M: Matroid, report: dict, tag: str | None = None) -> Path:
    """Persist a failing instance as ``<digest>.mat`` plus its report next to it."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    stem = digest(M)[:16]
    (d / f"{stem}.mat").write_text(emit(M))
    out = d / f"{stem}-{tag or report['command']}.json"
    out.write_text(canonical_json(report))
    return out


def report_hash(report: dict) -> str:
    return hashlib.sha256(canonical_json(report).encode()).hexdigest()
