"""Readers for the hand-written input files; see the grammar in :mod:`biqlab.cli`."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple, Union

from .actions import LinearTorusAction

_INT = re.compile(r"[+-]?\d+")


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0, source: str = "<input>"):
        super().__init__(message)
        self.message = message
        self.line = line
        self.col = col
        self.source = source

    def __str__(self) -> str:
        return f"{self.source}:{self.line}:{self.col}: {self.message}"


def _strip(line: str) -> str:
    return line.split("#", 1)[0]


def _ints(text: str, lineno: int, offset: int, source: str) -> List[int]:
    """Whitespace separated integers; anything else is an error at its column."""
    out = []
    for m in re.finditer(r"\S+", text):
        tok = m.group()
        if not _INT.fullmatch(tok):
            raise ParseError(f"expected an integer, got {tok!r}", lineno, offset + m.start() + 1, source)
        out.append(int(tok))
    return out


def parse_action_line(line: str, lineno: int = 1, source: str = "<input>") -> LinearTorusAction:
    """``rank ; n1,n2,... ; weights | weights | ...`` (one factor per ``|`` group)."""
    body = _strip(line)
    parts = body.split(";")
    if len(parts) != 3:
        raise ParseError("expected 'rank; counts; weights' with two ';'", lineno, 1, source)
    col = 1
    rank_txt, counts_txt, weights_txt = parts
    rank_tok = rank_txt.strip()
    if not re.fullmatch(r"\d+", rank_tok):
        raise ParseError(f"rank must be a non-negative integer, got {rank_tok!r}", lineno,
                         col + rank_txt.find(rank_tok[:1] or " "), source)
    rank = int(rank_tok)
    col += len(rank_txt) + 1
    counts = []
    for m in re.finditer(r"[^,]+", counts_txt):
        tok = m.group().strip()
        if not re.fullmatch(r"\d+", tok) or int(tok) < 1:
            lead = len(m.group()) - len(m.group().lstrip())
            raise ParseError(f"coordinate count must be a positive integer, got {tok!r}",
                             lineno, col + m.start() + lead, source)
        counts.append(int(tok))
    if not counts:
        raise ParseError("no sphere factors given", lineno, col, source)
    col += len(counts_txt) + 1
    groups = weights_txt.split("|")
    if len(groups) != len(counts):
        raise ParseError(f"{len(counts)} factors declared but {len(groups)} weight groups given",
                         lineno, col, source)
    factors = []
    for n, g in zip(counts, groups):
        vals = _ints(g, lineno, col - 1, source)
        if len(vals) != n * rank:
            raise ParseError(f"factor with {n} coordinates needs {n * rank} integers, got {len(vals)}",
                             lineno, col + len(g) - len(g.lstrip()), source)
        factors.append([tuple(vals[i * rank:(i + 1) * rank]) for i in range(n)])
        col += len(g) + 1
    return LinearTorusAction.from_factors(rank, factors)


def format_action_line(a: LinearTorusAction) -> str:
    groups = [" ".join(str(x) for w in f for x in w) for f in a.factor_weights()]
    return f"{a.rank}; {','.join(map(str, a.space.factors))}; " + " | ".join(groups)


def parse_action_file(text: str, source: str = "<input>") -> List[LinearTorusAction]:
    out = []
    for i, line in enumerate(text.splitlines(), 1):
        if _strip(line).strip():
            out.append(parse_action_line(line, i, source))
    return out


@dataclass(frozen=True)
class Block:
    """A run of consecutive non-blank lines of integers."""

    line: int
    rows: Tuple[Tuple[int, ...], ...]


def parse_blocks(text: str, source: str = "<input>") -> List[Block]:
    blocks: List[Block] = []
    rows: List[Tuple[int, ...]] = []
    start = 0
    for i, line in enumerate(text.splitlines(), 1):
        body = _strip(line)
        if not body.strip():
            if rows:
                blocks.append(Block(start, tuple(rows)))
                rows = []
            continue
        if not rows:
            start = i
        rows.append(tuple(_ints(body, i, 0, source)))
    if rows:
        blocks.append(Block(start, tuple(rows)))
    return blocks


Item = Tuple[str, Tuple]  # ("matrix", rows) or ("triple", (a, b, c))


def parse_classify_file(text: str, source: str = "<input>") -> List[Tuple[int, Item]]:
    """Blocks of three rows of three integers are matrices, one-row blocks triples."""
    out = []
    for b in parse_blocks(text, source):
        for k, r in enumerate(b.rows):
            if len(r) != 3:
                raise ParseError(f"expected 3 integers in a row, got {len(r)}", b.line + k, 1, source)
        if len(b.rows) == 3:
            out.append((b.line, ("matrix", b.rows)))
        elif len(b.rows) == 1:
            out.append((b.line, ("triple", b.rows[0])))
        else:
            raise ParseError(f"a block has {len(b.rows)} rows; use 3 for a matrix or 1 for a triple",
                             b.line, 1, source)
    if not out:
        raise ParseError("no input records", 1, 1, source)
    return out


_SPEC = re.compile(r"(?P<kind>[a-z0-9]+):(?P<body>.*)")


def _spec_ints(body: str, spec: str, sep: str = ",") -> List[int]:
    vals = [t.strip() for t in body.split(sep)]
    for t in vals:
        if not _INT.fullmatch(t):
            raise ParseError(f"bad integer {t!r} in {spec!r}", 1, spec.find(t) + 1 if t else 1, "<arg>")
    return [int(t) for t in vals]


def parse_record_spec(spec: str):
    """Inline record: ref:TAG, matrix:r;r;r, family1:c1,c2, family2:a3,b3,
    family3:b1,c1,c2, sporadic:A1..A4, triple:a,b,c.  Returns (kind, payload)."""
    m = _SPEC.fullmatch(spec.strip())
    if not m:
        raise ParseError(f"not a file and not a record spec: {spec!r}", 1, 1, "<arg>")
    kind, body = m.group("kind"), m.group("body")
    if kind == "ref":
        return "ref", body
    if kind == "matrix":
        rows = [_spec_ints(r, spec) for r in body.split(";")]
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise ParseError("matrix spec needs three rows of three integers", 1, 1, "<arg>")
        return "matrix", tuple(tuple(r) for r in rows)
    if kind in ("family1", "family2", "family3"):
        vals = _spec_ints(body, spec)
        need = 3 if kind == "family3" else 2
        if len(vals) != need:
            raise ParseError(f"{kind} takes {need} integers", 1, len(kind) + 2, "<arg>")
        return "family", ("Family" + kind[-1], tuple(vals))
    if kind == "sporadic":
        tag = body.strip()
        if tag not in ("A1", "A2", "A3", "A4"):
            raise ParseError(f"unknown sporadic {tag!r}", 1, len(kind) + 2, "<arg>")
        return "family", ("Sporadic" + tag, ())
    if kind == "triple":
        vals = _spec_ints(body, spec)
        if len(vals) != 3:
            raise ParseError("triple takes 3 integers", 1, len(kind) + 2, "<arg>")
        return "triple", tuple(vals)
    raise ParseError(f"unknown record kind {kind!r}", 1, 1, "<arg>")


def read_input(arg: str) -> Tuple[str, str]:
    """(text, source name) for a path, or ('', arg) when arg is not a file."""
    p = Path(arg)
    if arg != "-" and p.is_file():
        return p.read_text(), arg
    return "", arg


def load_json_record(text: str, source: str) -> Optional[dict]:
    if not text.lstrip().startswith("{"):
        return None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno, source) from None


def parse_any(arg: str) -> Union[Tuple[str, object], dict]:
    """Resolve a compare/invariants argument to an inline spec or JSON record."""
    text, source = read_input(arg)
    if not text:
        return parse_record_spec(arg)
    js = load_json_record(text, source)
    if js is not None:
        return js
    items = parse_classify_file(text, source)
    if len(items) != 1:
        raise ParseError(f"expected one record, found {len(items)}", 1, 1, source)
    return items[0][1]
