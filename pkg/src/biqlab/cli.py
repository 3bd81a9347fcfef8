"""Command line front end: ``biqlab {classify,free,invariants,compare,enumerate,report}``.

Input grammar (``#`` starts a comment, blank lines are ignored except as
block separators, integers are decimal with an optional sign)::

    action-file  = { action-line | blank } ;
    action-line  = rank ";" counts ";" group { "|" group } ;
    rank         = nat ;
    counts       = pos { "," pos } ;          (* one count n_i per sphere S^(2n_i-1) *)
    group        = { int } ;                  (* n_i * rank integers: the weight vectors
                                                 of the factor's coordinates in order *)
    classify-file = block { blank-line { blank-line } block } ;
    block        = row row row                (* a 3x3 action matrix *)
                 | row ;                      (* a triple (a, b, c) for T^2 on S^5 x S^3 *)
    row          = int int int newline ;

Example action lines::

    1; 2; 1 1                 # Hopf action on S^3
    1; 3,2; 2 1 1 | 2 1       # rank 1 on S^5 x S^3
    2; 3,2; 1 0 1 0 1 1 | 0 1 1 1

Record arguments of ``invariants`` and ``compare`` are a JSON record written
by ``biqlab invariants --format json``, a classify-file holding one block, or
an inline spec: ``ref:TAG``, ``matrix:1,2,0;1,1,0;0,1,1``, ``family1:c1,c2``,
``family2:a3,b3``, ``family3:b1,c1,c2``, ``sporadic:A1`` .. ``sporadic:A4``,
``triple:a,b,c``.

Exit codes: 0 success, 2 parse or input error, 3 search budget exhausted,
4 incomparable inputs.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence

from . import __version__
from .actions import (find_fixed_element, freeness_oracle, global_kernel, is_effectively_free,
                      is_free, required_oracle_bound)
from .formats import (ParseError, format_action_line, parse_action_file, parse_any,
                      parse_classify_file, read_input)
from .homotopy import catalogue, check_elliptic, enumerate_pairs, pairs_tsv, signature_table_tsv
from .invariants import (InvariantRecord, ReferenceRecord, p1_multiple, record_t3, record_table4,
                         reference_topology)
from .moves import (DEFAULT_BUDGET, KINDS, SPORADIC, canonicalize_t3, classify_s5s3,
                    enumerate_valid, family_matrix, is_valid, s5s3_is_free)
from .poly import format_poly, from_vector
from .ringiso import DEFAULT_BOUND, IncomparableError, decide_diffeo

EXIT_OK, EXIT_PARSE, EXIT_BUDGET, EXIT_INCOMPARABLE = 0, 2, 3, 4
SCHEMA = 1


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


@dataclass
class JobConfig:
    command: str
    inputs: Sequence[str] = ()
    bound: Optional[int] = None
    budget: int = DEFAULT_BUDGET
    fmt: str = "json"
    jobs: int = 1
    seed: int = 0
    oracle: bool = False
    dim: Optional[int] = None

    def __post_init__(self):
        if self.fmt not in ("json", "tsv"):
            raise CliError(f"unknown format {self.fmt!r}", EXIT_PARSE)
        for name in ("bound", "budget", "jobs"):
            v = getattr(self, name)
            if v is not None and v < (0 if name == "bound" else 1):
                raise CliError(f"--{name} must be positive", EXIT_PARSE)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _envelope(command: str, results) -> dict:
    return {"schema": SCHEMA, "command": command, "results": results}


def _tsv(header: Sequence[str], rows) -> str:
    lines = ["\t".join(header)]
    lines += ["\t".join("" if x is None else str(x) for x in r) for r in rows]
    return "\n".join(lines) + "\n"


# -- cache --------------------------------------------------------------------

def _cache_get(key: dict):
    root = os.environ.get("BIQ_LAB_CACHE")
    if not root:
        return None, None
    digest = hashlib.sha256(json.dumps(dict(key, v=__version__), sort_keys=True).encode()).hexdigest()
    path = Path(root) / digest[:2] / f"{digest}.json"
    if path.is_file():
        try:
            return json.loads(path.read_text()), path
        except (OSError, json.JSONDecodeError):
            pass
    return None, path


def _cache_put(path: Optional[Path], value) -> None:
    if path is None:
        return
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(value, sort_keys=True))
        tmp.replace(path)
    except OSError:
        pass  # the cache is optional


# -- classify -----------------------------------------------------------------

def _classify_item(item, budget: int) -> dict:
    kind, data = item
    if kind == "matrix":
        m = tuple(tuple(r) for r in data)
        if not is_valid(m):
            raise CliError(f"matrix {[list(r) for r in m]} does not give a free action", EXIT_PARSE)
        form = canonicalize_t3(m, budget)
        out = {"input": [list(r) for r in m], "space": "(S^3)^3", "form": str(form),
               "classified": form.classified}
        out.update(form.to_json())
        return out
    if not s5s3_is_free(data):
        raise CliError(f"triple {list(data)} does not give a free action", EXIT_PARSE)
    form = classify_s5s3(data)
    out = {"input": list(data), "space": "S^5 x S^3", "form": str(form), "classified": True}
    out.update(form.to_json())
    return out


def cmd_classify(cfg: JobConfig) -> tuple:
    results = []
    for arg in cfg.inputs:
        text, source = read_input(arg)
        if not text:
            raise CliError(f"{arg}: cannot read input file", EXIT_PARSE)
        for line, item in parse_classify_file(text, source):
            r = _classify_item(item, cfg.budget)
            r["line"] = line
            r["file"] = source
            results.append(r)
    code = EXIT_OK if all(r["classified"] for r in results) else EXIT_BUDGET
    if cfg.fmt == "json":
        return _dump(_envelope("classify", results)), code
    rows = [(r["file"], r["line"], json.dumps(r["input"]), r["form"], " ".join(r["witness"]))
            for r in results]
    return _tsv(("file", "line", "input", "form", "witness"), rows), code


# -- free -----------------------------------------------------------------------

def _free_report(a, oracle: bool) -> dict:
    free = is_free(a)
    eff = is_effectively_free(a)
    out = {
        "action": format_action_line(a),
        "space": str(a.space),
        "free": free,
        "effectively_free": eff,
        "status": "free" if free else "effectively-free" if eff else "neither",
        "kernel": str(global_kernel(a)),
    }
    if not free:
        need = required_oracle_bound(a)
        hit = find_fixed_element(a, need)
        if hit is not None:
            p, t = hit
            out["witness"] = {"order": p, "element": [f"{x}/{p}" for x in t]}
    if oracle:
        need = required_oracle_bound(a)
        verdict = freeness_oracle(a, need)
        out["oracle"] = {"bound": need, "free": verdict, "agrees": verdict == free}
    return out


def cmd_free(cfg: JobConfig) -> tuple:
    results = []
    for arg in cfg.inputs:
        text, source = read_input(arg)
        if not text:
            raise CliError(f"{arg}: cannot read input file", EXIT_PARSE)
        for a in parse_action_file(text, source):
            results.append(_free_report(a, cfg.oracle))
    if cfg.fmt == "json":
        return _dump(_envelope("free", results)), EXIT_OK
    rows = []
    for r in results:
        w = r.get("witness")
        rows.append((r["action"], r["status"], r["kernel"],
                     "" if not w else f"order {w['order']}: ({', '.join(w['element'])})",
                     "" if "oracle" not in r else r["oracle"]["agrees"]))
    return _tsv(("action", "status", "kernel", "witness", "oracle_agrees"), rows), EXIT_OK


# -- records ----------------------------------------------------------------------

def resolve_record(arg: str):
    parsed = parse_any(arg)
    if isinstance(parsed, dict):
        if "tag" in parsed and "provenance" in parsed:
            return reference_topology(parsed["tag"])
        try:
            return InvariantRecord.from_json(parsed)
        except (KeyError, TypeError, ValueError) as e:
            raise CliError(f"{arg}: not an invariant record ({e})", EXIT_PARSE) from None
    kind, data = parsed
    try:
        if kind == "ref":
            return reference_topology(data)
        if kind == "family":
            name, params = data
            return record_t3(family_matrix(name, params), f"{name}{'(' + ','.join(map(str, params)) + ')' if params else ''}")
        if kind == "matrix":
            return record_t3(data)
        if kind == "triple":
            return record_table4(data)
    except KeyError as e:
        raise CliError(str(e).strip("'\""), EXIT_PARSE) from None
    except ValueError as e:
        raise CliError(f"{arg}: {e}", EXIT_PARSE) from None
    raise CliError(f"{arg}: unsupported record", EXIT_PARSE)  # pragma: no cover


def _record_json(rec) -> dict:
    return rec.to_json()


def cmd_invariants(cfg: JobConfig) -> tuple:
    results = []
    for arg in cfg.inputs:
        rec = resolve_record(arg)
        if isinstance(rec, InvariantRecord):
            hit, path = _cache_get({"cmd": "invariants", "arg": rec.label, "src": rec.source,
                                    "rel": rec.ring.to_json()})
            if hit is None:
                hit = _record_json(rec)
                _cache_put(path, hit)
            results.append(hit)
        else:
            results.append(_record_json(rec))
    if cfg.fmt == "json":
        return _dump(_envelope("invariants", results)), EXIT_OK
    rows = []
    for r in results:
        if "provenance" in r:
            rows.append((r["tag"], r["dim"], "", f"H^4 = {r['h4_text']}", r["p1"],
                         "" if r["w2_zero"] is None else ("0" if r["w2_zero"] else "nonzero"), ""))
        else:
            names, n = r["generators"], len(r["generators"])
            rows.append((r["label"], r["top_dim"], "; ".join(r["relations_text"]),
                         " ".join(r["h_groups_text"]), r.get("p1_text"),
                         format_poly(from_vector(r["w2"], n, 1), names),
                         format_poly(from_vector(r["w4"], n, 2), names)))
    return _tsv(("label", "dim", "relations", "cohomology", "p1", "w2", "w4"), rows), EXIT_OK


def compare_records(a, b, bound: int) -> dict:
    key = {"cmd": "compare", "a": a.to_json(), "b": b.to_json(), "bound": bound}
    hit, path = _cache_get(key)
    if hit is not None:
        return hit
    v = decide_diffeo(a, b, bound).to_json()
    _cache_put(path, v)
    return v


def cmd_compare(cfg: JobConfig) -> tuple:
    if len(cfg.inputs) != 2:
        raise CliError("compare takes exactly two records", EXIT_PARSE)
    a, b = (resolve_record(x) for x in cfg.inputs)
    bound = DEFAULT_BOUND if cfg.bound is None else cfg.bound
    try:
        v = compare_records(a, b, bound)
    except IncomparableError as e:
        raise CliError(f"incomparable inputs: {e}", EXIT_INCOMPARABLE) from None
    label = lambda r: r.tag if isinstance(r, ReferenceRecord) else r.label  # noqa: E731
    result = dict(v, inputs=[label(a), label(b)], bound=bound)
    code = EXIT_BUDGET if v["relation"] == "undecided" and "bound" in v["evidence"] else EXIT_OK
    if cfg.fmt == "json":
        return _dump(_envelope("compare", [result])), code
    ev = v["evidence"]
    return _tsv(("a", "b", "relation", "certified", "evidence"),
                [(label(a), label(b), v["relation"], v["certified"],
                  ev.get("text") or ev.get("kind"))]), code


# -- enumerate --------------------------------------------------------------------

def _classify_t3_chunk(args):
    chunk, budget = args
    return [(m, canonicalize_t3(m, budget)) for m in chunk]


def _ordered_map(fn, items: list, cfg: JobConfig, chunk: int = 256) -> list:
    """Map over items in a seed-shuffled order and return results in input order."""
    order = list(range(len(items)))
    random.Random(cfg.seed).shuffle(order)
    shuffled = [items[i] for i in order]
    chunks = [shuffled[i:i + chunk] for i in range(0, len(shuffled), chunk)]
    if cfg.jobs > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(cfg.jobs) as ex:
            parts = list(ex.map(fn, [(c, cfg.budget) for c in chunks]))
    else:
        parts = [fn((c, cfg.budget)) for c in chunks]
    flat = [x for p in parts for x in p]
    out = [None] * len(items)
    for i, x in zip(order, flat):
        out[i] = x
    return out


def enumerate_t3(cfg: JobConfig) -> List[dict]:
    bound = 3 if cfg.bound is None else cfg.bound
    mats = list(enumerate_valid(bound))
    out = []
    for m, form in _ordered_map(_classify_t3_chunk, mats, cfg):
        out.append({"matrix": [list(r) for r in m], "form": str(form), "classified": form.classified,
                    "witness": [str(w) for w in form.witness]})
    return out


def enumerate_s5s3(cfg: JobConfig) -> List[dict]:
    bound = 3 if cfg.bound is None else cfg.bound
    rng = range(-bound, bound + 1)
    out = []
    for t in ((a, b, c) for a in rng for b in rng for c in rng):
        if s5s3_is_free(t):
            f = classify_s5s3(t)
            out.append({"triple": list(t), "form": str(f), "classified": True,
                        "witness": list(f.moves)})
    return out


def cmd_enumerate(cfg: JobConfig) -> tuple:
    what = cfg.inputs[0] if cfg.inputs else "t3"
    if what == "pairs":
        dims = [cfg.dim] if cfg.dim else [6, 7]
        if any(d not in (6, 7) for d in dims):
            raise CliError("--dim must be 6 or 7", EXIT_PARSE)
        if cfg.fmt == "tsv":
            return "".join(pairs_tsv(d) for d in dims), EXIT_OK
        res = []
        for d in dims:
            for row in catalogue(d):
                kept, dropped = enumerate_pairs(row.signature, d, with_excluded=True)
                res += [{"dim": d, "G": str(p.G), "H": str(p.H), "example": p.example,
                         "source": p.source(), "excluded": None} for p in kept]
                res += [{"dim": d, "G": str(p.G), "H": str(p.H), "example": p.example,
                         "source": p.source(), "excluded": e.reason} for p, e in dropped]
        return _dump(_envelope("enumerate", res)), EXIT_OK
    if what == "t3":
        res = enumerate_t3(cfg)
        key = "matrix"
    elif what == "s5s3":
        res = enumerate_s5s3(cfg)
        key = "triple"
    else:
        raise CliError(f"unknown enumeration {what!r} (t3, s5s3, pairs)", EXIT_PARSE)
    code = EXIT_OK if all(r["classified"] for r in res) else EXIT_BUDGET
    if cfg.fmt == "json":
        return _dump(_envelope("enumerate", res)), code
    return _tsv((key, "form", "witness"),
                [(json.dumps(r[key]), r["form"], " ".join(r["witness"])) for r in res]), code


# -- report -------------------------------------------------------------------------

_FAMILY_TEMPLATES = {
    "Family1": ("[[1,2,0],[1,1,0],[c1,c2,1]]", "u^2 + 2*u*v; u*v + v^2; c1*u*w + c2*v*w + w^2"),
    "Family2": ("[[1,2,a3],[1,1,b3],[0,0,1]]", "u^2 + 2*u*v + a3*u*w; u*v + v^2 + b3*v*w; w^2"),
    "Family3": ("[[1,0,0],[b1,1,0],[c1,c2,1]]", "u^2; b1*u*v + v^2; c1*u*w + c2*v*w + w^2"),
}


def _t3_catalogue_rows():
    rows = []
    for kind in KINDS:
        if kind in SPORADIC:
            rec = record_t3(SPORADIC[kind], kind)
            rows.append((kind, json.dumps([list(r) for r in SPORADIC[kind]], separators=(",", ":")),
                         "; ".join(rec.ring.format_relations()),
                         p1_multiple(rec.ring, rec.classes)))
        else:
            template, rels = _FAMILY_TEMPLATES[kind]
            rows.append((kind, template, rels, ""))
    return rows


def _s5s3_rows():
    rows = []
    for t in [(0, 0, 0), (1, 2, 0), (0, 0, 1), (0, 0, 2), (1, 1, 2), (2, 2, 1)]:
        rec = record_table4(t)
        c, names = rec.classes, rec.ring.generators
        p1 = c.p1_text if c.p1 is None else format_poly(c.p1, names)
        rows.append((json.dumps(list(t), separators=(",", ":")), rec.source["row"], "; ".join(rec.ring.format_relations()),
                     p1, format_poly(c.w2, names) or "0", format_poly(c.w4, names) or "0"))
    return rows


def cmd_report(n: int, fmt: str = "tsv") -> str:
    """Signature table, candidate pairs and, in dimension 6, the T^3 and T^2 lists."""
    if n not in (6, 7):
        raise CliError("report dimension must be 6 or 7", EXIT_PARSE)
    if fmt == "json":
        sigs = [{"signature": dict((f"pi{i}", r) for i, r in row.signature.ranks),
                 "example": row.example, "elliptic": bool(check_elliptic(row.signature, n))}
                for row in catalogue(n)]
        pairs = []
        for row in catalogue(n):
            pairs += [{"G": str(p.G), "H": str(p.H), "example": p.example, "source": p.source()}
                      for p in enumerate_pairs(row.signature, n)]
        body = {"dim": n, "signatures": sigs, "pairs": pairs}
        if n == 6:
            body["t3_catalogue"] = [dict(zip(("kind", "matrix", "relations", "p1_multiple"), r))
                                    for r in _t3_catalogue_rows()]
            body["s5s3_table"] = [dict(zip(("triple", "row", "relations", "p1", "w2", "w4"), r))
                                  for r in _s5s3_rows()]
        return _dump(_envelope("report", [body]))
    parts = [f"## signatures (dimension {n})\n", signature_table_tsv(n),
             f"\n## pairs (dimension {n})\n", pairs_tsv(n)]
    if n == 6:
        parts += ["\n## T^3 actions on (S^3)^3\n",
                  _tsv(("kind", "matrix", "relations", "p1_multiple"), _t3_catalogue_rows()),
                  "\n## T^2 actions on S^5 x S^3\n",
                  _tsv(("triple", "row", "relations", "p1", "w2", "w4"), _s5s3_rows())]
    return "".join(parts)


# -- entry point --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="biqlab", description="Classify torus quotients of products of spheres.",
        epilog="Input formats are described in docs/grammar.md. Exit codes: 0 ok, "
               "2 parse or input error, 3 search budget exhausted, 4 incomparable inputs.")
    p.add_argument("--version", action="version", version=f"biqlab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, bound=True, fmt="json"):
        sp.add_argument("--format", choices=("json", "tsv"), default=fmt)
        sp.add_argument("--jobs", type=int, default=1, help="worker processes (output order is fixed)")
        if bound:
            sp.add_argument("--bound", type=int, default=None,
                            help="entry bound: enumeration range, or substitution entries for compare")
        sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="reparametrization depth for canonical forms")
        sp.add_argument("--seed", type=int, default=0, help="work-partition shuffle; never changes output")

    sp = sub.add_parser("classify", help="canonical form of action matrices or triples")
    sp.add_argument("inputs", nargs="+")
    common(sp)
    sp = sub.add_parser("free", help="freeness of linear torus actions")
    sp.add_argument("inputs", nargs="+")
    sp.add_argument("--oracle", action="store_true", help="cross-check by brute force")
    common(sp)
    sp = sub.add_parser("invariants", help="cohomology ring and characteristic classes")
    sp.add_argument("inputs", nargs="+")
    common(sp)
    sp = sub.add_parser("compare", help="decide diffeomorphism between two records")
    sp.add_argument("inputs", nargs=2)
    common(sp)
    sp = sub.add_parser("enumerate", help="enumerate t3 matrices, s5s3 triples or pairs")
    sp.add_argument("inputs", nargs="?", default="t3", choices=("t3", "s5s3", "pairs"))
    sp.add_argument("--dim", type=int, default=None)
    common(sp)
    sp = sub.add_parser("report", help="regenerate the classification tables")
    sp.add_argument("dim", type=int, choices=(6, 7))
    common(sp, bound=False, fmt="tsv")
    return p


def run(argv: Optional[Sequence[str]] = None) -> tuple:
    """(output text, exit code); never raises for expected failures."""
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return "", EXIT_PARSE if e.code else EXIT_OK
    try:
        if ns.command == "report":
            JobConfig("report", fmt=ns.format, jobs=ns.jobs, budget=ns.budget)
            return cmd_report(ns.dim, ns.format), EXIT_OK
        inputs = ns.inputs if isinstance(ns.inputs, list) else [ns.inputs]
        cfg = JobConfig(ns.command, inputs, ns.bound, ns.budget, ns.format, ns.jobs, ns.seed,
                        getattr(ns, "oracle", False), getattr(ns, "dim", None))
        handler = {"classify": cmd_classify, "free": cmd_free, "invariants": cmd_invariants,
                   "compare": cmd_compare, "enumerate": cmd_enumerate}[ns.command]
        return handler(cfg)
    except ParseError as e:
        return f"error: {e}\n", EXIT_PARSE
    except CliError as e:
        return f"error: {e}\n", e.code


def main(argv: Optional[Sequence[str]] = None) -> int:
    text, code = run(argv)
    stream = sys.stdout if code in (EXIT_OK, EXIT_BUDGET) else sys.stderr
    try:
        stream.write(text)
        stream.flush()
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the interpreter's own flush
        os.dup2(os.open(os.devnull, os.O_WRONLY), stream.fileno())
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
