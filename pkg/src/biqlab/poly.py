"""Homogeneous integer polynomials in a handful of degree-2 generators.

A polynomial is a dict mapping exponent tuples to nonzero integer
coefficients. Degrees here count polynomial degree, so a cohomology class of
degree 4 is a polynomial of degree 2.
"""

from __future__ import annotations

import re
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Dict, List, Sequence, Tuple

Poly = Dict[Tuple[int, ...], int]


@lru_cache(maxsize=None)
def monomials(nvars: int, degree: int) -> Tuple[Tuple[int, ...], ...]:
    """Exponent tuples of the given degree, lexicographically descending.

    For three variables and degree 2 this is u^2, uv, uw, v^2, vw, w^2.
    """
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return tuple(sorted(out, reverse=True))


def clean(p: Poly) -> Poly:
    return {e: c for e, c in p.items() if c}


def linear(coeffs: Sequence[int]) -> Poly:
    n = len(coeffs)
    return clean({tuple(int(i == j) for j in range(n)): int(c) for i, c in enumerate(coeffs)})


def add(*ps: Poly) -> Poly:
    out: Poly = {}
    for p in ps:
        for e, c in p.items():
            out[e] = out.get(e, 0) + c
    return clean(out)


def scale(p: Poly, k: int) -> Poly:
    return clean({e: k * c for e, c in p.items()})


def mul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return clean(out)


def power(p: Poly, k: int, nvars: int) -> Poly:
    out: Poly = {(0,) * nvars: 1}
    for _ in range(k):
        out = mul(out, p)
    return out


def reduce_mod(p: Poly, m: int) -> Poly:
    return clean({e: c % m for e, c in p.items()})


def degree(p: Poly) -> int:
    degs = {sum(e) for e in p}
    if len(degs) > 1:
        raise ValueError("polynomial is not homogeneous")
    return degs.pop() if degs else 0


def to_vector(p: Poly, nvars: int, deg: int) -> List[int]:
    index = {e: i for i, e in enumerate(monomials(nvars, deg))}
    v = [0] * len(index)
    for e, c in p.items():
        if sum(e) != deg:
            raise ValueError(f"term {e} is not of degree {deg}")
        v[index[e]] += c
    return v


def from_vector(v: Sequence[int], nvars: int, deg: int) -> Poly:
    return clean(dict(zip(monomials(nvars, deg), (int(x) for x in v))))


def substitute(p: Poly, images: Sequence[Sequence[int]]) -> Poly:
    """Replace generator i by the linear form ``images[i]``."""
    lin = [linear(row) for row in images]
    nvars = len(images[0]) if images else 0
    out: Poly = {}
    for e, c in p.items():
        term: Poly = {(0,) * nvars: c}
        for i, k in enumerate(e):
            for _ in range(k):
                term = mul(term, lin[i])
        out = add(out, term)
    return out


def format_poly(p: Poly, names: Sequence[str]) -> str:
    if not p:
        return "0"
    parts = []
    for e in sorted(p, reverse=True):
        c = p[e]
        mono = "*".join(
            n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k
        )
        if not mono:
            body = str(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}*{mono}"
        parts.append(("-" if c < 0 else "+", body))
    text = parts[0][1] if parts[0][0] == "+" else "-" + parts[0][1]
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


def parse_poly(text: str, names: Sequence[str]) -> Poly:
    """Inverse of :func:`format_poly` for simple sums of monomials."""
    text = text.replace(" ", "")
    if text in ("", "0"):
        return {}
    index = {n: i for i, n in enumerate(names)}
    out: Poly = {}
    for sign, coef, body in re.findall(r"([+-]?)(\d*)\*?((?:[a-zA-Z]\w*(?:\^\d+)?\*?)*)", text):
        if not coef and not body:
            continue
        c = int(coef) if coef else 1
        if sign == "-":
            c = -c
        e = [0] * len(names)
        for factor in filter(None, body.split("*")):
            name, _, k = factor.partition("^")
            if name not in index:
                raise ValueError(f"unknown generator {name!r}")
            e[index[name]] += int(k) if k else 1
        out = add(out, {tuple(e): c})
    return out
