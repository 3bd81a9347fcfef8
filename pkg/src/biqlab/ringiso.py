"""Isomorphisms of cohomology rings and diffeomorphism verdicts.

A substitution is a square integer matrix whose row i is the image of the
i-th generator of the source ring, written in the generators of the target.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import gcd
from typing import Iterator, Optional, Sequence, Tuple, Union

import numpy as np

from . import poly as P
from .invariants import InvariantRecord, ReferenceRecord, RingPresentation, ClassData, h_groups
from . import kernels
from .lattice import AbelianGroup, det, inverse_unimodular, matmul

Substitution = Tuple[Tuple[int, ...], ...]
Record = Union[InvariantRecord, ReferenceRecord]

DEFAULT_BOUND = 6


class IncomparableError(ValueError):
    """Records that cannot be compared (different dimensions)."""


def _as_sub(m) -> Substitution:
    return tuple(tuple(int(x) for x in row) for row in m)


def format_substitution(s: Substitution, src: Sequence[str], dst: Sequence[str]) -> str:
    parts = []
    for name, row in zip(src, s):
        parts.append(f"{name} -> {P.format_poly(P.linear(row), dst)}")
    return ", ".join(parts)


def compose(sigma: Substitution, tau: Substitution) -> Substitution:
    """tau after sigma: R1 -> R2 -> R3."""
    return _as_sub(matmul(sigma, tau))


def invert(sigma: Substitution) -> Substitution:
    return _as_sub(inverse_unimodular(sigma))


# -- exact checks -----------------------------------------------------------

def maps_relations(r1: RingPresentation, r2: RingPresentation, s: Substitution,
                   modulus: int = 0) -> bool:
    """Whether every relation of r1 lands in the ideal of r2 (mod ``modulus``)."""
    for rel in r1.relations:
        if not r2.is_zero(P.substitute(rel, s), modulus):
            return False
    return True


def is_ring_iso(r1: RingPresentation, r2: RingPresentation, s: Substitution) -> bool:
    if r1.ngens != r2.ngens or len(s) != r1.ngens:
        return False
    if abs(det(s)) != 1:
        return False
    return maps_relations(r1, r2, s) and maps_relations(r2, r1, invert(s))


def preserves_classes(r2: RingPresentation, c1: ClassData, c2: ClassData, s: Substitution,
                      p1_modulus: int = 0) -> bool:
    """p1 (exactly, or mod ``p1_modulus``), w2 and w4 carried to those of the target."""
    if c1.p1 is None or c2.p1 is None:
        raise ValueError("p1 is not comparable for these records")
    diff = P.add(P.substitute(c1.p1, s), P.scale(c2.p1, -1))
    if not r2.is_zero(diff, p1_modulus):
        return False
    return _preserves_sw(r2, c1, c2, s)


def _preserves_sw(r2, c1, c2, s) -> bool:
    w2 = P.add(P.substitute(c1.w2, s), P.scale(c2.w2, -1))
    if P.reduce_mod(w2, 2):
        return False
    w4 = P.add(P.substitute(c1.w4, s), P.scale(c2.w4, -1))
    return r2.is_zero(w4, 2)


# -- search -----------------------------------------------------------------

def _mod2_allowed(r1, r2, c1, c2) -> set:
    """Matrices over F2 compatible with the rings (and classes) reduced mod 2."""
    n = r1.ngens
    out = set()
    for flat in product((0, 1), repeat=n * n):
        s = tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(n))
        if det(s) % 2 == 0:
            continue
        if not maps_relations(r1, r2, s, 2):
            continue
        if c1 is not None:
            if not _preserves_sw(r2, c1, c2, s):
                continue
            if c1.p1 is not None and c2.p1 is not None:
                diff = P.add(P.substitute(c1.p1, s), P.scale(c2.p1, -1))
                if not r2.is_zero(diff, 2):
                    continue
        out.add(s)
    return out


def _code_rows(rows) -> int:
    out = 0
    for row in rows:
        for x in row:
            out = 2 * out + (x % 2)
    return out


def iter_isos(r1: RingPresentation, r2: RingPresentation, bound: int = DEFAULT_BOUND,
              c1: Optional[ClassData] = None, c2: Optional[ClassData] = None
              ) -> Iterator[Substitution]:
    """Every ring isomorphism r1 -> r2 with entries in [-bound, bound].

    With classes given, only those carrying p1, w2, w4 of the source to the
    target. Candidates come from matching the cubic forms up to sign (any ring
    isomorphism does), each is then verified by exact lattice membership.
    """
    n = r1.ngens
    if r2.ngens != n:
        return
    if r1.top_dim != 6 or r2.top_dim != 6:
        raise ValueError("isomorphism search needs six-dimensional rings")
    if (c1 is None) != (c2 is None):
        raise ValueError("give classes for both rings or for neither")
    allowed = _mod2_allowed(r1, r2, c1, c2)
    if not allowed:
        return
    prefixes = [{_code_rows(s[:k]) for s in allowed} for k in range(n + 1)]
    for eps in (1, -1):
        for s in kernels.cubic_row_search(r1.cubic_tensor, r2.cubic_tensor, bound, eps, prefixes):
            if not is_ring_iso(r1, r2, s):
                continue
            if c1 is not None and not preserves_classes(r2, c1, c2, s):
                continue
            yield s


def witness_key(s: Substitution):
    """Normalization for reported witnesses: small entries, few signs, identity first."""
    flat = [x for row in s for x in row]
    return (sum(abs(x) for x in flat), sum(x < 0 for x in flat), [-x for x in flat])


def iso_search(r1: RingPresentation, r2: RingPresentation, bound: int = DEFAULT_BOUND
               ) -> Optional[Substitution]:
    """Ring isomorphism within the bound (least under :func:`witness_key`), or None."""
    return min(iter_isos(r1, r2, bound), key=witness_key, default=None)


def class_preserving_iso(r1: RingPresentation, c1: ClassData, r2: RingPresentation,
                         c2: ClassData, bound: int = DEFAULT_BOUND) -> Optional[Substitution]:
    return min(iter_isos(r1, r2, bound, c1, c2), key=witness_key, default=None)


def has_class_preserving_iso(r1, c1, r2, c2, bound: int = DEFAULT_BOUND) -> bool:
    return next(iter_isos(r1, r2, bound, c1, c2), None) is not None


def r_family_criterion(c1: int, c2: int, d1: int, d2: int) -> bool:
    same_sum = c1 * c1 + (c1 - c2) ** 2 == d1 * d1 + (d1 - d2) ** 2
    return same_sum and (c1 - d1) % 2 == 0 and (c2 - d2) % 2 == 0


# -- invariants that certify distinctness ---------------------------------

_DIVISORS_24 = (1, 2, 3, 4, 6, 8, 12, 24)


def _summary(rec: Record):
    if isinstance(rec, ReferenceRecord):
        p1 = None if rec.p1 is None else (rec.p1,)
        return rec.dim, rec.h4, p1, rec.w2_zero
    return rec.dim, rec.h4, rec.p1_coords, rec.w2_zero


def p1_divisibility_24(h4: AbelianGroup, coords: Sequence[int]) -> int:
    """Largest d | 24 with p1 in d * (H^4 (x) Z/24); invariant under Aut(H^4)."""
    mods = [gcd(t, 24) for t in h4.torsion] + [24] * h4.free_rank
    best = 1
    for d in _DIVISORS_24:
        if all(x % gcd(d, m) == 0 for x, m in zip(coords, mods)):
            best = d
    return best


def p1_mod24_obstruction(m1: Record, m2: Record) -> Optional[dict]:
    """Certificate that p1 mod 24 tells the two apart, or None."""
    _, h1, p1a, _ = _summary(m1)
    _, h2, p1b, _ = _summary(m2)
    if h1 != h2:
        raise IncomparableError(f"H^4 groups differ: {h1} vs {h2}")
    if p1a is None or p1b is None:
        return None
    d1 = p1_divisibility_24(h1, p1a)
    d2 = p1_divisibility_24(h2, p1b)
    if d1 == d2:
        return None
    return {
        "invariant": "p1 mod 24",
        "detail": "largest divisor d of 24 with p1 divisible by d in H^4 (x) Z/24",
        "values": [d1, d2],
        "p1_coordinates": [list(p1a), list(p1b)],
    }


def cubic_zero_counts(ring: RingPresentation, primes=(2, 3, 5, 7)) -> Tuple[int, ...]:
    """Number of x in F_p^n with <x^3, [M]> = 0, for each prime."""
    T = np.array(ring.cubic_tensor, dtype=np.int64)
    out = []
    for p in primes:
        V = np.array(list(product(range(p), repeat=ring.ngens)), dtype=np.int64)
        mu = np.einsum("abc,va,vb,vc->v", T, V, V, V)
        out.append(int(np.count_nonzero(mu % p == 0)))
    return tuple(out)


@dataclass
class Verdict:
    relation: str  # diffeomorphic | homotopy-equivalent-unknown-diffeo | distinct | undecided
    evidence: dict = field(default_factory=dict)
    certified: bool = True

    def to_json(self) -> dict:
        return {"relation": self.relation, "certified": self.certified, "evidence": self.evidence}


def _sub_evidence(kind: str, s: Substitution, r1, r2) -> dict:
    return {
        "kind": kind,
        "substitution": [list(r) for r in s],
        "text": format_substitution(s, r1.generators, r2.generators),
    }


def decide_diffeo(m1: Record, m2: Record, bound: int = DEFAULT_BOUND) -> Verdict:
    """Compare two invariant records.

    Distinctness is only claimed from an invariant; a failed bounded search
    without one is reported as undecided, naming the bound.
    """
    dim1, h41, p1a, w2a = _summary(m1)
    dim2, h42, p1b, w2b = _summary(m2)
    if dim1 != dim2:
        raise IncomparableError(f"dimensions differ: {dim1} vs {dim2}")

    if isinstance(m1, InvariantRecord) and isinstance(m2, InvariantRecord):
        g1, g2 = h_groups(m1.ring), h_groups(m2.ring)
        if g1 != g2:
            return Verdict("distinct", {"kind": "cohomology groups",
                                        "values": [[str(g) for g in g1], [str(g) for g in g2]]})
    elif h41 != h42:
        return Verdict("distinct", {"kind": "H^4", "values": [str(h41), str(h42)]})

    if w2a is not None and w2b is not None and w2a != w2b:
        return Verdict("distinct", {"kind": "w2 vanishing", "values": [w2a, w2b]})
    cert = p1_mod24_obstruction(m1, m2)
    if cert is not None:
        return Verdict("distinct", dict(cert, kind="p1 mod 24"))

    if not (isinstance(m1, InvariantRecord) and isinstance(m2, InvariantRecord)):
        if isinstance(m1, ReferenceRecord) and isinstance(m2, ReferenceRecord) and m1.tag == m2.tag:
            return Verdict("diffeomorphic", {"kind": "identical reference"})
        return Verdict("undecided", {"kind": "stored invariants agree"}, certified=False)

    r1, r2 = m1.ring, m2.ring
    if r1.ngens == r2.ngens and r1.ngens:
        z1, z2 = cubic_zero_counts(r1), cubic_zero_counts(r2)
        if z1 != z2:
            return Verdict("distinct", {"kind": "cubic form zero counts mod 2, 3, 5, 7",
                                        "values": [list(z1), list(z2)]})
    if p1a is not None and p1b is not None and m1.h4.free_rank:
        k1 = m1.ring.h4.divisibility(P.to_vector(m1.classes.p1, r1.ngens, 2))
        k2 = m2.ring.h4.divisibility(P.to_vector(m2.classes.p1, r2.ngens, 2))
        if k1 != k2:
            return Verdict("distinct", {"kind": "p1 divisibility", "values": [k1, k2]})

    if not _mod2_allowed(r1, r2, None, None):
        return Verdict("distinct", {"kind": "mod 2 rings not isomorphic"})
    if p1a is None or p1b is None:
        s = iso_search(r1, r2, bound)
        if s is None:
            return Verdict("undecided", {"kind": "no ring isomorphism within bound",
                                         "bound": bound}, certified=False)
        if not _preserves_sw(r2, m1.classes, m2.classes, s):
            return Verdict("undecided", {"kind": "p1 not comparable", "bound": bound},
                           certified=False)
        return Verdict("undecided", dict(_sub_evidence("ring isomorphism; p1 not comparable",
                                                       s, r1, r2), bound=bound), certified=False)
    if not _mod2_allowed(r1, r2, m1.classes, m2.classes):
        return Verdict("distinct", {"kind": "mod 2 classes not matched by any mod 2 ring isomorphism"})
    s = class_preserving_iso(r1, m1.classes, r2, m2.classes, bound)
    if s is not None:
        return Verdict("diffeomorphic", _sub_evidence("class preserving isomorphism", s, r1, r2))
    for s in iter_isos(r1, r2, bound):
        if _preserves_sw(r2, m1.classes, m2.classes, s) and preserves_classes(
                r2, m1.classes, m2.classes, s, p1_modulus=24):
            return Verdict("homotopy-equivalent-unknown-diffeo",
                           dict(_sub_evidence("isomorphism matching w2, w4 and p1 mod 24",
                                              s, r1, r2), bound=bound), certified=False)
    return Verdict("undecided", {"kind": "no class preserving isomorphism within bound",
                                 "bound": bound}, certified=False)


# -- Dold-Whitney -----------------------------------------------------------

BASE_LATTICES = {
    "CP2#CP2": ((1, 0), (0, 1)),
    "CP2#-CP2": ((1, 0), (0, -1)),
    "S2xS2": ((0, 1), (1, 0)),
}


@dataclass(frozen=True)
class DoldWhitney:
    congruence: bool
    reduces_to_circle: bool

    def __bool__(self) -> bool:
        return self.congruence


def dold_whitney_check(e: Sequence[int], p1: int, base: str = "CP2#CP2") -> DoldWhitney:
    """p1 = e^2 mod 4 is required; equality means the structure group is a circle."""
    if base not in BASE_LATTICES:
        raise ValueError(f"unknown base lattice {base!r}")
    q = BASE_LATTICES[base]
    e2 = sum(e[i] * q[i][j] * e[j] for i in range(2) for j in range(2))
    return DoldWhitney((p1 - e2) % 4 == 0, p1 == e2)
