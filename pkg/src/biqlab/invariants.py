"""Cohomology rings, cohomology groups and characteristic classes of quotients."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

from . import poly as P
from .lattice import AbelianGroup, CokernelMap
from .moves import as_matrix, is_valid

Poly = P.Poly


@dataclass(frozen=True, eq=False)
class RingPresentation:
    """Z[generators] / (relations), generators in cohomological degree 2.

    Relations are homogeneous polynomials of polynomial degree 2 (cohomological
    degree 4) or 3 (degree 6).
    """

    generators: Tuple[str, ...]
    relations: Tuple[Poly, ...]
    top_dim: int = 6

    def __post_init__(self):
        if self.top_dim not in (6, 7):
            raise ValueError("top dimension must be 6 or 7")
        n = len(self.generators)
        for r in self.relations:
            for e in r:
                if len(e) != n:
                    raise ValueError("relation has wrong number of variables")
            if r and P.degree(r) not in (2, 3):
                raise ValueError("relations must have cohomological degree 4 or 6")

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def relations_of_degree(self, deg: int) -> List[Poly]:
        return [r for r in self.relations if r and P.degree(r) == deg]

    def relation_matrix(self, deg: int = 2) -> List[List[int]]:
        """Columns span the relation lattice in polynomial degree ``deg``."""
        n = self.ngens
        cols: List[List[int]] = []
        for r in self.relations:
            if not r:
                continue
            d = P.degree(r)
            if d > deg:
                continue
            for mono in P.monomials(n, deg - d):
                cols.append(P.to_vector(P.mul(r, {mono: 1}), n, deg))
        size = len(P.monomials(n, deg))
        return [[c[i] for c in cols] for i in range(size)]

    @cached_property
    def h4(self) -> CokernelMap:
        return CokernelMap(self.relation_matrix(2), len(P.monomials(self.ngens, 2)))

    @cached_property
    def h6(self) -> CokernelMap:
        return CokernelMap(self.relation_matrix(3), len(P.monomials(self.ngens, 3)))

    def is_zero(self, p: Poly, modulus: int = 0) -> bool:
        """Whether a homogeneous class vanishes in the quotient (mod ``modulus``)."""
        if not p:
            return True
        d = P.degree(p)
        cmap = {2: self.h4, 3: self.h6}.get(d)
        if d == 1:
            return all(c % modulus == 0 for c in p.values()) if modulus else False
        if cmap is None:
            raise ValueError(f"no quotient computed in polynomial degree {d}")
        return cmap.is_zero(P.to_vector(p, self.ngens, d), modulus)

    @cached_property
    def fundamental_functional(self) -> Tuple[int, ...]:
        """Values of the top class on degree-3 monomials (needs H^6 = Z)."""
        if self.top_dim != 6 or self.h6.group != AbelianGroup(1):
            raise ValueError(f"top cohomology is {self.h6.group}, not Z")
        n = self.ngens
        out = []
        for mono in P.monomials(n, 3):
            out.append(self.h6.coords(P.to_vector({mono: 1}, n, 3))[-1])
        return tuple(out)

    @cached_property
    def cubic_tensor(self) -> Tuple[Tuple[Tuple[int, ...], ...], ...]:
        """Symmetric tensor T[a][b][c] = <x_a x_b x_c, [M]>."""
        n = self.ngens
        values = dict(zip(P.monomials(n, 3), self.fundamental_functional))
        T = []
        for a in range(n):
            Ta = []
            for b in range(n):
                row = []
                for c in range(n):
                    e = [0] * n
                    e[a] += 1
                    e[b] += 1
                    e[c] += 1
                    row.append(values[tuple(e)])
                Ta.append(tuple(row))
            T.append(tuple(Ta))
        return tuple(T)

    def evaluate(self, p: Poly) -> int:
        """Pairing of a degree-6 class with the fundamental class."""
        v = P.to_vector(p, self.ngens, 3)
        return sum(x * y for x, y in zip(v, self.fundamental_functional))

    def format_relations(self) -> List[str]:
        return [P.format_poly(r, self.generators) for r in self.relations]

    def to_json(self) -> dict:
        return {
            "generators": list(self.generators),
            "relations": [P.to_vector(r, self.ngens, P.degree(r)) for r in self.relations],
            "relation_degrees": [2 * P.degree(r) for r in self.relations],
            "relations_text": self.format_relations(),
            "top_dim": self.top_dim,
        }

    @classmethod
    def from_json(cls, data: dict) -> "RingPresentation":
        n = len(data["generators"])
        rels = tuple(
            P.from_vector(vec, n, d // 2)
            for vec, d in zip(data["relations"], data["relation_degrees"])
        )
        return cls(tuple(data["generators"]), rels, data.get("top_dim", 6))


@dataclass(frozen=True)
class ClassData:
    """First Pontryagin class and mod-2 Stiefel-Whitney classes as polynomials.

    ``p1`` is None when the stored value cannot be expressed in the ring's
    generators; ``p1_text`` then keeps the verbatim entry.
    """

    p1: Optional[Poly]
    w2: Poly
    w4: Poly
    p1_text: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "w2", P.reduce_mod(self.w2, 2))
        object.__setattr__(self, "w4", P.reduce_mod(self.w4, 2))

    __hash__ = None  # type: ignore[assignment]

    @property
    def p1_comparable(self) -> bool:
        return self.p1 is not None

    def to_json(self, names: Sequence[str]) -> dict:
        n = len(names)
        return {
            "p1": None if self.p1 is None else P.to_vector(self.p1, n, 2),
            "p1_text": self.p1_text if self.p1 is None else P.format_poly(self.p1, names),
            "w2": P.to_vector(self.w2, n, 1),
            "w4": P.to_vector(self.w4, n, 2),
        }

    @classmethod
    def from_json(cls, data: dict, n: int) -> "ClassData":
        p1 = None if data.get("p1") is None else P.from_vector(data["p1"], n, 2)
        return cls(p1, P.from_vector(data["w2"], n, 1), P.from_vector(data["w4"], n, 2),
                   None if p1 is not None else data.get("p1_text"))


def _lin(*coeffs: int) -> Poly:
    return P.linear(coeffs)


def present_t3_quotient(a: Sequence[Sequence[int]]) -> Tuple[RingPresentation, ClassData]:
    """Ring and classes of the free T^3 quotient of (S^3)^3 given by ``a``."""
    m = as_matrix(a)
    if not is_valid(m):
        raise ValueError(f"invalid action matrix {m}")
    (_, a2, a3), (b1, _, b3), (c1, c2, _) = m
    u, v, w = _lin(1, 0, 0), _lin(0, 1, 0), _lin(0, 0, 1)
    rels = (
        P.mul(u, _lin(1, a2, a3)),
        P.mul(v, _lin(b1, 1, b3)),
        P.mul(w, _lin(c1, c2, 1)),
    )
    x, y, z = _lin(0, a2, a3), _lin(b1, 0, b3), _lin(c1, c2, 0)
    p1 = P.add(P.mul(x, x), P.mul(y, y), P.mul(z, z))
    w2 = _lin(b1 + c1, a2 + c2, a3 + b3)
    w4 = P.add(P.mul(x, y), P.mul(x, z), P.mul(y, z))
    return RingPresentation(("u", "v", "w"), rels), ClassData(p1, w2, w4)


def h_groups(ring: RingPresentation) -> List[AbelianGroup]:
    """H^0 .. H^top; degree 4 from the relation lattice, the rest by duality."""
    n = ring.ngens
    Z = AbelianGroup(1)
    zero = AbelianGroup(0)
    h4 = ring.h4.group
    if ring.top_dim == 6:
        return [Z, zero, AbelianGroup(n), zero, h4, zero, Z]
    nrel = len(ring.relations_of_degree(2))
    rank = len(ring.h4.factors)
    return [Z, zero, AbelianGroup(n), AbelianGroup(nrel - rank), h4, AbelianGroup(n), zero, Z]


def p1_multiple(ring: RingPresentation, classes: ClassData) -> int:
    """n such that p1 is n times a primitive class of the free part of H^4."""
    if classes.p1 is None:
        raise ValueError("p1 not comparable for this record")
    return ring.h4.divisibility(P.to_vector(classes.p1, ring.ngens, 2))


# -- seven-dimensional (S^3)^3 // T^2 ---------------------------------------

def k_invariant(weights: Sequence[int]) -> int:
    """Order of H^4 (0 when infinite) for the rank-2 normal form (a, ..., j)."""
    a, b, c, d, e, f, g, h, i, j = weights
    return a * d * (b * e * j * h - b * f * i * h - b * f * j * g + c * f * i * g)


def transgression_presentation_t2(weights: Sequence[int]) -> List[List[int]]:
    """Rows: products of the two coordinate weight forms of each S^3 factor.

    Coefficients are in the basis x^2, xy, y^2.
    """
    a, b, c, d, e, f, g, h, i, j = weights
    return [
        [a * b, a * c, 0],
        [0, d * e, d * f],
        [g * i, g * j + h * i, h * j],
    ]


def t2_ring(weights: Sequence[int]) -> RingPresentation:
    rows = transgression_presentation_t2(weights)
    rels = tuple(P.from_vector(r, 2, 2) for r in rows)
    return RingPresentation(("x", "y"), rels, top_dim=7)


# -- (S^5 x S^3) // T^2 -------------------------------------------------------

def _uv(text: str) -> Poly:
    return P.parse_poly(text, ("u", "v"))


def table4_row(triple: Sequence[int]) -> Tuple[RingPresentation, ClassData, str]:
    """Ring, classes and the row label for a free triple (a, b, c).

    The (a, b, 0) row prints its p1 with a symbol that is not a generator of
    the ring; that entry is kept as text and excluded from comparisons.
    """
    from .moves import classify_s5s3

    form = classify_s5s3(triple)
    a, b, c = form.params
    if form.kind == "Family(a,b,0)":
        rels = (_uv("u^2"), P.add(_uv("v^3"), P.scale(_uv("u*v^2"), 2 * (a + b))))
        if a + b == 0:
            classes = ClassData(_uv("3*v^2"), _uv("v"), _uv("v^2"))
        else:
            classes = ClassData(None, _uv("v"), _uv("v^2"), p1_text=f"3v^2+{4 * (a + b)}vw")
        label = "(a,b,0)"
    elif form.kind == "Family(0,0,c)" or form.kind == "Sporadic" and form.same_as is not None:
        cc = c if form.kind == "Family(0,0,c)" else form.same_as[2]
        rels = (P.add(_uv("u^2"), P.scale(_uv("u*v"), -cc)), _uv("v^3"))
        classes = ClassData(P.scale(_uv("v^2"), cc * cc + 3), P.scale(_uv("v"), cc + 1),
                            P.scale(_uv("v^2"), cc + 1))
        label = "(0,0,c)"
    elif (a, b, c) == (2, 2, 1):
        rels = (P.add(_uv("u^2"), _uv("-u*v")), P.add(_uv("v^3"), _uv("-4*u*v^2")))
        classes = ClassData(_uv("4*v^2 + 28*u^2"), {}, {})
        label = "(2,2,1)"
    elif (a, b, c) == (1, 1, 2):
        rels = (P.add(_uv("u^2"), _uv("-2*u*v")), _uv("v^3"))
        classes = ClassData(_uv("8*u*v + 7*v^2"), _uv("v"), _uv("v^2"))
        label = "(1,1,2)"
    else:  # pragma: no cover - classify_s5s3 only returns the kinds above
        raise ValueError(f"no row for {triple}")
    return RingPresentation(("u", "v"), rels), classes, label


# -- stored reference invariants --------------------------------------------

@dataclass(frozen=True)
class ReferenceRecord:
    """Invariants quoted as data, not recomputed.

    ``h4`` is the degree-4 group; ``p1`` is a coordinate in it (defined up to
    the sign of the chosen generator) or None when not recorded.
    """

    tag: str
    description: str
    dim: int
    cohomology_like: str
    h4: AbelianGroup
    p1: Optional[int]
    w2_zero: Optional[bool] = None
    note: str = ""

    def to_json(self) -> dict:
        return {
            "tag": self.tag,
            "description": self.description,
            "dim": self.dim,
            "cohomology_like": self.cohomology_like,
            "h4": self.h4.to_json(),
            "h4_text": str(self.h4),
            "p1": self.p1,
            "w2_zero": self.w2_zero,
            "note": self.note,
            "provenance": "stored reference value",
        }


_REFERENCES: Dict[str, ReferenceRecord] = {
    r.tag: r
    for r in [
        ReferenceRecord("X", "S^7 x_{S^3} S^3, Hopf on S^7 and conjugation on S^3", 7,
                        "S^3 x S^4", AbelianGroup(1), 4,
                        note="p1 = +-4; nontrivial S^3 bundle over S^4"),
        ReferenceRecord("Y", "T_1 S^4 x_{S^3} S^3", 7, "S^3 x S^4", AbelianGroup(1), 8,
                        note="p1 = +-8; nontrivial S^3 bundle over S^4"),
        ReferenceRecord("S3xS4", "S^3 x S^4", 7, "S^3 x S^4", AbelianGroup(1), 0,
                        note="trivial bundle"),
        ReferenceRecord("S4xS2", "S^4 x S^2", 6, "S^2 x S^4", AbelianGroup(1), 0, True,
                        note="trivial S^4 bundle over S^2"),
        ReferenceRecord("S4xhatS2", "the nontrivial S^4 bundle over S^2", 6, "S^2 x S^4",
                        AbelianGroup(1), 0, False,
                        note="distinguished from S^4 x S^2 by w2; stored, not derived"),
        ReferenceRecord("S3-bundle-CP2", "S^3 bundle over CP^2 from the sporadic S^1 actions",
                        7, "S^3 x CP^2", AbelianGroup(1), 0,
                        note="p1 = 0 in H^4"),
        ReferenceRecord("S3xCP2", "S^3 x CP^2", 7, "S^3 x CP^2", AbelianGroup(1), 3,
                        note="p1 = 3 times a generator"),
    ]
}


def reference_tags() -> List[str]:
    return sorted(_REFERENCES) + ["s3cp2-family1:<a>,<b>"]


def reference_topology(tag: str) -> ReferenceRecord:
    """Stored invariants; ``s3cp2-family1:a,b`` gives H^4 = Z/(a^2-b^2), p1 = 4a^2."""
    if tag in _REFERENCES:
        return _REFERENCES[tag]
    if tag.startswith("s3cp2-family1:"):
        try:
            a, b = (int(x) for x in tag.split(":", 1)[1].split(","))
        except ValueError:
            raise KeyError(f"bad parameters in {tag!r}") from None
        order = abs(a * a - b * b)
        h4 = AbelianGroup(1) if order == 0 else AbelianGroup.from_factors([order], 1)
        p1 = 4 * a * a if order == 0 else (4 * a * a) % order
        return ReferenceRecord(tag, f"first SU(3) x SU(2) family with a={a}, b={b}", 7,
                               "S^3 x CP^2", h4, p1,
                               note="H^4 = Z/(a^2-b^2), p1 = 4a^2")
    raise KeyError(f"unknown reference tag {tag!r}")


# -- records compared by the ring-iso module --------------------------------

@dataclass(frozen=True, eq=False)
class InvariantRecord:
    """A computed ring with its classes, tagged with where it came from."""

    label: str
    ring: RingPresentation
    classes: ClassData
    source: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.ring.top_dim

    @property
    def h4(self) -> AbelianGroup:
        return self.ring.h4.group

    @property
    def p1_coords(self) -> Optional[Tuple[int, ...]]:
        if self.classes.p1 is None:
            return None
        return self.ring.h4.coords(P.to_vector(self.classes.p1, self.ring.ngens, 2))

    @property
    def w2_zero(self) -> bool:
        return not self.classes.w2

    def to_json(self) -> dict:
        out = {"label": self.label, "source": self.source}
        out.update(self.ring.to_json())
        out.update(self.classes.to_json(self.ring.generators))
        out["h_groups"] = [g.to_json() for g in h_groups(self.ring)]
        out["h_groups_text"] = [str(g) for g in h_groups(self.ring)]
        if self.classes.p1 is not None and self.ring.h4.group.free_rank:
            out["p1_multiple"] = p1_multiple(self.ring, self.classes)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "InvariantRecord":
        ring = RingPresentation.from_json(data)
        classes = ClassData.from_json(data, ring.ngens)
        return cls(data.get("label", ""), ring, classes, data.get("source", {}))


def record_t3(a: Sequence[Sequence[int]], label: str = "") -> InvariantRecord:
    ring, classes = present_t3_quotient(a)
    m = as_matrix(a)
    return InvariantRecord(label or f"T3{[list(r) for r in m]}", ring, classes,
                           {"kind": "t3", "matrix": [list(r) for r in m]})


def record_table4(triple: Sequence[int]) -> InvariantRecord:
    ring, classes, row = table4_row(triple)
    return InvariantRecord(f"S5xS3/T2{tuple(triple)}", ring, classes,
                           {"kind": "s5s3", "triple": list(triple), "row": row})
