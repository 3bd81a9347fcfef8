"""Rational homotopy constraints and the search for candidate pairs (G, H)."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Dict, Iterable, List, Optional, Tuple

# -- signatures ---------------------------------------------------------------

SIGNATURE_COLUMNS = (2, 3, 4, 5, 6, 7, 9, 11)


@dataclass(frozen=True)
class RationalHomotopySignature:
    """dim pi_i(M) (x) Q, stored as sorted (i, rank) pairs with rank > 0."""

    ranks: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        clean = {}
        for i, r in self.ranks:
            i, r = int(i), int(r)
            if r < 0:
                raise ValueError(f"negative rank in degree {i}")
            if i < 2:
                raise ValueError("simply connected: degrees start at 2")
            if r:
                clean[i] = clean.get(i, 0) + r
        object.__setattr__(self, "ranks", tuple(sorted(clean.items())))

    @classmethod
    def of(cls, **kw) -> "RationalHomotopySignature":
        """RationalHomotopySignature.of(pi2=1, pi3=2)."""
        return cls(tuple((int(k[2:]), v) for k, v in kw.items()))

    @classmethod
    def from_dict(cls, d: Dict[int, int]) -> "RationalHomotopySignature":
        return cls(tuple(d.items()))

    def __getitem__(self, i: int) -> int:
        return dict(self.ranks).get(i, 0)

    def odd(self) -> List[int]:
        return [i for i, r in self.ranks if i % 2 for _ in range(r)]

    def even(self) -> List[int]:
        return [i for i, r in self.ranks if i % 2 == 0 for _ in range(r)]

    def __str__(self) -> str:
        return ", ".join(f"pi{i}={r}" for i, r in self.ranks) or "trivial"


@dataclass(frozen=True)
class EllipticCheck:
    passed: bool
    failed: Optional[int] = None
    flags: Tuple[str, ...] = ()
    unevaluated: Tuple[int, ...] = (5, 6)

    def __bool__(self) -> bool:
        return self.passed


EXCLUDED_BY_AUXILIARY = "excluded-by-auxiliary-argument"

# Passes (1)-(4) in dimension 7 but is ruled out by an Euler characteristic
# argument on the circle bundle killing pi_2.
_AUXILIARY_EXCLUDED = {7: [RationalHomotopySignature.of(pi2=1, pi3=2, pi4=1, pi5=1)]}


def check_elliptic(sig: RationalHomotopySignature, n: int) -> EllipticCheck:
    """Conditions (1)-(4) on the degrees of odd generators x and even generators y.

    (1) sum |x| <= 2n - 1   (2) sum |y| <= n   (3) n = sum |x| - sum (|y| - 1)
    (4) #x >= #y.  The Euler characteristic conditions need homology and are
    reported as unevaluated.
    """
    xs, ys = sig.odd(), sig.even()
    tests = [
        (1, sum(xs) <= 2 * n - 1),
        (2, sum(ys) <= n),
        (3, n == sum(xs) - sum(y - 1 for y in ys)),
        (4, len(xs) >= len(ys)),
    ]
    for cid, ok in tests:
        if not ok:
            return EllipticCheck(False, cid)
    flags = (EXCLUDED_BY_AUXILIARY,) if sig in _AUXILIARY_EXCLUDED.get(n, []) else ()
    return EllipticCheck(True, None, flags)


@dataclass(frozen=True)
class CatalogueRow:
    signature: RationalHomotopySignature
    example: str


_CATALOGUE = {
    6: [
        CatalogueRow(RationalHomotopySignature.of(pi3=2), "S^3xS^3"),
        CatalogueRow(RationalHomotopySignature.of(pi2=1, pi3=1, pi4=1, pi7=1), "S^2xS^4"),
        CatalogueRow(RationalHomotopySignature.of(pi2=2, pi3=1, pi5=1), "S^2xCP^2"),
        CatalogueRow(RationalHomotopySignature.of(pi2=3, pi3=3), "S^2xS^2xS^2"),
    ],
    7: [
        CatalogueRow(RationalHomotopySignature.of(pi3=1, pi4=1, pi7=1), "S^3xS^4"),
        CatalogueRow(RationalHomotopySignature.of(pi2=1, pi3=1, pi5=1), "S^2xS^5 or CP^2xS^3"),
        CatalogueRow(RationalHomotopySignature.of(pi2=2, pi3=3), "S^2xS^2xS^3"),
    ],
}

# Pair lists name the 7-dimensional S^3 x CP^2 row by its second example.
_PAIR_EXAMPLE = {"S^2xS^5 or CP^2xS^3": "S^3xCP^2"}


def catalogue(n: int) -> List[CatalogueRow]:
    """Signatures of non-sphere, non-projective elliptic manifolds of dimension n."""
    if n not in _CATALOGUE:
        raise ValueError(f"no catalogue for dimension {n} (only 6 and 7)")
    return list(_CATALOGUE[n])


def signature_table_tsv(n: int) -> str:
    head = [f"pi{i}" for i in SIGNATURE_COLUMNS] + ["Example"]
    lines = ["\t".join(head)]
    for row in catalogue(n):
        cells = [str(row.signature[i]) if row.signature[i] else "" for i in SIGNATURE_COLUMNS]
        lines.append("\t".join(cells + [row.example]))
    return "\n".join(lines) + "\n"


def simpfact_counts(sig: RationalHomotopySignature) -> Tuple[int, int]:
    """(torus rank of H, #simple factors of G - #simple factors of H)."""
    return sig[2], sig[3] - sig[4]


# -- simple groups ------------------------------------------------------------

FAMILIES = ("SU", "Sp", "SO", "G2", "F4", "E6", "E7", "E8")
_EXCEPTIONAL = {
    "G2": (14, (2, 6)),
    "F4": (52, (2, 6, 8, 12)),
    "E6": (78, (2, 5, 6, 8, 9, 12)),
    "E7": (133, (2, 6, 8, 10, 12, 14, 18)),
    "E8": (248, (2, 8, 12, 14, 18, 20, 24, 30)),
}


@dataclass(frozen=True, order=True)
class SimpleGroup:
    """A compact simple Lie group up to cover: SU(n), Sp(n), SO(m) or exceptional."""

    family: str
    n: int = 0

    def __post_init__(self):
        f, n = self.family, self.n
        if f not in FAMILIES:
            raise ValueError(f"unknown family {f}")
        if f == "SU" and n < 2 or f == "Sp" and n < 1 or f == "SO" and n < 3:
            raise ValueError(f"{f}({n}) is not simple")
        if f == "SO" and n == 4:
            raise ValueError("SO(4) is not simple")

    def canonical(self) -> "SimpleGroup":
        """Representative of the local isomorphism class."""
        f, n = self.family, self.n
        if f == "Sp" and n == 1 or f == "SO" and n == 3:
            return SimpleGroup("SU", 2)
        if f == "SO" and n == 5:
            return SimpleGroup("Sp", 2)
        if f == "SO" and n == 6:
            return SimpleGroup("SU", 4)
        return self

    @property
    def dim(self) -> int:
        f, n = self.family, self.n
        if f == "SU":
            return n * n - 1
        if f == "SO":
            return n * (n - 1) // 2
        if f == "Sp":
            return n * (2 * n + 1)
        return _EXCEPTIONAL[f][0]

    @property
    def degrees(self) -> Tuple[int, ...]:
        """k with pi_{2k-1} (x) Q nonzero, as a sorted multiset."""
        f, n = self.family, self.n
        if f == "SU":
            return tuple(range(2, n + 1))
        if f == "Sp" or f == "SO" and n % 2:
            r = n if f == "Sp" else (n - 1) // 2
            return tuple(range(2, 2 * r + 1, 2))
        if f == "SO":
            r = n // 2
            return tuple(sorted(list(range(2, 2 * r - 1, 2)) + [r]))
        return _EXCEPTIONAL[f][1]

    @property
    def key(self):
        return (FAMILIES.index(self.family), self.n)

    def __str__(self) -> str:
        return self.family if self.family in _EXCEPTIONAL else f"{self.family}({self.n})"


@dataclass(frozen=True)
class GroupDescriptor:
    """Product of simple factors times a torus."""

    factors: Tuple[SimpleGroup, ...] = ()
    torus: int = 0

    def __post_init__(self):
        fs = tuple(sorted((f.canonical() for f in self.factors), key=lambda g: g.key, reverse=True))
        object.__setattr__(self, "factors", fs)
        if self.torus < 0:
            raise ValueError("negative torus rank")

    @property
    def dim(self) -> int:
        return sum(f.dim for f in self.factors) + self.torus

    def degree_counts(self) -> Counter:
        c = Counter(k for f in self.factors for k in f.degrees)
        if self.torus:
            c[1] += self.torus
        return c

    def __str__(self) -> str:
        parts = []
        i = 0
        while i < len(self.factors):
            j = i
            while j < len(self.factors) and self.factors[j] == self.factors[i]:
                j += 1
            parts.append(str(self.factors[i]) + (f"^{j - i}" if j - i > 1 else ""))
            i = j
        if self.torus == 1:
            parts.append("S^1")
        elif self.torus:
            parts.append(f"T^{self.torus}")
        return "x".join(parts) or "1"

    @property
    def key(self):
        return (tuple(f.key for f in self.factors), self.torus)


# -- pair search -----------------------------------------------------------------

MAX_DIM_G = 31


def _candidates(max_dim: int) -> List[SimpleGroup]:
    out = set()
    for n in range(2, 12):
        out.add(SimpleGroup("SU", n))
        out.add(SimpleGroup("Sp", n))
    for m in range(7, 16):
        out.add(SimpleGroup("SO", m))
    for f in _EXCEPTIONAL:
        out.add(SimpleGroup(f))
    return sorted((g for g in out if g.dim <= max_dim), key=lambda g: g.key)


@dataclass(frozen=True)
class Contribution:
    """How a simple factor of G contributes a degree."""

    factor: SimpleGroup
    degree: int
    rule: str
    partner: Optional[SimpleGroup] = None


def _second_highest_partners(g: SimpleGroup) -> List[Tuple[SimpleGroup, int, str]]:
    """Exceptional quotients letting g contribute something other than its top degree."""
    out = []
    if g.family == "SU" and g.n % 2 == 0 and g.n >= 4:
        out.append((SimpleGroup("Sp", g.n // 2), g.n - 1, f"second degree, {g}/Sp({g.n // 2})"))
    if g == SimpleGroup("SO", 7):
        out.append((SimpleGroup("G2"), 4, "second degree, SO(7)/G2"))
    if g == SimpleGroup("SO", 8):
        out.append((SimpleGroup("G2"), 4, "second degree, SO(8)/G2"))
    if g.family == "E6":
        out.append((SimpleGroup("F4"), 9, "second degree, E6/F4"))
    if g.family == "SO" and g.n % 2 == 0 and g.n >= 8:
        out.append((SimpleGroup("SO", g.n - 1), g.n // 2, f"middle degree, {g}/SO({g.n - 1})"))
    return out


def _contributions(g: SimpleGroup, h: GroupDescriptor) -> List[Contribution]:
    out = [Contribution(g, max(g.degrees), "top degree")]
    for partner, k, rule in _second_highest_partners(g):
        if partner.canonical() in h.factors:
            out.append(Contribution(g, k, rule, partner.canonical()))
    return out


def _assignments(gs, h, odd: Counter):
    """Choices of contributed degree per factor of G, each odd generator used at most once."""
    if not gs:
        yield ()
        return
    for c in _contributions(gs[0], h):
        d = 2 * c.degree - 1
        if odd[d] > 0:
            odd[d] -= 1
            for rest in _assignments(gs[1:], h, odd):
                yield (c,) + rest
            odd[d] += 1


@dataclass(frozen=True)
class Pair:
    G: GroupDescriptor
    H: GroupDescriptor
    example: str
    contributions: Tuple[Contribution, ...] = field(compare=False, default=())

    def source(self) -> str:
        return "; ".join(f"{c.factor}: {c.rule} {c.degree}" for c in self.contributions)


@dataclass(frozen=True)
class Exclusion:
    G: str
    H: str
    reason: str


# Pairs passing the degree bookkeeping that are ruled out by arguments beyond it.
CURATED_EXCLUSIONS: Tuple[Exclusion, ...] = (
    Exclusion("SU(4)", "SU(3)", "quotient is rationally S^7 (Kapovitch-Ziller)"),
    Exclusion("Sp(2)", "SU(2)", "quotient is rationally S^7 (Kapovitch-Ziller)"),
    Exclusion("SO(7)", "G2", "SO(7)/G2 is S^7"),
    Exclusion("SO(8)", "SO(7)", "SO(8)/SO(7) is S^7"),
    Exclusion("SO(8)xSU(2)", "G2xSp(2)", "no homomorphism G2xSp(2) -> SU(2); H acts freely on SO(8) "
              "with 4-dimensional quotient, which the classification of 4-dimensional "
              "reduced biquotients rules out"),
)


def _h_choices(dim: int, nsimple: int, torus: int, pool: List[SimpleGroup]):
    for fs in combinations_with_replacement(pool, nsimple):
        if sum(f.dim for f in fs) + torus == dim:
            yield GroupDescriptor(tuple(fs), torus)


def _degree_balance(sig: RationalHomotopySignature, G: GroupDescriptor, H: GroupDescriptor) -> bool:
    dg, dh = G.degree_counts(), H.degree_counts()
    top = max(list(dg) + list(dh) + [k // 2 + 1 for k, _ in sig.ranks])
    return all(sig[2 * k - 1] - sig[2 * k] == dg[k] - dh[k] for k in range(2, top + 1))


def search_pairs(sig: RationalHomotopySignature, n: int, example: str = "",
                 max_dim: int = MAX_DIM_G) -> List[Pair]:
    """All (G, H) passing the bookkeeping rules, before curated exclusions.

    Rules: dim G - dim H = n; torus rank and factor counts from
    :func:`simpfact_counts`; for each degree k the ranks of pi_{2k-1} minus
    pi_{2k} equal the multiplicity of k in G minus that in H (exactness of the
    long sequence of H -> G -> G//H tensored with Q); every simple factor of G
    contributes a degree (its top one, or a second one through the exceptional
    quotients SU(2m)/Sp(m), SO(7)/G2, SO(8)/G2, E6/F4, SO(2m)/SO(2m-1)) and
    distinct factors use distinct odd generators.  The symmetric-space case
    SU(2m+1)/SO(2m+1) needs dim >= 8 and never applies here.
    """
    torus, diff = simpfact_counts(sig)
    odd = Counter(sig.odd())
    pool = _candidates(max_dim)
    out = []
    for m in range(1, len(sig.odd()) + 1):
        nh = m - diff
        if nh < 0:
            continue
        for gs in combinations_with_replacement(pool, m):
            G = GroupDescriptor(tuple(gs))
            if G.dim > max_dim or G.dim - n < torus:
                continue
            for H in _h_choices(G.dim - n, nh, torus, pool):
                if not _degree_balance(sig, G, H):
                    continue
                assignment = next(_assignments(list(G.factors), H, Counter(odd)), None)
                if assignment is None:
                    continue
                out.append(Pair(G, H, example, assignment))
    # SU(2)^0 x torus would be an empty G; not a biquotient of a Lie group.
    uniq = {(p.G.key, p.H.key): p for p in out}
    return sorted(uniq.values(), key=_pair_order)


def _pair_order(p: Pair):
    return (p.G.key, p.H.key)


def _excluded(p: Pair) -> Optional[Exclusion]:
    """Curated exclusion for p, also through dropping one circle factor of H."""
    for e in CURATED_EXCLUSIONS:
        if str(p.G) == e.G and str(p.H) == e.H:
            return e
    if p.H.torus:
        smaller = GroupDescriptor(p.H.factors, p.H.torus - 1)
        for e in CURATED_EXCLUSIONS:
            if str(p.G) == e.G and str(smaller) == e.H:
                return Exclusion(str(p.G), str(p.H), f"circle extension of ({e.G}, {e.H}): {e.reason}")
    return None


def enumerate_pairs(sig: RationalHomotopySignature, n: int, with_excluded: bool = False):
    """Candidate pairs for sig in dimension n, minus the curated exclusions.

    With ``with_excluded`` also return the excluded pairs with their reasons.
    """
    example = next((r.example for r in _CATALOGUE.get(n, []) if r.signature == sig), "")
    example = _PAIR_EXAMPLE.get(example, example)
    kept, dropped = [], []
    for p in search_pairs(sig, n, example):
        e = _excluded(p)
        (dropped if e else kept).append((p, e) if e else p)
    return (kept, dropped) if with_excluded else kept


def pairs_tsv(n: int) -> str:
    lines = ["G\tH\tExample\tsource"]
    notes = []
    for row in catalogue(n):
        kept, dropped = enumerate_pairs(row.signature, n, with_excluded=True)
        for p in kept:
            lines.append(f"{p.G}\t{p.H}\t{p.example}\t{p.source()}")
        for p, e in dropped:
            notes.append(f"# excluded\t{p.G}\t{p.H}\t{p.example}\t{e.reason}")
    return "\n".join(lines + notes) + "\n"


def iter_catalogue_pairs(n: int) -> Iterable[Pair]:
    for row in catalogue(n):
        yield from enumerate_pairs(row.signature, n)
