"""Linear torus actions on products of odd spheres and their freeness."""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from itertools import combinations, product
from math import gcd
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .lattice import AbelianGroup, cokernel, det
from . import kernels

Weight = Tuple[int, ...]


@dataclass(frozen=True)
class SphereProduct:
    """Product of spheres S^(2n-1) in C^n, one count n per factor."""

    factors: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(int(n) for n in self.factors))
        if not self.factors or any(n < 1 for n in self.factors):
            raise ValueError("every sphere factor needs at least one coordinate")

    @property
    def ncoords(self) -> int:
        return sum(self.factors)

    def __str__(self) -> str:
        return " x ".join(f"S^{2 * n - 1}" for n in self.factors)


@dataclass(frozen=True)
class LinearTorusAction:
    """T^rank acting on coordinate j by the character z -> z^weights[j]."""

    rank: int
    space: SphereProduct
    weights: Tuple[Weight, ...]

    def __post_init__(self):
        w = tuple(tuple(int(x) for x in row) for row in self.weights)
        object.__setattr__(self, "weights", w)
        if self.rank < 0:
            raise ValueError("negative torus rank")
        if len(w) != self.space.ncoords:
            raise ValueError(f"{len(w)} weights for {self.space.ncoords} coordinates")
        for row in w:
            if len(row) != self.rank:
                raise ValueError(f"weight {row} does not have length {self.rank}")

    @classmethod
    def from_factors(cls, rank: int, factors: Sequence[Sequence[Sequence[int]]]):
        space = SphereProduct(tuple(len(f) for f in factors))
        return cls(rank, space, tuple(tuple(w) for f in factors for w in f))

    def factor_weights(self) -> List[Tuple[Weight, ...]]:
        out, i = [], 0
        for n in self.space.factors:
            out.append(self.weights[i:i + n])
            i += n
        return out

    def weight_matrix(self) -> List[List[int]]:
        """rank x ncoords, one column per coordinate."""
        return [[w[k] for w in self.weights] for k in range(self.rank)]

    def selections(self) -> Iterator[Tuple[Weight, ...]]:
        """One coordinate per factor: the points with the largest stabilizers."""
        return product(*self.factor_weights())


@dataclass(frozen=True)
class BiquotientExponents:
    """Per SU(2) factor, left exponents m and right exponents n (length rank)."""

    rank: int
    m: Tuple[Weight, ...]
    n: Tuple[Weight, ...]

    def __post_init__(self):
        object.__setattr__(self, "m", tuple(tuple(int(x) for x in v) for v in self.m))
        object.__setattr__(self, "n", tuple(tuple(int(x) for x in v) for v in self.n))
        if len(self.m) != len(self.n):
            raise ValueError("need left and right exponents for every factor")
        for v in self.m + self.n:
            if len(v) != self.rank:
                raise ValueError(f"exponent {v} does not have length {self.rank}")


def biquotient_to_linear(b: BiquotientExponents) -> LinearTorusAction:
    """diag(z^m) X diag(z^n)^-1 on SU(2) = S^3 scales p by z^(m-n) and q by z^(m+n)."""
    factors = []
    for m, n in zip(b.m, b.n):
        factors.append([tuple(x - y for x, y in zip(m, n)), tuple(x + y for x, y in zip(m, n))])
    return LinearTorusAction.from_factors(b.rank, factors)


def linear_to_biquotient(a: LinearTorusAction) -> BiquotientExponents:
    """Weights (2 alpha, 2 beta) on (p, q) give m = alpha + beta, n = alpha - beta.

    Converting back yields the action with p and q exchanged in every factor,
    which is equivalent (right multiplication by a Weyl element of SU(2)).
    """
    if any(k != 2 for k in a.space.factors):
        raise ValueError("biquotient exponents need every factor to be S^3")
    ms, ns = [], []
    for p, q in a.factor_weights():
        if any(x % 2 for x in p + q):
            raise ValueError(f"odd weight in {p} / {q}")
        alpha = [x // 2 for x in p]
        beta = [x // 2 for x in q]
        ms.append(tuple(x + y for x, y in zip(alpha, beta)))
        ns.append(tuple(x - y for x, y in zip(alpha, beta)))
    return BiquotientExponents(a.rank, tuple(ms), tuple(ns))


def swap_pq(a: LinearTorusAction) -> LinearTorusAction:
    if any(k != 2 for k in a.space.factors):
        raise ValueError("swap_pq needs every factor to be S^3")
    return LinearTorusAction.from_factors(a.rank, [(q, p) for p, q in a.factor_weights()])


def _columns(ws: Sequence[Weight], rank: int) -> List[List[int]]:
    return [[w[k] for w in ws] for k in range(rank)]


def global_kernel(a: LinearTorusAction) -> AbelianGroup:
    """Subgroup of T^rank acting trivially, described by its character group."""
    if a.rank == 0:
        return AbelianGroup()
    return cokernel(a.weight_matrix())


def selection_stabilizer(a: LinearTorusAction, sel: Sequence[Weight]) -> AbelianGroup:
    if a.rank == 0:
        return AbelianGroup()
    return cokernel(_columns(sel, a.rank))


def is_free(a: LinearTorusAction) -> bool:
    """Every coordinate selection gives an injective map T^rank -> T^factors."""
    if a.rank == 0:
        return True
    if a.rank > len(a.space.factors):
        return False
    return kernels.all_selections_unimodular(a.rank, [list(map(list, f)) for f in a.factor_weights()])


def is_effectively_free(a: LinearTorusAction) -> bool:
    """Each selection's stabilizer equals the global kernel.

    The stabilizer always contains the kernel; a closed subgroup of a compact
    abelian Lie group isomorphic to it is the whole group, so comparing the
    groups suffices.
    """
    k = global_kernel(a)
    return all(selection_stabilizer(a, sel) == k for sel in a.selections())


def _primes_upto(n: int) -> List[int]:
    return [p for p in range(2, n + 1) if all(p % q for q in range(2, int(p ** 0.5) + 1))]


def _prime_factors(n: int) -> List[int]:
    n, out, p = abs(n), [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def required_oracle_bound(a: LinearTorusAction) -> int:
    """Largest prime dividing a nonzero maximal minor of some selection (at least 2)."""
    r = a.rank
    best = 2
    if r == 0 or r > len(a.space.factors):
        return best
    for sel in a.selections():
        cols = _columns(sel, r)
        for cs in combinations(range(len(sel)), r):
            d = det([[row[c] for c in cs] for row in cols])
            if d:
                best = max([best] + _prime_factors(d))
    return best


class OracleBoundError(ValueError):
    def __init__(self, required: int, given: int):
        super().__init__(f"prime bound {given} is below the required bound {required}")
        self.required = required


def find_fixed_element(a: LinearTorusAction, bound: int) -> Optional[Tuple[int, Tuple[int, ...]]]:
    """Some t in (Z/p)^rank, t != 0, p <= bound prime, fixing a point; else None.

    t fixes a point iff every factor has a coordinate whose weight pairs with t
    to 0 mod p.
    """
    if a.rank == 0:
        return None
    factors = [list(map(list, f)) for f in a.factor_weights()]
    for p in _primes_upto(bound):
        t = kernels.fixed_element_mod_p(a.rank, factors, p)
        if t is not None:
            return p, tuple(t)
    return None


def freeness_oracle(a: LinearTorusAction, bound: int) -> bool:
    """Brute force over elements of prime order p <= bound."""
    need = required_oracle_bound(a)
    if bound < need:
        raise OracleBoundError(need, bound)
    return find_fixed_element(a, bound) is None


# -- catalogued families ----------------------------------------------------

def s3cp2_linear(a: int, b: int, c: int, d: int, e: int) -> LinearTorusAction:
    return LinearTorusAction.from_factors(1, [[(a,), (b,), (c,)], [(d,), (e,)]])


def s5s3_t2(p: Sequence[Weight], q: Sequence[Weight]) -> LinearTorusAction:
    return LinearTorusAction.from_factors(2, [list(p), list(q)])


def s5s3_triple_action(a: int, b: int, c: int) -> LinearTorusAction:
    return s5s3_t2([(1, 0), (1, a), (1, b)], [(0, 1), (c, 1)])


def s22s3_action(w: Sequence[int]) -> LinearTorusAction:
    a, b, c, d, e, f, g, h, i, j = w
    return LinearTorusAction.from_factors(
        2, [[(a, 0), (b, c)], [(0, d), (e, f)], [(g, h), (i, j)]])


def s22s3_gcds(w: Sequence[int]) -> Tuple[int, ...]:
    a, b, c, d, e, f, g, h, i, j = w
    return (
        gcd(a, d),
        gcd(a * b, g * i),
        gcd(d * f, h * j),
        gcd(a, e * h - g * f),
        gcd(a, e * j - i * f),
        gcd(d, b * h - c * g),
        gcd(d, b * j - i * c),
        reduce(gcd, (b * f - e * c, b * h - g * c, e * h - f * g)),
        reduce(gcd, (b * f - e * c, b * j - i * c, e * j - i * f)),
    )


def s22s3_normalized(w: Sequence[int]) -> bool:
    a, b, c, d, e, f, g, h, i, j = w
    return reduce(gcd, (a, b, e, g, i)) == 1 and reduce(gcd, (c, d, f, h, j)) == 1


def t3_action(m: Sequence[Sequence[int]]) -> LinearTorusAction:
    """Normal form: p_i has weight e_i, q_i has weight row i of m."""
    rows = [tuple(r) for r in m]
    basis = [tuple(int(i == j) for j in range(3)) for i in range(3)]
    return LinearTorusAction.from_factors(3, [[basis[i], rows[i]] for i in range(3)])


@dataclass(frozen=True)
class FamilyVerdict:
    effectively_free: bool
    verdict: Optional[str] = None
    detail: Tuple[Tuple[str, object], ...] = ()

    def to_json(self) -> dict:
        return {"effectively_free": self.effectively_free, "verdict": self.verdict,
                "detail": dict(self.detail)}


def _divides(d: int, x: int) -> bool:
    return x == 0 if d == 0 else x % d == 0


def _g(*xs: int) -> int:
    return reduce(gcd, xs, 0)


def _s2s4_su4(a, b, c):
    ok = _g(a, b, c) == 1 and _divides(c, 2 * gcd(3 * a, b))
    if not ok:
        return FamilyVerdict(False)
    if c % 2:
        return FamilyVerdict(True, "S4xS2")
    if a % 2 == 0 or b % 2 == 0:
        return FamilyVerdict(True, "S2xS4")
    return FamilyVerdict(True, "S4xhatS2")


def _s2s4_sp2_f1(a, b, c):
    ok = _g(a, b, c) == 1 and _divides(a, gcd(b + c, b - c))
    if not ok:
        return FamilyVerdict(False)
    return FamilyVerdict(True, "S2xS4" if abs(a) == 1 else "S4xhatS2")


def _s2s4_sp2_f2(a, b, c):
    ok = _g(a, b, c) == 1 and _divides(b, gcd(a, 2 * c))
    return FamilyVerdict(True, "S2xS4") if ok else FamilyVerdict(False)


def _s2s4_so7(a, b):
    return FamilyVerdict(True, "S2xS4" if (a - b) % 2 == 0 else "S4xhatS2")


def _s2s4_so8(a, b, c):
    ok = _g(a, b, c) == 1 and _divides(a, gcd(2 * b, 2 * c))
    if not ok:
        return FamilyVerdict(False)
    if abs(a) == 1 or b % 2 == 0 or c % 2 == 0:
        return FamilyVerdict(True, "S2xS4")
    return FamilyVerdict(True, "S4xhatS2")


def _s3cp2_su3_f1(a, b, c, d):
    ok = _g(a, b, c, d) == 1 and gcd(a * a - b * b, c * d * (d + c)) == 1
    return FamilyVerdict(ok, f"s3cp2-family1:{a},{b}" if ok else None)


def _general(action: LinearTorusAction, verdict: Optional[str] = None) -> FamilyVerdict:
    ok = is_effectively_free(action)
    return FamilyVerdict(ok, verdict if ok else None,
                         (("kernel", str(global_kernel(action))), ("free", is_free(action))))


def _s3cp2_linear(a, b, c, d, e):
    ok = gcd(a * b * c, d * e) == 1
    return FamilyVerdict(ok, None, (("gcd(abc,de)", gcd(a * b * c, d * e)),))


def _s3cp2_su4(a, b, c, d, e):
    return _general(s3cp2_linear(c + d, d + e, c + e, a - b, a + b))


def _s3cp2_su3_f2(a, b, c, d, e):
    return _general(s3cp2_linear(2 * c - d, 2 * c - e, 2 * c + d + e, a - b, a + b))


def _s3cp2_sporadic():
    return FamilyVerdict(True, "S3-bundle-CP2")


def _s2cp2_su3(a, b, c):
    return _general(s5s3_t2([(2, 0), (2, 2 * a - b), (2, 4 * a + b)], [(0, 6), (2 * c, 6)]))


def _s2cp2_su4(a, b, c):
    return _general(s5s3_t2([(2, 0), (2, a + b), (2, b - a)], [(0, 2), (2 * c, 2)]))


def _s2cp2_linear(a, b, c):
    from .moves import classify_s5s3, s5s3_is_free

    if not s5s3_is_free((a, b, c)):
        return FamilyVerdict(False)
    return FamilyVerdict(True, str(classify_s5s3((a, b, c))))


def _s22s3(*w):
    gs = s22s3_gcds(w)
    return FamilyVerdict(all(g == 1 for g in gs), None, (("gcds", gs),))


def _t3_matrix(a2, a3, b1, b3, c1, c2):
    from .moves import canonicalize_t3, is_valid

    m = ((1, a2, a3), (b1, 1, b3), (c1, c2, 1))
    if not is_valid(m):
        return FamilyVerdict(False)
    return FamilyVerdict(True, str(canonicalize_t3(m)))


FAMILIES: Dict[str, Tuple[int, object]] = {
    "s2s4/su4": (3, _s2s4_su4),
    "s2s4/sp2-f1": (3, _s2s4_sp2_f1),
    "s2s4/sp2-f2": (3, _s2s4_sp2_f2),
    "s2s4/so7": (2, _s2s4_so7),
    "s2s4/so8": (3, _s2s4_so8),
    "s3cp2/su4": (5, _s3cp2_su4),
    "s3cp2/su3-f1": (4, _s3cp2_su3_f1),
    "s3cp2/su3-f2": (5, _s3cp2_su3_f2),
    "s3cp2/sporadic": (0, _s3cp2_sporadic),
    "s3cp2/linear": (5, _s3cp2_linear),
    "s2cp2/su3": (3, _s2cp2_su3),
    "s2cp2/su4": (3, _s2cp2_su4),
    "s2cp2/linear": (3, _s2cp2_linear),
    "s22s3": (10, _s22s3),
    "t3/matrix": (6, _t3_matrix),
}


def check_family_conditions(pair_id: str, params: Sequence[int]) -> FamilyVerdict:
    """Evaluate a catalogued family's freeness condition and its verdict tag."""
    if pair_id not in FAMILIES:
        raise KeyError(f"unknown pair id {pair_id!r}")
    arity, fn = FAMILIES[pair_id]
    if len(params) != arity:
        raise ValueError(f"{pair_id} takes {arity} parameters, got {len(params)}")
    return fn(*(int(x) for x in params))  # type: ignore[operator]
