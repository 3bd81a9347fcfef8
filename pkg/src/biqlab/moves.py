"""Equivalence moves on T^3 action matrices and their canonical forms.

An action matrix is a 3x3 integer matrix with unit diagonal; row i holds the
weights of the q-coordinate of the i-th S^3 factor, while the p-coordinate of
factor i carries the i-th standard weight. Matrices are handled as tuples of
row tuples so they can be hashed.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .lattice import det, diagonal_cofactors

ActionMatrix = Tuple[Tuple[int, int, int], Tuple[int, int, int], Tuple[int, int, int]]

IDENTITY: ActionMatrix = ((1, 0, 0), (0, 1, 0), (0, 0, 1))

SPORADIC: Dict[str, ActionMatrix] = {
    "SporadicA1": ((1, 2, 2), (1, 1, 2), (1, 1, 1)),
    "SporadicA2": ((1, 2, 0), (1, 1, 2), (1, 1, 1)),
    "SporadicA3": ((1, 2, 0), (1, 1, 1), (2, 2, 1)),
    "SporadicA4": ((1, 2, 2), (1, 1, 2), (1, 0, 1)),
}

KINDS = ("Family1", "Family2", "Family3") + tuple(SPORADIC)

DEFAULT_BUDGET = 12


def as_matrix(m: Sequence[Sequence[int]]) -> ActionMatrix:
    rows = tuple(tuple(int(x) for x in row) for row in m)
    if len(rows) != 3 or any(len(r) != 3 for r in rows):
        raise ValueError("action matrix must be 3x3")
    return rows  # type: ignore[return-value]


def family_matrix(kind: str, params: Sequence[int] = ()) -> ActionMatrix:
    """The printed representative for a family or sporadic tag."""
    if kind == "Family1":
        c1, c2 = params
        return ((1, 2, 0), (1, 1, 0), (c1, c2, 1))
    if kind == "Family2":
        a3, b3 = params
        return ((1, 2, a3), (1, 1, b3), (0, 0, 1))
    if kind == "Family3":
        b1, c1, c2 = params
        return ((1, 0, 0), (b1, 1, 0), (c1, c2, 1))
    if kind in SPORADIC:
        if params:
            raise ValueError(f"{kind} takes no parameters")
        return SPORADIC[kind]
    raise ValueError(f"unknown kind {kind!r}")


def is_valid(m: Sequence[Sequence[int]]) -> bool:
    """Unit-diagonal matrix with det and all diagonal cofactors equal to +-1."""
    a = as_matrix(m)
    if any(a[i][i] != 1 for i in range(3)):
        raise ValueError("action matrix must have unit diagonal")
    return abs(det(a)) == 1 and all(abs(c) == 1 for c in diagonal_cofactors(a))


# -- moves -----------------------------------------------------------------

@dataclass(frozen=True)
class Move:
    """One licensed modification; indices are 1-based factor numbers."""

    kind: str  # "SwapRC", "NegateRC" or "Reparam"
    i: int
    j: int = 0

    def __str__(self) -> str:
        if self.kind == "SwapRC":
            return f"SwapRC({self.i},{self.j})"
        return f"{self.kind}({self.i})"

    @classmethod
    def parse(cls, text: str) -> "Move":
        hit = re.fullmatch(r"\s*(SwapRC|NegateRC|Reparam)\((\d)(?:,(\d))?\)\s*", text)
        if not hit:
            raise ValueError(f"bad move {text!r}")
        kind, i, j = hit.group(1), int(hit.group(2)), hit.group(3)
        if (kind == "SwapRC") != (j is not None):
            raise ValueError(f"bad move {text!r}")
        return cls(kind, i, int(j) if j else 0)


def _swap(a: ActionMatrix, i: int, j: int) -> ActionMatrix:
    perm = [0, 1, 2]
    perm[i], perm[j] = perm[j], perm[i]
    return tuple(tuple(a[perm[r]][perm[c]] for c in range(3)) for r in range(3))  # type: ignore


def _negate(a: ActionMatrix, i: int) -> ActionMatrix:
    return tuple(
        tuple(-a[r][c] if (r == i) != (c == i) else a[r][c] for c in range(3))
        for r in range(3)
    )  # type: ignore


def _reparam_first(a: ActionMatrix) -> ActionMatrix:
    # Use the q-coordinate of the first factor to parametrize the torus.
    (_, a2, a3), (b1, _, b3), (c1, c2, _) = a
    e2 = 1 - a2 * b1
    e3 = 1 - a3 * c1
    return (
        (1, -a2 * e2, -a3 * e3),
        (b1, 1, (b3 - a3 * b1) * e3),
        (c1, (c2 - a2 * c1) * e2, 1),
    )


def apply_move(a: Sequence[Sequence[int]], move: Move) -> ActionMatrix:
    m = as_matrix(a)
    if move.kind == "SwapRC":
        if not (1 <= move.i <= 3 and 1 <= move.j <= 3):
            raise ValueError(f"bad move {move}")
        return _swap(m, move.i - 1, move.j - 1)
    if not 1 <= move.i <= 3:
        raise ValueError(f"bad move {move}")
    if move.kind == "NegateRC":
        return _negate(m, move.i - 1)
    if move.kind == "Reparam":
        if move.i == 1:
            return _reparam_first(m)
        k = move.i - 1
        return _swap(_reparam_first(_swap(m, 0, k)), 0, k)
    raise ValueError(f"bad move {move}")


def replay(a: Sequence[Sequence[int]], moves: Iterable[Move]) -> ActionMatrix:
    m = as_matrix(a)
    for mv in moves:
        m = apply_move(m, mv)
    return m


REPARAMS = tuple(Move("Reparam", i) for i in (1, 2, 3))


def _signed_permutations() -> List[Tuple[Tuple[Move, ...], "callable"]]:
    # Shortest swap/negate word for each distinct signed permutation, found by
    # BFS on a matrix with distinct off-diagonal entries.
    gens = [Move("SwapRC", 1, 2), Move("SwapRC", 1, 3), Move("SwapRC", 2, 3),
            Move("NegateRC", 1), Move("NegateRC", 2), Move("NegateRC", 3)]
    probe = ((1, 2, 3), (5, 1, 7), (11, 13, 1))
    seen = {probe: ()}
    frontier = [probe]
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                m2 = apply_move(m, g)
                if m2 not in seen:
                    seen[m2] = seen[m] + (g,)
                    nxt.append(m2)
        frontier = nxt
    words = sorted(seen.values(), key=lambda w: (len(w), [str(x) for x in w]))
    return words


SIGNED_PERMUTATIONS: Tuple[Tuple[Move, ...], ...] = tuple(_signed_permutations())


def orbit_key(a: ActionMatrix) -> ActionMatrix:
    """Lexicographic minimum over the swap/negate orbit."""
    return min(replay(a, w) for w in SIGNED_PERMUTATIONS)


# -- canonical forms -------------------------------------------------------

@dataclass(frozen=True)
class CanonicalForm:
    kind: str
    params: Tuple[int, ...] = ()
    witness: Tuple[Move, ...] = ()
    classified: bool = True

    @property
    def representative(self) -> Optional[ActionMatrix]:
        return family_matrix(self.kind, self.params) if self.classified else None

    def __str__(self) -> str:
        if not self.classified:
            return "unclassified"
        if self.params:
            return f"{self.kind}({','.join(map(str, self.params))})"
        return self.kind

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "params": list(self.params),
            "witness": [str(m) for m in self.witness],
        }


def match_template(a: ActionMatrix) -> Optional[Tuple[int, str, Tuple[int, ...]]]:
    """(priority, kind, params) if ``a`` is literally a printed representative."""
    r0, r1, r2 = a
    if r0[:2] == (1, 2) and r1[:2] == (1, 1):
        if r0[2] == 0 and r1[2] == 0:
            return 0, "Family1", (r2[0], r2[1])
        if r2[:2] == (0, 0):
            return 1, "Family2", (r0[2], r1[2])
    if r0[1] == 0 and r0[2] == 0 and r1[2] == 0:
        return 2, "Family3", (r1[0], r2[0], r2[1])
    for n, (kind, m) in enumerate(SPORADIC.items()):
        if a == m:
            return 3 + n, kind, ()
    return None


class UnclassifiedError(RuntimeError):
    pass


def canonicalize_t3(a: Sequence[Sequence[int]], budget: int = DEFAULT_BUDGET) -> CanonicalForm:
    """Search for a printed family or sporadic representative equivalent to ``a``.

    Breadth-first over the number of reparametrizations; swap and sign moves
    are free within a level. The first level with any hit wins; among hits the
    lowest family, then smallest parameters, then shortest witness is taken.
    Returns an unclassified form when ``budget`` levels are exhausted.
    """
    start = as_matrix(a)
    if not is_valid(start):
        raise ValueError(f"invalid action matrix {start}")
    frontier: List[Tuple[ActionMatrix, Tuple[Move, ...]]] = [(start, ())]
    seen = {orbit_key(start)}
    for _level in range(budget + 1):
        hits = []
        for m, word in frontier:
            for sp in SIGNED_PERMUTATIONS:
                hit = match_template(replay(m, sp))
                if hit is not None:
                    w = word + sp
                    hits.append((hit[0], hit[2], len(w), [str(x) for x in w], hit[1], w))
        if hits:
            best = min(hits, key=lambda h: h[:4])
            return CanonicalForm(best[4], best[1], best[5])
        nxt = []
        for m, word in frontier:
            for mv in REPARAMS:
                m2 = apply_move(m, mv)
                key = orbit_key(m2)
                if key not in seen:
                    seen.add(key)
                    nxt.append((m2, word + (mv,)))
        if not nxt:
            break
        frontier = nxt
    return CanonicalForm("unclassified", (), (), classified=False)


def enumerate_valid(bound: int) -> Iterator[ActionMatrix]:
    """All valid matrices with off-diagonal entries in [-bound, bound], lexicographic."""
    if bound < 0:
        raise ValueError("bound must be non-negative")
    rng = range(-bound, bound + 1)
    for a2, a3, b1, b3, c1, c2 in product(rng, repeat=6):
        if abs(1 - a2 * b1) != 1 or abs(1 - a3 * c1) != 1 or abs(1 - b3 * c2) != 1:
            continue
        m = ((1, a2, a3), (b1, 1, b3), (c1, c2, 1))
        if abs(det(m)) == 1:
            yield m


# -- T^2 on S^5 x S^3 ------------------------------------------------------

S5S3_SPORADIC = {(1, 1, 2): None, (2, 2, 1): None, (0, 2, 1): (0, 0, 1), (0, 1, 2): (0, 0, 2)}


@dataclass(frozen=True)
class S5S3Form:
    """Normal form of a triple (a, b, c) for the action
    (z, w) * (p1, p2, p3, q1, q2) = (z p1, z w^a p2, z w^b p3, w q1, z^c w q2).
    """

    kind: str  # "Family(a,b,0)", "Family(0,0,c)" or "Sporadic"
    params: Tuple[int, int, int]
    same_as: Optional[Tuple[int, int, int]] = None
    moves: Tuple[str, ...] = ()

    def __str__(self) -> str:
        text = f"{self.kind} {self.params}"
        if self.same_as is not None:
            text += f", diffeomorphic to {self.same_as}"
        return text

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "params": list(self.params),
            "same_as": None if self.same_as is None else list(self.same_as),
            "witness": list(self.moves),
        }


def s5s3_is_free(triple: Sequence[int]) -> bool:
    a, b, c = triple
    return a * c in (0, 2) and b * c in (0, 2)


def classify_s5s3(triple: Sequence[int]) -> S5S3Form:
    """Family or sporadic tag of a free triple.

    Moves: exchanging p2 and p3 swaps a and b; conjugating w and both
    q-coordinates negates the whole triple.
    """
    a, b, c = (int(x) for x in triple)
    if not s5s3_is_free((a, b, c)):
        raise ValueError(f"triple {(a, b, c)} does not give a free action")
    moves: List[str] = []
    if c < 0 or (c == 0 and (-max(a, b), -min(a, b)) > (min(a, b), max(a, b))):
        a, b, c = -a, -b, -c
        moves.append("negate")
    if a > b:
        a, b = b, a
        moves.append("swap")
    t = (a, b, c)
    if a == b == 0:
        return S5S3Form("Family(0,0,c)", t, None, tuple(moves))
    if c == 0:
        return S5S3Form("Family(a,b,0)", t, None, tuple(moves))
    if t in S5S3_SPORADIC:
        return S5S3Form("Sporadic", t, S5S3_SPORADIC[t], tuple(moves))
    raise AssertionError(f"free triple {t} outside the catalogue")  # pragma: no cover
