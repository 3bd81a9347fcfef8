"""Exact integer linear algebra.

Everything here works on plain nested sequences of Python ints, so entries
never overflow. Matrices are row-major lists of rows.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import gcd
from typing import List, Optional, Sequence, Tuple

Matrix = List[List[int]]


def _copy(m: Sequence[Sequence[int]]) -> Matrix:
    return [[int(x) for x in row] for row in m]


def _shape(m: Sequence[Sequence[int]], cols: Optional[int] = None) -> Tuple[int, int]:
    rows = len(m)
    if rows == 0:
        return 0, cols or 0
    ncols = len(m[0])
    for row in m:
        if len(row) != ncols:
            raise ValueError("ragged matrix")
    return rows, ncols


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    n, k = _shape(a)
    k2, m = _shape(b)
    if k != k2:
        raise ValueError(f"shape mismatch {n}x{k} @ {k2}x{m}")
    bt = list(zip(*b)) if m else []
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def transpose(m: Sequence[Sequence[int]]) -> Matrix:
    return [list(col) for col in zip(*m)]


def det(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n, k = _shape(m)
    if n != k:
        raise ValueError(f"det needs a square matrix, got {n}x{k}")
    if n == 0:
        return 1
    a = _copy(m)
    sign = 1
    prev = 1
    for t in range(n - 1):
        if a[t][t] == 0:
            for i in range(t + 1, n):
                if a[i][t] != 0:
                    a[t], a[i] = a[i], a[t]
                    sign = -sign
                    break
            else:
                return 0
        piv = a[t][t]
        for i in range(t + 1, n):
            for j in range(t + 1, n):
                a[i][j] = (a[i][j] * piv - a[i][t] * a[t][j]) // prev
        prev = piv
    return sign * a[n - 1][n - 1]


def diagonal_cofactors(m: Sequence[Sequence[int]]) -> Tuple[int, int, int]:
    """Determinants of the 2x2 blocks left after deleting row i and column i."""
    if _shape(m) != (3, 3):
        raise ValueError("diagonal_cofactors needs a 3x3 matrix")
    out = []
    for i in range(3):
        keep = [j for j in range(3) if j != i]
        out.append(det([[m[r][c] for c in keep] for r in keep]))
    return out[0], out[1], out[2]


def minors_gcd(m: Sequence[Sequence[int]], k: int) -> int:
    """gcd of all k x k minors of ``m`` (0 when every minor vanishes)."""
    rows, cols = _shape(m)
    if k < 0 or k > min(rows, cols):
        raise ValueError(f"minor size {k} out of range for {rows}x{cols} matrix")
    if k == 0:
        return 1
    g = 0
    for rs in combinations(range(rows), k):
        for cs in combinations(range(cols), k):
            g = gcd(g, det([[m[r][c] for c in cs] for r in rs]))
            if g == 1:
                return 1
    return g


@dataclass(frozen=True)
class AbelianGroup:
    """Z^free_rank + Z/d1 + ... + Z/dk with d1 | d2 | ... and every di >= 2."""

    free_rank: int = 0
    torsion: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        for d in self.torsion:
            if d < 2:
                raise ValueError(f"torsion coefficient {d} < 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"torsion {self.torsion} is not a divisibility chain")

    @classmethod
    def from_factors(cls, factors: Sequence[int], ambient: int) -> "AbelianGroup":
        """Group Z^ambient / diag(factors); zero entries are ignored."""
        nonzero = [abs(d) for d in factors if d != 0]
        return cls(ambient - len(nonzero), tuple(d for d in nonzero if d != 1))

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def order(self) -> int:
        """Order of the group, 0 when infinite."""
        if self.free_rank:
            return 0
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}


def _find_pivot(a: Matrix, t: int) -> Optional[Tuple[int, int]]:
    best = None
    for i in range(t, len(a)):
        row = a[i]
        for j in range(t, len(row)):
            x = row[j]
            if x and (best is None or abs(x) < best[0]):
                best = (abs(x), i, j)
    return None if best is None else (best[1], best[2])


def smith_normal_form(m: Sequence[Sequence[int]], cols: Optional[int] = None
                      ) -> Tuple[List[int], Matrix, Matrix]:
    """Smith normal form with transforms.

    Returns ``(factors, U, V)`` where ``U @ m @ V`` is diagonal with the
    positive entries ``factors`` (each dividing the next) followed by zeros.
    ``cols`` is only needed to give the width of a matrix with no rows.

    Pivots are the smallest nonzero absolute value, ties to the lowest
    (row, column) index.
    """
    n, k = _shape(m, cols)
    a = _copy(m)
    U = identity(n)
    V = identity(k)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row dst += q * row src
        if q:
            a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
            U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        if q:
            for row in a:
                row[dst] += q * row[src]
            for row in V:
                row[dst] += q * row[src]

    factors: List[int] = []
    t = 0
    while t < min(n, k):
        piv = _find_pivot(a, t)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        while True:
            # Clear column t and row t; a nonzero remainder becomes the new pivot.
            for i in range(t + 1, n):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // a[t][t]))
            for j in range(t + 1, k):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // a[t][t]))
            best = None
            for i in range(t + 1, n):
                if a[i][t] and (best is None or abs(a[i][t]) < best[0]):
                    best = (abs(a[i][t]), "r", i)
            for j in range(t + 1, k):
                if a[t][j] and (best is None or abs(a[t][j]) < best[0]):
                    best = (abs(a[t][j]), "c", j)
            if best is not None:
                if best[1] == "r":
                    swap_rows(t, best[2])
                else:
                    swap_cols(t, best[2])
                continue
            # Row and column are clear; enforce divisibility on the remainder.
            bad = None
            for i in range(t + 1, n):
                for j in range(t + 1, k):
                    if a[i][j] % a[t][t]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
        factors.append(a[t][t])
        t += 1
    return factors, U, V


def invariant_factors(m: Sequence[Sequence[int]], cols: Optional[int] = None) -> List[int]:
    return smith_normal_form(m, cols)[0]


def cokernel(m: Sequence[Sequence[int]], cols: Optional[int] = None) -> AbelianGroup:
    """Z^rows / column span of ``m``."""
    rows = len(m)
    factors = invariant_factors(m, cols) if rows else []
    return AbelianGroup.from_factors(factors, rows)


class CokernelMap:
    """Quotient map Z^n -> Z^n / (column span of m), in SNF coordinates.

    ``coords(x)`` gives one integer per nontrivial summand: torsion
    coordinates reduced into [0, d), followed by free coordinates.
    """

    def __init__(self, m: Sequence[Sequence[int]], ambient: int):
        if len(m) != ambient:
            raise ValueError("relation matrix rows must equal the ambient rank")
        ncols = len(m[0]) if m else 0
        factors, U, _ = smith_normal_form(m, ncols) if ambient else ([], [], [])
        self.ambient = ambient
        self.factors = factors
        self._U = U
        self._torsion_idx = [i for i, d in enumerate(factors) if d > 1]
        self._free_idx = list(range(len(factors), ambient))
        self.group = AbelianGroup.from_factors(factors, ambient)

    def coords(self, x: Sequence[int]) -> Tuple[int, ...]:
        y = [sum(u * v for u, v in zip(row, x)) for row in self._U]
        tors = [y[i] % self.factors[i] for i in self._torsion_idx]
        return tuple(tors + [y[i] for i in self._free_idx])

    def is_zero(self, x: Sequence[int], modulus: int = 0) -> bool:
        """Whether x lies in the relation span (plus modulus * Z^n when given)."""
        c = self.coords(x)
        nt = len(self._torsion_idx)
        if modulus == 0:
            return not any(c)
        for value, i in zip(c[:nt], self._torsion_idx):
            if value % gcd(self.factors[i], modulus):
                return False
        return all(value % modulus == 0 for value in c[nt:])

    def divisibility(self, x: Sequence[int]) -> int:
        """Largest n with x = n * y in the free part of the quotient (0 for zero)."""
        c = self.coords(x)[len(self._torsion_idx):]
        g = 0
        for value in c:
            g = gcd(g, value)
        return g


def adjugate(m: Sequence[Sequence[int]]) -> Matrix:
    n, k = _shape(m)
    if n != k:
        raise ValueError("adjugate needs a square matrix")
    if n == 1:
        return [[1]]
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[m[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
            out[j][i] = (-1) ** (i + j) * det(minor)
    return out


def inverse_unimodular(m: Sequence[Sequence[int]]) -> Matrix:
    """Integer inverse of a matrix with determinant +-1."""
    d = det(m)
    if abs(d) != 1:
        raise ValueError(f"matrix has determinant {d}, not +-1")
    return [[d * x for x in row] for row in adjugate(m)]
