"""Small exact linear algebra over the rationals and over polynomial rings."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .poly import Polynomial


class EchelonSpan:
    """Incremental row span over Q with exact rank queries."""

    def __init__(self, width: int):
        self.width = width
        self.rows: list[list[Fraction]] = []
        self.pivots: list[int] = []

    def _reduce(self, vec: list[Fraction]) -> list[Fraction]:
        for row, piv in zip(self.rows, self.pivots):
            if vec[piv]:
                f = vec[piv]
                for k in range(piv, self.width):
                    vec[k] -= f * row[k]
        return vec

    def insert(self, vec: Sequence[Fraction]) -> bool:
        """Add a vector; returns True iff it enlarged the span."""
        v = self._reduce([Fraction(x) for x in vec])
        for piv in range(self.width):
            if v[piv]:
                inv = Fraction(1) / v[piv]
                v = [x * inv for x in v]
                self.rows.append(v)
                self.pivots.append(piv)
                return True
        return False

    def contains(self, vec: Sequence[Fraction]) -> bool:
        return not any(self._reduce([Fraction(x) for x in vec]))

    @property
    def rank(self) -> int:
        return len(self.rows)


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    if not rows:
        return 0
    span = EchelonSpan(len(rows[0]))
    for r in rows:
        span.insert(r)
    return span.rank


def nullspace(rows: Sequence[Sequence[Fraction]], width: int) -> list[tuple[Fraction, ...]]:
    """Basis of {v : M v = 0} for the matrix with the given rows."""
    matrix = [[Fraction(x) for x in r] for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(width):
        pivot_row = None
        for i in range(r, len(matrix)):
            if matrix[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        matrix[r], matrix[pivot_row] = matrix[pivot_row], matrix[r]
        inv = Fraction(1) / matrix[r][c]
        matrix[r] = [x * inv for x in matrix[r]]
        for i in range(len(matrix)):
            if i != r and matrix[i][c]:
                f = matrix[i][c]
                matrix[i] = [a - f * b for a, b in zip(matrix[i], matrix[r])]
        pivots.append(c)
        r += 1
        if r == len(matrix):
            break
    free = [c for c in range(width) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * width
        v[fc] = Fraction(1)
        for row_idx, pc in enumerate(pivots):
            v[pc] = -matrix[row_idx][fc]
        basis.append(tuple(v))
    return basis


def solve_coordinates(basis: Sequence[Sequence[Fraction]], vec: Sequence[Fraction]) -> list[Fraction] | None:
    """Coordinates of ``vec`` in the span of ``basis`` rows, or None."""
    width = len(vec)
    aug = EchelonSpan(width + len(basis))
    for i, b in enumerate(basis):
        tag = [Fraction(0)] * len(basis)
        tag[i] = Fraction(1)
        aug.insert(list(b) + tag)
    v = aug._reduce([Fraction(x) for x in vec] + [Fraction(0)] * len(basis))
    if any(v[:width]):
        return None
    return [-x for x in v[width:]]


# -- polynomial matrices ----------------------------------------------------


def poly_mat_mul(a: Sequence[Sequence[Polynomial]], b: Sequence[Sequence[Polynomial]]):
    n, k, m = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = None
            for t in range(k):
                term = a[i][t] * b[t][j]
                acc = term if acc is None else acc + term
            row.append(acc)
        out.append(row)
    return out


def poly_det(m: Sequence[Sequence[Polynomial]]) -> Polynomial:
    """Laplace expansion; intended for the small charts handled here."""
    n = len(m)
    if n == 1:
        return m[0][0]
    varset = m[0][0].varset
    acc = Polynomial.zero(varset)
    for j in range(n):
        if m[0][j].is_zero():
            continue
        minor = [[m[i][k] for k in range(n) if k != j] for i in range(1, n)]
        term = m[0][j] * poly_det(minor)
        acc = acc + (term if j % 2 == 0 else -term)
    return acc


def poly_adjugate(m: Sequence[Sequence[Polynomial]]) -> list[list[Polynomial]]:
    n = len(m)
    varset = m[0][0].varset
    if n == 1:
        return [[Polynomial.constant(varset, 1)]]
    adj = [[Polynomial.zero(varset) for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [
                [m[r][c] for c in range(n) if c != j]
                for r in range(n) if r != i
            ]
            cof = poly_det(minor)
            adj[j][i] = cof if (i + j) % 2 == 0 else -cof
    return adj
