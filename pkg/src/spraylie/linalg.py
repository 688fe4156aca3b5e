"""Exact linear algebra over the rationals.

Everything here works on plain lists of Fractions.  Matrices are row-major.
The solvers never touch floats: ranks, kernels, determinants, and signatures
are all decided exactly, which is what the algebraic layer requires.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Vec = list[Fraction]
Mat = list[list[Fraction]]


def to_fractions(rows: Iterable[Iterable]) -> Mat:
    return [[Fraction(v) for v in row] for row in rows]


def identity(n: int) -> Mat:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def zeros(rows: int, cols: int) -> Mat:
    return [[Fraction(0)] * cols for _ in range(rows)]


def mat_mul(a: Mat, b: Mat) -> Mat:
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
    out = zeros(rows, cols)
    for i in range(rows):
        ai = a[i]
        oi = out[i]
        for k in range(inner):
            f = ai[k]
            if not f:
                continue
            bk = b[k]
            for j in range(cols):
                if bk[j]:
                    oi[j] += f * bk[j]
    return out


def mat_vec(a: Mat, v: Sequence[Fraction]) -> Vec:
    return [sum((row[j] * v[j] for j in range(len(v)) if v[j]), Fraction(0)) for row in a]


def transpose(a: Mat) -> Mat:
    return [list(col) for col in zip(*a)] if a else []


def rref(matrix: Iterable[Iterable]) -> tuple[Mat, list[int]]:
    """Reduced row echelon form and the pivot column list."""
    m = to_fractions(matrix)
    if not m:
        return [], []
    rows, cols = len(m), len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot_row = None
        for i in range(r, rows):
            if m[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        row_r = m[r]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                mi = m[i]
                for j in range(c, cols):
                    if row_r[j]:
                        mi[j] -= f * row_r[j]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(matrix: Iterable[Iterable]) -> int:
    return len(rref(matrix)[1])


def kernel_basis(matrix: Iterable[Iterable], ncols: int | None = None) -> list[Vec]:
    """Basis of the right kernel, one vector per free column, in column order."""
    m = to_fractions(matrix)
    if ncols is None:
        if not m:
            raise ValueError("ncols is required for an empty matrix")
        ncols = len(m[0])
    if not m:
        return [unit_vector(ncols, j) for j in range(ncols)]
    reduced, pivots = rref(m)
    pivot_set = set(pivots)
    free_cols = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free_cols:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -reduced[r][fc]
        basis.append(vec)
    return basis


def unit_vector(n: int, j: int) -> Vec:
    v = [Fraction(0)] * n
    v[j] = Fraction(1)
    return v


def solve(a: Iterable[Iterable], b: Sequence) -> Vec | None:
    """One solution of A x = b, or None when inconsistent.

    When the solution is not unique the free coordinates are set to zero.
    """
    m = to_fractions(a)
    rhs = [Fraction(v) for v in b]
    if len(m) != len(rhs):
        raise ValueError("row count of A must match length of b")
    if not m:
        return [] if not rhs else None
    ncols = len(m[0])
    augmented = [row + [rv] for row, rv in zip(m, rhs)]
    reduced, pivots = rref(augmented)
    if ncols in pivots:
        return None
    out = [Fraction(0)] * ncols
    for r, pc in enumerate(pivots):
        out[pc] = reduced[r][ncols]
    return out


def det(matrix: Iterable[Iterable]) -> Fraction:
    m = to_fractions(matrix)
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("determinant requires a square matrix")
    sign = 1
    result = Fraction(1)
    for c in range(n):
        pivot_row = None
        for i in range(c, n):
            if m[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != c:
            m[c], m[pivot_row] = m[pivot_row], m[c]
            sign = -sign
        pivot = m[c][c]
        result *= pivot
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] / pivot
                mi, mc = m[i], m[c]
                for j in range(c, n):
                    mi[j] -= f * mc[j]
    return result * sign


def congruence_signature(matrix: Iterable[Iterable]) -> tuple[int, int, int]:
    """(positive, negative, zero) inertia of a symmetric rational matrix.

    Diagonalizes by simultaneous row/column operations, which preserves the
    signature (Sylvester's law); no eigenvalues and no floats involved.
    """
    m = to_fractions(matrix)
    n = len(m)
    for i in range(n):
        if len(m[i]) != n:
            raise ValueError("signature requires a square matrix")
        for j in range(i):
            if m[i][j] != m[j][i]:
                raise ValueError("signature requires a symmetric matrix")

    def add_row_col(dst: int, src: int, factor: Fraction) -> None:
        for j in range(n):
            m[dst][j] += factor * m[src][j]
        for i in range(n):
            m[i][dst] += factor * m[i][src]

    def swap_row_col(a: int, b: int) -> None:
        m[a], m[b] = m[b], m[a]
        for row in m:
            row[a], row[b] = row[b], row[a]

    for k in range(n):
        if not m[k][k]:
            moved = False
            for i in range(k + 1, n):
                if m[i][i]:
                    swap_row_col(k, i)
                    moved = True
                    break
            if not moved:
                off = None
                for i in range(k, n):
                    for j in range(i + 1, n):
                        if m[i][j]:
                            off = (i, j)
                            break
                    if off:
                        break
                if off is None:
                    break  # remaining block is zero
                i, j = off
                add_row_col(i, j, Fraction(1))  # makes m[i][i] = 2*m[i][j] != 0
                if i != k:
                    swap_row_col(k, i)
        if not m[k][k]:
            continue
        for i in range(k + 1, n):
            if m[i][k]:
                add_row_col(i, k, -m[i][k] / m[k][k])
    pos = sum(1 for i in range(n) if m[i][i] > 0)
    neg = sum(1 for i in range(n) if m[i][i] < 0)
    return pos, neg, n - pos - neg
