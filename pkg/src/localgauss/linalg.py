"""Dense exact linear algebra over Q and over F_p.

Matrices are sequences of rows. Functions return tuples of tuples so results
can be hashed and compared; inputs may be any nested sequences.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence, Tuple

from .errors import DimensionMismatch, NotFullRank

Matrix = Tuple[Tuple[Fraction, ...], ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def to_matrix(rows) -> Matrix:
    rows = tuple(tuple(Fraction(x) for x in row) for row in rows)
    if rows and len({len(r) for r in rows}) != 1:
        raise DimensionMismatch("ragged matrix")
    return rows


def shape(a: Sequence[Sequence]) -> Tuple[int, int]:
    return len(a), (len(a[0]) if a else 0)


def identity(n: int) -> Matrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def diagonal(entries) -> Matrix:
    n = len(entries)
    return tuple(
        tuple(Fraction(entries[i]) if i == j else ZERO for j in range(n)) for i in range(n)
    )


def transpose(a: Sequence[Sequence]) -> Matrix:
    return tuple(zip(*a)) if a else ()


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    if shape(a)[1] != len(b):
        raise DimensionMismatch(f"cannot multiply {shape(a)} by {shape(b)}")
    bt = transpose(b)
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), ZERO) for col in bt) for row in a)


def matvec(a: Sequence[Sequence], x: Sequence) -> Tuple[Fraction, ...]:
    return tuple(sum((aij * xj for aij, xj in zip(row, x)), ZERO) for row in a)


def _echelon(a: Sequence[Sequence]):
    """Row echelon form over Q; returns (rows, pivot columns, determinant sign*product)."""
    m = [list(map(Fraction, r)) for r in a]
    nrows, ncols = shape(m)
    pivots = []
    det = ONE
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if m[i][c]), None)
        if piv is None:
            det = ZERO
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
            det = -det
        det *= m[r][c]
        for i in range(r + 1, nrows):
            if m[i][c]:
                f = m[i][c] / m[r][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots, det


def rank(a: Sequence[Sequence]) -> int:
    return len(_echelon(a)[1]) if a else 0


def det(a: Sequence[Sequence]) -> Fraction:
    n, m = shape(a)
    if n != m:
        raise DimensionMismatch("determinant of a non-square matrix")
    if n == 0:
        return ONE
    _, pivots, d = _echelon(a)
    return d if len(pivots) == n else ZERO


def inverse(a: Sequence[Sequence]) -> Matrix:
    n, m = shape(a)
    if n != m:
        raise DimensionMismatch("inverse of a non-square matrix")
    aug = [list(map(Fraction, row)) + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(a)]
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i][c]), None)
        if piv is None:
            raise NotFullRank("matrix is singular")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return tuple(tuple(row[n:]) for row in aug)


def rank_mod_p(rows: Sequence[Sequence[int]], p: int) -> int:
    """Rank over F_p by Gaussian elimination."""
    work = [[x % p for x in r] for r in rows]
    if not work:
        return 0
    ncols = len(work[0])
    rk = 0
    for c in range(ncols):
        piv = next((i for i in range(rk, len(work)) if work[i][c]), None)
        if piv is None:
            continue
        work[rk], work[piv] = work[piv], work[rk]
        inv = pow(work[rk][c], -1, p)
        work[rk] = [x * inv % p for x in work[rk]]
        for i in range(len(work)):
            if i != rk and work[i][c]:
                f = work[i][c]
                work[i] = [(x - f * y) % p for x, y in zip(work[i], work[rk])]
        rk += 1
        if rk == len(work):
            break
    return rk


def solve_mod_p(rows: Sequence[Sequence[int]], target: Sequence[int], p: int) -> List[int] | None:
    """Coefficients ``c`` with ``sum c_i rows[i] = target`` over F_p, or None."""
    k = len(rows)
    n = len(target)
    # columns of the system are the given rows
    aug = [[rows[i][j] % p for i in range(k)] + [target[j] % p] for j in range(n)]
    pivcols = []
    r = 0
    for c in range(k):
        piv = next((i for i in range(r, n) if aug[i][c]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = pow(aug[r][c], -1, p)
        aug[r] = [x * inv % p for x in aug[r]]
        for i in range(n):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [(x - f * y) % p for x, y in zip(aug[i], aug[r])]
        pivcols.append(c)
        r += 1
    if any(aug[i][k] for i in range(r, n)):
        return None
    sol = [0] * k
    for i, c in enumerate(pivcols):
        sol[c] = aug[i][k]
    return sol
