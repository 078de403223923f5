"""Lattices ``A O_K^m`` in ``K^d`` and the matrix algorithms behind them.

A :class:`Lattice` is always held in Hermite normal form, so two lattices are
equal exactly when their matrices are. Column vectors generate; the HNF is
lower triangular with diagonal entries ``p^n_i`` and below-diagonal entries
reduced to digit polynomials of degree ``< n_i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple, Union

from . import linalg
from .errors import (
    DependentInput,
    DimensionMismatch,
    NormNotOne,
    NotFullRank,
    ZeroVector,
)
from .linalg import Matrix, ONE, ZERO
from .valued_field import INF, FieldConfig, _residue, _val, truncate

FieldLike = Union[FieldConfig, int]


def _cfg(field: FieldLike) -> FieldConfig:
    return field if isinstance(field, FieldConfig) else FieldConfig(field)


@dataclass(frozen=True)
class Lattice:
    """An ``O_K``-lattice given by its canonical (Hermite normal form) generators.

    ``matrix`` is ``dim x rank``; ``pivots[t]`` is the row holding the
    diagonal entry ``p^n_t`` of column ``t``. Build instances with :func:`hnf`.
    """

    p: int
    dim: int
    matrix: Matrix
    pivots: Tuple[int, ...]

    @property
    def field(self) -> FieldConfig:
        return FieldConfig(self.p)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def is_full_rank(self) -> bool:
        return self.rank == self.dim

    @property
    def columns(self) -> Tuple[Tuple[Fraction, ...], ...]:
        return tuple(tuple(row[t] for row in self.matrix) for t in range(self.rank))

    @property
    def diag_exponents(self) -> Tuple[int, ...]:
        return tuple(_val(self.matrix[i][t], self.p) for t, i in enumerate(self.pivots))

    def __str__(self):
        return format_matrix(self.matrix)


def format_matrix(rows) -> str:
    """Compact text form ``[[1,0],[1/2,2]]``; also the vertex id in building graphs."""
    return "[" + ",".join("[" + ",".join(str(x) for x in row) + "]" for row in rows) + "]"


def _require_full(L: Lattice, what: str = "lattice"):
    if not L.is_full_rank:
        raise NotFullRank(f"{what} {L} has rank {L.rank} < {L.dim}")


# ---------------------------------------------------------------------------
# Hermite normal form


def _column_echelon(cols: List[List[Fraction]], d: int, p: int):
    """Triangularize generator columns in place.

    Returns (pivot columns, pivot rows, pivot valuations). Pivot entries are
    normalized to pure powers of ``p``; no below-diagonal reduction is done.
    """
    k = 0
    pivots = []
    vals = []
    pp = Fraction(p)
    m = len(cols)
    for i in range(d):
        if k == m:
            break
        best, bestv = None, INF
        for j in range(k, m):
            x = cols[j][i]
            if x:
                v = _val(x, p)
                if v < bestv:
                    best, bestv = j, v
        if best is None:
            continue
        cols[k], cols[best] = cols[best], cols[k]
        piv = cols[k]
        a = piv[i]
        for j in range(k + 1, m):
            x = cols[j][i]
            if x:
                f = x / a
                col = cols[j]
                for r in range(i, d):
                    if piv[r]:
                        col[r] -= f * piv[r]
        s = pp**bestv / a
        if s != 1:
            cols[k] = [x * s for x in piv]
        pivots.append(i)
        vals.append(bestv)
        k += 1
    return cols[:k], pivots, vals


def _reduce_below(cols: List[List[Fraction]], pivots: List[int], vals: List[int], p: int):
    for t, i in enumerate(pivots):
        n = vals[t]
        piv = cols[t]
        for s in range(t):
            x = cols[s][i]
            if not x:
                continue
            r = truncate(x, p, n)
            if r != x:
                f = (x - r) / piv[i]
                col = cols[s]
                for row in range(i, len(col)):
                    if piv[row]:
                        col[row] -= f * piv[row]


def hnf(a: Sequence[Sequence], field: FieldLike) -> Lattice:
    """The lattice spanned over ``O_K`` by the columns of ``a``, in canonical form.

    ``a`` is a ``d x m`` matrix of any rank. Low-rank lattices come back as
    ``d x r`` matrices whose pivot rows satisfy the Hermite conditions.
    """
    cfg = _cfg(field)
    rows = linalg.to_matrix(a)
    d, m = linalg.shape(rows)
    cols = [[rows[i][j] for i in range(d)] for j in range(m)]
    return _hnf_columns(cols, d, cfg.p)


def _hnf_columns(cols: List[List[Fraction]], d: int, p: int) -> Lattice:
    cols, pivots, vals = _column_echelon(cols, d, p)
    _reduce_below(cols, pivots, vals, p)
    matrix = tuple(tuple(col[i] for col in cols) for i in range(d))
    return Lattice(p, d, matrix, tuple(pivots))


def lattice_from_columns(columns: Sequence[Sequence], dim: int, field: FieldLike) -> Lattice:
    cfg = _cfg(field)
    cols = [[Fraction(x) for x in c] for c in columns]
    if any(len(c) != dim for c in cols):
        raise DimensionMismatch(f"expected vectors of length {dim}")
    return _hnf_columns(cols, dim, cfg.p)


def is_hermite_form(a: Sequence[Sequence], field: FieldLike) -> bool:
    """Check the three Hermite conditions for a square matrix."""
    p = _cfg(field).p
    n = len(a)
    for i in range(n):
        if len(a[i]) != n:
            return False
        for j in range(i + 1, n):
            if a[i][j]:
                return False
        x = Fraction(a[i][i])
        if not x or x != Fraction(p) ** _val(x, p):
            return False
        ni = _val(x, p)
        for j in range(i):
            y = Fraction(a[i][j])
            if y and truncate(y, p, ni) != y:
                return False
    return True


def standard_lattice(d: int, field: FieldLike) -> Lattice:
    return hnf(linalg.identity(d), field)


def diagonal_lattice(exponents: Sequence[int], field: FieldLike) -> Lattice:
    cfg = _cfg(field)
    return hnf(linalg.diagonal([Fraction(cfg.p) ** e for e in exponents]), cfg)


def scale(L: Lattice, k: int) -> Lattice:
    """``p^k L``."""
    c = Fraction(L.p) ** k
    return hnf([[c * x for x in row] for row in L.matrix], L.p)


def log_volume(columns: Sequence[Sequence[Fraction]], dim: int, p: int) -> int:
    """``val(det)`` of the full-rank lattice spanned by ``columns``.

    Triangularization only; skips the digit reduction that :func:`hnf` does.
    """
    cols = [list(c) for c in columns]
    _, pivots, vals = _column_echelon(cols, dim, p)
    if len(pivots) != dim:
        raise NotFullRank("generators do not span K^d")
    return sum(vals)


def measure_log(L: Lattice) -> int:
    """``val(det A)``; the Haar measure of ``L`` is ``q ** -measure_log(L)``."""
    _require_full(L)
    return sum(L.diag_exponents)


# ---------------------------------------------------------------------------
# Membership, duality, sums and intersections


def _coordinates(L: Lattice, x: Sequence[Fraction]):
    """Solve ``A z = x`` on the pivot rows; None when ``x`` is outside the span."""
    a = L.matrix
    z = []
    for t, i in enumerate(L.pivots):
        s = x[i] - sum((a[i][u] * z[u] for u in range(t)), ZERO)
        z.append(s / a[i][t])
    for row, xi in zip(a, x):
        if sum((aij * zj for aij, zj in zip(row, z)), ZERO) != xi:
            return None
    return z


def contains(L: Lattice, x: Sequence) -> bool:
    """Whether ``x`` lies in ``L`` (``A^{-1} x`` integral)."""
    x = [Fraction(v) for v in x]
    if len(x) != L.dim:
        raise DimensionMismatch(f"vector of length {len(x)} vs lattice in K^{L.dim}")
    z = _coordinates(L, x)
    if z is None:
        return False
    return all(_val(c, L.p) >= 0 for c in z)


def dual(L: Lattice) -> Lattice:
    """``{y : y.x in O_K for all x in L}``, the lattice of ``A^{-T}``."""
    _require_full(L)
    return hnf(linalg.transpose(linalg.inverse(L.matrix)), L.p)


def _check_compatible(L1: Lattice, L2: Lattice):
    if L1.dim != L2.dim:
        raise DimensionMismatch(f"lattices in K^{L1.dim} and K^{L2.dim}")
    if L1.p != L2.p:
        raise DimensionMismatch(f"lattices over Q_{L1.p} and Q_{L2.p}")


def lattice_sum(L1: Lattice, L2: Lattice) -> Lattice:
    _check_compatible(L1, L2)
    cols = [list(c) for c in L1.columns + L2.columns]
    return _hnf_columns(cols, L1.dim, L1.p)


def intersect(L1: Lattice, L2: Lattice) -> Lattice:
    """``L1 & L2`` computed as the dual of ``dual(L1) + dual(L2)``."""
    _check_compatible(L1, L2)
    _require_full(L1)
    _require_full(L2)
    return dual(lattice_sum(dual(L1), dual(L2)))


def is_sublattice(L1: Lattice, L2: Lattice) -> bool:
    """``L1 <= L2``."""
    _check_compatible(L1, L2)
    return all(contains(L2, c) for c in L1.columns)


def independence_lattice(L: Lattice) -> Lattice:
    """The largest sublattice of ``L`` of the form ``diag(p^m_1, ..., p^m_d) O_K^d``."""
    _require_full(L)
    inv = linalg.inverse(L.matrix)
    exps = [-min(_val(inv[j][i], L.p) for j in range(L.dim)) for i in range(L.dim)]
    return diagonal_lattice(exps, L.p)


# ---------------------------------------------------------------------------
# Orthogonality


def _residues(v, p):
    return [_residue(x, p) for x in v]


def _min_val(v, p):
    return min((_val(x, p) for x in v), default=INF)


def is_orthonormal(vectors: Sequence[Sequence], field: FieldLike) -> bool:
    """Norm-one vectors are orthonormal iff their residues are independent over F_p."""
    p = _cfg(field).p
    vecs = [[Fraction(x) for x in v] for v in vectors]
    for v in vecs:
        if _min_val(v, p) != 0:
            raise NormNotOne(f"vector {format_matrix([v])} does not have norm 1")
    if not vecs:
        return True
    return linalg.rank_mod_p([_residues(v, p) for v in vecs], p) == len(vecs)


def normalize(v: Sequence[Fraction], p: int) -> List[Fraction]:
    """Scale a nonzero vector by a power of ``p`` to norm 1."""
    m = _min_val(v, p)
    if m == INF:
        raise ZeroVector("zero vector cannot be normalized")
    c = Fraction(p) ** -m
    return [x * c for x in v]


def is_orthogonal(vectors: Sequence[Sequence], field: FieldLike) -> bool:
    p = _cfg(field).p
    vecs = [[Fraction(x) for x in v] for v in vectors]
    return is_orthonormal([normalize(v, p) for v in vecs], p)


def _orthonormal_completion(vs: List[List[Fraction]], d: int, p: int):
    """Extend orthonormal ``vs`` by standard basis vectors to a basis of ``O_K^d``."""
    basis = [list(v) for v in vs]
    res = [_residues(v, p) for v in vs]
    for j in range(d):
        e = [ONE if i == j else ZERO for i in range(d)]
        er = [1 if i == j else 0 for i in range(d)]
        if linalg.rank_mod_p(res + [er], p) > len(res):
            basis.append(e)
            res.append(er)
        if len(basis) == d:
            break
    return basis


def orthonormalize(vectors: Sequence[Sequence], field: FieldLike) -> List[List[Fraction]]:
    """Orthonormal ``v_1..v_n`` with ``span(e_1..e_k) = span(v_1..v_k)`` for every k.

    Each new vector is normalized, then the residue component lying in the
    span of the earlier ``v`` is subtracted and the remainder renormalized,
    until the residue is independent.
    """
    p = _cfg(field).p
    es = [[Fraction(x) for x in v] for v in vectors]
    if not es:
        return []
    d = len(es[0])
    if linalg.rank(es) < len(es):
        raise DependentInput("input vectors are linearly dependent over K")
    vs: List[List[Fraction]] = []
    for e in es:
        w = normalize(e, p)
        # Each pass multiplies dist(w, span vs) by at least p and that
        # distance never exceeds 1, so the pass count is bounded.
        basis = _orthonormal_completion(vs, d, p)
        coeffs = linalg.matvec(linalg.inverse(linalg.transpose(basis)), w)
        bound = min(_val(c, p) for c in coeffs[len(vs):])
        steps = 0
        while True:
            sol = linalg.solve_mod_p([_residues(v, p) for v in vs], _residues(w, p), p) if vs else None
            if sol is None:
                vs.append(w)
                break
            for c, v in zip(sol, vs):
                if c:
                    w = [x - c * y for x, y in zip(w, v)]
            w = normalize(w, p)
            steps += 1
            assert steps <= bound, "orthonormalization exceeded its pass bound"
    return vs


def in_gl_ok(a: Sequence[Sequence], field: FieldLike) -> bool:
    """Whether a square matrix and its inverse both have entries in ``O_K``."""
    p = _cfg(field).p
    if linalg.det(a) == 0:
        return False
    inv = linalg.inverse(a)
    return all(_val(Fraction(x), p) >= 0 for row in a for x in row) and all(
        _val(x, p) >= 0 for row in inv for x in row
    )


# ---------------------------------------------------------------------------
# Smith normal form / SVD


@dataclass(frozen=True)
class SvdDecomposition:
    """``A = U D V`` with ``U, V`` in ``GL(O_K)`` and ``D`` diagonal."""

    U: Matrix
    D: Matrix
    V: Matrix

    def exponents(self, p: int) -> Tuple[int, ...]:
        """Valuations of the nonzero diagonal entries of ``D``, nondecreasing."""
        n = min(len(self.D), len(self.D[0]) if self.D else 0)
        return tuple(_val(self.D[i][i], p) for i in range(n) if self.D[i][i])


def svd(a: Sequence[Sequence], field: FieldLike) -> SvdDecomposition:
    """Non-archimedean SVD (Smith form): global minimal-valuation pivoting."""
    p = _cfg(field).p
    pp = Fraction(p)
    m = [list(r) for r in linalg.to_matrix(a)]
    d, n = linalg.shape(m)
    U = [list(r) for r in linalg.identity(d)]
    V = [list(r) for r in linalg.identity(n)]
    for k in range(min(d, n)):
        best, bestv = None, INF
        for i in range(k, d):
            for j in range(k, n):
                if m[i][j]:
                    v = _val(m[i][j], p)
                    if v < bestv:
                        best, bestv = (i, j), v
        if best is None:
            break
        i, j = best
        if i != k:
            m[k], m[i] = m[i], m[k]
            for row in U:
                row[k], row[i] = row[i], row[k]
        if j != k:
            for row in m:
                row[k], row[j] = row[j], row[k]
            V[k], V[j] = V[j], V[k]
        piv = m[k][k]
        for r in range(k + 1, d):
            if m[r][k]:
                f = m[r][k] / piv
                m[r] = [x - f * y for x, y in zip(m[r], m[k])]
                for row in U:
                    row[k] += f * row[r]
        for c in range(k + 1, n):
            if m[k][c]:
                g = m[k][c] / piv
                m[k][c] = ZERO
                V[k] = [x + g * y for x, y in zip(V[k], V[c])]
        s = pp**bestv / piv
        m[k][k] = pp**bestv
        for row in U:
            row[k] /= s
    return SvdDecomposition(linalg.to_matrix(U), linalg.to_matrix(m), linalg.to_matrix(V))
