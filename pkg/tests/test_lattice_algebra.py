import itertools
import random
from fractions import Fraction as F

import pytest

from localgauss import linalg
from localgauss.errors import DependentInput, DimensionMismatch, NormNotOne, NotFullRank, ZeroVector
from localgauss.lattice_algebra import (
    contains,
    diagonal_lattice,
    dual,
    hnf,
    in_gl_ok,
    independence_lattice,
    intersect,
    is_hermite_form,
    is_orthogonal,
    is_orthonormal,
    is_sublattice,
    lattice_sum,
    log_volume,
    measure_log,
    orthonormalize,
    scale,
    standard_lattice,
    svd,
)
from localgauss.valued_field import _val
from helpers import brute_contains, rand_full_rank, rand_gl_ok, rand_integral, rand_lattice, rand_matrix, sym_rank, sym_val

Q7_A = [[12, 314, 234, 34], [12, 343, 55, 67], [25, 54, 65, 65], [61, 461, 430, 328]]
Q2_EXAMPLE = [[1, 0, 0], [F(1, 2) + 4, 2, 0], [4, 2, 1]]
Q2_EXAMPLE_HNF = ((1, 0, 0), (F(1, 2), 2, 0), (0, 0, 1))


# -- orthogonality ----------------------------------------------------------


def test_is_orthonormal_q7_example():
    assert is_orthonormal(Q7_A[:3], 7)
    assert not is_orthonormal(Q7_A, 7)
    assert is_orthonormal(linalg.identity(4), 7)


def test_is_orthonormal_rejects_non_unit_norm():
    with pytest.raises(NormNotOne):
        is_orthonormal([[7, 0]], 7)


def test_is_orthogonal():
    assert is_orthogonal([[1, 0], [0, 3**3]], 3)
    assert not is_orthogonal([[1, 0], [1, 3]], 3)
    scaled = [[7 * x for x in row] for row in Q7_A]
    assert is_orthogonal(scaled[:3], 7)
    assert not is_orthogonal(scaled, 7)
    with pytest.raises(ZeroVector):
        is_orthogonal([[0, 0]], 7)


def test_orthonormalize_examples():
    assert orthonormalize(linalg.identity(3), 5) == [list(r) for r in linalg.identity(3)]
    assert orthonormalize([[1, 0], [1, 3]], 3) == [[1, 0], [0, 1]]
    with pytest.raises(DependentInput):
        orthonormalize([[1, 2], [2, 4]], 3)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_orthonormalize_flags(p):
    rng = random.Random(p)
    for _ in range(40):
        d = rng.randint(2, 4)
        n = rng.randint(1, d)
        es = rand_full_rank(rng, d, p)[:n]
        vs = orthonormalize(es, p)
        assert is_orthonormal(vs, p)
        for k in range(1, n + 1):
            assert sym_rank(es[:k] + vs[:k]) == k


# -- SVD --------------------------------------------------------------------


def _check_svd(a, p):
    s = svd(a, p)
    assert linalg.matmul(linalg.matmul(s.U, s.D), s.V) == linalg.to_matrix(a)
    assert in_gl_ok(s.U, p) and in_gl_ok(s.V, p)
    for i, row in enumerate(s.D):
        for j, x in enumerate(row):
            if i != j:
                assert x == 0
            elif x:
                assert x == F(p) ** _val(x, p)
    exps = s.exponents(p)
    assert list(exps) == sorted(exps)
    return s


def test_svd_examples():
    s = _check_svd(linalg.identity(2), 3)
    assert s.U == s.V == s.D == linalg.identity(2)
    s = _check_svd([[9, 0], [0, F(1, 3)]], 3)
    assert s.exponents(3) == (-1, 2)
    s = _check_svd([[1, 0], [1, 3]], 3)
    assert s.exponents(3) == (0, 1)


def test_svd_random():
    rng = random.Random(11)
    for _ in range(100):
        p = rng.choice([2, 3, 5])
        d, n = rng.randint(1, 4), rng.randint(1, 4)
        a = rand_matrix(rng, d, n, p)
        s = _check_svd(a, p)
        assert len(s.exponents(p)) == linalg.rank(a)
        if d == n and linalg.det(a):
            assert sum(s.exponents(p)) == sym_val(linalg.det(a), p)
            # rows of U are orthonormal exactly because U is in GL(O_K)
            assert is_orthonormal(s.U, p)


def test_gl_ok_orthonormal_bridge():
    rng = random.Random(5)
    checked = 0
    while checked < 100:
        p = rng.choice([2, 3])
        d = rng.randint(1, 3)
        m = [[rand_integral(rng, p, hi=1, zero_prob=0.4) for _ in range(d)] for _ in range(d)]
        if not linalg.det(m) or any(min(_val(x, p) for x in r) != 0 for r in m):
            continue
        assert is_orthonormal(m, p) == in_gl_ok(m, p)
        assert is_orthonormal(rand_gl_ok(rng, d, p), p)
        checked += 1


# -- Hermite normal form ----------------------------------------------------


def test_hnf_worked_example():
    L = hnf(Q2_EXAMPLE, 2)
    assert L.matrix == Q2_EXAMPLE_HNF
    assert measure_log(L) == 1
    assert is_hermite_form(Q2_EXAMPLE_HNF, 2)
    assert not is_hermite_form(Q2_EXAMPLE, 2)


def test_hnf_small_examples():
    assert hnf(linalg.identity(3), 5).matrix == linalg.identity(3)
    assert hnf([[0, 1], [2, 0]], 2).matrix == ((1, 0), (0, 2))


def test_hnf_rank_zero_and_low_rank():
    Z = hnf([[0, 0], [0, 0]], 3)
    assert Z.rank == 0 and Z.matrix == ((), ())
    L = hnf([[3, 6], [1, 2], [0, 0]], 3)
    assert L.rank == 1 and L.pivots == (0,)
    assert L.matrix == ((3,), (1,), (0,))
    assert contains(L, [6, 2, 0]) and not contains(L, [1, 1, 0])
    assert not contains(L, [1, F(1, 3), 0])


def _canonical_low_rank(L):
    """Pivot rows form a square Hermite matrix."""
    sub = [L.matrix[i] for i in L.pivots]
    return is_hermite_form(sub, L.p)


def test_hnf_invariance_and_form():
    rng = random.Random(1)
    for _ in range(150):
        p = rng.choice([2, 3, 5])
        d = rng.randint(1, 4)
        m = rng.randint(1, 5)
        a = rand_matrix(rng, d, m, p)
        L = hnf(a, p)
        assert L.rank == linalg.rank(a)
        assert _canonical_low_rank(L)
        u = rand_gl_ok(rng, m, p)
        assert hnf(linalg.matmul(a, u), p) == L
        for col in zip(*a):
            assert contains(L, col)


def test_hnf_generates_same_lattice_as_input():
    rng = random.Random(2)
    for _ in range(60):
        p = rng.choice([2, 3])
        a = rand_full_rank(rng, 3, p)
        L = hnf(a, p)
        assert is_hermite_form(L.matrix, p)
        for col in zip(*a):
            assert brute_contains(L.matrix, col, p)
        for col in zip(*L.matrix):
            assert brute_contains(a, col, p)


# -- measure, membership ----------------------------------------------------


def test_measure_log():
    assert measure_log(diagonal_lattice([2, -1, 3], 5)) == 4
    assert measure_log(standard_lattice(3, 2)) == 0
    with pytest.raises(NotFullRank):
        measure_log(hnf([[1], [0]], 2))


def test_measure_log_is_det_valuation():
    rng = random.Random(3)
    for _ in range(50):
        p = rng.choice([2, 3, 5])
        a = rand_full_rank(rng, rng.randint(1, 4), p)
        L = hnf(a, p)
        assert measure_log(L) == sym_val(linalg.det(a), p)
        assert log_volume(L.columns, L.dim, p) == measure_log(L)


def test_contains_examples():
    L = hnf([[1, 0], [1, 3]], 3)
    assert contains(L, [1, 1])
    assert not contains(L, [1, 0])
    assert not contains(standard_lattice(2, 3), [F(1, 3), 0])
    with pytest.raises(DimensionMismatch):
        contains(L, [1, 1, 1])


def test_contains_matches_oracle():
    rng = random.Random(4)
    for _ in range(100):
        p = rng.choice([2, 3])
        L = rand_lattice(rng, 3, p)
        x = rand_matrix(rng, 1, 3, p)[0]
        assert contains(L, x) == brute_contains(L.matrix, x, p)


def test_monotone_measure():
    rng = random.Random(6)
    for _ in range(100):
        p = rng.choice([2, 3, 5])
        d = rng.randint(1, 3)
        L1 = rand_lattice(rng, d, p)
        n = [[rand_integral(rng, p, hi=2) for _ in range(d)] for _ in range(d)]
        if not linalg.det(n):
            continue
        L2 = hnf(linalg.matmul(L1.matrix, n), p)
        assert is_sublattice(L2, L1)
        assert measure_log(L1) <= measure_log(L2)
        assert (measure_log(L1) < measure_log(L2)) == (L1 != L2)


# -- duality, sums, intersections ------------------------------------------


def test_dual_examples():
    assert dual(standard_lattice(3, 2)) == standard_lattice(3, 2)
    assert dual(diagonal_lattice([1, -2, 0], 3)) == diagonal_lattice([-1, 2, 0], 3)


def test_dual_involution_and_measure():
    rng = random.Random(7)
    for _ in range(50):
        p = rng.choice([2, 3, 5])
        L = rand_lattice(rng, rng.randint(1, 4), p)
        D = dual(L)
        assert dual(D) == L
        assert measure_log(D) == -measure_log(L)
        # pairing is integral on generators
        for y in D.columns:
            for x in L.columns:
                assert _val(sum(a * b for a, b in zip(x, y)), p) >= 0


def test_sum_and_intersect_examples():
    rng = random.Random(8)
    L = rand_lattice(rng, 3, 3)
    assert lattice_sum(L, L) == L
    assert intersect(L, L) == L
    O = standard_lattice(2, 5)
    P = diagonal_lattice([1, 1], 5)
    assert intersect(O, P) == P
    assert lattice_sum(O, P) == O
    with pytest.raises(DimensionMismatch):
        lattice_sum(O, standard_lattice(3, 5))


def test_intersect_membership_property():
    rng = random.Random(9)
    for _ in range(60):
        p = rng.choice([2, 3])
        d = rng.randint(1, 3)
        L1, L2 = rand_lattice(rng, d, p), rand_lattice(rng, d, p)
        M = intersect(L1, L2)
        assert measure_log(M) >= max(measure_log(L1), measure_log(L2))
        for _ in range(5):
            z = [rand_integral(rng, p) for _ in range(d)]
            x = linalg.matvec(M.matrix, z)
            assert contains(L1, x) and contains(L2, x)
        S = lattice_sum(L1, L2)
        assert is_sublattice(L1, S) and is_sublattice(L2, S)


def _between(rng, p, d, K):
    """A lattice with p^K O^d <= L <= O^d."""
    gens = [[rand_integral(rng, p, hi=K) for _ in range(d)] for _ in range(rng.randint(0, d))]
    cols = gens + [[p**K if i == j else 0 for i in range(d)] for j in range(d)]
    return hnf(linalg.transpose(cols), p)


def test_intersection_index_by_enumeration():
    # Count residues mod p^K inside each lattice; the count is p^(dK - measure_log).
    rng = random.Random(10)
    p, d, K = 2, 2, 3
    box = list(itertools.product(range(p**K), repeat=d))
    for _ in range(30):
        L1, L2 = _between(rng, p, d, K), _between(rng, p, d, K)
        M = intersect(L1, L2)
        count = sum(1 for x in box if brute_contains(L1.matrix, x, p) and brute_contains(L2.matrix, x, p))
        assert count == p ** (d * K - measure_log(M))


# -- independence lattice ---------------------------------------------------


def test_independence_lattice_3x3_example():
    for p in (2, 3, 5):
        L = hnf([[1, 0, 0], [1, p**2, 0], [1, p, p**2]], p)
        assert independence_lattice(L) == diagonal_lattice([3, 3, 2], p)


def test_independence_lattice_maximal():
    rng = random.Random(12)
    assert independence_lattice(diagonal_lattice([1, -1], 3)) == diagonal_lattice([1, -1], 3)
    for _ in range(50):
        p = rng.choice([2, 3])
        d = rng.randint(1, 3)
        L = rand_lattice(rng, d, p)
        D = independence_lattice(L)
        exps = D.diag_exponents
        assert all(D.matrix[i][j] == 0 for i in range(d) for j in range(d) if i != j)
        assert is_sublattice(D, L)
        for i in range(d):
            bigger = list(exps)
            bigger[i] -= 1
            assert not is_sublattice(diagonal_lattice(bigger, p), L)


def test_scale():
    rng = random.Random(13)
    L = rand_lattice(rng, 3, 2)
    assert measure_log(scale(L, 2)) == measure_log(L) + 6
    assert scale(scale(L, 2), -2) == L
