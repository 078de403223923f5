"""Random generators and oracles shared by the test modules."""

import itertools
import random
from fractions import Fraction

import sympy

from localgauss import linalg
from localgauss.gaussian_stats import matroid_bases
from localgauss.lattice_algebra import hnf


def rand_unit(rng: random.Random, p: int, size: int = 20) -> Fraction:
    """A nonzero rational of valuation 0."""
    while True:
        a = rng.randint(-size, size)
        b = rng.randint(1, size)
        if a % p and b % p:
            return Fraction(a, b)


def rand_scalar(rng, p, lo=-2, hi=3, zero_prob=0.2) -> Fraction:
    if rng.random() < zero_prob:
        return Fraction(0)
    return rand_unit(rng, p) * Fraction(p) ** rng.randint(lo, hi)


def rand_integral(rng, p, hi=3, zero_prob=0.2) -> Fraction:
    return rand_scalar(rng, p, 0, hi, zero_prob)


def rand_matrix(rng, d, m, p, lo=-2, hi=3):
    return [[rand_scalar(rng, p, lo, hi) for _ in range(m)] for _ in range(d)]


def rand_full_rank(rng, d, p, lo=-2, hi=3):
    while True:
        a = rand_matrix(rng, d, d, p, lo, hi)
        if linalg.det(a) != 0:
            return a


def rand_gl_ok(rng, d, p, steps=6):
    """Random element of GL_d(O_K) as a product of elementary matrices."""
    u = [list(r) for r in linalg.identity(d)]
    for _ in range(steps):
        kind = rng.randrange(3)
        if kind == 0:
            perm = list(range(d))
            rng.shuffle(perm)
            u = [[row[perm[j]] for j in range(d)] for row in u]
        elif kind == 1:
            i = rng.randrange(d)
            s = rand_unit(rng, p)
            u = [[x * s if j == i else x for j, x in enumerate(row)] for row in u]
        elif d > 1:
            i, j = rng.sample(range(d), 2)
            a = rand_integral(rng, p, zero_prob=0)
            # column j += a * column i
            u = [[x + a * row[i] if k == j else x for k, x in enumerate(row)] for row in u]
    return u


def rand_lattice(rng, d, p, lo=-2, hi=3):
    return hnf(rand_full_rank(rng, d, p, lo, hi), p)


def sym_val(x: Fraction, p: int):
    """Valuation via sympy's multiplicity; independent of the library code."""
    x = Fraction(x)
    if x == 0:
        return float("inf")
    return sympy.multiplicity(p, abs(x.numerator)) - sympy.multiplicity(p, x.denominator)


def sym_inverse(a):
    m = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in a])
    inv = m.inv()
    return [[Fraction(int(inv[i, j].p), int(inv[i, j].q)) for j in range(inv.cols)] for i in range(inv.rows)]


def sym_rank(rows):
    if not rows:
        return 0
    return sympy.Matrix([[sympy.Rational(Fraction(x).numerator, Fraction(x).denominator) for x in r] for r in rows]).rank()


def brute_contains(a, x, p):
    """Membership oracle via a sympy inverse."""
    inv = sym_inverse(a)
    z = [sum(inv[i][j] * Fraction(x[j]) for j in range(len(x))) for i in range(len(x))]
    return all(sym_val(c, p) >= 0 for c in z)


def exchange_holds(M):
    """Basis exchange axiom, checked over all pairs of bases."""
    bases = set(matroid_bases(M))
    if not bases:
        return False
    for A, B in itertools.product(bases, repeat=2):
        for a in set(A) - set(B):
            if not any(tuple(sorted((set(A) - {a}) | {b})) in bases for b in set(B) - set(A)):
                return False
    return True
