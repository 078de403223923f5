"""Gaussian measures on ``K^d``: uniform (normalized Haar) measures on lattices.

Sampling, likelihood, maximum-likelihood lattices and the conditional
independence matroid read off a Hermite normal form.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from . import linalg
from .errors import BadSubset, DimensionMismatch, EmptyData, NotFullRank, TooLarge
from .lattice_algebra import (
    FieldLike,
    Lattice,
    _cfg,
    contains,
    hnf,
    lattice_from_columns,
    measure_log,
    normalize,
    standard_lattice,
)
from .valued_field import INF, FieldConfig, _residue, _val, int_valuation

SHARD_SIZE = 4096
MAX_GROUND = 20


@dataclass(frozen=True)
class GaussianDist:
    """The uniform probability measure on ``lattice``."""

    lattice: Lattice

    @property
    def field(self) -> FieldConfig:
        return self.lattice.field

    @property
    def dim(self) -> int:
        return self.lattice.dim

    @classmethod
    def standard(cls, d: int, field: FieldLike) -> "GaussianDist":
        return cls(standard_lattice(d, field))


# ---------------------------------------------------------------------------
# Sampling


@dataclass(frozen=True)
class SampleResult:
    point: Tuple[Fraction, ...]
    valuations: Tuple[float, ...]
    censored: Tuple[bool, ...]
    precision: int
    seed: int


def digit_generator(seed: int, shard: int = 0) -> np.random.Generator:
    """Counter-based (Philox) stream keyed by ``(seed, shard)``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, shard])))


def uniform_digits(rng: np.random.Generator, p: int, size) -> np.ndarray:
    """Exactly uniform digits in ``{0..p-1}``.

    Raw 64-bit draws at or above ``floor(2^64 / p) * p`` are rejected and
    redrawn; accepted draws are reduced mod ``p``.
    """
    limit = np.uint64((2**64 // p) * p) if (2**64 // p) * p < 2**64 else None
    n = int(np.prod(size))
    raw = rng.bit_generator.random_raw(n)
    if limit is not None:
        bad = raw >= limit
        while bad.any():
            raw[bad] = rng.bit_generator.random_raw(int(bad.sum()))
            bad = raw >= limit
    return (raw % np.uint64(p)).astype(np.int64).reshape(size)


def _integer_coords(digits: np.ndarray, p: int) -> List[List[int]]:
    """Collapse digit arrays ``(n, d, N)`` into integers ``sum u_k p^k``."""
    n, d, N = digits.shape
    if p**N < 2**62:
        powers = np.array([p**k for k in range(N)], dtype=np.int64)
        return (digits @ powers).tolist()
    out = []
    for sample in digits.tolist():
        row = []
        for ds in sample:
            z = 0
            for u in reversed(ds):
                z = z * p + u
            row.append(z)
        out.append(row)
    return out


def _require_sampleable(G: GaussianDist, precision: int):
    if not G.lattice.is_full_rank:
        raise NotFullRank(f"lattice {G.lattice} is not full rank")
    if precision < 1:
        raise ValueError("precision must be >= 1")


def _shards(n: int):
    for s in range(math.ceil(n / SHARD_SIZE)):
        yield s, min(SHARD_SIZE, n - s * SHARD_SIZE)


class _IntegerForm:
    """``A`` rewritten as ``M / den`` with integer ``M``, for fast valuations."""

    def __init__(self, L: Lattice):
        self.p = L.p
        self.den = math.lcm(*(x.denominator for row in L.matrix for x in row))
        self.rows = [[int(x * self.den) for x in row] for row in L.matrix]
        self.den_val = int_valuation(self.den, self.p)
        self.minval = min(_val(x, L.p) for row in L.matrix for x in row if x)

    def apply(self, z: Sequence[int]) -> List[int]:
        return [sum(a * b for a, b in zip(row, z)) for row in self.rows]

    def valuation(self, num: int):
        return int_valuation(num, self.p) - self.den_val if num else INF


def _draw_shard(G: GaussianDist, count: int, precision: int, seed: int, shard: int):
    rng = digit_generator(seed, shard)
    digits = uniform_digits(rng, G.lattice.p, (count, G.dim, precision))
    return _integer_coords(digits, G.lattice.p)


def samples(G: GaussianDist, n: int, precision: int, seed: int, threads: int = 1) -> List[SampleResult]:
    """``n`` draws ``X = A Z`` with ``Z`` truncated to ``precision`` uniform digits.

    Draw ``k`` comes from shard ``k // SHARD_SIZE``, seeded by ``(seed, shard)``,
    so output does not depend on ``threads``. A coordinate whose computed
    valuation is ``>= precision + minval(A)`` is censored and reported at
    that bound.
    """
    _require_sampleable(G, precision)
    form = _IntegerForm(G.lattice)
    bound = precision + form.minval
    shards = list(_shards(n))
    if threads > 1 and len(shards) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=threads) as ex:
            zs = list(ex.map(_draw_shard, *zip(*[(G, c, precision, seed, s) for s, c in shards])))
    else:
        zs = [_draw_shard(G, c, precision, seed, s) for s, c in shards]
    out = []
    for z in itertools.chain.from_iterable(zs):
        num = form.apply(z)
        point = tuple(Fraction(x, form.den) for x in num)
        vals, cens = [], []
        for x in num:
            v = form.valuation(x)
            if v >= bound:
                vals.append(bound)
                cens.append(True)
            else:
                vals.append(v)
                cens.append(False)
        out.append(SampleResult(point, tuple(vals), tuple(cens), precision, seed))
    return out


def sample(G: GaussianDist, precision: int, seed: int) -> SampleResult:
    """A single draw; identical to ``samples(G, 1, precision, seed)[0]``."""
    return samples(G, 1, precision, seed)[0]


# ---------------------------------------------------------------------------
# Likelihood and estimation


def _vectors(data, d=None) -> List[List[Fraction]]:
    vecs = [[Fraction(x) for x in v] for v in data]
    dims = {len(v) for v in vecs}
    if len(dims) > 1 or (d is not None and dims and dims != {d}):
        raise DimensionMismatch("data vectors have inconsistent dimensions")
    return vecs


def log_likelihood(G: GaussianDist, data: Iterable[Sequence]):
    """``log_q`` of the likelihood: ``N * measure_log(L)``, or ``-inf`` if a point is outside ``L``."""
    L = G.lattice
    vecs = _vectors(data, L.dim)
    if not all(contains(L, x) for x in vecs):
        return -INF
    return len(vecs) * measure_log(L)


def mle(data: Iterable[Sequence], field: FieldLike) -> Lattice:
    """The ``O_K``-span of the data points: the likelihood maximizer.

    For data of deficient rank this is the inclusion-minimal maximizer
    within the data's ``K``-span.
    """
    vecs = _vectors(data)
    if not vecs or all(not any(v) for v in vecs):
        raise EmptyData("need at least one nonzero data point")
    return lattice_from_columns(vecs, len(vecs[0]), field)


# ---------------------------------------------------------------------------
# Conditional independence


@dataclass(frozen=True)
class MatroidRep:
    """Row matroid of ``matrix`` over F_p; row ``k`` is labelled ``ground[k]`` (1-based).

    ``given`` is the conditioning set and ``order`` the coordinate order used
    for the Hermite form (given first, then the rest, each ascending).
    """

    p: int
    ground: Tuple[int, ...]
    matrix: Tuple[Tuple[int, ...], ...]
    given: Tuple[int, ...] = ()
    order: Tuple[int, ...] = ()

    def rows_for(self, subset: Iterable[int]) -> List[Tuple[int, ...]]:
        index = {g: k for k, g in enumerate(self.ground)}
        try:
            return [self.matrix[index[j]] for j in subset]
        except KeyError as e:
            raise BadSubset(f"{e.args[0]} is not in the ground set {list(self.ground)}") from None


def _subset(items, d: int, name: str) -> Tuple[int, ...]:
    s = tuple(sorted(set(int(i) for i in items)))
    if any(i < 1 or i > d for i in s):
        raise BadSubset(f"{name} = {list(s)} is not a subset of 1..{d}")
    return s


def ci_matroid(G: GaussianDist, given: Iterable[int]) -> MatroidRep:
    """Matroid of conditional independence given ``X_I`` (indices 1-based).

    Coordinates are reordered so ``I`` comes first, the Hermite form is
    recomputed, and the rows of its lower-right block are normalized and
    reduced mod ``p``.
    """
    L = G.lattice
    if not L.is_full_rank:
        raise NotFullRank(f"lattice {L} is not full rank")
    d = L.dim
    I = _subset(given, d, "I")
    if len(I) == d:
        raise BadSubset("conditioning set must be a proper subset")
    rest = tuple(j for j in range(1, d + 1) if j not in I)
    order = I + rest
    permuted = hnf([L.matrix[j - 1] for j in order], L.p)
    ell = len(I)
    block = [row[ell:] for row in permuted.matrix[ell:]]
    C = tuple(tuple(_residue(x, L.p) for x in normalize(row, L.p)) for row in block)
    return MatroidRep(L.p, rest, C, I, order)


def matroid_rank(M: MatroidRep, subset: Iterable[int]) -> int:
    return linalg.rank_mod_p(M.rows_for(subset), M.p)


def is_independent(M: MatroidRep, subset: Iterable[int]) -> bool:
    s = list(subset)
    return matroid_rank(M, s) == len(s)


def is_ci(G: GaussianDist, given: Iterable[int], targets: Iterable[int]) -> bool:
    """Whether ``X_J`` are mutually independent given ``X_I``."""
    I = _subset(given, G.dim, "I")
    J = _subset(targets, G.dim, "J")
    if not J:
        raise BadSubset("J must be nonempty")
    if set(I) & set(J):
        raise BadSubset(f"I = {list(I)} and J = {list(J)} overlap")
    return is_independent(ci_matroid(G, I), J)


def matroid_bases(M: MatroidRep) -> List[Tuple[int, ...]]:
    """All bases (maximal independent subsets), lexicographically ordered."""
    if len(M.ground) > MAX_GROUND:
        raise TooLarge(f"ground set of size {len(M.ground)} exceeds {MAX_GROUND}")
    r = linalg.rank_mod_p(M.matrix, M.p)
    return [S for S in itertools.combinations(M.ground, r) if is_independent(M, S)]


def ci_statements(M: MatroidRep) -> List[str]:
    """One statement per basis, e.g. ``X2 _||_ X4 | X1``."""
    cond = ",".join(f"X{i}" for i in M.given)
    out = []
    for B in matroid_bases(M):
        body = " _||_ ".join(f"X{j}" for j in B)
        out.append(f"{body} | {cond}" if cond else body)
    return out
