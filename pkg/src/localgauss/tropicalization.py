"""Tropicalized Gaussians: the tail exponent ``phi_L(v) = -log_q P(val X >= v)``.

``phi_L`` is computed exactly from lattice volumes. In dimension two it is a
tropical polynomial on the unit square read off the Hermite form; in higher
dimension :func:`fit_tropical` fits the cube coefficients and
:func:`verify_conjecture` checks the fit on an integer box.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterator, List, Sequence, Tuple

from .errors import DimensionMismatch, NonStabilizing, NotFullRank, PrecisionTooLow, WrongDimension
from .gaussian_stats import GaussianDist, _IntegerForm, _draw_shard, _require_sampleable, _shards
from .lattice_algebra import Lattice, diagonal_lattice, dual, format_matrix, log_volume, measure_log
from .valued_field import _val

Subset = Tuple[int, ...]

MAX_DOUBLINGS = 10
SUBSAMPLE_POINTS = 10_000
SUBSAMPLE_SEED = 0x5EED_C0DE


def subsets(d: int) -> Iterator[Subset]:
    """Subsets of ``1..d`` ordered by size, then lexicographically."""
    for k in range(d + 1):
        yield from itertools.combinations(range(1, d + 1), k)


@dataclass(frozen=True)
class TropPoly:
    """``P(v) = max_I (sum_{i in I} v_i - c_I)`` over subsets ``I`` of ``1..d``."""

    dim: int
    coefficients: Dict[Subset, int]

    def __post_init__(self):
        if set(self.coefficients) != set(subsets(self.dim)):
            raise ValueError("need one coefficient for every subset of 1..d")
        if self.coefficients[()] != 0:
            raise ValueError("the empty-set coefficient must be 0")

    def coefficient_list(self) -> List[int]:
        return [self.coefficients[I] for I in subsets(self.dim)]

    def __call__(self, v: Sequence[int]) -> int:
        return eval_trop(self, v)

    def __str__(self):
        terms = []
        for I in subsets(self.dim):
            c = self.coefficients[I]
            if not I:
                terms.append(str(-c))
                continue
            t = " + ".join(f"v{i}" for i in I)
            if c > 0:
                t += f" - {c}"
            elif c < 0:
                t += f" + {-c}"
            terms.append(t)
        return "max(" + ", ".join(terms) + ")"

    def subdivision_data(self) -> List[Tuple[Tuple[int, ...], int]]:
        """Cube vertices (0/1 exponent vectors) with their lifting heights ``c_I``."""
        return [
            (tuple(1 if i in I else 0 for i in range(1, self.dim + 1)), self.coefficients[I])
            for I in subsets(self.dim)
        ]


def trop_poly(coefficients: Sequence[int], d: int) -> TropPoly:
    """Build from a coefficient list in :func:`subsets` order."""
    coefficients = list(coefficients)
    if len(coefficients) != 2**d:
        raise DimensionMismatch(f"expected {2**d} coefficients")
    return TropPoly(d, dict(zip(subsets(d), coefficients)))


def eval_trop(P: TropPoly, v: Sequence[int]) -> int:
    if len(v) != P.dim:
        raise DimensionMismatch(f"point of length {len(v)} for a polynomial in {P.dim} variables")
    return max(sum(v[i - 1] for i in I) - c for I, c in P.coefficients.items())


def is_supermodular(P: TropPoly) -> bool:
    """``c_empty = 0`` and ``c_{I|J} + c_{I&J} >= c_I + c_J``.

    All pairs are checked up to ``d = 10``; beyond that the equivalent local
    condition on pairs differing in two elements is used.
    """
    c = {frozenset(I): x for I, x in P.coefficients.items()}
    if c[frozenset()] != 0:
        return False
    keys = list(c)
    if P.dim <= 10:
        return all(c[I | J] + c[I & J] >= c[I] + c[J] for I in keys for J in keys)
    ground = range(1, P.dim + 1)
    for S in keys:
        for i, j in itertools.combinations([g for g in ground if g not in S], 2):
            if c[S | {i, j}] + c[S] < c[S | {i}] + c[S | {j}]:
                return False
    return True


# ---------------------------------------------------------------------------
# Exact tail exponent


@lru_cache(maxsize=4096)
def _dual_data(L: Lattice):
    D = dual(L)
    return D.columns, measure_log(L)


def phi_exact(L: Lattice, v: Sequence[int]) -> int:
    """``measure_log(L & p^v O^d) - measure_log(L)``, the exact ``-log_q P(V >= v)``.

    Uses ``dual(L & M) = dual(L) + dual(M)`` so only one triangularization
    is needed per point.
    """
    if not L.is_full_rank:
        raise NotFullRank(f"lattice {L} is not full rank")
    if len(v) != L.dim:
        raise DimensionMismatch(f"point of length {len(v)} for a lattice in K^{L.dim}")
    cols, ml = _dual_data(L)
    d = L.dim
    pp = Fraction(L.p)
    extra = [[pp ** -vi if i == k else Fraction(0) for i in range(d)] for k, vi in enumerate(v)]
    return -log_volume(list(cols) + extra, d, L.p) - ml


def trop2d(L: Lattice) -> TropPoly:
    """Closed form in dimension two.

    For the Hermite form ``[[p^a, 0], [p^c x, p^b]]`` with ``val(x) = 0`` the
    coefficients are ``c_1 = a``, ``c_2 = c``, ``c_12 = a + b``; a zero
    off-diagonal entry counts as ``c = b``.
    """
    if L.dim != 2:
        raise WrongDimension(f"trop2d needs d = 2, got d = {L.dim}")
    if not L.is_full_rank:
        raise NotFullRank(f"lattice {L} is not full rank")
    a, b = L.diag_exponents
    off = L.matrix[1][0]
    c = _val(off, L.p) if off else b
    return TropPoly(2, {(): 0, (1,): a, (2,): c, (1, 2): a + b})


def _corner(I: Subset, d: int, M: int) -> List[int]:
    return [M if i in I else -M for i in range(1, d + 1)]


def fit_tropical(L: Lattice) -> TropPoly:
    """Fit ``c_I = |I| M - phi(v(M))`` at the corners ``v_i = +-M``.

    ``M`` doubles from ``1 + max|n_i| + |measure_log(L)|`` until every
    coefficient agrees at two consecutive values.
    """
    if not L.is_full_rank:
        raise NotFullRank(f"lattice {L} is not full rank")
    d = L.dim
    M = 1 + max(abs(n) for n in L.diag_exponents) + abs(measure_log(L))
    prev = None
    for _ in range(MAX_DOUBLINGS + 1):
        cur = {I: len(I) * M - phi_exact(L, _corner(I, d, M)) for I in subsets(d)}
        if cur == prev:
            return TropPoly(d, cur)
        prev = cur
        M *= 2
    raise NonStabilizing(f"corner fit for {L} did not stabilize after {MAX_DOUBLINGS} doublings")


@dataclass
class ConjectureReport:
    lattice: Lattice
    fitted: TropPoly
    box_radius: int
    points_checked: int
    mismatches: List[Tuple[Tuple[int, ...], int, int]] = field(default_factory=list)
    supermodular: bool = True

    @property
    def holds(self) -> bool:
        return not self.mismatches and self.supermodular

    def to_json(self) -> dict:
        return {
            "p": self.lattice.p,
            "lattice": [[str(x) for x in row] for row in self.lattice.matrix],
            "coefficients": {
                ",".join(map(str, I)) or "{}": c for I, c in self.fitted.coefficients.items()
            },
            "coefficient_list": self.fitted.coefficient_list(),
            "polynomial": str(self.fitted),
            "subdivision": [
                {"vertex": list(vx), "height": h} for vx, h in self.fitted.subdivision_data()
            ],
            "box_radius": self.box_radius,
            "points_checked": self.points_checked,
            "mismatches": [
                {"v": list(v), "phi": phi, "P": pv} for v, phi, pv in self.mismatches
            ],
            "supermodular": self.supermodular,
            "holds": self.holds,
        }


def box_points(d: int, radius: int) -> List[Tuple[int, ...]]:
    """Points of ``[-radius, radius]^d`` to check.

    Exhaustive for ``d <= 3``. Otherwise the lexicographic enumeration is cut
    into ``SUBSAMPLE_POINTS`` strides of equal length and one point is taken
    from each stride at an offset drawn from ``random.Random(SUBSAMPLE_SEED)``.
    """
    side = 2 * radius + 1
    total = side**d
    if d <= 3 or total <= SUBSAMPLE_POINTS:
        return list(itertools.product(range(-radius, radius + 1), repeat=d))
    stride = total // SUBSAMPLE_POINTS
    rng = random.Random(SUBSAMPLE_SEED)
    pts = []
    for start in range(0, total - stride + 1, stride):
        k = start + rng.randrange(stride)
        coords = []
        for _ in range(d):
            k, r = divmod(k, side)
            coords.append(r - radius)
        pts.append(tuple(reversed(coords)))
    return pts


def _check_points(L: Lattice, P: TropPoly, pts):
    out = []
    for v in pts:
        phi = phi_exact(L, v)
        pv = eval_trop(P, v)
        if phi != pv:
            out.append((tuple(v), phi, pv))
    return out


def verify_conjecture(L: Lattice, box_radius: int, threads: int = 1) -> ConjectureReport:
    """Compare ``phi_exact`` with the fitted polynomial on the integer box."""
    P = fit_tropical(L)
    pts = box_points(L.dim, box_radius)
    if threads > 1:
        from concurrent.futures import ProcessPoolExecutor

        n = math.ceil(len(pts) / threads)
        chunks = [pts[i : i + n] for i in range(0, len(pts), n)]
        with ProcessPoolExecutor(max_workers=threads) as ex:
            parts = ex.map(_check_points, [L] * len(chunks), [P] * len(chunks), chunks)
            mismatches = [m for part in parts for m in part]
    else:
        mismatches = _check_points(L, P, pts)
    return ConjectureReport(L, P, box_radius, len(pts), mismatches, is_supermodular(P))


# ---------------------------------------------------------------------------
# Monte Carlo


def mc_tail(G: GaussianDist, v: Sequence[int], n: int, seed: int, precision: int | None = None):
    """Empirical ``P(val X >= v)`` and its binomial standard error.

    The default precision keeps the censoring bound at least 8 above
    ``max(v)``. A censored coordinate counts as satisfying ``V_i >= v_i``
    because its bound already exceeds ``v_i``.
    """
    L = G.lattice
    if len(v) != L.dim:
        raise DimensionMismatch(f"point of length {len(v)} for a lattice in K^{L.dim}")
    form = _IntegerForm(L)
    top = max(v)
    if precision is None:
        precision = max(top + 8, top + 8 - form.minval, 1)
    _require_sampleable(G, precision)
    bound = precision + form.minval
    if precision < top + 8 or bound < top:
        raise PrecisionTooLow(
            f"precision {precision} cannot resolve valuations up to {top} for {format_matrix(L.matrix)}"
        )
    hits = 0
    for s, count in _shards(n):
        for z in _draw_shard(G, count, precision, seed, s):
            for x, vi in zip(form.apply(z), v):
                if form.valuation(x) < vi:
                    break
            else:
                hits += 1
    est = hits / n
    se = math.sqrt(est * (1 - est) / n)
    return est, se
