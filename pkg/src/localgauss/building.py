"""Vertices and edges of the Bruhat-Tits building of SL_d(Q_p).

A vertex is a homothety class of full-rank lattices. Its canonical
representative is the unique ``p^k L`` with ``measure_log`` in ``0..d-1``.
Only the 1-skeleton is modelled.
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Tuple

from . import linalg
from .errors import DimensionMismatch, NotFullRank, TooLarge
from .lattice_algebra import Lattice, format_matrix, hnf, measure_log, scale
from .valued_field import _val

MAX_BALL_VERTICES = 100_000


@dataclass(frozen=True)
class LatticeClass:
    rep: Lattice

    @property
    def dim(self) -> int:
        return self.rep.dim

    @property
    def key(self) -> str:
        return format_matrix(self.rep.matrix)

    def __str__(self):
        return self.key


def canonicalize(L: Lattice) -> LatticeClass:
    if not L.is_full_rank:
        raise NotFullRank(f"lattice {L} is not full rank")
    k = -(measure_log(L) // L.dim)
    return LatticeClass(scale(L, k) if k else L)


def _same_space(a: Lattice, b: Lattice):
    if a.dim != b.dim or a.p != b.p:
        raise DimensionMismatch(f"lattices in K^{a.dim} over Q_{a.p} and K^{b.dim} over Q_{b.p}")


def is_equivalent(L1: Lattice, L2: Lattice) -> bool:
    _same_space(L1, L2)
    return canonicalize(L1) == canonicalize(L2)


def _minval(m, p):
    return min(_val(x, p) for row in m for x in row if x)


def is_adjacent(c1: LatticeClass, c2: LatticeClass) -> bool:
    """Distinct classes with ``c A^{-1} B`` in ``O_K^{dxd}`` and ``p (c A^{-1} B)^{-1}`` integral for some ``c``.

    Only ``k = val(c)`` matters, so this is the test
    ``-minval(M) <= k <= 1 + minval(M^{-1})`` for some integer ``k``.
    """
    _same_space(c1.rep, c2.rep)
    if c1 == c2:
        return False
    p = c1.rep.p
    M = linalg.matmul(linalg.inverse(c1.rep.matrix), c2.rep.matrix)
    return -_minval(M, p) <= 1 + _minval(linalg.inverse(M), p)


def standard_neighbor_matrices(d: int, p: int) -> List[linalg.Matrix]:
    """Hermite forms of the lattices strictly between ``p O^d`` and ``O^d``.

    Diagonal ``p^e_i`` with ``e`` in ``{0,1}^d`` nonconstant; entry ``(i, j)``
    below the diagonal runs over ``0..p-1`` when ``e_i = 1, e_j = 0`` and is 0
    otherwise.
    """
    out = []
    for eps in itertools.product((0, 1), repeat=d):
        if len(set(eps)) == 1:
            continue
        free = [(i, j) for i in range(d) for j in range(i) if eps[i] == 1 and eps[j] == 0]
        for vals in itertools.product(range(p), repeat=len(free)):
            m = [[Fraction(p if (i == j and eps[i]) else int(i == j)) for j in range(d)] for i in range(d)]
            for (i, j), t in zip(free, vals):
                m[i][j] = Fraction(t)
            out.append(linalg.to_matrix(m))
    return out


def neighbors(c: LatticeClass) -> List[LatticeClass]:
    """All classes adjacent to ``c``, sorted by their canonical key."""
    A = c.rep.matrix
    found: Dict[str, LatticeClass] = {}
    for N in standard_neighbor_matrices(c.dim, c.rep.p):
        nb = canonicalize(hnf(linalg.matmul(A, N), c.rep.p))
        found.setdefault(nb.key, nb)
    return [found[k] for k in sorted(found)]


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of ``k``-dimensional subspaces of ``F_q^n``."""
    num, den = 1, 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def degree(d: int, p: int) -> int:
    """Vertex degree: nontrivial proper subspaces of ``F_p^d``."""
    return sum(gaussian_binomial(d, l, p) for l in range(1, d))


@dataclass
class BallGraph:
    center: LatticeClass
    radius: int
    vertices: List[LatticeClass]
    edges: List[Tuple[int, int]]
    distances: List[int]

    def to_json(self) -> dict:
        return {
            "p": self.center.rep.p,
            "center": self.center.key,
            "radius": self.radius,
            "vertices": [v.key for v in self.vertices],
            "distances": self.distances,
            "edges": [list(e) for e in self.edges],
        }

    def to_dot(self) -> str:
        lines = ["graph ball {"]
        for i, v in enumerate(self.vertices):
            label = "\\n".join(format_matrix([row])[1:-1] for row in v.rep.matrix)
            lines.append(f'  v{i} [label="{label}"];')
        for i, j in self.edges:
            lines.append(f"  v{i} -- v{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def ball(c: LatticeClass, radius: int, max_vertices: int = MAX_BALL_VERTICES) -> BallGraph:
    """Breadth-first closure of :func:`neighbors` up to ``radius`` steps.

    Edges are every adjacent pair among the discovered vertices, including
    pairs on the outer shell.
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    index = {c.key: 0}
    verts = [c]
    dist = [0]
    nbrs: Dict[int, List[LatticeClass]] = {}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        nbrs[i] = neighbors(verts[i])
        if dist[i] == radius:
            continue
        for nb in nbrs[i]:
            if nb.key not in index:
                if len(verts) >= max_vertices:
                    raise TooLarge(f"ball exceeds {max_vertices} vertices")
                index[nb.key] = len(verts)
                verts.append(nb)
                dist.append(dist[i] + 1)
                queue.append(index[nb.key])
    edges = set()
    for i, nb_list in nbrs.items():
        for nb in nb_list:
            j = index.get(nb.key)
            if j is not None:
                edges.add((min(i, j), max(i, j)))
    return BallGraph(c, radius, verts, sorted(edges), dist)
