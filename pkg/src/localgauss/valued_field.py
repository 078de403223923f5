"""Exact arithmetic in the rationals viewed as a dense subfield of Q_p.

Scalars are plain :class:`fractions.Fraction` values. Everything p-adic about
them (valuation, residue, digit expansion, norms) is computed here against a
:class:`FieldConfig`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Tuple, Union

from .errors import NegativeValuation, NotPrime, ZeroInput

INF = math.inf

Scalar = Fraction
ScalarLike = Union[int, Fraction, str]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldConfig:
    """The local field Q_p: uniformizer ``p``, residue field F_p, module ``q = p``."""

    p: int
    q: int = field(init=False)

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise NotPrime(f"p = {self.p!r} is not prime")
        object.__setattr__(self, "q", self.p)

    @property
    def uniformizer(self) -> Fraction:
        return Fraction(self.p)


def as_scalar(x: ScalarLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def int_valuation(n: int, p: int) -> int:
    """Exponent of ``p`` in the nonzero integer ``n``."""
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _val(x: Fraction, p: int):
    if not x:
        return INF
    num, den = x.numerator, x.denominator
    if num % p == 0:
        return int_valuation(num, p)
    if den % p == 0:
        return -int_valuation(den, p)
    return 0


def valuation(x: ScalarLike, cfg: FieldConfig):
    """The p-adic valuation of ``x``; ``math.inf`` for zero."""
    return _val(as_scalar(x), cfg.p)


def abs_val(x: ScalarLike, cfg: FieldConfig) -> Fraction:
    """``q ** -val(x)`` as an exact rational, 0 for ``x == 0``."""
    v = valuation(x, cfg)
    if v == INF:
        return Fraction(0)
    return Fraction(cfg.q) ** -v


def min_valuation(xs: Iterable[ScalarLike], cfg: FieldConfig):
    return min((valuation(x, cfg) for x in xs), default=INF)


def vec_norm(xs: Sequence[ScalarLike], cfg: FieldConfig) -> Fraction:
    """Sup norm ``max |x_i|``, i.e. ``q ** -min val(x_i)``."""
    v = min_valuation(xs, cfg)
    if v == INF:
        return Fraction(0)
    return Fraction(cfg.q) ** -v


def _residue(x: Fraction, p: int) -> int:
    return x.numerator * pow(x.denominator, -1, p) % p


def residue(x: ScalarLike, cfg: FieldConfig) -> int:
    """Image of ``x`` in the residue field F_p."""
    x = as_scalar(x)
    if _val(x, cfg.p) < 0:
        raise NegativeValuation(f"{x} has negative valuation, no residue mod {cfg.p}")
    return _residue(x, cfg.p)


@dataclass(frozen=True)
class DigitExpansion:
    """Prefix ``u_start, u_{start+1}, ...`` of the expansion ``x = sum u_i p^i``."""

    p: int
    start: int
    digits: Tuple[int, ...]

    def value(self) -> Fraction:
        """The partial sum represented by the digits."""
        return sum(
            (Fraction(self.p) ** (self.start + i) * u for i, u in enumerate(self.digits)),
            Fraction(0),
        )


def digits(x: ScalarLike, cfg: FieldConfig, count: int) -> DigitExpansion:
    """First ``count`` digits of ``x`` by repeated residue-and-subtract."""
    x = as_scalar(x)
    if not x:
        raise ZeroInput("zero has no digit expansion")
    if count < 1:
        raise ValueError("count must be positive")
    p = cfg.p
    n = _val(x, p)
    pp = Fraction(p)
    rest = x / pp**n
    out = []
    for _ in range(count):
        u = _residue(rest, p)
        out.append(u)
        rest = (rest - u) / pp
    return DigitExpansion(p, n, tuple(out))


def truncate(x: Fraction, p: int, degree: int) -> Fraction:
    """The Laurent polynomial ``sum_{i < degree} u_i p^i`` from the digits of ``x``.

    Equivalently the unique digit-reduced representative of ``x`` modulo
    ``p^degree O_K``. Computed in closed form with a modular inverse.
    """
    v = _val(x, p)
    if v >= degree:
        return Fraction(0)
    unit = x / Fraction(p) ** v
    m = p ** (degree - v)
    r = unit.numerator * pow(unit.denominator, -1, m) % m
    return Fraction(r) * Fraction(p) ** v


def unit_part(x: Fraction, p: int) -> Fraction:
    """``x / p^val(x)`` for nonzero ``x``."""
    return x / Fraction(p) ** _val(x, p)
