"""Exact rational arithmetic and outward-rounded dyadic intervals.

Every numeric decision in the package reduces to one of two things:

* exact comparisons between :class:`fractions.Fraction` values (``Rat``), or
* comparisons between dyadic intervals ``[lo * 2**-prec, hi * 2**-prec]``
  whose endpoints were rounded outward, so the exact value never escapes.

No floating point participates in any decision. :func:`approx_log2` exists
only for human-readable reports.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, Indecisive

Rat = Fraction


class Ordering(enum.Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def rat_pow(q: Rat, e: int) -> Rat:
    """Exact ``q**e`` in lowest terms."""
    q = Fraction(q)
    if q == 0 and e <= 0:
        raise DomainError("zero base needs a positive exponent")
    return q**e


def compare_to_recip_power(b: Rat, m: int, s: int) -> Ordering:
    """Order ``b`` against ``m**-s`` by comparing ``b.num * m**s`` with ``b.den``."""
    if b <= 0:
        raise DomainError(f"b must be positive, got {b}")
    if m < 1 or s < 1:
        raise DomainError("m and s must be positive")
    b = Fraction(b)
    lhs = b.numerator * m**s
    rhs = b.denominator
    if lhs < rhs:
        return Ordering.LESS
    if lhs > rhs:
        return Ordering.GREATER
    return Ordering.EQUAL


def _floor_div(a: int, b: int) -> int:
    return a // b


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


@dataclass(frozen=True)
class DyadicInterval:
    """The closed interval ``[lo * 2**-prec, hi * 2**-prec]``."""

    lo: int
    hi: int
    prec: int

    def __post_init__(self):
        if self.prec < 1:
            raise DomainError("prec must be positive")
        if self.lo > self.hi:
            raise DomainError(f"empty interval: lo={self.lo} > hi={self.hi}")

    @classmethod
    def enclose(cls, q: Rat, prec: int) -> DyadicInterval:
        """Tightest interval at ``prec`` containing the rational ``q``."""
        q = Fraction(q)
        scaled = q.numerator << prec
        return cls(_floor_div(scaled, q.denominator),
                   _ceil_div(scaled, q.denominator), prec)

    @classmethod
    def ratio(cls, num: int, den: int, prec: int) -> DyadicInterval:
        """Enclosure of ``num/den`` without building a Fraction (no gcd)."""
        if den <= 0:
            raise DomainError("denominator must be positive")
        scaled = num << prec
        return cls(_floor_div(scaled, den), _ceil_div(scaled, den), prec)

    def lower(self) -> Rat:
        return Fraction(self.lo, 1 << self.prec)

    def upper(self) -> Rat:
        return Fraction(self.hi, 1 << self.prec)

    def width(self) -> Rat:
        return Fraction(self.hi - self.lo, 1 << self.prec)

    def contains(self, q: Rat) -> bool:
        q = Fraction(q)
        # lo/2^p <= n/d <= hi/2^p, cross-multiplied
        n, d = q.numerator, q.denominator
        return self.lo * d <= (n << self.prec) <= self.hi * d

    def mantissa_bits(self) -> int:
        return max(abs(self.lo).bit_length(), abs(self.hi).bit_length())

    def at_prec(self, prec: int) -> DyadicInterval:
        """Re-express at a higher precision (exact, pure shift)."""
        if prec < self.prec:
            raise DomainError("can only raise precision")
        k = prec - self.prec
        return DyadicInterval(self.lo << k, self.hi << k, prec)

    def gt(self, other: DyadicInterval | Rat) -> bool:
        """Certified ``x > y`` for all points; raise :class:`Indecisive` if unknown."""
        if self._cmp_lo(other, upper=True) > 0:
            return True
        if self._cmp_hi(other, upper=False) <= 0:
            return False
        raise Indecisive

    def lt(self, other: DyadicInterval | Rat) -> bool:
        if self._cmp_hi(other, upper=False) < 0:
            return True
        if self._cmp_lo(other, upper=True) >= 0:
            return False
        raise Indecisive

    def _cmp_lo(self, other, upper):
        return _cmp(self.lo, self.prec, other, upper)

    def _cmp_hi(self, other, upper):
        return _cmp(self.hi, self.prec, other, upper)

    def __add__(self, other):
        return dy_arith(self, other, "add")

    def __sub__(self, other):
        return dy_arith(self, other, "sub")

    def __mul__(self, other):
        return dy_arith(self, other, "mul")


def _cmp(mant: int, prec: int, other, upper: bool) -> int:
    """Sign of ``mant * 2**-prec - y`` where y is other's upper (or lower) end."""
    if isinstance(other, DyadicInterval):
        y = other.hi if upper else other.lo
        k = other.prec - prec
        a, b = (mant << k, y) if k >= 0 else (mant, y << -k)
    else:
        other = Fraction(other)
        a = mant * other.denominator
        b = other.numerator << prec
    return (a > b) - (a < b)


def dy_recip_pow(j: int, s: int, prec: int) -> DyadicInterval:
    """Enclosure of ``j**-s`` of width at most one unit at ``prec``."""
    if j < 1 or prec < 1:
        raise DomainError("j and prec must be positive")
    return DyadicInterval.ratio(1, j**s, prec)


def dy_arith(a: DyadicInterval, b: DyadicInterval, op: str) -> DyadicInterval:
    """Outward-rounded ``a op b`` for ``op`` in add, sub, mul."""
    if a.prec != b.prec:
        p = max(a.prec, b.prec)
        a, b = a.at_prec(p), b.at_prec(p)
    p = a.prec
    if op == "add":
        return DyadicInterval(a.lo + b.lo, a.hi + b.hi, p)
    if op == "sub":
        return DyadicInterval(a.lo - b.hi, a.hi - b.lo, p)
    if op == "mul":
        prods = (a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi)
        # products live at 2p; floor the low end and ceil the high end back to p
        return DyadicInterval(min(prods) >> p, -((-max(prods)) >> p), p)
    raise ValueError(f"unknown op {op!r}")


_LOG2_BITS = 64


def _log2_int(x: int) -> float:
    n = x.bit_length()
    if n <= _LOG2_BITS:
        return math.log2(x)
    shift = n - _LOG2_BITS
    return shift + math.log2(x >> shift)


def log2_ratio(num: int, den: int) -> float:
    """log2(num/den) for positive integers, without forming a float quotient."""
    if num <= 0 or den <= 0:
        raise DomainError("log2 needs a positive ratio")
    return _log2_int(num) - _log2_int(den)


def approx_log2(q: Rat) -> float:
    """Reporting-only log2 of a positive rational (abs. error well under 1e-9)."""
    q = Fraction(q)
    if q <= 0:
        raise DomainError(f"log2 of nonpositive value {q}")
    return log2_ratio(q.numerator, q.denominator)
