"""Evaluate the bracketed recursion expressions at integer s.

Two forms are supported, both truncated at ``2*p_n - 1``::

    E4  = sum_{j<=2p_n-1} j^-s  -  prod_k (1 - p_k^-s)^-1
    E1T = prod_k (1 - p_k^-s) * sum_{j<=2p_n-1} j^-s  -  1

They satisfy ``E1T == E4 * prod_k (1 - p_k^-s)`` exactly. The exact backend
returns a Fraction; the dyadic backend returns an outward-rounded enclosure.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from math import lcm

from .arith import DyadicInterval, Rat, dy_recip_pow
from .errors import DomainError
from .primes import PrimeSeq, first_primes, is_smooth


class BracketForm(enum.Enum):
    E4 = "e4"
    E1T = "e1t"

    @classmethod
    def parse(cls, text: str) -> BracketForm:
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise DomainError(f"unknown form {text!r}") from None


def _check_s(s: int, lowest: int) -> None:
    if s < lowest:
        raise DomainError(f"s must be >= {lowest}, got {s}")


def power_sum_pair(lo: int, hi: int, s: int) -> tuple[int, int]:
    """Unreduced ``(num, den)`` with num/den == sum_{j=lo}^{hi} j^-s."""
    if hi < lo:
        return 0, 1
    base = lcm(*range(lo, hi + 1))
    num = sum((base // j) ** s for j in range(lo, hi + 1))
    return num, base**s


def zeta_partial_exact(m_top: int, s: int) -> Rat:
    """Exact ``sum_{j=1}^{m_top} j^-s``."""
    if m_top < 1:
        raise DomainError("m_top must be >= 1")
    _check_s(s, 1)
    # one reduction over a common denominator; same value as term-by-term Fraction sums
    return Fraction(*power_sum_pair(1, m_top, s))


def euler_factor_prod_exact(ps: PrimeSeq, s: int, inverted: bool) -> Rat:
    """Exact ``prod_k (1 - p_k^-s)``, or its reciprocal when ``inverted``."""
    _check_s(s, 1)
    top = 1  # prod p^s
    bottom = 1  # prod (p^s - 1)
    for p in ps:
        pk = p**s
        top *= pk
        bottom *= pk - 1
    return Fraction(top, bottom) if inverted else Fraction(bottom, top)


def eval_bracket_exact(ps: PrimeSeq, s: int, form: BracketForm = BracketForm.E4) -> Rat:
    """Exact bracket value. May be zero or negative for small s."""
    _check_s(s, 2)
    zeta = zeta_partial_exact(2 * ps.last - 1, s)
    if form is BracketForm.E4:
        return zeta - euler_factor_prod_exact(ps, s, inverted=True)
    if form is BracketForm.E1T:
        return euler_factor_prod_exact(ps, s, inverted=False) * zeta - 1
    raise DomainError(f"unknown form {form!r}")


def dyadic_prec_floor(ps: PrimeSeq, s: int, guard: int = 32) -> int:
    """``s * ceil(log2(2 p_n)) + guard``: resolves the smallest term (2 p_n)^-s."""
    return s * (2 * ps.last - 1).bit_length() + guard


def dyadic_zeta_partial(m_top: int, s: int, prec: int) -> DyadicInterval:
    acc = DyadicInterval(0, 0, prec)
    for j in range(1, m_top + 1):
        acc = acc + dy_recip_pow(j, s, prec)
    return acc


def dyadic_euler_factor_prod(ps: PrimeSeq, s: int, inverted: bool, prec: int) -> DyadicInterval:
    one = 1 << prec
    acc = DyadicInterval(one, one, prec)
    for p in ps:
        pp = p**s
        factor = (DyadicInterval.ratio(pp, pp - 1, prec) if inverted
                  else DyadicInterval.ratio(pp - 1, pp, prec))
        acc = acc * factor
    return acc


def eval_bracket_dyadic(ps: PrimeSeq, s: int, form: BracketForm, prec: int) -> DyadicInterval:
    """Interval at ``prec`` containing :func:`eval_bracket_exact`."""
    _check_s(s, 2)
    if prec < 1:
        raise DomainError("prec must be positive")
    zeta = dyadic_zeta_partial(2 * ps.last - 1, s, prec)
    if form is BracketForm.E4:
        return zeta - dyadic_euler_factor_prod(ps, s, True, prec)
    if form is BracketForm.E1T:
        one = DyadicInterval(1 << prec, 1 << prec, prec)
        return dyadic_euler_factor_prod(ps, s, False, prec) * zeta - one
    raise DomainError(f"unknown form {form!r}")


def dyadic_step_count(ps: PrimeSeq, form: BracketForm) -> int:
    """Arithmetic steps in :func:`eval_bracket_dyadic` (for its width bound)."""
    terms = 2 * ps.last - 1
    if form is BracketForm.E4:
        return terms + 2 * ps.n + 1
    return terms + 2 * ps.n + 2


def euler_truncation_identity(ps_n: PrimeSeq, big_n: int, s: int) -> bool:
    """Finite Euler-product telescoping, checked as an exact Fraction identity.

    prod_{k<=n} (1-p_k^-s) * prod_{j<=N} (1-p_j^-s)^-1 == prod_{n<j<=N} (1-p_j^-s)^-1
    """
    _check_s(s, 2)
    if big_n < ps_n.n:
        raise DomainError("big_n must be >= n")
    big = PrimeSeq(first_primes(big_n))
    if big.values[: ps_n.n] != ps_n.values:
        raise DomainError("ps_n must be a prefix of the first big_n primes")
    lhs = (euler_factor_prod_exact(ps_n, s, inverted=False)
           * euler_factor_prod_exact(big, s, inverted=True))
    rhs = Fraction(1)
    for p in big.values[ps_n.n :]:
        rhs *= 1 / (1 - Fraction(1, p**s))
    return lhs == rhs


def smooth_decomposition_residual(ps: PrimeSeq, s: int, cutoff: int) -> Rat:
    """E4 minus its non-smooth head plus the smooth tail up to ``cutoff``.

    E4 equals the non-smooth terms below 2 p_n minus every smooth term from
    2 p_n on; what is left is minus the smooth tail beyond ``cutoff``.
    """
    _check_s(s, 2)
    top = 2 * ps.last - 1
    if cutoff < top + 1:
        raise DomainError("cutoff must be >= 2 p_n")
    r = eval_bracket_exact(ps, s, BracketForm.E4)
    for j in range(2, top + 1):
        if not is_smooth(j, ps):
            r -= Fraction(1, j**s)
    for j in range(top + 1, cutoff + 1):
        if is_smooth(j, ps):
            r += Fraction(1, j**s)
    return r
