"""Finite-s certificates that a candidate m equals p_{n+1}.

Expanding the Euler factors over smooth integers splits the E4 bracket as

    E4 = sum_{non-smooth j in [p_{n+1}, 2p_n - 1]} j^-s  -  sum_{smooth j >= 2p_n} j^-s

Its largest positive term is p_{n+1}^-s. That gives two one-sided envelopes:

* if p_{n+1} >= m then E4 <= sum_{j=m}^{2p_n-1} j^-s          (``ub_sum``)
* if p_{n+1} <= m then E4 >= m^-s - tail_bound(s, 2p_n)        (``lb_val``)

so ``b > ub_sum(m+1)`` proves p_{n+1} <= m and ``b < lb_val(m-1)`` proves
p_{n+1} >= m. Both checks are exact integer comparisons, or endpoint-safe
comparisons when b is a dyadic enclosure.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction
from math import lcm
from typing import Union

from .arith import DyadicInterval, Rat, approx_log2, dy_recip_pow, log2_ratio
from .bracket import power_sum_pair
from .errors import DomainError, InternalInconsistency
from .primes import PrimeSeq, candidate_window

Bracket = Union[Fraction, DyadicInterval]
Log2Field = Union[float, str]

EMPTY_SUM = "empty-sum"
SKIPPED = "skipped"
NONPOSITIVE = "nonpositive"


@dataclass(frozen=True)
class Certificate:
    n: int
    s: int
    m: int
    b_log2: Log2Field
    ub_next_log2: Log2Field
    lb_prev_log2: Log2Field
    passed_upper: bool
    passed_lower: bool
    passed: bool

    def to_json_dict(self) -> dict:
        d = asdict(self)
        for key in ("b_log2", "ub_next_log2", "lb_prev_log2"):
            if isinstance(d[key], float):
                d[key] = round(d[key], 9)
        return d


def tail_bound(s: int, m_from: int) -> Rat:
    """Upper bound on ``sum_{j >= m_from} j^-s``: first term plus integral test."""
    if s < 2:
        raise DomainError("tail_bound needs s >= 2")
    if m_from < 2:
        raise DomainError("tail_bound needs m_from >= 2")
    return Fraction(1, m_from**s) + Fraction(m_from, (s - 1) * m_from**s)


def ub_sum(m: int, s: int, ps: PrimeSeq) -> Rat:
    """Exact ``sum_{j=m}^{2p_n-1} j^-s`` (0 for an empty range)."""
    if m < 2:
        raise DomainError("ub_sum needs m >= 2")
    return Fraction(*power_sum_pair(m, 2 * ps.last - 1, s))


def lb_val(m: int, s: int, ps: PrimeSeq) -> Rat:
    """Exact ``m^-s - tail_bound(s, 2 p_n)``; negative values are legal."""
    if m < 2 or s < 2:
        raise DomainError("lb_val needs m >= 2 and s >= 2")
    return Fraction(1, m**s) - tail_bound(s, 2 * ps.last)


class _Envelopes:
    """Thresholds for every candidate in the window, in b's own representation.

    Exact thresholds stay as unreduced ``(num, den)`` pairs: reducing a
    100k-bit fraction costs far more than the comparisons it feeds.
    """

    def __init__(self, ps: PrimeSeq, s: int, prec: int | None):
        self.ps, self.s, self.prec = ps, s, prec
        self.top = 2 * ps.last - 1
        self.tail = tail_bound(s, 2 * ps.last)
        self._ub: dict[int, object] = {}

    def fill_suffixes(self) -> None:
        """Precompute ub_next for the whole window in one downward pass."""
        s, top, first = self.s, self.top, self.ps.last + 2
        if self.prec is None:
            if first <= top:
                base = lcm(*range(first, top + 1))
                den = base**s
                acc = 0
                for j in range(top, first - 1, -1):
                    acc += (base // j) ** s
                    self._ub[j] = (acc, den)
        else:
            acc = DyadicInterval(0, 0, self.prec)
            for j in range(top, first - 1, -1):
                acc = acc + dy_recip_pow(j, s, self.prec)
                self._ub[j] = acc

    def ub_next(self, m: int):
        """``ub_sum(m+1)``, or None for the empty sum."""
        j = m + 1
        if j > self.top:
            return None
        if j not in self._ub:
            if self.prec is None:
                # same common denominator as fill_suffixes, so reports match
                base = lcm(*range(self.ps.last + 2, self.top + 1))
                num = sum((base // k) ** self.s for k in range(j, self.top + 1))
                self._ub[j] = (num, base**self.s)
            else:
                acc = DyadicInterval(0, 0, self.prec)
                for k in range(j, self.top + 1):
                    acc = acc + dy_recip_pow(k, self.s, self.prec)
                self._ub[j] = acc
        return self._ub[j]

    def lb_prev(self, m: int):
        """``lb_val(m-1)``."""
        k = (m - 1) ** self.s
        t = self.tail
        if self.prec is None:
            return (t.denominator - t.numerator * k, t.denominator * k)
        return DyadicInterval.ratio(1, k, self.prec) - DyadicInterval.enclose(t, self.prec)


def _greater(b: Bracket, t) -> bool:
    if isinstance(b, DyadicInterval):
        return b.gt(t)
    num, den = t
    return b.numerator * den > num * b.denominator


def _less(b: Bracket, t) -> bool:
    if isinstance(b, DyadicInterval):
        return b.lt(t)
    num, den = t
    return b.numerator * den < num * b.denominator


def log2_field(x) -> Log2Field:
    if isinstance(x, DyadicInterval):
        mid = x.lo + x.hi
        return log2_ratio(mid, 1 << (x.prec + 1)) if mid > 0 else NONPOSITIVE
    if isinstance(x, Fraction):
        return approx_log2(x) if x > 0 else NONPOSITIVE
    num, den = x
    return log2_ratio(num, den) if num > 0 else NONPOSITIVE


def _certify(env: _Envelopes, m: int, b: Bracket) -> Certificate:
    ps, s = env.ps, env.s
    if m not in candidate_window(ps):
        raise DomainError(f"candidate {m} outside window {candidate_window(ps)}")
    ub = env.ub_next(m)
    if ub is None:
        # empty sum: threshold is exactly zero
        passed_upper = _greater(b, (0, 1) if env.prec is None else DyadicInterval(0, 0, env.prec))
        ub_log2: Log2Field = EMPTY_SUM
    else:
        passed_upper = _greater(b, ub)
        ub_log2 = log2_field(ub)
    if m == ps.last + 1:
        passed_lower = True
        lb_log2: Log2Field = SKIPPED
    else:
        lb = env.lb_prev(m)
        passed_lower = _less(b, lb)
        lb_log2 = log2_field(lb)
    return Certificate(
        n=ps.n, s=s, m=m, b_log2=log2_field(b),
        ub_next_log2=ub_log2, lb_prev_log2=lb_log2,
        passed_upper=passed_upper, passed_lower=passed_lower,
        passed=passed_upper and passed_lower,
    )


def _prec_of(b: Bracket) -> int | None:
    return b.prec if isinstance(b, DyadicInterval) else None


def certify_candidate(ps: PrimeSeq, s: int, m: int, b: Bracket) -> Certificate:
    """Check whether the E4 value ``b`` at ``s`` proves ``m == p_{n+1}``.

    With a dyadic ``b`` the checks use b's unfavorable endpoint and raise
    :class:`~primerecursion.errors.Indecisive` when the interval straddles a
    threshold.
    """
    if not isinstance(b, DyadicInterval):
        b = Fraction(b)
    return _certify(_Envelopes(ps, s, _prec_of(b)), m, b)


def certify_scan(ps: PrimeSeq, s: int, b: Bracket) -> tuple[int, Certificate] | None:
    """Run every window candidate; return the unique pass, or None."""
    if not isinstance(b, DyadicInterval):
        b = Fraction(b)
    env = _Envelopes(ps, s, _prec_of(b))
    env.fill_suffixes()
    passing = []
    for m in candidate_window(ps):
        cert = _certify(env, m, b)
        if cert.passed:
            passing.append((m, cert))
    if len(passing) > 1:
        raise InternalInconsistency(
            f"n={ps.n} s={s}: candidates {[m for m, _ in passing]} all certified")
    return passing[0] if passing else None
