"""Integer part of b**(-1/s) by exact power comparison."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import Ordering, Rat, compare_to_recip_power
from .bracket import BracketForm, eval_bracket_exact
from .errors import DomainError, NonpositiveBracket
from .primes import PrimeSeq, candidate_window


@dataclass(frozen=True)
class RawEstimate:
    m_raw: int
    in_window: bool


def _at_or_below(b: Rat, m: int, s: int) -> bool:
    # b <= m^-s
    return compare_to_recip_power(b, m, s) is not Ordering.GREATER


def bracket_root(b: Rat, s: int, lo: int = 1, hi: int | None = None) -> int:
    """The unique m >= 1 with ``(m+1)^-s < b <= m^-s``.

    ``lo``/``hi`` are search hints only; when the answer is outside them the
    search widens, so the result never depends on the hint.
    """
    b = Fraction(b)
    if b <= 0:
        raise NonpositiveBracket(f"bracket value {b} is not positive")
    if b > 1:
        raise DomainError(f"bracket value {b} exceeds 1")
    if s < 1:
        raise DomainError("s must be positive")
    lo = max(1, lo)
    if not _at_or_below(b, lo, s):
        lo = 1
    if hi is None or hi < lo:
        hi = lo
    # grow hi until b > (hi+1)^-s
    while _at_or_below(b, hi + 1, s):
        hi = 2 * hi + 1
    # invariant: b <= lo^-s and b > (hi+1)^-s
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if _at_or_below(b, mid, s):
            lo = mid
        else:
            hi = mid - 1
    return lo


def locate(b: Rat, s: int, ps: PrimeSeq) -> RawEstimate:
    """Search the Bertrand window first, then ``[1, 8 p_n]`` if b lies outside it."""
    win = candidate_window(ps)
    lo, hi = win.start, win.stop - 1
    if _at_or_below(b, lo, s) and not _at_or_below(b, hi + 1, s):
        m = bracket_root(b, s, lo, hi)
    else:
        m = bracket_root(b, s, 1, 8 * ps.last)
    return RawEstimate(m, m in win)


def raw_estimate(ps: PrimeSeq, s: int, form: BracketForm = BracketForm.E4) -> RawEstimate | None:
    """Finite-s estimate of p_{n+1}; ``None`` when the bracket is not positive."""
    b = eval_bracket_exact(ps, s, form)
    if b <= 0:
        return None
    return locate(b, s, ps)
