"""Ground-truth primes, independent of the recursion.

Everything here is plain sieving and trial division. The recursion never
calls into this module to compute an answer; it is only used to validate
seeds and to cross-check results.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InvalidPrimeSeq


def sieve_upto(limit: int) -> list[int]:
    """All primes <= limit, by the sieve of Eratosthenes."""
    if limit < 2:
        return []
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    i = 2
    while i * i <= limit:
        if flags[i]:
            flags[i * i :: i] = bytes(len(range(i * i, limit + 1, i)))
        i += 1
    return [k for k in range(limit + 1) if flags[k]]


def is_prime(k: int) -> bool:
    if k < 2:
        return False
    if k % 2 == 0:
        return k == 2
    d = 3
    while d * d <= k:
        if k % d == 0:
            return False
        d += 2
    return True


def first_primes(n: int) -> list[int]:
    """The first ``n`` primes."""
    out: list[int] = []
    limit = 16
    while len(out) < n:
        limit *= 2
        out = sieve_upto(limit)
    return out[:n]


@dataclass(frozen=True)
class PrimeSeq:
    """The consecutive primes p_1 = 2, ..., p_n, checked on construction."""

    values: tuple[int, ...]

    def __init__(self, values: Sequence[int]):
        vals = tuple(int(v) for v in values)
        object.__setattr__(self, "values", vals)
        if not vals:
            raise InvalidPrimeSeq("seed must contain at least one prime")
        expected = sieve_upto(vals[-1]) if vals[-1] >= 2 else []
        if list(vals) != expected:
            raise InvalidPrimeSeq(
                f"{list(vals)} is not the run of consecutive primes from 2")

    @classmethod
    def first(cls, n: int) -> PrimeSeq:
        if n < 1:
            raise InvalidPrimeSeq("seed must contain at least one prime")
        return cls(first_primes(n))

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def last(self) -> int:
        return self.values[-1]

    def extend(self, p: int) -> PrimeSeq:
        return PrimeSeq(self.values + (p,))

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]


def oracle_next_prime(ps: PrimeSeq) -> int:
    """Smallest prime above ``ps.last``, by incremental trial division."""
    k = ps.last + 1
    while not is_prime(k):
        k += 1
    return k


def is_smooth(j: int, ps: PrimeSeq | Sequence[int]) -> bool:
    """True iff every prime factor of ``j`` is among ``ps``."""
    if j < 1:
        raise ValueError("j must be positive")
    for p in ps:
        while j % p == 0:
            j //= p
    return j == 1


def candidate_window(ps: PrimeSeq) -> range:
    """Integers that can be p_{n+1}: ``p_n + 1 .. 2*p_n - 1`` inclusive."""
    return range(ps.last + 1, 2 * ps.last)
