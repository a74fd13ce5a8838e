"""Certified recovery of the next prime from the first n primes."""

from .arith import DyadicInterval, Ordering, Rat, approx_log2, compare_to_recip_power, rat_pow
from .bracket import BracketForm, eval_bracket_dyadic, eval_bracket_exact
from .certify import Certificate, certify_candidate, certify_scan, tail_bound
from .driver import DriverOptions, converge_sweep, ladder, next_prime
from .errors import (
    DomainError,
    InternalInconsistency,
    InvalidPrimeSeq,
    NonpositiveBracket,
    NotConverged,
)
from .primes import PrimeSeq, oracle_next_prime, sieve_upto
from .root import RawEstimate, bracket_root, raw_estimate

__version__ = "0.1.0"
