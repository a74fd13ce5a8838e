"""Run the recursion: s schedule, backend choice, ladders and sweeps."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .bracket import (
    BracketForm,
    dyadic_euler_factor_prod,
    dyadic_prec_floor,
    euler_factor_prod_exact,
    eval_bracket_dyadic,
    eval_bracket_exact,
)
from .certify import NONPOSITIVE, Certificate, log2_field, certify_scan
from .errors import DomainError, Indecisive, InternalInconsistency, NotConverged
from .primes import PrimeSeq, oracle_next_prime
from .root import locate

log = logging.getLogger(__name__)

BACKENDS = ("exact", "dyadic", "auto")


@dataclass(frozen=True)
class DriverOptions:
    form: BracketForm = BracketForm.E4
    backend: str = "auto"
    s_start: int = 4
    s_max: int = 4096
    prec_cap_multiplier: int = 64

    def __post_init__(self):
        if self.backend not in BACKENDS:
            raise DomainError(f"unknown backend {self.backend!r}")
        if self.s_start < 2:
            raise DomainError("s_start must be >= 2")
        if self.s_max < self.s_start:
            raise DomainError("s_max must be >= s_start")
        if self.prec_cap_multiplier < 1:
            raise DomainError("prec_cap_multiplier must be >= 1")

    def schedule(self) -> list[int]:
        out, s = [], self.s_start
        while s <= self.s_max:
            out.append(s)
            s *= 2
        return out


@dataclass(frozen=True)
class NextStats:
    s_used: int
    backend_used: str
    elapsed_ns: int
    operand_bits: int
    s_tried: tuple[int, ...]


@dataclass(frozen=True)
class LadderStep:
    n: int
    p_next: int
    s_used: int
    backend_used: str
    certificate: Certificate
    elapsed_ns: int
    operand_bits: int


@dataclass
class LadderReport:
    seed: tuple[int, ...] = (2,)
    steps: list[LadderStep] = field(default_factory=list)

    @property
    def primes(self) -> list[int]:
        return list(self.seed) + [st.p_next for st in self.steps]


@dataclass(frozen=True)
class ConvergenceRecord:
    n: int
    s: int
    form: BracketForm
    backend: str
    b_log2: Union[float, str]
    m_raw: Optional[int]
    in_window: bool
    certified_m: Optional[int]
    elapsed_ns: int
    operand_bits: int


def _exact_bits(b: Fraction) -> int:
    return max(b.numerator.bit_length(), b.denominator.bit_length())


def _exact_e4(ps: PrimeSeq, s: int, form: BracketForm) -> tuple[Fraction, Fraction]:
    """(value in the requested form, the same value converted to E4)."""
    b = eval_bracket_exact(ps, s, form)
    if form is BracketForm.E1T:
        return b, b / euler_factor_prod_exact(ps, s, inverted=False)
    return b, b


def _dyadic_e4(ps: PrimeSeq, s: int, form: BracketForm, prec: int):
    b = eval_bracket_dyadic(ps, s, form, prec)
    if form is BracketForm.E1T:
        return b, b * dyadic_euler_factor_prod(ps, s, True, prec)
    return b, b


def _precisions(ps: PrimeSeq, s: int, opts: DriverOptions) -> Iterable[int]:
    floor = dyadic_prec_floor(ps, s)
    prec = floor
    while prec <= floor * opts.prec_cap_multiplier:
        yield prec
        prec *= 2


def _scan_at(ps: PrimeSeq, s: int, opts: DriverOptions):
    """Certify at one s. Returns (result-or-None, backend_used, operand_bits)."""
    if opts.backend != "exact":
        for prec in _precisions(ps, s, opts):
            _, b4 = _dyadic_e4(ps, s, opts.form, prec)
            try:
                return certify_scan(ps, s, b4), "dyadic", b4.mantissa_bits()
            except Indecisive:
                log.debug("n=%d s=%d: indecisive at prec=%d", ps.n, s, prec)
        log.info("n=%d s=%d: dyadic cap reached, using exact backend", ps.n, s)
    _, b4 = _exact_e4(ps, s, opts.form)
    return certify_scan(ps, s, b4), "exact", _exact_bits(b4)


def next_prime(ps: PrimeSeq, opts: DriverOptions | None = None) -> tuple[int, Certificate, NextStats]:
    """Recover p_{n+1} from p_1..p_n, certified at the first sufficient s."""
    opts = opts or DriverOptions()
    t0 = time.perf_counter_ns()
    tried = []
    for s in opts.schedule():
        tried.append(s)
        found, backend_used, bits = _scan_at(ps, s, opts)
        if found is None:
            continue
        m, cert = found
        expected = oracle_next_prime(ps)
        if m != expected:
            raise InternalInconsistency(
                f"n={ps.n} s={s}: certified {m} but the next prime is {expected}")
        stats = NextStats(s, backend_used, time.perf_counter_ns() - t0, bits, tuple(tried))
        return m, cert, stats
    raise NotConverged(opts.s_max)


def ladder(n_target: int, opts: DriverOptions | None = None) -> LadderReport:
    """Build p_1..p_{n_target} from the seed [2] using only the recursion."""
    if n_target < 1:
        raise DomainError("n_target must be >= 1")
    opts = opts or DriverOptions()
    report = LadderReport()
    ps = PrimeSeq([2])
    while ps.n < n_target:
        try:
            m, cert, stats = next_prime(ps, opts)
        except NotConverged as exc:
            exc.report = report
            raise
        report.steps.append(LadderStep(
            n=ps.n, p_next=m, s_used=stats.s_used, backend_used=stats.backend_used,
            certificate=cert, elapsed_ns=stats.elapsed_ns, operand_bits=stats.operand_bits,
        ))
        log.info("n=%d -> %d (s=%d, %s)", ps.n, m, stats.s_used, stats.backend_used)
        ps = ps.extend(m)
    return report


def _sweep_exact(ps: PrimeSeq, s: int, form: BracketForm):
    b, b4 = _exact_e4(ps, s, form)
    est = locate(b, s, ps) if b > 0 else None
    found = certify_scan(ps, s, b4)
    return log2_field(b), est, found, _exact_bits(b)


def _sweep_dyadic(ps: PrimeSeq, s: int, form: BracketForm, prec: int):
    b, b4 = _dyadic_e4(ps, s, form, prec)
    if b.hi <= 0:
        est = None
    elif b.lo > 0:
        est = locate(b.lower(), s, ps)
        if locate(b.upper(), s, ps) != est:
            raise Indecisive
    else:
        raise Indecisive
    found = certify_scan(ps, s, b4)
    return log2_field(b), est, found, b.mantissa_bits()


def converge_sweep(
    ps: PrimeSeq,
    s_values: Sequence[int],
    forms: Sequence[BracketForm],
    backend: str = "exact",
) -> list[ConvergenceRecord]:
    """One record per (s, form), s-major, in input order."""
    if backend not in BACKENDS:
        raise DomainError(f"unknown backend {backend!r}")
    opts = DriverOptions(backend=backend)
    expected = oracle_next_prime(ps)
    records = []
    for s in s_values:
        if s < 2:
            raise DomainError("s values must be >= 2")
        for form in forms:
            t0 = time.perf_counter_ns()
            result, used = None, "exact"
            if backend != "exact":
                for prec in _precisions(ps, s, opts):
                    try:
                        result, used = _sweep_dyadic(ps, s, form, prec), "dyadic"
                        break
                    except Indecisive:
                        continue
            if result is None:
                result, used = _sweep_exact(ps, s, form), "exact"
            b_log2, est, found, bits = result
            certified = found[0] if found else None
            if certified is not None and certified != expected:
                raise InternalInconsistency(
                    f"n={ps.n} s={s}: certified {certified} but the next prime is {expected}")
            records.append(ConvergenceRecord(
                n=ps.n, s=s, form=form, backend=used,
                b_log2=b_log2,
                m_raw=est.m_raw if est else None,
                in_window=est.in_window if est else False,
                certified_m=certified,
                elapsed_ns=time.perf_counter_ns() - t0,
                operand_bits=bits,
            ))
    return records


__all__ = [
    "BACKENDS", "ConvergenceRecord", "DriverOptions", "LadderReport", "LadderStep",
    "NONPOSITIVE", "NextStats", "converge_sweep", "ladder", "next_prime",
]
