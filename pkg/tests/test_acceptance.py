"""Exit criteria for the package; one PASS/FAIL line per criterion is printed
in the terminal summary (see conftest.py)."""

import csv
import io
import time
from fractions import Fraction

import pytest

import oracles
from primerecursion import cli
from primerecursion.bracket import (
    BracketForm,
    dyadic_prec_floor,
    euler_factor_prod_exact,
    euler_truncation_identity,
    eval_bracket_dyadic,
    eval_bracket_exact,
)
from primerecursion.certify import certify_candidate, certify_scan, lb_val, tail_bound, ub_sum
from primerecursion.driver import DriverOptions, ladder, next_prime
from primerecursion.primes import PrimeSeq, oracle_next_prime
from primerecursion.root import RawEstimate, raw_estimate

E4, E1T = BracketForm.E4, BracketForm.E1T
FIRST_26 = oracles.trial_primes(26)


def test_criterion_01_ladder_fidelity(capsys):
    t0 = time.perf_counter()
    code = cli.main(["ladder", "--n", "26", "--emit", "csv"])
    elapsed = time.perf_counter() - t0
    out = capsys.readouterr().out
    assert code == 0
    data = list(csv.DictReader(io.StringIO(out)))
    assert [2] + [int(r["p_next"]) for r in data] == FIRST_26
    assert FIRST_26[-1] == 101
    report = ladder(26)
    assert all(st.certificate.passed for st in report.steps)
    assert elapsed < 60


def test_criterion_02_exact_bracket_values():
    cases = [
        ([2], 2, E4, Fraction(1, 36)),
        ([2], 4, E4, Fraction(53, 6480)),
        ([2, 3], 4, E4, Fraction(4561, 12960000)),
        ([2], 2, E1T, Fraction(1, 48)),
    ]
    for seed, s, form, expected in cases:
        oracle = (oracles.e4 if form is E4 else oracles.e1t)(seed, s)
        assert oracle == expected
        assert eval_bracket_exact(PrimeSeq(seed), s, form) == expected


def test_criterion_03_certification_at_small_s():
    m, cert, stats = next_prime(PrimeSeq([2]))
    assert m == 3 and cert.passed and stats.s_used <= 4

    ps = PrimeSeq([2, 3])
    assert ub_sum(6, 4, ps) == 0
    assert lb_val(4, 4, ps) == Fraction(11, 6912)
    b = eval_bracket_exact(ps, 4, E4)
    cert = certify_candidate(ps, 4, 5, b)
    assert cert.passed_upper and cert.passed_lower and cert.passed
    m, cert, stats = next_prime(ps)
    assert m == 5 and stats.s_used == 4


def test_criterion_04_raw_estimate_trace():
    assert raw_estimate(PrimeSeq([2]), 2, E4) == RawEstimate(6, False)
    assert raw_estimate(PrimeSeq([2]), 4, E4) == RawEstimate(3, True)


def test_criterion_05_form_identity():
    for n in range(1, 9):
        ps = PrimeSeq.first(n)
        for s in range(2, 13):
            e4 = eval_bracket_exact(ps, s, E4)
            assert eval_bracket_exact(ps, s, E1T) == e4 * euler_factor_prod_exact(ps, s, False)


def test_criterion_06_euler_truncation_identity():
    for n in range(1, 13):
        ps = PrimeSeq.first(n)
        for big_n in range(n, 13):
            for s in range(2, 9):
                assert euler_truncation_identity(ps, big_n, s)


def test_criterion_07_asymptotics():
    for n in range(1, 7):
        ps = PrimeSeq.first(n)
        p = oracle_next_prime(ps)
        defects = [abs(oracles.e4(ps.values, s) * p**s - 1) for s in (8, 16, 32, 64)]
        assert all(a > b for a, b in zip(defects, defects[1:]))
        assert defects[-1] < Fraction(1, 1000)
    # closed form for n = 1: (3/4)^s / (1 - 2^-s)
    s = 64
    closed = Fraction(3, 4) ** s / (1 - Fraction(1, 2**s))
    assert abs(oracles.e4([2], s) * 3**s - 1) == closed


def test_criterion_08_certificate_soundness():
    for n in range(1, 13):
        ps = PrimeSeq.first(n)
        target = oracle_next_prime(ps)
        for s in (2, 4, 8, 16, 32, 64):
            b = eval_bracket_exact(ps, s, E4)
            passing = [m for m in range(ps.last + 1, 2 * ps.last)
                       if certify_candidate(ps, s, m, b).passed]
            assert len(passing) <= 1
            assert all(m == target for m in passing)
            found = certify_scan(ps, s, b)
            assert (found[0] if found else None) == (passing[0] if passing else None)


def test_criterion_09_backend_agreement():
    exact = ladder(26, DriverOptions(backend="exact"))
    auto = ladder(26, DriverOptions(backend="auto"))
    assert exact.primes == auto.primes == FIRST_26
    assert [st.s_used for st in exact.steps] == [st.s_used for st in auto.steps]
    assert {st.backend_used for st in auto.steps} == {"dyadic"}
    for st in auto.steps:
        ps = PrimeSeq(FIRST_26[: st.n])
        iv = eval_bracket_dyadic(ps, st.s_used, E4, dyadic_prec_floor(ps, st.s_used))
        assert iv.contains(eval_bracket_exact(ps, st.s_used, E4))


def test_criterion_10_negative_bracket():
    ps = PrimeSeq([2, 3])
    b = eval_bracket_exact(ps, 2, E4)
    assert b <= 0
    assert raw_estimate(ps, 2, E4) is None
    assert certify_scan(ps, 2, b) is None
    m, cert, stats = next_prime(ps, DriverOptions(s_start=2, backend="exact"))
    assert stats.s_tried == (2, 4)
    assert m == 5 and stats.s_used == 4


def test_criterion_11_tail_bound_validity():
    # Each term is rounded up to a multiple of 2^-P, so the integer sum is a
    # rigorous upper bound on the exact partial sum; partial sums grow with J,
    # so J = 10000 covers every J <= 10000.
    P, J = 256, 10000
    for s in (2, 3, 4, 6):
        ceil_terms = [0, 0] + [-((-(1 << P)) // j**s) for j in range(2, J + 1)]
        suffix = 0
        bound_at = {}
        for j in range(J, 1, -1):
            suffix += ceil_terms[j]
            if j <= 20:
                bound_at[j] = suffix
        for m in range(2, 21):
            tb = tail_bound(s, m)
            assert bound_at[m] * tb.denominator <= tb.numerator << P
