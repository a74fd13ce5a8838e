"""Command-line entry point.

Exit codes: 0 ok, 1 not converged, 2 invalid input, 3 internal
inconsistency or identity failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from contextlib import contextmanager

from . import driver
from .bracket import (
    BracketForm,
    dyadic_prec_floor,
    euler_factor_prod_exact,
    euler_truncation_identity,
    eval_bracket_dyadic,
    eval_bracket_exact,
)
from .certify import certify_scan
from .driver import DriverOptions, converge_sweep, ladder, next_prime
from .errors import DomainError, InternalInconsistency, InvalidPrimeSeq, NotConverged
from .primes import PrimeSeq, first_primes, oracle_next_prime

EXIT_OK, EXIT_NOT_CONVERGED, EXIT_INVALID, EXIT_INCONSISTENT = 0, 1, 2, 3

SCHEMA_VERSION = 1
LADDER_COLUMNS = ["n", "p_next", "s_used", "backend", "elapsed_ns", "operand_bits"]
CONVERGE_COLUMNS = ["n", "s", "form", "backend", "b_log2", "m_raw", "in_window",
                    "certified_m", "elapsed_ns", "operand_bits"]
BENCH_COLUMNS = ["backend", "n", "p_next", "s_used", "elapsed_ns", "operand_bits"]


class UsageError(Exception):
    pass


def fmt_log2(x) -> str:
    return x if isinstance(x, str) else f"{x:.9f}"


def fmt_bool(x: bool) -> str:
    return "true" if x else "false"


def _csv_writer(fh):
    return csv.writer(fh, lineterminator="\n")


@contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def parse_int_list(text: str) -> list[int]:
    """``"2,4,8"`` or an inclusive ``"A:B"`` / ``"A:B:STEP"`` range."""
    text = text.strip()
    try:
        if ":" in text:
            parts = [int(x) for x in text.split(":")]
            if len(parts) == 2:
                parts.append(1)
            if len(parts) != 3 or parts[2] < 1:
                raise ValueError
            a, b, step = parts
            return list(range(a, b + 1, step))
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"cannot parse integer list {text!r}") from None


def _seed(args) -> PrimeSeq:
    if args.primes is not None and args.n is not None:
        raise UsageError("give either --primes or --n, not both")
    if args.primes is not None:
        return PrimeSeq(parse_int_list(args.primes))
    if args.n is not None:
        return PrimeSeq.first(args.n)
    raise UsageError("one of --primes or --n is required")


def _options(args) -> DriverOptions:
    return DriverOptions(
        form=BracketForm.parse(getattr(args, "form", "e4")),
        backend=args.backend,
        s_start=getattr(args, "s_start", 4),
        s_max=getattr(args, "s_max", 4096),
    )


def step_dict(step: driver.LadderStep) -> dict:
    return {
        "n": step.n, "p_next": step.p_next, "s_used": step.s_used,
        "backend": step.backend_used, "elapsed_ns": step.elapsed_ns,
        "operand_bits": step.operand_bits, "certificate": step.certificate.to_json_dict(),
    }


def cmd_next(args) -> int:
    ps = _seed(args)
    m, cert, stats = next_prime(ps, _options(args))
    if args.json:
        print(json.dumps({
            "m": m, "s_used": stats.s_used, "backend": stats.backend_used,
            "elapsed_ns": stats.elapsed_ns, "operand_bits": stats.operand_bits,
            "certificate": cert.to_json_dict(),
        }))
    else:
        print(m)
        for key, value in cert.to_json_dict().items():
            text = fmt_bool(value) if isinstance(value, bool) else fmt_log2(value) if isinstance(value, float) else value
            print(f"  {key}={text}")
    return EXIT_OK


def write_ladder(report: driver.LadderReport, emit: str, fh) -> None:
    if emit == "json":
        json.dump({"schema": SCHEMA_VERSION, "seed": list(report.seed),
                   "primes": report.primes,
                   "steps": [step_dict(st) for st in report.steps]}, fh)
        fh.write("\n")
        return
    w = _csv_writer(fh)
    w.writerow(LADDER_COLUMNS)
    for st in report.steps:
        w.writerow([st.n, st.p_next, st.s_used, st.backend_used, st.elapsed_ns, st.operand_bits])


def cmd_ladder(args) -> int:
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    try:
        report = ladder(args.n, _options(args))
    except NotConverged as exc:
        if exc.report is not None:
            with _output(args.out) as fh:
                write_ladder(exc.report, args.emit, fh)
        raise
    with _output(args.out) as fh:
        write_ladder(report, args.emit, fh)
    return EXIT_OK


def cmd_converge(args) -> int:
    ps = _seed(args)
    s_values = parse_int_list(args.s_list)
    forms = [BracketForm.parse(f) for f in args.forms.split(",") if f.strip()]
    records = converge_sweep(ps, s_values, forms, args.backend)
    with _output(args.out) as fh:
        w = _csv_writer(fh)
        w.writerow(CONVERGE_COLUMNS)
        for r in records:
            w.writerow([
                r.n, r.s, r.form.value, r.backend, fmt_log2(r.b_log2),
                "" if r.m_raw is None else r.m_raw, fmt_bool(r.in_window),
                "" if r.certified_m is None else r.certified_m,
                r.elapsed_ns, r.operand_bits,
            ])
    return EXIT_OK


def identity_failures(n_values, big_n_values, s_values) -> list[str]:
    """Run both exact identities over the grid; entries with n > big_n are skipped."""
    failures = []
    for n in n_values:
        if n < 1:
            raise UsageError("n values must be >= 1")
        ps = PrimeSeq.first(n)
        for s in s_values:
            e4 = eval_bracket_exact(ps, s, BracketForm.E4)
            e1t = eval_bracket_exact(ps, s, BracketForm.E1T)
            if e1t != e4 * euler_factor_prod_exact(ps, s, inverted=False):
                failures.append(f"form identity n={n} s={s}")
            for big_n in big_n_values:
                if big_n < n:
                    continue
                if not euler_truncation_identity(ps, big_n, s):
                    failures.append(f"truncation identity n={n} big_n={big_n} s={s}")
    return failures


def cmd_identity_check(args) -> int:
    n_values = parse_int_list(args.n)
    big_n_values = parse_int_list(args.big_n)
    s_values = parse_int_list(args.s)
    if any(s < 2 for s in s_values):
        raise UsageError("s values must be >= 2")
    failures = identity_failures(n_values, big_n_values, s_values)
    for f in failures:
        print(f"FAIL {f}")
    print(f"identity-check: {len(failures)} failures")
    return EXIT_INCONSISTENT if failures else EXIT_OK


def selftest_checks(n_target: int):
    """Yield ``(name, ok, detail)`` for each self-test check."""
    truth = first_primes(n_target)

    auto = ladder(n_target, DriverOptions(backend="auto"))
    yield "ladder-vs-sieve", auto.primes == truth, f"{n_target} primes"

    bad = []
    for n in range(1, 13):
        ps = PrimeSeq.first(n)
        for s in (2, 4, 8, 16, 32, 64):
            found = certify_scan(ps, s, eval_bracket_exact(ps, s, BracketForm.E4))
            if found is not None and found[0] != oracle_next_prime(ps):
                bad.append((n, s))
    yield "certificate-soundness", not bad, f"n<=12, s in 2..64, violations={bad}"

    exact = ladder(n_target, DriverOptions(backend="exact"))
    dyadic = ladder(n_target, DriverOptions(backend="dyadic"))
    same = (exact.primes == dyadic.primes
            and [st.s_used for st in exact.steps] == [st.s_used for st in dyadic.steps])
    contained = True
    for st in dyadic.steps:
        ps = PrimeSeq(truth[: st.n])
        iv = eval_bracket_dyadic(ps, st.s_used, BracketForm.E4, dyadic_prec_floor(ps, st.s_used))
        contained &= iv.contains(eval_bracket_exact(ps, st.s_used, BracketForm.E4))
    yield "backend-agreement", same and contained, "exact vs dyadic: primes, s_used, containment"


def cmd_selftest(args) -> int:
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    ok_all = True
    for name, ok, detail in selftest_checks(args.n):
        ok_all &= ok
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    print("selftest: all checks passed" if ok_all else "selftest: FAILED")
    return EXIT_OK if ok_all else EXIT_INCONSISTENT


def cmd_bench(args) -> int:
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    backends = [b.strip() for b in args.backends.split(",") if b.strip()]
    for b in backends:
        if b not in driver.BACKENDS:
            raise UsageError(f"unknown backend {b!r}")
    reports = {b: ladder(args.n, DriverOptions(backend=b)) for b in backends}
    with _output(args.out) as fh:
        w = _csv_writer(fh)
        w.writerow(BENCH_COLUMNS)
        for i in range(args.n - 1):
            for b in backends:
                st = reports[b].steps[i]
                w.writerow([b, st.n, st.p_next, st.s_used, st.elapsed_ns, st.operand_bits])
    return EXIT_OK


def _add_seed(p):
    p.add_argument("--primes", help="comma list of the consecutive primes from 2")
    p.add_argument("--n", type=int, help="use the first N primes as the seed")


def _add_backend(p, default="auto"):
    p.add_argument("--backend", choices=driver.BACKENDS, default=default)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="primerec", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("next", help="certify the next prime after a seed")
    _add_seed(p)
    p.add_argument("--form", choices=["e4", "e1t"], default="e4")
    _add_backend(p)
    p.add_argument("--s-start", type=int, default=4)
    p.add_argument("--s-max", type=int, default=4096)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_next)

    p = sub.add_parser("ladder", help="build the first N primes from [2]")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--emit", choices=["csv", "json"], default="csv")
    p.add_argument("--form", choices=["e4", "e1t"], default="e4")
    _add_backend(p)
    p.add_argument("--s-start", type=int, default=4)
    p.add_argument("--s-max", type=int, default=4096)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_ladder)

    p = sub.add_parser("converge", help="tabulate the bracket over a list of s")
    _add_seed(p)
    p.add_argument("--s-list", required=True, help="A:B[:STEP] or comma list")
    p.add_argument("--forms", default="e4")
    p.add_argument("--emit", choices=["csv"], default="csv")
    _add_backend(p, default="exact")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("identity-check", help="check the exact product identities")
    p.add_argument("--n", default="1:5")
    p.add_argument("--big-n", default="1:8")
    p.add_argument("--s", default="2:6")
    p.set_defaults(func=cmd_identity_check)

    p = sub.add_parser("selftest", help="ladder, soundness and backend checks")
    p.add_argument("--n", type=int, default=26)
    p.set_defaults(func=cmd_selftest)

    p = sub.add_parser("bench", help="per-backend ladder timings as CSV")
    p.add_argument("--n", type=int, default=26)
    p.add_argument("--backends", default="exact,dyadic")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, DomainError, InvalidPrimeSeq) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NotConverged as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    except InternalInconsistency as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT


if __name__ == "__main__":
    sys.exit(main())
