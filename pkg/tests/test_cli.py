import csv
import io
import json
import subprocess
import sys

import pytest

from primerecursion import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_next_json(capsys):
    code, out, _ = run(capsys, "next", "--primes", "2", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["m"] == 3 and doc["s_used"] == 4
    assert set(doc["certificate"]) == {
        "n", "s", "m", "b_log2", "ub_next_log2", "lb_prev_log2",
        "passed_upper", "passed_lower", "passed"}
    assert doc["certificate"]["lb_prev_log2"] == "skipped"


def test_next_plain(capsys):
    code, out, _ = run(capsys, "next", "--n", "3")
    assert code == 0
    assert out.splitlines()[0] == "7"


@pytest.mark.parametrize("argv", [
    ["next", "--primes", "2,5"],
    ["next", "--primes", "3"],
    ["next"],
    ["next", "--n", "0"],
    ["next", "--primes", "2", "--n", "1"],
    ["next", "--primes", "two"],
    ["next", "--n", "2", "--backend", "gpu"],
    ["ladder", "--n", "0"],
    ["bench", "--backends", "exact,fast"],
    ["converge", "--primes", "2", "--s-list", "1,2"],
    ["converge", "--primes", "2", "--s-list", "4", "--forms", "e9"],
])
def test_invalid_input_exit_2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_not_converged_exit_1(capsys):
    code, _, err = run(capsys, "next", "--n", "25", "--s-max", "8")
    assert code == 1
    assert "no certificate" in err


def test_ladder_csv(capsys, tmp_path):
    code, out, _ = run(capsys, "ladder", "--n", "26", "--emit", "csv")
    assert code == 0
    assert out.splitlines()[0] == "n,p_next,s_used,backend,elapsed_ns,operand_bits"
    data = rows(out)
    assert len(data) == 25
    assert data[-1]["p_next"] == "101"
    assert "\r" not in out


def test_ladder_seed_only(capsys):
    code, out, _ = run(capsys, "ladder", "--n", "1")
    assert code == 0
    assert rows(out) == []
    code, out, _ = run(capsys, "ladder", "--n", "1", "--emit", "json")
    assert json.loads(out)["primes"] == [2]


def test_ladder_json_to_file(capsys, tmp_path):
    path = tmp_path / "ladder.json"
    code, out, _ = run(capsys, "ladder", "--n", "6", "--emit", "json", "--out", str(path))
    assert code == 0 and out == ""
    doc = json.loads(path.read_text())
    assert doc["primes"] == [2, 3, 5, 7, 11, 13]
    assert all(st["certificate"]["passed"] for st in doc["steps"])


def test_converge_rows(capsys):
    code, out, _ = run(capsys, "converge", "--primes", "2", "--s-list", "2,4", "--forms", "e4")
    assert code == 0
    assert out.splitlines()[0] == ("n,s,form,backend,b_log2,m_raw,in_window,"
                                   "certified_m,elapsed_ns,operand_bits")
    r = rows(out)
    assert (r[0]["s"], r[0]["m_raw"], r[0]["in_window"]) == ("2", "6", "false")
    assert r[0]["b_log2"] == "-5.169925001"
    assert (r[1]["s"], r[1]["m_raw"], r[1]["certified_m"]) == ("4", "3", "3")


def test_converge_nonpositive(capsys):
    code, out, _ = run(capsys, "converge", "--primes", "2,3", "--s-list", "2", "--forms", "e4")
    (r,) = rows(out)
    assert r["b_log2"] == "nonpositive" and r["m_raw"] == "" and r["certified_m"] == ""


def test_converge_two_forms(capsys):
    code, out, _ = run(capsys, "converge", "--primes", "2", "--s-list", "4", "--forms", "e4,e1t")
    r = rows(out)
    assert [x["form"] for x in r] == ["e4", "e1t"]
    assert r[0]["certified_m"] == r[1]["certified_m"] == "3"


def test_converge_range_syntax(capsys):
    code, out, _ = run(capsys, "converge", "--n", "3", "--s-list", "4:16:4")
    assert [x["s"] for x in rows(out)] == ["4", "8", "12", "16"]


def test_identity_check(capsys):
    code, out, _ = run(capsys, "identity-check", "--n", "1:5", "--big-n", "1:8", "--s", "2:6")
    assert code == 0
    assert "0 failures" in out


def test_identity_check_degenerate_grid(capsys):
    code, _, _ = run(capsys, "identity-check", "--n", "6:7", "--big-n", "1:3", "--s", "2")
    assert code == 0


def test_identity_check_injected_fault(capsys, monkeypatch):
    monkeypatch.setattr(cli, "euler_truncation_identity", lambda *a: False)
    code, out, _ = run(capsys, "identity-check", "--n", "1:2", "--big-n", "2:3", "--s", "2")
    assert code == 3
    assert "FAIL truncation identity" in out


@pytest.mark.parametrize("n", ["1", "26"])
def test_selftest(capsys, n):
    code, out, _ = run(capsys, "selftest", "--n", n)
    assert code == 0
    assert out.count("PASS") == 3


def test_bench(capsys):
    code, out, _ = run(capsys, "bench", "--n", "5", "--backends", "exact,dyadic")
    assert code == 0
    r = rows(out)
    assert len(r) == 8
    assert [x["backend"] for x in r[:2]] == ["exact", "dyadic"]
    assert r[0]["p_next"] == r[1]["p_next"] == "3"
    code, out, _ = run(capsys, "bench", "--n", "1")
    assert out.splitlines() == ["backend,n,p_next,s_used,elapsed_ns,operand_bits"]


def _drop_elapsed(text):
    r = rows(text)
    for x in r:
        x.pop("elapsed_ns")
    return r


@pytest.mark.parametrize("argv", [
    ["ladder", "--n", "12"],
    ["converge", "--n", "4", "--s-list", "2,4,8,16", "--forms", "e4,e1t"],
])
def test_output_stability(capsys, argv):
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert _drop_elapsed(a) == _drop_elapsed(b)
    assert a.splitlines()[0] == b.splitlines()[0]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "primerecursion", "next", "--n", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "5"
