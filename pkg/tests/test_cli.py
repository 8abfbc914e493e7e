import csv
import io
import json

import pytest

from binweaver.cli import main
from binweaver.lo_lab import CSV_FIELDS


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return write


def test_solve_exit_codes(capsys, files):
    code, out, _ = run(capsys, "solve", files("yes.txt", "3 2\n3 7 10\n10 10\n"))
    assert code == 0 and json.loads(out)["answer"] == "yes"
    code, out, _ = run(capsys, "solve", files("no.txt", "3 2\n3 7 10\n9 11\n"))
    assert code == 1 and json.loads(out)["answer"] == "no"


@pytest.mark.parametrize("algo", ["bruteforce", "zeta", "dp"])
def test_solve_algos(capsys, files, algo):
    code, out, _ = run(capsys, "solve", files("i.txt", "4 2\n1 1 1 1\n2 2\n"), "--algo", algo)
    assert code == 0 and json.loads(out)["algorithm"] == algo


def test_solve_budget_unknown(capsys, files):
    path = files("big.txt", "20 2\n" + " ".join(["2"] * 20) + "\n19 21\n")
    code, out, _ = run(capsys, "solve", path, "--algo", "zeta", "--budget-nodes", "64")
    assert code == 2 and json.loads(out)["answer"] == "unknown"


def test_usage_errors(capsys, files):
    assert run(capsys)[0] == 64
    assert run(capsys, "frobnicate")[0] == 64
    assert run(capsys, "solve", "x", "--algo", "magic")[0] == 64
    assert run(capsys, "gen", "--n", "5", "--m", "0")[0] == 64


def test_data_errors(capsys, files):
    code, _, err = run(capsys, "solve", files("bad.txt", "2 1\n1 x\n3\n"))
    assert code == 65 and "line 2" in err
    assert run(capsys, "solve", "/nonexistent/file")[0] == 65
    inst = files("i.txt", "2 1\n1 2\n3\n")
    assert run(capsys, "verify", inst, files("s.txt", "0 zero\n"))[0] == 65


def test_gen_and_verify_roundtrip(capsys, files, tmp_path):
    sol = str(tmp_path / "sol.txt")
    code, text, _ = run(capsys, "gen", "--kind", "tight-partition", "--n", "10", "--m", "3",
                        "--seed", "7", "--solution-out", sol)
    assert code == 0
    inst = files("gen.txt", text)
    code, out, _ = run(capsys, "verify", inst, sol)
    assert code == 0 and json.loads(out) == {"valid": True}
    code, again, _ = run(capsys, "gen", "--kind", "tight-partition", "--n", "10", "--m", "3",
                         "--seed", "7")
    assert again == text


def test_gen_json(capsys):
    code, out, _ = run(capsys, "gen", "--kind", "unbalanced-planted", "--n", "10", "--json")
    doc = json.loads(out)
    assert code == 0 and len(doc["weights"]) == 10 and len(doc["planted"]) == 10


def test_verify_bad_solution(capsys, files):
    inst = files("i.txt", "3 2\n3 7 10\n10 10\n")
    code, out, _ = run(capsys, "verify", inst, files("s.txt", "1 1 1\n"))
    assert code == 1 and json.loads(out) == {"valid": False}


def test_analyze(capsys, files):
    inst = files("i.txt", "3 1\n3 7 10\n20\n")
    code, out, _ = run(capsys, "analyze", inst)
    rec = json.loads(out)
    assert code == 0 and rec["l"] == 5 and rec["level_counts"] == [1, 1, 2, 4, 8, 7]
    code, out, _ = run(capsys, "analyze", inst, "--format", "csv")
    row = next(csv.DictReader(io.StringIO(out)))
    assert row["level_counts"] == "1 1 2 4 8 7" and row["beta"] == "2" and row["beta_value"] == "10"


def test_lo_scan(capsys):
    code, out, _ = run(capsys, "lo-scan", "--kind", "powers-of-two", "--n-min", "12",
                       "--n-max", "12")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and tuple(rows[0]) == CSV_FIELDS
    assert float(rows[0]["beta_exp"]) == 0 and float(rows[0]["sums_exp"]) == 1


def test_lemma_check(capsys):
    code, out, _ = run(capsys, "lemma-check", "multinomial-bounds", "gamma-entropy")
    assert code == 0 and all(r["passed"] for r in json.loads(out))
    assert run(capsys, "lemma-check", "nope")[0] == 64


def test_bench(capsys):
    code, out, _ = run(capsys, "bench", "--n-values", "8", "--solvers", "zeta,dp",
                       "--repeats", "1", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and [r["solver"] for r in rows] == ["zeta", "dp"]
    assert rows[0]["answer"] == rows[1]["answer"]


def test_env_defaults(capsys, monkeypatch):
    monkeypatch.setenv("BINWEAVER_SEED", "3")
    _, a, _ = run(capsys, "gen", "--n", "8")
    _, b, _ = run(capsys, "gen", "--n", "8", "--seed", "3")
    assert a == b
    monkeypatch.setenv("BINWEAVER_SEED", "oops")
    assert run(capsys, "gen", "--n", "8")[0] == 64
    monkeypatch.delenv("BINWEAVER_SEED")
    monkeypatch.setenv("BINWEAVER_BUDGET_NODES", "16")
    code, out, _ = run(capsys, "bench", "--n-values", "10", "--solvers", "zeta",
                       "--repeats", "1")
    assert code == 0 and next(csv.DictReader(io.StringIO(out)))["status"] == "budget"
