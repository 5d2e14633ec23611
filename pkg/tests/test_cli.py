import csv
import io
import json
import subprocess
import sys

import pytest

from bimodal_sat.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_verdicts(capsys):
    assert run(capsys, "solve", "--logic", "ssl", "--formula", "(x0 & <>~x0)")[:2] == (1, "UNSAT\n")
    assert run(capsys, "solve", "--logic", "s4s5", "--formula", "(x0 & <>~x0)")[:2] == (0, "SAT\n")


def test_solve_parse_error(capsys):
    code, out, err = run(capsys, "solve", "--logic", "s4s5", "--formula", "x01")
    assert code == 2 and out == "" and "leading zero" in err


def test_solve_model_out_then_validate(capsys, tmp_path):
    path = tmp_path / "m.json"
    code, out, _ = run(capsys, "solve", "--logic", "k4s5", "--formula", "([]x0 & ~x0)",
                       "--model-out", str(path))
    assert code == 0 and out == "SAT\n"
    code, out, _ = run(capsys, "validate", "--logic", "k4s5", "--model", str(path),
                       "--formula", "([]x0 & ~x0)")
    assert code == 0
    assert "FAIL" not in out and "satisfies ([]x0 & ~x0): true" in out


def test_solve_from_file_with_stats_and_oracle(capsys, tmp_path):
    path = tmp_path / "f.txt"
    path.write_text("# negated T axiom\n~([]x0 -> x0)\n")
    code, out, err = run(capsys, "solve", "--logic", "k4s5", "--file", str(path), "--stats", "--oracle")
    assert code == 0
    verdict, stats = out.splitlines()
    assert verdict == "SAT"
    stats = json.loads(stats)
    assert stats["max_recursion_depth"] < stats["depth_bound"] and stats["logic"] == "k4s5"
    path.write_text("x0\nx1\n")
    assert run(capsys, "solve", "--file", str(path))[0] == 2
    assert run(capsys, "solve", "--file", str(tmp_path / "missing"))[0] == 2


def test_solve_resource_limit(capsys, monkeypatch):
    code, _, err = run(capsys, "solve", "--logic", "k4s5", "--formula", "(~[]x0 & [][]x0)", "--limit-steps", "1")
    assert code == 3 and "limit" in err


def test_step_limit_env_default(capsys, monkeypatch):
    monkeypatch.setenv("BIMODAL_SAT_STEP_LIMIT", "1")
    code, _, _ = run(capsys, "solve", "--logic", "k4s5", "--formula", "(~[]x0 & [][]x0)")
    assert code == 3


def test_oracle_disagreement_exit(capsys, monkeypatch):
    import bimodal_sat.cli as cli

    monkeypatch.setattr(cli, "exhaustive_search", lambda f, x: False)
    code, _, err = run(capsys, "solve", "--formula", "x0", "--oracle")
    assert code == 4 and "disagreement" in err


def test_invariant_violation_exit(capsys, monkeypatch):
    import bimodal_sat.solver as solver

    monkeypatch.setattr(solver, "depth_bound", lambda n, A: 1)
    code, _, err = run(capsys, "solve", "--logic", "k4s5", "--formula", "(~[]x0 & [][]x0)")
    assert code == 4 and "invariant" in err


def test_count(capsys):
    code, out, _ = run(capsys, "count", "--formula", "x0")
    assert code == 0 and "A       2" in out and "bound" not in out
    code, out, _ = run(capsys, "count", "--formula", "Kx0")
    assert "A       3" in out and "bound" not in out
    code, out, _ = run(capsys, "count", "--formula", "K[]~x0")
    assert code == 0 and "6.35" in out and "PASS" in out
    code, out, _ = run(capsys, "count", "--formula", "[][]x0")
    assert code == 1 and "FAIL" in out
    assert run(capsys, "count", "--formula", "x01")[0] == 2


def test_validate_reports_broken_symmetry(capsys, tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({
        "logic": "s4s5",
        "worlds": [{"id": 0}, {"id": 1}],
        "diamond": [[0, 0], [1, 1]],
        "L": [[0, 0], [1, 1], [0, 1]],
        "valuation": {"0": [0]},
        "designated": 0,
    }))
    code, out, _ = run(capsys, "validate", "--model", str(path))
    assert code == 1 and "FAIL L symmetric: (0, 1)" in out


def test_validate_bad_inputs(capsys, tmp_path):
    path = tmp_path / "m.json"
    path.write_text('{"logic": "s4s5", "worlds": []}')
    assert run(capsys, "validate", "--model", str(path))[0] == 2
    path.write_text("{")
    assert run(capsys, "validate", "--logic", "s4s5", "--model", str(path))[0] == 2
    assert run(capsys, "validate", "--logic", "s4s5", "--model", str(tmp_path / "nope"))[0] == 2
    path.write_text('{"worlds": [{"id": 0}], "diamond": [[0, 0]], "L": [[0, 0]]}')
    assert run(capsys, "validate", "--model", str(path))[0] == 2
    assert run(capsys, "validate", "--logic", "ssl", "--model", str(path), "--formula", "x0", "--world", "3")[0] == 2


def test_bench(capsys, tmp_path):
    suite = tmp_path / "suite.txt"
    suite.write_text("# corpus\nx0\n\n(x0 & <>~x0)  # persistence\nx01\n~(K[]x0 -> []Kx0)\n")
    code, out, _ = run(capsys, "bench", "--suite", str(suite), "--logic", "ssl")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["formula"] for r in rows] == ["x0", "(x0 & <>~x0)", "x01", "~(K[]x0 -> []Kx0)"]
    assert [r["verdict"] for r in rows] == ["SAT", "UNSAT", "ERROR", "UNSAT"]
    for r in rows:
        if r["verdict"] != "ERROR":
            assert int(r["max_depth"]) < int(r["depth_bound"])


def test_bench_all_logics_to_file(capsys, tmp_path):
    suite = tmp_path / "suite.txt"
    suite.write_text("([]x0 & ~x0)\n")
    out_path = tmp_path / "out.csv"
    assert run(capsys, "bench", "--suite", str(suite), "--logic", "all", "--out", str(out_path))[0] == 0
    rows = list(csv.DictReader(out_path.open()))
    assert [(r["logic"], r["verdict"]) for r in rows] == [("k4s5", "SAT"), ("s4s5", "UNSAT"), ("ssl", "UNSAT")]


def test_bench_empty_and_missing(capsys, tmp_path):
    suite = tmp_path / "empty.txt"
    suite.write_text("")
    code, out, _ = run(capsys, "bench", "--suite", str(suite))
    assert code == 0 and out.count("\n") == 1 and out.startswith("formula,logic,verdict")
    assert run(capsys, "bench", "--suite", str(tmp_path / "missing"))[0] == 2


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as e:
        main(["solve"])
    assert e.value.code == 2
    with pytest.raises(SystemExit):
        main(["solve", "--logic", "s5", "--formula", "x0"])


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "bimodal_sat", "solve", "--formula", "(Kx0 & ~x0)"],
                       capture_output=True, text=True)
    assert r.returncode == 1 and r.stdout == "UNSAT\n"
