import json
import subprocess
import sys

import pytest

from setspectra.cli import render, run


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_formula_a(capsys):
    code, out, _ = call(capsys, "formula", "--which", "A", "--n", "9", "--k", "3")
    assert code == 0
    assert json.loads(out) == {"count": "24"}


def test_formula_variants(capsys):
    assert json.loads(call(capsys, "formula", "--which", "star", "--n", "450", "--k", "3")[1]) == {"count": "450"}
    assert json.loads(call(capsys, "formula", "--which", "Bp", "--n", "9", "--k", "4", "--p", "3")[1]) == {"count": "85"}
    assert json.loads(call(capsys, "formula", "--which", "f", "--n", "9", "--k", "3", "--l", "3")[1]) == {"count": "216"}
    doc = json.loads(call(capsys, "formula", "--which", "compare", "--n", "9", "--k", "3")[1])
    assert doc["below_two_thirds"] is True


def test_big_numbers_are_strings(capsys):
    _, out, _ = call(capsys, "formula", "--which", "A", "--n", str(10**30), "--k", "3")
    assert json.loads(out)["count"] == str(3 * (10**30 - 1))


def test_spectrum_star(capsys):
    code, out, _ = call(capsys, "spectrum", "--builtin", "star", "--n", "9", "--k", "3")
    doc = json.loads(out)
    assert code == 0
    assert (doc["count"], doc["tilde_count"], doc["size"]) == ("9", "37", 28)


def test_spectrum_levels(capsys):
    _, out, _ = call(capsys, "spectrum", "--builtin", "A", "--n", "9", "--k", "3", "--levels")
    assert json.loads(out)["by_level"]["2"] == "24"


def test_search(capsys):
    code, out, _ = call(capsys, "search", "--n", "5", "--k", "2")
    doc = json.loads(out)
    assert code == 0
    assert doc["best"] == "3" and doc["exhaustive"] is True
    assert doc["witnesses"][0]["sets"] == [[1, 2], [1, 3], [2, 3]]


def test_search_budget_exits_3(capsys):
    code, out, _ = call(capsys, "search", "--n", "7", "--k", "2", "--budget", "search_max_cliques=3")
    assert code == 3
    assert json.loads(out)["exhaustive"] is False


def test_env_budget(capsys, monkeypatch):
    monkeypatch.setenv("SETSPECTRA_BUDGET", "search_max_cliques=3")
    assert call(capsys, "search", "--n", "7", "--k", "2")[0] == 3


def test_capacity_guard_exits_3(capsys):
    code, _, err = call(capsys, "search", "--n", "12", "--k", "4")
    assert code == 3 and "capacity" in err


def test_basis_and_branch(capsys):
    code, out, _ = call(capsys, "basis", "--builtin", "HM", "--n", "9", "--k", "3")
    doc = json.loads(out)
    assert code == 0
    assert doc["basis"] == [[1, 2], [1, 3], [1, 4], [2, 3, 4]]
    assert doc["alpha"] == 3
    code, out, _ = call(capsys, "branch", "--builtin", "A", "--n", "9", "--k", "3")
    doc = json.loads(out)
    assert code == 0 and doc["total_weight"] == "1"
    assert all(c["pass"] for c in doc["eq22_checks"])


def test_usage_errors(capsys):
    assert call(capsys, "formula", "--which", "A", "--n", "6", "--k", "3")[0] == 2
    assert call(capsys, "formula", "--which", "nope", "--n", "9", "--k", "3")[0] == 2
    assert call(capsys, "spectrum", "--builtin", "A")[0] == 2
    assert call(capsys)[0] == 2
    assert call(capsys, "branch", "--builtin", "star", "--n", "7", "--k", "3")[0] == 2


def test_unsaturated_input_is_usage_error(capsys, tmp_path):
    path = tmp_path / "f.json"
    path.write_text(json.dumps({"n": 5, "k": 2, "sets": [[1, 2], [1, 3]]}))
    code, _, err = call(capsys, "basis", "--input", str(path))
    assert code == 2 and "{2,3}" in err


def test_bad_files(capsys, tmp_path):
    assert call(capsys, "spectrum", "--input", str(tmp_path / "missing.json"))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert call(capsys, "spectrum", "--input", str(bad))[0] == 2


def test_file_input(capsys, tmp_path):
    path = tmp_path / "tri.json"
    path.write_text(json.dumps({"n": 3, "k": 2, "sets": [[1, 2], [1, 3], [2, 3]]}))
    _, out, _ = call(capsys, "spectrum", "--input", str(path))
    assert json.loads(out)["count"] == "3"


def test_output_is_byte_identical(capsys):
    argv = ["random2k", "--k", "4", "--seed", "7"]
    first = call(capsys, *argv)[1]
    assert call(capsys, *argv)[1] == first
    assert json.loads(first)["almost_shattered"] == {"count": 33, "of": 70}


def test_out_and_csv(capsys, tmp_path):
    target = tmp_path / "scan.csv"
    code, out, _ = call(capsys, "scan", "--k", "5", "--p", "2", "--q", "3",
                        "--n-min", "11", "--n-max", "13", "--format", "csv", "--out", str(target))
    assert code == 0 and out == ""
    lines = target.read_text().splitlines()
    assert lines[0] == "Ip,Iq,n,sign"
    assert len(lines) == 4


def test_render_csv_key_value():
    text = render({"count": "24", "ok": True, "nested": {"a": 1}}, "csv")
    assert text.splitlines() == ["key,value", "count,24", "ok,true"]


def test_verify_all_only(capsys):
    code, out, err = call(capsys, "verify-all", "--only", "1", "--only", "3")
    doc = json.loads(out)
    assert code == 0 and doc["passed"]
    assert [c["number"] for c in doc["criteria"]] == [1, 3]
    assert err.count("[PASS]") == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "setspectra", "formula", "--which", "star",
                           "--n", "9", "--k", "3"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout) == {"count": "9"}


def test_basis_reports_full_cover_for_input(capsys, tmp_path):
    path = tmp_path / "fano.json"
    fano = [[1, 2, 3], [1, 4, 5], [1, 6, 7], [2, 4, 6], [2, 5, 7], [3, 4, 7], [3, 5, 6]]
    path.write_text(json.dumps({"n": 7, "k": 3, "sets": fano}))
    code, out, _ = call(capsys, "basis", "--input", str(path))
    assert code == 0
    assert json.loads(out)["full_cover"] == {"size": 7, "bound": "27", "pass": True}
    _, out, _ = call(capsys, "basis", "--builtin", "A", "--n", "9", "--k", "3")
    assert "full_cover" not in json.loads(out)
