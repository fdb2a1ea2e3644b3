from __future__ import annotations

import csv
import io
import json
import subprocess
import sys

import pytest

from isogeo.cli import UsageError, main, parse_n
from isogeo.secant import CSV_COLUMNS


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def test_parse_n():
    assert parse_n("5") == [5]
    assert parse_n("4..8") == [4, 5, 6, 7, 8]
    assert parse_n("3,5,7") == [3, 5, 7]
    for bad in ("8..4", "0", ""):
        with pytest.raises(UsageError):
            parse_n(bad)


def test_osc_dim(capsys):
    code, doc = run_json(capsys, "osc-dim", "--variety", "spinor-min", "--n", "5", "--s", "2")
    assert code == 0 and doc["schema"] == "isogeo/1"
    row = doc["rows"][0]
    assert (row["formula"], row["jets"], row["closed_form"], row["agree"]) == (15, 15, 15, True)
    code, doc = run_json(capsys, "osc-dim", "--variety", "spinor-pl", "--n", "4", "--s", "1")
    assert code == 0 and doc["rows"][0]["jets"] == 6


def test_osc_dim_reports_the_lagrangian_discrepancy(capsys):
    code, doc = run_json(capsys, "osc-dim", "--variety", "lg", "--n", "4", "--s", "2")
    row = doc["rows"][0]
    assert (row["formula"], row["closed_form"], row["jets"]) == (31, 31, 30)
    assert code == 1 and not doc["ok"]


def test_osc_space(capsys):
    code, doc = run_json(capsys, "osc-space", "--variety", "lg", "--n", "3", "--s", "1")
    row = doc["rows"][0]
    assert code == 0 and row["dim"] == 6 and len(row["coordinates"]) == 7
    assert row["coordinates"][0] == [1, 2, 3]


def test_well_behaved(capsys):
    code, doc = run_json(capsys, "well-behaved", "--variety", "lg", "--n", "4")
    assert code == 0 and all(r["equal"] for r in doc["rows"]) and len(doc["rows"]) == 5
    code, _, err = run(capsys, "well-behaved", "--variety", "spinor-min", "--n", "4")
    assert code == 2 and "not supported" in err


def test_secant_csv(capsys):
    code, out, _ = run(capsys, "secant", "--variety", "lg", "--n", "3..4", "--h", "auto", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[0] == CSV_COLUMNS + ["expected_verdict"]
    assert [(r[1], r[2], r[7]) for r in rows[1:]] == [
        ("3", "1", "certified-nondefective"), ("3", "2", "certified-nondefective"),
        ("4", "1", "certified-nondefective"), ("4", "2", "certified-nondefective"),
    ]


def test_secant_defective_row(capsys):
    code, doc = run_json(capsys, "secant", "--variety", "spinor-pl", "--n", "4", "--h", "3")
    assert code == 0
    assert {r["field"] for r in doc["rows"]} == {"fp:2147483647", "fp:2147483629", "qq"}
    assert all(r["verdict"] == "defective-evidence" for r in doc["rows"])


def test_secant_rows_without_expectation_do_not_fail(capsys):
    code, doc = run_json(capsys, "secant", "--variety", "spinor-pl", "--n", "3", "--h", "2")
    assert code == 0 and doc["rows"][0]["expected_verdict"] is None


def test_project(capsys):
    code, doc = run_json(capsys, "project", "--variety", "spinor-pl", "--n", "3", "--s", "1")
    row = doc["rows"][0]
    assert code == 0 and row["verdict"] == "contracts" and row["fiber_dim"] == 1


def test_reconstruct(capsys):
    code, doc = run_json(capsys, "reconstruct", "--variety", "lg", "--n", "3", "--s", "1", "--trials", "20",
                         "--field", "qq")
    assert code == 0 and doc["rows"][0]["recovered"] == 20
    code, _, err = run(capsys, "reconstruct", "--variety", "lg", "--n", "3", "--s", "2")
    assert code == 2 and "birational" in err


def test_regularity(capsys):
    code, doc = run_json(capsys, "regularity", "--variety", "spinor-min", "--n", "6", "--s1", "0", "--s2", "1")
    assert code == 0 and doc["rows"][0]["verdict"] == "pass"
    code, _, err = run(capsys, "regularity", "--variety", "lg", "--n", "3", "--s1", "1")
    assert code == 2 and "--s2" in err


def test_flat_limit(capsys, tmp_path):
    code, doc = run_json(capsys, "flat-limit", "--field", "qq",
                         "--matrix", "[[[1], [0, 1], [0]], [[1], [0, 1], [0, 0, 1]]]")
    assert code == 0 and doc["rows"][0]["basis"] == [["1", "0", "0"], ["0", "0", "1"]]
    path = tmp_path / "fam.json"
    path.write_text("[[1, [0, 1]]]")
    code, doc = run_json(capsys, "flat-limit", "--field", "qq", "--matrix", f"@{path}")
    assert doc["rows"][0]["basis"] == [["1", "0"]]
    code, _, err = run(capsys, "flat-limit", "--matrix", "[[1, 2], [3]]")
    assert code == 2


def test_binomial_check(capsys):
    code, doc = run_json(capsys, "binomial-check", "--alpha-max", "8", "--n", "4..6")
    assert code == 0
    hyper = [r for r in doc["rows"] if r["kind"] == "hyperplane"]
    assert [r["n"] for r in hyper] == [4, 5, 6]
    assert all(r["passed"] == r["instances"] > 0 for r in hyper)


def test_errors_have_nonzero_exit(capsys):
    assert run(capsys, "osc-dim", "--variety", "lg")[0] == 2
    assert run(capsys, "osc-dim", "--variety", "lg", "--n", "40", "--s", "1")[0] == 2
    assert run(capsys, "osc-dim", "--variety", "lg", "--n", "3", "--field", "fp:8")[0] == 2
    assert run(capsys, "project", "--variety", "lg", "--n", "3", "--s", "-1")[0] == 2
    with pytest.raises(SystemExit):
        main(["osc-dim", "--variety", "nope"])


def test_json_is_byte_identical(capsys, tmp_path):
    argv = ["secant", "--variety", "spinor-min", "--n", "6..7", "--h", "auto", "--trials", "3", "--format", "json"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert doc["config"]["seed"] == 0xC0FFEE and doc["config"]["trials"] == 3
    assert capsys.readouterr().out == ""


def test_text_output(capsys):
    code, out, _ = run(capsys, "osc-dim", "--variety", "spinor-min", "--n", "4")
    assert code == 0 and out.splitlines()[0].split()[0] == "agree" and out.rstrip().endswith("ok: True")


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "isogeo", "osc-dim", "--variety", "spinor-min", "--n", "3",
                          "--format", "json"], capture_output=True, text=True, env={"ISOGEO_CACHE_DIR": "",
                                                                                    "PATH": ""})
    assert res.returncode == 0
    assert json.loads(res.stdout)["ok"]
