import json

import pytest

from vectdef.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main
from vectdef.report import Task, document, filter_shifts, run_task, run_tasks, table1_tasks


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_table1_passes(capsys):
    code, out, _ = run(capsys, "verify-table1")
    doc = json.loads(out)
    assert code == EXIT_OK
    assert doc["summary"]["failed"] == 0 and doc["summary"]["total"] == 11
    assert {"tool", "version", "catalogHash", "command", "externalAssumptions", "records"} <= set(doc)


def test_output_is_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["verify-table1", "--output", str(a)]) == EXIT_OK
    assert main(["verify-table1", "--output", str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_blocks_filter(capsys):
    code, out, _ = run(capsys, "verify-conditions", "--blocks", "k=2,k=3")
    doc = json.loads(out)
    assert code == EXIT_OK
    assert {r["shift"] for r in doc["records"]} == {2, 3}


def test_failing_checks_exit_one(capsys):
    code, out, _ = run(capsys, "verify-2cocycles", "--blocks", "k=1")
    doc = json.loads(out)
    assert code == EXIT_FAIL
    failed = [r["id"] for r in doc["records"] if r["status"] == "fail"]
    assert failed == ["identity:[[Ctilde01,C00]] = Omega01"]


def test_assumption_flag_changes_wording(capsys):
    _, with_assumption, _ = run(capsys, "verify-table1", "--blocks", "k=0")
    _, without, _ = run(capsys, "verify-table1", "--blocks", "k=0", "--no-assume-dimensions")
    a, b = json.loads(with_assumption), json.loads(without)
    assert a["externalAssumptions"] and not b["externalAssumptions"]
    assert a["records"][0]["nontriviality"] != b["records"][0]["nontriviality"]


def test_text_format(capsys):
    code, out, _ = run(capsys, "verify-table1", "--blocks", "k=0", "--format", "text")
    assert code == EXIT_OK and "PASS" in out and "passed" in out


def test_derive_conditions_s33(capsys):
    code, out, _ = run(capsys, "derive-conditions", "--space", "n=3,delta=3", "--exclude", "t[1,3]")
    doc = json.loads(out)
    assert code == EXIT_OK
    assert len(doc["report"]["idealGenerators"]) == 3
    assert any("ttilde[0,1]" in g for g in doc["report"]["idealGenerators"])


def test_analyze_s45_reports_termination(capsys):
    code, out, _ = run(capsys, "analyze", "--space", "n=4,delta=5", "--order", "4", "--printed-witnesses")
    doc = json.loads(out)
    assert code == EXIT_OK
    assert doc["report"]["terminated"] and doc["report"]["polynomialDegree"] == 3
    valid = [f["factor"] for f in doc["secondOrderFactors"] if f["valid"]]
    assert valid == ["-1"]


def test_check_bad_point(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"t[1,1]": "1", "t[3,3]": "0", "t[1,3]": "1"}))
    code, out, _ = run(capsys, "check", "--space", "n=2,delta=3", "--params", str(bad))
    doc = json.loads(out)
    assert code == EXIT_FAIL
    assert doc["check"]["concreteFailures"][0]["block"] == "(1,3)"
    good = tmp_path / "good.json"
    good.write_text(json.dumps({"t[1,1]": "2", "t[3,3]": "2", "t[1,3]": "5"}))
    assert run(capsys, "check", "--space", "n=2,delta=3", "--params", str(good))[0] == EXIT_OK


def test_export(capsys):
    code, out, _ = run(capsys, "export", "Omega[0,1]")
    assert code == EXIT_OK and json.loads(out)["key"] == "Omega[0,1]"


@pytest.mark.parametrize("argv", [
    ["export", "Nope[0,1]"],
    ["derive-conditions", "--space", "n=2"],
    ["verify-table1", "--blocks", "x=3"],
    ["check", "--space", "n=2,delta=3", "--params", "/nonexistent.json"],
    ["frobnicate"],
    ["derive-conditions", "--space", "n=2,delta=3", "--exclude", "q[1]"],
])
def test_usage_errors_exit_two(capsys, argv):
    assert run(capsys, *argv)[0] == EXIT_USAGE


def test_check_rejects_unknown_parameters(capsys, tmp_path):
    p = tmp_path / "p.json"
    p.write_text(json.dumps({"t[0,9]": 1}))
    assert run(capsys, "check", "--space", "n=2,delta=3", "--params", str(p))[0] == EXIT_USAGE


def test_parallel_and_serial_runs_agree():
    tasks = filter_shifts(table1_tasks(), {0, 2})
    assert run_tasks(tasks, workers=1) == run_tasks(tasks, workers=2)
    assert [run_task(t) for t in tasks] == run_tasks(tasks, workers=1)


def test_document_summary():
    doc = document("x", [{"status": "pass"}, {"status": "fail"}])
    assert doc["summary"] == {"passed": 1, "failed": 1, "total": 2}
    assert run_task(Task("table1", "table1", 0, ("C[l,l]",)))["status"] == "pass"
