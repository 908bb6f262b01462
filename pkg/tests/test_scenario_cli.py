"""Scenario files, builtins, CLI exit codes, report determinism."""

import json
import subprocess
import sys

import pytest

from gcverify.errors import ScenarioError
from gcverify.scenario import (
    SUITES,
    builtin_catalog,
    builtin_names,
    load_builtin,
    run_scenario,
    scenario_from_document,
)


def run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "gcverify", *args],
        capture_output=True,
        text=True,
        check=False,
    )


def minimal_doc(**overrides):
    doc = {
        "version": 1,
        "name": "probe",
        "chart": {"dim": 2, "coordinates": ["x1", "x2"]},
        "structure": {"pure_spinor": "1 + i*e[dx1^dx2]"},
        "h_form": "0",
        "suites": ["modular-prop"],
        "max_degree": 2,
    }
    doc.update(overrides)
    return doc


def test_catalog_contents():
    names = builtin_names()
    assert len(names) >= 5
    assert "broken-jacobi" in names
    assert {n for n, _ in builtin_catalog()} == set(names)


def test_builtin_documents_validate():
    for name in builtin_names():
        scenario = load_builtin(name)
        assert scenario.name == name


def test_scenario_round_trip():
    scenario = scenario_from_document(minimal_doc())
    again = scenario_from_document(json.loads(scenario.canonical_json()))
    assert again.canonical_json() == scenario.canonical_json()


def test_rejects_unknown_suite():
    with pytest.raises(ScenarioError):
        scenario_from_document(minimal_doc(suites=["nonsense"]))


def test_rejects_bad_version():
    with pytest.raises(ScenarioError):
        scenario_from_document(minimal_doc(version=99))


def test_rejects_nonclosed_twist():
    doc = minimal_doc(
        chart={"dim": 4, "coordinates": ["x1", "x2", "x3", "x4"]},
        structure=None,
        suites=["courant-axioms"],
        h_form="x1*e[dx2^dx3^dx4]",
    )
    with pytest.raises(ScenarioError) as err:
        scenario_from_document(doc)
    assert "NotClosed" in str(err.value)


def test_rejects_odd_chart_for_structure_suites():
    doc = minimal_doc(
        chart={"dim": 3, "coordinates": ["x1", "x2", "x3"]},
        structure={"pure_spinor": "1"},
    )
    with pytest.raises(ScenarioError):
        scenario_from_document(doc)


def test_rejects_structureless_gcs_suite():
    with pytest.raises(ScenarioError):
        scenario_from_document(minimal_doc(structure=None))


def test_report_determinism():
    scenario = load_builtin("symplectic-r2")
    scenario.suites = ("modular-prop", "module-structures")
    a = run_scenario(scenario).to_json()
    b = run_scenario(scenario).to_json()
    assert a == b
    ta = run_scenario(scenario).to_text()
    tb = run_scenario(scenario).to_text()
    assert ta == tb


def test_json_and_text_statuses_agree():
    scenario = load_builtin("broken-jacobi")
    report = run_scenario(scenario)
    doc = json.loads(report.to_json())
    assert doc["status"] == ("pass" if report.passed else "fail")
    text = report.to_text()
    assert ("ALL CHECKS PASS" in text) == report.passed
    statuses = {c["name"]: c["status"] for c in doc["checks"]}
    assert statuses["axiom-1-jacobi"] == "fail"


# -- CLI process-level tests -------------------------------------------------------


def test_cli_list():
    proc = run_cli("list")
    assert proc.returncode == 0
    for name in builtin_names():
        assert name in proc.stdout


def test_cli_run_positive_exit_zero():
    proc = run_cli("run", "symplectic-r2", "--suite", "modular-prop")
    assert proc.returncode == 0, proc.stdout + proc.stderr
    assert "ALL CHECKS PASS" in proc.stdout


def test_cli_run_negative_control_exit_one():
    proc = run_cli("run", "broken-jacobi")
    assert proc.returncode == 1
    assert "axiom-1-jacobi" in proc.stdout
    assert "witness" in proc.stdout


def test_cli_run_json_format(tmp_path):
    out = tmp_path / "report.json"
    proc = run_cli(
        "run", "complex-r2", "--suite", "modular-prop", "--format", "json",
        "--out", str(out),
    )
    assert proc.returncode == 0
    doc = json.loads(out.read_text())
    assert doc["status"] == "pass"
    assert doc["conventions"]


def test_cli_invalid_scenario_exit_two(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json")
    proc = run_cli("run", str(bad))
    assert proc.returncode == 2
    assert "invalid" in proc.stderr.lower()

    nonclosed = tmp_path / "nonclosed.json"
    nonclosed.write_text(
        json.dumps(
            {
                "version": 1,
                "name": "bad-h",
                "chart": {"dim": 4, "coordinates": ["x1", "x2", "x3", "x4"]},
                "structure": None,
                "h_form": "x1*e[dx2^dx3^dx4]",
                "suites": ["courant-axioms"],
            }
        )
    )
    proc = run_cli("run", str(nonclosed))
    assert proc.returncode == 2
    assert "NotClosed" in proc.stderr

    proc = run_cli("run", "no-such-builtin")
    assert proc.returncode == 2


def test_cli_unknown_suite_exit_two():
    proc = run_cli("run", "symplectic-r2", "--suite", "bogus")
    assert proc.returncode == 2


def test_cli_validate_canonicalizes(tmp_path):
    doc = minimal_doc()
    del doc["max_degree"]
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(doc))
    proc = run_cli("validate", str(path))
    assert proc.returncode == 0
    parsed = json.loads(proc.stdout)
    assert parsed["max_degree"] == 2
    assert parsed["name"] == "probe"


def test_cli_file_scenario_with_j_matrix(tmp_path):
    j = [
        ["0", "0", "0", "-1"],
        ["0", "0", "1", "0"],
        ["0", "-1", "0", "0"],
        ["1", "0", "0", "0"],
    ]
    doc = {
        "version": 1,
        "name": "symplectic-by-matrix",
        "chart": {"dim": 2, "coordinates": ["x1", "x2"]},
        "structure": {"j_matrix": j},
        "h_form": "0",
        "suites": ["main-theorem", "modular-prop"],
        "max_degree": 2,
    }
    path = tmp_path / "jmat.json"
    path.write_text(json.dumps(doc))
    proc = run_cli("run", str(path))
    assert proc.returncode == 0, proc.stdout + proc.stderr
    assert "ALL CHECKS PASS" in proc.stdout


def test_suites_constant_is_complete():
    assert set(SUITES) == {
        "courant-axioms",
        "bialgebroid",
        "spinor-identities",
        "main-theorem",
        "modular-prop",
        "module-structures",
        "corollaries",
    }
