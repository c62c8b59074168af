import json

import pytest

from scr.homology_engine import main


@pytest.fixture(autouse=True)
def _workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    for name in ("QAH_FORMAT", "QAH_MAX_DEGREE", "QAH_RESOURCE_CAP", "QAH_LOG_LEVEL"):
        monkeypatch.delenv(name, raising=False)


def test_compute_prints_json(write_task, l1_task, capsys):
    assert main(["compute", write_task(l1_task), "--quiet"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["operation"] == "l1"
    assert [r["oracle_dim"] for r in report["results"]["degrees"]] == [1, 1, 1]


def test_compute_text_format(write_task, l1_task, capsys):
    assert main(["compute", write_task(l1_task), "--format", "text", "--quiet"]) == 0
    assert "[results.degrees]" in capsys.readouterr().out


def test_output_file(tmp_path, write_task, l1_task):
    target = tmp_path / "reports" / "l1.json"
    assert main(["compute", write_task(l1_task), "--output", str(target), "--quiet"]) == 0
    assert json.loads(target.read_text(encoding="utf-8"))["field"] == "F_2"


def test_duality_command_overrides_operation(write_task, l1_task, capsys):
    assert main(["duality", write_task(l1_task), "--quiet"]) == 0
    assert json.loads(capsys.readouterr().out)["operation"] == "duality"


def test_malformed_file_exit_code(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text('{"field": "Q",', encoding="utf-8")
    assert main(["compute", str(path), "--quiet"]) == 2
    assert "line 1, column" in capsys.readouterr().err


def test_missing_file_exit_code(tmp_path):
    assert main(["compute", str(tmp_path / "absent.json"), "--quiet"]) == 2


def test_max_degree_exit_code(write_task, l1_task):
    l1_task["task"]["degrees"] = [0, 3]
    assert main(["compute", write_task(l1_task), "--max-degree", "2", "--quiet"]) == 3


def test_resource_cap_exit_code(write_task, l1_task):
    assert main(["compute", write_task(l1_task), "--resource-cap", "4", "--quiet"]) == 3


def test_env_sets_default_format(write_task, l1_task, capsys, monkeypatch):
    monkeypatch.setenv("QAH_FORMAT", "text")
    assert main(["compute", write_task(l1_task), "--quiet"]) == 0
    assert "operation: l1" in capsys.readouterr().out


def test_check_laws(capsys):
    assert main(["check-laws", "--suite", "linalg", "--cases", "3", "--seed", "1", "--quiet"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["results"]["passed"]
    assert report["results"]["cases"] == 3


def test_check_laws_unknown_suite():
    assert main(["check-laws", "--suite", "nope", "--cases", "1", "--quiet"]) == 2


def test_export_flag_writes_report(tmp_path, write_task, l1_task):
    assert main(["compute", write_task(l1_task), "--export", "--quiet"]) == 0
    assert list((tmp_path / "res" / "reports").glob("l1_*.json"))
