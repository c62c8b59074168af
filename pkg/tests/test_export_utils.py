import json
import os

import pytest

from lib.common.export_utils import export_report, export_witness, render, render_json, render_text
from lib.common.utils import input_digest, load_env_defaults, report_name, slug

REPORT = {
    "tool_version": "0.1.0",
    "operation": "l1",
    "field": "F_2",
    "input_digest": "ab" * 32,
    "results": {
        "degrees": [
            {"degree": 0, "invariants": {"w": 0, "h_null": 0, "h_quot": 1}, "oracle_dim": 1},
            {"degree": 1, "invariants": {"w": 0, "h_null": 0, "h_quot": 1}, "oracle_dim": 1},
        ],
        "coinvariants": {"dim": 1, "null_dim": 0},
    },
    "timing": {"seconds": 0.01},
}


def test_json_is_canonical():
    text = render_json(REPORT)
    assert text.endswith("\n")
    assert json.loads(text) == REPORT
    assert render_json(dict(reversed(list(REPORT.items())))) == text


def test_text_has_scalars_and_tables():
    text = render_text(REPORT)
    assert "operation: l1" in text
    assert "results.coinvariants.dim: 1" in text
    assert "[results.degrees]" in text
    assert "invariants.h_quot" in text


def test_unknown_format():
    with pytest.raises(ValueError):
        render(REPORT, "yaml")


def test_export_report_creates_directories(tmp_path):
    path = export_report(REPORT, "text", str(tmp_path / "out" / "report.txt"))
    assert path.read_text(encoding="utf-8") == render_text(REPORT)


def test_export_witness(tmp_path):
    task = {"field": "Q", "task": {"operation": "law_case", "suite": "linalg", "seed": 0, "case": 3}}
    path = export_witness(task, str(tmp_path), "linalg_seed0_case3")
    assert path.name == "linalg_seed0_case3.json"
    assert json.loads(path.read_text(encoding="utf-8")) == task


def test_input_digest_is_canonical():
    assert input_digest({"a": 1, "b": [1, 2]}) == input_digest('{"b": [1, 2],\n "a": 1}')
    assert input_digest({"a": 1}) != input_digest({"a": 2})


def test_report_name():
    assert slug("Check-Laws run") == "check_laws_run"
    assert report_name("check-laws", "0123456789abcdef") == "check_laws_01234567"


def test_env_defaults(tmp_path, monkeypatch):
    env = {k: v for k, v in os.environ.items() if not k.startswith("QAH_")}
    monkeypatch.setattr(os, "environ", env)
    dotenv = tmp_path / ".env"
    dotenv.write_text("QAH_MAX_DEGREE=5\nQAH_RESOURCE_CAP=lots\nQAH_FORMAT=text\n", encoding="utf-8")
    settings = load_env_defaults(dotenv)
    assert settings["max_degree"] == 5
    assert settings["resource_cap"] == 100_000
    assert settings["format"] == "text"
    assert settings["log_level"] == "INFO"
