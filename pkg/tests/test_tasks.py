import json

import pytest

from conf.config import TOOL_VERSION
from lib.common.errors import ResourceLimit, TaskValidationError
from lib.common.task_loader import load_task_from_text
from lib.domain.tasks import run_task


def _run(data: dict, **kwargs) -> dict:
    return run_task(load_task_from_text(json.dumps(data)), **kwargs)


def test_report_envelope(l1_task):
    report = _run(l1_task)
    assert report["tool_version"] == TOOL_VERSION
    assert report["operation"] == "l1"
    assert report["field"] == "F_2"
    assert len(report["input_digest"]) == 64
    assert "seconds" in report["timing"]


def test_l1_results(l1_task):
    rows = _run(l1_task)["results"]["degrees"]
    assert [r["degree"] for r in rows] == [0, 1, 2]
    assert all(r["oracle_dim"] == 1 for r in rows)
    assert all(r["invariants"] == {"w": 0, "h_null": 0, "h_quot": 1} for r in rows)


def test_digest_ignores_key_order(l1_task):
    reordered = dict(reversed(list(l1_task.items())))
    assert _run(l1_task)["input_digest"] == _run(reordered)["input_digest"]


def test_reports_are_deterministic(l1_task):
    first, second = _run(l1_task), _run(l1_task)
    first.pop("timing")
    second.pop("timing")
    assert first == second


def test_degree_window_above_max_degree(l1_task):
    l1_task["task"]["degrees"] = [0, 5]
    with pytest.raises(ResourceLimit):
        _run(l1_task, max_degree=3)


def test_inverted_degree_window(l1_task):
    l1_task["task"]["degrees"] = [2, 1]
    with pytest.raises(TaskValidationError):
        _run(l1_task)


def test_resource_cap_applies(l1_task):
    with pytest.raises(ResourceLimit):
        _run(l1_task, cap=4)


def test_homology_task(singular_task):
    rows = {r["degree"]: r for r in _run(singular_task)["results"]["degrees"]}
    assert rows[0]["left"] == {"w": 1, "h_null": 0, "h_quot": 0}
    assert rows[0]["realized"] == {"top": 1, "bottom": 0}
    assert rows[-1]["right"] == {"w": 1, "h_null": 0, "h_quot": 0}
    assert all(r["q_iso"] for r in rows.values())


def test_truncate_task(singular_task):
    singular_task["task"].update({"operation": "truncate", "side": "left", "bound": "ge", "n": 0})
    result = _run(singular_task)["results"]
    assert result["left"][-1] == {"degree": 0, "w": 1, "h_null": 0, "h_quot": 0}


def test_truncate_needs_side(singular_task):
    singular_task["task"]["operation"] = "truncate"
    with pytest.raises(TaskValidationError):
        _run(singular_task)


def test_bounded_and_classical_tasks(l1_task):
    l1_task["task"]["operation"] = "bounded"
    result = _run(l1_task)["results"]
    assert [r["invariants"]["h_quot"] for r in result["degrees"]] == [1, 1, 1]
    assert result["invariants"] == {"dim": 1, "null_dim": 0}

    l1_task["task"]["operation"] = "classical"
    assert all(r["q_iso"] for r in _run(l1_task)["results"]["degrees"])


def test_duality_task(l1_task):
    l1_task["task"]["operation"] = "duality"
    result = _run(l1_task)["results"]
    assert len(result["degrees"]) == 3
    assert result["induced_dual_is_coinduced"]


def test_bar_task(l1_task):
    l1_task["task"].update({"operation": "bar", "top": 3})
    result = _run(l1_task)["results"]
    assert result["dims"] == [2, 4, 8, 16]
    assert result["homotopy"] and result["simplicial"]
    assert all(result["coinvariants_agree"]) and all(result["invariants_agree"])
    assert result["bot_projective"] is False


def test_adjunctions_task(l1_task):
    l1_task["task"]["operation"] = "adjunctions"
    result = _run(l1_task)["results"]
    assert all(result["triangles"].values())
    assert result["trivial_tensor_is_coinvariants"]
    assert result["trivial_hom_is_invariants"]


def test_les_task_with_equivariant_maps():
    data = {
        "field": "Q",
        "group": "Z2",
        "modules": {
            "I": {"dim": 1, "action": {"1": [["-1"]]}},
            "R": {"dim": 2, "action": {"1": [["0", "1"], ["1", "0"]]}},
            "T": {"dim": 1, "action": {"1": [["1"]]}},
        },
        "gmaps": {
            "i": {"source": "I", "target": "R", "matrix": [["1"], ["-1"]]},
            "p": {"source": "R", "target": "T", "matrix": [["1", "1"]]},
        },
        "task": {"operation": "les", "inclusion": "i", "projection": "p", "top": 2},
    }
    result = _run(data)["results"]
    assert result["left_exact"] and result["right_exact"]
    assert set(result["homology"]) == {"sub", "middle", "quotient"}


def test_les_task_needs_maps(singular_task):
    singular_task["task"]["operation"] = "les"
    with pytest.raises(TaskValidationError):
        _run(singular_task)


def test_law_case_task():
    data = {"field": "Q", "task": {"operation": "law_case", "suite": "linalg", "seed": 3, "case": 1}}
    result = _run(data)["results"]
    assert result["case"] == 1
    assert result["passed"]
