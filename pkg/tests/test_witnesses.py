import json

from lib.common.errors import EngineError
from lib.common.task_loader import load_task_from_text
from lib.domain.laws import draw_case
from lib.domain.witnesses import CaseData, candidate_edits, shrink


def reload(doc: dict) -> CaseData:
    return CaseData.from_task(load_task_from_text(json.dumps(doc)))


def test_case_data_survives_a_task_file():
    case = draw_case("comparison", 5, 1)
    back = reload(case.to_task("comparison", 5, 1))
    assert back.field == case.field
    assert back.group == case.group
    assert back.modules["M"] == case.modules["M"]
    assert back.chain_maps["i"] == case.chain_maps["i"]
    assert back.chain_maps["p"] == case.chain_maps["p"]


def test_endpoints_get_their_own_entries():
    case = draw_case("category", 0, 0)
    doc = case.to_task("category", 0, 0)
    f = doc["maps"]["f"]
    assert doc["spaces"][f["domain"]]["dim"] == case.maps["f"].domain.dim
    assert doc["spaces"][f["codomain"]]["dim"] == case.maps["f"].codomain.dim
    assert doc["task"] == {"operation": "law_case", "suite": "category", "seed": 0, "case": 0, "params": {}}


def test_lowering_a_dimension_keeps_matrices_consistent():
    doc = {
        "field": "Q",
        "spaces": {"A": {"dim": 2, "null": []}, "B": {"dim": 2, "null": []}},
        "maps": {"f": {"domain": "A", "codomain": "B", "matrix": [["1", "2"], ["3", "4"]]}},
        "task": {"operation": "law_case", "suite": "category", "seed": 0, "case": 0, "params": {}},
    }
    for candidate in candidate_edits(doc):
        reload(candidate)


def test_shrink_keeps_the_failure_and_reaches_a_single_entry():
    doc = {
        "field": "Q",
        "spaces": {"A": {"dim": 3, "null": [["0", "0", "1"]]}, "B": {"dim": 2, "null": [["0", "1"]]}},
        "maps": {"f": {"domain": "A", "codomain": "B", "matrix": [["1", "2", "0"], ["5", "0", "7"]]}},
        "task": {"operation": "law_case", "suite": "category", "seed": 0, "case": 0, "params": {}},
    }

    def still_fails(candidate: dict) -> bool:
        try:
            f = reload(candidate).maps["f"]
        except EngineError:
            return False
        return not f.matrix.is_zero()

    small = shrink(doc, still_fails)
    f = reload(small).maps["f"]
    assert f.domain.dim == 1 and f.codomain.dim == 1
    assert not f.matrix.is_zero()
    assert small["spaces"]["A"]["null"] == [] and small["spaces"]["B"]["null"] == []


def test_shrink_returns_the_document_when_nothing_fails():
    doc = {"field": "Q", "spaces": {"A": {"dim": 1, "null": []}},
           "task": {"operation": "law_case", "suite": "linalg", "seed": 0, "case": 0, "params": {}}}
    assert shrink(doc, lambda candidate: False) == doc
