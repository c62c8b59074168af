import json
import random

import pytest

from lib.common.errors import UnknownSuite
from lib.common.linalg import Matrix
from lib.common.task_loader import load_task, load_task_from_text
from lib.domain import laws
from lib.domain.laws import LawSuite, SUITES, draw_case, run_case, run_suite, search_hausdorff_failure, witness_task
from lib.domain.sn_category import PairMap, PairSpace
from lib.domain.tasks import run_task
from lib.domain.witnesses import CaseData


@pytest.mark.parametrize("suite", sorted(SUITES))
def test_suites_pass_on_small_runs(suite):
    report = run_suite(suite, seed=11, cases=2, progress=False)
    assert report["passed"], report["failures"]
    assert report["checks_run"] > 0


def test_empty_run_passes():
    report = run_suite("category", seed=0, cases=0, progress=False)
    assert report == {"suite": "category", "seed": 0, "cases": 0, "passed": True, "checks_run": 0, "failures": []}


def test_unknown_suite():
    with pytest.raises(UnknownSuite):
        run_suite("topology", seed=0, cases=1, progress=False)
    with pytest.raises(UnknownSuite):
        run_case("topology", 0, 0)


def test_cases_replay_deterministically():
    assert run_case("ladder", 5, 3) == run_case("ladder", 5, 3)


def test_workers_give_the_same_report():
    single = run_suite("linalg", seed=2, cases=4, progress=False)
    pooled = run_suite("linalg", seed=2, cases=4, workers=2, progress=False)
    assert single == pooled


def test_witness_task_replays():
    task = witness_task("category", 4, 2)
    assert task["task"]["params"] == {}
    assert "f" in task["maps"]
    report = run_task(load_task_from_text(json.dumps(task)))
    assert report["results"] == run_case("category", 4, 2)


def test_witness_task_keeps_prime_field():
    task = witness_task("delta", 1, 0)
    assert load_task_from_text(json.dumps(task)).field == draw_case("delta", 1, 0).field


def test_failing_case_is_exported_shrunk_and_reproduces(monkeypatch, tmp_path, q):
    a = PairSpace.from_json(q, {"dim": 3, "null": [["1", "0", "0"]]})
    b = PairSpace.from_json(q, {"dim": 2, "null": [["1", "0"]]})
    f = PairMap(a, b, Matrix.from_rows(q, [[1, 2, 3], [0, 4, 5]]))
    monkeypatch.setitem(laws.SUITES, "duality", LawSuite(lambda rng: CaseData(q, maps={"f": f}),
                                                         lambda case, rng: {"map_is_zero": case.maps["f"].matrix.is_zero()}))

    report = run_suite("duality", seed=3, cases=2, export_dir=str(tmp_path), progress=False)
    assert not report["passed"]
    files = sorted(tmp_path.glob("*.json"))
    assert [p.name for p in files] == ["duality_seed3_case0.json", "duality_seed3_case1.json"]

    for path in files:
        task = load_task(str(path))
        assert run_task(task)["results"]["failing"] == ["map_is_zero"]
        shrunk = task.maps["f"]
        assert sum(1 for row in shrunk.matrix.to_json() for x in row if x != "0") == 1
        assert shrunk.domain.null_dim == 0 and shrunk.codomain.null_dim == 0
        assert shrunk.domain.dim <= 2


def test_hausdorff_failure_search_reports_a_real_failure():
    found = search_hausdorff_failure(seed=0, attempts=40)
    if found is not None:
        assert found["heart_exact"]
        assert not found["hausdorff_exact"]
        assert found["side"] in ("left", "right")


@pytest.mark.parametrize("suite, prefix", [("delta", "vanishing_"), ("group-duality", "degree_"), ("comparison", "q_iso_")])
def test_klein_group_cases_reach_degree_three(monkeypatch, klein, f2, suite, prefix):
    monkeypatch.setattr(laws, "random_group", lambda rng: (klein, f2))
    suite_def = SUITES[suite]
    case = suite_def.draw(random.Random(f"klein:{suite}"))
    checks = suite_def.check(case, random.Random("checks"))
    assert case.field == f2 and case.group == klein
    assert f"{prefix}3" in checks
    assert all(checks.values()), [name for name, ok in checks.items() if not ok]
