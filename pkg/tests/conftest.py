import json

import pytest

from lib.common.linalg import FieldSpec, Matrix
from lib.domain.complexes import SnComplex
from lib.domain.groups import FiniteGroup
from lib.domain.sn_category import PairMap, PairSpace


@pytest.fixture
def q():
    return FieldSpec.rationals()


@pytest.fixture
def f2():
    return FieldSpec.prime(2)


@pytest.fixture
def f3():
    return FieldSpec.prime(3)


@pytest.fixture
def z2():
    return FiniteGroup.named("Z2")


@pytest.fixture
def klein():
    return FiniteGroup.named("Z2xZ2")


@pytest.fixture
def singular_complex(q):
    """(F,0) → (F,F) in degrees -1, 0: the dense non-closed inclusion."""
    return SnComplex(-1, (PairSpace.hausdorff(q, 1), PairSpace.indiscrete(q, 1)),
                     (PairMap(PairSpace.hausdorff(q, 1), PairSpace.indiscrete(q, 1), Matrix.identity(q, 1)),))


@pytest.fixture
def write_task(tmp_path):
    """Writes a task dict to a JSON file and returns its path as a string."""

    def _write(task: dict, name: str = "task.json") -> str:
        path = tmp_path / name
        path.write_text(json.dumps(task), encoding="utf-8")
        return str(path)

    return _write


@pytest.fixture
def l1_task():
    return {
        "field": "F2",
        "group": "Z2",
        "modules": {"M": {"dim": 1, "action": {"1": [["1"]]}}},
        "task": {"operation": "l1", "module": "M", "degrees": [0, 2]},
    }


@pytest.fixture
def singular_task():
    return {
        "field": "Q",
        "spaces": {"H": {"dim": 1}, "I": {"dim": 1, "null": [["1"]]}},
        "complexes": {"S": {"degrees": [-1, 0], "objects": {"-1": "H", "0": "I"}, "differentials": {"-1": [["1"]]}}},
        "task": {"operation": "homology", "complex": "S"},
    }
