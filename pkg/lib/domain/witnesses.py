"""Failing law cases as standalone task files, and their shrinking.

A case is exported with every object it was checked on, so the file validates through
the task loader on its own and ``compute`` re-runs the checks on exactly that data.
Before export the document is shrunk: null subspaces are dropped, dimensions lowered
and matrix entries zeroed, keeping each edit under which the same check still fails.
"""

import copy
import logging
from dataclasses import dataclass, field as dc_field
from typing import Callable, Iterator

from conf.config import WITNESS_SHRINK_ATTEMPTS
from lib.common.linalg import FieldSpec
from lib.common.task_loader import TaskFile
from lib.domain.complexes import ChainMap, SnComplex
from lib.domain.groups import FiniteGroup, GMap, GPairModule
from lib.domain.sn_category import PairMap, PairSpace

logger = logging.getLogger(__name__)


@dataclass
class CaseData:
    """The objects one law case is checked on, keyed the way a task file names them."""

    field: FieldSpec
    group: FiniteGroup | None = None
    spaces: dict[str, PairSpace] = dc_field(default_factory=dict)
    maps: dict[str, PairMap] = dc_field(default_factory=dict)
    complexes: dict[str, SnComplex] = dc_field(default_factory=dict)
    chain_maps: dict[str, ChainMap] = dc_field(default_factory=dict)
    modules: dict[str, GPairModule] = dc_field(default_factory=dict)
    gmaps: dict[str, GMap] = dc_field(default_factory=dict)
    params: dict[str, int] = dc_field(default_factory=dict)

    @classmethod
    def from_task(cls, task: TaskFile) -> "CaseData":
        return cls(task.field, task.group, dict(task.spaces), dict(task.maps), dict(task.complexes),
                   dict(task.chain_maps), dict(task.modules), dict(task.gmaps), dict(task.task.params or {}))

    def to_task(self, suite: str, seed: int, index: int) -> dict:
        """Task document holding every object by value.

        Endpoints of maps that are not named objects themselves get entries of their own
        (``"f.domain"``, ``"i.target"``, ...).
        """
        spaces, complexes, modules = dict(self.spaces), dict(self.complexes), dict(self.modules)

        def name_of(table: dict, obj, fallback: str) -> str:
            for name, known in table.items():
                if known == obj:
                    return name
            table[fallback] = obj
            return fallback

        maps = {name: {"domain": name_of(spaces, f.domain, f"{name}.domain"),
                       "codomain": name_of(spaces, f.codomain, f"{name}.codomain"),
                       "matrix": f.matrix.to_json()}
                for name, f in self.maps.items()}
        chain_maps = {name: {"source": name_of(complexes, f.source, f"{name}.source"),
                             "target": name_of(complexes, f.target, f"{name}.target"),
                             "components": {str(n): f.component(n).matrix.to_json() for n in f.degrees}}
                      for name, f in self.chain_maps.items()}
        gmaps = {name: {"source": name_of(modules, f.source, f"{name}.source"),
                        "target": name_of(modules, f.target, f"{name}.target"),
                        "matrix": f.matrix.to_json()}
                 for name, f in self.gmaps.items()}

        doc: dict = {"field": self.field.name}
        if self.group is not None:
            doc["group"] = self.group.to_json()
        doc.update({
            "spaces": {name: a.to_json() for name, a in spaces.items()},
            "maps": maps,
            "complexes": {name: c.to_json() for name, c in complexes.items()},
            "chain_maps": chain_maps,
            "modules": {name: m.to_json() for name, m in modules.items()},
            "gmaps": gmaps,
            "task": {"operation": "law_case", "suite": suite, "seed": seed, "case": index,
                     "params": dict(self.params)},
        })
        return doc


# -- shrinking -------------------------------------------------------------------

def _is_zero_entry(x) -> bool:
    return str(x).strip() in ("0", "-0", "0/1")


def _drop_row(matrix: list, i: int) -> list:
    return matrix[:i] + matrix[i + 1:]


def _drop_col(matrix: list, j: int) -> list:
    return [row[:j] + row[j + 1:] for row in matrix]


def _without_null_rows(doc: dict) -> Iterator[dict]:
    holders = [("spaces", name, None) for name in doc.get("spaces", {})]
    holders += [("complexes", name, n) for name, c in doc.get("complexes", {}).items() for n in c["objects"]]
    holders += [("modules", name, None) for name in doc.get("modules", {})]
    for table, name, n in holders:
        entry = doc[table][name] if n is None else doc[table][name]["objects"][n]
        if not isinstance(entry, dict):
            continue
        for r in range(len(entry.get("null", []))):
            out = copy.deepcopy(doc)
            target = out[table][name] if n is None else out[table][name]["objects"][n]
            target["null"] = _drop_row(target["null"], r)
            yield out


def _lower_space(doc: dict, name: str, k: int) -> dict:
    """Drops coordinate k of a named space and the matching row or column of every map at it."""
    out = copy.deepcopy(doc)
    space = out["spaces"][name]
    space["dim"] -= 1
    space["null"] = _drop_col(space.get("null", []), k)
    for f in out.get("maps", {}).values():
        if f["domain"] == name:
            f["matrix"] = _drop_col(f["matrix"], k)
        if f["codomain"] == name:
            f["matrix"] = _drop_row(f["matrix"], k)
    return out


def _lower_complex(doc: dict, name: str, n: str, k: int) -> dict:
    out = copy.deepcopy(doc)
    cx = out["complexes"][name]
    obj = cx["objects"][n]
    obj["dim"] -= 1
    obj["null"] = _drop_col(obj.get("null", []), k)
    d, below = cx.get("differentials", {}), str(int(n) - 1)
    if n in d:
        d[n] = _drop_col(d[n], k)
    if below in d:
        d[below] = _drop_row(d[below], k)
    for f in out.get("chain_maps", {}).values():
        if n not in f["components"]:
            continue
        if f["source"] == name:
            f["components"][n] = _drop_col(f["components"][n], k)
        if f["target"] == name:
            f["components"][n] = _drop_row(f["components"][n], k)
    return out


def _lower_module(doc: dict, name: str, k: int) -> dict:
    out = copy.deepcopy(doc)
    m = out["modules"][name]
    m["dim"] -= 1
    m["null"] = _drop_col(m.get("null", []), k)
    m["action"] = {g: _drop_col(_drop_row(a, k), k) for g, a in m.get("action", {}).items()}
    for f in out.get("gmaps", {}).values():
        if f["source"] == name:
            f["matrix"] = _drop_col(f["matrix"], k)
        if f["target"] == name:
            f["matrix"] = _drop_row(f["matrix"], k)
    return out


def _lower_dimensions(doc: dict) -> Iterator[dict]:
    for name, space in doc.get("spaces", {}).items():
        for k in range(space["dim"]):
            yield _lower_space(doc, name, k)
    for name, cx in doc.get("complexes", {}).items():
        for n, obj in cx["objects"].items():
            if isinstance(obj, dict):
                for k in range(obj["dim"]):
                    yield _lower_complex(doc, name, n, k)
    for name, m in doc.get("modules", {}).items():
        for k in range(m["dim"]):
            yield _lower_module(doc, name, k)


def _matrix_slots(doc: dict) -> Iterator[tuple]:
    """Paths to every non-action matrix of the document."""
    for name in doc.get("maps", {}):
        yield "maps", name, "matrix"
    for name, c in doc.get("complexes", {}).items():
        for n in c.get("differentials", {}):
            yield "complexes", name, "differentials", n
    for name, f in doc.get("chain_maps", {}).items():
        for n in f["components"]:
            yield "chain_maps", name, "components", n
    for name in doc.get("gmaps", {}):
        yield "gmaps", name, "matrix"


def _lookup(doc: dict, path: tuple):
    for key in path:
        doc = doc[key]
    return doc


def _zero_entries(doc: dict) -> Iterator[dict]:
    for path in _matrix_slots(doc):
        matrix = _lookup(doc, path)
        for i, row in enumerate(matrix):
            for j, x in enumerate(row):
                if _is_zero_entry(x):
                    continue
                out = copy.deepcopy(doc)
                _lookup(out, path)[i][j] = "0"
                yield out


def candidate_edits(doc: dict) -> Iterator[dict]:
    """Smaller variants of a task document; some may no longer validate."""
    yield from _without_null_rows(doc)
    yield from _lower_dimensions(doc)
    yield from _zero_entries(doc)


def shrink(doc: dict, still_fails: Callable[[dict], bool], attempts: int = WITNESS_SHRINK_ATTEMPTS) -> dict:
    """
    Greedy shrinking of a failing task document.

    :param doc: The exported task document of a failing case.
    :param still_fails: True iff a candidate document validates and shows the same failure.
    :param attempts: Budget of candidate documents to evaluate.
    :return: The smallest document reached; ``doc`` itself when no edit keeps the failure.
    """
    current, tried, accepted = doc, 0, 0
    improved = True
    while improved and tried < attempts:
        improved = False
        for candidate in candidate_edits(current):
            if tried >= attempts:
                break
            tried += 1
            if still_fails(candidate):
                current, improved = candidate, True
                accepted += 1
                break
    logger.info(f"Shrinking kept {accepted} of {tried} candidate edits")
    return current
