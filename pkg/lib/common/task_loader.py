"""Loads task files (JSON) and resolves them into domain objects.

A task file names its field, an optional group and any number of spaces, maps,
complexes, chain maps, modules and equivariant maps, followed by one task
descriptor. Example::

    {
      "field": "F2",
      "group": "Z2",
      "modules": {"M": {"dim": 1, "null": [], "action": {"1": [["1"]]}}},
      "task": {"operation": "l1", "module": "M", "degrees": [0, 3]}
    }

Every problem is reported as a ``TaskValidationError`` whose ``location`` is
either ``"line L, column C"`` (malformed JSON) or a dotted path into the file.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Any, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from lib.common.errors import EngineError, TaskValidationError
from lib.common.linalg import FieldSpec, Matrix

Scalar = Union[str, int]
MatrixData = list[list[Scalar]]

OPERATIONS = ("homology", "l1", "bounded", "duality", "les", "classical", "bar", "truncate", "adjunctions",
              "law_case")


class SpaceModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    dim: int = Field(ge=0)
    null: MatrixData = []


class MapModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    domain: str
    codomain: str
    matrix: MatrixData


class ComplexModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    degrees: tuple[int, int]
    objects: dict[str, Union[str, SpaceModel]]
    differentials: dict[str, MatrixData] = {}


class ChainMapModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    source: str
    target: str
    components: dict[str, MatrixData]


class ModuleModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    dim: int = Field(ge=0)
    null: MatrixData = []
    action: dict[str, MatrixData] = {}


class GMapModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    source: str
    target: str
    matrix: MatrixData


class TaskModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    operation: Literal[OPERATIONS]  # type: ignore[valid-type]
    complex: Optional[str] = None
    module: Optional[str] = None
    space: Optional[str] = None
    inclusion: Optional[str] = None
    projection: Optional[str] = None
    degrees: Optional[tuple[int, int]] = None
    top: Optional[int] = Field(default=None, ge=0)
    side: Optional[Literal["left", "right"]] = None
    bound: Optional[Literal["le", "ge"]] = None
    n: int = 0
    suite: Optional[str] = None
    seed: int = 0
    case: int = Field(default=0, ge=0)
    params: Optional[dict[str, int]] = None


class TaskFileModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    field: Union[str, dict[str, Any]]
    group: Optional[Union[str, dict[str, Any]]] = None
    spaces: dict[str, SpaceModel] = {}
    maps: dict[str, MapModel] = {}
    complexes: dict[str, ComplexModel] = {}
    chain_maps: dict[str, ChainMapModel] = {}
    modules: dict[str, ModuleModel] = {}
    gmaps: dict[str, GMapModel] = {}
    task: TaskModel


@dataclass
class TaskFile:
    """A validated task: resolved domain objects plus the raw descriptor and input."""

    field: FieldSpec
    task: TaskModel
    raw: dict
    group: Any = None
    spaces: dict = dc_field(default_factory=dict)
    maps: dict = dc_field(default_factory=dict)
    complexes: dict = dc_field(default_factory=dict)
    chain_maps: dict = dc_field(default_factory=dict)
    modules: dict = dc_field(default_factory=dict)
    gmaps: dict = dc_field(default_factory=dict)


def parse_field(spec: str | dict) -> FieldSpec:
    """``"Q"``, ``"F5"``, ``"F_5"``, ``"GF(5)"`` or ``{"kind": "prime", "p": 5}``."""
    if isinstance(spec, dict):
        return FieldSpec(spec.get("kind", "rationals"), spec.get("p"))
    key = spec.strip().upper().replace("_", "").replace("GF(", "F").rstrip(")")
    if key in ("Q", "QQ", "RATIONALS"):
        return FieldSpec.rationals()
    if key.startswith("F") and key[1:].isdigit():
        return FieldSpec.prime(int(key[1:]))
    raise ValueError(f"Unknown field: {spec!r}")


def _matrix(field: FieldSpec, data: MatrixData, rows: int, cols: int) -> Matrix:
    if not data:
        return Matrix.zeros(field, rows, cols)
    return Matrix.from_json(field, data, rows=rows, cols=cols)


def _pydantic_location(err: ValidationError) -> str:
    first = err.errors()[0]
    return ".".join(str(part) for part in first["loc"]) or "<root>"


def _resolve(model: TaskFileModel, raw: dict) -> TaskFile:
    # imported here so the loader stays importable without the domain layer
    from lib.domain.complexes import ChainMap, SnComplex
    from lib.domain.groups import FiniteGroup, GPairModule, gmap
    from lib.domain.sn_category import PairMap, PairSpace

    def located(location: str, build):
        try:
            return build()
        except TaskValidationError as exc:
            raise TaskValidationError(str(exc), exc.location or location) from exc
        except (EngineError, ValueError, KeyError) as exc:
            raise TaskValidationError(str(exc), location) from exc

    field = located("field", lambda: parse_field(model.field))
    tf = TaskFile(field=field, task=model.task, raw=raw)
    missing: list[str] = []

    def space_of(ref: Union[str, SpaceModel], location: str) -> PairSpace | None:
        if isinstance(ref, SpaceModel):
            return located(location, lambda: PairSpace.from_json(field, ref.model_dump()))
        if ref not in tf.spaces:
            missing.append(f"{location} → space {ref!r}")
            return None
        return tf.spaces[ref]

    for name, s in model.spaces.items():
        tf.spaces[name] = located(f"spaces.{name}", lambda s=s: PairSpace.from_json(field, s.model_dump()))

    for name, m in model.maps.items():
        dom, cod = space_of(m.domain, f"maps.{name}.domain"), space_of(m.codomain, f"maps.{name}.codomain")
        if dom is not None and cod is not None:
            tf.maps[name] = located(f"maps.{name}.matrix",
                                    lambda m=m, dom=dom, cod=cod: PairMap(dom, cod,
                                                                          _matrix(field, m.matrix, cod.dim, dom.dim)))

    for name, c in model.complexes.items():
        lo, hi = c.degrees
        objects = {}
        for n in range(lo, hi + 1):
            ref = c.objects.get(str(n))
            if ref is None:
                missing.append(f"complexes.{name}.objects.{n}")
                continue
            objects[n] = space_of(ref, f"complexes.{name}.objects.{n}")
        if len(objects) != hi - lo + 1 or any(o is None for o in objects.values()):
            continue

        def build(c=c, lo=lo, hi=hi, objects=objects):
            def diff(n: int) -> PairMap:
                data = c.differentials.get(str(n), [])
                return PairMap(objects[n], objects[n + 1], _matrix(field, data, objects[n + 1].dim, objects[n].dim))
            return SnComplex.build(lo, hi, objects.__getitem__, diff)

        tf.complexes[name] = located(f"complexes.{name}", build)

    for name, cm in model.chain_maps.items():
        src, tgt = tf.complexes.get(cm.source), tf.complexes.get(cm.target)
        if src is None or tgt is None:
            missing.append(f"chain_maps.{name} → complex {cm.source if src is None else cm.target!r}")
            continue
        tf.chain_maps[name] = located(
            f"chain_maps.{name}",
            lambda cm=cm, src=src, tgt=tgt: ChainMap.build(
                src, tgt, lambda n: _matrix(field, cm.components.get(str(n), []), tgt.obj(n).dim, src.obj(n).dim)))

    if model.group is not None:
        tf.group = located("group", lambda: FiniteGroup.from_json(model.group))
    if model.modules and tf.group is None:
        missing.append("modules → group")
    else:
        for name, mm in model.modules.items():
            tf.modules[name] = located(f"modules.{name}",
                                       lambda mm=mm: GPairModule.from_json(tf.group, field, mm.model_dump()))

    for name, gm in model.gmaps.items():
        src, tgt = tf.modules.get(gm.source), tf.modules.get(gm.target)
        if src is None or tgt is None:
            missing.append(f"gmaps.{name} → module {gm.source if src is None else gm.target!r}")
            continue
        tf.gmaps[name] = located(f"gmaps.{name}",
                                 lambda gm=gm, src=src, tgt=tgt: gmap(src, tgt,
                                                                      _matrix(field, gm.matrix, tgt.dim, src.dim)))

    t = model.task
    for attr, table in (("complex", tf.complexes), ("module", tf.modules), ("space", tf.spaces)):
        ref = getattr(t, attr)
        if ref is not None and ref not in table:
            missing.append(f"task.{attr} → {ref!r}")
    for attr in ("inclusion", "projection"):
        ref = getattr(t, attr)
        if ref is not None and ref not in tf.gmaps and ref not in tf.chain_maps:
            missing.append(f"task.{attr} → {ref!r}")

    if missing:
        logging.getLogger(__name__).error(f"Unresolved references: {missing}")
        raise TaskValidationError(f"Unresolved references: {', '.join(missing)}", missing[0].split(" ")[0])
    return tf


def load_task_from_text(text: str) -> TaskFile:
    """Parses and validates a task file given as a JSON string."""
    logger = logging.getLogger(__name__)
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        logger.error(f"Malformed JSON: {exc.msg} at line {exc.lineno}, column {exc.colno}")
        raise TaskValidationError(f"Malformed JSON: {exc.msg}", f"line {exc.lineno}, column {exc.colno}") from exc

    try:
        model = TaskFileModel.model_validate(raw)
    except ValidationError as exc:
        location = _pydantic_location(exc)
        logger.error(f"Task file failed validation at {location}: {exc.errors()[0]['msg']}")
        raise TaskValidationError(exc.errors()[0]["msg"], location) from exc

    task = _resolve(model, raw)
    logger.info(f"Loaded task '{model.task.operation}' over {task.field.name}")
    return task


def load_task(file_path: str) -> TaskFile:
    """
    Loads a task file from disk.

    :param file_path: Relative or absolute path to the JSON task file.
    :return: The validated TaskFile.
    """
    logger = logging.getLogger(__name__)
    abs_path = Path(file_path).resolve()

    if not abs_path.exists():
        logger.error(f"Task file not found: {abs_path}")
        raise FileNotFoundError(f"Task file not found: {abs_path}")

    return load_task_from_text(abs_path.read_text(encoding="utf-8"))
