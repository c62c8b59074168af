"""Dispatch of task-file operations to the domain layer and assembly of reports."""

import logging
import time

from conf.config import DEFAULT_MAX_DEGREE, DEFAULT_RESOURCE_CAP, TOOL_VERSION
from lib.common.errors import ResourceLimit, TaskValidationError
from lib.common.task_loader import TaskFile
from lib.common.utils import input_digest
from lib.domain.complexes import a2_cohomology, embed_to_a2, truncate
from lib.domain.groups import (
    coinvariants,
    hom_G,
    invariants,
    tensor_over_G,
    trivial,
    verify_adjunctions,
)
from lib.domain.hearts import h_left, h_right, q_comparison
from lib.domain.long_exact import hausdorff_check, les_of_ses, right_hausdorff_check
from lib.domain.resolutions import (
    bar_resolution,
    bounded_cohomology,
    coinvariants_agreement,
    comparison_check,
    duality_check,
    invariants_agreement,
    is_bot_projective,
    l1_homology,
    les_coefficients,
    rank_oracle,
)
from lib.domain.sn_category import PairSpace, is_isomorphism

logger = logging.getLogger(__name__)


def _pair(a: PairSpace) -> dict:
    return {"dim": a.dim, "null_dim": a.null_dim}


def _degree_window(task: TaskFile, max_degree: int) -> range:
    """Degrees requested by the task, defaulting to 0..max_degree; nothing above max_degree is computed."""
    lo, hi = task.task.degrees if task.task.degrees is not None else (0, max_degree)
    if lo < 0 or hi < lo:
        raise TaskValidationError(f"Invalid degree window [{lo}, {hi}].", "task.degrees")
    if hi > max_degree:
        logger.error(f"Requested degree {hi} exceeds the configured maximum {max_degree}")
        raise ResourceLimit(f"Requested degree {hi} exceeds the configured maximum degree {max_degree}.")
    return range(lo, hi + 1)


def _require(task: TaskFile, attr: str):
    name = getattr(task.task, attr)
    if name is None:
        raise TaskValidationError(f"Operation '{task.task.operation}' needs '{attr}'.", f"task.{attr}")
    table = {"complex": task.complexes, "module": task.modules, "space": task.spaces}[attr]
    return table[name]


# -- operations ----------------------------------------------------------------

def _homology(task: TaskFile, max_degree: int, cap: int) -> dict:
    a = _require(task, "complex")
    if task.task.degrees is not None:
        lo, hi = task.task.degrees
    else:
        lo, hi = a.lo, a.hi
    rows = []
    for n in range(lo, hi + 1):
        left, right = h_left(a, n), h_right(a, n)
        realized = a2_cohomology(embed_to_a2(a), n)
        rows.append({
            "degree": n,
            "left": left.invariants().to_json(),
            "right": right.invariants().to_json(),
            "realized": {"top": realized.top, "bottom": realized.bottom},
            "q_iso": is_isomorphism(q_comparison(a, n)),
        })
    return {"degrees": rows}


def _l1(task: TaskFile, max_degree: int, cap: int) -> dict:
    m = _require(task, "module")
    rows = []
    for n in _degree_window(task, max_degree):
        h = l1_homology(m, n, cap)
        rows.append({"degree": n, "invariants": h.invariants().to_json(), "oracle_dim": rank_oracle(m, n)})
    coinv, _ = coinvariants(m)
    return {"degrees": rows, "coinvariants": _pair(coinv)}


def _bounded(task: TaskFile, max_degree: int, cap: int) -> dict:
    m = _require(task, "module")
    rows = [{"degree": n, "invariants": bounded_cohomology(m, n, cap).invariants().to_json()}
            for n in _degree_window(task, max_degree)]
    inv, _ = invariants(m)
    return {"degrees": rows, "invariants": _pair(inv)}


def _duality(task: TaskFile, max_degree: int, cap: int) -> dict:
    return duality_check(_require(task, "module"), _degree_window(task, max_degree), cap)


def _classical(task: TaskFile, max_degree: int, cap: int) -> dict:
    m = _require(task, "module")
    return {"degrees": [{"degree": n, **comparison_check(m, n, cap)} for n in _degree_window(task, max_degree)]}


def _les(task: TaskFile, max_degree: int, cap: int) -> dict:
    t = task.task
    if t.inclusion is None or t.projection is None:
        raise TaskValidationError("Operation 'les' needs 'inclusion' and 'projection'.", "task.inclusion")
    if t.inclusion in task.gmaps and t.projection in task.gmaps:
        top = t.top if t.top is not None else max_degree
        if top > max_degree:
            raise ResourceLimit(f"Requested degree {top} exceeds the configured maximum degree {max_degree}.")
        return les_coefficients(task.gmaps[t.inclusion], task.gmaps[t.projection], top + 1, cap)
    if t.inclusion in task.chain_maps and t.projection in task.chain_maps:
        les = les_of_ses(task.chain_maps[t.inclusion], task.chain_maps[t.projection])
        return {**les.to_json(), "hausdorff_left": hausdorff_check(les), "hausdorff_right": right_hausdorff_check(les)}
    raise TaskValidationError("'inclusion' and 'projection' must both be equivariant maps or both chain maps.",
                              "task.projection")


def _bar(task: TaskFile, max_degree: int, cap: int) -> dict:
    m = _require(task, "module")
    top = task.task.top if task.task.top is not None else max_degree
    if top > max_degree:
        raise ResourceLimit(f"Requested degree {top} exceeds the configured maximum degree {max_degree}.")
    bar = bar_resolution(m, top, cap)
    coinv, inv = coinvariants_agreement(m, top, cap), invariants_agreement(m, top, cap)
    return {
        "dims": [x.dim for x in bar.modules],
        "homotopy": bar.check_homotopy(),
        "simplicial": bar.check_simplicial(),
        "coinvariants_agree": [coinv[k] for k in range(top + 1)],
        "invariants_agree": [inv[k] for k in range(top + 1)],
        "bot_projective": is_bot_projective(m),
    }


def _truncate(task: TaskFile, max_degree: int, cap: int) -> dict:
    a = _require(task, "complex")
    t = task.task
    if t.side is None or t.bound is None:
        raise TaskValidationError("Operation 'truncate' needs 'side' and 'bound'.", "task.side")
    out = truncate(t.side, t.bound, a, t.n)
    return {"complex": out.to_json(),
            "left": [{"degree": n, **h_left(out, n).invariants().to_json()} for n in out.degrees],
            "right": [{"degree": n, **h_right(out, n).invariants().to_json()} for n in out.degrees]}


def _adjunctions(task: TaskFile, max_degree: int, cap: int) -> dict:
    m = _require(task, "module")
    e = _require(task, "space") if task.task.space is not None else m.space
    unit = trivial(m.group, PairSpace.hausdorff(m.field, 1))
    tensor, coinv = tensor_over_G(unit, m), coinvariants(m)[0]
    hom, inv = hom_G(unit, m), invariants(m)[0]
    return {
        "triangles": verify_adjunctions(m, e),
        "trivial_tensor_is_coinvariants": _pair(tensor) == _pair(coinv),
        "trivial_hom_is_invariants": _pair(hom) == _pair(inv),
        "bot_projective": is_bot_projective(m),
    }


def _law_case(task: TaskFile, max_degree: int, cap: int) -> dict:
    from lib.domain.laws import replay_case, run_case
    from lib.domain.witnesses import CaseData

    t = task.task
    if t.suite is None:
        raise TaskValidationError("Operation 'law_case' needs 'suite'.", "task.suite")
    if t.params is None:
        return run_case(t.suite, t.seed, t.case)
    # an exported case: check the laws on the objects stored in the file
    return replay_case(t.suite, t.seed, t.case, CaseData.from_task(task))


OPERATIONS = {
    "homology": _homology,
    "l1": _l1,
    "bounded": _bounded,
    "duality": _duality,
    "les": _les,
    "classical": _classical,
    "bar": _bar,
    "truncate": _truncate,
    "adjunctions": _adjunctions,
    "law_case": _law_case,
}


def run_task(task: TaskFile, max_degree: int = DEFAULT_MAX_DEGREE, cap: int = DEFAULT_RESOURCE_CAP) -> dict:
    """Runs one task and returns its report.

    Everything but ``timing`` is a pure function of the input file and the limits.
    """
    operation = task.task.operation
    logger.info(f"Running '{operation}' (max degree {max_degree}, resource cap {cap})")
    started = time.perf_counter()
    results = OPERATIONS[operation](task, max_degree, cap)
    elapsed = time.perf_counter() - started
    logger.info(f"'{operation}' finished in {elapsed:.3f}s")
    return {
        "tool_version": TOOL_VERSION,
        "input_digest": input_digest(task.raw),
        "operation": operation,
        "field": task.field.name,
        "results": results,
        "timing": {"seconds": round(elapsed, 6)},
    }
