"""Seeded property suites.

Case ``i`` of suite ``s`` under seed ``k`` draws its objects from ``random.Random(f"{k}:{s}:{i}")``,
so any single case can be replayed on its own (see ``run_case``). A failing case is exported
as a standalone ``law_case`` task file holding those objects, shrunk while the failure persists.
"""

import json
import logging
import random
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, NamedTuple

from tqdm import tqdm

from conf.config import LAW_TOP_DEGREE
from lib.common.errors import EngineError, UnknownSuite
from lib.common.export_utils import export_witness
from lib.common.linalg import (
    FieldSpec,
    Matrix,
    image_basis,
    inverse,
    kernel_basis,
    quotient_presentation,
    rank,
    solve,
)
from lib.common.task_loader import load_task_from_text
from lib.domain.complexes import a2_cohomology, dual_complex, embed_to_a2, truncate
from lib.domain.generators import (
    random_complex,
    random_complex_ses,
    random_field,
    random_group,
    random_map,
    random_matrix,
    random_module,
    random_module_ses,
    random_pair,
    random_space,
    random_subspace,
)
from lib.domain.groups import FiniteGroup, coinvariants, identity_g, induce, trivial, verify_adjunctions
from lib.domain.hearts import (
    HeartInvariants,
    classification_oracle,
    h_left,
    h_right,
    heart_from_a2,
    iota_hom_comparison,
    iota_l,
    iota_r,
    left_adjunction_check,
    q_comparison,
    q_r,
    right_adjunction_check,
)
from lib.domain.long_exact import (
    hausdorff_check,
    hausdorff_les_witness,
    inclusion_example,
    les_of_ses,
    nonepic_dual_example,
    q_left_nonexact_witness,
    q_right_nonexact_witness,
    right_hausdorff_check,
)
from lib.domain.resolutions import (
    bar_resolution,
    coefficient_les,
    coinvariants_agreement,
    comparison_check,
    duality_check,
    hausdorffified,
    induced_splitting_check,
    invariants_agreement,
    is_bot_projective,
    l1_homology,
    les_naturality,
    rank_oracle,
)
from lib.domain.sn_category import (
    PairMap,
    PairSpace,
    biduality_unit,
    coimage_image_comparison,
    cokernel,
    compose,
    curry_isomorphism,
    d_cokernel_vs_kernel,
    d_image_vs_coimage,
    delta_cokernel_vs_kernel,
    delta_kernel_vs_cokernel,
    dual_D_map,
    dual_Delta,
    dual_Delta_map,
    factor_through_epi,
    factor_through_mono,
    hausdorffify,
    homology_ladder,
    is_isomorphism,
    is_strict,
    is_strict_epic,
    is_strict_monic,
    kernel,
    null_part,
    pullback,
    pushout,
)
from lib.domain.witnesses import CaseData, shrink

logger = logging.getLogger(__name__)

Checks = dict[str, bool]


class LawSuite(NamedTuple):
    """``draw`` builds the objects of one case from its seeded generator; ``check`` evaluates the laws on them.

    ``check`` gets a second generator, seeded from the case alone, for any auxiliary draws.
    """

    draw: Callable[[random.Random], CaseData]
    check: Callable[[CaseData, random.Random], Checks]


# -- exact linear algebra and the pair category --------------------------------

def _draw_linalg(rng: random.Random) -> CaseData:
    field = random_field(rng)
    rows, cols = rng.randint(0, 5), rng.randint(0, 5)
    x, y, p, t = (PairSpace.hausdorff(field, n) for n in (cols, rows, 2, 3))
    a = PairMap(x, y, random_matrix(rng, field, rows, cols))
    s = PairSpace(random_subspace(rng, field, rows))
    return CaseData(field, spaces={"X": x, "Y": y, "P": p, "T": t, "S": s},
                    maps={"a": a, "x": PairMap(p, x, random_matrix(rng, field, cols, 2)),
                          "square": PairMap(t, t, random_matrix(rng, field, 3, 3))})


def _check_linalg(case: CaseData, rng: random.Random) -> Checks:
    field = case.field
    a, x, square = case.maps["a"].matrix, case.maps["x"].matrix, case.maps["square"].matrix
    cols = a.cols
    s = case.spaces["S"].null
    k, im = kernel_basis(a), image_basis(a)
    proj, section = quotient_presentation(s)
    checks = {
        "rank_nullity": rank(a) + k.dim == cols,
        "kernel_is_killed": k.dim == 0 or (a @ k.inclusion()).is_zero(),
        "image_rank": im.dim == rank(a),
        "solve": a @ solve(a, a @ x) == a @ x,
        "double_annihilator": s.annihilator().annihilator() == s,
        "quotient_kills_subspace": s.dim == 0 or (proj @ s.inclusion()).is_zero(),
        "quotient_section": proj @ section == Matrix.identity(field, s.codim),
    }
    if rank(square) == square.rows:
        checks["inverse"] = square @ inverse(square) == Matrix.identity(field, square.rows)
    return checks


def _draw_single_map(rng: random.Random) -> CaseData:
    field = random_field(rng)
    a, b = random_space(rng, field), random_space(rng, field)
    return CaseData(field, maps={"f": random_map(rng, a, b)})


def _check_category(case: CaseData, rng: random.Random) -> Checks:
    field, f = case.field, case.maps["f"]
    k, inc = kernel(f)
    c, proj = cokernel(f)
    w = random_space(rng, field)
    r_in, r_out = random_map(rng, w, k), random_map(rng, c, w)

    # exact-structure axioms on a strict monic and a strict epic
    g = random_map(rng, k, random_space(rng, field))
    _, _, pushed = pushout(inc, g)
    h = random_map(rng, random_space(rng, field), c)
    _, _, pulled = pullback(proj, h)
    _, inc2 = kernel(random_map(rng, k, random_space(rng, field)))
    _, ker_inc = kernel(cokernel(inc)[1])

    x, y, z = (random_space(rng, field, 2) for _ in range(3))
    return {
        "kernel_factorization": factor_through_mono(inc, compose(inc, r_in)) == r_in,
        "cokernel_factorization": factor_through_epi(proj, compose(r_out, proj)) == r_out,
        "kernel_strict_monic": is_strict_monic(inc),
        "cokernel_strict_epic": is_strict_epic(proj),
        "strictness_criterion": is_strict(f) == is_isomorphism(coimage_image_comparison(f)),
        "pushout_of_strict_monic": is_strict_monic(pushed),
        "pullback_of_strict_epic": is_strict_epic(pulled),
        "strict_monics_compose": is_strict_monic(compose(inc, inc2)),
        "strict_monic_is_kernel_of_cokernel": is_isomorphism(factor_through_mono(ker_inc, inc)),
        "tensor_hom_currying": is_isomorphism(curry_isomorphism(x, y, z)),
    }


def _draw_ladder(rng: random.Random) -> CaseData:
    field = random_field(rng)
    f, g = random_pair(rng, field, max_dim=6 if field.is_prime else 4)
    return CaseData(field, maps={"f": f, "g": g})


def _check_ladder(case: CaseData, rng: random.Random) -> Checks:
    f, g = case.maps["f"], case.maps["g"]
    ladder = homology_ladder(f, g)
    checks = {name: is_isomorphism(w) for name, w in ladder.witnesses.items()}
    checks["u_strict"] = is_strict(ladder.u)
    return checks


def _check_duality(case: CaseData, rng: random.Random) -> Checks:
    f = case.maps["f"]
    a, b = f.domain, f.codomain
    nu_a, nu_b = null_part(dual_Delta(a))[1], null_part(dual_Delta(b))[1]
    _, hd_proj = hausdorffify(a)
    return {
        "D_cokernel_is_kernel": is_isomorphism(d_cokernel_vs_kernel(f)),
        "D_image_is_coimage": is_isomorphism(d_image_vs_coimage(f)),
        "Delta_kernel_is_cokernel": is_isomorphism(delta_kernel_vs_cokernel(f)),
        "Delta_cokernel_is_kernel": is_isomorphism(delta_cokernel_vs_kernel(f)),
        "Delta_involution": dual_Delta(dual_Delta(a)) == a and dual_Delta_map(dual_Delta_map(f)) == f,
        "D_is_null_part_of_Delta": compose(nu_a, dual_D_map(f)) == compose(dual_Delta_map(f), nu_b),
        "biduality_is_hausdorffification": is_isomorphism(factor_through_epi(hd_proj, biduality_unit(a))),
    }


# -- complexes and hearts ------------------------------------------------------

def _draw_realization(rng: random.Random) -> CaseData:
    field = random_field(rng)
    a = random_complex(rng, field, max_length=4, max_dim=3 if field.is_prime else 2)
    return CaseData(field, complexes={"A": a})


def _check_realization(case: CaseData, rng: random.Random) -> Checks:
    a = case.complexes["A"]
    embedded = embed_to_a2(a)
    dual = dual_complex(a)
    checks = {}
    for n in range(a.lo - 1, a.hi + 2):
        rep = a2_cohomology(embedded, n)
        right = h_right(a, n)
        w, h_null, h_quot = h_left(dual, -n).invariants().as_tuple()
        checks[f"left_realization_{n}"] = h_left(a, n).invariants() == HeartInvariants(*rep.invariants())
        checks[f"right_transport_{n}"] = right.invariants() == HeartInvariants(w, h_quot, h_null)
        checks[f"right_realization_{n}"] = right.invariants() == right.realization_invariants()
        checks[f"lift_{n}"] = heart_from_a2(rep).invariants() == HeartInvariants(*rep.invariants())
        checks[f"q_comparison_{n}"] = is_isomorphism(q_comparison(a, n))
    return checks


def _draw_truncation(rng: random.Random) -> CaseData:
    field = random_field(rng)
    a = random_complex(rng, field, max_length=4, max_dim=2)
    return CaseData(field, complexes={"A": a}, params={"cut": rng.randint(a.lo, a.hi)})


def _check_truncation(case: CaseData, rng: random.Random) -> Checks:
    a, cut = case.complexes["A"], case.params["cut"]
    checks = {}
    for side, homology in (("left", h_left), ("right", h_right)):
        below, above = truncate(side, "le", a, cut), truncate(side, "ge", a, cut)
        for n in range(a.lo - 1, a.hi + 2):
            original = homology(a, n).invariants()
            low, high = homology(below, n).invariants(), homology(above, n).invariants()
            checks[f"{side}_le_{n}"] = low == original if n <= cut else low.is_zero()
            checks[f"{side}_ge_{n}"] = high == original if n >= cut else high.is_zero()
    return checks


def _draw_classification(rng: random.Random) -> CaseData:
    return CaseData(FieldSpec.prime(2), params={"max_total_dim": rng.randint(1, 3)})


def _check_classification(case: CaseData, rng: random.Random) -> Checks:
    result = classification_oracle(case.field, case.params["max_total_dim"])
    return {"invariants_classify": not result["mismatches"]}


def _draw_adjunction(rng: random.Random) -> CaseData:
    group, field = random_group(rng)
    m = random_module(rng, group, field)
    spaces = {name: random_space(rng, field, 2) for name in ("E", "A", "B")}
    return CaseData(field, group, spaces=spaces, modules={"M": m})


def _check_adjunction(case: CaseData, rng: random.Random) -> Checks:
    m, e, a, b = case.modules["M"], case.spaces["E"], case.spaces["A"], case.spaces["B"]
    checks = dict(verify_adjunctions(m, e))
    checks.update({f"left: {k}": v for k, v in left_adjunction_check(iota_l(a), b).items()})
    checks.update({f"right: {k}": v for k, v in right_adjunction_check(iota_r(a), b).items()})
    sn_dim, heart_dim = iota_hom_comparison(a, b)
    checks["iota_fully_faithful"] = sn_dim == heart_dim
    return checks


# -- group homology -------------------------------------------------------------

def _draw_delta(rng: random.Random) -> CaseData:
    group, field = random_group(rng)
    inc, proj = random_module_ses(rng, group, field)
    return CaseData(field, group, spaces={"E": random_space(rng, field, 1)},
                    modules={"S": inc.source, "M": inc.target, "Q": proj.target},
                    gmaps={"inc": inc, "proj": proj})


def _check_delta(case: CaseData, rng: random.Random) -> Checks:
    """Normalization, vanishing on induced modules and exactness of the coefficient LES."""
    inc, proj = case.gmaps["inc"], case.gmaps["proj"]
    m, top = inc.target, LAW_TOP_DEGREE
    checks = {"normalization": l1_homology(m, 0).invariants() == iota_r(coinvariants(m)[0]).invariants()}
    up = induce(case.group, case.spaces["E"])
    for n in range(1, top + 1):
        checks[f"vanishing_{n}"] = l1_homology(up, n).invariants().is_zero()
    les = coefficient_les(inc, proj, top + 1)
    checks["les_left_exact"] = les.left_exact
    checks["les_right_exact"] = les.right_exact
    ids = (identity_g(inc.source), identity_g(m), identity_g(proj.target))
    checks["connecting_natural"] = les_naturality((inc, proj), (inc, proj), ids, top)
    return checks


def _draw_module(rng: random.Random) -> CaseData:
    group, field = random_group(rng)
    return CaseData(field, group, modules={"M": random_module(rng, group, field)})


def _check_group_duality(case: CaseData, rng: random.Random) -> Checks:
    report = duality_check(case.modules["M"], range(LAW_TOP_DEGREE + 1))
    checks = {f"degree_{row['degree']}": row["chain_iso"] for row in report["degrees"]}
    checks["induced_dual_is_coinduced"] = report["induced_dual_is_coinduced"]
    checks["dual_coinvariants_are_invariants"] = report["dual_coinvariants_are_invariants"]
    return checks


def _draw_comparison(rng: random.Random) -> CaseData:
    case = _draw_module(rng)
    i, p = random_complex_ses(rng, case.field)
    case.chain_maps.update({"i": i, "p": p})
    return case


def _check_comparison(case: CaseData, rng: random.Random) -> Checks:
    m = case.modules["M"]
    checks = {}
    for n in range(LAW_TOP_DEGREE + 1):
        row = comparison_check(m, n)
        checks[f"q_iso_{n}"] = row["q_iso"]
        checks[f"hausdorff_iso_{n}"] = row["hausdorff_iso"]
        hd_heart = hausdorffify(q_r(l1_homology(m, n)))[0]
        checks[f"hausdorff_theorem_{n}"] = hd_heart.dim == hausdorffified(m, n).dim
    # heart sequences stay exact even when their Hausdorffifications do not
    les = les_of_ses(case.chain_maps["i"], case.chain_maps["p"])
    checks["heart_les_left_exact"] = les.left_exact
    checks["heart_les_right_exact"] = les.right_exact
    checks["heart_les_lifts_exactly"] = les.heart_exact
    return checks


def _draw_resolution(rng: random.Random) -> CaseData:
    case = _draw_module(rng)
    case.spaces["E"] = random_space(rng, case.field, 1)
    return case


def _check_resolution(case: CaseData, rng: random.Random) -> Checks:
    group, field, m, e = case.group, case.field, case.modules["M"], case.spaces["E"]
    top = LAW_TOP_DEGREE
    bar = bar_resolution(m, top)
    checks = {
        "dims": [x.dim for x in bar.modules] == [group.order ** (k + 1) * m.dim for k in range(top + 1)],
        "homotopy": bar.check_homotopy(),
        "simplicial": bar.check_simplicial(),
        "coinvariants_agree": all(coinvariants_agreement(m, top).values()),
        "invariants_agree": all(invariants_agreement(m, top).values()),
    }
    splitting = induced_splitting_check(group, e, top)
    checks["induced_splits_equivariantly"] = splitting["equivariant"] and splitting["contracting"]
    checks["induced_is_bot_projective"] = is_bot_projective(induce(group, e))

    # known dimensions of the trivial module, checked against plain rank counting
    unit = trivial(group, PairSpace.hausdorff(field, 1))
    for n in range(top + 1):
        expected = n + 1 if group.order == 4 else 1
        oracle = rank_oracle(unit, n)
        checks[f"known_dim_{n}"] = oracle == expected
        checks[f"heart_matches_oracle_{n}"] = l1_homology(unit, n).invariants() == HeartInvariants(0, 0, oracle)
    return checks


def _draw_counterexamples(rng: random.Random) -> CaseData:
    group, field = random_group(rng)
    return CaseData(field, group)


def _check_counterexamples(case: CaseData, rng: random.Random) -> Checks:
    field, group = case.field, case.group
    pattern = inclusion_example(field)
    q_left, q_right = q_left_nonexact_witness(field), q_right_nonexact_witness(field)
    hd = hausdorff_les_witness(field)
    cyclic = FiniteGroup.cyclic(field.p)
    return {
        "inclusion_pattern": (pattern["coim_f"], pattern["ker_g"], pattern["coker_f"], pattern["im_g"])
        == ([1, 0], [1, 1], [1, 0], [1, 1]),
        "inclusion_homology_vanishes_classically": pattern["x_dim"] == 0,
        "inclusion_maps_not_iso": not (pattern["phi_iso"] or pattern["psi_iso"]),
        "inclusion_heart_singular": pattern["heart_singular"],
        "monic_with_nonepic_dual": nonepic_dual_example(field) == {"monic": True, "dual_epic": False},
        "q_left_breaks_exactness": q_left["heart_exact"] and not q_left["q_exact"],
        "q_right_breaks_exactness": q_right["heart_exact"] and not q_right["q_exact"],
        "hausdorff_breaks_exactness": hd["heart_exact"] and not hd["hausdorff_exact"],
        "trivial_not_bot_projective": not is_bot_projective(trivial(cyclic, PairSpace.hausdorff(field, 1))),
        "regular_bot_projective": is_bot_projective(induce(group, PairSpace.hausdorff(field, 1))),
    }


SUITES: dict[str, LawSuite] = {
    "linalg": LawSuite(_draw_linalg, _check_linalg),
    "category": LawSuite(_draw_single_map, _check_category),
    "ladder": LawSuite(_draw_ladder, _check_ladder),
    "duality": LawSuite(_draw_single_map, _check_duality),
    "realization": LawSuite(_draw_realization, _check_realization),
    "truncation": LawSuite(_draw_truncation, _check_truncation),
    "classification": LawSuite(_draw_classification, _check_classification),
    "adjunction": LawSuite(_draw_adjunction, _check_adjunction),
    "delta": LawSuite(_draw_delta, _check_delta),
    "group-duality": LawSuite(_draw_module, _check_group_duality),
    "comparison": LawSuite(_draw_comparison, _check_comparison),
    "resolution": LawSuite(_draw_resolution, _check_resolution),
    "counterexamples": LawSuite(_draw_counterexamples, _check_counterexamples),
}


def search_hausdorff_failure(seed: int, attempts: int = 200) -> dict | None:
    """First random short exact sequence of complexes whose heart LES is exact but whose
    Hausdorffified sequence is not, on either side; None if no attempt finds one."""
    for attempt in range(attempts):
        rng = random.Random(f"{seed}:hausdorff-search:{attempt}")
        field = random_field(rng)
        i, p = random_complex_ses(rng, field)
        les = les_of_ses(i, p)
        for side, report in (("left", hausdorff_check(les)), ("right", right_hausdorff_check(les))):
            if report["heart_exact"] and not report["hausdorff_exact"]:
                logger.info(f"Hausdorffification breaks exactness on the {side} at attempt {attempt}")
                return {"attempt": attempt, "side": side, "field": field.name, **report}
    return None


# -- running and replaying cases ------------------------------------------------

def _suite(name: str) -> LawSuite:
    if name not in SUITES:
        logger.error(f"Unknown law suite: {name}")
        raise UnknownSuite(f"Unknown law suite {name!r}; known suites: {', '.join(SUITES)}")
    return SUITES[name]


def draw_case(suite: str, seed: int, index: int) -> CaseData:
    """The objects of case ``index``, drawn from ``random.Random(f"{seed}:{suite}:{index}")``."""
    return _suite(suite).draw(random.Random(f"{seed}:{suite}:{index}"))


def replay_case(suite: str, seed: int, index: int, case: CaseData) -> dict:
    """Evaluates the laws of ``suite`` on ``case``; domain errors count as a failed case."""
    check = _suite(suite).check
    error, checks = None, {}
    try:
        checks = check(case, random.Random(f"{seed}:{suite}:{index}:checks"))
    except EngineError as exc:
        logger.warning(f"{suite} case {index} raised {type(exc).__name__}: {exc}")
        error = f"{type(exc).__name__}: {exc}"
    failing = sorted(name for name, ok in checks.items() if not ok)
    return {
        "case": index,
        "field": case.field.name,
        "passed": error is None and not failing,
        "checks": len(checks),
        "failing": failing,
        "error": error,
    }


def run_case(suite: str, seed: int, index: int) -> dict:
    """Draws and checks case ``index`` of ``suite``."""
    try:
        case = draw_case(suite, seed, index)
    except UnknownSuite:
        raise
    except EngineError as exc:
        logger.warning(f"{suite} case {index} could not be drawn: {type(exc).__name__}: {exc}")
        return {"case": index, "field": FieldSpec.rationals().name, "passed": False, "checks": 0, "failing": [],
                "error": f"{type(exc).__name__}: {exc}"}
    return replay_case(suite, seed, index, case)


def _failure_names(result: dict) -> set[str]:
    names = set(result["failing"])
    if result["error"] is not None:
        names.add(result["error"].split(":")[0])
    return names


def witness_task(suite: str, seed: int, index: int, shrink_case: bool = True) -> dict:
    """
    Task document reproducing a failing case from its own data.

    :param suite: Suite name.
    :param seed: Base seed of the run.
    :param index: Case index.
    :param shrink_case: Shrink the data while the same check keeps failing.
    :return: A ``law_case`` task document; the seed replay form if the case cannot be drawn.
    """
    try:
        case = draw_case(suite, seed, index)
    except UnknownSuite:
        raise
    except EngineError:
        return {"field": FieldSpec.rationals().name,
                "task": {"operation": "law_case", "suite": suite, "seed": seed, "case": index}}
    doc = case.to_task(suite, seed, index)
    failure = _failure_names(replay_case(suite, seed, index, case))
    if not shrink_case or not failure:
        return doc

    def still_fails(candidate: dict) -> bool:
        try:
            reloaded = CaseData.from_task(load_task_from_text(json.dumps(candidate)))
        except EngineError:
            return False
        return bool(failure & _failure_names(replay_case(suite, seed, index, reloaded)))

    return shrink(doc, still_fails)


def run_suite(suite: str, seed: int, cases: int, workers: int = 1, export_dir: str | None = None,
              progress: bool = True) -> dict:
    """Runs ``cases`` cases of a suite and merges them in case order.

    :param suite: Suite name, one of ``SUITES``.
    :param seed: Base seed.
    :param cases: Number of cases; 0 gives an empty passing report.
    :param workers: Worker processes; 1 runs in-process.
    :param export_dir: Where failing cases are written as task files (skipped when None).
    :param progress: Show a progress bar.
    :return: The suite report.
    """
    _suite(suite)
    logger.info(f"Running suite '{suite}' with seed {seed}, {cases} cases, {workers} worker(s)")

    indices = range(cases)
    bar_opts = dict(total=cases, desc=f"Checking {suite}", unit="case", ncols=100, leave=True, disable=not progress)
    if workers > 1 and cases > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(tqdm(pool.map(run_case, [suite] * cases, [seed] * cases, indices), **bar_opts))
    else:
        results = [run_case(suite, seed, i) for i in tqdm(indices, **bar_opts)]

    failures = []
    for r in results:
        if r["passed"]:
            continue
        task = witness_task(suite, seed, r["case"])
        if export_dir is not None:
            export_witness(task, export_dir, f"{suite}_seed{seed}_case{r['case']}")
        failures.append({**r, "witness": task})

    passed = not failures
    logger.info(f"Suite '{suite}': {len(results) - len(failures)}/{len(results)} cases passed")
    return {
        "suite": suite,
        "seed": seed,
        "cases": cases,
        "passed": passed,
        "checks_run": sum(r["checks"] for r in results),
        "failures": failures,
    }
