import pytest

from lib.common.errors import ComposabilityError, NotAComplex, NotBounded
from lib.common.linalg import Matrix, Subspace
from lib.domain.long_exact import inclusion_example, nonepic_dual_example
from lib.domain.sn_category import (
    PairMap,
    PairSpace,
    biduality_unit,
    cokernel,
    compose,
    delta_cokernel_vs_kernel,
    dual_D,
    dual_Delta,
    hausdorffify,
    homology_ladder,
    identity_map,
    is_epic,
    is_isomorphism,
    is_monic,
    is_strict,
    kernel,
    pullback,
    pushout,
    quotient,
    zero_map,
)


@pytest.fixture
def dense(q):
    """id: (F,0) → (F,F)."""
    return PairMap(PairSpace.hausdorff(q, 1), PairSpace.indiscrete(q, 1), Matrix.identity(q, 1))


def test_unbounded_matrix_rejected(q):
    with pytest.raises(NotBounded):
        PairMap(PairSpace.indiscrete(q, 1), PairSpace.hausdorff(q, 1), Matrix.identity(q, 1))


def test_compose_checks_endpoints(q, dense):
    with pytest.raises(ComposabilityError):
        compose(dense, dense)


def test_kernel_carries_induced_null(q):
    a = PairSpace.make(q, 2, [[1, 0]])
    f = PairMap(a, PairSpace.hausdorff(q, 1), Matrix.from_rows(q, [[0, 1]]))
    k, inc = kernel(f)
    assert (k.dim, k.null_dim) == (1, 1)
    assert is_monic(inc) and is_strict(inc)


def test_cokernel_carries_image_of_null(q):
    a = PairSpace.make(q, 2, [[1, 1]])
    f = PairMap(PairSpace.hausdorff(q, 1), a, Matrix.from_rows(q, [[1], [0]]))
    c, proj = cokernel(f)
    assert (c.dim, c.null_dim) == (1, 1)


def test_dense_inclusion_is_monic_epic_not_iso(dense):
    assert is_monic(dense)
    assert is_epic(dense)
    assert not is_strict(dense)
    assert not is_isomorphism(dense)
    assert cokernel(dense)[0].dim == 0


def test_quotient_section(q):
    a = PairSpace.make(q, 3, [[0, 0, 1]])
    qs, proj, section = quotient(a, Subspace.span(q, 3, [[1, 0, 0]]))
    assert (qs.dim, qs.null_dim) == (2, 1)
    assert proj.matrix @ section == Matrix.identity(q, 2)


def test_pullback_of_identities(q):
    a = PairSpace.make(q, 2, [[1, 0]])
    p, pr_a, pr_b = pullback(identity_map(a), identity_map(a))
    assert (p.dim, p.null_dim) == (2, 1)
    assert pr_a.matrix == pr_b.matrix


def test_pushout_of_zero_maps(q):
    k = PairSpace.zero(q)
    a, b = PairSpace.hausdorff(q, 1), PairSpace.indiscrete(q, 2)
    s, leg_a, leg_b = pushout(zero_map(k, a), zero_map(k, b))
    assert (s.dim, s.null_dim) == (3, 2)
    assert is_monic(leg_a) and is_monic(leg_b)


def test_ladder_of_zero_maps(q):
    a = PairSpace.make(q, 2, [[1, 0]])
    ladder = homology_ladder(zero_map(a, a), zero_map(a, a))
    assert ladder.all_witnessed()
    assert (ladder.x.dim, ladder.x.null_dim) == (2, 1)


def test_ladder_requires_complex(q):
    a = PairSpace.hausdorff(q, 1)
    with pytest.raises(NotAComplex):
        homology_ladder(identity_map(a), identity_map(a))


def test_inclusion_pattern(q):
    report = inclusion_example(q)
    assert report["coim_f"] == [1, 0]
    assert report["ker_g"] == [1, 1]
    assert report["coker_f"] == [1, 0]
    assert report["im_g"] == [1, 1]
    assert report["x_dim"] == 0
    assert report["heart_singular"]
    assert not report["phi_iso"]
    assert report["q_left_dim"] == 0


def test_dual_of_dense_inclusion_is_not_epic(q):
    assert nonepic_dual_example(q) == {"monic": True, "dual_epic": False}


def test_dualities_on_objects(q):
    a = PairSpace.make(q, 3, [[1, 0, 0]])
    assert (dual_D(a).dim, dual_D(a).null_dim) == (2, 0)
    assert (dual_Delta(a).dim, dual_Delta(a).null_dim) == (3, 2)
    assert dual_Delta(dual_Delta(a)) == a
    assert hausdorffify(a)[0].dim == 2


def test_biduality_unit_is_hausdorffification(q):
    a = PairSpace.make(q, 3, [[1, 1, 0]])
    unit = biduality_unit(a)
    assert unit.codomain.dim == hausdorffify(a)[0].dim
    assert unit.codomain.is_hausdorff


def test_delta_turns_cokernels_into_kernels(q):
    a = PairSpace.make(q, 2, [[1, 0]])
    f = PairMap(a, PairSpace.make(q, 3, [[1, 0, 0]]), Matrix.from_rows(q, [[1, 0], [0, 1], [0, 0]]))
    assert is_isomorphism(delta_cokernel_vs_kernel(f))
