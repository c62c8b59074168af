import pytest

from lib.common.errors import ResourceLimit
from lib.common.linalg import FieldSpec
from lib.domain.groups import FiniteGroup, augmentation_sequence, induce, trivial
from lib.domain.hearts import HeartInvariants
from lib.domain.resolutions import (
    bar_resolution,
    bounded_cohomology,
    check_resource,
    chain_complex,
    coinvariants_agreement,
    comparison_check,
    duality_check,
    induced_splitting_check,
    invariants_agreement,
    is_bot_projective,
    l1_homology,
    les_coefficients,
    rank_oracle,
)
from lib.domain.sn_category import PairSpace


@pytest.mark.parametrize("name, p", [("Z2", 2), ("Z3", 3)])
def test_cyclic_group_homology_is_one_dimensional(name, p):
    field = FieldSpec.prime(p)
    m = trivial(FiniteGroup.named(name), PairSpace.hausdorff(field, 1))
    for n in range(4):
        assert l1_homology(m, n).invariants() == HeartInvariants(0, 0, 1)
        assert rank_oracle(m, n) == 1


def test_klein_four_homology(f2, klein):
    m = trivial(klein, PairSpace.hausdorff(f2, 1))
    for n in range(4):
        assert rank_oracle(m, n) == n + 1
        assert l1_homology(m, n).invariants() == HeartInvariants(0, 0, n + 1)


def test_bounded_cohomology_of_cyclic_group(f2, z2):
    m = trivial(z2, PairSpace.hausdorff(f2, 1))
    for n in range(3):
        assert bounded_cohomology(m, n).invariants() == HeartInvariants(0, 0, 1)


def test_rational_homology_of_finite_group_vanishes(q, z2):
    m = trivial(z2, PairSpace.hausdorff(q, 1))
    assert rank_oracle(m, 0) == 1
    assert all(rank_oracle(m, n) == 0 for n in range(1, 4))


def test_chain_complex_squares_to_zero(f2, klein):
    c = chain_complex(trivial(klein, PairSpace.hausdorff(f2, 1)), 3)
    assert (c.lo, c.hi) == (-3, 0)


def test_resource_cap(f2, klein):
    m = trivial(klein, PairSpace.hausdorff(f2, 1))
    with pytest.raises(ResourceLimit):
        check_resource(klein, m, 5, cap=100)
    with pytest.raises(ResourceLimit):
        l1_homology(m, 3, cap=10)


def test_bar_resolution(f2, z2):
    m = trivial(z2, PairSpace.hausdorff(f2, 1))
    bar = bar_resolution(m, 3)
    assert [x.dim for x in bar.modules] == [2, 4, 8, 16]
    assert bar.check_homotopy()
    assert bar.check_simplicial()


def test_bar_and_cobar_agree_with_inhomogeneous_complexes(q, z2):
    m = induce(z2, PairSpace.make(q, 2, [[1, 0]]))
    assert all(coinvariants_agreement(m, 2).values())
    assert all(invariants_agreement(m, 2).values())


def test_induced_modules_split(q, klein):
    report = induced_splitting_check(klein, PairSpace.make(q, 1, [[1]]), 2)
    assert report == {"equivariant": True, "contracting": True}


def test_bot_projectivity(q, f2, z2):
    assert is_bot_projective(induce(z2, PairSpace.hausdorff(f2, 1)))
    assert not is_bot_projective(trivial(z2, PairSpace.hausdorff(f2, 1)))
    assert is_bot_projective(trivial(z2, PairSpace.hausdorff(q, 1)))


def test_comparison_with_classical_homology(f2, z2):
    m = trivial(z2, PairSpace.hausdorff(f2, 1))
    report = comparison_check(m, 1)
    assert report["q_iso"] and report["hausdorff_iso"]
    assert report["classical"] == {"dim": 1, "null_dim": 0}


def test_duality(f2, z2):
    m = trivial(z2, PairSpace.make(f2, 2, [[1, 0]]))
    report = duality_check(m, range(3))
    assert all(row["chain_iso"] for row in report["degrees"])
    assert report["induced_dual_is_coinduced"]
    assert report["dual_coinvariants_are_invariants"]


def test_coefficient_les_is_exact(q, z2):
    inc, aug = augmentation_sequence(z2, q)
    report = les_coefficients(inc, aug, 3)
    assert report["left_exact"] and report["right_exact"]
    assert report["homology"]["quotient"]["0"] == {"w": 0, "h_null": 0, "h_quot": 1}
