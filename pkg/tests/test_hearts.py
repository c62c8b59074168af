import pytest

from lib.common.errors import EndpointMismatch, NotAHeartObject
from lib.common.linalg import Matrix
from lib.domain.complexes import A2Rep, SnComplex
from lib.domain.hearts import (
    HeartInvariants,
    LeftHeartObject,
    RightHeartObject,
    classification_oracle,
    h_left,
    h_right,
    heart_from_a2,
    heart_from_a2_witness,
    heart_iso,
    identity_morphism,
    iota_hom_comparison,
    iota_l,
    iota_r,
    is_exact_heart_sequence,
    left_adjunction_check,
    left_counit,
    normal_form,
    normal_form_roof,
    q_comparison,
    q_l,
    q_r,
    right_adjunction_check,
    right_singular_object,
    right_unit,
    roof_compose,
    roof_equal,
    singular_object,
)
from lib.domain.sn_category import PairMap, PairSpace, cokernel, is_epic, is_isomorphism, scale_map, zero_map


def test_left_objects_must_be_monic(q):
    a = PairSpace.hausdorff(q, 1)
    with pytest.raises(NotAHeartObject):
        LeftHeartObject(zero_map(a, a))


def test_right_objects_must_be_surjective(q):
    a = PairSpace.hausdorff(q, 1)
    with pytest.raises(NotAHeartObject):
        RightHeartObject(zero_map(a, a))


def test_dense_map_with_cokernel_is_not_a_right_object(q):
    # 0 → (F,F) has dense range, but its cokernel (F,F) survives as H_r¹
    b = zero_map(PairSpace.zero(q), PairSpace.indiscrete(q, 1))
    assert is_epic(b)
    assert cokernel(b)[0].dim == 1
    assert h_right(SnComplex.two_term(b, 0), 1).invariants().as_tuple() == (0, 1, 0)
    with pytest.raises(NotAHeartObject):
        RightHeartObject(b)


def test_iota_invariants(q):
    a = PairSpace.make(q, 3, [[1, 0, 0]])
    assert iota_l(a).invariants() == HeartInvariants(0, 1, 2)
    assert iota_r(a).invariants() == HeartInvariants(0, 1, 2)


def test_singular_objects(q):
    assert singular_object(q).invariants().as_tuple() == (1, 0, 0)
    assert right_singular_object(q).invariants().as_tuple() == (1, 0, 0)
    assert q_l(singular_object(q)).dim == 0
    assert q_r(right_singular_object(q)).dim == 0


def test_heart_iso_across_hearts_rejected(q):
    with pytest.raises(EndpointMismatch):
        heart_iso(singular_object(q), right_singular_object(q))


def test_homology_of_singular_complex(singular_complex, q):
    assert heart_iso(h_left(singular_complex, 0), singular_object(q))
    assert h_left(singular_complex, -1).invariants().is_zero()
    assert h_right(singular_complex, -1).invariants().as_tuple() == (1, 0, 0)
    assert h_right(singular_complex, 0).invariants().is_zero()


def test_q_comparison_is_iso(singular_complex):
    for n in range(-2, 2):
        assert is_isomorphism(q_comparison(singular_complex, n))


def test_hausdorff_complex_homology(q):
    c = SnComplex.concentrated(PairSpace.hausdorff(q, 2), 0)
    assert h_left(c, 0).invariants() == HeartInvariants(0, 0, 2)
    assert h_right(c, 0).invariants() == HeartInvariants(0, 0, 2)


def test_adjunction_triangles(q):
    y = PairSpace.make(q, 2, [[1, 0]])
    assert all(left_adjunction_check(singular_object(q), y).values())
    assert all(right_adjunction_check(right_singular_object(q), y).values())
    assert all(left_adjunction_check(iota_l(y), y).values())
    assert all(right_adjunction_check(iota_r(y), y).values())


def test_wrong_counit_or_unit_breaks_the_triangles(q):
    y = PairSpace.make(q, 2, [[1, 0]])
    doubled = left_adjunction_check(iota_l(y), y, counit=lambda z: scale_map(left_counit(z), 2))
    assert doubled == {"q_counit_after_q_unit": False, "iota_counit_after_unit": False}
    zero = right_adjunction_check(iota_r(y), y, unit=lambda z: zero_map(z, right_unit(z).codomain))
    assert not any(zero.values())


def test_iota_is_fully_faithful(q):
    a = PairSpace.make(q, 2, [[1, 1]])
    b = PairSpace.make(q, 3, [[1, 0, 0], [0, 1, 0]])
    dims = iota_hom_comparison(a, b)
    assert dims[0] == dims[1]


def test_every_a2_rep_is_realized(q):
    rep = A2Rep(q, 2, 2, Matrix.from_rows(q, [[1, 0], [0, 0]]))
    obj = heart_from_a2(rep)
    assert obj.invariants().as_tuple() == rep.invariants() == (1, 1, 1)
    assert heart_from_a2_witness(rep).is_iso()


def test_identity_roofs_compose(q):
    x = singular_object(q)
    ident = identity_morphism(x)
    assert ident.realize().is_iso()
    assert roof_equal(roof_compose(ident, ident), ident)


def test_classification_matches_invariants(f2):
    report = classification_oracle(f2, 2)
    assert report["mismatches"] == []
    assert report["classes"] == report["invariant_classes"]
    assert report["roof_joins"] >= 0


def test_heart_object_json(q):
    data = iota_l(PairSpace.hausdorff(q, 1)).to_json()
    assert data["side"] == "left"
    assert data["invariants"] == {"w": 0, "h_null": 0, "h_quot": 1}


def test_right_objects_from_surjections(q):
    b = PairMap(PairSpace.hausdorff(q, 2), PairSpace.hausdorff(q, 1), Matrix.from_rows(q, [[1, 1]]))
    assert RightHeartObject(b).invariants() == HeartInvariants(0, 0, 1)


def test_right_invariants_without_transport(q):
    y = PairSpace.make(q, 2, [[1, 0]])
    assert iota_r(y).realization_invariants() == iota_r(y).invariants() == HeartInvariants(0, 1, 1)
    assert right_singular_object(q).realization_invariants() == HeartInvariants(1, 0, 0)
    b = PairMap(y, PairSpace.hausdorff(q, 1), Matrix.from_rows(q, [[0, 1]]))
    assert RightHeartObject(b).realization_invariants() == RightHeartObject(b).invariants() == HeartInvariants(0, 1, 0)


def test_normal_form_has_the_given_invariants(f2):
    inv = HeartInvariants(1, 1, 1)
    assert normal_form(inv, f2).invariants() == inv


def test_roof_through_normal_form(f2):
    # ι_ℓ(F², ⟨e₁⟩) and (F,0) → (F³, ⟨e₁⟩), κ ↦ e₃, both have invariants (0, 1, 1)
    y = PairSpace.make(f2, 2, [[1, 0]])
    x = iota_l(y)
    z = LeftHeartObject(PairMap(PairSpace.hausdorff(f2, 1), PairSpace.make(f2, 3, [[1, 0, 0]]),
                                Matrix.from_rows(f2, [[0], [0], [1]])))
    assert x.invariants() == z.invariants() == HeartInvariants(0, 1, 1)
    roof = normal_form_roof(x, z)
    assert roof is not None
    assert roof.source == x and roof.target == z
    assert roof.realize().is_iso()
    assert normal_form_roof(x, singular_object(f2)) is None


def test_exactness_of_heart_sequences(q):
    line, zero = iota_l(PairSpace.hausdorff(q, 1)), iota_l(PairSpace.hausdorff(q, 0))
    assert not is_exact_heart_sequence([identity_morphism(line), identity_morphism(line)])
    assert is_exact_heart_sequence([identity_morphism(zero), identity_morphism(zero)])
    assert not is_exact_heart_sequence([identity_morphism(singular_object(q))] * 2)
