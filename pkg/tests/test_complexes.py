import pytest

from lib.common.errors import DimensionMismatch, NotAComplex
from lib.common.linalg import Matrix
from lib.domain.complexes import (
    A2Rep,
    ChainMap,
    SnComplex,
    a2_cohomology,
    dual_complex,
    embed_to_a2,
    identity_chain_map,
    is_quasi_iso,
    mapping_cone,
    realize,
    shift,
    truncate,
    zero_chain_map,
)
from lib.domain.hearts import h_left, h_right
from lib.domain.sn_category import PairMap, PairSpace, identity_map


def test_differentials_must_square_to_zero(q):
    a = PairSpace.hausdorff(q, 1)
    with pytest.raises(NotAComplex):
        SnComplex(0, (a, a, a), (identity_map(a), identity_map(a)))


def test_differential_endpoints_checked(q):
    a, b = PairSpace.hausdorff(q, 1), PairSpace.hausdorff(q, 2)
    with pytest.raises(DimensionMismatch):
        SnComplex(0, (a, a), (identity_map(b),))


def test_objects_outside_window_are_zero(singular_complex):
    assert singular_complex.obj(5).dim == 0
    assert singular_complex.d(3).matrix.shape == (0, 0)
    assert singular_complex.degrees == range(-1, 1)


def test_shift_moves_degrees_and_signs(singular_complex):
    s = shift(singular_complex, 1)
    assert s.lo == -2
    assert s.d(-2).matrix == -singular_complex.d(-1).matrix
    assert shift(s, -1) == singular_complex


def test_realization_of_pair_space(q):
    r = realize(PairSpace.make(q, 3, [[1, 0, 0]]))
    assert isinstance(r, A2Rep)
    assert r.invariants() == (0, 1, 2)


def test_a2_cohomology_of_singular_complex(singular_complex):
    h = a2_cohomology(embed_to_a2(singular_complex), 0)
    assert (h.top, h.bottom) == (1, 0)
    assert a2_cohomology(embed_to_a2(singular_complex), -1).is_zero()


def test_chain_map_must_commute(q, singular_complex):
    with pytest.raises(NotAComplex):
        ChainMap.build(singular_complex, singular_complex,
                       lambda n: Matrix.identity(q, 1) if n == 0 else Matrix.zeros(q, 1, 1))


def test_identity_is_quasi_iso(singular_complex):
    assert is_quasi_iso(identity_chain_map(singular_complex))


def test_zero_map_is_not_quasi_iso(singular_complex):
    assert not is_quasi_iso(zero_chain_map(singular_complex, singular_complex))


def test_cone_of_identity_is_acyclic(singular_complex):
    cone = embed_to_a2(mapping_cone(identity_chain_map(singular_complex)))
    assert all(a2_cohomology(cone, n).is_zero() for n in range(cone.lo, cone.hi + 1))


def test_dual_complex_is_involutive(singular_complex):
    assert dual_complex(dual_complex(singular_complex)) == singular_complex


def test_left_truncation_keeps_degree_zero(singular_complex):
    above = truncate("left", "ge", singular_complex, 0)
    assert h_left(above, 0).invariants().as_tuple() == (1, 0, 0)
    below = truncate("left", "le", singular_complex, -1)
    assert h_left(below, -1).invariants().is_zero()


def test_right_truncation(singular_complex):
    below = truncate("right", "le", singular_complex, -1)
    assert h_right(below, -1).invariants().as_tuple() == (1, 0, 0)
    above = truncate("right", "ge", singular_complex, 0)
    assert all(h_right(above, n).invariants().is_zero() for n in above.degrees)


def test_unknown_truncation(singular_complex):
    with pytest.raises(ValueError):
        truncate("middle", "le", singular_complex)


def test_json_round_trip(q, singular_complex):
    assert SnComplex.from_json(q, singular_complex.to_json()) == singular_complex


def test_two_term_complex(q):
    f = PairMap(PairSpace.hausdorff(q, 2), PairSpace.hausdorff(q, 2), Matrix.identity(q, 2))
    c = SnComplex.two_term(f, 3)
    assert (c.lo, c.hi) == (3, 4)
