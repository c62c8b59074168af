import pytest

from lib.common.errors import NotEquivariant, ResourceLimit, TaskValidationError
from lib.common.linalg import Matrix
from lib.domain.groups import (
    FiniteGroup,
    GPairModule,
    augmentation_sequence,
    coinduce,
    coinvariants,
    compose_g,
    dual_coinvariants_iso,
    dual_module,
    gmap,
    induce,
    induced_dual_iso,
    invariants,
    trivial,
    verify_adjunctions,
)
from lib.domain.long_exact import check_strict_short_exact
from lib.domain.sn_category import PairSpace, is_isomorphism


@pytest.mark.parametrize("name, order", [("Z2", 2), ("Z5", 5), ("Z2xZ2", 4), ("S3", 6), ("D4", 8)])
def test_named_groups(name, order):
    assert FiniteGroup.named(name).order == order


def test_unknown_group_name():
    with pytest.raises(TaskValidationError):
        FiniteGroup.named("Q8x")


def test_group_order_cap():
    with pytest.raises(ResourceLimit):
        FiniteGroup.named("Z13")


def test_non_associative_table_rejected():
    # identity row and column are fine, but (a·a)·b ≠ a·(a·b)
    table = ((0, 1, 2), (1, 0, 0), (2, 2, 0))
    with pytest.raises(TaskValidationError):
        FiniteGroup(("e", "a", "b"), table)


def test_inverse_and_json(klein):
    for g in klein.elements:
        assert klein.mul(g, klein.inv(g)) == klein.identity
    assert FiniteGroup.from_json(klein.to_json()) == klein


def test_action_must_be_homomorphism(q, z2):
    with pytest.raises(NotEquivariant):
        GPairModule(z2, PairSpace.hausdorff(q, 1), (Matrix.identity(q, 1), Matrix.from_rows(q, [[2]])))


def test_non_equivariant_map_rejected(q, z2):
    regular = induce(z2, PairSpace.hausdorff(q, 1))
    with pytest.raises(NotEquivariant):
        gmap(regular, regular, Matrix.from_rows(q, [[1, 0], [0, 0]]))


def test_regular_module_coinvariants_and_invariants(q, z2):
    regular = induce(z2, PairSpace.hausdorff(q, 1))
    assert coinvariants(regular)[0].dim == 1
    assert invariants(regular)[0].dim == 1


def test_trivial_module_keeps_null(q, klein):
    m = trivial(klein, PairSpace.make(q, 2, [[1, 0]]))
    c, _ = coinvariants(m)
    assert (c.dim, c.null_dim) == (2, 1)


def test_induced_and_coinduced_dimensions(q, z2):
    e = PairSpace.make(q, 2, [[0, 1]])
    assert (induce(z2, e).dim, induce(z2, e).space.null_dim) == (4, 2)
    assert coinduce(z2, e).dim == 4


def test_adjunction_identities(q, z2):
    m = induce(z2, PairSpace.make(q, 2, [[1, 0]]))
    report = verify_adjunctions(m, PairSpace.make(q, 2, [[1, 1]]))
    assert report and all(report.values())


def test_dual_intertwinings(q, z2):
    e = PairSpace.make(q, 2, [[1, 0]])
    assert is_isomorphism(induced_dual_iso(z2, e).map)
    m = trivial(z2, e)
    assert is_isomorphism(dual_coinvariants_iso(m))
    assert dual_module(m).dim == 1


def test_augmentation_sequence_is_strict_exact(f3):
    inc, aug = augmentation_sequence(FiniteGroup.named("Z3"), f3)
    check_strict_short_exact(inc.map, aug.map)
    assert inc.source.dim == 2


def test_augmentation_composite_vanishes(f2):
    inc, aug = augmentation_sequence(FiniteGroup.named("Z2xZ2"), f2)
    composite = compose_g(aug, inc)
    assert composite.source is inc.source and composite.target is aug.target
    assert composite.matrix.is_zero()
