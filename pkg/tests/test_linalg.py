from fractions import Fraction

import pytest
from sympy import GF, QQ

from lib.common.errors import DimensionMismatch, FieldMismatch, InconsistentSystem
from lib.common.linalg import (
    FieldSpec,
    Matrix,
    Subspace,
    image_basis,
    inverse,
    kernel_basis,
    preimage,
    quotient_presentation,
    rank,
    solve,
    subspace_algebra,
)


def test_prime_field_needs_prime():
    with pytest.raises(ValueError):
        FieldSpec.prime(4)


def test_field_names(q, f2):
    assert q.name == "Q"
    assert FieldSpec.prime(5).name == "F_5"
    assert f2.to_json() == {"kind": "prime", "p": 2}


def test_element_coercion():
    f5 = FieldSpec.prime(5)
    assert f5.element("1/2") == 3
    assert f5.element(-1) == 4
    assert FieldSpec.rationals().element("3/2") == Fraction(3, 2)


def test_element_without_image_in_prime_field():
    with pytest.raises(FieldMismatch):
        FieldSpec.prime(5).element("1/5")


def test_float_is_not_an_exact_scalar(q):
    with pytest.raises(FieldMismatch):
        q.element(0.5)


def test_rank_and_kernel(q):
    m = Matrix.from_rows(q, [[1, 2], [2, 4]])
    assert rank(m) == 1
    k = kernel_basis(m)
    assert k.dim == 1
    assert k.contains([-2, 1])


def test_rank_depends_on_field(q, f2):
    rows = [[1, 1], [1, -1]]
    assert rank(Matrix.from_rows(q, rows)) == 2
    assert rank(Matrix.from_rows(f2, rows)) == 1


def test_matmul_shape_mismatch(q):
    with pytest.raises(DimensionMismatch):
        Matrix.identity(q, 2) @ Matrix.identity(q, 3)


def test_mixed_fields_rejected(q, f2):
    with pytest.raises(FieldMismatch):
        Matrix.identity(q, 2) @ Matrix.identity(f2, 2)


def test_subspaces_compare_canonically(q):
    assert Subspace.span(q, 2, [[1, 1]]) == Subspace.span(q, 2, [[2, 2]])
    assert Subspace.span(q, 2, [[1, 0], [0, 1]]) == Subspace.full(q, 2)


def test_sum_and_intersection(q):
    a = Subspace.span(q, 3, [[1, 0, 0], [0, 1, 0]])
    b = Subspace.span(q, 3, [[0, 1, 0], [0, 0, 1]])
    assert a.sum(b) == Subspace.full(q, 3)
    assert a.intersect(b) == Subspace.span(q, 3, [[0, 1, 0]])
    assert subspace_algebra("intersect", a, b).dim == 1


def test_annihilator_dimension(q):
    s = Subspace.span(q, 4, [[1, 2, 3, 4]])
    assert s.annihilator().dim == 3
    assert s.annihilator().annihilator() == s


def test_preimage(q):
    m = Matrix.from_rows(q, [[1, 0], [0, 0]])
    target = Subspace.zero(q, 2)
    assert preimage(m, target) == Subspace.span(q, 2, [[0, 1]])


def test_quotient_presentation(q):
    s = Subspace.span(q, 3, [[1, 1, 0]])
    proj, section = quotient_presentation(s)
    assert proj.shape == (2, 3)
    assert proj @ section == Matrix.identity(q, 2)
    assert (proj @ s.inclusion()).is_zero()


def test_image_basis(f3):
    m = Matrix.from_rows(f3, [[1, 2], [2, 1]])
    assert image_basis(m).dim == 1


def test_solve_and_inverse(q):
    a = Matrix.from_rows(q, [[2, 1], [1, 1]])
    assert inverse(a) @ a == Matrix.identity(q, 2)
    b = Matrix.from_rows(q, [[3], [2]])
    assert a @ solve(a, b) == b


def test_inconsistent_system(q):
    a = Matrix.from_rows(q, [[1, 0], [0, 0]])
    with pytest.raises(InconsistentSystem):
        solve(a, Matrix.from_rows(q, [[0], [1]]))


def test_coordinates_reject_outside_vectors(q):
    s = Subspace.span(q, 2, [[1, 0]])
    with pytest.raises(InconsistentSystem):
        s.coordinates(Matrix.from_rows(q, [[0], [1]]))


def test_matrices_reduce_over_the_sympy_domain(q):
    f5 = FieldSpec.prime(5)
    m = Matrix.from_rows(f5, [[2, 1], [1, 1]])
    assert m.rep.domain == GF(5)
    assert inverse(m) @ m == Matrix.identity(f5, 2)
    assert inverse(m).entries == ((1, 4), (4, 2))
    assert Matrix.from_rows(q, [["1/2", 0]]).rep.domain == QQ


def test_empty_shapes(q):
    assert kernel_basis(Matrix.zeros(q, 0, 3)).dim == 3
    assert kernel_basis(Matrix.zeros(q, 2, 0)).dim == 0
    assert rank(Matrix.zeros(q, 0, 0)) == 0
    assert Matrix.zeros(q, 2, 0) @ Matrix.zeros(q, 0, 3) == Matrix.zeros(q, 2, 3)
