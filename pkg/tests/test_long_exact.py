import random

import pytest

from lib.common.errors import NotStrictExact
from lib.common.linalg import Matrix
from lib.domain.complexes import ChainMap, SnComplex, a2_compose
from lib.domain.generators import random_complex_ses, random_field
from lib.domain.hearts import heart_from_a2_witness
from lib.domain.long_exact import (
    check_strict_short_exact,
    hausdorff_check,
    hausdorff_les_witness,
    les_of_ses,
    q_left_nonexact_witness,
    q_right_nonexact_witness,
    right_hausdorff_check,
)
from lib.domain.sn_category import PairMap, PairSpace, biproduct, identity_map


def test_split_sequence_is_strict_exact(q):
    a, b = PairSpace.hausdorff(q, 1), PairSpace.indiscrete(q, 1)
    s = biproduct(a, b)
    i = PairMap(a, s, Matrix.from_rows(q, [[1], [0]]))
    p = PairMap(s, b, Matrix.from_rows(q, [[0, 1]]))
    check_strict_short_exact(i, p)


def test_dense_inclusion_is_not_strict(q):
    a, b = PairSpace.hausdorff(q, 1), PairSpace.indiscrete(q, 1)
    zero = PairSpace.zero(q)
    with pytest.raises(NotStrictExact):
        check_strict_short_exact(PairMap(a, b, Matrix.identity(q, 1)), PairMap(b, zero, Matrix.zeros(q, 0, 1)))


def test_q_left_is_not_exact(q):
    report = q_left_nonexact_witness(q)
    assert report["heart_exact"]
    assert not report["q_exact"]


def test_q_right_is_not_exact(q):
    report = q_right_nonexact_witness(q)
    assert report["heart_exact"]
    assert not report["q_exact"]


def test_hausdorffification_breaks_exactness(q):
    report = hausdorff_les_witness(q)
    assert report["heart_exact"]
    assert not report["hausdorff_exact"]


@pytest.mark.parametrize("seed", range(6))
def test_random_sequences_are_exact_in_both_hearts(seed):
    rng = random.Random(f"les-test:{seed}")
    field = random_field(rng)
    i, p = random_complex_ses(rng, field)
    les = les_of_ses(i, p)
    assert les.left_exact
    assert les.right_exact
    assert hausdorff_check(les)["heart_exact"]
    assert right_hausdorff_check(les)["heart_exact"]


def test_les_report_shape(q):
    rng = random.Random("les-shape")
    i, p = random_complex_ses(rng, q)
    data = les_of_ses(i, p).to_json()
    assert set(data["left"]) == {"sub", "middle", "quotient"}
    lo, hi = data["degrees"]
    assert len(data["left"]["middle"]) == hi - lo + 1
    assert len(data["connecting_zero"]) == hi - lo + 1


@pytest.mark.parametrize("seed", range(4))
def test_lifted_sequence_is_exact_in_the_left_heart(seed):
    rng = random.Random(f"les-lift:{seed}")
    i, p = random_complex_ses(rng, random_field(rng))
    les = les_of_ses(i, p)
    assert les.heart_exact == les.left_exact
    assert len(les.connecting_morphisms) == len(les.connecting)
    for delta, lifted in zip(les.connecting, les.connecting_morphisms):
        there = a2_compose(heart_from_a2_witness(delta.target), lifted.realize())
        back = a2_compose(delta, heart_from_a2_witness(delta.source))
        assert (there.top, there.bottom) == (back.top, back.bottom)


def test_nonzero_connecting_morphism(q):
    # 0 → (F,0)[-1] → [(F,0) = (F,0)] → (F,0) → 0 with δ⁰ an isomorphism
    h = PairSpace.hausdorff(q, 1)
    sub, quot = SnComplex.concentrated(h, 1), SnComplex.concentrated(h, 0)
    middle = SnComplex.two_term(identity_map(h), 0)
    i = ChainMap.build(sub, middle, lambda n: Matrix.identity(q, 1) if n == 1 else Matrix.zeros(q, 1, 0))
    p = ChainMap.build(middle, quot, lambda n: Matrix.identity(q, 1) if n == 0 else Matrix.zeros(q, 0, 1))
    les = les_of_ses(i, p)
    assert les.heart_exact
    delta_0 = les.connecting_morphisms[0 - les.lo]
    assert delta_0.realize().is_iso()
