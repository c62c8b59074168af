"""Long exact sequences of heart-valued homology and the stored non-exactness witnesses."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field

from lib.common.errors import DimensionMismatch, NotStrictExact
from lib.common.linalg import FieldSpec, Matrix, image_basis, is_surjective, kernel_basis, quotient_presentation, solve
from lib.domain.complexes import (
    A2Map,
    A2Rep,
    ChainMap,
    SnComplex,
    a2_cohomology,
    a2_cohomology_map,
    a2_row_exact,
    a2_zero,
    a2_zero_rep,
    cohomology_rows,
    dual_chain_map,
    embed_to_a2,
    realize_map,
)
from lib.domain.hearts import (
    HeartMorphism,
    direct_morphism,
    h_left,
    h_right,
    heart_iso,
    heart_map_from_a2,
    iota_l,
    iota_r,
    is_exact_heart_sequence,
    q_l,
    right_singular_object,
    singular_object,
)
from lib.domain.sn_category import (
    PairMap,
    PairSpace,
    biproduct,
    cokernel,
    compose,
    dual_D_map,
    factor_through_epi,
    factor_through_mono,
    homology_ladder,
    is_epic,
    is_exact_sequence,
    is_isomorphism,
    is_monic,
    is_strict,
    kernel,
    zero_map,
)

logger = logging.getLogger(__name__)


def check_strict_short_exact(i: PairMap, p: PairMap, degree: int | None = None) -> None:
    """Raises NotStrictExact unless 0 → A' →i A →p A'' → 0 is a kernel-cokernel pair."""
    where = f" in degree {degree}" if degree is not None else ""
    if i.codomain != p.domain:
        raise DimensionMismatch(f"Short exact sequence is not composable{where}.")
    if not (is_monic(i) and is_strict(i)):
        raise NotStrictExact(f"First map is not a strict monic{where}.")
    if not (is_surjective(p.matrix) and is_strict(p)):
        raise NotStrictExact(f"Second map is not a strict epic{where}.")
    if image_basis(i.matrix) != kernel_basis(p.matrix):
        raise NotStrictExact(f"Image of the first map is not the kernel of the second{where}.")


def connecting_map(i: ChainMap, p: ChainMap, n: int) -> A2Map:
    """δⁿ: Hⁿ(A'') → Hⁿ⁺¹(A') on realizations, row by row via section, lift, differential, lift."""
    e_sub, e_mid, e_quot = embed_to_a2(i.source), embed_to_a2(i.target), embed_to_a2(p.target)
    quot_rows = cohomology_rows(e_quot, n)
    sub_rows = cohomology_rows(e_sub, n + 1)
    p_n, i_next = realize_map(p.component(n)), realize_map(i.component(n + 1))
    d_mid = e_mid.d(n)
    parts = []
    for row, (hq, hs) in enumerate(zip(quot_rows, sub_rows)):
        p_row = p_n.top if row == 0 else p_n.bottom
        i_row = i_next.top if row == 0 else i_next.bottom
        d_row = d_mid.top if row == 0 else d_mid.bottom
        lifted = solve(p_row, hq.representatives())
        parts.append(hs.classes(solve(i_row, d_row @ lifted)))
    return A2Map(a2_cohomology(e_quot, n), a2_cohomology(e_sub, n + 1), parts[0], parts[1])


def _left_sequence(i: ChainMap, p: ChainMap, lo: int, hi: int) -> tuple[list[A2Rep], list[A2Map]]:
    nodes, maps = [], []
    for n in range(lo, hi + 1):
        fi, fp = a2_cohomology_map(i, n), a2_cohomology_map(p, n)
        delta = connecting_map(i, p, n)
        nodes.extend([fi.source, fi.target, fp.target])
        maps.extend([fi, fp, delta])
    return nodes, maps


@dataclass(frozen=True)
class LongExactSequence:
    lo: int
    hi: int
    left_objects: dict = dc_field(repr=False)
    right_objects: dict = dc_field(repr=False)
    nodes: tuple[A2Rep, ...] = dc_field(repr=False)
    maps: tuple[A2Map, ...] = dc_field(repr=False)
    left_exact: bool = False
    right_exact: bool = False
    dual_maps: tuple[A2Map, ...] = dc_field(default=(), repr=False)
    heart_maps: tuple[HeartMorphism, ...] = dc_field(default=(), repr=False)
    heart_exact: bool = False

    @property
    def connecting(self) -> tuple[A2Map, ...]:
        return self.maps[2::3]

    @property
    def connecting_morphisms(self) -> tuple[HeartMorphism, ...]:
        """The connecting maps δⁿ as morphisms of the left heart."""
        return self.heart_maps[2::3]

    def to_json(self) -> dict:
        return {
            "degrees": [self.lo, self.hi],
            "left": {name: [o.invariants().to_json() for o in objs] for name, objs in self.left_objects.items()},
            "right": {name: [o.invariants().to_json() for o in objs] for name, objs in self.right_objects.items()},
            "connecting_zero": [d.is_zero() for d in self.connecting],
            "left_exact": self.left_exact,
            "heart_exact": self.heart_exact,
            "right_exact": self.right_exact,
        }


def les_of_ses(i: ChainMap, p: ChainMap, lo: int | None = None, hi: int | None = None) -> LongExactSequence:
    """Long exact sequences in both hearts for a degreewise strict short exact sequence of complexes.

    The default window reaches one degree beyond the complexes on each side so the
    sequence starts and ends at zero objects and every node can be certified.
    """
    if i.target != p.source:
        raise DimensionMismatch("Short exact sequence of complexes is not composable.")
    window = range(min(i.lo, p.lo), max(i.hi, p.hi) + 1)
    for n in window:
        check_strict_short_exact(i.component(n), p.component(n), n)
    lo = window.start - 1 if lo is None else lo
    hi = window.stop if hi is None else hi

    nodes, maps = _left_sequence(i, p, lo, hi)
    left_exact = a2_row_exact(maps)
    heart_maps = [heart_map_from_a2(m) for m in maps]
    heart_exact = is_exact_heart_sequence(heart_maps)
    # the right sequence is the Δ-transport of the left sequence of the dual short exact sequence
    _, dual_maps = _left_sequence(dual_chain_map(p), dual_chain_map(i), -hi, -lo)
    right_exact = a2_row_exact(dual_maps)

    complexes = {"sub": i.source, "middle": i.target, "quotient": p.target}
    left_objects = {name: [h_left(c, n) for n in range(lo, hi + 1)] for name, c in complexes.items()}
    right_objects = {name: [h_right(c, n) for n in range(lo, hi + 1)] for name, c in complexes.items()}
    logger.info(f"LES over degrees {lo}..{hi}: left exact {left_exact} (as heart morphisms {heart_exact}), "
                f"right exact {right_exact}")
    return LongExactSequence(lo, hi, left_objects, right_objects, tuple(nodes), tuple(maps),
                             left_exact, right_exact, tuple(dual_maps), tuple(heart_maps), heart_exact)


# -- Hausdorffification of realized sequences ---------------------------------

def hausdorff_sequence(maps: list[A2Map]) -> list[Matrix]:
    """Hd ∘ q_ℓ on realized maps: the map induced on the cokernels of the vertical maps."""
    out = []
    for m in maps:
        src_proj, src_section = quotient_presentation(image_basis(m.source.t))
        tgt_proj, _ = quotient_presentation(image_basis(m.target.t))
        out.append(tgt_proj @ m.bottom @ src_section)
    return out


def vector_sequence_exact(maps: list[Matrix]) -> bool:
    return all(image_basis(f) == kernel_basis(g) for f, g in zip(maps, maps[1:]))


def _bracket(maps: list[A2Map], field: FieldSpec) -> list[A2Map]:
    zero = a2_zero_rep(field)
    return [a2_zero(zero, maps[0].source)] + maps + [a2_zero(maps[-1].target, zero)]


def q_left_nonexact_witness(field: FieldSpec) -> dict:
    """0 → ι_ℓ(F,0) → ι_ℓ(F,F) → S → 0 is exact in the left heart but q_ℓ of it is not exact."""
    f_0, f_f = PairSpace.hausdorff(field, 1), PairSpace.indiscrete(field, 1)
    one = Matrix.identity(field, 1)
    x, y, s = iota_l(f_0), iota_l(f_f), singular_object(field)
    m1 = ChainMap.build(x.complex(), y.complex(), lambda n: one if n == 0 else Matrix.zeros(field, 0, 0))
    m2 = ChainMap.build(y.complex(), s.complex(), lambda n: one if n == 0 else Matrix.zeros(field, 1, 0))
    heart_maps = [direct_morphism(m1), direct_morphism(m2)]
    realized = _bracket([m.realize() for m in heart_maps], field)

    def q_map(c: ChainMap) -> PairMap:
        _, src = cokernel(c.source.d(-1))
        _, tgt = cokernel(c.target.d(-1))
        return factor_through_epi(src, compose(tgt, c.component(0)))

    q1, q2 = q_map(m1), q_map(m2)
    zero = PairSpace.zero(field)
    q_seq = [zero_map(zero, q1.domain), q1, q2, zero_map(q2.codomain, zero)]
    return {
        "heart_exact": a2_row_exact(realized) and is_exact_heart_sequence(heart_maps),
        "q_exact": is_exact_sequence(q_seq),
        "q_dims": [(m.domain.dim, m.domain.null_dim) for m in q_seq[1:]],
    }


def q_right_nonexact_witness(field: FieldSpec) -> dict:
    """0 → S_r → ι_r(F,0) → ι_r(F,F) → 0 is exact in the right heart but q_r of it is not exact."""
    f_0, f_f = PairSpace.hausdorff(field, 1), PairSpace.indiscrete(field, 1)
    one = Matrix.identity(field, 1)
    s, x, y = right_singular_object(field), iota_r(f_0), iota_r(f_f)
    m1 = ChainMap.build(s.complex(), x.complex(), lambda n: one if n == 0 else Matrix.zeros(field, 0, 1))
    m2 = ChainMap.build(x.complex(), y.complex(), lambda n: one if n == 0 else Matrix.zeros(field, 0, 0))
    # exactness in the right heart is exactness of the Δ-transported left sequence
    transported = [direct_morphism(dual_chain_map(m2)), direct_morphism(dual_chain_map(m1))]
    realized = _bracket([m.realize() for m in transported], field)

    def q_map(c: ChainMap) -> PairMap:
        _, src = kernel(c.source.d(0))
        _, tgt = kernel(c.target.d(0))
        return factor_through_mono(tgt, compose(c.component(0), src))

    q1, q2 = q_map(m1), q_map(m2)
    zero = PairSpace.zero(field)
    q_seq = [zero_map(zero, q1.domain), q1, q2, zero_map(q2.codomain, zero)]
    return {
        "heart_exact": a2_row_exact(realized),
        "q_exact": is_exact_sequence(q_seq),
        "q_dims": [(m.domain.dim, m.domain.null_dim) for m in q_seq[1:]],
    }


def hausdorff_les_witness(field: FieldSpec) -> dict:
    """A strict short exact sequence of complexes whose left LES is exact but whose Hausdorffification is not.

    C' = [0 → (F,F)], C = [(F,0) → (F,F)], C'' = [(F,0) → 0] in degrees -1, 0; the
    sequence 0 → ι(F,0) → ι(F,F) → S → 0 becomes 0 → F → 0 → 0.
    """
    f_0, f_f = PairSpace.hausdorff(field, 1), PairSpace.indiscrete(field, 1)
    zero = PairSpace.zero(field)
    one = Matrix.identity(field, 1)
    sub = SnComplex(-1, (zero, f_f), (zero_map(zero, f_f),))
    mid = SnComplex(-1, (f_0, f_f), (PairMap(f_0, f_f, one),))
    quot = SnComplex(-1, (f_0, zero), (zero_map(f_0, zero),))
    i = ChainMap.build(sub, mid, lambda n: one if n == 0 else Matrix.zeros(field, 1, 0))
    p = ChainMap.build(mid, quot, lambda n: one if n == -1 else Matrix.zeros(field, 0, 1))
    return hausdorff_check(les_of_ses(i, p))


def hausdorff_check(les: LongExactSequence) -> dict:
    hd_maps = hausdorff_sequence(list(les.maps))
    return {
        "heart_exact": les.left_exact,
        "hausdorff_exact": vector_sequence_exact(hd_maps),
        "hausdorff_dims": [m.cols for m in hd_maps],
    }


def image_sequence(maps: list[A2Map]) -> list[Matrix]:
    """Maps induced on the images of the vertical maps.

    Applied to the Δ-transported left sequence this is the dual of Hd ∘ q_r on the
    right sequence, so it is exact exactly when the right Hausdorffification is.
    """
    out = []
    for m in maps:
        src, tgt = image_basis(m.source.t), image_basis(m.target.t)
        out.append(tgt.coordinates(m.bottom @ src.inclusion()))
    return out


def right_hausdorff_check(les: LongExactSequence) -> dict:
    im_maps = image_sequence(list(les.dual_maps))
    return {
        "heart_exact": les.right_exact,
        "hausdorff_exact": vector_sequence_exact(im_maps),
        "hausdorff_dims": [m.cols for m in im_maps],
    }


def inclusion_example(field: FieldSpec) -> dict:
    """The dense-inclusion pattern under ℓ¹ ↦ (F,0), c₀ ↦ (F,F).

    f: (F,0) → (F,F) ⊕ (F,0), x ↦ (x, 0) and g: (y, z) ↦ z into (F,F). The ladder has
    Coim f = Coker f = (F,0), Ker g = Im g = (F,F) and X = 0, yet the heart homology in
    degree 0 is the singular object.
    """
    f_0, f_f = PairSpace.hausdorff(field, 1), PairSpace.indiscrete(field, 1)
    middle = biproduct(f_f, f_0)
    f = PairMap(f_0, middle, Matrix.from_rows(field, [[1], [0]]))
    g = PairMap(middle, f_f, Matrix.from_rows(field, [[0, 1]]))
    ladder = homology_ladder(f, g)
    c = SnComplex(-1, (f_0, middle, f_f), (f, g))
    h = h_left(c, 0)

    def pair(a: PairSpace) -> list[int]:
        return [a.dim, a.null_dim]

    return {
        "coim_f": pair(ladder.coim_f),
        "ker_g": pair(ladder.ker_g),
        "coker_f": pair(ladder.coker_f),
        "im_g": pair(ladder.im_g),
        "x_dim": ladder.x.dim,
        "phi_strict": is_strict(ladder.phi),
        "psi_strict": is_strict(ladder.psi),
        "phi_iso": is_isomorphism(ladder.phi),
        "psi_iso": is_isomorphism(ladder.psi),
        "heart_singular": heart_iso(h, singular_object(field)),
        "q_left_dim": q_l(h).dim,
    }


def nonepic_dual_example(field: FieldSpec) -> dict:
    """id: (F,0) → (F,F) is monic but D of it, 0 → F, is not epic."""
    f = PairMap(PairSpace.hausdorff(field, 1), PairSpace.indiscrete(field, 1), Matrix.identity(field, 1))
    return {"monic": is_monic(f), "dual_epic": is_epic(dual_D_map(f))}
