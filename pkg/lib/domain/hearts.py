"""Left and right hearts of the canonical t-structures on bounded complexes of pair spaces.

A left heart object is a monic a: A → B placed in degrees -1, 0; a right heart
object is a surjection b: B → C placed in degrees 0, 1. The left heart is
computed through the A2 realization T(a) = (N_B / a(N_A) → B / a(A)); the right
heart through the formal duality Δ, which swaps the two.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Callable

from lib.common.errors import EndpointMismatch, InternalInconsistency, NotAHeartObject, NotBounded
from lib.common.linalg import (
    FieldSpec,
    Matrix,
    Subspace,
    hstack,
    image_basis,
    is_injective,
    is_surjective,
    kernel_basis,
    kron,
    preimage,
    quotient_presentation,
    solve,
    vstack,
)
from lib.domain.complexes import (
    A2Map,
    A2Rep,
    ChainMap,
    SnComplex,
    a2_cohomology,
    a2_cohomology_map,
    a2_compose,
    a2_inverse,
    a2_row_exact,
    cohomology_rows,
    cocone,
    compose_chain,
    direct_sum_complex,
    dual_complex,
    embed_to_a2,
    identity_chain_map,
    is_quasi_iso,
)
from lib.domain.sn_category import (
    PairMap,
    PairSpace,
    cokernel,
    compose,
    dual_D_map,
    dual_Delta,
    dual_Delta_map,
    factor_through_epi,
    factor_through_mono,
    hom,
    homology_ladder,
    identity_map,
    image,
    is_isomorphism,
    is_monic,
    kernel,
    quotient,
    zero_map,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HeartInvariants:
    """Multiplicities of the indecomposables V→0 (w), V→V (h_null) and 0→V (h_quot)."""

    w: int
    h_null: int
    h_quot: int

    def as_tuple(self) -> tuple[int, int, int]:
        return self.w, self.h_null, self.h_quot

    def is_zero(self) -> bool:
        return self.as_tuple() == (0, 0, 0)

    def to_json(self) -> dict:
        return {"w": self.w, "h_null": self.h_null, "h_quot": self.h_quot}


@dataclass(frozen=True)
class LeftHeartObject:
    a: PairMap

    def __post_init__(self) -> None:
        if not is_monic(self.a):
            raise NotAHeartObject("Left heart objects are represented by monics.")

    def complex(self) -> SnComplex:
        return SnComplex.two_term(self.a, -1)

    def realization(self) -> A2Rep:
        return a2_cohomology(embed_to_a2(self.complex()), 0)

    def invariants(self) -> HeartInvariants:
        return HeartInvariants(*self.realization().invariants())

    def to_json(self) -> dict:
        return {"side": "left", "map": self.a.to_json(), "invariants": self.invariants().to_json()}


@dataclass(frozen=True)
class RightHeartObject:
    b: PairMap

    def __post_init__(self) -> None:
        if not is_surjective(self.b.matrix):
            raise NotAHeartObject("Right heart objects are represented by maps with zero cokernel (surjections).")

    def complex(self) -> SnComplex:
        return SnComplex.two_term(self.b, 0)

    def transport(self) -> LeftHeartObject:
        """Δ(b), a left heart object."""
        return LeftHeartObject(dual_Delta_map(self.b))

    def invariants(self) -> HeartInvariants:
        w, h_null, h_quot = self.transport().invariants().as_tuple()
        return HeartInvariants(w, h_quot, h_null)

    def realization_invariants(self) -> HeartInvariants:
        """Invariants of ker b → b⁻¹(N_C)/N_B, the dual of the realization of Δ(b), computed without Δ.

        w is the cokernel, h_null the kernel and h_quot the rank of that map.
        """
        k, null = kernel_basis(self.b.matrix), self.b.domain.null
        closed = preimage(self.b.matrix, self.b.codomain.null)
        span = k.sum(null)
        return HeartInvariants(closed.dim - span.dim, k.intersect(null).dim, span.dim - null.dim)

    def to_json(self) -> dict:
        return {"side": "right", "map": self.b.to_json(), "invariants": self.invariants().to_json()}


def heart_invariants(x: LeftHeartObject | RightHeartObject) -> HeartInvariants:
    return x.invariants()


def heart_iso(x: LeftHeartObject | RightHeartObject, y: LeftHeartObject | RightHeartObject) -> bool:
    if type(x) is not type(y):
        raise EndpointMismatch("Cannot compare objects of different hearts.")
    return x.invariants() == y.invariants()


# -- homology -----------------------------------------------------------------

def h_left(a: SnComplex, n: int) -> LeftHeartObject:
    """H_ℓⁿ(A): the monic φ: Coim d^(n-1) → Ker dⁿ."""
    d_prev, d = a.d(n - 1), a.d(n)
    coim, _, section = quotient(d_prev.domain, kernel_basis(d_prev.matrix))
    _, inc = kernel(d)
    return LeftHeartObject(factor_through_mono(inc, PairMap(coim, a.obj(n), d_prev.matrix @ section)))


def _psi(a: SnComplex, n: int) -> PairMap:
    d_prev, d = a.d(n - 1), a.d(n)
    coker, _, section = quotient(a.obj(n), image_basis(d_prev.matrix))
    _, inc = image(d)
    return factor_through_mono(inc, PairMap(coker, a.obj(n + 1), d.matrix @ section))


def h_right_with_witness(a: SnComplex, n: int) -> tuple[RightHeartObject, dict[str, PairMap]]:
    """H_rⁿ(A) by the direct formula ψ: Coker d^(n-1) → Im dⁿ, checked against Δ(H_ℓ^-n(ΔA)).

    The witness holds α: Coker d^(n-1) → Δ(Ker Δd^(n-1)) and β: Δ(Coim Δdⁿ) → Im dⁿ
    with ψ = β ∘ Δ(φ') ∘ α.
    """
    psi = _psi(a, n)
    phi_t = h_left(dual_complex(a), -n).a
    d_prev, d = a.d(n - 1), a.d(n)
    _, _, coker_section = quotient(a.obj(n), image_basis(d_prev.matrix))
    k = kernel_basis(d_prev.matrix.T)
    proj, _ = quotient_presentation(kernel_basis(d.matrix.T))
    _, inc_im = image(d)
    try:
        alpha = PairMap(psi.domain, dual_Delta(phi_t.codomain), k.basis @ coker_section)
        beta = factor_through_mono(inc_im, PairMap(dual_Delta(phi_t.domain), a.obj(n + 1), proj.T))
    except NotBounded as exc:
        raise InternalInconsistency(f"Δ-transport comparison maps are not bounded: {exc}") from exc
    transported = compose(beta, compose(dual_Delta_map(phi_t), alpha))
    if not (is_isomorphism(alpha) and is_isomorphism(beta)) or transported != psi:
        raise InternalInconsistency(f"Right heart homology in degree {n}: Δ-transport disagrees with ψ.")
    return RightHeartObject(psi), {"alpha": alpha, "beta": beta}


def h_right(a: SnComplex, n: int) -> RightHeartObject:
    return h_right_with_witness(a, n)[0]


def q_comparison(a: SnComplex, n: int) -> PairMap:
    """The isomorphism q_ℓ H_ℓⁿ(A) → q_r H_rⁿ(A), i.e. Coker φ → Ker ψ."""
    return homology_ladder(a.d(n - 1), a.d(n)).witnesses["coker_phi_to_ker_psi"]


# -- inclusions and their adjoints ---------------------------------------------

def iota_l(a: PairSpace) -> LeftHeartObject:
    return LeftHeartObject(zero_map(PairSpace.zero(a.field), a))


def iota_r(a: PairSpace) -> RightHeartObject:
    return RightHeartObject(zero_map(a, PairSpace.zero(a.field)))


def q_l(x: LeftHeartObject) -> PairSpace:
    return cokernel(x.a)[0]


def q_r(x: RightHeartObject) -> PairSpace:
    return kernel(x.b)[0]


def left_counit(z: PairSpace) -> PairMap:
    """ε_Z: q_ℓ ι_ℓ Z → Z, the inverse of the cokernel projection of 0 → Z."""
    return factor_through_epi(cokernel(iota_l(z).a)[1], identity_map(z))


def right_unit(z: PairSpace) -> PairMap:
    """η_Z: Z → q_r ι_r Z, the inverse of the kernel inclusion of Z → 0."""
    return factor_through_mono(kernel(iota_r(z).b)[1], identity_map(z))


def left_adjunction_check(x: LeftHeartObject, y: PairSpace,
                          counit: Callable[[PairSpace], PairMap] = left_counit) -> dict[str, bool]:
    """Triangle identities of q_ℓ ⊣ ι_ℓ at X and at Y; the unit is the cokernel projection."""
    qx, proj = cokernel(x.a)
    unit = ChainMap.build(x.complex(), iota_l(qx).complex(),
                          lambda n: proj if n == 0 else zero_map(x.a.domain, PairSpace.zero(qx.field)))
    q_unit = factor_through_epi(proj, compose(cokernel(iota_l(qx).a)[1], unit.component(0)))
    iy = iota_l(y)
    _, proj_y = cokernel(iy.a)
    unit_iy = ChainMap.build(iy.complex(), iota_l(proj_y.codomain).complex(),
                             lambda n: proj_y if n == 0 else zero_map(iy.a.domain, iy.a.domain))
    return {
        "q_counit_after_q_unit": compose(counit(qx), q_unit) == identity_map(qx),
        "iota_counit_after_unit": compose(counit(y), unit_iy.component(0)) == identity_map(y),
    }


def right_adjunction_check(x: RightHeartObject, y: PairSpace,
                           unit: Callable[[PairSpace], PairMap] = right_unit) -> dict[str, bool]:
    """Triangle identities of ι_r ⊣ q_r at X and at Y; the counit is the kernel inclusion."""
    kx, inc = kernel(x.b)
    counit = ChainMap.build(iota_r(kx).complex(), x.complex(),
                            lambda n: inc if n == 0 else zero_map(PairSpace.zero(kx.field), x.b.codomain))
    q_counit = factor_through_mono(inc, compose(counit.component(0), kernel(iota_r(kx).b)[1]))
    _, inc_y = kernel(iota_r(y).b)
    return {
        "q_counit_after_unit": compose(q_counit, unit(kx)) == identity_map(kx),
        "counit_after_iota_unit": compose(inc_y, unit(y)) == identity_map(y),
    }


def a2_hom_dim(r1: A2Rep, r2: A2Rep) -> int:
    """dim Hom_A2(r1, r2): pairs (top, bottom) with r2.t · top = bottom · r1.t."""
    f = r1.field
    system = hstack(kron(r2.t, Matrix.identity(f, r1.top)), -kron(Matrix.identity(f, r2.bottom), r1.t.T))
    return kernel_basis(system).dim


def iota_hom_comparison(a: PairSpace, b: PairSpace) -> tuple[int, int]:
    """(dim Hom_SN(A, B), dim Hom_heart(ι_ℓ A, ι_ℓ B)); equal when ι_ℓ is fully faithful."""
    return hom(a, b).dim, a2_hom_dim(iota_l(a).realization(), iota_l(b).realization())


# -- essential surjectivity of the realization --------------------------------

def heart_from_a2(rep: A2Rep) -> LeftHeartObject:
    """Left heart object realizing t: V₁ → V₀: B = (V₀ ⊕ ker t, im t ⊕ ker t), A = (ker t, 0), a(k) = (0, k)."""
    f = rep.field
    k = kernel_basis(rep.t).dim
    im_t = image_basis(rep.t)
    null_rows = [list(r) + [f.zero] * k for r in im_t.basis.entries]
    null_rows += [[f.zero] * rep.bottom + [f.one if i == j else f.zero for j in range(k)] for i in range(k)]
    b = PairSpace(Subspace.span(f, rep.bottom + k, null_rows))
    a = PairSpace.hausdorff(f, k)
    matrix = Matrix.from_columns(f, rep.bottom + k, [[f.zero] * rep.bottom + [f.one if i == j else f.zero
                                                                               for j in range(k)]
                                                     for i in range(k)]) if k else Matrix.zeros(f, rep.bottom, 0)
    return LeftHeartObject(PairMap(a, b, matrix))


def heart_dual(x: RightHeartObject) -> LeftHeartObject:
    """[b: B ↠ C] ↦ [D(b): D(C) → D(B)]."""
    return LeftHeartObject(dual_D_map(x.b))


# -- morphisms ----------------------------------------------------------------

@dataclass(frozen=True)
class HeartMorphism:
    """A roof source ← middle → target of left heart complexes whose left leg is a quasi-isomorphism."""

    source: LeftHeartObject
    target: LeftHeartObject
    left: ChainMap
    right: ChainMap

    def __post_init__(self) -> None:
        if self.left.target != self.source.complex() or self.right.target != self.target.complex():
            raise EndpointMismatch("Roof legs do not end at the stated objects.")
        if self.left.source != self.right.source:
            raise EndpointMismatch("Roof legs start at different complexes.")
        if not is_quasi_iso(self.left):
            raise NotAHeartObject("Left leg of a roof must be a quasi-isomorphism.")

    @property
    def middle(self) -> SnComplex:
        return self.left.source

    def realize(self) -> A2Map:
        """H⁰(right) ∘ H⁰(left)⁻¹ on the A2 realizations."""
        return a2_compose(a2_cohomology_map(self.right, 0), a2_inverse(a2_cohomology_map(self.left, 0)))


def direct_morphism(f: ChainMap) -> HeartMorphism:
    source = LeftHeartObject(f.source.d(-1))
    target = LeftHeartObject(f.target.d(-1))
    return HeartMorphism(source, target, identity_chain_map(f.source), f)


def identity_morphism(x: LeftHeartObject) -> HeartMorphism:
    return direct_morphism(identity_chain_map(x.complex()))


def roof_equal(m1: HeartMorphism, m2: HeartMorphism) -> bool:
    if m1.source != m2.source or m1.target != m2.target:
        raise EndpointMismatch("Morphisms have different endpoints.")
    r1, r2 = m1.realize(), m2.realize()
    return r1.top == r2.top and r1.bottom == r2.bottom


def roof_compose(m2: HeartMorphism, m1: HeartMorphism) -> HeartMorphism:
    """m2 ∘ m1 through the homotopy pullback of m1.right and m2.left."""
    if m1.target != m2.source:
        raise EndpointMismatch("Morphisms are not composable.")
    m1_mid, m2_mid = m1.middle, m2.middle
    total = direct_sum_complex(m1_mid, m2_mid)
    field = total.field

    def split(n: int, first: bool) -> Matrix:
        d1, d2 = m1_mid.obj(n).dim, m2_mid.obj(n).dim
        if first:
            return hstack(Matrix.identity(field, d1), Matrix.zeros(field, d1, d2))
        return hstack(Matrix.zeros(field, d2, d1), Matrix.identity(field, d2))

    h = ChainMap.build(total, m1.target.complex(),
                       lambda n: hstack(m1.right.component(n).matrix, -m2.left.component(n).matrix))
    p, pr = cocone(h)
    p1 = compose_chain(ChainMap.build(total, m1_mid, lambda n: split(n, True)), pr)
    p2 = compose_chain(ChainMap.build(total, m2_mid, lambda n: split(n, False)), pr)
    return HeartMorphism(m1.source, m2.target, compose_chain(m1.left, p1), compose_chain(m2.right, p2))


def is_exact_heart_sequence(morphisms: list[HeartMorphism]) -> bool:
    """Exactness of consecutive heart morphisms, read on their realizations."""
    return a2_row_exact([m.realize() for m in morphisms])


# -- classification oracle -----------------------------------------------------

def _all_subspaces(field: FieldSpec, n: int) -> list[Subspace]:
    seen: dict[tuple, Subspace] = {}
    vectors = list(itertools.product(range(field.p), repeat=n))
    for k in range(n + 1):
        for combo in itertools.combinations(vectors, k):
            s = Subspace.span(field, n, [list(v) for v in combo]) if combo else Subspace.zero(field, n)
            seen.setdefault(s.basis.entries, s)
    return list(seen.values())


def _all_matrices(field: FieldSpec, rows: int, cols: int):
    for values in itertools.product(range(field.p), repeat=rows * cols):
        yield Matrix._raw(field, rows, cols, [values[r * cols:(r + 1) * cols] for r in range(rows)])


def enumerate_monics(field: FieldSpec, max_total_dim: int) -> list[LeftHeartObject]:
    """All monic PairMaps A → B over a prime field with dim A + dim B ≤ max_total_dim."""
    spaces = {n: [PairSpace(s) for s in _all_subspaces(field, n)] for n in range(max_total_dim + 1)}
    objects = []
    for da in range(max_total_dim + 1):
        for db in range(da, max_total_dim - da + 1):
            for a in spaces[da]:
                for b in spaces[db]:
                    for m in _all_matrices(field, db, da):
                        if not is_injective(m) or not b.null.contains(a.null.image_under(m)):
                            continue
                        objects.append(LeftHeartObject(PairMap(a, b, m)))
    return objects


def _direct_quasi_iso_map(x: LeftHeartObject, y: LeftHeartObject) -> ChainMap | None:
    """Some chain map x → y of the representing complexes that is a quasi-isomorphism, if any."""
    field = x.a.field
    for f0 in _all_matrices(field, y.a.codomain.dim, x.a.codomain.dim):
        if not y.a.codomain.null.contains(x.a.codomain.null.image_under(f0)):
            continue
        try:
            f_minus = solve(y.a.matrix, f0 @ x.a.matrix)
            chain = ChainMap.build(x.complex(), y.complex(), lambda n: f0 if n == 0 else f_minus)
        except (NotBounded, ValueError):
            continue
        if a2_cohomology_map(chain, 0).is_iso():
            return chain
    return None


def classification_oracle(field: FieldSpec, max_total_dim: int = 3) -> dict:
    """Compares invariant equality with connectivity under quasi-isomorphisms.

    Objects are joined whenever a chain map between their representing complexes
    (in either direction) is a quasi-isomorphism; only pairs whose realized cohomology
    has equal dimensions are searched. Pairs with equal invariants left apart are then
    tried through roofs composed via their common normal form. Two objects found in one
    class are isomorphic in the heart.
    """
    objects = enumerate_monics(field, max_total_dim)
    parent = list(range(len(objects)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    dims = [(o.realization().top, o.realization().bottom) for o in objects]
    searched = 0
    for i, j in itertools.combinations(range(len(objects)), 2):
        if dims[i] != dims[j] or find(i) == find(j):
            continue
        searched += 1
        if (_direct_quasi_iso_map(objects[i], objects[j]) is not None
                or _direct_quasi_iso_map(objects[j], objects[i]) is not None):
            parent[find(i)] = find(j)

    invariants = [o.invariants() for o in objects]
    roof_joins = 0
    for i, j in itertools.combinations(range(len(objects)), 2):
        if invariants[i] != invariants[j] or find(i) == find(j):
            continue
        if normal_form_roof(objects[i], objects[j]) is not None:
            parent[find(i)] = find(j)
            roof_joins += 1

    mismatches = []
    for i, j in itertools.combinations(range(len(objects)), 2):
        if (invariants[i] == invariants[j]) != (find(i) == find(j)):
            mismatches.append((i, j))
    logger.info(f"Classification oracle: {len(objects)} objects, {searched} pairs searched, "
                f"{roof_joins} joined through roofs, {len(mismatches)} mismatches")
    return {
        "objects": len(objects),
        "classes": len({find(i) for i in range(len(objects))}),
        "invariant_classes": len(set(invariants)),
        "pairs_searched": searched,
        "roof_joins": roof_joins,
        "mismatches": mismatches,
    }


def singular_object(field: FieldSpec) -> LeftHeartObject:
    """S = [(F,0) ↪ (F,F)], the model of a dense non-closed inclusion."""
    return LeftHeartObject(PairMap(PairSpace.hausdorff(field, 1), PairSpace.indiscrete(field, 1),
                                   Matrix.identity(field, 1)))


def right_singular_object(field: FieldSpec) -> RightHeartObject:
    """S_r = [(F,0) → (F,F)] in degrees 0, 1; its Δ-transport is S."""
    return RightHeartObject(PairMap(PairSpace.hausdorff(field, 1), PairSpace.indiscrete(field, 1),
                                    Matrix.identity(field, 1)))


def heart_from_a2_witness(rep: A2Rep) -> A2Map:
    """An explicit isomorphism T(heart_from_a2(rep)) → rep."""
    obj = heart_from_a2(rep)
    f, k = rep.field, obj.a.domain.dim
    top, bottom = cohomology_rows(embed_to_a2(obj.complex()), 0)
    drop = hstack(Matrix.identity(f, rep.bottom), Matrix.zeros(f, rep.bottom, k))
    keep = hstack(Matrix.zeros(f, k, rep.bottom), Matrix.identity(f, k))
    null_vectors = obj.a.codomain.null.inclusion() @ top.representatives()
    # a null vector (x, κ) has x ∈ im t, lifted through t, and κ ∈ ker t
    top_map = solve(rep.t, drop @ null_vectors) + kernel_basis(rep.t).inclusion() @ (keep @ null_vectors)
    return A2Map(obj.realization(), rep, top_map, drop @ bottom.representatives())


def heart_map_from_a2(m: A2Map) -> HeartMorphism:
    """A direct morphism heart_from_a2(m.source) → heart_from_a2(m.target) realizing m.

    With t: V₁ → V₀ on both ends, f⁰(x, κ) = (m.bottom·x, y(x) + z(κ)) where z is m.top on
    ker t and y corrects the lift of im t chosen by ``solve``, so that the realized map
    agrees with m under the ``heart_from_a2_witness`` isomorphisms.
    """
    src, tgt = heart_from_a2(m.source), heart_from_a2(m.target)
    f, t1, t2 = m.source.field, m.source.t, m.target.t
    ker1, ker2, im1 = kernel_basis(t1), kernel_basis(t2), image_basis(t1)
    z = ker2.coordinates(m.top @ ker1.inclusion())
    lifts = solve(t1, im1.inclusion()) if im1.dim else Matrix.zeros(f, m.source.top, 0)
    target_lifts = solve(t2, m.bottom @ im1.inclusion()) if im1.dim else Matrix.zeros(f, m.target.top, 0)
    y = ker2.coordinates(m.top @ lifts - target_lifts) @ im1.coordinates(Matrix.identity(f, m.source.bottom),
                                                                       check=False)
    f0 = vstack(hstack(m.bottom, Matrix.zeros(f, m.target.bottom, ker1.dim)), hstack(y, z))
    chain = ChainMap.build(src.complex(), tgt.complex(), lambda n: f0 if n == 0 else z)
    return direct_morphism(chain)


def normal_form(inv: HeartInvariants, field: FieldSpec) -> LeftHeartObject:
    """The standard object with the given invariants: heart_from_a2 of t = [[I, 0], [0, 0]]."""
    top, bottom = inv.w + inv.h_null, inv.h_null + inv.h_quot
    t = Matrix.from_function(field, bottom, top, lambda i, j: 1 if i == j and i < inv.h_null else 0)
    return heart_from_a2(A2Rep(field, top, bottom, t))


def roofs_to_normal_form(x: LeftHeartObject) -> tuple[HeartMorphism, HeartMorphism] | None:
    """(x → N, N → x) for the normal form N of x, built on one direct quasi-isomorphism."""
    n = normal_form(x.invariants(), x.a.field)
    f = _direct_quasi_iso_map(n, x)
    if f is not None:
        return HeartMorphism(x, n, f, identity_chain_map(n.complex())), direct_morphism(f)
    h = _direct_quasi_iso_map(x, n)
    if h is not None:
        return direct_morphism(h), HeartMorphism(n, x, h, identity_chain_map(x.complex()))
    return None


def normal_form_roof(x: LeftHeartObject, y: LeftHeartObject) -> HeartMorphism | None:
    """An isomorphism x → y composed (``roof_compose``) through the shared normal form; None if none is found."""
    if x.invariants() != y.invariants():
        return None
    to_x, to_y = roofs_to_normal_form(x), roofs_to_normal_form(y)
    if to_x is None or to_y is None:
        return None
    m = roof_compose(to_y[1], to_x[0])
    return m if m.realize().is_iso() else None
