"""The computable quasi-abelian category of pair spaces.

A ``PairSpace`` (V, N) is a finite-dimensional space with a distinguished null
subspace N; it models a seminormed space whose vectors of seminorm zero are N.
A ``PairMap`` is a linear map sending null into null (the bounded operators of
the model). Kernels carry the induced null, cokernels the image of the null,
so closures never have to be taken: the closure of S in (V, N) is S + N.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field

from lib.common.errors import ComposabilityError, DimensionMismatch, InternalInconsistency, NotAComplex, NotBounded
from lib.common.linalg import (
    FieldSpec,
    Matrix,
    Subspace,
    block_diag,
    hstack,
    image_basis,
    inverse,
    is_injective,
    is_surjective,
    kernel_basis,
    kron,
    preimage,
    quotient_presentation,
    rank,
    solve,
    vstack,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PairSpace:
    """(V, N): ambient dimension plus null subspace."""

    null: Subspace

    @property
    def dim(self) -> int:
        return self.null.ambient_dim

    @property
    def field(self) -> FieldSpec:
        return self.null.field

    @property
    def null_dim(self) -> int:
        return self.null.dim

    @property
    def is_hausdorff(self) -> bool:
        return self.null.dim == 0

    @classmethod
    def make(cls, field: FieldSpec, dim: int, null_vectors=()) -> "PairSpace":
        return cls(Subspace.span(field, dim, [list(v) for v in null_vectors]) if null_vectors
                   else Subspace.zero(field, dim))

    @classmethod
    def zero(cls, field: FieldSpec) -> "PairSpace":
        return cls(Subspace.zero(field, 0))

    @classmethod
    def hausdorff(cls, field: FieldSpec, dim: int) -> "PairSpace":
        """(F^dim, 0), the model of a Banach space such as ℓ¹."""
        return cls(Subspace.zero(field, dim))

    @classmethod
    def indiscrete(cls, field: FieldSpec, dim: int) -> "PairSpace":
        """(F^dim, F^dim), every vector null."""
        return cls(Subspace.full(field, dim))

    def to_json(self) -> dict:
        return {"dim": self.dim, "null": self.null.basis.to_json()}

    @classmethod
    def from_json(cls, field: FieldSpec, data: dict) -> "PairSpace":
        dim = int(data["dim"])
        rows = data.get("null", [])
        return cls(Subspace.span(field, dim, Matrix.from_rows(field, rows, cols=dim)))


@dataclass(frozen=True)
class PairMap:
    """Null-preserving linear map; construction fails with ``NotBounded`` otherwise."""

    domain: PairSpace
    codomain: PairSpace
    matrix: Matrix = dc_field(repr=False)

    def __post_init__(self) -> None:
        if self.matrix.shape != (self.codomain.dim, self.domain.dim):
            raise DimensionMismatch(
                f"Matrix shape {self.matrix.shape} does not fit {self.domain.dim} → {self.codomain.dim}.")
        if not self.codomain.null.contains(self.domain.null.image_under(self.matrix)):
            raise NotBounded("Matrix does not map the domain null subspace into the codomain null subspace.")

    @property
    def field(self) -> FieldSpec:
        return self.domain.field

    def __matmul__(self, other: "PairMap") -> "PairMap":
        return compose(self, other)

    def to_json(self) -> dict:
        return {"domain": self.domain.to_json(), "codomain": self.codomain.to_json(),
                "matrix": self.matrix.to_json()}

    @classmethod
    def from_json(cls, field: FieldSpec, data: dict) -> "PairMap":
        domain = PairSpace.from_json(field, data["domain"])
        codomain = PairSpace.from_json(field, data["codomain"])
        matrix = Matrix.from_json(field, data["matrix"], rows=codomain.dim, cols=domain.dim)
        return validate_map(domain, codomain, matrix)


def validate_map(domain: PairSpace, codomain: PairSpace, matrix: Matrix) -> PairMap:
    """Returns the PairMap iff ``matrix`` preserves null subspaces."""
    try:
        return PairMap(domain, codomain, matrix)
    except NotBounded:
        logger.debug(f"Rejected unbounded map {domain.dim} → {codomain.dim}")
        raise


def identity_map(a: PairSpace) -> PairMap:
    return PairMap(a, a, Matrix.identity(a.field, a.dim))


def zero_map(a: PairSpace, b: PairSpace) -> PairMap:
    return PairMap(a, b, Matrix.zeros(a.field, b.dim, a.dim))


def compose(g: PairMap, f: PairMap) -> PairMap:
    """g ∘ f."""
    if f.codomain != g.domain:
        raise ComposabilityError("Codomain of the first map is not the domain of the second.")
    return PairMap(f.domain, g.codomain, g.matrix @ f.matrix)


def add_maps(f: PairMap, g: PairMap) -> PairMap:
    if (f.domain, f.codomain) != (g.domain, g.codomain):
        raise ComposabilityError("Maps with different endpoints cannot be added.")
    return PairMap(f.domain, f.codomain, f.matrix + g.matrix)


def scale_map(f: PairMap, c: object) -> PairMap:
    return PairMap(f.domain, f.codomain, f.matrix.scale(c))


# -- subobjects and quotients -------------------------------------------------

def subobject(a: PairSpace, s: Subspace) -> tuple[PairSpace, PairMap]:
    """S ⊆ V with the induced null S ∩ N, in the coordinates of S's canonical basis."""
    inc = s.inclusion()
    sub = PairSpace(preimage(inc, a.null))
    return sub, PairMap(sub, a, inc)


def quotient(a: PairSpace, s: Subspace) -> tuple[PairSpace, PairMap, Matrix]:
    """V/S with null (N + S)/S; returns the quotient, its projection and a linear section."""
    proj, section = quotient_presentation(s)
    q = PairSpace(a.null.image_under(proj))
    return q, PairMap(a, q, proj), section


def factor_through_mono(m: PairMap, h: PairMap) -> PairMap:
    """The unique x with m ∘ x = h for injective m (h must land in the image of m)."""
    return PairMap(h.domain, m.domain, solve(m.matrix, h.matrix))


def factor_through_epi(p: PairMap, h: PairMap) -> PairMap:
    """The unique x with x ∘ p = h for surjective p (h must vanish on ker p)."""
    return PairMap(p.codomain, h.codomain, solve(p.matrix.T, h.matrix.T).T)


def kernel(f: PairMap) -> tuple[PairSpace, PairMap]:
    return subobject(f.domain, kernel_basis(f.matrix))


def cokernel(f: PairMap) -> tuple[PairSpace, PairMap]:
    q, proj, _ = quotient(f.codomain, image_basis(f.matrix))
    return q, proj


def image(f: PairMap) -> tuple[PairSpace, PairMap]:
    """Kernel of the cokernel: the set image with the induced null."""
    return subobject(f.codomain, image_basis(f.matrix))


def coimage(f: PairMap) -> tuple[PairSpace, PairMap]:
    """Cokernel of the kernel: domain modulo ker f with the image of the null."""
    q, proj, _ = quotient(f.domain, kernel_basis(f.matrix))
    return q, proj


def coimage_image_comparison(f: PairMap) -> PairMap:
    """The canonical map Coim f → Im f."""
    _, proj, section = quotient(f.domain, kernel_basis(f.matrix))
    im_space, inc = image(f)
    return factor_through_mono(inc, PairMap(proj.codomain, f.codomain, f.matrix @ section))


def is_monic(f: PairMap) -> bool:
    return is_injective(f.matrix)


def is_epic(f: PairMap) -> bool:
    """Dense range: im f + N' = V'."""
    return image_basis(f.matrix).sum(f.codomain.null).dim == f.codomain.dim


def is_strict(f: PairMap) -> bool:
    """f(N) = im f ∩ N', i.e. Coim f → Im f is an isomorphism of pairs."""
    return f.domain.null.image_under(f.matrix) == image_basis(f.matrix).intersect(f.codomain.null)


def is_strict_monic(f: PairMap) -> bool:
    return is_monic(f) and is_strict(f)


def is_strict_epic(f: PairMap) -> bool:
    return is_surjective(f.matrix) and is_strict(f)


def is_isomorphism(f: PairMap) -> bool:
    return (f.domain.dim == f.codomain.dim and rank(f.matrix) == f.domain.dim
            and f.domain.null_dim == f.codomain.null_dim)


def inverse_map(f: PairMap) -> PairMap:
    if not is_isomorphism(f):
        raise NotBounded("Map is not an isomorphism of pairs.")
    return PairMap(f.codomain, f.domain, inverse(f.matrix))


def is_exact_sequence(maps: list[PairMap]) -> bool:
    """Exactness in the quasi-abelian sense: every map strict and im = ker at each inner node."""
    if not all(is_strict(m) for m in maps):
        return False
    for f, g in zip(maps, maps[1:]):
        if f.codomain != g.domain:
            raise ComposabilityError("Sequence is not composable.")
        if image_basis(f.matrix) != kernel_basis(g.matrix):
            return False
    return True


# -- limits and colimits ------------------------------------------------------

def biproduct(a: PairSpace, b: PairSpace) -> PairSpace:
    return PairSpace(Subspace.span(a.field, a.dim + b.dim, block_diag(a.null.basis, b.null.basis)))


def biproduct_maps(a: PairSpace, b: PairSpace) -> dict[str, PairMap]:
    """Injections and projections of A ⊕ B."""
    s, f = biproduct(a, b), a.field
    ia = vstack(Matrix.identity(f, a.dim), Matrix.zeros(f, b.dim, a.dim))
    ib = vstack(Matrix.zeros(f, a.dim, b.dim), Matrix.identity(f, b.dim))
    return {"in_a": PairMap(a, s, ia), "in_b": PairMap(b, s, ib),
            "pr_a": PairMap(s, a, ia.T), "pr_b": PairMap(s, b, ib.T)}


def direct_sum_map(f: PairMap, g: PairMap) -> PairMap:
    return PairMap(biproduct(f.domain, g.domain), biproduct(f.codomain, g.codomain),
                   block_diag(f.matrix, g.matrix))


def pullback(f: PairMap, g: PairMap) -> tuple[PairSpace, PairMap, PairMap]:
    """Pullback of A --f--> C <--g-- B as the kernel of [f, -g]: A ⊕ B → C."""
    if f.codomain != g.codomain:
        raise DimensionMismatch("Pullback needs a common codomain.")
    s = biproduct(f.domain, g.domain)
    p, inc = kernel(PairMap(s, f.codomain, hstack(f.matrix, -g.matrix)))
    bm = biproduct_maps(f.domain, g.domain)
    return p, compose(bm["pr_a"], inc), compose(bm["pr_b"], inc)


def pushout(f: PairMap, g: PairMap) -> tuple[PairSpace, PairMap, PairMap]:
    """Pushout of A <--f-- K --g--> B as the cokernel of (f, -g): K → A ⊕ B."""
    if f.domain != g.domain:
        raise DimensionMismatch("Pushout needs a common domain.")
    s = biproduct(f.codomain, g.codomain)
    q, proj = cokernel(PairMap(f.domain, s, vstack(f.matrix, -g.matrix)))
    bm = biproduct_maps(f.codomain, g.codomain)
    return q, compose(proj, bm["in_a"]), compose(proj, bm["in_b"])


def pushout_factorization(f: PairMap, g: PairMap, ha: PairMap, hb: PairMap) -> PairMap:
    """The map out of the pushout induced by ha: A → W and hb: B → W with ha∘f = hb∘g."""
    s = biproduct(f.codomain, g.codomain)
    _, proj = cokernel(PairMap(f.domain, s, vstack(f.matrix, -g.matrix)))
    return factor_through_epi(proj, PairMap(s, ha.codomain, hstack(ha.matrix, hb.matrix)))


def pullback_factorization(f: PairMap, g: PairMap, ha: PairMap, hb: PairMap) -> PairMap:
    """The map into the pullback induced by ha: W → A and hb: W → B with f∘ha = g∘hb."""
    s = biproduct(f.domain, g.domain)
    _, inc = kernel(PairMap(s, f.codomain, hstack(f.matrix, -g.matrix)))
    return factor_through_mono(inc, PairMap(ha.domain, s, vstack(ha.matrix, hb.matrix)))


# -- the homology ladder ------------------------------------------------------

@dataclass(frozen=True)
class HomologyLadder:
    """All objects and comparison maps attached to A' --f--> A --g--> A''."""

    f: PairMap
    g: PairMap
    coim_f: PairSpace
    ker_g: PairSpace
    coker_f: PairSpace
    im_g: PairSpace
    phi: PairMap
    psi: PairMap
    u: PairMap
    x: PairSpace
    witnesses: dict = dc_field(repr=False)

    def all_witnessed(self) -> bool:
        return all(is_isomorphism(w) for w in self.witnesses.values())


def homology_ladder(f: PairMap, g: PairMap) -> HomologyLadder:
    """Builds φ: Coim f → Ker g, ψ: Coker f → Im g, u: Ker g → Coker f and X = Coker φ.

    Every identification X ≅ Ker ψ ≅ Im u ≅ Coim u, Ker u ≅ Im f, Coker u ≅ Coim g
    and the pushout Y ≅ Coker f is returned as an explicit isomorphism.
    """
    if f.codomain != g.domain:
        raise ComposabilityError("f and g are not composable.")
    if not (g.matrix @ f.matrix).is_zero():
        raise NotAComplex("g ∘ f ≠ 0")
    a = f.codomain

    coim_f, _, coim_sec = quotient(f.domain, kernel_basis(f.matrix))
    ker_g, inc_kerg = kernel(g)
    phi = factor_through_mono(inc_kerg, PairMap(coim_f, a, f.matrix @ coim_sec))

    coker_f, proj_cok, cok_sec = quotient(a, image_basis(f.matrix))
    im_g, inc_img = image(g)
    psi = factor_through_mono(inc_img, PairMap(coker_f, g.codomain, g.matrix @ cok_sec))

    u = compose(proj_cok, inc_kerg)
    x, x_proj, x_sec = quotient(ker_g, image_basis(phi.matrix))
    u_bar = PairMap(x, coker_f, u.matrix @ x_sec)

    ker_psi, inc_kpsi = kernel(psi)
    im_u, inc_imu = image(u)
    coim_u, coimu_proj, _ = quotient(ker_g, kernel_basis(u.matrix))
    ker_u, inc_keru = kernel(u)
    im_f, inc_imf = image(f)
    coker_u, proj_coku, _ = quotient(coker_f, image_basis(u.matrix))
    coim_g, _, coimg_sec = quotient(a, kernel_basis(g.matrix))
    y, leg_a, leg_x = pushout(inc_kerg, x_proj)

    witnesses = {
        "coker_phi_to_ker_psi": factor_through_mono(inc_kpsi, u_bar),
        "coker_phi_to_im_u": factor_through_mono(inc_imu, u_bar),
        "coker_phi_to_coim_u": PairMap(x, coim_u, coimu_proj.matrix @ x_sec),
        "ker_u_to_im_f": factor_through_mono(inc_imf, compose(inc_kerg, inc_keru)),
        "coim_g_to_coker_u": PairMap(coim_g, coker_u, proj_coku.matrix @ proj_cok.matrix @ coimg_sec),
        "pushout_to_coker_f": pushout_factorization(inc_kerg, x_proj, proj_cok, u_bar),
    }
    ladder = HomologyLadder(f, g, coim_f, ker_g, coker_f, im_g, phi, psi, u, x, witnesses)
    if not (is_monic(phi) and is_epic(psi) and is_strict(u)):
        raise InternalInconsistency("Ladder maps violate monic/epic/strict expectations.")
    failing = [name for name, w in witnesses.items() if not is_isomorphism(w)]
    if failing:
        raise InternalInconsistency(f"Ladder witnesses are not isomorphisms: {failing}")
    logger.debug(f"Ladder built: dim X = {x.dim}, null {x.null_dim}, pushout dim {y.dim}")
    return ladder


# -- duality ------------------------------------------------------------------

def dual_D(a: PairSpace) -> PairSpace:
    """Continuous dual: D(V, N) = (Ann N, 0)."""
    return PairSpace.hausdorff(a.field, a.null.codim)


def dual_D_map(f: PairMap) -> PairMap:
    """D(f): D(B) → D(A), λ ↦ λ ∘ f, in annihilator coordinates."""
    ann_a, ann_b = f.domain.null.annihilator(), f.codomain.null.annihilator()
    return PairMap(dual_D(f.codomain), dual_D(f.domain),
                   ann_a.coordinates(f.matrix.T @ ann_b.inclusion()))


def dual_Delta(a: PairSpace) -> PairSpace:
    """Formal self-duality Δ(V, N) = (V*, Ann N)."""
    return PairSpace(a.null.annihilator())


def dual_Delta_map(f: PairMap) -> PairMap:
    return PairMap(dual_Delta(f.codomain), dual_Delta(f.domain), f.matrix.T)


def hausdorffify(a: PairSpace) -> tuple[PairSpace, PairMap]:
    """Hd(V, N) = (V/N, 0) with its projection."""
    q, proj, _ = quotient(a, a.null)
    return q, proj


def hausdorffify_map(f: PairMap) -> PairMap:
    hd_a, proj_a = hausdorffify(f.domain)
    hd_b, proj_b = hausdorffify(f.codomain)
    return factor_through_epi(proj_a, compose(proj_b, f))


def null_part(a: PairSpace) -> tuple[PairSpace, PairMap]:
    """ν(V, N) = (N, 0) with its inclusion into (V, N)."""
    nu = PairSpace.hausdorff(a.field, a.null_dim)
    return nu, PairMap(nu, a, a.null.inclusion())


def biduality_unit(a: PairSpace) -> PairMap:
    """A → D(D(A)), v ↦ (λ ↦ λ(v)); it is the Hausdorffification map up to isomorphism."""
    return PairMap(a, dual_D(dual_D(a)), a.null.annihilator().basis)


def d_cokernel_vs_kernel(f: PairMap) -> PairMap:
    """D(Coker f) → Ker(D f), induced by D of the cokernel projection."""
    _, proj = cokernel(f)
    _, inc = kernel(dual_D_map(f))
    return factor_through_mono(inc, dual_D_map(proj))


def d_image_vs_coimage(f: PairMap) -> PairMap:
    """Coim(D f) → D(Im f), induced by D of the image inclusion."""
    _, inc = image(f)
    df = dual_D_map(f)
    _, proj, section = quotient(df.domain, kernel_basis(df.matrix))
    restriction = dual_D_map(inc)
    return PairMap(proj.codomain, restriction.codomain, restriction.matrix @ section)


def delta_kernel_vs_cokernel(f: PairMap) -> PairMap:
    """Coker(Δ f) → Δ(Ker f), induced by Δ of the kernel inclusion."""
    _, inc = kernel(f)
    dfm = dual_Delta_map(f)
    _, proj, section = quotient(dfm.codomain, image_basis(dfm.matrix))
    restriction = dual_Delta_map(inc)
    return PairMap(proj.codomain, restriction.codomain, restriction.matrix @ section)


def delta_cokernel_vs_kernel(f: PairMap) -> PairMap:
    """Δ(Coker f) → Ker(Δ f), induced by Δ of the cokernel projection."""
    _, proj = cokernel(f)
    _, inc = kernel(dual_Delta_map(f))
    return factor_through_mono(inc, dual_Delta_map(proj))


# -- tensor and hom -----------------------------------------------------------

def tensor(a: PairSpace, b: PairSpace) -> PairSpace:
    """A ⊗ B with null N_A ⊗ B + A ⊗ N_B; basis index i * dim B + j."""
    f = a.field
    rows = vstack(kron(a.null.basis, Matrix.identity(f, b.dim)), kron(Matrix.identity(f, a.dim), b.null.basis))
    return PairSpace(Subspace.span(f, a.dim * b.dim, rows))


def tensor_map(f: PairMap, g: PairMap) -> PairMap:
    return PairMap(tensor(f.domain, g.domain), tensor(f.codomain, g.codomain), kron(f.matrix, g.matrix))


def hom_subspace(a: PairSpace, b: PairSpace) -> Subspace:
    """Null-preserving maps A → B as a subspace of F^(dim B · dim A), row-major vectorised."""
    f = a.field
    ann_b = b.null.annihilator()
    if ann_b.dim == 0 or a.null_dim == 0:
        return Subspace.full(f, b.dim * a.dim)
    return kernel_basis(kron(ann_b.basis, a.null.basis))


def hom(a: PairSpace, b: PairSpace) -> PairSpace:
    """Hom(A, B): null-preserving maps, with null the maps landing in N_B."""
    f = a.field
    h = hom_subspace(a, b)
    ann_b = b.null.annihilator()
    landing = (kernel_basis(kron(ann_b.basis, Matrix.identity(f, a.dim))) if ann_b.dim
               else Subspace.full(f, b.dim * a.dim))
    null = image_basis(h.coordinates(landing.inclusion())) if landing.dim else Subspace.zero(f, h.dim)
    return PairSpace(null)


def hom_vector(a: PairSpace, b: PairSpace, m: Matrix) -> Matrix:
    """Coordinates in hom(A, B) of the map with matrix m (a column vector)."""
    flat = Matrix.from_columns(m.field, m.rows * m.cols, [[x for row in m.entries for x in row]])
    return hom_subspace(a, b).coordinates(flat)


def curry_isomorphism(a: PairSpace, b: PairSpace, c: PairSpace) -> PairMap:
    """Hom(A ⊗ B, C) → Hom(A, Hom(B, C)), M ↦ (x ↦ (y ↦ M(x ⊗ y)))."""
    f = a.field
    h1 = hom_subspace(tensor(a, b), c)
    h_bc = hom_subspace(b, c)
    hom_bc = hom(b, c)
    h2 = hom_subspace(a, hom_bc)
    da, db, dc = a.dim, b.dim, c.dim
    columns = []
    for col in range(h1.dim):
        v = h1.basis.row(col)
        per_x = []
        for i in range(da):
            vec = [v[k * (da * db) + i * db + j] for k in range(dc) for j in range(db)]
            per_x.append(h_bc.coordinates(Matrix.from_columns(f, dc * db, [vec])).column(0))
        w = [per_x[i][r] for r in range(h_bc.dim) for i in range(da)]
        columns.append(h2.coordinates(Matrix.from_columns(f, h_bc.dim * da, [w])).column(0))
    return PairMap(hom(tensor(a, b), c), hom(a, hom_bc), Matrix.from_columns(f, h2.dim, columns))
