"""Finite groups acting on pair spaces.

A ``GPairModule`` is a pair space with a null-preserving linear action given by
one matrix per group element, indexed like the group's multiplication table.
Induced and coinduced modules use the basis (g, x) ↦ g * dim E + x.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field

from sympy.combinatorics.named_groups import AbelianGroup, DihedralGroup, SymmetricGroup

from conf.config import MAX_GROUP_ORDER
from lib.common.errors import DimensionMismatch, NotEquivariant, ResourceLimit, TaskValidationError
from lib.common.linalg import FieldSpec, Matrix, Subspace, block_diag, hstack, image_basis, kernel_basis, kron, vstack
from lib.domain.sn_category import (
    PairMap,
    PairSpace,
    biproduct,
    compose,
    dual_D,
    dual_D_map,
    factor_through_epi,
    factor_through_mono,
    hom,
    hom_subspace,
    identity_map,
    is_isomorphism,
    quotient,
    subobject,
    tensor,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FiniteGroup:
    """A group given by element names and a multiplication table of indices."""

    names: tuple[str, ...]
    table: tuple[tuple[int, ...], ...]
    identity: int = 0

    def __post_init__(self) -> None:
        n = len(self.names)
        if n == 0:
            raise TaskValidationError("A group needs at least one element.")
        if n > MAX_GROUP_ORDER:
            raise ResourceLimit(f"Group order {n} exceeds the cap {MAX_GROUP_ORDER}.")
        if len(self.table) != n or any(len(r) != n or any(not 0 <= x < n for x in r) for r in self.table):
            raise TaskValidationError("Multiplication table must be an n×n table of element indices.")
        e = self.identity
        if any(self.table[e][g] != g or self.table[g][e] != g for g in range(n)):
            raise TaskValidationError(f"{self.names[e]} is not an identity element.")
        if any(e not in row for row in self.table):
            raise TaskValidationError("Some element has no inverse.")
        for a in range(n):
            for b in range(n):
                ab = self.table[a][b]
                for c in range(n):
                    if self.table[ab][c] != self.table[a][self.table[b][c]]:
                        raise TaskValidationError(
                            f"Multiplication is not associative at ({self.names[a]}, {self.names[b]}, {self.names[c]}).")

    @property
    def order(self) -> int:
        return len(self.names)

    @property
    def elements(self) -> range:
        return range(self.order)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.table[a].index(self.identity)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise TaskValidationError(f"Unknown group element: {name!r}") from None

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        return cls(tuple(str(i) for i in range(n)), tuple(tuple((i + j) % n for j in range(n)) for i in range(n)))

    @classmethod
    def trivial(cls) -> "FiniteGroup":
        return cls.cyclic(1)

    @classmethod
    def from_permutation_group(cls, group) -> "FiniteGroup":
        """Multiplication table of a sympy permutation group, identity first, then by array form."""
        elements = sorted(group.elements, key=lambda p: (not p.is_Identity, p.array_form))
        lookup = {tuple(p.array_form): i for i, p in enumerate(elements)}
        names = tuple("e" if p.is_Identity else str(tuple(p.array_form)).replace(" ", "") for p in elements)
        table = tuple(tuple(lookup[tuple((a * b).array_form)] for b in elements) for a in elements)
        return cls(names, table)

    @classmethod
    def named(cls, name: str) -> "FiniteGroup":
        """Named groups: ``Z<n>``, ``Z2xZ2`` (Klein four), ``D<n>`` (order 2n), ``S<n>``."""
        key = name.strip().upper()
        if key in ("Z2XZ2", "V4", "KLEIN"):
            return cls.from_permutation_group(AbelianGroup(2, 2))
        kind, digits = key[0], key[1:]
        if not digits.isdigit():
            raise TaskValidationError(f"Unknown group name: {name!r}")
        n = int(digits)
        if kind == "Z":
            return cls.cyclic(n)
        if kind == "D":
            return cls.from_permutation_group(DihedralGroup(n))
        if kind == "S":
            return cls.from_permutation_group(SymmetricGroup(n))
        raise TaskValidationError(f"Unknown group name: {name!r}")

    def to_json(self) -> dict:
        return {"elements": list(self.names), "table": [list(r) for r in self.table],
                "identity": self.names[self.identity]}

    @classmethod
    def from_json(cls, data: dict | str) -> "FiniteGroup":
        if isinstance(data, str):
            return cls.named(data)
        names = tuple(str(x) for x in data["elements"])
        identity = names.index(data["identity"]) if "identity" in data else 0
        return cls(names, tuple(tuple(int(x) for x in row) for row in data["table"]), identity)


def left_regular(group: FiniteGroup, field: FieldSpec, h: int) -> Matrix:
    """Permutation matrix of g ↦ hg on F[G]."""
    return Matrix.from_sparse(field, group.order, group.order, {(group.mul(h, g), g): 1 for g in group.elements})


def right_shift(group: FiniteGroup, field: FieldSpec, h: int) -> Matrix:
    """Matrix of (hφ)(g) = φ(gh) on functions G → F."""
    return Matrix.from_sparse(field, group.order, group.order, {(g, group.mul(g, h)): 1 for g in group.elements})


@dataclass(frozen=True)
class GPairModule:
    group: FiniteGroup
    space: PairSpace
    action: tuple[Matrix, ...] = dc_field(repr=False)

    def __post_init__(self) -> None:
        g = self.group
        if len(self.action) != g.order:
            raise DimensionMismatch("One action matrix per group element is required.")
        for m in self.action:
            if m.shape != (self.dim, self.dim):
                raise DimensionMismatch("Action matrices must be square of the module dimension.")
            PairMap(self.space, self.space, m)
        if self.action[g.identity] != Matrix.identity(self.field, self.dim):
            raise NotEquivariant("The identity element must act trivially.")
        for a in g.elements:
            for b in g.elements:
                if self.action[a] @ self.action[b] != self.action[g.mul(a, b)]:
                    raise NotEquivariant(f"Action is not a homomorphism at ({g.names[a]}, {g.names[b]}).")

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def field(self) -> FieldSpec:
        return self.space.field

    def rho(self, g: int) -> Matrix:
        return self.action[g]

    def rho_map(self, g: int) -> PairMap:
        return PairMap(self.space, self.space, self.action[g])

    def to_json(self) -> dict:
        data = self.space.to_json()
        data["action"] = {name: self.action[i].to_json() for i, name in enumerate(self.group.names)}
        return data

    @classmethod
    def from_json(cls, group: FiniteGroup, field: FieldSpec, data: dict) -> "GPairModule":
        space = PairSpace.from_json(field, data)
        raw = data.get("action", {})
        action = []
        for i, name in enumerate(group.names):
            if name in raw:
                action.append(Matrix.from_json(field, raw[name], rows=space.dim, cols=space.dim))
            elif i == group.identity:
                action.append(Matrix.identity(field, space.dim))
            else:
                raise TaskValidationError(f"No action matrix for group element {name!r}.")
        return cls(group, space, tuple(action))


@dataclass(frozen=True)
class GMap:
    source: GPairModule
    target: GPairModule
    map: PairMap

    def __post_init__(self) -> None:
        if self.map.domain != self.source.space or self.map.codomain != self.target.space:
            raise DimensionMismatch("Underlying map does not fit the modules.")
        for g in self.source.group.elements:
            if self.map.matrix @ self.source.rho(g) != self.target.rho(g) @ self.map.matrix:
                raise NotEquivariant(f"Map does not commute with {self.source.group.names[g]}.")

    @property
    def matrix(self) -> Matrix:
        return self.map.matrix


def gmap(source: GPairModule, target: GPairModule, matrix: Matrix) -> GMap:
    return GMap(source, target, PairMap(source.space, target.space, matrix))


def compose_g(g: GMap, f: GMap) -> GMap:
    return GMap(f.source, g.target, compose(g.map, f.map))


def identity_g(m: GPairModule) -> GMap:
    return GMap(m, m, identity_map(m.space))


# -- the four basic functors --------------------------------------------------

def trivial(group: FiniteGroup, e: PairSpace) -> GPairModule:
    return GPairModule(group, e, tuple(Matrix.identity(e.field, e.dim) for _ in group.elements))


def forget(m: GPairModule) -> PairSpace:
    return m.space


def induce(group: FiniteGroup, e: PairSpace) -> GPairModule:
    """↑E = F[G] ⊗ E with h(g ⊗ x) = hg ⊗ x and null F[G] ⊗ N_E."""
    f = e.field
    space = tensor(PairSpace.hausdorff(f, group.order), e)
    ident = Matrix.identity(f, e.dim)
    return GPairModule(group, space, tuple(kron(left_regular(group, f, h), ident) for h in group.elements))


def coinduce(group: FiniteGroup, e: PairSpace) -> GPairModule:
    """⇑E = Maps(G, E) with (hφ)(g) = φ(gh) and null Maps(G, N_E)."""
    f = e.field
    space = tensor(PairSpace.hausdorff(f, group.order), e)
    ident = Matrix.identity(f, e.dim)
    return GPairModule(group, space, tuple(kron(right_shift(group, f, h), ident) for h in group.elements))


def induce_map(group: FiniteGroup, f: PairMap) -> PairMap:
    """↑f = ⇑f = id_F[G] ⊗ f."""
    src, tgt = tensor(PairSpace.hausdorff(f.field, group.order), f.domain), \
        tensor(PairSpace.hausdorff(f.field, group.order), f.codomain)
    return PairMap(src, tgt, kron(Matrix.identity(f.field, group.order), f.matrix))


def _relations(m: GPairModule) -> tuple[Matrix, Matrix]:
    ident = Matrix.identity(m.field, m.dim)
    diffs = [ident - m.rho(g) for g in m.group.elements]
    return hstack(*diffs), vstack(*diffs)


def coinvariants(m: GPairModule) -> tuple[PairSpace, PairMap]:
    """M_G = M / span{m - gm}, with the image of the null."""
    span, _ = _relations(m)
    q, proj, _ = quotient(m.space, image_basis(span))
    return q, proj


def invariants(m: GPairModule) -> tuple[PairSpace, PairMap]:
    """M^G = {m : gm = m} with the induced null."""
    _, stacked = _relations(m)
    return subobject(m.space, kernel_basis(stacked))


def coinvariants_map(f: GMap) -> PairMap:
    _, src = coinvariants(f.source)
    _, tgt = coinvariants(f.target)
    return factor_through_epi(src, compose(tgt, f.map))


def invariants_map(f: GMap) -> PairMap:
    _, src = invariants(f.source)
    _, tgt = invariants(f.target)
    return factor_through_mono(tgt, compose(f.map, src))


# -- submodules, quotients and sums -------------------------------------------

def g_span(m: GPairModule, vectors: Matrix) -> Subspace:
    """Smallest G-stable subspace containing the columns of ``vectors``."""
    return image_basis(hstack(*(m.rho(g) @ vectors for g in m.group.elements)))


def submodule(m: GPairModule, s: Subspace) -> tuple[GPairModule, GMap]:
    space, inc = subobject(m.space, s)
    action = tuple(s.coordinates(m.rho(g) @ s.inclusion()) for g in m.group.elements)
    sub = GPairModule(m.group, space, action)
    return sub, GMap(sub, m, inc)


def quotient_module(m: GPairModule, s: Subspace) -> tuple[GPairModule, GMap]:
    space, proj, section = quotient(m.space, s)
    action = tuple(proj.matrix @ m.rho(g) @ section for g in m.group.elements)
    q = GPairModule(m.group, space, action)
    return q, GMap(m, q, proj)


def with_null(m: GPairModule, null: Subspace) -> GPairModule:
    """Same action on a new G-stable null subspace."""
    return GPairModule(m.group, PairSpace(null), m.action)


def direct_sum(a: GPairModule, b: GPairModule) -> GPairModule:
    return GPairModule(a.group, biproduct(a.space, b.space),
                       tuple(block_diag(a.rho(g), b.rho(g)) for g in a.group.elements))


def dual_module(m: GPairModule) -> GPairModule:
    """D(M) = (Ann N, 0) with (gλ)(x) = λ(g⁻¹x)."""
    g = m.group
    return GPairModule(g, dual_D(m.space), tuple(dual_D_map(m.rho_map(g.inv(h))).matrix for h in g.elements))


def tensor_module(a: GPairModule, b: GPairModule) -> GPairModule:
    """A ⊗ B with the diagonal action."""
    return GPairModule(a.group, tensor(a.space, b.space), tuple(kron(a.rho(g), b.rho(g)) for g in a.group.elements))


def hom_module(a: GPairModule, b: GPairModule) -> GPairModule:
    """Hom(A, B) with (gf) = ρ_B(g) f ρ_A(g⁻¹), in the coordinates of the bounded maps."""
    g = a.group
    h = hom_subspace(a.space, b.space)
    action = tuple(h.coordinates(kron(b.rho(x), a.rho(g.inv(x)).T) @ h.inclusion()) for x in g.elements)
    return GPairModule(g, hom(a.space, b.space), action)


def tensor_over_G(a: GPairModule, b: GPairModule) -> PairSpace:
    return coinvariants(tensor_module(a, b))[0]


def hom_G(a: GPairModule, b: GPairModule) -> PairSpace:
    return invariants(hom_module(a, b))[0]


# -- adjunctions --------------------------------------------------------------

def induction_unit(group: FiniteGroup, e: PairSpace) -> PairMap:
    """E → ↓↑E, x ↦ e ⊗ x."""
    f = e.field
    col = Matrix.from_sparse(f, group.order, 1, {(group.identity, 0): 1})
    return PairMap(e, induce(group, e).space, kron(col, Matrix.identity(f, e.dim)))


def induction_counit(m: GPairModule) -> GMap:
    """↑↓M → M, g ⊗ x ↦ gx."""
    return gmap(induce(m.group, m.space), m, hstack(*(m.rho(g) for g in m.group.elements)))


def coinduction_unit(m: GPairModule) -> GMap:
    """M → ⇑↓M, x ↦ (g ↦ gx)."""
    return gmap(m, coinduce(m.group, m.space), vstack(*(m.rho(g) for g in m.group.elements)))


def coinduction_counit(group: FiniteGroup, e: PairSpace) -> PairMap:
    """↓⇑E → E, φ ↦ φ(e)."""
    f = e.field
    row = Matrix.from_sparse(f, 1, group.order, {(0, group.identity): 1})
    return PairMap(coinduce(group, e).space, e, kron(row, Matrix.identity(f, e.dim)))


def verify_adjunctions(m: GPairModule, e: PairSpace) -> dict[str, bool]:
    """Triangle identities of ↑ ⊣ ↓ ⊣ ⇑ and ( )_G ⊣ ε ⊣ ( )^G on the module M and the space E.

    Every unit and counit is built as an equivariant map, so construction itself
    certifies equivariance; a failing key names the identity that breaks.
    """
    g = m.group
    up_e = induce(g, e)
    report = {}

    # ↑ ⊣ ↓
    eps_up = induction_counit(up_e)
    report["induce: counit ∘ ↑unit = id"] = \
        compose(eps_up.map, induce_map(g, induction_unit(g, e))) == identity_map(up_e.space)
    report["induce: ↓counit ∘ unit = id"] = \
        compose(induction_counit(m).map, induction_unit(g, m.space)) == identity_map(m.space)

    # ↓ ⊣ ⇑
    co_e = coinduce(g, e)
    report["coinduce: ⇑counit ∘ unit = id"] = \
        compose(induce_map(g, coinduction_counit(g, e)), coinduction_unit(co_e).map) == identity_map(co_e.space)
    report["coinduce: counit ∘ ↓unit = id"] = \
        compose(coinduction_counit(g, m.space), coinduction_unit(m).map) == identity_map(m.space)

    # ( )_G ⊣ ε: unit M → ε(M_G) is the projection, counit (εE)_G → E the identity
    mg, proj = coinvariants(m)
    unit_m = gmap(m, trivial(g, mg), proj.matrix)
    q_unit = coinvariants_map(unit_m)
    report["coinvariants: counit ∘ (unit)_G = id"] = \
        compose(PairMap(q_unit.codomain, mg, Matrix.identity(m.field, mg.dim)), q_unit) == identity_map(mg)
    te = trivial(g, e)
    te_g, te_proj = coinvariants(te)
    report["coinvariants: ε(counit) ∘ unit_ε = id"] = \
        compose(PairMap(te_g, e, Matrix.identity(e.field, e.dim)), te_proj) == identity_map(e)

    # ε ⊣ ( )^G: unit E → (εE)^G the identity, counit ε(M^G) → M the inclusion
    mi, inc = invariants(m)
    counit_m = gmap(trivial(g, mi), m, inc.matrix)
    inv_counit = invariants_map(counit_m)
    report["invariants: (counit)^G ∘ unit = id"] = \
        compose(inv_counit, PairMap(mi, inv_counit.domain, Matrix.identity(m.field, mi.dim))) == identity_map(mi)
    te_i, te_inc = invariants(te)
    report["invariants: counit_ε ∘ ε(unit) = id"] = \
        compose(te_inc, PairMap(e, te_i, Matrix.identity(e.field, e.dim))) == identity_map(e)

    failing = [k for k, ok in report.items() if not ok]
    if failing:
        logger.error(f"Adjunction identities failing: {failing}")
    return report


def induced_dual_iso(group: FiniteGroup, e: PairSpace) -> GMap:
    """D(↑E) → ⇑D(E): a functional λ on ↑E becomes g ↦ λ(g⁻¹ ⊗ ·)."""
    f = e.field
    src, tgt = dual_module(induce(group, e)), coinduce(group, dual_D(e))
    perm = Matrix.from_sparse(f, group.order, group.order, {(group.inv(g), g): 1 for g in group.elements})
    # both sides use F[G] ⊗ Ann N_E coordinates; only the group index is reflected
    m = kron(perm, Matrix.identity(f, dual_D(e).dim))
    result = gmap(src, tgt, m)
    if not is_isomorphism(result.map):
        raise NotEquivariant("Reflection does not identify D(↑E) with ⇑D(E).")
    return result


def dual_coinvariants_iso(m: GPairModule) -> PairMap:
    """D(M_G) → (DM)^G, induced by D of the coinvariant projection."""
    _, proj = coinvariants(m)
    _, inc = invariants(dual_module(m))
    return factor_through_mono(inc, dual_D_map(proj))


def augmentation_sequence(group: FiniteGroup, field: FieldSpec) -> tuple[GMap, GMap]:
    """0 → I → F[G] → F → 0 with the augmentation ideal I, all Hausdorff."""
    regular = induce(group, PairSpace.hausdorff(field, 1))
    aug = gmap(regular, trivial(group, PairSpace.hausdorff(field, 1)),
               Matrix.from_sparse(field, 1, group.order, {(0, g): 1 for g in group.elements}))
    ideal, inc = submodule(regular, kernel_basis(aug.matrix))
    return inc, aug
