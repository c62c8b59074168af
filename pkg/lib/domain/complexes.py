"""Bounded cochain complexes of pair spaces and their A2-quiver realization.

Indexing is cohomological: the differential dⁿ goes from degree n to n + 1.
A pair space (V, N) is realized as the A2 representation N ↪ V; cohomology in
that abelian target is computed row by row.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from lib.common.errors import DimensionMismatch, NotAComplex
from lib.common.linalg import (
    FieldSpec,
    Matrix,
    Subspace,
    block_diag,
    hstack,
    image_basis,
    inverse,
    kernel_basis,
    quotient_presentation,
    rank,
    vstack,
)
from lib.domain.sn_category import (
    PairMap,
    PairSpace,
    biproduct,
    dual_D,
    dual_D_map,
    dual_Delta,
    dual_Delta_map,
    factor_through_mono,
    identity_map,
    image,
    kernel,
    quotient,
    zero_map,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SnComplex:
    """Objects in degrees lo..hi with differentials between consecutive degrees."""

    lo: int
    objects: tuple[PairSpace, ...]
    differentials: tuple[PairMap, ...]

    def __post_init__(self) -> None:
        if not self.objects:
            raise DimensionMismatch("A complex needs at least one object.")
        if len(self.differentials) != len(self.objects) - 1:
            raise DimensionMismatch("Need one differential between each pair of consecutive objects.")
        for i, d in enumerate(self.differentials):
            if d.domain != self.objects[i] or d.codomain != self.objects[i + 1]:
                raise DimensionMismatch(f"Differential d^{self.lo + i} has wrong endpoints.")
        for i, (d1, d2) in enumerate(zip(self.differentials, self.differentials[1:])):
            if not (d2.matrix @ d1.matrix).is_zero():
                raise NotAComplex(f"d^{self.lo + i + 1} ∘ d^{self.lo + i} ≠ 0")

    @property
    def hi(self) -> int:
        return self.lo + len(self.objects) - 1

    @property
    def field(self) -> FieldSpec:
        return self.objects[0].field

    @property
    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def obj(self, n: int) -> PairSpace:
        if self.lo <= n <= self.hi:
            return self.objects[n - self.lo]
        return PairSpace.zero(self.field)

    def d(self, n: int) -> PairMap:
        if self.lo <= n < self.hi:
            return self.differentials[n - self.lo]
        return zero_map(self.obj(n), self.obj(n + 1))

    def is_zero(self) -> bool:
        return all(o.dim == 0 for o in self.objects)

    @classmethod
    def build(cls, lo: int, hi: int, obj, diff) -> "SnComplex":
        """Complex from callables ``obj(n)`` and ``diff(n)`` (a PairMap dⁿ) over lo..hi."""
        objects = tuple(obj(n) for n in range(lo, hi + 1))
        return cls(lo, objects, tuple(diff(n) for n in range(lo, hi)))

    @classmethod
    def concentrated(cls, a: PairSpace, degree: int = 0) -> "SnComplex":
        return cls(degree, (a,), ())

    @classmethod
    def two_term(cls, f: PairMap, lo: int) -> "SnComplex":
        return cls(lo, (f.domain, f.codomain), (f,))

    @classmethod
    def zero(cls, field: FieldSpec, degree: int = 0) -> "SnComplex":
        return cls.concentrated(PairSpace.zero(field), degree)

    def window(self, lo: int, hi: int) -> "SnComplex":
        """Same complex presented over lo..hi; dropped degrees must hold zero objects."""
        if any(self.obj(n).dim for n in self.degrees if n < lo or n > hi):
            raise DimensionMismatch("Window would drop nonzero objects.")
        return SnComplex.build(lo, hi, self.obj, self.d)

    def to_json(self) -> dict:
        return {
            "degrees": [self.lo, self.hi],
            "objects": {str(n): self.obj(n).to_json() for n in self.degrees},
            "differentials": {str(n): self.d(n).matrix.to_json() for n in range(self.lo, self.hi)},
        }

    @classmethod
    def from_json(cls, field: FieldSpec, data: dict) -> "SnComplex":
        lo, hi = (int(x) for x in data["degrees"])
        objects = {n: PairSpace.from_json(field, data["objects"][str(n)]) for n in range(lo, hi + 1)}

        def diff(n: int) -> PairMap:
            raw = data.get("differentials", {}).get(str(n))
            if raw is None:
                return zero_map(objects[n], objects[n + 1])
            m = Matrix.from_json(field, raw, rows=objects[n + 1].dim, cols=objects[n].dim)
            return PairMap(objects[n], objects[n + 1], m)

        return cls.build(lo, hi, objects.__getitem__, diff)


@dataclass(frozen=True)
class ChainMap:
    """Degreewise PairMaps commuting with the differentials, over the union of both windows."""

    source: SnComplex
    target: SnComplex
    components: tuple[PairMap, ...]

    def __post_init__(self) -> None:
        if len(self.components) != len(self.degrees):
            raise DimensionMismatch("One component per degree of the union window is required.")
        for n in self.degrees:
            c = self.component(n)
            if c.domain != self.source.obj(n) or c.codomain != self.target.obj(n):
                raise DimensionMismatch(f"Chain map component in degree {n} has wrong endpoints.")
        for n in range(self.lo - 1, self.hi + 1):
            left = self.target.d(n).matrix @ self.component(n).matrix
            right = self.component(n + 1).matrix @ self.source.d(n).matrix
            if left != right:
                raise NotAComplex(f"Chain map does not commute with the differential in degree {n}.")

    @property
    def lo(self) -> int:
        return min(self.source.lo, self.target.lo)

    @property
    def hi(self) -> int:
        return max(self.source.hi, self.target.hi)

    @property
    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def component(self, n: int) -> PairMap:
        if self.lo <= n <= self.hi:
            return self.components[n - self.lo]
        return zero_map(self.source.obj(n), self.target.obj(n))

    @classmethod
    def build(cls, source: SnComplex, target: SnComplex, fn) -> "ChainMap":
        """``fn(n)`` returns the degree-n component as a Matrix or PairMap."""
        lo, hi = min(source.lo, target.lo), max(source.hi, target.hi)
        comps = []
        for n in range(lo, hi + 1):
            c = fn(n)
            comps.append(c if isinstance(c, PairMap) else PairMap(source.obj(n), target.obj(n), c))
        return cls(source, target, tuple(comps))


def identity_chain_map(a: SnComplex) -> ChainMap:
    return ChainMap.build(a, a, lambda n: identity_map(a.obj(n)))


def zero_chain_map(a: SnComplex, b: SnComplex) -> ChainMap:
    return ChainMap.build(a, b, lambda n: zero_map(a.obj(n), b.obj(n)))


def compose_chain(g: ChainMap, f: ChainMap) -> ChainMap:
    """g ∘ f."""
    if f.target != g.source:
        raise DimensionMismatch("Chain maps are not composable.")
    return ChainMap.build(f.source, g.target, lambda n: g.component(n).matrix @ f.component(n).matrix)


def add_chain(f: ChainMap, g: ChainMap) -> ChainMap:
    return ChainMap.build(f.source, f.target, lambda n: f.component(n).matrix + g.component(n).matrix)


def negate_chain(f: ChainMap) -> ChainMap:
    return ChainMap.build(f.source, f.target, lambda n: -f.component(n).matrix)


# -- shift and truncation -----------------------------------------------------

def shift(a: SnComplex, n: int) -> SnComplex:
    """Σⁿ: (ΣⁿA)^k = A^(k+n), differentials multiplied by (-1)ⁿ."""
    sign = -1 if n % 2 else 1
    diffs = tuple(PairMap(d.domain, d.codomain, d.matrix.scale(sign)) for d in a.differentials)
    return SnComplex(a.lo - n, a.objects, diffs)


def shift_chain(f: ChainMap, n: int) -> ChainMap:
    src, tgt = shift(f.source, n), shift(f.target, n)
    return ChainMap.build(src, tgt, lambda k: f.component(k + n).matrix)


def _truncate_zero(side: str, bound: str, a: SnComplex) -> SnComplex:
    if side == "left" and bound == "le":
        # ... → A^-1 → Ker d⁰
        k, inc = kernel(a.d(0))
        lo = min(a.lo, 0)

        def diff(n: int) -> PairMap:
            if n == -1:
                return factor_through_mono(inc, a.d(-1))
            return a.d(n)

        return SnComplex.build(lo, 0, lambda n: k if n == 0 else a.obj(n), diff)
    if side == "left" and bound == "ge":
        # Coim d^-1 → A⁰ → A¹ → ...
        d = a.d(-1)
        coim, _, section = quotient(d.domain, kernel_basis(d.matrix))
        hi = max(a.hi, 0)

        def diff(n: int) -> PairMap:
            if n == -1:
                return PairMap(coim, a.obj(0), d.matrix @ section)
            return a.d(n)

        return SnComplex.build(-1, hi, lambda n: coim if n == -1 else a.obj(n), diff)
    if side == "right" and bound == "le":
        # ... → A⁰ → Im d⁰
        im, inc = image(a.d(0))
        lo = min(a.lo, 0)

        def diff(n: int) -> PairMap:
            if n == 0:
                return factor_through_mono(inc, a.d(0))
            return a.d(n)

        return SnComplex.build(lo, 1, lambda n: im if n == 1 else a.obj(n), diff)
    if side == "right" and bound == "ge":
        # Coker d^-1 → A¹ → ...
        d = a.d(-1)
        coker, proj, section = quotient(d.codomain, image_basis(d.matrix))
        hi = max(a.hi, 0)

        def diff(n: int) -> PairMap:
            if n == 0:
                return PairMap(coker, a.obj(1), a.d(0).matrix @ section)
            return a.d(n)

        return SnComplex.build(0, hi, lambda n: coker if n == 0 else a.obj(n), diff)
    raise ValueError(f"Unknown truncation: side={side!r}, bound={bound!r}")


def truncate(side: str, bound: str, a: SnComplex, n: int = 0) -> SnComplex:
    """τ^{≤n} / τ^{≥n} for the left or right t-structure, as Σ^{-n} ∘ τ^{·0} ∘ Σ^{n}.

    Args:
        side: ``"left"`` or ``"right"``.
        bound: ``"le"`` for τ^{≤n} or ``"ge"`` for τ^{≥n}.
        a: Complex to truncate.
        n: Truncation degree.
    """
    return shift(_truncate_zero(side, bound, shift(a, n)), -n)


# -- cones --------------------------------------------------------------------

def mapping_cone(f: ChainMap) -> SnComplex:
    """Cone^n = A^(n+1) ⊕ B^n with d = [[-d_A, 0], [f, d_B]]."""
    a, b = f.source, f.target
    lo, hi = min(a.lo - 1, b.lo), max(a.hi - 1, b.hi)

    def obj(n: int) -> PairSpace:
        return biproduct(a.obj(n + 1), b.obj(n))

    def diff(n: int) -> PairMap:
        top = hstack(-a.d(n + 1).matrix, Matrix.zeros(a.field, a.obj(n + 2).dim, b.obj(n).dim))
        bottom = hstack(f.component(n + 1).matrix, b.d(n).matrix)
        return PairMap(obj(n), obj(n + 1), vstack(top, bottom))

    return SnComplex.build(lo, hi, obj, diff)


def cocone(h: ChainMap) -> tuple[SnComplex, ChainMap]:
    """Cocone P^k = C^k ⊕ Y^(k-1), d(c, y) = (dc, -hc - dy), with its projection to C.

    h ∘ pr is null-homotopic through (c, y) ↦ -y.
    """
    c, y = h.source, h.target
    lo, hi = min(c.lo, y.lo + 1), max(c.hi, y.hi + 1)

    def obj(n: int) -> PairSpace:
        return biproduct(c.obj(n), y.obj(n - 1))

    def diff(n: int) -> PairMap:
        top = hstack(c.d(n).matrix, Matrix.zeros(c.field, c.obj(n + 1).dim, y.obj(n - 1).dim))
        bottom = hstack(-h.component(n).matrix, -y.d(n - 1).matrix)
        return PairMap(obj(n), obj(n + 1), vstack(top, bottom))

    p = SnComplex.build(lo, hi, obj, diff)
    pr = ChainMap.build(p, c, lambda n: hstack(Matrix.identity(c.field, c.obj(n).dim),
                                               Matrix.zeros(c.field, c.obj(n).dim, y.obj(n - 1).dim)))
    return p, pr


# -- A2 realization -----------------------------------------------------------

@dataclass(frozen=True)
class A2Rep:
    """A representation t: V₁ → V₀ of the A2 quiver (top row V₁, bottom row V₀)."""

    field: FieldSpec
    top: int
    bottom: int
    t: Matrix

    def __post_init__(self) -> None:
        if self.t.shape != (self.bottom, self.top):
            raise DimensionMismatch("A2 vertical map has the wrong shape.")

    def invariants(self) -> tuple[int, int, int]:
        """(dim ker t, rank t, dim coker t): the Krull-Schmidt multiplicities of V→0, V→V, 0→V."""
        r = rank(self.t)
        return self.top - r, r, self.bottom - r

    def is_zero(self) -> bool:
        return self.top == 0 and self.bottom == 0

    def to_json(self) -> dict:
        return {"top": self.top, "bottom": self.bottom, "t": self.t.to_json()}


@dataclass(frozen=True)
class A2Map:
    source: A2Rep
    target: A2Rep
    top: Matrix
    bottom: Matrix

    def __post_init__(self) -> None:
        if self.top.shape != (self.target.top, self.source.top) or \
                self.bottom.shape != (self.target.bottom, self.source.bottom):
            raise DimensionMismatch("A2 map components have the wrong shape.")
        if self.target.t @ self.top != self.bottom @ self.source.t:
            raise NotAComplex("A2 map square does not commute.")

    def is_iso(self) -> bool:
        return (self.top.rows == self.top.cols == rank(self.top)
                and self.bottom.rows == self.bottom.cols == rank(self.bottom))

    def is_zero(self) -> bool:
        return self.top.is_zero() and self.bottom.is_zero()


def a2_compose(g: A2Map, f: A2Map) -> A2Map:
    if f.target != g.source:
        raise DimensionMismatch("A2 maps are not composable.")
    return A2Map(f.source, g.target, g.top @ f.top, g.bottom @ f.bottom)


def a2_inverse(f: A2Map) -> A2Map:
    return A2Map(f.target, f.source, inverse(f.top), inverse(f.bottom))


def a2_identity(r: A2Rep) -> A2Map:
    return A2Map(r, r, Matrix.identity(r.field, r.top), Matrix.identity(r.field, r.bottom))


def a2_zero(source: A2Rep, target: A2Rep) -> A2Map:
    f = source.field
    return A2Map(source, target, Matrix.zeros(f, target.top, source.top), Matrix.zeros(f, target.bottom, source.bottom))


def a2_zero_rep(field: FieldSpec) -> A2Rep:
    return A2Rep(field, 0, 0, Matrix.zeros(field, 0, 0))


def realize(a: PairSpace) -> A2Rep:
    return A2Rep(a.field, a.null_dim, a.dim, a.null.inclusion())


def realize_map(f: PairMap) -> A2Map:
    top = f.codomain.null.coordinates(f.matrix @ f.domain.null.inclusion())
    return A2Map(realize(f.domain), realize(f.codomain), top, f.matrix)


@dataclass(frozen=True)
class A2Complex:
    """Levelwise realization of a complex: representations plus horizontal A2 maps."""

    lo: int
    reps: tuple[A2Rep, ...]
    differentials: tuple[A2Map, ...]

    @property
    def hi(self) -> int:
        return self.lo + len(self.reps) - 1

    @property
    def field(self) -> FieldSpec:
        return self.reps[0].field

    def rep(self, n: int) -> A2Rep:
        if self.lo <= n <= self.hi:
            return self.reps[n - self.lo]
        return A2Rep(self.field, 0, 0, Matrix.zeros(self.field, 0, 0))

    def d(self, n: int) -> A2Map:
        if self.lo <= n < self.hi:
            return self.differentials[n - self.lo]
        src, tgt = self.rep(n), self.rep(n + 1)
        return A2Map(src, tgt, Matrix.zeros(self.field, tgt.top, src.top),
                     Matrix.zeros(self.field, tgt.bottom, src.bottom))


def embed_to_a2(a: SnComplex) -> A2Complex:
    return A2Complex(a.lo, tuple(realize(o) for o in a.objects), tuple(realize_map(d) for d in a.differentials))


@dataclass(frozen=True)
class RowHomology:
    """Hⁿ of one row: cycles Z, boundaries in Z-coordinates, class projection and a section."""

    cycles: Subspace
    proj: Matrix
    section: Matrix

    @property
    def dim(self) -> int:
        return self.proj.rows

    def classes(self, vectors: Matrix) -> Matrix:
        """Classes of cycle vectors (given as columns in the row's ambient space)."""
        return self.proj @ self.cycles.coordinates(vectors)

    def representatives(self) -> Matrix:
        return self.cycles.inclusion() @ self.section


def row_homology(d_in: Matrix, d_out: Matrix) -> RowHomology:
    z = kernel_basis(d_out)
    boundaries = image_basis(z.coordinates(d_in)) if d_in.cols else Subspace.zero(d_in.field, z.dim)
    proj, section = quotient_presentation(boundaries)
    return RowHomology(z, proj, section)


def cohomology_rows(c: A2Complex, n: int) -> tuple[RowHomology, RowHomology]:
    top = row_homology(c.d(n - 1).top, c.d(n).top)
    bottom = row_homology(c.d(n - 1).bottom, c.d(n).bottom)
    return top, bottom


def a2_cohomology(c: A2Complex, n: int) -> A2Rep:
    """Hⁿ row-wise with the induced vertical map."""
    top, bottom = cohomology_rows(c, n)
    t = bottom.classes(c.rep(n).t @ top.representatives())
    return A2Rep(c.field, top.dim, bottom.dim, t)


def a2_chain_components(f: ChainMap, n: int) -> A2Map:
    return realize_map(f.component(n))


def a2_cohomology_map(f: ChainMap, n: int) -> A2Map:
    """The map Hⁿ(embed source) → Hⁿ(embed target) induced by a chain map."""
    src, tgt = embed_to_a2(f.source), embed_to_a2(f.target)
    s_top, s_bot = cohomology_rows(src, n)
    t_top, t_bot = cohomology_rows(tgt, n)
    comp = realize_map(f.component(n))
    top = t_top.classes(comp.top @ s_top.representatives())
    bottom = t_bot.classes(comp.bottom @ s_bot.representatives())
    return A2Map(a2_cohomology(src, n), a2_cohomology(tgt, n), top, bottom)


def is_quasi_iso(f: ChainMap) -> bool:
    """True iff the A2 cohomology of the mapping cone vanishes in every degree."""
    cone = embed_to_a2(mapping_cone(f))
    result = all(a2_cohomology(cone, n).is_zero() for n in range(cone.lo, cone.hi + 1))
    logger.debug(f"Quasi-isomorphism test over degrees {cone.lo}..{cone.hi}: {result}")
    return result


def a2_row_exact(maps: list[A2Map]) -> bool:
    """Image equals kernel at every inner node, in both rows."""
    for f, g in zip(maps, maps[1:]):
        if f.target != g.source:
            raise DimensionMismatch("A2 sequence is not composable.")
        for first, second in ((f.top, g.top), (f.bottom, g.bottom)):
            if image_basis(first) != kernel_basis(second):
                return False
    return True


# -- dual complexes -----------------------------------------------------------

def dual_complex(a: SnComplex) -> SnComplex:
    """ΔA with (ΔA)^k = Δ(A^-k) and differential Δ(d^(-k-1))."""
    return SnComplex.build(-a.hi, -a.lo, lambda k: dual_Delta(a.obj(-k)),
                           lambda k: dual_Delta_map(a.d(-k - 1)))


def dual_chain_map(f: ChainMap) -> ChainMap:
    """Δf: ΔB → ΔA."""
    return ChainMap.build(dual_complex(f.target), dual_complex(f.source),
                          lambda k: dual_Delta_map(f.component(-k)))


def d_complex(a: SnComplex) -> SnComplex:
    """D applied degreewise, (DA)^k = D(A^-k)."""
    return SnComplex.build(-a.hi, -a.lo, lambda k: dual_D(a.obj(-k)),
                           lambda k: dual_D_map(a.d(-k - 1)))


def direct_sum_complex(a: SnComplex, b: SnComplex) -> SnComplex:
    lo, hi = min(a.lo, b.lo), max(a.hi, b.hi)
    return SnComplex.build(lo, hi, lambda n: biproduct(a.obj(n), b.obj(n)),
                           lambda n: PairMap(biproduct(a.obj(n), b.obj(n)), biproduct(a.obj(n + 1), b.obj(n + 1)),
                                             block_diag(a.d(n).matrix, b.d(n).matrix)))
