"""Seeded random instances for the law suites: spaces, bounded maps, complexes and group modules."""

import random

from conf.config import LAW_MODULE_DIM
from lib.common.linalg import FieldSpec, Matrix, Subspace, hstack, inverse, quotient_presentation
from lib.domain.complexes import ChainMap, SnComplex
from lib.domain.groups import (
    FiniteGroup,
    GMap,
    GPairModule,
    coinduce,
    g_span,
    induce,
    quotient_module,
    submodule,
    trivial,
    with_null,
)
from lib.domain.sn_category import PairMap, PairSpace, cokernel, compose, quotient, subobject

FIELDS = (FieldSpec.rationals(), FieldSpec.prime(2), FieldSpec.prime(5))
GROUP_FIELDS = (("Z2", 2), ("Z3", 3), ("Z2xZ2", 2))


def random_field(rng: random.Random) -> FieldSpec:
    return rng.choice(FIELDS)


def random_scalar(rng: random.Random, field: FieldSpec) -> int:
    if field.is_prime:
        return rng.randrange(field.p)
    return rng.randint(-3, 3)


def random_matrix(rng: random.Random, field: FieldSpec, rows: int, cols: int) -> Matrix:
    return Matrix.from_function(field, rows, cols, lambda i, j: random_scalar(rng, field))


def random_subspace(rng: random.Random, field: FieldSpec, n: int) -> Subspace:
    k = rng.randint(0, n)
    if k == 0:
        return Subspace.zero(field, n)
    return Subspace.span(field, n, random_matrix(rng, field, k, n))


def random_space(rng: random.Random, field: FieldSpec, max_dim: int = 3) -> PairSpace:
    return PairSpace(random_subspace(rng, field, rng.randint(0, max_dim)))


def random_map(rng: random.Random, a: PairSpace, b: PairSpace) -> PairMap:
    """A random bounded map: the null basis of A goes into N_B, a complement anywhere."""
    field = a.field
    _, section = quotient_presentation(a.null)
    basis = hstack(a.null.inclusion(), section)
    on_null = b.null.inclusion() @ random_matrix(rng, field, b.null_dim, a.null_dim)
    on_rest = random_matrix(rng, field, b.dim, a.dim - a.null_dim)
    return PairMap(a, b, hstack(on_null, on_rest) @ inverse(basis))


def random_pair(rng: random.Random, field: FieldSpec, max_dim: int = 4) -> tuple[PairMap, PairMap]:
    """Composable (f, g) with g ∘ f = 0; g factors through the cokernel of f."""
    a1, a, a2 = (random_space(rng, field, max_dim) for _ in range(3))
    f = random_map(rng, a1, a)
    coker, proj = cokernel(f)
    return f, compose(random_map(rng, coker, a2), proj)


def random_complex(rng: random.Random, field: FieldSpec, max_length: int = 4, max_dim: int = 3) -> SnComplex:
    length = rng.randint(1, max_length)
    lo = rng.randint(-2, 1)
    objects = [random_space(rng, field, max_dim)]
    diffs: list[PairMap] = []
    for _ in range(length - 1):
        nxt = random_space(rng, field, max_dim)
        if diffs:
            coker, proj = cokernel(diffs[-1])
            d = compose(random_map(rng, coker, nxt), proj)
        else:
            d = random_map(rng, objects[-1], nxt)
        objects.append(nxt)
        diffs.append(d)
    return SnComplex(lo, tuple(objects), tuple(diffs))


def random_complex_ses(rng: random.Random, field: FieldSpec, max_length: int = 3,
                       max_dim: int = 3) -> tuple[ChainMap, ChainMap]:
    """0 → S → C → C/S → 0 for a random complex C and a random subcomplex S (closed upwards under d)."""
    mid = random_complex(rng, field, max_length, max_dim)
    spans: dict[int, Subspace] = {}
    for n in mid.degrees:
        s = random_subspace(rng, field, mid.obj(n).dim)
        if n - 1 in spans:
            s = s.sum(spans[n - 1].image_under(mid.d(n - 1).matrix))
        spans[n] = s

    subs, quots = {}, {}
    for n in mid.degrees:
        subs[n] = subobject(mid.obj(n), spans[n])
        quots[n] = quotient(mid.obj(n), spans[n])

    def sub_d(n: int) -> PairMap:
        return PairMap(subs[n][0], subs[n + 1][0],
                       spans[n + 1].coordinates(mid.d(n).matrix @ spans[n].inclusion()))

    def quot_d(n: int) -> PairMap:
        return PairMap(quots[n][0], quots[n + 1][0], quots[n + 1][1].matrix @ mid.d(n).matrix @ quots[n][2])

    sub = SnComplex.build(mid.lo, mid.hi, lambda n: subs[n][0], sub_d)
    quot = SnComplex.build(mid.lo, mid.hi, lambda n: quots[n][0], quot_d)
    return (ChainMap.build(sub, mid, lambda n: subs[n][1]),
            ChainMap.build(mid, quot, lambda n: quots[n][1]))


# -- groups -------------------------------------------------------------------

def random_group(rng: random.Random) -> tuple[FiniteGroup, FieldSpec]:
    """One of ℤ/2, ℤ/3, ℤ/2×ℤ/2 with its characteristic field."""
    name, p = rng.choice(GROUP_FIELDS)
    return FiniteGroup.named(name), FieldSpec.prime(p)


def random_module(rng: random.Random, group: FiniteGroup, field: FieldSpec, hausdorff: bool = False,
                  max_dim: int = LAW_MODULE_DIM) -> GPairModule:
    """Trivial, (co)induced, or a cyclic sub/quotient of the regular module, optionally with a random null.

    Modules stay within ``max_dim``; (co)induced modules only appear when |G| fits.
    """
    kinds = ["trivial", "sub", "quotient"] + (["induced", "coinduced"] if group.order <= max_dim else [])
    kind = rng.choice(kinds)
    if kind == "trivial":
        m = trivial(group, random_space(rng, field, min(2, max_dim)) if not hausdorff
                    else PairSpace.hausdorff(field, 1))
    else:
        e = PairSpace.hausdorff(field, 1)
        m = coinduce(group, e) if kind == "coinduced" else induce(group, e)
        if kind in ("sub", "quotient"):
            regular = m
            for _ in range(10):
                s = g_span(regular, random_matrix(rng, field, regular.dim, 1))
                m = submodule(regular, s)[0] if kind == "sub" else quotient_module(regular, s)[0]
                if m.dim <= max_dim:
                    break
            else:
                m = trivial(group, PairSpace.hausdorff(field, 1))
    if not hausdorff and m.dim and rng.random() < 0.5:
        m = with_null(m, m.space.null.sum(g_span(m, random_matrix(rng, field, m.dim, 1))))
    return m


def random_module_ses(rng: random.Random, group: FiniteGroup, field: FieldSpec) -> tuple[GMap, GMap]:
    """0 → S → M → M/S → 0 for a random module M and a random G-stable subspace S."""
    m = random_module(rng, group, field)
    s = g_span(m, random_matrix(rng, field, m.dim, 1)) if m.dim else Subspace.zero(field, 0)
    _, inc = submodule(m, s)
    _, proj = quotient_module(m, s)
    return inc, proj
