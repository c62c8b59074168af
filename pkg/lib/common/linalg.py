"""Exact linear algebra over the rationals and prime fields.

Everything the homological layers compute reduces to row reduction over an
exact field: kernels, images, sums and intersections of subspaces, quotients
with chosen coordinates and the solution of linear systems. The reductions
run on sympy's ``DomainMatrix`` over ``QQ`` or ``GF(p)``. Conventions:

    - ``Matrix`` is immutable; a map F^n → F^m is an m×n matrix acting on columns.
    - ``Subspace`` stores its basis as the rows of a matrix in reduced row
      echelon form without zero rows, so equal subspaces compare equal.
    - Entries are kept as plain scalars (``fractions.Fraction`` over ℚ, ints in
      [0, p) over F_p) so matrices hash and serialise; ``Matrix.rep`` is the
      ``DomainMatrix`` they are computed with.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence, Union

from sympy import GF, QQ, isprime
from sympy.polys.matrices import DomainMatrix

from lib.common.errors import DimensionMismatch, FieldMismatch, InconsistentSystem

Scalar = Union[Fraction, int]


@dataclass(frozen=True)
class FieldSpec:
    """The active ground field: ``rationals`` or ``prime`` with characteristic ``p``."""

    kind: str = "rationals"
    p: int | None = None

    def __post_init__(self) -> None:
        if self.kind == "rationals":
            if self.p is not None:
                raise ValueError("The rational field takes no characteristic.")
        elif self.kind == "prime":
            if self.p is None or not isprime(self.p):
                raise ValueError(f"Prime field needs a prime characteristic, got {self.p!r}.")
        else:
            raise ValueError(f"Unknown field kind: {self.kind!r}")

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls("rationals")

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls("prime", p)

    @property
    def name(self) -> str:
        return "Q" if self.kind == "rationals" else f"F_{self.p}"

    @property
    def is_prime(self) -> bool:
        return self.kind == "prime"

    @property
    def zero(self) -> Scalar:
        return 0 if self.is_prime else Fraction(0)

    @property
    def one(self) -> Scalar:
        return 1 if self.is_prime else Fraction(1)

    @cached_property
    def domain(self):
        """The sympy domain matrices over this field are reduced in."""
        return GF(self.p) if self.is_prime else QQ

    def element(self, x: object) -> Scalar:
        """Coerces ints, Fractions and exact strings ("3/2", "-4") into the field."""
        if isinstance(x, str):
            x = Fraction(x.strip())
        if isinstance(x, bool) or not isinstance(x, (int, Fraction)):
            raise FieldMismatch(f"Not an exact scalar: {x!r}")
        if not self.is_prime:
            return Fraction(x)
        p = self.p
        if isinstance(x, Fraction):
            if x.denominator % p == 0:
                raise FieldMismatch(f"{x} has no image in F_{p}")
            return x.numerator * pow(x.denominator, -1, p) % p
        return x % p

    def to_domain(self, x: Scalar):
        if self.is_prime:
            return self.domain(int(x))
        return QQ(x.numerator, x.denominator)

    def from_domain(self, x) -> Scalar:
        value = self.domain.to_sympy(x)
        if self.is_prime:
            return int(value) % self.p
        return Fraction(int(value.p), int(value.q))

    def fmt(self, x: Scalar) -> str:
        return str(x)

    def to_json(self) -> dict:
        return {"kind": self.kind} if not self.is_prime else {"kind": "prime", "p": self.p}


@dataclass(frozen=True)
class Matrix:
    """Immutable matrix over a ``FieldSpec``; entries are stored row-major."""

    field: FieldSpec
    rows: int
    cols: int
    entries: tuple[tuple[Scalar, ...], ...] = dc_field(repr=False)

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise DimensionMismatch(f"Entry count does not match shape {self.rows}×{self.cols}.")

    @cached_property
    def rep(self) -> DomainMatrix:
        """Sparse ``DomainMatrix`` over ``field.domain``; the bar differentials are mostly zero."""
        to = self.field.to_domain
        nonzero = {i: {j: to(x) for j, x in enumerate(r) if x} for i, r in enumerate(self.entries)}
        return DomainMatrix({i: row for i, row in nonzero.items() if row}, (self.rows, self.cols), self.field.domain)

    @property
    def is_empty(self) -> bool:
        return self.rows == 0 or self.cols == 0

    # -- construction -------------------------------------------------------

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Iterable[Iterable[object]], cols: int | None = None) -> "Matrix":
        data = tuple(tuple(field.element(x) for x in row) for row in rows)
        if cols is None:
            if not data:
                raise DimensionMismatch("Column count required for a matrix without rows.")
            cols = len(data[0])
        return cls(field, len(data), cols, data)

    @classmethod
    def _raw(cls, field: FieldSpec, rows: int, cols: int, data: Sequence[Sequence[Scalar]]) -> "Matrix":
        return cls(field, rows, cols, tuple(tuple(r) for r in data))

    @classmethod
    def from_domain(cls, field: FieldSpec, dm: DomainMatrix) -> "Matrix":
        rows, cols = dm.shape
        if rows == 0 or cols == 0:
            return cls.zeros(field, rows, cols)
        data = [[field.zero] * cols for _ in range(rows)]
        for i, row in dm.to_sparse().rep.items():
            for j, x in row.items():
                data[i][j] = field.from_domain(x)
        return cls._raw(field, rows, cols, data)

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> "Matrix":
        z = field.zero
        return cls(field, rows, cols, tuple((z,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return cls(field, n, n, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @classmethod
    def from_columns(cls, field: FieldSpec, n: int, columns: Sequence[Sequence[Scalar]]) -> "Matrix":
        """Matrix whose columns are the given vectors of length ``n``."""
        return cls._raw(field, n, len(columns), [[c[i] for c in columns] for i in range(n)])

    @classmethod
    def from_sparse(cls, field: FieldSpec, rows: int, cols: int, entries: dict[tuple[int, int], object]) -> "Matrix":
        """Matrix from accumulated {(row, col): value} entries; missing entries are zero."""
        data = [[field.zero] * cols for _ in range(rows)]
        for (r, c), v in entries.items():
            data[r][c] = field.element(v)
        return cls._raw(field, rows, cols, data)

    @classmethod
    def from_function(cls, field: FieldSpec, rows: int, cols: int, fn) -> "Matrix":
        return cls._raw(field, rows, cols, [[field.element(fn(i, j)) for j in range(cols)] for i in range(rows)])

    # -- arithmetic ---------------------------------------------------------

    def _check_field(self, other: "Matrix") -> None:
        if self.field != other.field:
            raise FieldMismatch(f"Cannot combine matrices over {self.field.name} and {other.field.name}.")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check_field(other)
        if self.cols != other.rows:
            raise DimensionMismatch(f"Cannot multiply {self.rows}×{self.cols} by {other.rows}×{other.cols}.")
        if self.is_empty or other.is_empty:
            return Matrix.zeros(self.field, self.rows, other.cols)
        return Matrix.from_domain(self.field, self.rep.matmul(other.rep))

    def _same_shape(self, other: "Matrix") -> None:
        self._check_field(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("Shapes differ.")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        if self.is_empty:
            return self
        return Matrix.from_domain(self.field, self.rep + other.rep)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        if self.is_empty:
            return self
        return Matrix.from_domain(self.field, self.rep - other.rep)

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def scale(self, c: object) -> "Matrix":
        if self.is_empty:
            return self
        return Matrix.from_domain(self.field, self.rep * self.field.to_domain(self.field.element(c)))

    @property
    def T(self) -> "Matrix":
        if not self.rows:
            return Matrix.zeros(self.field, self.cols, 0)
        return Matrix._raw(self.field, self.cols, self.rows, list(zip(*self.entries)))

    # -- shape helpers ------------------------------------------------------

    def row(self, i: int) -> tuple[Scalar, ...]:
        return self.entries[i]

    def column(self, j: int) -> tuple[Scalar, ...]:
        return tuple(r[j] for r in self.entries)

    def submatrix(self, rows: Sequence[int] | None = None, cols: Sequence[int] | None = None) -> "Matrix":
        rows = range(self.rows) if rows is None else rows
        cols = range(self.cols) if cols is None else cols
        return Matrix._raw(self.field, len(rows), len(cols), [[self.entries[i][j] for j in cols] for i in rows])

    def is_zero(self) -> bool:
        return all(not x for r in self.entries for x in r)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def to_json(self) -> list[list[str]]:
        return [[self.field.fmt(x) for x in r] for r in self.entries]

    @classmethod
    def from_json(cls, field: FieldSpec, data: list, rows: int | None = None, cols: int | None = None) -> "Matrix":
        m = cls.from_rows(field, data, cols=cols if not data else None)
        if rows is not None and m.rows != rows or cols is not None and m.cols != cols:
            raise DimensionMismatch(f"Expected a {rows}×{cols} matrix, got {m.rows}×{m.cols}.")
        return m


def hstack(*ms: Matrix) -> Matrix:
    """Block row [A | B | ...]; all blocks share the row count."""
    first = ms[0]
    if any(m.rows != first.rows for m in ms):
        raise DimensionMismatch("hstack needs equal row counts.")
    return Matrix._raw(first.field, first.rows, sum(m.cols for m in ms),
                       [sum((m.entries[i] for m in ms), ()) for i in range(first.rows)])


def vstack(*ms: Matrix) -> Matrix:
    first = ms[0]
    if any(m.cols != first.cols for m in ms):
        raise DimensionMismatch("vstack needs equal column counts.")
    return Matrix._raw(first.field, sum(m.rows for m in ms), first.cols, [r for m in ms for r in m.entries])


def block_diag(*ms: Matrix) -> Matrix:
    field = ms[0].field
    cols = sum(m.cols for m in ms)
    data, offset = [], 0
    for m in ms:
        for r in m.entries:
            data.append((field.zero,) * offset + r + (field.zero,) * (cols - offset - m.cols))
        offset += m.cols
    return Matrix._raw(field, sum(m.rows for m in ms), cols, data)


def kron(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product; index (i, k) of the result's rows is ``i * b.rows + k``."""
    a._check_field(b)
    data = [[x * y for x in ra for y in rb] for ra in a.entries for rb in b.entries]
    if a.field.is_prime:
        data = [[v % a.field.p for v in r] for r in data]
    return Matrix._raw(a.field, a.rows * b.rows, a.cols * b.cols, data)




def rref(m: Matrix) -> tuple[Matrix, tuple[int, ...], int]:
    """Reduced row echelon form, pivot columns and rank."""
    if m.is_empty:
        return m, (), 0
    reduced, pivots = m.rep.rref()
    pivots = tuple(int(c) for c in pivots)
    return Matrix.from_domain(m.field, reduced), pivots, len(pivots)


def rank(m: Matrix) -> int:
    return 0 if m.is_empty else int(m.rep.rank())


@dataclass(frozen=True)
class Subspace:
    """A subspace of F^n given by its canonical (RREF) basis rows."""

    field: FieldSpec
    ambient_dim: int
    basis: Matrix
    pivots: tuple[int, ...]

    @classmethod
    def span(cls, field: FieldSpec, n: int, vectors: Matrix | Sequence[Sequence[object]]) -> "Subspace":
        """Span of row vectors (a Matrix with n columns or a list of vectors)."""
        if not isinstance(vectors, Matrix):
            vectors = Matrix.from_rows(field, vectors, cols=n)
        if vectors.cols != n:
            raise DimensionMismatch(f"Vectors of length {vectors.cols} do not live in F^{n}.")
        reduced, pivots, r = rref(vectors)
        return cls(field, n, reduced.submatrix(range(r), None), pivots)

    @classmethod
    def zero(cls, field: FieldSpec, n: int) -> "Subspace":
        return cls(field, n, Matrix.zeros(field, 0, n), ())

    @classmethod
    def full(cls, field: FieldSpec, n: int) -> "Subspace":
        return cls(field, n, Matrix.identity(field, n), tuple(range(n)))

    @property
    def dim(self) -> int:
        return self.basis.rows

    @property
    def codim(self) -> int:
        return self.ambient_dim - self.dim

    def inclusion(self) -> Matrix:
        """The n×dim matrix whose columns are the basis vectors."""
        return self.basis.T

    def _check(self, other: "Subspace") -> None:
        if self.field != other.field:
            raise FieldMismatch("Subspaces over different fields.")
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatch(f"Ambient dimensions {self.ambient_dim} and {other.ambient_dim} differ.")

    def sum(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(self.field, self.ambient_dim, vstack(self.basis, other.basis))

    def annihilator(self) -> "Subspace":
        """Functionals vanishing on this subspace, in the dual coordinates of F^n."""
        return kernel_basis(self.basis)

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return self.annihilator().sum(other.annihilator()).annihilator()

    def contains(self, other: "Subspace | Sequence[Scalar]") -> bool:
        if not isinstance(other, Subspace):
            other = Subspace.span(self.field, self.ambient_dim, [list(other)])
        self._check(other)
        return self.sum(other).dim == self.dim

    def coordinates(self, columns: Matrix, check: bool = True) -> Matrix:
        """Coordinates (dim × k) of the k column vectors in ``columns`` with respect to the basis."""
        if columns.rows != self.ambient_dim:
            raise DimensionMismatch("Columns do not live in the ambient space.")
        coords = columns.submatrix(self.pivots, None)
        if check and self.inclusion() @ coords != columns:
            raise InconsistentSystem("Vectors do not lie in the subspace.")
        return coords

    def image_under(self, m: Matrix) -> "Subspace":
        """m(S) as a subspace of the codomain."""
        return image_basis(m @ self.inclusion()) if self.dim else Subspace.zero(self.field, m.rows)


def kernel_basis(m: Matrix) -> Subspace:
    """Canonical basis of {x : m·x = 0}."""
    field = m.field
    if m.rows == 0:
        return Subspace.full(field, m.cols)
    if m.cols == 0 or rank(m) == m.cols:
        return Subspace.zero(field, m.cols)
    return Subspace.span(field, m.cols, Matrix.from_domain(field, m.rep.nullspace()))


def image_basis(m: Matrix) -> Subspace:
    """Canonical basis of the column span of m."""
    return Subspace.span(m.field, m.rows, m.T)


def preimage(m: Matrix, s: Subspace) -> Subspace:
    """{x : m·x ∈ S}."""
    if s.ambient_dim != m.rows:
        raise DimensionMismatch("Subspace does not live in the codomain.")
    functionals = s.annihilator().basis
    if functionals.rows == 0:
        return Subspace.full(m.field, m.cols)
    return kernel_basis(functionals @ m)


def subspace_algebra(op: str, *args) -> Subspace | bool:
    """Single entry point for the subspace operations (sum, intersect, preimage, annihilator, contains)."""
    if op == "sum":
        return args[0].sum(args[1])
    if op == "intersect":
        return args[0].intersect(args[1])
    if op == "preimage":
        return preimage(args[0], args[1])
    if op == "annihilator":
        return args[0].annihilator()
    if op == "contains":
        return args[0].contains(args[1])
    raise ValueError(f"Unknown subspace operation: {op}")


def quotient_presentation(s: Subspace) -> tuple[Matrix, Matrix]:
    """Projection F^n → F^(n - dim S) with kernel S and a section of it.

    Quotient coordinates are the non-pivot coordinates of S's RREF basis.
    """
    field, n = s.field, s.ambient_dim
    free = [c for c in range(n) if c not in s.pivots]
    proj = [[field.zero] * n for _ in free]
    for r, q in enumerate(free):
        proj[r][q] = field.one
        for i, pc in enumerate(s.pivots):
            proj[r][pc] = field.element(-s.basis.entries[i][q])
    section = [[field.one if free[r] == i else field.zero for r in range(len(free))] for i in range(n)]
    return Matrix._raw(field, len(free), n, proj), Matrix._raw(field, n, len(free), section)


def solve(a: Matrix, b: Matrix) -> Matrix:
    """A particular X with a·X = b (free variables set to zero)."""
    if a.rows != b.rows:
        raise DimensionMismatch("Right-hand side has the wrong number of rows.")
    reduced, pivots, r = rref(hstack(a, b))
    if any(p >= a.cols for p in pivots):
        raise InconsistentSystem("The linear system has no solution.")
    field = a.field
    x = [[field.zero] * b.cols for _ in range(a.cols)]
    for i, pc in enumerate(pivots):
        x[pc] = list(reduced.entries[i][a.cols:])
    return Matrix._raw(field, a.cols, b.cols, x)


def inverse(a: Matrix) -> Matrix:
    if a.rows != a.cols or rank(a) != a.rows:
        raise InconsistentSystem("Matrix is not invertible.")
    if a.is_empty:
        return a
    return Matrix.from_domain(a.field, a.rep.to_dense().inv())


def is_injective(m: Matrix) -> bool:
    return rank(m) == m.cols


def is_surjective(m: Matrix) -> bool:
    return rank(m) == m.rows
