"""Dense exact linear algebra over a FieldSpec.

Linear maps act on row vectors from the right: v maps to v*A.  Consequently
image(A) is the row space of A and kernel(A) is the left kernel
{v : v*A = 0}.  Subspaces are stored as reduced row echelon bases, so two
equal subspaces have structurally identical representations.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import (
    AmbientMismatch,
    BlockOutOfRange,
    FieldMismatch,
    NotNested,
    ShapeMismatch,
    Singular,
)
from .field import FieldElement, FieldSpec

__all__ = [
    "Matrix",
    "Subspace",
    "rref",
    "image",
    "kernel",
    "intersect",
    "subspace_sum",
    "subspace_direct_sum",
    "extend_basis",
    "intertwiner_space",
    "hstack",
    "vstack",
    "row_times_matrix",
    "product_of",
]


class Matrix:
    """An immutable dense matrix over an exact field."""

    __slots__ = ("spec", "rows", "cols", "entries", "_key")

    def __init__(self, spec: FieldSpec, entries: tuple[tuple[FieldElement, ...], ...], cols: int | None = None):
        self.spec = spec
        self.entries = entries
        self.rows = len(entries)
        self.cols = len(entries[0]) if entries else (cols if cols is not None else 0)
        self._key = None

    # -- constructors ----------------------------------------------------------

    @classmethod
    def from_rows(cls, spec: FieldSpec, rows: Iterable[Sequence[FieldElement]], cols: int | None = None) -> "Matrix":
        tup = tuple(tuple(row) for row in rows)
        widths = {len(r) for r in tup}
        if len(widths) > 1:
            raise ShapeMismatch("ragged rows")
        return cls(spec, tup, cols=cols)

    @classmethod
    def from_ints(cls, spec: FieldSpec, grid: Sequence[Sequence[int]]) -> "Matrix":
        return cls.from_rows(spec, [[spec.from_int(v) for v in row] for row in grid])

    @classmethod
    def identity(cls, spec: FieldSpec, n: int) -> "Matrix":
        one, zero = spec.one(), spec.zero()
        return cls(spec, tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)))

    @classmethod
    def zero(cls, spec: FieldSpec, rows: int, cols: int) -> "Matrix":
        z = spec.zero()
        return cls(spec, tuple(tuple(z for _ in range(cols)) for _ in range(rows)), cols=cols)

    @classmethod
    def diagonal(cls, spec: FieldSpec, scalars: Sequence[FieldElement]) -> "Matrix":
        z = spec.zero()
        n = len(scalars)
        return cls(spec, tuple(tuple(scalars[i] if i == j else z for j in range(n)) for i in range(n)))

    # -- basics ----------------------------------------------------------------

    def entry(self, i: int, j: int) -> FieldElement:
        return self.entries[i][j]

    def row(self, i: int) -> tuple[FieldElement, ...]:
        return self.entries[i]

    def transpose(self) -> "Matrix":
        return Matrix(
            self.spec,
            tuple(tuple(self.entries[i][j] for i in range(self.rows)) for j in range(self.cols)),
            cols=self.rows,
        )

    def map_entries(self, fn) -> "Matrix":
        return Matrix(self.spec, tuple(tuple(fn(e) for e in row) for row in self.entries), cols=self.cols)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_identity(self) -> bool:
        if not self.is_square():
            return False
        for i, row in enumerate(self.entries):
            for j, e in enumerate(row):
                if i == j:
                    if not e.is_one():
                        return False
                elif not e.is_zero():
                    return False
        return True

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    # -- arithmetic --------------------------------------------------------------

    def _check_spec(self, other: "Matrix"):
        if self.spec != other.spec:
            raise FieldMismatch("matrices over different fields")

    def __add__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check_spec(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeMismatch(f"{self.rows}x{self.cols} + {other.rows}x{other.cols}")
        return Matrix(
            self.spec,
            tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self.entries, other.entries)),
            cols=self.cols,
        )

    def __sub__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check_spec(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeMismatch(f"{self.rows}x{self.cols} - {other.rows}x{other.cols}")
        return Matrix(
            self.spec,
            tuple(tuple(a - b for a, b in zip(r1, r2)) for r1, r2 in zip(self.entries, other.entries)),
            cols=self.cols,
        )

    def __neg__(self):
        return Matrix(self.spec, tuple(tuple(-a for a in row) for row in self.entries), cols=self.cols)

    def scale(self, scalar: FieldElement) -> "Matrix":
        return Matrix(self.spec, tuple(tuple(scalar * a for a in row) for row in self.entries), cols=self.cols)

    def __mul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        self._check_spec(other)
        if self.cols != other.rows:
            raise ShapeMismatch(f"{self.rows}x{self.cols} * {other.rows}x{other.cols}")
        zero = self.spec.zero()
        oentries = other.entries
        ocols = other.cols
        out = []
        for row in self.entries:
            acc = [zero] * ocols
            for k, a in enumerate(row):
                if a.is_zero():
                    continue
                orow = oentries[k]
                acc = [s + a * b for s, b in zip(acc, orow)]
            out.append(tuple(acc))
        return Matrix(self.spec, tuple(out), cols=ocols)

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if not self.is_square():
            raise ShapeMismatch("power of a non-square matrix")
        base = self if exponent >= 0 else self.inverse()
        exponent = abs(exponent)
        result = Matrix.identity(self.spec, self.rows)
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def inverse(self) -> "Matrix":
        if not self.is_square():
            raise ShapeMismatch("inverse of a non-square matrix")
        n = self.rows
        one, zero = self.spec.one(), self.spec.zero()
        work = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(self.entries)]
        for col in range(n):
            pivot = None
            for i in range(col, n):
                if not work[i][col].is_zero():
                    pivot = i
                    break
            if pivot is None:
                raise Singular("matrix is singular")
            work[col], work[pivot] = work[pivot], work[col]
            inv = work[col][col].inverse()
            work[col] = [e * inv for e in work[col]]
            for i in range(n):
                if i != col and not work[i][col].is_zero():
                    f = work[i][col]
                    work[i] = [a - f * b for a, b in zip(work[i], work[col])]
        return Matrix(self.spec, tuple(tuple(row[n:]) for row in work), cols=n)

    # -- structure ops -----------------------------------------------------------

    def rref(self) -> tuple["Matrix", tuple[int, ...], int]:
        rows = [list(r) for r in self.entries]
        red, pivots, rank = _rref_rows(rows)
        return Matrix(self.spec, tuple(tuple(r) for r in red), cols=self.cols), pivots, rank

    def insert_block(self, block: "Matrix", row1: int, col1: int) -> "Matrix":
        """Copy of self with `block` written at 1-based offsets (row1, col1)."""
        self._check_spec(block)
        r0, c0 = row1 - 1, col1 - 1
        if r0 < 0 or c0 < 0 or r0 + block.rows > self.rows or c0 + block.cols > self.cols:
            raise BlockOutOfRange(
                f"{block.rows}x{block.cols} block at ({row1},{col1}) in {self.rows}x{self.cols}"
            )
        out = [list(row) for row in self.entries]
        for i in range(block.rows):
            out[r0 + i][c0 : c0 + block.cols] = list(block.entries[i])
        return Matrix(self.spec, tuple(tuple(r) for r in out), cols=self.cols)

    def extract_block(self, row1: int, col1: int, height: int, width: int) -> "Matrix":
        """The height x width block at 1-based offsets (row1, col1)."""
        r0, c0 = row1 - 1, col1 - 1
        if r0 < 0 or c0 < 0 or height < 0 or width < 0 or r0 + height > self.rows or c0 + width > self.cols:
            raise BlockOutOfRange(
                f"{height}x{width} block at ({row1},{col1}) in {self.rows}x{self.cols}"
            )
        return Matrix(
            self.spec,
            tuple(tuple(self.entries[r0 + i][c0 : c0 + width]) for i in range(height)),
            cols=width,
        )

    def direct_sum(self, other: "Matrix") -> "Matrix":
        self._check_spec(other)
        out = Matrix.zero(self.spec, self.rows + other.rows, self.cols + other.cols)
        out = out.insert_block(self, 1, 1)
        return out.insert_block(other, self.rows + 1, self.cols + 1)

    # -- identity ------------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.spec == other.spec
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def canonical_key(self) -> bytes:
        if self._key is None:
            body = b";".join(e.key() for row in self.entries for e in row)
            self._key = b"%d,%d|" % (self.rows, self.cols) + body
        return self._key

    def __hash__(self):
        return hash(self.canonical_key())

    def __str__(self):
        return "\n".join("[" + ", ".join(str(e) for e in row) + "]" for row in self.entries)

    def __repr__(self):
        return f"<Matrix {self.rows}x{self.cols} over {self.spec.label()}>"


def _rref_rows(rows: list[list[FieldElement]]) -> tuple[list[list[FieldElement]], tuple[int, ...], int]:
    if not rows:
        return rows, (), 0
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(rows)):
            if not rows[i][c].is_zero():
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [e * inv for e in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, tuple(pivots), r


def rref(a: Matrix) -> tuple[Matrix, tuple[int, ...], int]:
    """Reduced row echelon form, pivot columns and rank."""
    return a.rref()


def hstack(mats: Sequence[Matrix]) -> Matrix:
    if not mats:
        raise ShapeMismatch("hstack of nothing")
    rows = mats[0].rows
    spec = mats[0].spec
    for m in mats:
        if m.rows != rows:
            raise ShapeMismatch("hstack with differing row counts")
        if m.spec != spec:
            raise FieldMismatch("hstack over different fields")
    return Matrix(
        spec,
        tuple(tuple(e for m in mats for e in m.entries[i]) for i in range(rows)),
        cols=sum(m.cols for m in mats),
    )


def vstack(mats: Sequence[Matrix]) -> Matrix:
    if not mats:
        raise ShapeMismatch("vstack of nothing")
    cols = mats[0].cols
    spec = mats[0].spec
    for m in mats:
        if m.cols != cols:
            raise ShapeMismatch("vstack with differing column counts")
        if m.spec != spec:
            raise FieldMismatch("vstack over different fields")
    return Matrix(spec, tuple(row for m in mats for row in m.entries), cols=cols)


def row_times_matrix(row: Sequence[FieldElement], mat: Matrix) -> tuple[FieldElement, ...]:
    if len(row) != mat.rows:
        raise ShapeMismatch(f"row of length {len(row)} times {mat.rows}x{mat.cols}")
    zero = mat.spec.zero()
    acc = [zero] * mat.cols
    for k, a in enumerate(row):
        if a.is_zero():
            continue
        mrow = mat.entries[k]
        acc = [s + a * b for s, b in zip(acc, mrow)]
    return tuple(acc)


def product_of(mats: Sequence[Matrix]) -> Matrix:
    if not mats:
        raise ShapeMismatch("product of an empty sequence")
    out = mats[0]
    for m in mats[1:]:
        out = out * m
    return out


class Subspace:
    """A subspace of k^n held as a reduced row echelon basis (canonical)."""

    __slots__ = ("spec", "ambient_dim", "basis", "pivots")

    def __init__(self, spec: FieldSpec, ambient_dim: int, basis: Matrix, pivots: tuple[int, ...]):
        self.spec = spec
        self.ambient_dim = ambient_dim
        self.basis = basis
        self.pivots = pivots

    @classmethod
    def from_rows(cls, spec: FieldSpec, ambient_dim: int, rows: Iterable[Sequence[FieldElement]]) -> "Subspace":
        work = [list(r) for r in rows]
        for r in work:
            if len(r) != ambient_dim:
                raise AmbientMismatch(f"row of length {len(r)} in ambient {ambient_dim}")
        red, pivots, rank = _rref_rows(work)
        basis = Matrix(spec, tuple(tuple(r) for r in red[:rank]), cols=ambient_dim)
        return cls(spec, ambient_dim, basis, pivots)

    @classmethod
    def zero(cls, spec: FieldSpec, ambient_dim: int) -> "Subspace":
        return cls(spec, ambient_dim, Matrix(spec, (), cols=ambient_dim), ())

    @classmethod
    def full(cls, spec: FieldSpec, ambient_dim: int) -> "Subspace":
        return cls(
            spec,
            ambient_dim,
            Matrix.identity(spec, ambient_dim),
            tuple(range(ambient_dim)),
        )

    @property
    def dim(self) -> int:
        return self.basis.rows

    def basis_rows(self):
        return self.basis.entries

    def reduce_vector(self, vector: Sequence[FieldElement]) -> list[FieldElement]:
        if len(vector) != self.ambient_dim:
            raise AmbientMismatch(f"vector of length {len(vector)} in ambient {self.ambient_dim}")
        w = list(vector)
        for row, p in zip(self.basis.entries, self.pivots):
            f = w[p]
            if not f.is_zero():
                w = [a - f * b for a, b in zip(w, row)]
        return w

    def contains_vector(self, vector: Sequence[FieldElement]) -> bool:
        return all(c.is_zero() for c in self.reduce_vector(vector))

    def contains(self, other: "Subspace") -> bool:
        if self.ambient_dim != other.ambient_dim:
            raise AmbientMismatch("subspaces of different ambient dimension")
        return all(self.contains_vector(row) for row in other.basis.entries)

    def coordinates(self, vector: Sequence[FieldElement]) -> tuple[FieldElement, ...]:
        """Coordinates of a member vector in the echelon basis."""
        coords = tuple(vector[p] for p in self.pivots)
        rebuilt = [self.spec.zero()] * self.ambient_dim
        for c, row in zip(coords, self.basis.entries):
            if not c.is_zero():
                rebuilt = [a + c * b for a, b in zip(rebuilt, row)]
        if any(not (a - b).is_zero() for a, b in zip(rebuilt, vector)):
            raise AmbientMismatch("vector is not in the subspace")
        return coords

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.spec == other.spec
            and self.ambient_dim == other.ambient_dim
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return f"<Subspace dim {self.dim} of k^{self.ambient_dim} over {self.spec.label()}>"


def image(a: Matrix) -> Subspace:
    """Row space of a: the image of v -> v*a."""
    return Subspace.from_rows(a.spec, a.cols, a.entries)


def kernel(a: Matrix) -> Subspace:
    """Left kernel of a: all row vectors v with v*a = 0."""
    m = a.rows
    if m == 0:
        return Subspace.zero(a.spec, 0)
    one, zero = a.spec.one(), a.spec.zero()
    aug = [list(a.entries[i]) + [one if i == j else zero for j in range(m)] for i in range(m)]
    red, _, _ = _rref_rows(aug)
    out = [row[a.cols :] for row in red if all(e.is_zero() for e in row[: a.cols])]
    return Subspace.from_rows(a.spec, m, out)


def intersect(u: Subspace, w: Subspace) -> Subspace:
    """Intersection of two subspaces of the same ambient space."""
    if u.spec != w.spec:
        raise FieldMismatch("subspaces over different fields")
    if u.ambient_dim != w.ambient_dim:
        raise AmbientMismatch(f"ambient {u.ambient_dim} vs {w.ambient_dim}")
    if u.dim == 0 or w.dim == 0:
        return Subspace.zero(u.spec, u.ambient_dim)
    stacked = vstack([u.basis, w.basis])
    pairs = kernel(stacked)
    if pairs.dim == 0:
        return Subspace.zero(u.spec, u.ambient_dim)
    left = Matrix(
        u.spec,
        tuple(tuple(row[: u.dim]) for row in pairs.basis.entries),
        cols=u.dim,
    )
    return image(left * u.basis)


def subspace_sum(u: Subspace, w: Subspace) -> Subspace:
    if u.spec != w.spec:
        raise FieldMismatch("subspaces over different fields")
    if u.ambient_dim != w.ambient_dim:
        raise AmbientMismatch(f"ambient {u.ambient_dim} vs {w.ambient_dim}")
    return Subspace.from_rows(u.spec, u.ambient_dim, list(u.basis.entries) + list(w.basis.entries))


def subspace_direct_sum(parts: Sequence[Subspace]) -> Subspace:
    """Embed each part in consecutive coordinate blocks and take the sum."""
    if not parts:
        raise AmbientMismatch("direct sum of nothing")
    spec = parts[0].spec
    total = sum(p.ambient_dim for p in parts)
    zero = spec.zero()
    rows = []
    offset = 0
    for p in parts:
        if p.spec != spec:
            raise FieldMismatch("direct sum over different fields")
        for row in p.basis.entries:
            padded = [zero] * total
            padded[offset : offset + p.ambient_dim] = list(row)
            rows.append(padded)
        offset += p.ambient_dim
    return Subspace.from_rows(spec, total, rows)


class _Echelon:
    """Incremental Gauss-Jordan used to test rank growth row by row."""

    def __init__(self):
        self.rows: list[tuple[int, list[FieldElement]]] = []

    def reduce(self, vector: Sequence[FieldElement]) -> list[FieldElement]:
        w = list(vector)
        for p, row in self.rows:
            f = w[p]
            if not f.is_zero():
                w = [a - f * b for a, b in zip(w, row)]
        return w

    def add(self, vector: Sequence[FieldElement]) -> bool:
        red = self.reduce(vector)
        pivot = None
        for j, e in enumerate(red):
            if not e.is_zero():
                pivot = j
                break
        if pivot is None:
            return False
        inv = red[pivot].inverse()
        red = [e * inv for e in red]
        for k, (p, row) in enumerate(self.rows):
            f = row[pivot]
            if not f.is_zero():
                self.rows[k] = (p, [a - f * b for a, b in zip(row, red)])
        self.rows.append((pivot, red))
        return True


def extend_basis(inner: Subspace, outer: Subspace, ambient_dim: int | None = None) -> Matrix:
    """Deterministic full flag basis through inner and outer.

    Returns an invertible ambient x ambient matrix whose first dim(inner)
    rows are the canonical basis of inner, the next dim(outer) - dim(inner)
    rows extend it to outer (candidates: the echelon basis rows of outer in
    order), and the remaining rows extend to the full space (candidates: the
    standard basis vectors e_1, e_2, ... in increasing index).  Accepted
    candidate rows are kept verbatim.
    """
    if inner.spec != outer.spec:
        raise FieldMismatch("flag over different fields")
    if inner.ambient_dim != outer.ambient_dim:
        raise AmbientMismatch(f"ambient {inner.ambient_dim} vs {outer.ambient_dim}")
    n = outer.ambient_dim if ambient_dim is None else ambient_dim
    if n != outer.ambient_dim:
        raise AmbientMismatch(f"ambient {n} vs {outer.ambient_dim}")
    if not outer.contains(inner):
        raise NotNested("inner subspace is not contained in the outer one")
    spec = inner.spec
    ech = _Echelon()
    taken: list[Sequence[FieldElement]] = []

    def try_add(row) -> bool:
        if ech.add(row):
            taken.append(tuple(row))
            return True
        return False

    for row in inner.basis.entries:
        try_add(row)
    for row in outer.basis.entries:
        try_add(row)
        if len(taken) == outer.dim:
            break
    one, zero = spec.one(), spec.zero()
    for i in range(n):
        if len(taken) == n:
            break
        e_i = tuple(one if j == i else zero for j in range(n))
        try_add(e_i)
    if len(taken) != n:
        raise NotNested("could not complete the basis")
    return Matrix.from_rows(spec, taken, cols=n)


def intertwiner_space(tuple_a: Sequence[Matrix], tuple_b: Sequence[Matrix]) -> Subspace:
    """All matrices T with T*B_i = A_i*T, as row vectors of length d*d."""
    if len(tuple_a) != len(tuple_b):
        raise ShapeMismatch("tuples of different length")
    if not tuple_a:
        raise ShapeMismatch("empty tuples")
    d = tuple_a[0].rows
    spec = tuple_a[0].spec
    for m in list(tuple_a) + list(tuple_b):
        if not m.is_square() or m.rows != d:
            raise ShapeMismatch("tuple entries must be square of equal size")
    zero = spec.zero()
    blocks = []
    for a, b in zip(tuple_a, tuple_b):
        # Column (p, q) of the constraint block holds the coefficient of
        # T[pp][qq] in (T*B - A*T)[p][q].
        cols = d * d
        block = [[zero] * cols for _ in range(d * d)]
        for pp in range(d):
            for qq in range(d):
                src = pp * d + qq
                for q in range(d):
                    block[src][pp * d + q] = block[src][pp * d + q] + b.entries[qq][q]
                for p in range(d):
                    block[src][p * d + qq] = block[src][p * d + qq] - a.entries[p][pp]
        blocks.append(Matrix.from_rows(spec, block, cols=cols))
    return kernel(hstack(blocks))


def matrix_from_flat(spec: FieldSpec, flat: Sequence[FieldElement], d: int) -> Matrix:
    """Reassemble a d x d matrix from a row-major flattened vector."""
    if len(flat) != d * d:
        raise ShapeMismatch(f"flat vector of length {len(flat)} for {d}x{d}")
    return Matrix.from_rows(spec, [flat[i * d : (i + 1) * d] for i in range(d)], cols=d)
