"""Dense linear algebra over GF(2).

Vectors and matrix rows are packed into Python integers: bit ``j`` holds
coordinate ``j``.  Every dimension in this package stays below a hundred,
so a row fits a couple of machine words and XOR/popcount do all the work.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class Gf2Error(ValueError):
    pass


def _mask(n: int) -> int:
    return (1 << n) - 1


def _hex(bits: int, dim: int) -> str:
    width = max(1, (dim + 3) // 4)
    return format(bits, "0%dx" % width)


@dataclass(frozen=True)
class Gf2Vector:
    bits: int
    dim: int

    def __post_init__(self):
        if self.dim < 0:
            raise Gf2Error("negative dimension")
        if self.bits < 0 or self.bits >> self.dim:
            raise Gf2Error("bits exceed dimension %d" % self.dim)

    @classmethod
    def zero(cls, dim: int) -> "Gf2Vector":
        return cls(0, dim)

    @classmethod
    def unit(cls, k: int, dim: int) -> "Gf2Vector":
        if not 0 <= k < dim:
            raise Gf2Error("unit index %d out of range" % k)
        return cls(1 << k, dim)

    @classmethod
    def ones(cls, dim: int) -> "Gf2Vector":
        return cls(_mask(dim), dim)

    @classmethod
    def from_list(cls, entries: Sequence[int]) -> "Gf2Vector":
        bits = 0
        for j, a in enumerate(entries):
            if a & 1:
                bits |= 1 << j
        return cls(bits, len(entries))

    @classmethod
    def from_support(cls, support: Iterable[int], dim: int) -> "Gf2Vector":
        bits = 0
        for j in support:
            bits ^= 1 << j
        return cls(bits, dim)

    @classmethod
    def from_hex(cls, text: str, dim: int) -> "Gf2Vector":
        return cls(int(text, 16), dim)

    def to_list(self) -> list[int]:
        return [(self.bits >> j) & 1 for j in range(self.dim)]

    def to_hex(self) -> str:
        return _hex(self.bits, self.dim)

    def support(self) -> list[int]:
        return [j for j in range(self.dim) if (self.bits >> j) & 1]

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def __getitem__(self, j: int) -> int:
        return (self.bits >> j) & 1

    def __len__(self) -> int:
        return self.dim

    def __bool__(self) -> bool:
        return self.bits != 0

    def __add__(self, other: "Gf2Vector") -> "Gf2Vector":
        if self.dim != other.dim:
            raise Gf2Error("dimension mismatch %d != %d" % (self.dim, other.dim))
        return Gf2Vector(self.bits ^ other.bits, self.dim)

    __sub__ = __add__

    def dot(self, other: "Gf2Vector") -> int:
        if self.dim != other.dim:
            raise Gf2Error("dimension mismatch %d != %d" % (self.dim, other.dim))
        return (self.bits & other.bits).bit_count() & 1

    def __repr__(self) -> str:
        return "Gf2Vector(%s)" % "".join(str(b) for b in self.to_list())


@dataclass(frozen=True)
class Gf2Matrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows:
            raise Gf2Error("expected %d rows, got %d" % (self.rows, len(self.entries)))
        for r in self.entries:
            if r < 0 or r >> self.cols:
                raise Gf2Error("row exceeds %d columns" % self.cols)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Gf2Matrix":
        return cls(rows, cols, (0,) * rows)

    @classmethod
    def identity(cls, n: int) -> "Gf2Matrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "Gf2Matrix":
        cols = len(rows[0]) if rows else 0
        packed = []
        for r in rows:
            if len(r) != cols:
                raise Gf2Error("ragged rows")
            packed.append(Gf2Vector.from_list(r).bits)
        return cls(len(rows), cols, tuple(packed))

    @classmethod
    def from_columns(cls, columns: Sequence[Gf2Vector], rows: int | None = None) -> "Gf2Matrix":
        if rows is None:
            if not columns:
                raise Gf2Error("cannot infer row count from no columns")
            rows = columns[0].dim
        packed = [0] * rows
        for j, col in enumerate(columns):
            if col.dim != rows:
                raise Gf2Error("column %d has dimension %d, expected %d" % (j, col.dim, rows))
            b = col.bits
            while b:
                low = b & -b
                packed[low.bit_length() - 1] |= 1 << j
                b ^= low
        return cls(rows, len(columns), tuple(packed))

    @classmethod
    def from_hex_rows(cls, rows: Sequence[str], cols: int) -> "Gf2Matrix":
        return cls(len(rows), cols, tuple(int(r, 16) for r in rows))

    def to_hex_rows(self) -> list[str]:
        return [_hex(r, self.cols) for r in self.entries]

    def to_lists(self) -> list[list[int]]:
        return [Gf2Vector(r, self.cols).to_list() for r in self.entries]

    def row(self, i: int) -> Gf2Vector:
        return Gf2Vector(self.entries[i], self.cols)

    def column(self, j: int) -> Gf2Vector:
        bits = 0
        for i, r in enumerate(self.entries):
            if (r >> j) & 1:
                bits |= 1 << i
        return Gf2Vector(bits, self.rows)

    def columns(self) -> list[Gf2Vector]:
        return [self.column(j) for j in range(self.cols)]

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return (self.entries[i] >> j) & 1

    def transpose(self) -> "Gf2Matrix":
        return Gf2Matrix.from_columns([self.row(i) for i in range(self.rows)], self.cols)

    def apply(self, v: Gf2Vector) -> Gf2Vector:
        if v.dim != self.cols:
            raise Gf2Error("vector of dim %d against %d columns" % (v.dim, self.cols))
        bits = 0
        x = v.bits
        for i, r in enumerate(self.entries):
            if (r & x).bit_count() & 1:
                bits |= 1 << i
        return Gf2Vector(bits, self.rows)

    def __matmul__(self, other):
        if isinstance(other, Gf2Vector):
            return self.apply(other)
        if self.cols != other.rows:
            raise Gf2Error("shape mismatch %dx%d @ %dx%d" % (self.rows, self.cols, other.rows, other.cols))
        out = []
        for r in self.entries:
            acc = 0
            while r:
                low = r & -r
                acc ^= other.entries[low.bit_length() - 1]
                r ^= low
            out.append(acc)
        return Gf2Matrix(self.rows, other.cols, tuple(out))

    def __add__(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise Gf2Error("shape mismatch")
        return Gf2Matrix(self.rows, self.cols, tuple(a ^ b for a, b in zip(self.entries, other.entries)))

    def __pow__(self, k: int) -> "Gf2Matrix":
        if self.rows != self.cols:
            raise Gf2Error("power of a non-square matrix")
        result = Gf2Matrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def is_identity(self) -> bool:
        return self.rows == self.cols and all(r == 1 << i for i, r in enumerate(self.entries))

    def is_zero(self) -> bool:
        return not any(self.entries)

    def block(self, r0: int, r1: int, c0: int, c1: int) -> "Gf2Matrix":
        m = _mask(c1 - c0)
        return Gf2Matrix(r1 - r0, c1 - c0, tuple((r >> c0) & m for r in self.entries[r0:r1]))

    def column_images(self) -> list[int]:
        """Image of each unit vector, packed; the form the orbit engine consumes."""
        return [self.column(j).bits for j in range(self.cols)]

    def __repr__(self) -> str:
        return "Gf2Matrix(%dx%d, %s)" % (self.rows, self.cols, self.to_hex_rows())


def _echelon(rows: Sequence[int], ncols: int):
    """Reduced row echelon form with leftmost pivots.

    Returns the reduced rows, the pivot column of each, and for every reduced
    row the combination of input rows producing it (as a bitmask).
    """
    work = list(rows)
    combo = [1 << i for i in range(len(work))]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        bit = 1 << c
        p = next((i for i in range(r, len(work)) if work[i] & bit), None)
        if p is None:
            continue
        work[r], work[p] = work[p], work[r]
        combo[r], combo[p] = combo[p], combo[r]
        for i in range(len(work)):
            if i != r and work[i] & bit:
                work[i] ^= work[r]
                combo[i] ^= combo[r]
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    return work[:r], pivots, combo, work[r:], combo[r:]


def rank(m: Gf2Matrix) -> int:
    return len(_echelon(m.entries, m.cols)[1])


def rank_of(vectors: Sequence[Gf2Vector]) -> int:
    if not vectors:
        return 0
    return len(_echelon([v.bits for v in vectors], vectors[0].dim)[1])


def kernel_basis(m: Gf2Matrix) -> list[Gf2Vector]:
    reduced, pivots, *_ = _echelon(m.entries, m.cols)
    pivot_set = set(pivots)
    basis = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        bits = 1 << f
        for row, p in zip(reduced, pivots):
            if (row >> f) & 1:
                bits |= 1 << p
        basis.append(Gf2Vector(bits, m.cols))
    return basis


def solve(m: Gf2Matrix, b: Gf2Vector) -> Gf2Vector | None:
    """Some ``v`` with ``m @ v == b``, or None when ``b`` is outside the column space."""
    if b.dim != m.rows:
        raise Gf2Error("right-hand side has dim %d, matrix has %d rows" % (b.dim, m.rows))
    # augmented column sits at index m.cols
    aug = [r | (((b.bits >> i) & 1) << m.cols) for i, r in enumerate(m.entries)]
    reduced, pivots, *_ = _echelon(aug, m.cols + 1)
    if pivots and pivots[-1] == m.cols:
        return None
    bits = 0
    for row, p in zip(reduced, pivots):
        if (row >> m.cols) & 1:
            bits |= 1 << p
    return Gf2Vector(bits, m.cols)


def inverse(m: Gf2Matrix) -> Gf2Matrix:
    if m.rows != m.cols:
        raise Gf2Error("inverse of a non-square matrix")
    reduced, pivots, combo, _, _ = _echelon(m.entries, m.cols)
    if len(pivots) != m.rows:
        raise Gf2Error("matrix is singular (rank %d < %d)" % (len(pivots), m.rows))
    # reduced rows are unit rows e_p; combo says which original rows sum to them
    out = [0] * m.rows
    for p, c in zip(pivots, combo):
        out[p] = c
    return Gf2Matrix(m.rows, m.cols, tuple(out))


def in_span(vectors: Sequence[Gf2Vector], v: Gf2Vector) -> bool:
    if not vectors:
        return not v
    return solve(Gf2Matrix.from_columns(vectors), v) is not None


class QuotientChart:
    """Coordinates on ``ambient / span(subspace)`` in the classes of ``complement``.

    ``subspace + complement`` must be a basis of the ambient space.  The chart
    inverts the basis-change matrix once so repeated projections are a single
    matrix-vector product.
    """

    def __init__(self, subspace: Sequence[Gf2Vector], complement: Sequence[Gf2Vector]):
        basis = list(subspace) + list(complement)
        if not basis:
            raise Gf2Error("empty basis")
        dim = basis[0].dim
        if len(basis) != dim or rank_of(basis) != dim:
            raise Gf2Error(
                "subspace and complement do not form a basis: %d vectors of rank %d in dimension %d"
                % (len(basis), rank_of(basis), dim)
            )
        self.ambient_dim = dim
        self.k = len(subspace)
        self.n = len(complement)
        self.complement = list(complement)
        inv = inverse(Gf2Matrix.from_columns(basis))
        self._proj = inv.block(self.k, dim, 0, dim)

    def project(self, v: Gf2Vector) -> Gf2Vector:
        return self._proj.apply(v)

    def section(self, coords: Gf2Vector) -> Gf2Vector:
        if coords.dim != self.n:
            raise Gf2Error("coordinate vector has dim %d, expected %d" % (coords.dim, self.n))
        acc = 0
        for j in coords.support():
            acc ^= self.complement[j].bits
        return Gf2Vector(acc, self.ambient_dim)

    @property
    def projection_matrix(self) -> Gf2Matrix:
        return self._proj


def quotient_coords(subspace: Sequence[Gf2Vector], complement: Sequence[Gf2Vector], v: Gf2Vector) -> Gf2Vector:
    return QuotientChart(subspace, complement).project(v)
