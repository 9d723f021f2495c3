"""Dense linear algebra over GF(2).

Rows are packed into Python integers (bit ``j`` of a row is column ``j``),
so a row operation is a single XOR regardless of width.  All values are
immutable; every routine returns fresh objects.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class DimensionError(ValueError):
    """Raised when operands have incompatible shapes."""


@dataclass(frozen=True)
class BitVector:
    length: int
    bits: int = 0

    def __post_init__(self) -> None:
        if self.length < 0:
            raise DimensionError("negative length")
        if self.bits < 0 or self.bits >> self.length:
            raise DimensionError("bits outside vector length")

    @classmethod
    def from_list(cls, entries: Sequence[int]) -> BitVector:
        bits = 0
        for i, v in enumerate(entries):
            if v & 1:
                bits |= 1 << i
        return cls(len(entries), bits)

    @classmethod
    def from_support(cls, length: int, support: Iterable[int]) -> BitVector:
        bits = 0
        for i in support:
            if not 0 <= i < length:
                raise IndexError(i)
            bits ^= 1 << i
        return cls(length, bits)

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def __len__(self) -> int:
        return self.length

    def __add__(self, other: BitVector) -> BitVector:
        if other.length != self.length:
            raise DimensionError("length mismatch")
        return BitVector(self.length, self.bits ^ other.bits)

    def to_list(self) -> list[int]:
        return [(self.bits >> i) & 1 for i in range(self.length)]

    def support(self) -> list[int]:
        return _support(self.bits)

    def is_zero(self) -> bool:
        return self.bits == 0


@dataclass(frozen=True)
class BitMatrix:
    """A ``rows x cols`` matrix stored as a tuple of packed row integers."""

    rows: int
    cols: int
    data: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise DimensionError("negative shape")
        if not self.data and self.rows:
            object.__setattr__(self, "data", (0,) * self.rows)
        if len(self.data) != self.rows:
            raise DimensionError("row count does not match storage")
        for r in self.data:
            if r < 0 or r >> self.cols:
                raise DimensionError("row wider than cols")

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]], cols: int | None = None) -> BitMatrix:
        if cols is None:
            cols = len(entries[0]) if entries else 0
        data = []
        for row in entries:
            if len(row) != cols:
                raise DimensionError("ragged rows")
            data.append(BitVector.from_list(row).bits)
        return cls(len(entries), cols, tuple(data))

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[int]) -> BitMatrix:
        """Build from packed column integers (bit ``i`` of a column is row ``i``)."""
        data = [0] * rows
        for j, col in enumerate(columns):
            if col < 0 or col >> rows:
                raise DimensionError("column taller than rows")
            for i in _support(col):
                data[i] |= 1 << j
        return cls(rows, len(columns), tuple(data))

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def zero(cls, rows: int, cols: int) -> BitMatrix:
        return cls(rows, cols, (0,) * rows)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return (self.data[i] >> j) & 1

    def row(self, i: int) -> BitVector:
        return BitVector(self.cols, self.data[i])

    def column(self, j: int) -> BitVector:
        if not 0 <= j < self.cols:
            raise IndexError(j)
        bits = 0
        for i, r in enumerate(self.data):
            if (r >> j) & 1:
                bits |= 1 << i
        return BitVector(self.rows, bits)

    def columns(self) -> list[int]:
        cols = [0] * self.cols
        for i, r in enumerate(self.data):
            for j in _support(r):
                cols[j] |= 1 << i
        return cols

    def transpose(self) -> BitMatrix:
        return BitMatrix(self.cols, self.rows, tuple(self.columns()))

    def to_lists(self) -> list[list[int]]:
        return [BitVector(self.cols, r).to_list() for r in self.data]

    def is_zero(self) -> bool:
        return not any(self.data)

    def matvec(self, x: BitVector) -> BitVector:
        if x.length != self.cols:
            raise DimensionError("matvec: length mismatch")
        bits = 0
        for i, r in enumerate(self.data):
            if (r & x.bits).bit_count() & 1:
                bits |= 1 << i
        return BitVector(self.rows, bits)

    def __matmul__(self, other: BitMatrix) -> BitMatrix:
        if self.cols != other.rows:
            raise DimensionError("matmul: inner dimensions differ")
        out = []
        for r in self.data:
            acc = 0
            for k in _support(r):
                acc ^= other.data[k]
            out.append(acc)
        return BitMatrix(self.rows, other.cols, tuple(out))

    def permute_rows(self, order: Sequence[int]) -> BitMatrix:
        if sorted(order) != list(range(self.rows)):
            raise ValueError("not a permutation")
        return BitMatrix(self.rows, self.cols, tuple(self.data[i] for i in order))


def _support(bits: int) -> list[int]:
    out = []
    while bits:
        low = bits & -bits
        out.append(low.bit_length() - 1)
        bits ^= low
    return out


def _rref(data: Sequence[int], cols: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form; pivots chosen left to right."""
    rows = list(data)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        bit = 1 << c
        found = -1
        for i in range(r, len(rows)):
            if rows[i] & bit:
                found = i
                break
        if found < 0:
            continue
        rows[r], rows[found] = rows[found], rows[r]
        pr = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] & bit:
                rows[i] ^= pr
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(m: BitMatrix) -> int:
    # Elimination keyed on the lowest set bit; order-independent result.
    pivots: dict[int, int] = {}
    for r in m.data:
        while r:
            low = r & -r
            p = pivots.get(low)
            if p is None:
                pivots[low] = r
                break
            r ^= p
    return len(pivots)


def solve(a: BitMatrix, b: BitVector) -> BitVector | None:
    """Return some ``x`` with ``a x = b``, or ``None`` if inconsistent.

    The returned solution has every free variable of the reduced echelon
    form of ``a`` set to zero.
    """
    if b.length != a.rows:
        raise DimensionError(f"rhs length {b.length} != rows {a.rows}")
    return ColumnSolver(a.rows, a.columns()).solve(b)


def kernel_basis(a: BitMatrix) -> list[BitVector]:
    reduced, pivots = _rref(a.data, a.cols)
    pivot_set = set(pivots)
    basis = []
    for f in range(a.cols):
        if f in pivot_set:
            continue
        bits = 1 << f
        for row, p in zip(reduced, pivots):
            if (row >> f) & 1:
                bits |= 1 << p
        basis.append(BitVector(a.cols, bits))
    return basis


class ColumnSolver:
    """Incremental column reduction for repeated solves against one matrix.

    Columns are absorbed in order; a column that is independent of the ones
    before it becomes a pivot and remembers which original columns it is
    made of.  Solving is then a single reduction of the right-hand side.
    Dependent columns never enter a solution, which is exactly the
    "free variables are zero" choice of the reduced echelon form.
    """

    def __init__(self, rows: int, columns: Iterable[int] = ()) -> None:
        self.rows = rows
        self.ncols = 0
        # keyed by the highest set row bit of the reduced column
        self._pivots: dict[int, tuple[int, int]] = {}
        for col in columns:
            self.add_column(col)

    def add_column(self, col: int) -> bool:
        """Append a column; return True if it raised the rank."""
        if col < 0 or col >> self.rows:
            raise DimensionError("column taller than rows")
        combo = 1 << self.ncols
        self.ncols += 1
        col, combo = self._reduce(col, combo)
        if col:
            self._pivots[col.bit_length() - 1] = (col, combo)
            return True
        return False

    def _reduce(self, v: int, combo: int) -> tuple[int, int]:
        pivots = self._pivots
        while v:
            top = v.bit_length() - 1
            hit = pivots.get(top)
            if hit is None:
                break
            v ^= hit[0]
            combo ^= hit[1]
        return v, combo

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def in_span(self, v: int) -> bool:
        # full reduction, not just until the first free top bit
        pivots = self._pivots
        while v:
            hit = pivots.get(v.bit_length() - 1)
            if hit is None:
                return False
            v ^= hit[0]
        return True

    def solve_bits(self, v: int) -> int | None:
        combo = 0
        pivots = self._pivots
        while v:
            hit = pivots.get(v.bit_length() - 1)
            if hit is None:
                return None
            v ^= hit[0]
            combo ^= hit[1]
        return combo

    def solve(self, b: BitVector) -> BitVector | None:
        if b.length != self.rows:
            raise DimensionError("rhs length mismatch")
        x = self.solve_bits(b.bits)
        return None if x is None else BitVector(self.ncols, x)
