"""Exact linear algebra over the rationals.

Rank, kernel bases, affine solving and subspace membership, computed by
fraction-free (Bareiss) elimination on integer-scaled rows with a final
reduction back to lowest-term rationals.  Keeping the elimination in
integers bounds the intermediate coefficient growth that naive rational
pivoting suffers from.

All results are canonical: pivots are chosen in column order, kernel and
solution vectors set free variables via the identity pattern, and subspace
bases are stored in reduced row echelon form.  Two equal subspaces therefore
compare equal componentwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

Vector = tuple[Fraction, ...]


def _fracs(values: Iterable) -> Vector:
    return tuple(v if isinstance(v, Fraction) else Fraction(v) for v in values)


class Matrix:
    """Dense rational matrix; rows are tuples of Fraction."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows: Sequence[Sequence]):
        data = [_fracs(row) for row in rows]
        if len(data) != nrows or any(len(r) != ncols for r in data):
            raise ValueError(f"matrix data does not match shape {nrows}x{ncols}")
        self.nrows = nrows
        self.ncols = ncols
        self.rows = tuple(data)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], ncols: int | None = None) -> Matrix:
        data = [list(r) for r in rows]
        if data:
            width = len(data[0])
        elif ncols is not None:
            width = ncols
        else:
            raise ValueError("cannot infer the column count of an empty matrix")
        return cls(len(data), width, data)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> Matrix:
        return cls(nrows, ncols, [[0] * ncols for _ in range(nrows)])

    @classmethod
    def identity(cls, n: int) -> Matrix:
        return cls(n, n, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def apply(self, vec: Sequence) -> Vector:
        v = _fracs(vec)
        if len(v) != self.ncols:
            raise ValueError(f"vector length {len(v)} does not match {self.ncols} columns")
        return tuple(sum((r[j] * v[j] for j in range(self.ncols)), Fraction(0)) for r in self.rows)

    def transpose(self) -> Matrix:
        return Matrix(
            self.ncols,
            self.nrows,
            [[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)],
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.rows == other.rows and self.ncols == other.ncols

    def __repr__(self) -> str:
        return f"Matrix({self.nrows}x{self.ncols})"


def _integer_rows(rows: Sequence[Vector]) -> list[list[int]]:
    """Scale each row by the lcm of its denominators; row spaces are unchanged."""
    out = []
    for row in rows:
        mult = 1
        for v in row:
            mult = lcm(mult, v.denominator)
        ints = [int(v * mult) for v in row]
        g = 0
        for v in ints:
            g = gcd(g, abs(v))
        if g > 1:
            ints = [v // g for v in ints]
        out.append(ints)
    return out


def _bareiss_echelon(rows: list[list[int]], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon form.

    Returns the pivot rows (in order) and their pivot columns.  Entries stay
    integral throughout; every division below is exact (Bareiss).
    """
    work = [row[:] for row in rows if any(row)]
    pivot_rows: list[list[int]] = []
    pivot_cols: list[int] = []
    prev_pivot = 1
    r = 0
    for col in range(ncols):
        sel = None
        for i in range(r, len(work)):
            if work[i][col] != 0:
                sel = i
                break
        if sel is None:
            continue
        work[r], work[sel] = work[sel], work[r]
        pivot = work[r][col]
        row_r = work[r]
        # Every row below is updated, zero factor or not: the Bareiss exact
        # division by the previous pivot relies on the full minor invariant.
        for i in range(r + 1, len(work)):
            row_i = work[i]
            factor = row_i[col]
            for j in range(col, ncols):
                row_i[j] = (row_i[j] * pivot - factor * row_r[j]) // prev_pivot
        pivot_cols.append(col)
        pivot_rows.append(work[r])
        prev_pivot = pivot
        r += 1
        if r == len(work):
            break
    return pivot_rows, pivot_cols


def _echelon(rows: Sequence[Vector], ncols: int) -> tuple[list[Vector], list[int]]:
    """Echelon form with rational entries, derived from the Bareiss form."""
    ints = _integer_rows([_fracs(r) for r in rows])
    pivot_rows, pivot_cols = _bareiss_echelon(ints, ncols)
    return [tuple(Fraction(v) for v in row) for row in pivot_rows], pivot_cols


def _back_substitute(
    echelon: Sequence[Vector], pivot_cols: Sequence[int], ncols: int, frees: dict[int, Fraction], rhs: Sequence[Fraction] | None = None
) -> list[Fraction]:
    """Solve the echelon system with the given free-variable assignment."""
    x = [Fraction(0)] * ncols
    for col, val in frees.items():
        x[col] = val
    for i in range(len(pivot_cols) - 1, -1, -1):
        pc = pivot_cols[i]
        acc = Fraction(0) if rhs is None else -rhs[i]
        row = echelon[i]
        for j in range(pc + 1, ncols):
            if row[j] != 0 and x[j] != 0:
                acc += row[j] * x[j]
        x[pc] = -acc / row[pc]
    return x


@dataclass(frozen=True)
class SubspaceBasis:
    """A linear subspace, stored as a reduced-row-echelon basis."""

    ambient_dim: int
    vectors: tuple[Vector, ...]

    @classmethod
    def from_spanning(cls, ambient_dim: int, vectors: Iterable[Sequence]) -> SubspaceBasis:
        rows = []
        for v in vectors:
            fv = _fracs(v)
            if len(fv) != ambient_dim:
                raise ValueError(f"vector of length {len(fv)} in ambient dimension {ambient_dim}")
            rows.append(fv)
        echelon, pivot_cols = _echelon(rows, ambient_dim)
        # Normalize to reduced echelon: unit pivots, zeros above each pivot.
        reduced = [list(r) for r in echelon]
        for i, pc in enumerate(pivot_cols):
            inv = reduced[i][pc]
            reduced[i] = [v / inv for v in reduced[i]]
        for i in range(len(pivot_cols) - 1, -1, -1):
            pc = pivot_cols[i]
            for k in range(i):
                factor = reduced[k][pc]
                if factor != 0:
                    reduced[k] = [a - factor * b for a, b in zip(reduced[k], reduced[i])]
        return cls(ambient_dim, tuple(tuple(r) for r in reduced))

    @classmethod
    def zero(cls, ambient_dim: int) -> SubspaceBasis:
        return cls(ambient_dim, ())

    @classmethod
    def full(cls, ambient_dim: int) -> SubspaceBasis:
        return cls.from_spanning(
            ambient_dim,
            [[1 if i == j else 0 for j in range(ambient_dim)] for i in range(ambient_dim)],
        )

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def _reduce(self, v: Sequence) -> Vector:
        """Reduce v against the reduced-echelon basis; zero iff v is in the span."""
        w = list(_fracs(v))
        if len(w) != self.ambient_dim:
            raise ValueError(
                f"vector of length {len(w)} against ambient dimension {self.ambient_dim}"
            )
        for row in self.vectors:
            pc = next(i for i, a in enumerate(row) if a != 0)
            if w[pc] != 0:
                factor = w[pc]
                w = [a - factor * b for a, b in zip(w, row)]
        return tuple(w)

    def contains(self, v: Sequence) -> bool:
        return all(a == 0 for a in self._reduce(v))

    def contains_subspace(self, other: SubspaceBasis) -> bool:
        if other.ambient_dim != self.ambient_dim:
            raise ValueError("subspaces live in different ambient dimensions")
        return all(self.contains(v) for v in other.vectors)

    def __add__(self, other: SubspaceBasis) -> SubspaceBasis:
        if other.ambient_dim != self.ambient_dim:
            raise ValueError("subspaces live in different ambient dimensions")
        return SubspaceBasis.from_spanning(self.ambient_dim, self.vectors + other.vectors)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SubspaceBasis):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.vectors == other.vectors

    def __repr__(self) -> str:
        return f"SubspaceBasis(dim {self.dim} in k^{self.ambient_dim})"


def subspace_contains(basis: SubspaceBasis, v: Sequence) -> bool:
    """True iff v lies in the span of the basis."""
    return basis.contains(v)


def rank_and_kernel(matrix: Matrix) -> tuple[int, SubspaceBasis]:
    """Exact rank and a canonical kernel basis; rank + dim kernel = ncols."""
    echelon, pivot_cols = _echelon(matrix.rows, matrix.ncols)
    rank = len(pivot_cols)
    pivot_set = set(pivot_cols)
    free_cols = [c for c in range(matrix.ncols) if c not in pivot_set]
    kernel_vectors = []
    for fc in free_cols:
        x = _back_substitute(echelon, pivot_cols, matrix.ncols, {fc: Fraction(1)})
        kernel_vectors.append(x)
    return rank, SubspaceBasis.from_spanning(matrix.ncols, kernel_vectors)


@dataclass(frozen=True)
class AffineSolution:
    """One solution of A x = b plus the full solution space's direction."""

    particular: Vector
    kernel: SubspaceBasis


def solve_affine(matrix: Matrix, rhs: Sequence) -> AffineSolution | None:
    """Solve A x = b exactly.

    Returns the canonical solution (free variables zero, pivots in column
    order) together with a kernel basis, or None when the system is
    inconsistent.
    """
    b = _fracs(rhs)
    if len(b) != matrix.nrows:
        raise ValueError(f"rhs length {len(b)} does not match {matrix.nrows} rows")
    augmented = [row + (bv,) for row, bv in zip(matrix.rows, b)]
    echelon, pivot_cols = _echelon(augmented, matrix.ncols + 1)
    if matrix.ncols in pivot_cols:
        return None
    # The pivot pattern of the first ncols columns doubles as A's echelon.
    rhs_col = [row[matrix.ncols] for row in echelon]
    x = _back_substitute(
        [row[: matrix.ncols] for row in echelon],
        pivot_cols,
        matrix.ncols,
        {},
        rhs=rhs_col,
    )
    particular = tuple(x)
    pivot_set = set(pivot_cols)
    free_cols = [c for c in range(matrix.ncols) if c not in pivot_set]
    kernel_vectors = [
        _back_substitute(
            [row[: matrix.ncols] for row in echelon], pivot_cols, matrix.ncols, {fc: Fraction(1)}
        )
        for fc in free_cols
    ]
    return AffineSolution(particular, SubspaceBasis.from_spanning(matrix.ncols, kernel_vectors))
