"""Multiplication tables as points of structure-constant schemes.

An n-dimensional commutative multiplication is stored as the symmetric
tensor ``table[i][j][k]``: the k-th coordinate of the product of the i-th
and j-th basis vectors.  Flattening the tensor in the fixed order
``(i*n + j)*n + k`` identifies tables with points of the affine space the
scheme ideals of :mod:`.schemes` live in.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from ..exactla import Matrix, SubspaceBasis, rank_and_kernel, solve_affine

Vector = tuple[Fraction, ...]


def _fracs(values) -> Vector:
    return tuple(v if isinstance(v, Fraction) else Fraction(v) for v in values)


def flat_index(i: int, j: int, k: int, n: int) -> int:
    """Coordinate of c_ijk in the flattened n^3-dimensional space."""
    return (i * n + j) * n + k


class AlgebraPoint:
    """Symmetric structure-constant tensor of a commutative multiplication."""

    __slots__ = ("n", "table")

    def __init__(self, n: int, table: Sequence[Sequence[Sequence]]):
        if n < 1:
            raise ValueError("the algebra dimension must be positive")
        rows = tuple(tuple(_fracs(cell) for cell in plane) for plane in table)
        if len(rows) != n or any(
            len(plane) != n or any(len(cell) != n for cell in plane) for plane in rows
        ):
            raise ValueError(f"table must be an {n}x{n}x{n} tensor")
        for i in range(n):
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise ValueError(
                        f"table is not symmetric: products {i + 1}*{j + 1} and "
                        f"{j + 1}*{i + 1} differ"
                    )
        self.n = n
        self.table = rows

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> AlgebraPoint:
        z = [[([0] * n) for _ in range(n)] for _ in range(n)]
        return cls(n, z)

    @classmethod
    def from_products(cls, n: int, products: Mapping[tuple[int, int], Sequence]) -> AlgebraPoint:
        """Build a table from a sparse product map; omitted pairs are zero.

        Symmetry is applied automatically; giving both (i, j) and (j, i) with
        different values is a conflict and is rejected.
        """
        cells: dict[tuple[int, int], Vector] = {}
        for (i, j), value in products.items():
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"product index ({i}, {j}) out of range")
            vec = _fracs(value)
            if len(vec) != n:
                raise ValueError(f"product ({i}, {j}) must be a vector of length {n}")
            for key in ((i, j), (j, i)):
                if key in cells and cells[key] != vec:
                    raise ValueError(
                        f"conflicting products for basis pair ({i + 1}, {j + 1})"
                    )
                cells[key] = vec
        zero = (Fraction(0),) * n
        return cls(
            n,
            [[cells.get((i, j), zero) for j in range(n)] for i in range(n)],
        )

    @classmethod
    def from_flat(cls, n: int, flat: Sequence) -> AlgebraPoint:
        values = _fracs(flat)
        if len(values) != n**3:
            raise ValueError(f"expected {n ** 3} entries, got {len(values)}")
        return cls(
            n,
            [
                [
                    [values[flat_index(i, j, k, n)] for k in range(n)]
                    for j in range(n)
                ]
                for i in range(n)
            ],
        )

    # -- multiplication -----------------------------------------------------

    def basis_product(self, i: int, j: int) -> Vector:
        return self.table[i][j]

    def product(self, u: Sequence, v: Sequence) -> Vector:
        """The product of two coordinate vectors."""
        uu = _fracs(u)
        vv = _fracs(v)
        if len(uu) != self.n or len(vv) != self.n:
            raise ValueError("vectors do not match the algebra dimension")
        out = [Fraction(0)] * self.n
        for i, ui in enumerate(uu):
            if ui == 0:
                continue
            for j, vj in enumerate(vv):
                if vj == 0:
                    continue
                cell = self.table[i][j]
                scale = ui * vj
                for k in range(self.n):
                    if cell[k] != 0:
                        out[k] += scale * cell[k]
        return tuple(out)

    def associator_defect(self, i: int, j: int, k: int) -> Vector:
        left = self.product(self.basis_product(i, j), _unit(self.n, k))
        right = self.product(_unit(self.n, i), self.basis_product(j, k))
        return tuple(a - b for a, b in zip(left, right))

    def is_associative(self) -> bool:
        return all(
            all(x == 0 for x in self.associator_defect(i, j, k))
            for i in range(self.n)
            for j in range(self.n)
            for k in range(self.n)
        )

    def triple_products_vanish(self) -> bool:
        """Degree-3 nilpotency: every (e_i e_j) e_k is zero."""
        unit = [_unit(self.n, k) for k in range(self.n)]
        for i in range(self.n):
            for j in range(i, self.n):
                w = self.basis_product(i, j)
                if all(x == 0 for x in w):
                    continue
                for k in range(self.n):
                    if any(x != 0 for x in self.product(w, unit[k])):
                        return False
        return True

    # -- coordinates --------------------------------------------------------

    def flatten(self) -> Vector:
        n = self.n
        return tuple(
            self.table[i][j][k] for i in range(n) for j in range(n) for k in range(n)
        )

    def change_basis(self, g: Matrix) -> AlgebraPoint:
        """Transport the table along the basis change e_i -> g(e_i).

        ``g`` holds the images of the basis vectors as columns and must be
        invertible; the new table represents the same algebra in the new
        basis.
        """
        n = self.n
        if g.nrows != n or g.ncols != n:
            raise ValueError("basis change matrix has the wrong shape")
        images = [tuple(g.rows[i][j] for i in range(n)) for j in range(n)]
        inverse_cols = []
        for k in range(n):
            sol = solve_affine(g, _unit(n, k))
            if sol is None or sol.kernel.dim > 0:
                raise ValueError("basis change matrix is singular")
            inverse_cols.append(sol.particular)
        # column k of g^-1 solves g x = e_k; rows of g^-1 assemble from them
        ginv_rows = [[inverse_cols[k][i] for k in range(n)] for i in range(n)]
        table = []
        for i in range(n):
            plane = []
            for j in range(n):
                prod = self.product(images[i], images[j])
                plane.append(
                    tuple(
                        sum(
                            (ginv_rows[k][s] * prod[s] for s in range(n)),
                            Fraction(0),
                        )
                        for k in range(n)
                    )
                )
            table.append(plane)
        return AlgebraPoint(n, table)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraPoint):
            return NotImplemented
        return self.n == other.n and self.table == other.table

    def __repr__(self) -> str:
        return f"AlgebraPoint(n={self.n})"


def _unit(n: int, k: int) -> Vector:
    return tuple(Fraction(1) if i == k else Fraction(0) for i in range(n))


@dataclass(frozen=True)
class AlgebraInvariants:
    """Square and annihilator of an algebra, with the family membership test."""

    square: SubspaceBasis
    annihilator: SubspaceBasis

    def admits(self, r: int) -> bool:
        """Membership predicate of the family with parameter r."""
        return self.square.dim <= r <= self.annihilator.dim


def algebra_invariants(point: AlgebraPoint) -> AlgebraInvariants:
    """Span of all products, and the space of elements killing the algebra."""
    n = point.n
    products = [point.basis_product(i, j) for i in range(n) for j in range(i, n)]
    square = SubspaceBasis.from_spanning(n, products)
    # x annihilates iff x . e_j = 0 for every j: rows indexed by (j, k).
    rows = [
        [point.table[i][j][k] for i in range(n)]
        for j in range(n)
        for k in range(n)
    ]
    _, annihilator = rank_and_kernel(Matrix.from_rows(rows, n))
    return AlgebraInvariants(square, annihilator)
