"""Splitting a nilpotent algebra into generators plus its square.

For a degree-3 nilpotent commutative algebra the span of all products (the
square) annihilates everything, so choosing a complement spanned by standard
basis vectors splits the space into a "generator" summand and the square.
Symmetric bilinear maps then decompose into blocks indexed by which summand
each argument and the value live in, and all the obstruction machinery of
:mod:`.obstructions` is phrased in these block coordinates.

The construction is deterministic: the square's basis consists of the pivot
columns of the matrix of all basis products, and the generator summand takes
the first standard basis vectors independent of it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..exactla import Matrix, SubspaceBasis, solve_affine
from .points import AlgebraPoint, Vector, _fracs, _unit, flat_index


class Splitting:
    """A decomposition of the ambient space into generators plus the square."""

    __slots__ = ("n", "d", "r", "gen_basis", "sq_basis", "_basis", "_inverse_rows")

    def __init__(self, n: int, gen_basis: Sequence[Sequence], sq_basis: Sequence[Sequence]):
        gens = tuple(_fracs(v) for v in gen_basis)
        sqs = tuple(_fracs(v) for v in sq_basis)
        if any(len(v) != n for v in gens) or any(len(v) != n for v in sqs):
            raise ValueError("splitting basis vectors must have the ambient length")
        if len(gens) + len(sqs) != n:
            raise ValueError("splitting basis sizes must add up to the dimension")
        self.n = n
        self.d = len(gens)
        self.r = len(sqs)
        self.gen_basis = gens
        self.sq_basis = sqs
        columns = list(gens) + list(sqs)
        basis = Matrix(n, n, [[columns[j][i] for j in range(n)] for i in range(n)])
        inverse_cols = []
        for k in range(n):
            sol = solve_affine(basis, _unit(n, k))
            if sol is None or sol.kernel.dim > 0:
                raise ValueError("splitting basis vectors are not independent")
            inverse_cols.append(sol.particular)
        self._basis = basis
        self._inverse_rows = tuple(
            tuple(inverse_cols[k][i] for k in range(n)) for i in range(n)
        )

    @classmethod
    def from_point(cls, point: AlgebraPoint) -> Splitting:
        """Canonical splitting: square from pivot product columns, generators
        from the first standard basis vectors independent of the square."""
        n = point.n
        products = [
            point.basis_product(i, j) for i in range(n) for j in range(i, n)
        ]
        sq_space = SubspaceBasis.from_spanning(n, products)
        sq_basis = []
        span_so_far = SubspaceBasis.zero(n)
        for vec in products:
            if not span_so_far.contains(vec):
                sq_basis.append(vec)
                span_so_far = span_so_far + SubspaceBasis.from_spanning(n, [vec])
        assert span_so_far == sq_space
        gen_basis = []
        span = sq_space
        for i in range(n):
            e = _unit(n, i)
            if not span.contains(e):
                gen_basis.append(e)
                span = span + SubspaceBasis.from_spanning(n, [e])
        return cls(n, gen_basis, sq_basis)

    def split_coords(self, vec: Sequence) -> Vector:
        """Coordinates in the split basis: first d generator, last r square."""
        v = _fracs(vec)
        if len(v) != self.n:
            raise ValueError("vector does not match the ambient dimension")
        return tuple(
            sum((row[j] * v[j] for j in range(self.n)), Fraction(0))
            for row in self._inverse_rows
        )

    def unsplit(self, coords: Sequence) -> Vector:
        c = _fracs(coords)
        if len(c) != self.n:
            raise ValueError("coordinate vector does not match the dimension")
        return self._basis.apply(c)

    def is_valid_for(self, point: AlgebraPoint) -> bool:
        """The square summand must equal the span of all products."""
        if point.n != self.n:
            return False
        n = point.n
        products = [point.basis_product(i, j) for i in range(n) for j in range(i, n)]
        actual = SubspaceBasis.from_spanning(n, products)
        declared = SubspaceBasis.from_spanning(n, self.sq_basis)
        return actual == declared

    def __repr__(self) -> str:
        return f"Splitting(n={self.n}, d={self.d}, r={self.r})"


Tensor = tuple[tuple[Vector, ...], ...]


def _tensor(n: int, data: Sequence[Sequence[Sequence]]) -> Tensor:
    rows = tuple(tuple(_fracs(cell) for cell in plane) for plane in data)
    if len(rows) != n or any(
        len(plane) != n or any(len(cell) != n for cell in plane) for plane in rows
    ):
        raise ValueError(f"expected an {n}x{n}x{n} tensor")
    for i in range(n):
        for j in range(i + 1, n):
            if rows[i][j] != rows[j][i]:
                raise ValueError("tensor is not symmetric in its two arguments")
    return rows


def tensor_from_flat(n: int, flat: Sequence) -> Tensor:
    values = _fracs(flat)
    if len(values) != n**3:
        raise ValueError(f"expected {n ** 3} entries, got {len(values)}")
    return _tensor(
        n,
        [
            [[values[flat_index(i, j, k, n)] for k in range(n)] for j in range(n)]
            for i in range(n)
        ],
    )


def tensor_flatten(tensor: Tensor) -> Vector:
    n = len(tensor)
    return tuple(
        tensor[i][j][k] for i in range(n) for j in range(n) for k in range(n)
    )


def _apply_bilinear(tensor: Tensor, x: Vector, y: Vector) -> Vector:
    n = len(tensor)
    out = [Fraction(0)] * n
    for i, xi in enumerate(x):
        if xi == 0:
            continue
        for j, yj in enumerate(y):
            if yj == 0:
                continue
            cell = tensor[i][j]
            s = xi * yj
            for k in range(n):
                if cell[k] != 0:
                    out[k] += s * cell[k]
    return tuple(out)


def to_split_tensor(tensor: Tensor, split: Splitting) -> Tensor:
    """Rewrite a symmetric map in the split basis (arguments and values)."""
    n = split.n
    columns = list(split.gen_basis) + list(split.sq_basis)
    out = []
    for a in range(n):
        plane = []
        for b in range(n):
            value = _apply_bilinear(tensor, columns[a], columns[b])
            plane.append(split.split_coords(value))
        out.append(tuple(plane))
    return tuple(out)


def from_split_tensor(tensor: Tensor, split: Splitting) -> Tensor:
    """Inverse of :func:`to_split_tensor`."""
    n = split.n
    coords = [split.split_coords(_unit(n, i)) for i in range(n)]
    out = []
    for i in range(n):
        plane = []
        for j in range(n):
            value = _apply_bilinear(tensor, coords[i], coords[j])
            plane.append(split.unsplit(value))
        out.append(tuple(plane))
    return tuple(out)


@dataclass(frozen=True)
class SymMapBlocks:
    """Block decomposition of a symmetric map along a splitting.

    Block ``m<ij>_<k>`` sends summand i tensor summand j into summand k,
    where summand 1 is the generator complement and summand 2 the square.
    Blocks with swapped arguments are determined by symmetry and not stored.
    """

    d: int
    r: int
    split_tensor: Tensor

    def _slice(self, arange, brange, crange) -> tuple:
        return tuple(
            tuple(
                tuple(self.split_tensor[a][b][c] for c in crange) for b in brange
            )
            for a in arange
        )

    @property
    def m11_1(self):
        return self._slice(range(self.d), range(self.d), range(self.d))

    @property
    def m11_2(self):
        return self._slice(range(self.d), range(self.d), range(self.d, self.d + self.r))

    @property
    def m12_1(self):
        return self._slice(range(self.d), range(self.d, self.d + self.r), range(self.d))

    @property
    def m12_2(self):
        return self._slice(
            range(self.d), range(self.d, self.d + self.r), range(self.d, self.d + self.r)
        )

    @property
    def m22_1(self):
        return self._slice(
            range(self.d, self.d + self.r), range(self.d, self.d + self.r), range(self.d)
        )

    @property
    def m22_2(self):
        return self._slice(
            range(self.d, self.d + self.r),
            range(self.d, self.d + self.r),
            range(self.d, self.d + self.r),
        )

    def satisfies_block_constraints(self) -> bool:
        """True when the 12->1, 22->1 and 22->2 blocks all vanish."""

        def zero(block) -> bool:
            return all(x == 0 for plane in block for cell in plane for x in cell)

        return zero(self.m12_1) and zero(self.m22_1) and zero(self.m22_2)

    def reassemble(self, split: Splitting) -> Tensor:
        return from_split_tensor(self.split_tensor, split)


def split_blocks(tensor: Tensor, split: Splitting) -> SymMapBlocks:
    """Decompose a symmetric map into summand-indexed blocks."""
    return SymMapBlocks(split.d, split.r, to_split_tensor(_tensor(split.n, tensor), split))


# ---------------------------------------------------------------------------
# tangent subspaces attached to an algebra point
# ---------------------------------------------------------------------------


def orbit_tangent(point: AlgebraPoint) -> SubspaceBasis:
    """Tangent space of the basis-change orbit through the point.

    Spanned, over a basis of linear maps phi, by the symmetric tensors
    x o y = x phi(y) - phi(xy) + y phi(x).
    """
    n = point.n
    vectors = []
    for a in range(n):
        for b in range(n):
            # phi sends e_b to e_a and kills the other basis vectors
            flat = [Fraction(0)] * n**3
            for i in range(n):
                for j in range(n):
                    cell = [Fraction(0)] * n
                    if j == b:
                        prod = point.basis_product(i, a)
                        for k in range(n):
                            cell[k] += prod[k]
                    if i == b:
                        prod = point.basis_product(j, a)
                        for k in range(n):
                            cell[k] += prod[k]
                    cell[a] -= point.table[i][j][b]
                    for k in range(n):
                        if cell[k] != 0:
                            flat[flat_index(i, j, k, n)] = cell[k]
            vectors.append(flat)
    return SubspaceBasis.from_spanning(n**3, vectors)


def coboundary_tensor(point: AlgebraPoint, phi: Matrix) -> Tensor:
    """The orbit direction induced by one linear map phi (columns = images)."""
    n = point.n
    if phi.nrows != n or phi.ncols != n:
        raise ValueError("phi must be an n x n matrix")
    images = [tuple(phi.rows[i][j] for i in range(n)) for j in range(n)]
    table = []
    for i in range(n):
        plane = []
        for j in range(n):
            first = point.product(_unit(n, i), images[j])
            second = point.product(_unit(n, j), images[i])
            prod = point.basis_product(i, j)
            moved = tuple(
                sum((phi.rows[k][s] * prod[s] for s in range(n)), Fraction(0))
                for k in range(n)
            )
            plane.append(
                tuple(a + b - c for a, b, c in zip(first, second, moved))
            )
        table.append(tuple(plane))
    return tuple(table)


def functional_scalings(point: AlgebraPoint, split: Splitting) -> SubspaceBasis:
    """Directions x o y = x f(y) + y f(x) for functionals f killing the square."""
    n = point.n
    vectors = []
    for a in range(split.d):
        flat = [Fraction(0)] * n**3
        values = [split.split_coords(_unit(n, i))[a] for i in range(n)]
        for i in range(n):
            for j in range(n):
                # f(e_j) e_i + f(e_i) e_j
                if values[j] != 0:
                    flat[flat_index(i, j, i, n)] += values[j]
                if values[i] != 0:
                    flat[flat_index(i, j, j, n)] += values[i]
        vectors.append(flat)
    return SubspaceBasis.from_spanning(n**3, vectors)


def square_valued_maps(split: Splitting) -> SubspaceBasis:
    """Symmetric maps sending generator pairs into the square, zero elsewhere."""
    return SubspaceBasis.from_spanning(
        split.n**3, [tensor_flatten(t) for t in square_valued_basis(split)]
    )


def square_valued_basis(split: Splitting) -> list[Tensor]:
    """Basis tensors of :func:`square_valued_maps`, in standard coordinates."""
    n = split.n
    out = []
    zero_cell = (Fraction(0),) * n
    for a in range(split.d):
        for b in range(a, split.d):
            for c in range(split.r):
                data = [[list(zero_cell) for _ in range(n)] for _ in range(n)]
                data[a][b][split.d + c] = Fraction(1)
                data[b][a][split.d + c] = Fraction(1)
                out.append(from_split_tensor(_tensor(n, data), split))
    return out
