import itertools
import random
from fractions import Fraction

import pytest

from curvecontact.exactla import (
    Matrix,
    SubspaceBasis,
    rank_and_kernel,
    solve_affine,
    subspace_contains,
)


def minor_rank(matrix: Matrix) -> int:
    """Independent rank oracle: largest nonsingular square minor, by cofactor dets."""

    def det(rows, cols):
        if len(rows) == 1:
            return matrix.rows[rows[0]][cols[0]]
        total = Fraction(0)
        sign = 1
        for k, r in enumerate(rows):
            total += sign * matrix.rows[r][cols[0]] * det(
                rows[:k] + rows[k + 1 :], cols[1:]
            )
            sign = -sign
        return total

    for size in range(min(matrix.nrows, matrix.ncols), 0, -1):
        for rows in itertools.combinations(range(matrix.nrows), size):
            for cols in itertools.combinations(range(matrix.ncols), size):
                if det(list(rows), list(cols)) != 0:
                    return size
    return 0


def random_matrix(rng, max_rows=4, max_cols=6):
    nrows = rng.randint(1, max_rows)
    ncols = rng.randint(1, max_cols)
    rows = [
        [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(ncols)]
        for _ in range(nrows)
    ]
    return Matrix(nrows, ncols, rows)


def test_rank_kernel_identity():
    rank, kernel = rank_and_kernel(Matrix.identity(2))
    assert rank == 2
    assert kernel.dim == 0


def test_rank_kernel_single_row():
    rank, kernel = rank_and_kernel(Matrix(1, 2, [[1, 1]]))
    assert rank == 1
    assert kernel.dim == 1
    assert kernel.contains([1, -1])


def test_rank_kernel_zero_matrix():
    rank, kernel = rank_and_kernel(Matrix.zeros(3, 3))
    assert rank == 0
    assert kernel == SubspaceBasis.full(3)


def test_rank_matches_minor_oracle():
    rng = random.Random(101)
    for _ in range(120):
        m = random_matrix(rng)
        rank, kernel = rank_and_kernel(m)
        assert rank == minor_rank(m)
        assert rank + kernel.dim == m.ncols


def test_kernel_vectors_annihilated():
    rng = random.Random(103)
    for _ in range(60):
        m = random_matrix(rng)
        _, kernel = rank_and_kernel(m)
        for v in kernel.vectors:
            assert all(x == 0 for x in m.apply(v))


def test_solve_affine_line():
    sol = solve_affine(Matrix(1, 2, [[1, 1]]), [1])
    assert sol is not None
    assert sol.particular == (1, 0)
    assert sol.kernel.dim == 1
    assert sol.kernel.contains([1, -1])


def test_solve_affine_inconsistent():
    assert solve_affine(Matrix(1, 1, [[0]]), [1]) is None


def test_solve_affine_identity():
    b = [Fraction(3), Fraction(-1, 2)]
    sol = solve_affine(Matrix.identity(2), b)
    assert sol is not None
    assert sol.particular == tuple(b)
    assert sol.kernel.dim == 0


def test_solve_affine_exactness_random():
    rng = random.Random(107)
    solved = 0
    while solved < 60:
        m = random_matrix(rng)
        x = [Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(m.ncols)]
        b = m.apply(x)
        sol = solve_affine(m, b)
        assert sol is not None  # consistent by construction
        assert m.apply(sol.particular) == b
        for k in sol.kernel.vectors:
            shifted = [p + kv for p, kv in zip(sol.particular, k)]
            assert m.apply(shifted) == b
        solved += 1


def test_solve_affine_detects_random_inconsistency():
    # 0 = 1 style rows must be flagged, not silently solved.
    m = Matrix(2, 2, [[1, 2], [2, 4]])
    assert solve_affine(m, [1, 3]) is None


def test_empty_shapes():
    rank, kernel = rank_and_kernel(Matrix.zeros(3, 0))
    assert rank == 0 and kernel.dim == 0
    rank, kernel = rank_and_kernel(Matrix.zeros(0, 3))
    assert rank == 0 and kernel.dim == 3
    sol = solve_affine(Matrix.zeros(2, 0), [0, 0])
    assert sol is not None and sol.particular == ()
    assert solve_affine(Matrix.zeros(2, 0), [0, 1]) is None


def test_subspace_contains():
    s = SubspaceBasis.from_spanning(2, [[1, 0]])
    assert subspace_contains(s, [2, 0])
    assert not subspace_contains(s, [0, 1])
    assert subspace_contains(s, [0, 0])


def test_subspace_dim_mismatch():
    s = SubspaceBasis.from_spanning(2, [[1, 0]])
    with pytest.raises(ValueError):
        s.contains([1, 0, 0])


def test_subspace_sum_and_equality():
    a = SubspaceBasis.from_spanning(3, [[1, 1, 0]])
    b = SubspaceBasis.from_spanning(3, [[0, 1, 1]])
    total = a + b
    assert total.dim == 2
    assert total.contains([1, 0, -1])
    # canonical representation: same span, same stored basis
    assert total == SubspaceBasis.from_spanning(3, [[1, 0, -1], [0, 1, 1]])


def test_subspace_containment_of_subspace():
    big = SubspaceBasis.from_spanning(3, [[1, 0, 0], [0, 1, 0]])
    small = SubspaceBasis.from_spanning(3, [[1, 1, 0]])
    assert big.contains_subspace(small)
    assert not small.contains_subspace(big)
