from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from species_cohomology.linalg import (
    Echelon,
    NotAComplexError,
    SparseMatrix,
    cohomology_at,
    cohomology_dimension,
    image_basis,
    in_image,
    kernel_basis,
    rank,
    solve,
)

small = st.integers(-3, 3)


@st.composite
def matrices(draw, max_rows=6, max_cols=6):
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(0, max_cols))
    rows = draw(st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r))
    return rows, r, c


def sparse(rows, c):
    return SparseMatrix.from_dense(rows, cols=c)


@given(matrices())
def test_rank_matches_sympy(m):
    rows, r, c = m
    M = sparse(rows, c)
    expected = sympy.Matrix(r, c, [x for row in rows for x in row]).rank() if r and c else 0
    assert rank(M) == expected
    assert rank(M.transpose()) == expected


@given(matrices())
def test_kernel_basis(m):
    rows, r, c = m
    M = sparse(rows, c)
    ker = kernel_basis(M)
    assert len(ker) == c - rank(M)
    for v in ker:
        assert all(x == 0 for x in M.apply(v))
    if ker:
        K = SparseMatrix.from_dense(ker, cols=c)
        assert rank(K) == len(ker)


@given(matrices())
def test_image_basis_spans_columns(m):
    rows, r, c = m
    M = sparse(rows, c)
    basis = image_basis(M)
    assert len(basis) == rank(M)
    for col in range(c):
        assert in_image(M, [Fraction(row[col]) for row in rows])


@given(matrices(), st.data())
def test_solve(m, data):
    rows, r, c = m
    M = sparse(rows, c)
    x = data.draw(st.lists(small, min_size=c, max_size=c))
    b = M.apply([Fraction(v) for v in x])
    y = solve(M, b)
    assert y is not None and M.apply(y) == b


def test_solve_inconsistent():
    M = SparseMatrix.from_dense([[1, 1], [2, 2]])
    assert solve(M, [1, 3]) is None
    assert not in_image(M, [1, 3])
    assert in_image(M, [1, 2])


def test_rational_entries():
    M = SparseMatrix.from_dense([[Fraction(1, 2), Fraction(1, 3)], [Fraction(1, 4), Fraction(1, 6)]])
    assert rank(M) == 1
    assert solve(M, [1, Fraction(1, 2)]) == [2, 0]


def test_echelon_incremental():
    ech = Echelon()
    assert ech.add({0: 2, 1: 4})
    assert not ech.add({0: 1, 1: 2})
    assert ech.add({1: 3})
    assert len(ech) == 2
    assert ech.contains([5, 7])
    assert ech.rref() == [(0, {0: 1}), (1, {1: 1})]


def test_cohomology_of_simplicial_circle():
    # boundary of a triangle: C^0 (3 vertices) -> C^1 (3 edges)
    d0 = SparseMatrix.from_dense([[-1, 1, 0], [0, -1, 1], [-1, 0, 1]])
    empty_in = SparseMatrix(3, 0)
    to_nothing = SparseMatrix(0, 3)
    assert cohomology_at(empty_in, d0)[0] == 1
    dim, reps = cohomology_at(d0, to_nothing)
    assert dim == 1 and len(reps) == 1
    assert not in_image(d0, reps[0])
    assert cohomology_dimension(d0, to_nothing) == 1


def test_not_a_complex():
    d = SparseMatrix.from_dense([[1]])
    with pytest.raises(NotAComplexError):
        cohomology_at(d, d)
    with pytest.raises(ValueError):
        cohomology_at(SparseMatrix(2, 1), SparseMatrix(1, 3))


def test_sparse_matrix_basics():
    A = SparseMatrix.from_dense([[1, 0], [0, 2]])
    assert (A @ A).to_dense() == [[1, 0], [0, 4]]
    assert SparseMatrix.identity(2) @ A == A
    assert SparseMatrix.zeros(2, 3).is_zero()
    A.add(1, 1, -2)
    assert A.entries == {(0, 0): 1}
    with pytest.raises(IndexError):
        SparseMatrix(1, 1, {(1, 0): 1})
    with pytest.raises(ValueError):
        A.apply([1])
