from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from leraykit.exactla import (
    ContainmentError,
    DimensionError,
    RatMatrix,
    format_rational,
    is_invertible,
    kernel_basis,
    matrix_inverse,
    parse_rational,
    quotient_data,
    rank,
    solve_particular,
)
from leraykit.simplicial import boundary_matrix

F = Fraction

small = st.fractions(min_value=-4, max_value=4, max_denominator=3)


@st.composite
def matrices(draw, max_rows=5, max_cols=5):
    m = draw(st.integers(1, max_rows))
    n = draw(st.integers(1, max_cols))
    return RatMatrix.from_dense([[draw(small) for _ in range(n)] for _ in range(m)], ncols=n)


def test_parse_and_format_round_trip():
    assert parse_rational("6/4") == F(3, 2)
    assert parse_rational(" -2 ") == -2
    assert format_rational(F(6, 4)) == "3/2"
    assert format_rational(F(4, 2)) == "2"
    with pytest.raises(TypeError):
        parse_rational(True)
    with pytest.raises(TypeError):
        parse_rational(0.5)
    with pytest.raises(ValueError):
        parse_rational("x/2")


def test_zeros_are_not_stored():
    m = RatMatrix.from_dense([[0, 1], [0, 0]])
    assert m.nnz() == 1
    assert list(m.entries()) == [(0, 1, F(1))]


def test_rank_of_c3_boundary_is_two(c3):
    assert rank(boundary_matrix(c3, 1)) == 2


def test_kernel_of_c3_boundary_is_the_fundamental_cycle(c3):
    d1 = boundary_matrix(c3, 1)
    (v,) = kernel_basis(d1)
    # edges are ordered 01, 02, 12; the cycle is 01 - 02 + 12 up to scale
    assert v[0] != 0 and v == [v[0], -v[0], v[0]]


def test_solve_particular_c3(c3):
    d1 = boundary_matrix(c3, 1)
    b = [F(-1), F(1), F(0)]  # v1 - v0
    x = solve_particular(d1, b)
    assert d1 @ x == b
    assert x == [1, 0, 0]


def test_solve_particular_inconsistent_returns_none():
    m = RatMatrix.from_dense([[1, 1], [1, 1]])
    assert solve_particular(m, [1, 2]) is None


def test_quotient_of_c3_cycles(c3):
    z = RatMatrix.from_columns(kernel_basis(boundary_matrix(c3, 1)), 3)
    q = quotient_data(z, RatMatrix.zeros(3, 0))
    assert q.dim == 1
    cycle = q.basis[0]
    assert q.coordinates(cycle) == [1]


def test_quotient_rejects_uncontained_subspace():
    big = RatMatrix.from_columns([[1, 0]], 2)
    sub = RatMatrix.from_columns([[0, 1]], 2)
    with pytest.raises(ContainmentError):
        quotient_data(big, sub)


def test_shape_mismatch_raises():
    a = RatMatrix.zeros(2, 3)
    with pytest.raises(DimensionError):
        a @ RatMatrix.zeros(2, 2)
    with pytest.raises(DimensionError):
        quotient_data(a, RatMatrix.zeros(3, 1))


def test_inverse():
    m = RatMatrix.from_dense([[2, 1], [1, 1]])
    assert matrix_inverse(m) @ m == RatMatrix.identity(2)
    assert not is_invertible(RatMatrix.from_dense([[1, 2], [2, 4]]))


def test_json_round_trip():
    m = RatMatrix.from_dense([[F(1, 2), 0], [0, F(-3)]])
    assert m.to_json() == [["1/2", "0"], ["0", "-3"]]
    assert RatMatrix.from_json(m.to_json()) == m


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_nullity(m):
    ker = kernel_basis(m)
    assert rank(m) + len(ker) == m.ncols
    for v in ker:
        assert not any(m @ v)


@settings(max_examples=60, deadline=None)
@given(matrices(), st.data())
def test_solve_consistent_systems(m, data):
    x0 = [data.draw(small) for _ in range(m.ncols)]
    b = m @ x0
    x = solve_particular(m, b)
    assert x is not None and m @ x == b


@settings(max_examples=40, deadline=None)
@given(matrices(), matrices())
def test_transpose_of_product(a, b):
    b = RatMatrix.from_dense([[b[i % b.nrows, j] for j in range(b.ncols)] for i in range(a.ncols)], ncols=b.ncols)
    assert (a @ b).T == b.T @ a.T
    assert rank(a) == rank(a.T)
