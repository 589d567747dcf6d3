from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from leraykit import fixtures
from leraykit.exactla import RatMatrix, rank
from leraykit.randomgen import random_complex
from leraykit.simplicial import (
    InvalidMapError,
    SimplicialComplex,
    SimplicialMap,
    UnknownVertexError,
    barycentric_subdivision,
    boundary_matrix,
    closure,
    cohomology_basis,
    homology_basis,
    induced_on_quotients,
    induced_map,
)


def test_closure_adds_faces():
    X = closure([["a", "b", "c"]], ["a", "b", "c"])
    assert [X.count(p) for p in range(3)] == [3, 3, 1]
    with pytest.raises(UnknownVertexError):
        closure([["a", "z"]], ["a", "b"])


def test_full_simplex_top_boundary():
    X = fixtures.complex("simplex2")
    assert boundary_matrix(X, 2).column(0) == [1, -1, 1]


@pytest.mark.parametrize(
    "name, betti",
    [
        ("c3", [1, 1]),
        ("c4", [1, 1]),
        ("simplex2", [1, 0, 0]),
        ("point", [1]),
        ("sphere2", [1, 0, 1]),
        ("c3_point", [2, 1]),
        ("two_c3", [2, 2]),
    ],
)
def test_betti_numbers(name, betti):
    X = fixtures.complex(name)
    assert [homology_basis(X, p).dim for p in range(X.dim + 1)] == betti
    assert [cohomology_basis(X, p).dim for p in range(X.dim + 1)] == betti


def test_c3_bases(c3):
    assert homology_basis(c3, 1).basis == [[1, -1, 1]]
    assert cohomology_basis(c3, 1).basis == [[1, 0, 0]]


def test_rotation_of_c3_acts_trivially_on_h1(c3):
    rot = SimplicialMap(c3, c3, {"0": "1", "1": "2", "2": "0"})
    assert induced_map(rot, 1, "homology") == RatMatrix.identity(1)
    assert induced_map(rot, 1, "cohomology") == RatMatrix.identity(1)


def test_reflection_of_c3_negates_h1(c3):
    ref = SimplicialMap(c3, c3, {"0": "0", "1": "2", "2": "1"})
    assert induced_map(ref, 1) == RatMatrix.from_dense([[-1]])


def test_non_simplicial_vertex_map_rejected():
    X = closure([["a", "b"]], ["a", "b"])
    Y = closure([["x"], ["y"]], ["x", "y"])
    with pytest.raises(InvalidMapError):
        SimplicialMap(X, Y, {"a": "x", "b": "y"})


def test_subdivision_of_c3_is_a_hexagon(c3):
    sd = barycentric_subdivision(c3)
    assert sd.complex.count(0) == 6 and sd.complex.count(1) == 6
    m = induced_on_quotients(sd.chain_map(1), homology_basis(c3, 1), homology_basis(sd.complex, 1))
    assert m.shape == (1, 1) and abs(m[0, 0]) == 1


@pytest.mark.parametrize("name", ["c3", "simplex2", "sphere2", "c3_point"])
def test_subdivision_is_a_chain_map_and_quasi_isomorphism(name):
    X = fixtures.complex(name)
    sd = barycentric_subdivision(X)
    for p in range(1, X.dim + 1):
        assert boundary_matrix(sd.complex, p) @ sd.chain_map(p) == sd.chain_map(p - 1) @ boundary_matrix(X, p)
    for p in range(X.dim + 1):
        m = induced_on_quotients(sd.chain_map(p), homology_basis(X, p), homology_basis(sd.complex, p))
        assert m.nrows == m.ncols == rank(m)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_boundary_squares_to_zero(seed):
    import random

    X = random_complex(random.Random(seed), max_vertices=6, max_dim=3)
    for p in range(2, X.dim + 1):
        assert (boundary_matrix(X, p - 1) @ boundary_matrix(X, p)).is_zero()
    # Euler characteristic from simplices and from Betti numbers
    chi = sum((-1) ** p * X.count(p) for p in range(X.dim + 1))
    assert chi == sum((-1) ** p * homology_basis(X, p).dim for p in range(X.dim + 1))


def test_json_round_trip(c3):
    from leraykit.io import complex_from_json

    assert complex_from_json(c3.to_json()) == c3
