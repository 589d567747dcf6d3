import random

import pytest

from leraykit import fixtures
from leraykit.bicomplex import (
    DoubleComplex,
    DoubleComplexError,
    DoubleComplexMorphism,
    ExactnessError,
    compare_totals,
    edge_iso_matrix,
    edge_iso_matrix_homological,
    edge_reduce_cocycle,
    row_exactness_failures,
)
from leraykit.exactla import DimensionError, RatMatrix, is_invertible, rank
from leraykit.leray import covering_double_complex, homology_covering_complex
from leraykit.randomgen import random_row_quasi_isomorphism, random_vector


def _square(commuting):
    # K^{0,0} = K^{1,0} = K^{0,1} = K^{1,1} = Q, every map the identity
    one = RatMatrix.identity(1)
    dims = {(0, 0): 1, (1, 0): 1, (0, 1): 1, (1, 1): 1}
    return DoubleComplex(dims, {(0, 0): one, (1, 0): one}, {(0, 0): one, (0, 1): one}, commuting=commuting)


def test_commuting_square_is_normalized():
    K = _square(commuting=True)
    assert K.d(1, 0) == RatMatrix.from_dense([[-1]])
    T = K.total
    assert [T.dim(n) for n in range(3)] == [1, 2, 1]
    assert (T.differential(1) @ T.differential(0)).is_zero()


def test_commuting_square_without_flag_is_rejected():
    with pytest.raises(DoubleComplexError):
        _square(commuting=False)


def test_shape_mismatch_is_rejected():
    with pytest.raises(DimensionError):
        DoubleComplex({(0, 0): 1, (0, 1): 2}, {(0, 0): RatMatrix.identity(1)}, {})


def test_arc_block_dimensions(arcs):
    K = covering_double_complex(arcs).double
    assert K.dims == {(0, 0): 6, (0, 1): 3, (1, 0): 3}
    T = K.total
    assert [T.dim(n) for n in range(3)] == [6, 6, 0]


def test_homological_arc_block_dimensions(arcs):
    K = homology_covering_complex(arcs).double
    assert K.homological
    assert K.dims == {(0, 0): 6, (0, 1): 3, (1, 0): 3}


def test_arc_rows_are_exact_above_the_edge(arcs):
    assert row_exactness_failures(covering_double_complex(arcs).double) == []


def test_reduction_postcondition_on_coboundaries(arcs):
    K = covering_double_complex(arcs).double
    T = K.total
    rng = random.Random(1)
    for _ in range(20):
        w = random_vector(rng, T.dim(0))
        z = T.differential(0) @ w
        y, w2 = edge_reduce_cocycle(K, z, 1)
        assert T.differential(0) @ w2 == [a - b for a, b in zip(z, T.embed(1, 0, y))]


def test_reduction_rejects_non_cocycles(arcs):
    K = covering_double_complex(arcs).double
    # T^2 = 0, so only degree 0 has non-cocycles
    z = [0] * K.total.dim(0)
    z[0] = 1
    with pytest.raises(DoubleComplexError):
        edge_reduce_cocycle(K, z, 0)


def test_edge_isomorphisms_on_arcs(arcs):
    K = covering_double_complex(arcs).double
    for n in (0, 1):
        m = edge_iso_matrix(K, n)
        assert m.shape == (1, 1) and is_invertible(m)
        assert m == edge_iso_matrix(K, n, "inclusion")
    H = homology_covering_complex(arcs).double
    assert is_invertible(edge_iso_matrix_homological(H, 1))


def test_non_exact_rows_raise():
    # the only support of the one-element covering is C3 itself, with H^1 != 0
    K = covering_double_complex(fixtures.covering("c3_single")).double
    assert row_exactness_failures(K) == [(0, 1)]
    with pytest.raises(ExactnessError):
        edge_iso_matrix(K, 1)


def test_transpose_twice_is_identity(arcs):
    K = covering_double_complex(arcs).double
    KK = K.transpose().transpose()
    assert KK.dims == K.dims
    for p, q in K.bidegrees():
        assert KK.d(p, q) == K.d(p, q) and KK.delta(p, q) == K.delta(p, q)


def test_identity_morphism_induces_identity(arcs):
    K = covering_double_complex(arcs).double
    f = DoubleComplexMorphism(K, K, {k: RatMatrix.identity(n) for k, n in K.dims.items()})
    assert compare_totals(f, 1) == RatMatrix.identity(1)


def test_non_commuting_morphism_is_rejected():
    K = _square(commuting=True)
    blocks = {(0, 0): RatMatrix.identity(1)}
    with pytest.raises(DoubleComplexError):
        DoubleComplexMorphism(K, K, blocks)


@pytest.mark.parametrize("seed", range(10))
def test_row_quasi_isomorphisms_are_total_isomorphisms(seed):
    f = random_row_quasi_isomorphism(random.Random(seed)).morphism
    K, L = f.source, f.target
    for p in K.p_range:
        for q in K.q_range:
            assert is_invertible(f.row_map_induced(p, q))
    top = max(p + q for p, q in K.dims) if K.dims else 0
    for n in range(top + 1):
        m = compare_totals(f, n)
        assert m.nrows == m.ncols == rank(m)
