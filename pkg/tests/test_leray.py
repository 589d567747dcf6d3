import random

import pytest

from leraykit import fixtures
from leraykit.coverings import Covering, CoveringMorphism
from leraykit.exactla import RatMatrix, is_invertible
from leraykit.leray import (
    PreconditionError,
    choice_independence_check,
    contracting_homotopy,
    covering_double_complex,
    factorization_check,
    glue_matrix,
    homology_factorization_check,
    homology_leray_map,
    homotopy_matrix,
    is_acyclic,
    lambda_map,
    leray_map,
    leray_transformation_check,
    realization_check,
    restriction_matrix,
    star_covering,
    tau_map,
    vanishing_check,
)
from leraykit.randomgen import (
    random_acyclic_covering,
    random_complex,
    random_covering_morphism,
    random_morphism_with_alternative,
    random_vector,
)
from leraykit.simplicial import SimplicialMap, closure, cohomology_basis, homology_basis
from leraykit.systems import FULL, TruncatedSystem
from leraykit.verify import homotopy_defects


def test_lambda_of_a_nerve_edge_is_constant_on_its_support(arcs):
    C = covering_double_complex(arcs)
    T = C.total
    N = arcs.nerve
    e01 = N.simplices(1)[0]  # {u0, u1}, support = vertex 1
    c = [1 if s == e01 else 0 for s in N.simplices(1)]
    got = lambda_map(C)[1] @ c
    assert got == T.embed(1, 0, C.place(1, 0, e01, [1]))


def test_tau_restricts_a_cocycle_to_each_element(arcs):
    C = covering_double_complex(arcs)
    T = C.total
    x = [1, 0, 0]  # 1 on edge 01
    got = tau_map(C)[1] @ x
    # edge 01 lies only in u0
    assert got == T.embed(0, 1, C.place(0, 1, (0,), [1]))


def test_homotopy_identity_on_arcs(arcs):
    rng = random.Random(0)
    C = covering_double_complex(arcs).double
    for q in (0, 1):
        k1 = homotopy_matrix(arcs, 1, q)
        delta0 = C.delta(0, q)
        glue, restrict = glue_matrix(arcs, q), restriction_matrix(arcs, q)
        for _ in range(50):
            # the nerve is one-dimensional, so on C^1 the identity reads δk = 1
            c = random_vector(rng, C.dim(1, q))
            assert delta0 @ (k1 @ c) == c
            b = random_vector(rng, C.dim(0, q))
            assert [x + y for x, y in zip(k1 @ (delta0 @ b), restrict @ (glue @ b))] == b
        assert glue @ restrict == RatMatrix.identity(arcs.base.count(q))


def test_contracting_homotopy_infers_degree(arcs):
    assert contracting_homotopy(arcs, 0, [0, 1, 0, 0, 0, 0]) == glue_matrix(arcs, 0) @ [0, 1, 0, 0, 0, 0]


@pytest.mark.parametrize("name", ["c3_arcs", "c4_four_arcs", "sphere2_triangles", "c3_point_arcs"])
def test_homotopy_defects_vanish(name):
    assert homotopy_defects(fixtures.covering(name), random.Random(1), samples=10) == []


def test_leray_on_arcs_is_invertible_both_routes(arcs):
    lr = leray_map(arcs)
    for n in (0, 1):
        assert lr.matrices[n].shape == (1, 1) and is_invertible(lr.matrices[n])
        assert lr.matrices[n] == lr.edge_matrices[n]
    assert lr.replay()


def test_homology_leray_is_dual_to_leray(arcs):
    lr, hl = leray_map(arcs), homology_leray_map(arcs)
    X, N = arcs.base, arcs.nerve.complex
    for n in (0, 1):
        assert hl.matrices[n] == hl.lift_matrices[n]
        P_X = _pairing_matrix(homology_basis(X, n), cohomology_basis(X, n))
        P_N = _pairing_matrix(homology_basis(N, n), cohomology_basis(N, n))
        assert hl.matrices[n].T @ P_N == P_X @ lr.matrices[n]


def _pairing_matrix(H, Hc):
    return RatMatrix.from_dense([[sum(a * b for a, b in zip(z, al)) for al in Hc.basis] for z in H.basis],
                                ncols=Hc.dim)


def test_leray_is_computed_for_non_acyclic_coverings():
    U = fixtures.covering("c4_two_arcs")
    assert not is_acyclic(U)
    lr = leray_map(U)
    # nerve is an edge, so H^1(N) = 0 while H^1(C4) = Q
    assert lr.matrices[1].shape == (1, 0)


def test_acyclicity_reports():
    assert is_acyclic(fixtures.covering("c3_arcs")).acyclic
    rep = is_acyclic(fixtures.covering("c3_single"))
    assert not rep and rep.failures == {"whole": [1]}
    assert is_acyclic(fixtures.covering("c4_two_arcs")).failures == {"left,right": [0]}


def test_factorization_full_and_truncated(arcs):
    for A in (FULL, TruncatedSystem(1), TruncatedSystem(0)):
        fr = factorization_check(arcs, A)
        assert fr.holds, fr.mismatched
        hfr = homology_factorization_check(arcs, A)
        assert hfr.holds, hfr.mismatched


def test_full_factorization_has_identity_phi(arcs):
    fr = factorization_check(arcs, FULL)
    for n in (0, 1):
        assert fr.phi_star[n] == RatMatrix.identity(1)


def test_factorization_requires_acyclicity():
    with pytest.raises(PreconditionError):
        factorization_check(fixtures.covering("c3_single"), FULL)
    with pytest.raises(PreconditionError):
        homology_factorization_check(fixtures.covering("c4_two_arcs"), FULL)


@pytest.mark.parametrize("name", fixtures.names("systems"))
def test_factorization_on_engineered_systems(name):
    U, E = fixtures.explicit_system(name)
    assert factorization_check(U, E).holds
    assert homology_factorization_check(U, E).holds


def test_vanishing_with_nonzero_top_cohomology():
    # H_A^2 != 0 over a one-dimensional nerve
    U, E = fixtures.explicit_system("c3-extra-top")
    fr = factorization_check(U, E)
    assert U.nerve.dim == 1
    assert fr.phi_star[2].ncols > 0
    assert vanishing_check(U, E, fr) == [2]
    assert fr.phi_star[2].is_zero() and fr.composite[2].is_zero()


def test_vanishing_on_the_sphere_hemispheres():
    U, E = fixtures.explicit_system("sphere-hemispheres-locconst")
    assert vanishing_check(U, E) == [2]


@pytest.mark.parametrize("name", ["c3", "sphere2", "c3_point", "simplex2"])
def test_realizations(name):
    N = fixtures.complex(name)
    res = realization_check(N)
    assert res.nerve_matches
    assert res.holds


def test_star_covering_names_follow_the_vertices(c3):
    sd, U = star_covering(c3)
    assert U.names == ("0", "1", "2")
    assert U.base is sd.complex


def test_rotation_square(arcs):
    X = arcs.base
    m = CoveringMorphism(SimplicialMap(X, X, {"0": "1", "1": "2", "2": "0"}), arcs, arcs)
    assert leray_transformation_check(m).holds


def test_map_to_the_single_element_covering(arcs):
    m = CoveringMorphism(SimplicialMap.identity(arcs.base), arcs, Covering.single(arcs.base, "whole"))
    res = leray_transformation_check(m)
    assert res.holds
    # the nerve of the single covering is a point, so nothing survives in degree 1
    assert res.left[1].is_zero()


@pytest.mark.parametrize("seed", range(5))
def test_random_squares_and_choices(seed):
    rng = random.Random(seed)
    assert leray_transformation_check(random_covering_morphism(rng)).holds
    m, alt = random_morphism_with_alternative(rng)
    assert leray_transformation_check(m, alt).holds
    assert choice_independence_check(m, [a[0] for a in _admissible(m)], alt) == []


def _admissible(m):
    from leraykit.coverings import admissible_targets

    return admissible_targets(m)


@pytest.mark.parametrize("seed", range(5))
def test_random_acyclic_coverings_have_invertible_leray(seed):
    rng = random.Random(seed)
    X = random_complex(rng, max_vertices=7)
    U = random_acyclic_covering(rng, X)
    assert is_acyclic(U)
    lr = leray_map(U)
    for n, m in lr.matrices.items():
        assert m.nrows == m.ncols and is_invertible(m), n


def test_disconnected_support_breaks_invertibility_in_degree_zero():
    X = closure([["a", "b"], ["b", "c"], ["c", "d"], ["d", "a"]], ["a", "b", "c", "d"])
    U = Covering(X, ["L", "R"], [[(0, 1), (1, 2)], [(2, 3), (0, 3)]])
    lr = leray_map(U)
    assert lr.matrices[1].ncols == 0 and lr.matrices[1].nrows == 1
