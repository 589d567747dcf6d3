"""The eleven acceptance criteria, each exact and under its own time limit.

Every criterion prints one ``PASS``/``FAIL`` line; the lines are repeated
in the pytest terminal summary. Run this file directly for the lines alone:

    python3 tests/test_acceptance.py
"""

import random
import sys
import time
from fractions import Fraction

import pytest

from leraykit import fixtures
from leraykit.exactla import RatMatrix, is_invertible
from leraykit.leray import leray_map
from leraykit.norms import duality_check, l1_seminorm, linf_seminorm, pairing
from leraykit.simplicial import cohomology_basis
from leraykit.verify import (
    FixtureSet,
    factorization_cases,
    suite_double_refinement,
    suite_factorization,
    suite_functoriality,
    suite_homology_factorization,
    suite_homotopy,
    suite_leray_isomorphism,
    suite_norms,
    suite_realizations,
    suite_row_quasi_iso,
    suite_two_routes,
    suite_vanishing,
)

SEED = 0
LINES = []


def _fx():
    return FixtureSet()


def _suite(fn, name, minimum):
    def run():
        r = fn(_fx(), random.Random(f"{SEED}:{name}"))
        assert r.ok, r.counterexample
        assert r.passed >= minimum, f"only {r.passed} cases checked"
        return f"{r.passed} cases"

    return run


def leray_isomorphism():
    A3 = fixtures.covering("c3_arcs")
    lr = leray_map(A3)
    assert all(is_invertible(m) for m in lr.matrices.values())
    # shipped acyclic coverings plus ten random ones
    return _suite(suite_leray_isomorphism, "leray-isomorphism", 11)()


def factorization_fixture_count():
    labels = [label for label, _, _ in factorization_cases(_fx())]
    assert labels[:2] == ["c3_arcs/FULL", "c3_arcs/TRUNC:1"]
    assert sum(label.startswith("EXPLICIT:") for label in labels) >= 5


def factorization():
    factorization_fixture_count()
    return _suite(suite_factorization, "factorization", 7)()


def homology_factorization():
    factorization_fixture_count()
    return _suite(suite_homology_factorization, "homology-factorization", 7)()


def realizations():
    # the three test complexes are the boundaries of the 2- and 3-simplex and C3 plus a point
    sphere = fixtures.complex("sphere2")
    assert [sphere.count(p) for p in range(3)] == [4, 6, 4]
    assert [fixtures.complex("c3").count(p) for p in range(2)] == [3, 3]
    return _suite(suite_realizations, "realizations", 3)()


def norms():
    X = fixtures.complex("c3")
    a = cohomology_basis(X, 1).coordinates([1, 0, 0])
    l1 = l1_seminorm(X, 1, [1]).value
    linf = linf_seminorm(X, 1, a).value
    assert (l1, linf, l1 * linf) == (3, Fraction(1, 3), 1)
    assert abs(pairing(X, 1, [1], a)) == 1
    rep = duality_check(X, 1, random_pairs=10)
    assert rep.holds and rep.classes[0]["max_pairing"] == "3"
    # ten random complexes; every LP certifies primal/dual agreement internally
    return _suite(suite_norms, "norms", 11)()


def vanishing():
    return _suite(suite_vanishing, "vanishing", 7)()


CRITERIA = [
    (1, "classical Leray isomorphism", 5, leray_isomorphism),
    (2, "two-route equality", 5, _suite(suite_two_routes, "two-route", 10)),
    (3, "contracting homotopy identities", 2, _suite(suite_homotopy, "homotopy-identities", 1)),
    (4, "factorization through the nerve", 5, factorization),
    (5, "homological factorization", 5, homology_factorization),
    (6, "realizations", 10, realizations),
    (7, "functoriality and choice independence", 10, _suite(suite_functoriality, "functoriality", 40)),
    (8, "double refinement", 2, _suite(suite_double_refinement, "double-refinement", 200)),
    (9, "norms and duality", 10, norms),
    (10, "vanishing above the nerve dimension", 5, vanishing),
    (11, "row quasi-isomorphisms", 5, _suite(suite_row_quasi_iso, "row-quasi-isomorphism", 50)),
]


def evaluate(number, title, limit, fn):
    start = time.perf_counter()
    error = None
    detail = ""
    try:
        detail = fn() or ""
    except AssertionError as e:
        error = f"assertion failed: {e}"
    elapsed = time.perf_counter() - start
    if error is None and elapsed >= limit:
        error = f"took {elapsed:.2f} s, limit {limit} s"
    status = "PASS" if error is None else "FAIL"
    line = f"{status} criterion {number:2d} {title}: {elapsed:.2f} s (limit {limit} s)"
    line += f"; {detail}" if error is None and detail else ""
    line += f"; {error}" if error else ""
    return error is None, line


@pytest.mark.parametrize("number, title, limit, fn", CRITERIA, ids=[f"criterion-{c[0]}" for c in CRITERIA])
def test_criterion(number, title, limit, fn):
    ok, line = evaluate(number, title, limit, fn)
    print(line)
    LINES.append(line)
    assert ok, line


def test_identity_oracles_for_the_arc_covering():
    lr = leray_map(fixtures.covering("c3_arcs"))
    assert lr.matrices[0] == RatMatrix.identity(1)
    assert lr.matrices[1] == RatMatrix.identity(1)


if __name__ == "__main__":
    results = [evaluate(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
