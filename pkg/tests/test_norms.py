import random
from fractions import Fraction

import pytest

from leraykit import fixtures
from leraykit.norms import (
    InvalidClassError,
    duality_check,
    l1_seminorm,
    linf_seminorm,
    max_pairing,
    pairing,
)
from leraykit.randomgen import random_complex


def test_fundamental_class_of_c3(c3):
    r = l1_seminorm(c3, 1, [1])
    assert r.value == 3
    assert r.optimizer == [1, -1, 1]
    # certificate: a cocycle of sup norm 1 attaining the value
    assert max(abs(x) for x in r.dual) == 1
    assert sum(a * b for a, b in zip(r.optimizer, r.dual)) == 3


def test_homogeneity(c3):
    assert l1_seminorm(c3, 1, [2]).value == 6
    assert l1_seminorm(c3, 1, [Fraction(-1, 2)]).value == Fraction(3, 2)
    assert l1_seminorm(c3, 1, [0]).value == 0


def test_linf_of_the_generator(c3):
    r = linf_seminorm(c3, 1, [1])
    assert r.value == Fraction(1, 3)
    assert [abs(x) for x in r.optimizer] == [Fraction(1, 3)] * 3
    assert linf_seminorm(c3, 1, [0]).value == 0


def test_linf_of_a_zero_group():
    X = fixtures.complex("simplex2")
    assert linf_seminorm(X, 1, []).value == 0


def test_pairing_and_duality_on_c3(c3):
    assert pairing(c3, 1, [1], [1]) == 1
    assert l1_seminorm(c3, 1, [1]).value * linf_seminorm(c3, 1, [1]).value == 1
    assert max_pairing(c3, 1, [1]).value == 3
    rep = duality_check(c3, 1, random_pairs=10)
    assert rep.holds and rep.bound_violations == 0
    assert rep.classes == [{"class": ["1"], "l1": "3", "max_pairing": "3", "equal": True}]


def test_disjoint_circles_add():
    X = fixtures.complex("two_c3")
    rep = duality_check(X, 1, random_pairs=5)
    assert rep.holds and [c["l1"] for c in rep.classes] == ["3", "3"]
    assert l1_seminorm(X, 1, [1, 1]).value == 6
    assert l1_seminorm(X, 1, [1, -2]).value == 9


def test_sphere_fundamental_class():
    X = fixtures.complex("sphere2")
    assert l1_seminorm(X, 2, [1]).value == 4
    assert duality_check(X, 2, random_pairs=3).holds


def test_degree_zero_class(c3):
    assert l1_seminorm(c3, 0, [1]).value == 1


def test_invalid_classes(c3):
    with pytest.raises(InvalidClassError):
        l1_seminorm(c3, 1, [1, 0])
    with pytest.raises(InvalidClassError):
        linf_seminorm(c3, 1, [])
    with pytest.raises(InvalidClassError):
        pairing(c3, 1, [1], [1, 1])


@pytest.mark.parametrize("seed", range(4))
def test_duality_on_random_complexes(seed):
    X = random_complex(random.Random(seed), max_vertices=6)
    for p in range(X.dim + 1):
        rep = duality_check(X, p, random_pairs=3, rng=random.Random(seed))
        assert rep.holds, rep.to_json()


def test_report_json(c3):
    r = l1_seminorm(c3, 1, [1]).to_json()
    assert r["value"] == "3" and r["optimizer"] == ["1", "-1", "1"]
