from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from leraykit.exactla import RatMatrix
from leraykit.lp import INFEASIBLE, OPTIMAL, UNBOUNDED, LPProblem, lp_solve


def _lp(c, rows, rels, b, free=()):
    return LPProblem(c, RatMatrix.from_dense(rows, ncols=len(c)), rels, b, list(free))


def test_single_lower_bound():
    r = lp_solve(_lp([1], [[1]], [">="], [1]))
    assert r.status == OPTIMAL and r.value == 1 and r.primal == [1] and r.dual == [1]


def test_simplex_constraint():
    r = lp_solve(_lp([1, 1], [[1, 1]], ["="], [1]))
    assert r.status == OPTIMAL and r.value == 1


def test_absolute_value_program():
    # variables (b, t): minimize t with -t <= 1 - b <= t
    r = lp_solve(_lp([0, 1], [[-1, -1], [-1, 1]], ["<=", ">="], [-1, -1], free=[True, False]))
    assert r.status == OPTIMAL and r.value == 0 and r.primal == [1, 0]


def test_unbounded_and_infeasible():
    assert lp_solve(_lp([-1], [[1]], [">="], [0])).status == UNBOUNDED
    assert lp_solve(_lp([1], [[1], [1]], ["<=", ">="], [1, 2])).status == INFEASIBLE


def test_redundant_equalities():
    r = lp_solve(_lp([1, 2], [[1, 1], [2, 2]], ["=", "="], [1, 2]))
    assert r.status == OPTIMAL and r.value == 1


def test_degenerate_program_terminates():
    # a classic cycling example for the largest-coefficient rule
    c = [Fraction(-3, 4), 150, Fraction(-1, 50), 6]
    rows = [[Fraction(1, 4), -60, Fraction(-1, 25), 9], [Fraction(1, 2), -90, Fraction(-1, 50), 3], [0, 0, 1, 0]]
    r = lp_solve(_lp(c, rows, ["<=", "<=", "<="], [0, 0, 1]))
    assert r.status == OPTIMAL and r.value == Fraction(-1, 20)


def test_validation():
    with pytest.raises(ValueError):
        _lp([1, 2], [[1]], [">="], [1])
    with pytest.raises(ValueError):
        _lp([1], [[1]], ["<"], [1])


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_random_programs_are_certified(data):
    n = data.draw(st.integers(1, 4))
    m = data.draw(st.integers(1, 4))
    ints = st.integers(-3, 3)
    rows = [[data.draw(ints) for _ in range(n)] for _ in range(m)]
    rels = [data.draw(st.sampled_from(["<=", "=", ">="])) for _ in range(m)]
    b = [data.draw(ints) for _ in range(m)]
    c = [data.draw(ints) for _ in range(n)]
    free = [data.draw(st.booleans()) for _ in range(n)]
    # box the variables so that optimal is the common outcome
    for j in range(n):
        rows.append([1 if k == j else 0 for k in range(n)])
        rels.append("<=")
        b.append(5)
        rows.append([1 if k == j else 0 for k in range(n)])
        rels.append(">=")
        b.append(-5)
    r = lp_solve(_lp(c, rows, rels, b, free))
    # lp_solve certifies primal and dual feasibility and equal objectives itself
    assert r.status in (OPTIMAL, INFEASIBLE)
    if r.status == OPTIMAL:
        assert r.value == sum(ci * xi for ci, xi in zip(c, r.primal))
        assert r.value == sum(bi * yi for bi, yi in zip(b, r.dual))
