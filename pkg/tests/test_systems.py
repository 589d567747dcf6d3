import copy
import json

import pytest

from leraykit import fixtures
from leraykit.coverings import Covering
from leraykit.exactla import RatMatrix
from leraykit.systems import (
    FULL,
    ExplicitSystem,
    SystemError,
    TruncatedSystem,
    parse_system,
    support_from_key,
    support_key,
)


def test_parse_system_forms(arcs):
    assert parse_system("FULL") is FULL
    t = parse_system("TRUNC:1")
    assert isinstance(t, TruncatedSystem) and t.m == 1
    with pytest.raises(ValueError):
        parse_system("TRUNC:x")
    with pytest.raises(ValueError):
        parse_system("SOMETHING")
    with pytest.raises(ValueError):
        parse_system("EXPLICIT:whatever.json")


def test_full_system_is_simplicial_cochains(arcs):
    b = FULL.bind(arcs)
    X = arcs.base
    assert b.dim((), 0) == 3 and b.dim((), 1) == 3
    assert b.d((), 0) == X.boundary_matrix(1).T
    assert b.augmentation(()) == [1, 1, 1]
    b.validate()


def test_truncation_at_zero_keeps_locally_constant_cochains(arcs):
    b = TruncatedSystem(0).bind(arcs)
    # row q=0 is ker d, the constants on each (connected) support
    for key in b.keys():
        assert b.dim(key, 0) == 1
    assert b.top() == 0
    b.validate()


def test_acyclicity_report(arcs):
    assert all(not bad for bad in FULL.bind(arcs).acyclicity_report().values())
    single = fixtures.covering("c3_single")
    assert list(FULL.bind(single).acyclicity_report().values()) == [[1]]
    two = fixtures.covering("c4_two_arcs")
    rep = FULL.bind(two).acyclicity_report()
    (edge,) = two.nerve.simplices(1)
    assert rep[edge] == [0]


def test_support_keys(arcs):
    assert support_key(arcs, ()) == "X"
    assert support_key(arcs, (0, 2)) == "u0,u2"
    assert support_from_key(arcs, "u2,u0") == (0, 2)
    with pytest.raises(SystemError):
        support_from_key(arcs, "u9")


@pytest.mark.parametrize("name", fixtures.names("systems"))
def test_shipped_systems_load_and_round_trip(name):
    _, E = fixtures.explicit_system(name)
    data = E.to_json()
    again = ExplicitSystem.from_json(data, E.covering)
    assert again.to_json() == data


def test_materialized_full_system_matches(arcs):
    E = ExplicitSystem.materialize(arcs, FULL)
    b, f = E.bind(arcs), FULL.bind(arcs)
    for key in b.keys():
        for q in range(b.top() + 1):
            assert b.d(key, q) == f.d(key, q)
            assert b.phi(key, q) == f.phi(key, q)


def test_rebased_system_is_still_valid(arcs):
    E = ExplicitSystem.materialize(arcs, FULL).rebased(seed=3)
    E.bind(arcs)


def _corrupt(name, edit):
    _, E = fixtures.explicit_system(name)
    data = copy.deepcopy(E.to_json())
    edit(data)
    return data, E.covering


def test_broken_differential_is_rejected():
    def edit(data):
        d = data["supports"]["X"]["differentials"][0]
        d[0][0] = str(int(d[0][0]) + 1)

    data, U = _corrupt("c3-extra-top", edit)
    with pytest.raises(SystemError):
        ExplicitSystem.from_json(data, U)


def test_broken_restriction_is_rejected():
    def edit(data):
        key = next(iter(data["restrictions"]))
        m = data["restrictions"][key][0]
        m[0][0] = str(int(m[0][0]) + 5)

    data, U = _corrupt("c3-rebased", edit)
    with pytest.raises(SystemError):
        ExplicitSystem.from_json(data, U)


def test_missing_support_is_rejected():
    def edit(data):
        del data["supports"]["u0,u1"]
        data["restrictions"] = {k: v for k, v in data["restrictions"].items() if "u0,u1" not in k}

    data, U = _corrupt("c3-extra-top", edit)
    with pytest.raises(SystemError):
        ExplicitSystem.from_json(data, U)


def test_element_named_like_the_whole_space_is_ambiguous(c3):
    U = Covering(c3, ["X"], [c3.all_simplices()])
    with pytest.raises(SystemError):
        ExplicitSystem.materialize(U, FULL).to_json()


def test_system_bound_to_a_different_covering(arcs):
    E = ExplicitSystem.materialize(arcs, FULL)
    with pytest.raises(SystemError):
        E.bind(Covering.single(arcs.base, "whole"))


def test_explicit_file_via_parse_system(tmp_path, arcs):
    path = tmp_path / "sys.json"
    path.write_text(json.dumps(ExplicitSystem.materialize(arcs, FULL).to_json()))
    A = parse_system(f"EXPLICIT:{path}", arcs)
    assert isinstance(A, ExplicitSystem)
