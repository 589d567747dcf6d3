import json
import os

import pytest

from leraykit import fixtures
from leraykit.engineered import BUILDERS, write_all
from leraykit.io import (
    InputError,
    complex_from_json,
    covering_from_json,
    covering_to_json,
    dumps,
    load_complex,
    load_covering,
)


def test_complex_reader_errors(tmp_path):
    with pytest.raises(InputError):
        complex_from_json({"simplices": []})
    with pytest.raises(InputError):
        complex_from_json({"vertices": ["a"], "simplices": [["a", "b"]]})
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(InputError):
        load_complex(bad)
    with pytest.raises(InputError):
        load_complex(tmp_path / "missing.json")


def test_covering_reader_errors(c3):
    with pytest.raises(InputError):
        covering_from_json({"elements": {}})
    with pytest.raises(InputError):
        covering_from_json({"elements": {"a": [["0", "9"]]}}, base=c3)
    with pytest.raises(InputError):
        # 0 and 1 are vertices but the triangle is not a simplex of C3
        covering_from_json({"elements": {"a": [["0", "1", "2"]]}}, base=c3)


def test_covering_base_mismatch(c3):
    data = {"base": fixtures.complex("c4").to_json(), "elements": {"a": [["0", "1"]]}}
    with pytest.raises(InputError):
        covering_from_json(data, base=c3)


def test_covering_round_trip(arcs):
    again = covering_from_json(covering_to_json(arcs))
    assert again.names == arcs.names
    assert [e.simplex_set for e in again.elements] == [e.simplex_set for e in arcs.elements]



def test_dumps_is_deterministic():
    assert dumps({"b": 1, "a": [1, 2]}) == dumps({"b": 1, "a": [1, 2]})
    assert dumps({"b": 1, "a": 2}).index('"b"') < dumps({"b": 1, "a": 2}).index('"a"')


@pytest.mark.parametrize("kind", ["complexes", "coverings", "systems"])
def test_every_shipped_fixture_loads(kind):
    for name in fixtures.names(kind):
        if kind == "complexes":
            fixtures.complex(name)
        elif kind == "coverings":
            fixtures.covering(name)
        else:
            fixtures.explicit_system(name)


def test_shipped_systems_match_their_builders(tmp_path):
    write_all(str(tmp_path))
    assert sorted(p.name[:-5] for p in tmp_path.iterdir()) == sorted(BUILDERS)
    for name in BUILDERS:
        fresh = json.loads((tmp_path / f"{name}.json").read_text())
        with open(fixtures.system_path(name)) as fh:
            assert json.load(fh) == fresh
