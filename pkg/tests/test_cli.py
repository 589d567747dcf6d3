import json
import os
import shutil
import subprocess
import sys

import pytest

from leraykit import fixtures
from leraykit.cli import EXIT_INPUT, EXIT_OK, EXIT_PRECONDITION, EXIT_PROPERTY, main

C3 = fixtures.path("complexes", "c3")
C4 = fixtures.path("complexes", "c4")
ARCS = fixtures.path("coverings", "c3_arcs")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def test_nerve_report(capsys):
    code, rep, _ = run(capsys, "nerve", C3, ARCS)
    assert code == EXIT_OK
    assert rep["dim"] == 1
    assert rep["vertices"] == ["u0", "u1", "u2"]
    assert ["u0", "u1"] in rep["simplices"] and len(rep["simplices"]) == 6
    assert rep["supports"]["u0,u1"] == [["1"]]


def test_leray_on_arcs(capsys):
    code, rep, _ = run(capsys, "leray", C3, ARCS)
    assert code == EXIT_OK
    assert rep["leray"]["1"]["shape"] == [1, 1] and rep["leray"]["1"]["entries"][0][0] != "0"
    assert rep["acyclic"] is True
    assert rep["factorization"]["holds"] is True


def test_leray_degree_filter_and_truncation(capsys):
    code, rep, _ = run(capsys, "leray", C3, ARCS, "--system", "TRUNC:1", "--degree", "1")
    assert code == EXIT_OK and list(rep["leray"]) == ["1"]


def test_leray_single_element_covering(capsys):
    code, rep, _ = run(capsys, "leray", C3, fixtures.path("coverings", "c3_single"))
    assert code == EXIT_OK
    assert rep["acyclic"] is False and rep["acyclicity_failures"] == {"whole": [1]}
    assert "skipped" in rep["factorization"]


def test_leray_two_arcs_of_c4(capsys):
    code, rep, _ = run(capsys, "leray", C4, fixtures.path("coverings", "c4_two_arcs"))
    assert code == EXIT_OK
    assert rep["acyclic"] is False and rep["acyclicity_failures"] == {"left,right": [0]}
    assert "0" in rep["leray"] and "1" in rep["leray"]


def test_homology_leray(capsys):
    code, rep, _ = run(capsys, "homology-leray", C3, ARCS)
    assert code == EXIT_OK and rep["factorization"]["holds"]


def test_explicit_system_with_vanishing(capsys):
    path = fixtures.system_path("c3-extra-top")
    code, rep, _ = run(capsys, "leray", C3, ARCS, "--system", f"EXPLICIT:{path}")
    assert code == EXIT_OK
    assert rep["vanishing"] == {"holds": True, "verified_degrees": [2]}


def test_norms(capsys):
    code, rep, _ = run(capsys, "norm", C3, "--degree", "1", "--class", "1", "--kind", "l1")
    assert code == EXIT_OK and rep["value"] == "3"
    code, rep, _ = run(capsys, "norm", C3, "--degree", "1", "--class", "[1]", "--kind", "linf")
    assert rep["value"] == "1/3"
    code, rep, _ = run(capsys, "norm", C3, "--degree", "1", "--class", "1", "--kind", "duality")
    assert code == EXIT_OK and rep["holds"] and rep["value"] == "3" and rep["max_pairing"] == "3"


def test_out_file(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, rep, _ = run(capsys, "norm", C3, "--degree", "1", "--class", "2", "--out", str(out))
    assert code == EXIT_OK and rep is None
    assert json.loads(out.read_text())["value"] == "6"


def test_exit_codes(capsys, data_dir, tmp_path):
    assert run(capsys, "nerve", C3, str(tmp_path / "missing.json"))[0] == EXIT_INPUT
    bad = tmp_path / "bad.json"
    bad.write_text("[")
    assert run(capsys, "nerve", C3, str(bad))[0] == EXIT_INPUT
    not_fine = os.path.join(data_dir, "simplex2_edges.json")
    assert run(capsys, "nerve", os.path.join(data_dir, "simplex2.json"), not_fine)[0] == EXIT_PRECONDITION
    assert run(capsys, "norm", C3, "--degree", "1", "--class", "1,0")[0] == EXIT_PRECONDITION
    assert run(capsys, "norm", C3, "--degree", "1", "--class", "x")[0] == EXIT_INPUT
    assert run(capsys, "leray", C3, ARCS, "--system", "BOGUS")[0] == EXIT_INPUT


def test_corrupted_system_is_a_property_failure(capsys, tmp_path):
    data = json.loads(open(fixtures.system_path("c3-exact-pair")).read())
    data["covering"] = ARCS
    data["supports"]["X"]["differentials"][1][0][0] = "7"
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(data))
    code, _, err = run(capsys, "leray", C3, ARCS, "--system", f"EXPLICIT:{path}")
    assert code == EXIT_PRECONDITION
    assert "support X" in err


def test_verify_single_suite(capsys, tmp_path):
    code, rep, _ = run(capsys, "verify", "--suite", "realizations", "--dump-dir", str(tmp_path))
    assert code == EXIT_OK and rep["ok"] and list(rep["suites"]) == ["realizations"]


def test_verify_is_reproducible(capsys):
    a = run(capsys, "verify", "--seed", "3", "--suite", "double-refinement", "--suite", "functoriality")
    b = run(capsys, "verify", "--seed", "3", "--suite", "double-refinement", "--suite", "functoriality")
    assert a == b


def test_verify_dumps_counterexample_for_broken_fixtures(capsys, tmp_path):
    root = tmp_path / "fx"
    shutil.copytree(fixtures.HERE, root, ignore=shutil.ignore_patterns("*.py", "__pycache__"))
    path = root / "systems" / "c3-exact-pair.json"
    data = json.loads(path.read_text())
    data["supports"]["X"]["differentials"][1][0][0] = "7"
    path.write_text(json.dumps(data))
    dump = tmp_path / "dump"
    dump.mkdir()
    code, rep, err = run(capsys, "verify", "--fixtures", str(root), "--suite", "fixture-invariants",
                         "--dump-dir", str(dump))
    assert code == EXIT_PROPERTY and not rep["ok"]
    cx = json.loads((dump / "counterexample-fixture-invariants.json").read_text())
    assert "systems/c3-exact-pair" in json.dumps(cx)
    assert "counterexample" in err


def test_verify_missing_fixture_dir(capsys, tmp_path):
    assert run(capsys, "verify", "--fixtures", str(tmp_path / "nope"))[0] == EXIT_INPUT


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "leraykit", "norm", C3, "--degree", "1", "--class", "1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["value"] == "3"


def test_help_lists_commands(capsys):
    with pytest.raises(SystemExit) as e:
        main(["--help"])
    assert e.value.code == 0
    out = capsys.readouterr().out
    for cmd in ("nerve", "leray", "homology-leray", "norm", "verify"):
        assert cmd in out
