from __future__ import annotations

import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from wdtangent.cli import SWEEP_HEADER, main

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def fixture(name: str) -> str:
    return str(FIXTURES / name)


def run(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv: str) -> tuple[int, dict]:
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


# --- validate / cohomology ------------------------------------------------------


def test_validate_standard_point(capsys) -> None:
    code, doc = run_json(capsys, "validate", "--input", fixture("standard_point.json"))
    assert code == 0 and doc["valid"] and doc["smooth"] is True


@pytest.mark.parametrize("name", ["standard_point.json", "standard_point_N0.json", "gl2_order3_inertia.json"])
def test_point_fixtures_validate(capsys, name: str) -> None:
    code, doc = run_json(capsys, "validate", "--input", fixture(name))
    assert code == 0 and doc["violations"] == []


def test_cohomology_of_n_zero_fixture(capsys) -> None:
    code, doc = run_json(capsys, "cohomology", "--input", fixture("standard_point_N0.json"))
    assert code == 0
    assert (doc["h0"], doc["h1"], doc["h2"], doc["smooth"]) == (1, 2, 1, False)
    assert len(doc["pairing_matrix"]) == 1


def test_very_smooth_verb(capsys) -> None:
    code, doc = run_json(capsys, "very-smooth", "--input", fixture("standard_point.json"))
    assert code == 0 and doc["very_smooth"] and doc["M"] == 12 and not doc["eigen_obstructed"]


def test_invalid_point_exits_1(capsys) -> None:
    doc = {"group": "GL(2)", "p": 2, "Phi": {"matrix": [["1", "0"], ["0", "1"]]}, "N": ["1", "0", "0", "0"]}
    code, rep = run_json(capsys, "cohomology", "--input", json.dumps(doc))
    assert code == 1 and not rep["valid"]
    assert rep["violations"][0].startswith("frobenius_monodromy")


@pytest.mark.parametrize("argv", [
    ["validate"],
    ["validate", "--input", "/nonexistent/file.json"],
    ["validate", "--input", "{not json"],
    ["validate", "--input", '{"group": "GL(2)", "p": 2}'],
    ["smooth-point", "--group", "GL(3)", "--nilpotent", "2,2"],
    ["smooth-point", "--group", "Sp(4)"],
    ["pushforward", "--input", "-"],
    ["frobnicate"],
])
def test_malformed_input_exits_2(capsys, argv) -> None:
    code, _, _ = run(capsys, *argv)
    assert code == 2


# --- smooth-point / pushforward ---------------------------------------------------


def test_smooth_point_verb(capsys) -> None:
    code, doc = run_json(capsys, "smooth-point", "--group", "GL3", "--nilpotent", "2,1", "--p", "3")
    assert code == 0 and doc["report"]["h2"] == 0 and doc["field_d"] == 3
    code, doc = run_json(capsys, "smooth-point", "--group", "calG(2)", "--nilpotent", "2")
    assert code == 0 and doc["report"]["smooth"]


def test_smooth_point_from_document(capsys) -> None:
    code, doc = run_json(capsys, "smooth-point", "--input", fixture("standard_point_N0.json"))
    assert code == 0 and doc["report"]["very_smooth"]


def test_pushforward_verbs(capsys) -> None:
    code, doc = run_json(capsys, "pushforward", "--input", fixture("standard_point.json"), "--morphism", "det(2)")
    assert code == 0 and doc["point"]["Phi"]["matrix"] == [["1"]]
    code, doc = run_json(capsys, "pushforward", "--input", fixture("standard_point.json"),
                         "--morphism", "sl2_from_triple", "--group", "GL3", "--nilpotent", "2,1")
    assert code == 0 and doc["report"]["smooth"]


# --- fontaine / dims ------------------------------------------------------------------


def test_fontaine_verbs(capsys) -> None:
    code, doc = run_json(capsys, "fontaine", "roundtrip", "--input", fixture("gl2_order3_inertia.json"))
    assert code == 0 and doc["roundtrip"] and doc["fL"] == 2
    code, mod = run_json(capsys, "fontaine", "to-phimod", "--input", fixture("gl2_order3_inertia.json"))
    assert code == 0
    assert mod["module"] == json.loads(Path(fixture("gl2_order3_module.json")).read_text())
    code, pt = run_json(capsys, "fontaine", "to-wd", "--input", fixture("gl2_order3_module.json"))
    assert code == 0
    assert pt["point"] == json.loads(Path(fixture("gl2_order3_inertia.json")).read_text())


def test_fontaine_wrong_fl_exits_1(capsys) -> None:
    code, doc = run_json(capsys, "fontaine", "to-phimod", "--input", fixture("standard_point.json"), "--fL", "2")
    assert code == 1 and not doc["valid"]


def test_dims_verbs(capsys) -> None:
    code, doc = run_json(capsys, "dims", "local", "--input", fixture("local_gl2_regular.json"))
    assert code == 0 and doc == {"local_dim": 6, "hodge_dim": 1, "regular": True}
    code, doc = run_json(capsys, "dims", "global", "--input", fixture("ledger_calG2.json"))
    assert code == 0 and doc["krull_lower_bound"] == 1 and doc["odd"] is True
    code, _, _ = run(capsys, "dims", "global", "--input", '{"Sinf_size": 1}')
    assert code == 2


# --- sweep ------------------------------------------------------------------------


@pytest.fixture(scope="module")
def gl3_sweep() -> str:
    proc = subprocess.run(
        [sys.executable, "-m", "wdtangent", "sweep", "--group", "GL3", "--partitions", "all",
         "--count", "50", "--seed", "7", "--jobs", "3"],
        capture_output=True, text=True, check=False)
    assert proc.returncode == 0, proc.stderr
    return proc.stdout


def test_sweep_gl3(gl3_sweep: str) -> None:
    rows = list(csv.reader(io.StringIO(gl3_sweep)))
    assert rows[0] == SWEEP_HEADER
    body = rows[1:]
    assert len(body) == 3 * 51
    assert {r[0] for r in body} == {"3", "2,1", "1,1,1"}
    factory = [r for r in body if r[1] == "smoothfactory"]
    assert len(factory) == 3 and all(r[7] == "true" and r[5] == "0" for r in factory)
    for r in body:
        if r[8] == "true":
            assert r[7] == "true"
        assert (r[5] == "0") == (r[7] == "true") and r[5] == r[6]


def test_sweep_is_byte_stable(capsys) -> None:
    argv = ["sweep", "--group", "GL(2)", "--count", "6", "--seed", "3"]
    first = run(capsys, *argv)[1]
    assert run(capsys, *argv, "--jobs", "2")[1] == first
    assert first.splitlines()[0] == ",".join(SWEEP_HEADER)


def test_sweep_output_file(capsys, tmp_path) -> None:
    out = tmp_path / "sweep.csv"
    code, doc = run_json(capsys, "sweep", "--group", "GL(2)", "--count", "2", "--output", str(out))
    assert code == 0 and doc["rows"] == 6 and doc["smoothfactory_all_smooth"]
    assert out.read_text().startswith("orbit,")


def test_module_entry_point_version() -> None:
    proc = subprocess.run([sys.executable, "-m", "wdtangent", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("wdtangent")
