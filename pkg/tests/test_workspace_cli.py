import json
import subprocess
import sys

import pytest

from dgtrace.cli import main
from dgtrace.errors import WorkspaceError
from dgtrace.workspace import parse_workspace, serialize_workspace


A2_FULL = {
    "format": 1,
    "algebras": {
        "A2": {
            "basis": [{"label": "e1", "degree": 0},
                      {"label": "e2", "degree": 0},
                      {"label": "a", "degree": 0}],
            "mult": [[0, 0, 0, "1"], [1, 1, 1, "1"],
                     [0, 2, 2, "1"], [2, 1, 2, "1"]],
            "unit": ["1", "1", "0"],
        }
    },
    "modules": {
        "P2": {
            "algebra": "A2",
            "generators": [{"label": "g", "shift": 0}],
            "idempotent": [[0, 0, ["0", "1", "0"]]],
        },
        "F": {
            "algebra": "A2",
            "generators": [{"label": "u", "shift": 0}],
        },
    },
    "maps": {
        "triple": {"source": "F", "target": "F", "degree": 0,
                   "entries": [[0, 0, ["3", "0", "0"]]]},
    },
    "resolutions": {"rA2": "A2"},
}


def test_catalog_stub_round_trip():
    ws = parse_workspace(json.dumps({"format": 1, "use_catalog": ["A2"]}))
    assert "A2" in ws.algebras
    assert ws.algebras["A2"].dim == 3
    text = serialize_workspace(ws)
    ws2 = parse_workspace(text)
    assert ws2.algebras["A2"].same_structure(ws.algebras["A2"])


def test_full_description_round_trip():
    text = json.dumps(A2_FULL)
    ws = parse_workspace(text)
    assert ws.algebras["A2"].dim == 3
    assert ws.modules["P2"].idempotent is not None
    again = parse_workspace(serialize_workspace(ws))
    assert again.algebras["A2"].same_structure(ws.algebras["A2"])
    assert again.modules["P2"] == ws.modules["P2"]
    assert again.maps["triple"] == ws.maps["triple"]


def test_malformed_mult_triple_reports_location():
    bad = {"format": 1,
           "algebras": {"X": {"basis": [{"label": "1", "degree": 0}],
                              "mult": [[0, 0, 5, "1"]],
                              "unit": ["1"]}}}
    with pytest.raises(WorkspaceError) as err:
        parse_workspace(json.dumps(bad))
    assert "algebras.X" in str(err.value)
    assert "out of range" in str(err.value)


def test_unresolved_reference():
    bad = {"format": 1,
           "modules": {"m": {"algebra": "nope",
                             "generators": [{"label": "g", "shift": 0}]}}}
    with pytest.raises(WorkspaceError) as err:
        parse_workspace(json.dumps(bad))
    assert "unresolved" in str(err.value)


def test_invalid_algebra_surfaces_validator():
    bad = {"format": 1,
           "algebras": {"X": {"basis": [{"label": "u", "degree": 0}],
                              "mult": [[0, 0, 0, "1"]],
                              "unit": ["0"]}}}
    with pytest.raises(WorkspaceError) as err:
        parse_workspace(json.dumps(bad))
    assert "invalid" in str(err.value)


def test_syntax_error():
    with pytest.raises(WorkspaceError) as err:
        parse_workspace("{not json")
    assert "syntax" in str(err.value)


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr().out
    return code, out


def test_cli_hh0(capsys):
    code, out = run_cli(["hh0", "A2"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["dim"] == 2


def test_cli_pair(capsys):
    code, out = run_cli(["pair", "A2", "[e1]", "[e2]"], capsys)
    assert code == 0
    assert json.loads(out)["value"] == "1"


def test_cli_validate(capsys):
    code, out = run_cli(["validate", "A2", "M2"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["results"]["A2"]["algebra"] == "valid"
    assert "acyclic" in data["results"]["A2"]["resolution"]


def test_cli_class_with_workspace(tmp_path, capsys):
    path = tmp_path / "ws.json"
    path.write_text(json.dumps(A2_FULL))
    code, out = run_cli(["--workspace", str(path), "class", "F", "triple"],
                        capsys)
    assert code == 0
    data = json.loads(out)
    assert data["coords"] == ["3", "0"]


def test_cli_cohomology(tmp_path, capsys):
    path = tmp_path / "ws.json"
    path.write_text(json.dumps(A2_FULL))
    code, out = run_cli(["--workspace", str(path), "cohomology", "P2"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["cohomology_dims"] == {"0": 2}


def test_cli_verify_rr_small(capsys):
    code, out = run_cli(["--random", "6", "--seed", "7",
                         "verify-rr", "--algebra", "A2"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["per_algebra"]["A2"]["passed"] == 6


def test_cli_unknown_input_exit_code(capsys, tmp_path):
    path = tmp_path / "nope.json"
    code = main(["--workspace", str(path), "hh0", "A2"])
    assert code == 2


def test_cli_bad_reference_exit_code(capsys):
    code = main(["hh0", "doesnotexist"])
    assert code == 2


def test_cli_component_error_embedded(tmp_path, capsys):
    # an endomorphism incompatible with the module's idempotent surfaces as
    # an error report with nonzero exit, not a bare traceback
    ws = dict(A2_FULL)
    ws["maps"] = {"bad": {"source": "P2", "target": "P2", "degree": 0,
                          "entries": [[0, 0, ["1", "0", "0"]]]}}
    path = tmp_path / "ws.json"
    path.write_text(json.dumps(ws))
    code = main(["--workspace", str(path), "class", "P2", "bad"])
    out = capsys.readouterr().out
    assert code == 2
    data = json.loads(out)
    assert data["ok"] is False and "error" in data


def test_cli_reports_deterministic(capsys):
    code1, out1 = run_cli(["--random", "5", "--seed", "42",
                           "verify-rr", "--algebra", "Kronecker"], capsys)
    code2, out2 = run_cli(["--random", "5", "--seed", "42",
                           "verify-rr", "--algebra", "Kronecker"], capsys)
    assert code1 == code2 == 0
    assert out1 == out2


def test_cli_jobs_matches_serial(capsys):
    _, serial = run_cli(["--random", "6", "--seed", "9",
                         "verify-rr", "--algebra", "A2"], capsys)
    _, parallel = run_cli(["--random", "6", "--seed", "9", "--jobs", "3",
                           "verify-rr", "--algebra", "A2"], capsys)
    assert serial == parallel


def test_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "dgtrace.cli", "--random", "3",
         "verify-rr", "--algebra", "k"],
        capture_output=True, text=True, timeout=300)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["ok"] is True
