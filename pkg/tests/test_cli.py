"""Command-line behaviour: outputs, exit codes and determinism."""

import json
import subprocess
import sys

import pytest

from helpers import gauss_family, in_general_position, zero_component_family

from fuchsred import cli, io


def run(argv, capsys):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def sampled(tmp_path, capsys):
    path = tmp_path / "x.json"
    code, _, _ = run(["sample", "--m", 2, "--n-orbits", 4, "--seed", 7, "--out", path], capsys)
    assert code == cli.EXIT_OK
    return path


def write_tuple(tmp_path, tup, name):
    path = tmp_path / name
    path.write_text(io.dumps(io.dump_tuple(tup)), encoding="utf-8")
    return path


def test_sample_passes_check(sampled, capsys):
    code, out, _ = run(["check", sampled], capsys)
    assert code == cli.EXIT_OK
    report = json.loads(out)
    assert report["ok"] and report["momentum_zero"] and report["kind"] == "tuple"


def test_sample_smallest_case(tmp_path, capsys):
    path = tmp_path / "n3.json"
    assert run(["sample", "--m", 3, "--n-orbits", 3, "--seed", 1, "--out", path], capsys)[0] == 0
    doc = json.loads(path.read_text())
    assert len(doc["matrices"]) == 3
    assert run(["check", path], capsys)[0] == 0


def test_sample_is_deterministic(tmp_path, capsys):
    outs = []
    for name in ("a.json", "b.json"):
        path = tmp_path / name
        run(["sample", "--m", 3, "--n-orbits", 5, "--seed", 11, "--nilpotent", "1", "--out", path],
            capsys)
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_sample_rejects_repeated_eigenvalue(tmp_path, capsys):
    specs = tmp_path / "specs.json"
    specs.write_text(json.dumps([
        {"eigs": [[1, 1], [1, 1]]}, {"eigs": [[-1, 1], [2, 1]]}, {"eigs": [[0, 1], [-3, 1]]},
    ]))
    code, _, err = run(["sample", "--specs", specs], capsys)
    assert code == cli.EXIT_SPEC
    assert "one-dimensional-eigenspace restriction" in err


def test_sample_rejects_empty_level(tmp_path, capsys):
    specs = tmp_path / "specs.json"
    specs.write_text(json.dumps([{"eigs": [[1, 1], [2, 1]]}] * 3))
    assert run(["sample", "--specs", specs], capsys)[0] == cli.EXIT_SPEC


def test_roundtrip_exact_match(sampled, capsys):
    code, out, _ = run(["roundtrip", sampled], capsys)
    report = json.loads(out)
    assert code == cli.EXIT_OK
    assert report["lift_reduce_equals_section"] == "exact match"
    assert report["reduce_lift_equals_point"] == "exact match"


def test_verify_exact(sampled, capsys):
    code, out, _ = run(["verify", sampled, "--trials", 25], capsys)
    report = json.loads(out)
    assert code == cli.EXIT_OK
    assert report["trials"] == 25 and report["failures"] == 0
    for key in ("max_residual_a", "max_residual_b", "max_residual_c"):
        assert report[key] == "exact-zero"


def test_reduce_lift_files_reread_losslessly(sampled, tmp_path, capsys):
    red = tmp_path / "p.json"
    back = tmp_path / "y.json"
    assert run(["reduce", sampled, "--out", red], capsys)[0] == 0
    assert run(["check", red], capsys)[0] == 0
    assert run(["lift", red, "--out", back], capsys)[0] == 0
    again = tmp_path / "p2.json"
    assert run(["reduce", back, "--out", again], capsys)[0] == 0
    assert red.read_bytes() == again.read_bytes()
    p = io.load_reduced(io.read_json(red))
    assert io.dumps(io.dump_reduced(p)) == red.read_text()


def test_zero_eigenvector_component_exit(tmp_path, capsys):
    path = write_tuple(tmp_path, in_general_position(zero_component_family(0), 3), "zec.json")
    code, out, err = run(["reduce", path], capsys)
    assert code == cli.EXIT_DOMAIN
    assert "[eigenvector-components]" in err and out == ""
    assert run(["verify", path], capsys)[0] == cli.EXIT_DOMAIN


def test_gauss_obstruction_exit(tmp_path, capsys):
    path = write_tuple(tmp_path, in_general_position(gauss_family(0), 4), "gauss.json")
    code, _, err = run(["roundtrip", path], capsys)
    assert code == cli.EXIT_DOMAIN
    assert "[triangular-frames]" in err


def test_io_errors(tmp_path, capsys):
    assert run(["reduce", tmp_path / "missing.json"], capsys)[0] == cli.EXIT_IO
    bad = tmp_path / "bad.json"
    bad.write_text("{oops")
    assert run(["check", bad], capsys)[0] == cli.EXIT_IO


def test_mode_mismatch_is_io_error(sampled, capsys):
    assert run(["reduce", sampled, "--mode", "float"], capsys)[0] == cli.EXIT_IO


def test_off_level_input_rejected(sampled, tmp_path, capsys):
    doc = json.loads(sampled.read_text())
    doc["matrices"][0][0][0] = ["12345", "1", "0", "1"]
    path = tmp_path / "off.json"
    path.write_text(json.dumps(doc))
    assert run(["reduce", path], capsys)[0] == cli.EXIT_IO
    assert run(["check", path], capsys)[0] == cli.EXIT_VERIFY


def test_float_mode_pipeline(tmp_path, capsys):
    path = tmp_path / "f.json"
    assert run(["sample", "--mode", "float", "--m", 3, "--n-orbits", 4, "--seed", 2,
                "--out", path], capsys)[0] == 0
    code, out, _ = run(["roundtrip", path], capsys)
    assert code == 0 and json.loads(out)["ok"]
    code, out, _ = run(["verify", path, "--trials", 3], capsys)
    assert code == 0 and json.loads(out)["mode"] == "float"


def test_discrete_file(sampled, tmp_path, capsys):
    doc = json.loads(sampled.read_text())
    spec0 = doc["specs"][0]["eigs"]
    disc = tmp_path / "d.json"
    disc.write_text(json.dumps({"anchors": [0, 1, 2], "lambda_N": spec0[1][0]}))
    code, out, _ = run(["roundtrip", sampled, "--discrete", disc], capsys)
    assert code == 0 and json.loads(out)["ok"]


def test_trials_must_be_positive(sampled):
    with pytest.raises(SystemExit):
        cli.main(["verify", str(sampled), "--trials", "0"])


def test_console_entry_point(tmp_path):
    out = subprocess.run(
        [sys.executable, "-m", "fuchsred.cli", "sample", "--m", "2", "--n-orbits", "3", "--seed", "7"],
        capture_output=True, text=True,
    )
    assert out.returncode == 0
    assert json.loads(out.stdout)["m"] == 2
