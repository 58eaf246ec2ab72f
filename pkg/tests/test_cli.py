"""Command-line interface: exit codes, JSON reports, determinism."""

import json
import subprocess
import sys

import pytest

from spectralpath.cli import main

PATH3_TEXT = "3\n0 1 0\n1 0 1\n0 1 0\n"


@pytest.fixture()
def path3_file(tmp_path):
    p = tmp_path / "path3.txt"
    p.write_text(PATH3_TEXT)
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_analyze_human_output(capsys, path3_file):
    code, out, err = run(capsys, "analyze", path3_file)
    assert code == 0
    assert "path order: 0 -> 1 -> 2" in out
    assert "multiplicity_free" in out
    assert "constant profile at (0, 2): 1" in out


def test_analyze_json_report(capsys, path3_file):
    code, out, _ = run(capsys, "analyze", path3_file, "--json")
    assert code == 0
    report = json.loads(out)
    assert report["result"]["order"] == 3
    assert report["result"]["path_order"] == [0, 1, 2]
    assert report["result"]["spectral_kind"] == "multiplicity_free"
    positions = {(i["s"], i["t"]) for i in report["result"]["constant_profile_positions"]}
    assert positions == {(0, 2), (2, 0)}


def test_analyze_with_requested_position(capsys, path3_file):
    code, out, _ = run(capsys, "analyze", path3_file, "--s", "0", "--t", "1", "--json")
    assert code == 0
    report = json.loads(out)
    prof = report["result"]["requested"]["profile"]
    assert prof["is_constant"] is False
    assert len(prof["values"]) == 3


def test_output_is_byte_stable(capsys, path3_file):
    _, first, _ = run(capsys, "analyze", path3_file, "--json")
    _, second, _ = run(capsys, "analyze", path3_file, "--json")
    assert first == second
    _, h1, _ = run(capsys, "scheme", "builtin:hypercube(3)", "info")
    _, h2, _ = run(capsys, "scheme", "builtin:hypercube(3)", "info")
    assert h1 == h2


def test_check_exit_codes(capsys, path3_file):
    code, out, _ = run(capsys, "check", path3_file, "--form", "path", "--s", "0", "--t", "2")
    assert code == 0
    assert "both sides hold" in out
    code, out, _ = run(capsys, "check", path3_file, "--form", "path", "--s", "0", "--t", "1")
    assert code == 1
    assert "both sides fail" in out
    code, _, _ = run(capsys, "check", path3_file, "--form", "distance", "--s", "0", "--t", "2")
    assert code == 0


def test_check_json_fields(capsys, path3_file):
    code, out, _ = run(
        capsys, "check", path3_file, "--form", "distance", "--s", "0", "--t", "2", "--json"
    )
    assert code == 0
    report = json.loads(out)
    res = report["result"]
    assert res["condition_i"] is True and res["condition_ii"] is True
    assert res["distance"] == 2
    assert res["profile"]["common_value"] == pytest.approx(1.0, abs=1e-10)


def test_malformed_inputs_exit_two(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("2\n1 2\n")
    code, _, err = run(capsys, "analyze", str(bad))
    assert code == 2
    assert "line 2" in err
    code, _, err = run(capsys, "analyze", str(tmp_path / "missing.txt"))
    assert code == 2
    code, _, err = run(capsys, "check", str(bad), "--form", "path", "--s", "0", "--t", "1")
    assert code == 2
    good = tmp_path / "good.txt"
    good.write_text(PATH3_TEXT)
    code, _, err = run(capsys, "analyze", str(good), "--zero-tol", "-1")
    assert code == 2


def test_out_of_range_position_exit_two(capsys, path3_file):
    code, _, err = run(capsys, "check", path3_file, "--form", "path", "--s", "0", "--t", "9")
    assert code == 2
    assert "error:" in err


def test_scheme_commands(capsys):
    code, out, _ = run(capsys, "scheme", "builtin:hypercube(3)", "info")
    assert code == 0
    assert "|X| = 8" in out
    code, out, _ = run(capsys, "scheme", "builtin:hypercube(3)", "p-poly")
    assert code == 0
    assert "generator 1" in out
    code, out, _ = run(capsys, "scheme", "builtin:hypercube(3)", "q-poly", "--json")
    assert code == 0
    report = json.loads(out)
    assert report["result"]["structures"][0]["ordering"] == [0, 1, 2, 3]


def test_scheme_endpoint_checks(capsys):
    code, out, _ = run(capsys, "scheme", "builtin:hypercube(3)", "p-check", "1", "3")
    assert code == 0
    assert "both sides hold" in out
    code, out, _ = run(capsys, "scheme", "builtin:hypercube(3)", "p-check", "1", "2")
    assert code == 1
    code, out, _ = run(capsys, "scheme", "builtin:hypercube(3)", "q-check", "1", "3")
    assert code == 0


def test_scheme_argument_validation(capsys):
    code, _, err = run(capsys, "scheme", "builtin:hypercube(3)", "p-check", "1")
    assert code == 2
    code, _, err = run(capsys, "scheme", "builtin:hypercube(3)", "info", "4")
    assert code == 2
    code, _, err = run(capsys, "scheme", "builtin:nosuch(3)", "info")
    assert code == 2
    code, _, err = run(capsys, "scheme", "builtin:hypercube(99)", "info")
    assert code == 2


def test_scheme_file_source(capsys, tmp_path):
    from spectralpath.schemes import builtin_scheme, write_scheme

    path = tmp_path / "k4.scheme"
    write_scheme(builtin_scheme("complete", 4), str(path))
    code, out, _ = run(capsys, "scheme", str(path), "info", "--json")
    assert code == 0
    report = json.loads(out)
    assert report["result"]["multiplicities"] == pytest.approx([1.0, 3.0], abs=1e-9)


def test_selftest_exit_codes(capsys):
    code, out, _ = run(capsys, "selftest", "--trials", "2", "--d-max", "3")
    assert code == 0
    assert "verdict: all suites passed" in out
    code, out, _ = run(capsys, "selftest", "--trials", "2", "--d-max", "3", "--force-fail")
    assert code == 3
    assert "forced_failure" in out


def test_selftest_json_structure(capsys):
    code, out, _ = run(capsys, "selftest", "--trials", "2", "--d-max", "3", "--json")
    assert code == 0
    report = json.loads(out)
    names = [suite["suite"] for suite in report["result"]]
    assert "path_equivalence" in names and "scheme" in names
    assert all(suite["passed"] for suite in report["result"])


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("SPECTRALPATH_SEED", "7")
    code, out, _ = run(capsys, "scheme", "builtin:complete(4)", "info", "--json")
    assert code == 0
    assert json.loads(out)["seed"] == 7
    monkeypatch.setenv("SPECTRALPATH_SEED", "abc")
    code, _, err = run(capsys, "scheme", "builtin:complete(4)", "info")
    assert code == 2
    assert "SPECTRALPATH_SEED" in err


def test_seed_flag_overrides_environment(capsys, monkeypatch):
    monkeypatch.setenv("SPECTRALPATH_SEED", "abc")  # ignored when --seed given
    code, out, _ = run(capsys, "scheme", "builtin:complete(4)", "info", "--seed", "3", "--json")
    assert code == 0
    assert json.loads(out)["seed"] == 3


def test_console_entry_point(path3_file):
    proc = subprocess.run(
        ["spectralpath", "analyze", path3_file],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "path order" in proc.stdout
