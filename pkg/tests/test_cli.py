"""Command-line frontend: exit codes, formats, seeding, determinism."""
import json
import os
import subprocess
import sys

import pytest

from shapeinv.cli import CliConfig, main
from shapeinv.dsl import GENERATOR_NAMES


def run_cli(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as exc:  # argparse errors surface this way
        code = exc.code if isinstance(exc.code, int) else 2
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- check --------------------------------------------------------------------

@pytest.mark.parametrize("expr", ["[Lp, Lm] - 2*L3", "[L3, Rp]"])
def test_check_identities_pass(expr, capsys):
    code, out, _ = run_cli(["check", expr, "--points", "8"], capsys)
    assert code == 0
    assert "[PASS]" in out
    assert "checks: 1 passed / 0 failed" in out


def test_check_failure_exits_one(capsys):
    code, out, _ = run_cli(["check", "Lp - Rp", "--points", "8"], capsys)
    assert code == 1
    assert "[FAIL]" in out
    assert "checks: 0 passed / 1 failed" in out


def test_check_parse_error_exits_two(capsys):
    code, _, err = run_cli(["check", "Foo(1)"], capsys)
    assert code == 2
    assert "unknown generator" in err
    assert "position" in err


def test_check_json_document(capsys):
    code, out, _ = run_cli(["check", "[Lp, Lm] - 2*L3", "--points", "8",
                            "--format", "json"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["expression"] == "[Lp, Lm] - 2*L3"
    assert doc["lattice"] is None
    assert doc["checks"][0]["pass"] is True
    assert doc["summary"] == "checks: 1 passed / 0 failed"


def test_check_threads_frequency(capsys):
    code, _, _ = run_cli(["check", "[A1, A1d] - 1", "--omega", "1/2",
                          "--points", "8"], capsys)
    assert code == 0


def test_check_rejects_nonpositive_frequency(capsys):
    code, _, err = run_cli(["check", "Hm", "--omega", "-1"], capsys)
    assert code == 2
    assert "frequency must be positive" in err


# -- eigen2d ------------------------------------------------------------------

def test_eigen2d_text_report(capsys):
    code, out, _ = run_cli(["eigen2d", "--twol", "2", "--q", "0", "--m", "0",
                            "--points", "8"], capsys)
    assert code == 0
    assert "eigenvalue: 2" in out
    assert "checks: 4 passed / 0 failed" in out


def test_eigen2d_half_integer_level_json(capsys):
    code, out, _ = run_cli(["eigen2d", "--twol", "3", "--q", "1", "--m", "2",
                            "--points", "8", "--format", "json"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["eigenvalue"] == "15/4"
    assert doc["state"] == {"twol": 3, "q": 1, "m": 2}
    assert all(c["pass"] for c in doc["checks"])


@pytest.mark.parametrize("argv,fragment", [
    (["eigen2d", "--twol", "2", "--q", "3", "--m", "0"], "|q| <= 2"),
    (["eigen2d", "--twol", "2", "--q", "0", "--m", "1"], "parity"),
    (["eigen2d", "--twol", "-1", "--q", "0", "--m", "0"], "|q| <= -1"),
])
def test_eigen2d_invalid_state_names_the_invariant(argv, fragment, capsys):
    code, _, err = run_cli(argv, capsys)
    assert code == 2
    assert fragment in err


# -- shape2d ------------------------------------------------------------------

def test_shape2d_level_checks(capsys):
    code, out, _ = run_cli(["shape2d", "--twol", "2", "--points", "6"], capsys)
    assert code == 0
    assert "level: 2l=2" in out
    assert "0 failed" in out


def test_shape2d_state_adds_reconstruction(capsys):
    code, out, _ = run_cli(["shape2d", "--twol", "2", "--q", "2", "--m", "0",
                            "--points", "6"], capsys)
    assert code == 0
    assert "(state q=2 m=0)" in out
    assert "annihilates the state" in out


def test_shape2d_flag_pairing(capsys):
    code, _, err = run_cli(["shape2d", "--twol", "2", "--q", "1"], capsys)
    assert code == 2
    assert "--q and --m must be given together" in err


def test_shape2d_negative_level(capsys):
    code, _, err = run_cli(["shape2d", "--twol", "-2"], capsys)
    assert code == 2
    assert "nonnegative" in err


# -- osc3d --------------------------------------------------------------------

def test_osc3d_state_report(capsys):
    code, out, _ = run_cli(["osc3d", "--n", "2", "--m", "0",
                            "--points", "8"], capsys)
    assert code == 0
    assert "energy: 4" in out
    assert "pair scalar: 2" in out
    assert "0 failed" in out


def test_osc3d_requires_state_flags(capsys):
    code, _, err = run_cli(["osc3d", "--n", "2"], capsys)
    assert code == 2
    assert "--n and --m are required" in err


def test_osc3d_invalid_state(capsys):
    code, _, err = run_cli(["osc3d", "--n", "2", "--m", "1"], capsys)
    assert code == 2
    assert "parity" in err or "opposite" in err or "odd" in err


def test_osc3d_sector_suite(capsys):
    code, out, _ = run_cli(["osc3d", "--suite", "--points", "4",
                            "--format", "json"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["suite"] == "shapeinv[3d]"
    assert all(e["pass"] for e in doc["checks"])
    assert len(doc["checks"]) == 19


# -- dump ---------------------------------------------------------------------

_EXPECTED_MATCH = {}
for _n in GENERATOR_NAMES:
    if _n in ("A1", "A1d"):
        _EXPECTED_MATCH[_n] = False
    elif _n in ("a3", "a3d", "a4", "a4d"):
        _EXPECTED_MATCH[_n] = None
    else:
        _EXPECTED_MATCH[_n] = True


@pytest.mark.parametrize("name", GENERATOR_NAMES)
def test_dump_every_name(name, capsys):
    code, out, _ = run_cli(["dump", name, "--format", "json",
                            "--points", "40"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["name"] == name
    assert doc["match"] is _EXPECTED_MATCH[name]
    assert doc["derived"]["form"]
    if _EXPECTED_MATCH[name] is None:
        assert doc["printed"] is None
    else:
        assert doc["printed"]["form"]
    assert doc["notes"]


def test_dump_reduced_generator_carries_full_form(capsys):
    code, out, _ = run_cli(["dump", "Lm", "--format", "json"], capsys)
    assert code == 0
    assert json.loads(out)["full_form"]


def test_dump_text_mode_shows_mismatch(capsys):
    code, out, _ = run_cli(["dump", "A1d"], capsys)
    assert code == 0
    assert "match: no" in out
    assert "derived:" in out and "printed:" in out


def test_dump_unknown_name_rejected(capsys):
    code, _, err = run_cli(["dump", "Foo"], capsys)
    assert code == 2
    assert "invalid choice" in err


# -- plumbing -----------------------------------------------------------------

def test_out_writes_file_instead_of_stdout(tmp_path, capsys):
    path = tmp_path / "report.json"
    code, out, _ = run_cli(["check", "Lp - Rp", "--points", "8",
                            "--format", "json", "--out", str(path)], capsys)
    assert code == 1
    assert out == ""
    doc = json.loads(path.read_text())
    assert doc["checks"][0]["pass"] is False


def test_seed_env_matches_explicit_flag(monkeypatch, capsys):
    argv = ["check", "Lp - Rp", "--points", "8", "--format", "json"]
    monkeypatch.setenv("SHAPEINV_SEED", "5")
    _, via_env, _ = run_cli(argv, capsys)
    monkeypatch.delenv("SHAPEINV_SEED")
    _, via_flag, _ = run_cli(argv + ["--seed", "5"], capsys)
    assert via_env == via_flag
    # an explicit flag wins over the environment
    monkeypatch.setenv("SHAPEINV_SEED", "7")
    _, via_both, _ = run_cli(argv + ["--seed", "5"], capsys)
    assert via_both == via_flag


def test_seed_env_must_be_integer(monkeypatch, capsys):
    monkeypatch.setenv("SHAPEINV_SEED", "abc")
    code, _, err = run_cli(["check", "Lp"], capsys)
    assert code == 2
    assert "SHAPEINV_SEED must be an integer" in err


def test_config_helpers():
    cfg = CliConfig(command="check", seed=4, points=9, tol=1e-6)
    assert cfg.plan(32).count == 9
    assert cfg.tolerance(1e-10) == 1e-6
    bare = CliConfig(command="check")
    assert bare.plan(32).count == 32
    assert bare.tolerance(1e-10) == 1e-10


def test_reports_do_not_depend_on_hash_randomization():
    env = {**os.environ, "PYTHONHASHSEED": "1"}
    argv = [sys.executable, "-m", "shapeinv.cli", "check", "Lp - Rp",
            "--points", "8", "--format", "json"]
    first = subprocess.run(argv, capture_output=True, env=env)
    env["PYTHONHASHSEED"] = "99"
    second = subprocess.run(argv, capture_output=True, env=env)
    assert first.returncode == second.returncode == 1
    assert first.stdout == second.stdout
