"""Registered battery: registry hygiene, sector filters, reproducibility."""
import json

import pytest

from shapeinv.suite import (
    FAULT_PREFIX, SECTORS, SuiteConfig, render_text, report_json, run_suite,
    _registry,
)

SMALL = SuiteConfig(seed=3, points=4, twol_max=2, n_max=1)


@pytest.fixture(scope="module")
def small_report():
    return run_suite(SMALL)


def test_registry_hygiene():
    entries = _registry()
    names = [name for name, _, _, _ in entries]
    assert len(names) == len(set(names))
    assert all(sector in SECTORS for _, _, sector, _ in entries)
    faults = [(name, sector) for name, _, sector, _ in entries
              if name.startswith(FAULT_PREFIX)]
    assert len(faults) >= 6
    # every sector carries at least one negative control
    assert {sector for _, sector in faults} == set(SECTORS)


def test_reduced_run_all_pass(small_report):
    checks = small_report["checks"]
    assert len(checks) == len(_registry())
    bad = [e["name"] for e in checks if not e["pass"]]
    assert not bad, bad
    assert small_report["summary"] == f"checks: {len(checks)} passed / 0 failed"


def test_report_schema(small_report):
    assert set(small_report) == {"suite", "seed", "tolerances", "checks",
                                 "summary"}
    assert small_report["suite"] == "shapeinv"
    assert small_report["seed"] == 3
    assert set(small_report["tolerances"]) == {"operator", "eigen", "constant"}
    for entry in small_report["checks"]:
        assert set(entry) == {"name", "paper_ref", "pass",
                              "relative_residual", "notes"}
        assert isinstance(entry["relative_residual"], float)


def test_report_json_round_trips(small_report):
    text = report_json(small_report)
    assert text.endswith("\n")
    assert json.loads(text) == small_report


def test_render_text_layout(small_report):
    text = render_text(small_report)
    lines = text.splitlines()
    assert lines[0] == "suite: shapeinv (seed 3)"
    assert lines[-1] == small_report["summary"]
    assert all(line.startswith("[PASS]") or line.startswith("[FAIL]")
               for line in lines[1:-1])


def test_sector_filter_and_label():
    report = run_suite(SMALL, sectors=("2d", "su2"))
    # the label lists sectors in registry order, not request order
    assert report["suite"] == "shapeinv[su2+2d]"
    wanted = {name for name, _, sector, _ in _registry()
              if sector in ("su2", "2d")}
    assert {e["name"] for e in report["checks"]} == wanted
    assert all(e["pass"] for e in report["checks"])


def test_unknown_sector_rejected():
    with pytest.raises(ValueError, match="unknown suite sectors"):
        run_suite(SMALL, sectors=("2d", "bogus"))


def test_same_config_reports_are_byte_identical():
    cfg = SuiteConfig(seed=11, points=4, twol_max=2, n_max=1)
    a = report_json(run_suite(cfg, sectors=("2d",)))
    b = report_json(run_suite(cfg, sectors=("2d",)))
    assert a == b


def test_zero_caps_leave_a_passing_trivial_subset():
    report = run_suite(SuiteConfig(seed=1, points=4, twol_max=0, n_max=0))
    bad = [e["name"] for e in report["checks"] if not e["pass"]]
    assert not bad, bad


def test_config_coercion():
    report = run_suite({"seed": 2, "points": 4, "twol_max": 0, "n_max": 0},
                       sectors=("2d",))
    assert report["seed"] == 2
    with pytest.raises(TypeError):
        run_suite(42)
