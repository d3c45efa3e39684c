"""Tests for the command line front end."""

import json

import numpy as np
import pytest

from lgcardy.bundle import assemble_potential, corrupt_model
from lgcardy.cli import main, parse_branch, parse_complex_list
from lgcardy.landau_ginzburg import build_quaternion_model
from lgcardy.tensor_series import series_to_dict

FROZEN = ["--n", "2", "--a", "-3,0 0,0"]


def _run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def test_parse_helpers():
    assert parse_complex_list("-3,0 0,1.5") == (complex(-3, 0), complex(0, 1.5))
    assert parse_complex_list("2") == (complex(2, 0),)
    assert parse_branch("+,-") == (1, -1)
    assert parse_branch("+1,-1,+") == (1, -1, 1)


def test_verify_cf_inline(capsys):
    code, out = _run(capsys, ["verify-cf"] + FROZEN)
    assert code == 0
    report = json.loads(out)
    assert report["passed"] is True
    byname = {e["name"]: e for e in report["residuals"]}
    assert byname["cardy_trace"]["value"] < 1e-9
    assert byname["cardy_coordinate"]["value"] < 1e-9
    assert all(e["pass"] for e in report["residuals"])
    assert report["skipped"] == []


def test_wdvv_n1_exits_zero_with_named_skip(capsys):
    code, out = _run(capsys, ["wdvv", "--n", "1"])
    assert code == 0
    report = json.loads(out)
    assert report["passed"] is True
    assert report["residuals"] == []
    assert report["skipped"][0]["name"] == "wdvv_associativity"
    assert "reason" in report["skipped"][0]


def test_wdvv_n3_passes(capsys):
    code, out = _run(capsys, ["wdvv", "--n", "3", "--samples", "10"])
    assert code == 0
    report = json.loads(out)
    byname = {e["name"]: e for e in report["residuals"]}
    assert byname["associativity"]["value"] < 1e-7


def test_potential_reports_quartic_ratio(capsys):
    code, out = _run(capsys, ["potential", "--n", "2", "--samples", "40"])
    assert code == 0
    report = json.loads(out)
    quartic = report["data"]["quartic_coefficient"]
    ratio = report["data"]["quartic_ratio_to_one_over_24"]
    assert np.isclose(quartic[0], -0.375, atol=1e-9)
    assert np.isclose(ratio[0], -9.0, atol=1e-7)


def test_chart_frozen_coordinates(capsys):
    code, out = _run(capsys, ["chart"] + FROZEN)
    assert code == 0
    report = json.loads(out)
    t = report["data"]["t"]
    assert np.isclose(t[0][0], 0.0, atol=1e-12)
    assert np.isclose(t[1][0], -1.0, atol=1e-12)
    assert all(e["pass"] for e in report["residuals"])


def test_build_writes_model_usable_as_input(tmp_path, capsys):
    model_file = tmp_path / "model.json"
    code, out = _run(capsys, ["build"] + FROZEN + ["--output", str(model_file)])
    assert code == 0
    report = json.loads(out)
    assert report["data"]["model_written_to"] == str(model_file)
    code2, out2 = _run(capsys, ["verify-cf", "--input", str(model_file)])
    assert code2 == 0
    assert json.loads(out2)["passed"] is True


def test_ext_wdvv_from_model_and_bundle(capsys):
    code, out = _run(capsys, ["ext-wdvv"] + FROZEN)
    assert code == 0
    report = json.loads(out)
    byname = {e["name"]: e for e in report["residuals"]}
    assert set(byname) == {"condition_%d" % k for k in (1, 3, 4, 5, 6, 7)}
    code, out = _run(capsys, ["bundle"] + FROZEN + ["--samples", "2"])
    assert code == 0
    report = json.loads(out)
    assert report["data"]["routes_agree"] is True
    byname = {e["name"]: e for e in report["residuals"]}
    assert byname["frame_drift"]["value"] < 1e-8
    assert "cardy" in byname


def test_bundle_paper_scale_reports_drift_as_data(capsys):
    code, out = _run(capsys, ["bundle"] + FROZEN + ["--samples", "2", "--paper-scale"])
    assert code == 0
    report = json.loads(out)
    names = {e["name"] for e in report["residuals"]}
    assert "frame_drift" not in names
    assert report["data"]["frame_drift"] > 1e-5


def test_ext_wdvv_detects_corrupt_series_file(tmp_path, capsys):
    model = build_quaternion_model(n=2, a=(-3.0, 0.0))
    series = assemble_potential(model, cf=corrupt_model(model, "cardy"))
    series_file = tmp_path / "series.json"
    series_file.write_text(json.dumps(series_to_dict(series)))
    code, out = _run(capsys, ["ext-wdvv", "--input", str(series_file)])
    assert code == 1
    report = json.loads(out)
    byname = {e["name"]: e for e in report["residuals"]}
    assert not byname["condition_7"]["pass"]
    assert byname["condition_7"]["value"] > 1e-3


def test_branch_flag_builds_valid_model(capsys):
    code, out = _run(capsys, ["verify-cf"] + FROZEN + ["--branch", "+,-"])
    assert code == 0
    assert json.loads(out)["passed"] is True


def test_exit_code_two_for_bad_arguments(capsys):
    assert main(["verify-cf", "--n", "2", "--a", "oops"]) == 2
    assert main(["verify-cf", "--n", "2", "--a", "1,0"]) == 2  # wrong count
    assert main(["verify-cf", "--input", "/nonexistent/path.json"]) == 2
    capsys.readouterr()


def test_exit_code_three_for_degenerate_model(capsys):
    assert main(["verify-cf", "--n", "2", "--a", "0,0 0,0"]) == 3
    capsys.readouterr()


def test_reports_deterministic_modulo_timestamp(tmp_path, capsys):
    out_file = tmp_path / "report.json"
    argv = ["bundle"] + FROZEN + ["--samples", "2", "--output", str(out_file)]
    assert main(argv) == 0
    first = [ln for ln in out_file.read_text().splitlines() if '"timestamp"' not in ln]
    assert main(argv) == 0
    second = [ln for ln in out_file.read_text().splitlines() if '"timestamp"' not in ln]
    capsys.readouterr()
    assert first == second
