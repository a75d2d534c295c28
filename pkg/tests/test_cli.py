import json

import jsonschema
import pytest
from click.testing import CliRunner

from orbk.cli import REPORT_SCHEMA, main


@pytest.fixture()
def runner(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return CliRunner()


def test_density_smooth_sphere(runner, tmp_path):
    result = runner.invoke(main, ["density", "--model", "football", "--n", "1",
                                  "--m", "10", "--r", "0.7"])
    assert result.exit_code == 0
    assert "PASS density: 11.000000" in result.output
    report = json.loads((tmp_path / "density_report.json").read_text())
    jsonschema.validate(report, REPORT_SCHEMA)
    assert report["rows"][0]["m"] == 10
    assert report["rows"][0]["N"] == 10


def test_bcoef_prints_exact_fraction(runner, tmp_path):
    result = runner.invoke(main, ["bcoef", "--model",
                                  '{"kind":"football","n":3}'])
    assert result.exit_code == 0
    assert "0.333333 (exact 1/3)" in result.output
    report = json.loads((tmp_path / "bcoef_report.json").read_text())
    assert len(report["rows"]) == 2


def test_rrk_weighted_line(runner, tmp_path):
    result = runner.invoke(main, ["rrk", "--model", '{"kind":"wpl","d":[1,2]}',
                                  "--m", "7"])
    assert result.exit_code == 0
    assert "total 4, oracle 4" in result.output


def test_unknown_command_is_usage_error(runner):
    result = runner.invoke(main, ["frobnicate"])
    assert result.exit_code == 2


def test_bad_degree_names_field(runner):
    result = runner.invoke(main, ["density", "--n", "2", "--m", "11"])
    assert result.exit_code == 1
    assert "FAIL m:" in result.output


def test_bad_model_names_field(runner):
    result = runner.invoke(main, ["density", "--model",
                                  '{"kind":"wpl","d":[2,4]}', "--m", "8"])
    assert result.exit_code == 1
    assert "FAIL model:" in result.output


def test_reports_are_byte_identical(runner, tmp_path):
    args = ["split", "--n", "2", "--m", "4:12:4", "--r", "0.6"]
    runner.invoke(main, args + ["--out", "a.json"])
    runner.invoke(main, args + ["--out", "b.json"])
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_config_file_overrides_flags(runner, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"r": 0.25}))
    result = runner.invoke(main, ["density", "--n", "2", "--m", "10",
                                  "--r", "0.7", "--config", str(cfg)])
    assert result.exit_code == 0
    report = json.loads((tmp_path / "density_report.json").read_text())
    assert report["params"]["r"] == 0.25


def test_unknown_config_field_rejected(runner, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"bogus": 1}))
    result = runner.invoke(main, ["density", "--n", "2", "--m", "10",
                                  "--config", str(cfg)])
    assert result.exit_code == 1
    assert "bogus" in result.output


def test_csv_report_and_gnuplot_script(runner, tmp_path):
    result = runner.invoke(main, ["fit", "--n", "2", "--m", "10:120:10",
                                  "--format", "csv", "--gnuplot"])
    assert result.exit_code == 0
    csv_path = tmp_path / "fit_report.csv"
    lines = csv_path.read_text().strip().splitlines()
    assert lines[0].split(",")[0] == "N"
    assert len(lines) > 2
    assert (tmp_path / "fit_report.csv.gp").exists()


def test_fit_reports_both_degree_conventions(runner, tmp_path):
    result = runner.invoke(main, ["fit", "--n", "2", "--m", "10:200:10"])
    assert result.exit_code == 0
    report = json.loads((tmp_path / "fit_report.json").read_text())
    s = report["summary"]
    assert s["a0_in_m"] == pytest.approx(1.0, abs=1e-6)
    assert s["a0_in_N"] == pytest.approx(2.0, abs=1e-5)
    assert s["a1_in_m"] == s["a1_in_N"]


def test_decay_noise_floor_outcome(runner, tmp_path):
    result = runner.invoke(main, ["decay", "--n", "2", "--m", "10:120:2",
                                  "--r", "1.0"])
    assert result.exit_code == 0
    report = json.loads((tmp_path / "decay_report.json").read_text())
    assert report["summary"]["outcome"] == "noise_floor"


def test_charsum_deterministic_seed(runner, tmp_path):
    r1 = runner.invoke(main, ["charsum", "--cases", "5", "--out", "c1.json"])
    r2 = runner.invoke(main, ["charsum", "--cases", "5", "--out", "c2.json"])
    assert r1.exit_code == 0 and r2.exit_code == 0
    assert (tmp_path / "c1.json").read_bytes() == (tmp_path / "c2.json").read_bytes()


def test_localmodel_prints_residual_table(runner, tmp_path):
    result = runner.invoke(main, ["localmodel"])
    assert result.exit_code == 0
    assert "f0: D0R" in result.output
    assert "PASS localmodel" in result.output


def test_phase_report(runner, tmp_path):
    result = runner.invoke(main, ["phase"])
    assert result.exit_code == 0
    report = json.loads((tmp_path / "phase_report.json").read_text())
    assert report["summary"]["pass"] is True
