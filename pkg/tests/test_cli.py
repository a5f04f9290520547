import csv
import io
import json
import os

import numpy as np
import pytest

from bplab.cli import ConfigError, ExperimentConfig, main, projection_experiment, run
from bplab.spectra import psi_image_moments
from bplab.levy import triple_from_spec


GOOD_CONFIG = {
    "model": "hermitian",
    "triple": {"preset": "dirac", "a": 2.0},
    "dims": [3, 5],
    "trials_per_dim": 2,
    "seed": 11,
    "outputs": {"moments": {"kmax": 3}},
}


def config(**overrides):
    doc = {k: (v.copy() if isinstance(v, dict) else v) for k, v in GOOD_CONFIG.items()}
    doc.update(overrides)
    return doc


# ---------------------------------------------------------------------------
# config validation


def test_good_config_parses():
    cfg = ExperimentConfig.from_dict(config())
    assert cfg.dims == (3, 5)
    assert cfg.moments_kmax == 3
    assert cfg.histogram_bins is None


@pytest.mark.parametrize(
    "overrides, path",
    [
        ({"model": "other"}, "model"),
        ({"dims": []}, "dims"),
        ({"dims": [5, 3]}, "dims"),
        ({"dims": [0]}, "dims"),
        ({"trials_per_dim": 0}, "trials_per_dim"),
        ({"seed": "abc"}, "seed"),
        ({"outputs": {}}, "outputs"),
        ({"outputs": {"bogus": {}}}, "outputs.bogus"),
        ({"outputs": {"moments": {"kmax": 0}}}, "outputs.moments.kmax"),
        ({"inner_cut": -1.0}, "inner_cut"),
        ({"triple": {"preset": "nope"}}, "triple"),
    ],
)
def test_bad_configs_carry_field_paths(overrides, path):
    with pytest.raises(ConfigError) as err:
        ExperimentConfig.from_dict(config(**overrides))
    assert err.value.path == path


def test_missing_triple():
    doc = config()
    del doc["triple"]
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict(doc)


def test_nonhermitian_requires_symmetric_triple():
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict(config(model="nonhermitian"))
    ok = config(model="nonhermitian",
                triple={"preset": "gaussian", "mean": 0.0, "var": 1.0})
    assert ExperimentConfig.from_dict(ok).model == "nonhermitian"


# ---------------------------------------------------------------------------
# runner semantics


def test_dirac_experiment_is_exact():
    report = run(ExperimentConfig.from_dict(config()))
    for row in report.rows:
        k = int(row["stat_name"][1:])
        assert row["mean"] == pytest.approx(2.0**k, abs=1e-12)
    assert {row["dim"] for row in report.rows} == {3, 5}
    assert all(row["trial_count"] == 2 for row in report.rows)


def test_run_is_deterministic_across_worker_counts(monkeypatch):
    doc = config(triple={"preset": "gaussian", "mean": 0.0, "var": 1.0})
    monkeypatch.setenv("BPLAB_THREADS", "1")
    first = run(ExperimentConfig.from_dict(doc)).to_json()
    monkeypatch.setenv("BPLAB_THREADS", "4")
    second = run(ExperimentConfig.from_dict(doc)).to_json()
    assert first == second


def test_histogram_and_distance_outputs():
    doc = config(
        outputs={
            "moments": {"kmax": 2},
            "histogram": {"bins": 5},
            "cauchy_distance": {"target": {"law": "dirac", "params": [2.0]}},
        }
    )
    report = run(ExperimentConfig.from_dict(doc))
    assert "3" in report.histograms and len(report.histograms["3"]) == 5
    names = {row["stat_name"] for row in report.rows}
    assert "cauchy_distance" in names and "cauchy_distance_pooled" in names
    dist_rows = [r for r in report.rows if r["stat_name"] == "cauchy_distance"]
    assert all(r["mean"] < 1e-10 for r in dist_rows)


def test_report_csv_schema():
    report = run(ExperimentConfig.from_dict(config()))
    rows = list(csv.reader(io.StringIO(report.to_csv())))
    assert rows[0] == ["dim", "trial_count", "stat_name", "mean", "stderr"]
    assert len(rows) == 1 + len(report.rows)


def test_report_json_schema():
    report = run(ExperimentConfig.from_dict(config()))
    doc = json.loads(report.to_json())
    assert set(doc) == {"config", "seed", "version", "rows", "histograms"}
    assert doc["seed"] == 11


# ---------------------------------------------------------------------------
# projection experiment


def test_projection_experiment_against_marchenko_pastur():
    report = projection_experiment(d=120, d_prime=60, trials=8, seed=3)
    by_name = {row["stat_name"]: row["mean"] for row in report.rows}
    assert by_name["m1"] == pytest.approx(0.5, abs=1e-12)  # trace is exact
    assert by_name["m1_reference"] == pytest.approx(0.5)
    assert by_name["m2"] == pytest.approx(by_name["m2_reference"], rel=0.05)


def test_projection_experiment_zero_count():
    report = projection_experiment(d=10, d_prime=0, trials=2, seed=0)
    for row in report.rows:
        assert row["mean"] == 0.0
    with pytest.raises(ValueError):
        projection_experiment(0, 1, 1, 0)


# ---------------------------------------------------------------------------
# command line entry points


def test_cli_moments_subcommand(capsys):
    spec = json.dumps({"preset": "poisson", "lambda": 1.0})
    assert main(["moments", spec, "--kmax", "4"]) == 0
    out = capsys.readouterr().out.split()
    expected = psi_image_moments(triple_from_spec({"preset": "poisson", "lambda": 1.0}), 4)
    assert np.allclose([float(v) for v in out], expected.values)


def test_cli_moments_rejects_bad_spec(capsys):
    assert main(["moments", "{not json"]) == 2
    assert main(["moments", json.dumps({"preset": "nope"})]) == 2


def test_cli_sample_deterministic(capsys):
    spec = json.dumps({"preset": "gaussian", "mean": 0.0, "var": 1.0})
    assert main(["sample", spec, "--dim", "3", "--seed", "5"]) == 0
    first = capsys.readouterr().out
    assert main(["sample", spec, "--dim", "3", "--seed", "5"]) == 0
    second = capsys.readouterr().out
    assert first == second
    doc = json.loads(first)
    m = np.array(doc["real"]) + 1j * np.array(doc["imag"])
    assert m.shape == (3, 3)
    assert np.max(np.abs(m - m.conj().T)) < 1e-10


def test_cli_sample_nonhermitian_needs_symmetry(capsys):
    spec = json.dumps({"preset": "poisson", "lambda": 1.0})
    assert main(["sample", spec, "--dim", "3", "--model", "nonhermitian"]) == 2


def test_cli_run_writes_reports(tmp_path, capsys):
    cfg = tmp_path / "config.json"
    cfg.write_text(json.dumps(config()))
    out = tmp_path / "out"
    assert main(["run", str(cfg), "--out", str(out)]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["config"]["model"] == "hermitian"
    rows = list(csv.reader(io.StringIO((out / "report.csv").read_text())))
    assert rows[0][0] == "dim"


def test_cli_run_stdout_default(tmp_path, capsys):
    cfg = tmp_path / "config.json"
    cfg.write_text(json.dumps(config()))
    assert main(["run", str(cfg)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["seed"] == 11


def test_cli_run_bad_config_exit_codes(tmp_path, capsys):
    missing = tmp_path / "missing.json"
    assert main(["run", str(missing)]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["run", str(bad)]) == 2
    invalid = tmp_path / "invalid.json"
    invalid.write_text(json.dumps(config(model="other")))
    assert main(["run", str(invalid)]) == 2


def test_cli_project_subcommand(tmp_path):
    out = tmp_path / "proj"
    assert main(["project", "--dim", "50", "--count", "25", "--trials", "3",
                 "--seed", "1", "--out", str(out)]) == 0
    report = json.loads((out / "report.json").read_text())
    names = {row["stat_name"] for row in report["rows"]}
    assert {"m1", "m4", "m1_reference", "m4_reference"} <= names


def test_worker_count_env(monkeypatch):
    from bplab.cli import _worker_count

    monkeypatch.setenv("BPLAB_THREADS", "3")
    assert _worker_count() == 3
    monkeypatch.setenv("BPLAB_THREADS", "0")
    assert _worker_count() == 1
    monkeypatch.delenv("BPLAB_THREADS")
    assert _worker_count() >= 1
