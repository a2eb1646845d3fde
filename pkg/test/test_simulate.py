#!/usr/bin/env python3
# -*- coding: utf-8 -*-

# Copyright 2026 aor_sim contributors
#  MIT License (https://opensource.org/licenses/MIT)

import logging
import os

import numpy as np
import pytest
import yaml

from aor_sim.bin.extract_clusters import main as extract_clusters_main
from aor_sim.bin.plot import emit_plots
from aor_sim.bin.plot import to_db
from aor_sim.bin.simulate import main
from aor_sim.bin.simulate import run
from aor_sim.estimators import read_marginal_csv
from aor_sim.profiles import parse_profile
from aor_sim.simulator import PAS_JOINT_FILE
from aor_sim.simulator import PDF_FILES
from aor_sim.simulator import RunArtifacts
from aor_sim.simulator import make_sweep_points
from aor_sim.utils import ConfigError
from aor_sim.utils import config_hash
from aor_sim.utils import find_files
from aor_sim.utils import load_config
from aor_sim.utils import read_hdf5
from aor_sim.utils import validate_config

logging.basicConfig(
    level=logging.WARN, format="%(asctime)s (%(module)s:%(lineno)d) %(levelname)s: %(message)s")

CONF_DIR = os.path.join(os.path.dirname(__file__), "..", "egs", "uma_28ghz", "aor1", "conf")


def make_config_file(tmp_path, name="config.yml", **kwargs):
    scenario = tmp_path / "uma_test.csv"
    if not scenario.exists():
        scenario.write_text("# test clusters\ndelay_ns,power_db\n0,0\n40,-3\n150,-8\n400,-15\n")
    config = dict(
        scenario_file="uma_test.csv",
        generation=dict(paths_per_cluster=5, local_paths=10),
        eps_theta=5.0,
        eps_phi=10.0,
        alpha_sweep=[0.0],
        runs=1,
        seed=7,
        outdir=str(tmp_path / "exp"),
    )
    config.update(kwargs)
    config_path = str(tmp_path / name)
    with open(config_path, "w") as f:
        yaml.dump(config, f, Dumper=yaml.Dumper)
    return config_path


def read_bytes(outdir):
    contents = {}
    for filename in find_files(outdir, "*.csv", include_root_dir=False):
        with open(os.path.join(outdir, filename), "rb") as f:
            contents[filename] = f.read()
    return contents


def test_smoke(tmp_path):
    config_path = make_config_file(tmp_path)
    assert main(["--config", config_path, "--no-plots", "--quiet"]) == 0
    point_dir = tmp_path / "exp" / "uma_test" / "alpha_0"
    assert sorted(os.listdir(point_dir)) == sorted([PAS_JOINT_FILE] + list(PDF_FILES.values()))
    for name in ["spreads.csv", "spreads_aoa.csv", "peaks.csv"]:
        assert (tmp_path / "exp" / "uma_test" / name).exists()
    for name in ["config.yml", "run_log.yml"]:
        assert (tmp_path / "exp" / name).exists()
    assert not (tmp_path / "exp" / "artifacts.h5").exists()


def test_overrides(tmp_path):
    config_path = make_config_file(tmp_path)
    outdir = str(tmp_path / "other")
    assert main(["--config", config_path, "--seed", "11", "--runs", "2", "--out", outdir,
                 "--no-plots", "--quiet"]) == 0
    with open(os.path.join(outdir, "run_log.yml")) as f:
        run_log = yaml.load(f, Loader=yaml.Loader)
    assert run_log["seed"] == 11
    assert run_log["runs"] == 2
    assert run_log["random_streams"] == "per sweep point"
    assert len(run_log["scenarios"]["uma_test"]["timings_sec"]) == 2
    assert not (tmp_path / "exp").exists()


def test_determinism(tmp_path):
    config_path = make_config_file(tmp_path, alpha_sweep=[-60.0, 0.0], runs=3)
    for outdir in ["exp1", "exp2"]:
        assert main(["--config", config_path, "--out", str(tmp_path / outdir), "--no-plots", "--quiet"]) == 0
    first, second = read_bytes(str(tmp_path / "exp1")), read_bytes(str(tmp_path / "exp2"))
    assert len(first) == 2 * 5 + 3
    assert first == second


@pytest.mark.parametrize("common_random_numbers", [False, True])
def test_random_streams(tmp_path, common_random_numbers):
    config_path = make_config_file(tmp_path, alpha_sweep=[0.0, 60.0], runs=2,
                                   common_random_numbers=common_random_numbers)
    run(config_path, show_progress=False)
    with open(tmp_path / "exp" / "run_log.yml") as f:
        run_log = yaml.load(f, Loader=yaml.Loader)
    expected = "shared by all sweep points" if common_random_numbers else "per sweep point"
    assert run_log["random_streams"] == expected
    # the omnidirectional baseline only depends on the channel realizations
    pdfs = [read_marginal_csv(str(tmp_path / "exp" / "uma_test" / name / "pdf_aoa_phi.csv"))[1]
            for name in ["alpha_0", "alpha_60"]]
    assert np.array_equal(pdfs[0], pdfs[1]) == common_random_numbers


def test_parallel_runs_match_serial(tmp_path):
    config_path = make_config_file(tmp_path, alpha_sweep=[0.0, 30.0], runs=6)
    assert main(["--config", config_path, "--out", str(tmp_path / "serial"), "--no-plots", "--quiet"]) == 0
    assert main(["--config", config_path, "--out", str(tmp_path / "parallel"), "--jobs", "2",
                 "--no-plots", "--quiet"]) == 0
    assert read_bytes(str(tmp_path / "serial")) == read_bytes(str(tmp_path / "parallel"))


def test_missing_scenario(tmp_path):
    config_path = make_config_file(tmp_path, scenario_file="missing.csv")
    assert main(["--config", config_path, "--no-plots", "--quiet"]) == 1
    assert not (tmp_path / "exp").exists()


def test_normalized_scenario_without_delay_spread(tmp_path):
    scenario = tmp_path / "normalized.csv"
    scenario.write_text("delay_norm,power_db\n0,0\n1,-3\n")
    config_path = make_config_file(tmp_path, scenario_file="normalized.csv")
    assert main(["--config", config_path, "--no-plots", "--quiet"]) == 1
    assert not (tmp_path / "exp").exists()


def test_partial_outputs_are_removed(tmp_path, monkeypatch):
    def fail(*args, **kwargs):
        raise RuntimeError("disk full")

    monkeypatch.setattr("aor_sim.bin.simulate.write_spreads_csv", fail)
    config_path = make_config_file(tmp_path)
    assert main(["--config", config_path, "--no-plots", "--quiet"]) == 2
    assert not (tmp_path / "exp").exists()

    # an existing output directory is kept, only the written outputs are removed
    (tmp_path / "exp").mkdir()
    (tmp_path / "exp" / "notes.txt").write_text("keep")
    assert main(["--config", config_path, "--no-plots", "--quiet"]) == 2
    assert os.listdir(tmp_path / "exp") == ["notes.txt"]


def test_outputs_are_removed_when_plotting_fails(tmp_path, monkeypatch):
    def fail(*args, **kwargs):
        raise RuntimeError("no display")

    monkeypatch.setattr("aor_sim.bin.plot.emit_plots", fail)
    config_path = make_config_file(tmp_path)
    assert main(["--config", config_path, "--quiet"]) == 2
    assert not (tmp_path / "exp").exists()


def test_config_errors_list_every_field(tmp_path):
    config_path = make_config_file(tmp_path, runs=0, eps_theta=0.7, seed=-1, alpha_sweep=[0.0, 0.0],
                                   generation=dict(local_power_fraction=1.5))
    with pytest.raises(ConfigError) as excinfo:
        run(config_path, show_progress=False)
    problems = excinfo.value.problems
    for field in ["runs", "eps_theta", "seed", "alpha_sweep", "generation.local_power_fraction"]:
        assert any(p.startswith(field) for p in problems), field
    assert len(problems) == 5


def test_config_sections_must_be_mappings(tmp_path):
    config = load_config(make_config_file(tmp_path))
    config["geometry"] = [200.0]
    config["generation"]["kapa"] = 3.0
    with pytest.raises(ConfigError) as excinfo:
        validate_config(config)
    assert excinfo.value.problems == ["geometry: must be a mapping", "generation.kapa: unknown key"]

    config_path = make_config_file(tmp_path, name="dense.yml", generation="dense")
    assert main(["--config", config_path, "--no-plots", "--quiet"]) == 1
    assert not (tmp_path / "exp").exists()


def test_unparsable_config(tmp_path):
    config_path = tmp_path / "broken.yml"
    config_path.write_text("runs: [1,\n")
    assert main(["--config", str(config_path), "--no-plots", "--quiet"]) == 1


def test_pdf_files_integrate_to_one(tmp_path):
    config_path = make_config_file(tmp_path, alpha_sweep=[-30.0, 90.0], runs=2)
    run(config_path, show_progress=False)
    files = find_files(str(tmp_path / "exp"), "pdf_*.csv")
    assert len(files) == 8
    for filename in files:
        _, values, comments = read_marginal_csv(filename)
        width = [float(c.split("=")[1]) for c in comments if c.startswith("bin_width_deg")][0]
        assert values.sum() * width == pytest.approx(1.0, abs=1e-6)


def test_config_hash(tmp_path):
    config = load_config(make_config_file(tmp_path))
    digest = config_hash(config)
    assert len(digest) == 16
    assert config_hash(dict(config, outdir="elsewhere", jobs=4)) == digest
    assert config_hash(dict(config, seed=8)) != digest
    assert config_hash(dict(config, eps_phi=5.0)) != digest

    run(make_config_file(tmp_path), show_progress=False)
    with open(tmp_path / "exp" / "uma_test" / "spreads.csv") as f:
        assert f"# config_hash = {digest}\n" in f.readlines()
    with open(tmp_path / "exp" / "uma_test" / "alpha_0" / "pdf_aor_phi.csv") as f:
        assert f"# config_hash = {digest}\n" in f.readlines()
    for name in ["config.yml", "run_log.yml"]:
        with open(tmp_path / "exp" / name) as f:
            assert f.readlines()[1] == f"# config_hash = {digest}\n"
    with open(tmp_path / "exp" / "run_log.yml") as f:
        assert yaml.load(f, Loader=yaml.Loader)["config_hash"] == digest


def test_artifacts(tmp_path):
    config_path = make_config_file(tmp_path, alpha_sweep=[30.0, -30.0], hpbw_phi_sweep=[20.0], runs=2)
    artifacts = run(config_path, show_progress=False)
    assert list(artifacts.scenarios) == ["uma_test"]
    scenario = artifacts.scenarios["uma_test"]
    assert [r.omega.alpha for r in scenario["spreads"]] == [30.0, -30.0, 0.0]
    assert [r.omega.hpbw_phi for r in scenario["spreads_aoa"]] == [28.8, 28.8, 20.0]
    assert [p["name"] for p in scenario["points"]] == ["alpha_-30", "alpha_30", "hpbw_phi_20"]
    theta, phi, values = scenario["points"][0]["pas_joint"]
    assert values.shape == (len(theta), len(phi)) == (9, 18)
    assert artifacts.config["seed"] == 7

    loaded = RunArtifacts.load(str(tmp_path / "exp"))
    assert len(loaded) == 1
    assert loaded.scenarios["uma_test"]["spreads"][0].sigma_phi == scenario["spreads"][0].sigma_phi


def test_hdf5_output(tmp_path):
    config_path = make_config_file(tmp_path, save_hdf5=True)
    run(config_path, show_progress=False)
    hdf5_name = str(tmp_path / "exp" / "artifacts.h5")
    pdf = read_hdf5(hdf5_name, "uma_test/alpha_0/pdf_aor_phi")
    _, values, _ = read_marginal_csv(str(tmp_path / "exp" / "uma_test" / "alpha_0" / "pdf_aor_phi.csv"))
    np.testing.assert_array_equal(pdf, values)
    assert read_hdf5(hdf5_name, "uma_test/theta_centers").shape == (9,)

    # per-run spreads come back from the hdf5 file
    report = RunArtifacts.load(str(tmp_path / "exp")).scenarios["uma_test"]["spreads"][0]
    np.testing.assert_array_equal(report.per_run_phi, read_hdf5(hdf5_name, "uma_test/alpha_0/sigma_aor")[:, 1])


def test_multiple_scenarios(tmp_path):
    (tmp_path / "short.csv").write_text("delay_norm,power_db\n0,0\n0.5,-3\n2.0,-10\n")
    config_path = make_config_file(tmp_path, scenario_file=None, scenarios={
        "short": {"file": "short.csv", "delay_spread": 50e-9},
        "long": {"file": "short.csv", "delay_spread": 500e-9},
    })
    artifacts = run(config_path, show_progress=False)
    assert sorted(artifacts.scenarios) == ["long", "short"]
    with open(tmp_path / "exp" / "run_log.yml") as f:
        run_log = yaml.load(f, Loader=yaml.Loader)
    assert run_log["scenarios"]["long"]["rms_delay_spread_ns"] > run_log["scenarios"]["short"]["rms_delay_spread_ns"]


def test_sweep_points_follow_tx(tmp_path):
    config = load_config(make_config_file(tmp_path, alpha_sweep=[10.0], hpbw_phi_sweep=[60.0]))
    points = make_sweep_points(config)
    assert [p.name for p in points] == ["alpha_10", "hpbw_phi_60"]
    assert points[0].tx.hpbw_phi == 28.8
    assert points[1].tx.hpbw_phi == 60.0
    assert points[1].rx.hpbw_phi == 60.0
    config["sweep_tx_with_rx"] = False
    assert make_sweep_points(config)[1].tx.hpbw_phi == 28.8


@pytest.mark.parametrize("name", ["widebeam.yaml", "narrowbeam.yaml", "widebeam.debug.yaml", "hpbw_sweep.yaml"])
def test_shipped_configs_are_valid(name):
    validate_config(load_config(os.path.join(CONF_DIR, name)))


def test_emit_plots(tmp_path):
    config_path = make_config_file(tmp_path, alpha_sweep=[-30.0, 0.0, 60.0], hpbw_phi_sweep=[20.0, 40.0])
    artifacts = run(config_path, show_progress=False)
    figures = emit_plots(artifacts)
    names = sorted(os.path.basename(f) for f in figures)
    assert names == sorted(["pattern_azimuth.svg", "pas_phi_db.svg", "pas_theta_db.svg", "pdf_theta.svg",
                            "pdf_phi.svg", "sigma_vs_alpha.svg", "sigma_vs_hpbw.svg"])
    for figname in figures:
        with open(figname) as f:
            assert "<svg" in f.read()


def test_emit_plots_from_cli(tmp_path):
    config_path = make_config_file(tmp_path)
    assert main(["--config", config_path, "--quiet"]) == 0
    assert (tmp_path / "exp" / "uma_test" / "sigma_vs_alpha.svg").exists()


def test_emit_plots_empty(tmp_path, caplog):
    artifacts = RunArtifacts.load(str(tmp_path))
    assert len(artifacts) == 0
    with caplog.at_level(logging.WARNING):
        assert emit_plots(artifacts) == []
    assert "no artifacts" in caplog.text
    assert find_files(str(tmp_path), "*.svg") == []


def test_to_db_floor():
    np.testing.assert_array_equal(to_db([1.0, 10.0, 0.0, 1e-9]), [0.0, 10.0, -60.0, -60.0])


def test_extract_clusters_cli(tmp_path):
    trace = tmp_path / "trace.csv"
    trace.write_text("delay_ns,power_db\n0,-10\n10,0\n20,-5\n30,-3\n40,-20\n")
    out = str(tmp_path / "clusters.csv")
    assert extract_clusters_main(["--trace", str(trace), "--out", out, "--verbose", "0"]) == 0
    profile = parse_profile(out)
    np.testing.assert_allclose(profile.delays, [0.0, 20e-9], atol=1e-18)
    np.testing.assert_allclose(profile.powers, [1.0, 10 ** -0.3])


def test_extract_clusters_cli_errors(tmp_path):
    trace = tmp_path / "flat.csv"
    trace.write_text("delay_ns,power_db\n0,0\n10,0\n")
    assert extract_clusters_main(["--trace", str(trace), "--out", str(tmp_path / "c.csv"), "--verbose", "0"]) == 1
    assert extract_clusters_main(["--trace", str(tmp_path / "missing.csv"), "--out", str(tmp_path / "c.csv"),
                                  "--verbose", "0"]) == 1
    assert not (tmp_path / "c.csv").exists()
