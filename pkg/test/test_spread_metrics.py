#!/usr/bin/env python3
# -*- coding: utf-8 -*-

# Copyright 2026 aor_sim contributors
#  MIT License (https://opensource.org/licenses/MIT)

import logging
import os

import numpy as np
import pytest
import yaml

from aor_sim.antennas import NARROWBEAM
from aor_sim.antennas import WIDEBEAM
from aor_sim.estimators import MarginalSpectrum
from aor_sim.estimators import PdfEstimate
from aor_sim.metrics import OmegaKey
from aor_sim.metrics import SpreadReport
from aor_sim.metrics import aggregate_runs
from aor_sim.metrics import binned_moments
from aor_sim.metrics import peak_db
from aor_sim.metrics import peak_degradation
from aor_sim.metrics import read_spreads_csv
from aor_sim.metrics import skewness
from aor_sim.metrics import std_dev
from aor_sim.metrics import sweep
from aor_sim.metrics import write_spreads_csv
from aor_sim.simulator import Simulator
from aor_sim.utils import EmptyInputError
from aor_sim.utils import NormalizationError
from aor_sim.utils import load_config

logging.basicConfig(
    level=logging.WARN, format="%(asctime)s (%(module)s:%(lineno)d) %(levelname)s: %(message)s")

SCENARIO_DIR = os.path.join(os.path.dirname(__file__), "..", "egs", "uma_28ghz", "aor1", "scenarios")


def make_phi_pdf(values, eps=1.0):
    values = np.asarray(values, dtype=np.float64)
    return PdfEstimate("phi", 1.0, eps, values, 1.0 / (2.0 * eps))


def make_spike_pdf(angles, eps=1.0):
    centers = np.arange(-180.0 + eps, 180.0, 2.0 * eps)
    values = np.zeros(len(centers))
    for angle in angles:
        values[np.argmin(np.abs(centers - angle))] += 1.0 / len(angles) / (2.0 * eps)
    return make_phi_pdf(values, eps)


def make_config(tmp_path, **kwargs):
    scenario = tmp_path / "scenario.csv"
    scenario.write_text("delay_ns,power_db\n0,0\n40,-3\n150,-8\n400,-15\n")
    config = dict(
        scenario_file=str(scenario),
        generation=dict(paths_per_cluster=10, local_paths=20),
        eps_theta=5.0,
        eps_phi=5.0,
        runs=2,
        seed=3,
        outdir=str(tmp_path / "exp"),
    )
    config.update(kwargs)
    config_path = tmp_path / "config.yml"
    with open(config_path, "w") as f:
        yaml.dump(config, f, Dumper=yaml.Dumper)
    return load_config(str(config_path))


def test_std_dev_uniform():
    pdf = make_phi_pdf(np.full(180, 1.0 / 360.0))
    assert std_dev(pdf) == pytest.approx(360.0 / np.sqrt(12.0), abs=0.5)
    assert std_dev(pdf) == pytest.approx(103.92, abs=0.01)


@pytest.mark.parametrize("eps", [0.5, 1.0, 5.0])
def test_std_dev_delta(eps):
    assert std_dev(make_spike_pdf([10.0], eps)) <= 2.0 * eps


def test_std_dev_two_points():
    assert std_dev(make_spike_pdf([-45.0, 45.0])) == pytest.approx(45.0, abs=2.0)


def test_std_dev_unnormalized():
    with pytest.raises(NormalizationError):
        std_dev(make_phi_pdf(np.full(180, 2.0 / 360.0)))
    with pytest.raises(NormalizationError):
        skewness(make_phi_pdf(np.zeros(180)))


def test_binned_moments_permutation_invariance():
    rng = np.random.default_rng(0)
    centers = np.arange(-179.0, 180.0, 2.0)
    values = rng.random(180)
    values /= values.sum() * 2.0
    perm = rng.permutation(180)
    mean, variance = binned_moments(centers, values, 2.0)
    mean_, variance_ = binned_moments(centers[perm], values[perm], 2.0)
    assert mean == pytest.approx(mean_, rel=1e-12, abs=1e-12)
    assert variance == pytest.approx(variance_, rel=1e-12)


def test_skewness_sign():
    # bulk at +30 with a tail towards negative azimuths
    pdf = make_spike_pdf([30.0] * 6 + [0.0, -30.0, -90.0])
    assert skewness(pdf) < 0
    pdf = make_spike_pdf([-30.0] * 6 + [0.0, 30.0, 90.0])
    assert skewness(pdf) > 0
    assert skewness(make_spike_pdf([-45.0, 45.0])) == pytest.approx(0.0, abs=1e-12)
    assert skewness(make_spike_pdf([10.0])) == 0.0


@pytest.mark.parametrize(
    "per_run, mean, stderr", [
        ([10.0, 10.0, 10.0], 10.0, 0.0),
        ([8.0, 12.0], 10.0, 2.0),
        ([7.3], 7.3, 0.0),
    ])
def test_aggregate_runs(per_run, mean, stderr):
    assert aggregate_runs(per_run) == pytest.approx((mean, stderr), abs=1e-12)


def test_aggregate_runs_empty():
    with pytest.raises(EmptyInputError):
        aggregate_runs([])


def test_spread_report_csv(tmp_path):
    reports = [
        SpreadReport(OmegaKey(-30.0, 30.0, 28.8), [10.0, 12.0], [30.0, 34.0]),
        SpreadReport(OmegaKey(0.0, 30.0, 28.8), [9.5], [20.25]),
    ]
    assert reports[0].sigma_phi == 32.0
    assert reports[0].stderr_phi == pytest.approx(2.0)
    filename = str(tmp_path / "spreads.csv")
    write_spreads_csv(filename, reports, comments=["config_hash = 0123456789abcdef"])
    loaded, comments = read_spreads_csv(filename)
    assert comments == ["config_hash = 0123456789abcdef"]
    for report, report_ in zip(reports, loaded):
        assert report_.omega == report.omega
        assert report_.sigma_theta == report.sigma_theta
        assert report_.sigma_phi == report.sigma_phi
        assert report_.stderr_theta == report.stderr_theta
        assert report_.runs == report.runs
    with open(filename) as f:
        lines = f.read().splitlines()
    assert lines[1].startswith("alpha_deg,hpbw_theta_deg,hpbw_phi_deg,sigma_theta_deg,sigma_phi_deg,")
    assert lines[2].endswith(",2")


def test_spread_report_sigma_of_averaged_pdf():
    report = SpreadReport(OmegaKey(0.0, 30.0, 28.8), [10.0, 12.0], [30.0, 34.0], sigma_theta=11.5, sigma_phi=33.0)
    assert (report.sigma_theta, report.sigma_phi) == (11.5, 33.0)
    # standard errors still come from the runs
    assert report.stderr_phi == pytest.approx(2.0)
    assert report.runs == 2


def test_peak_degradation():
    reference = MarginalSpectrum("phi", 45.0, [0.0, 900.0, 90.0, 0.0])
    other = MarginalSpectrum("phi", 45.0, [0.0, 9.0, 90.0, 0.0])
    assert peak_db(reference) == pytest.approx(10.0)
    assert peak_degradation(reference, other) == pytest.approx(10.0)


def test_sweep_alpha(tmp_path):
    config = make_config(tmp_path)
    reports = sweep("alpha", [-30.0, 0.0, 60.0], config)
    assert len(reports) == 3
    assert [r.omega.alpha for r in reports] == [-30.0, 0.0, 60.0]
    assert all(r.runs == 2 for r in reports)
    assert all(0.0 <= r.sigma_theta <= 90.0 / np.sqrt(12.0) + 1.0 for r in reports)
    assert all(0.0 <= r.sigma_phi <= 360.0 / np.sqrt(12.0) + 1.0 for r in reports)
    # same base seed, same reports
    reports_ = sweep("alpha", [-30.0, 0.0, 60.0], config)
    assert [r.sigma_phi for r in reports] == [r.sigma_phi for r in reports_]


def test_sweep_hpbw(tmp_path):
    config = make_config(tmp_path)
    reports = sweep("hpbw_phi", [10.0, 60.0], config)
    assert [r.omega.hpbw_phi for r in reports] == [10.0, 60.0]
    assert [r.omega.alpha for r in reports] == [0.0, 0.0]
    assert [r.omega.hpbw_theta for r in reports] == [30.0, 30.0]


def test_sweep_errors(tmp_path):
    config = make_config(tmp_path)
    with pytest.raises(EmptyInputError):
        sweep("alpha", [], config)
    with pytest.raises(ValueError):
        sweep("gain", [1.0], config)


def make_uma_config(tmp_path, beam, runs, scenario="uma_normal"):
    return make_config(
        tmp_path,
        scenario_file=os.path.abspath(os.path.join(SCENARIO_DIR, f"{scenario}.csv")),
        delay_spread=None,
        generation={},
        tx_pattern=dict(beam, alpha=0.0),
        rx_pattern=dict(beam, alpha=0.0),
        eps_theta=1.0,
        eps_phi=1.0,
        runs=runs,
        alpha_sweep=[-120.0, -90.0, -60.0, -30.0, 0.0, 30.0, 60.0, 90.0, 120.0],
    )


def simulate_alpha(tmp_path, beam, alphas, runs=200):
    config = make_uma_config(tmp_path, beam, runs)
    config["alpha_sweep"] = alphas
    return list(Simulator(config, show_progress=False).run().values())[0]


@pytest.mark.slow
@pytest.mark.parametrize("beam", [WIDEBEAM, NARROWBEAM])
def test_spread_minimum_at_boresight(tmp_path, beam):
    config = make_uma_config(tmp_path, beam, runs=200)
    reports = sweep("alpha", config["alpha_sweep"], config)
    alphas = [r.omega.alpha for r in reports]
    assert alphas[int(np.argmin([r.sigma_theta for r in reports]))] == 0.0
    assert alphas[int(np.argmin([r.sigma_phi for r in reports]))] == 0.0


@pytest.mark.slow
def test_peak_drop_away_from_boresight(tmp_path):
    drops = {}
    for name, beam in [("wide", WIDEBEAM), ("narrow", NARROWBEAM)]:
        degradation = simulate_alpha(tmp_path, beam, [0.0, 120.0]).peak_degradation()["alpha_120"]
        drops[name] = (degradation["pas_aor_theta"], degradation["pas_aor_phi"])
    assert drops["wide"] == pytest.approx((30.0, 27.0), abs=6.0)
    assert drops["narrow"] == pytest.approx((46.0, 40.0), abs=6.0)
    assert drops["narrow"][0] > drops["wide"][0]
    assert drops["narrow"][1] > drops["wide"][1]


@pytest.mark.slow
def test_narrower_beam_smaller_spread(tmp_path):
    reports = {}
    for name, beam in [("wide", WIDEBEAM), ("narrow", NARROWBEAM)]:
        point = simulate_alpha(tmp_path, beam, [0.0]).points[0]
        reports[name] = (point.report, point.report_aoa)
    for plane in ["sigma_theta", "sigma_phi"]:
        narrow, wide, aoa = [getattr(r, plane) for r in
                             [reports["narrow"][0], reports["wide"][0], reports["wide"][1]]]
        assert narrow < wide < aoa, plane

    # reduction of the spread from arrival to reception
    expected = {"wide": (11.0, 27.0), "narrow": (4.0, 15.0)}
    for name, (aor, aoa) in reports.items():
        reduction = (aoa.sigma_theta - aor.sigma_theta, aoa.sigma_phi - aor.sigma_phi)
        assert reduction == pytest.approx(expected[name], rel=0.5), name


@pytest.mark.slow
def test_azimuth_asymmetry(tmp_path):
    result = simulate_alpha(tmp_path, WIDEBEAM, [-60.0, 60.0])
    skews = [skewness(p.pdf_aor_phi) for p in result.points]
    assert all(s != 0.0 for s in skews)
    # mirrored boresights skew in opposite directions
    assert np.sign(skews[0]) == -np.sign(skews[1])


@pytest.mark.slow
def test_environment_matters_only_for_wide_azimuth_beams(tmp_path):
    hpbws = [10.0, 20.0, 30.0, 40.0, 60.0, 90.0, 120.0]
    sigmas = []
    for scenario in ["uma_short", "uma_normal", "uma_long"]:
        config = make_uma_config(tmp_path, WIDEBEAM, runs=200, scenario=scenario)
        sigma_phi = [r.sigma_phi for r in sweep("hpbw_phi", hpbws, config)]
        assert np.all(np.diff(sigma_phi) >= 0), scenario
        sigmas.append(sigma_phi)
    sigmas = np.array(sigmas)
    divergence = sigmas.max(axis=0) - sigmas.min(axis=0)
    assert np.all(divergence[:4] < divergence[hpbws.index(90.0)])
