# -*- coding: utf-8 -*-

# Copyright 2026 aor_sim contributors
#  MIT License (https://opensource.org/licenses/MIT)

"""Monte Carlo simulator of angle-of-reception statistics."""

import logging
import os
import time

from collections import OrderedDict
from concurrent.futures import ProcessPoolExecutor
from itertools import repeat

import numpy as np
import yaml

from tqdm import tqdm

from aor_sim.antennas import make_omnidirectional
from aor_sim.antennas import pattern_from_config
from aor_sim.estimators import RunningAverage
from aor_sim.estimators import apply_rx_pattern
from aor_sim.estimators import estimate_joint_pdf
from aor_sim.estimators import estimate_marginal_pas
from aor_sim.estimators import estimate_marginals
from aor_sim.estimators import estimate_pas
from aor_sim.estimators import read_joint_csv
from aor_sim.estimators import read_marginal_csv
from aor_sim.geometry import LinkGeometry
from aor_sim.metrics import OmegaKey
from aor_sim.metrics import SpreadReport
from aor_sim.metrics import peak_db
from aor_sim.metrics import read_spreads_csv
from aor_sim.metrics import skewness
from aor_sim.metrics import std_dev
from aor_sim.models import GenerationConfig
from aor_sim.models import generate_ensemble
from aor_sim.profiles import parse_profile
from aor_sim.profiles import scale_delays
from aor_sim.utils import DomainError
from aor_sim.utils import find_files
from aor_sim.utils import read_csv
from aor_sim.utils import read_hdf5
from aor_sim.utils import scenario_table

PDF_FILES = OrderedDict([
    ("pdf_aor_theta", "pdf_aor_theta.csv"),
    ("pdf_aor_phi", "pdf_aor_phi.csv"),
    ("pdf_aoa_theta", "pdf_aoa_theta.csv"),
    ("pdf_aoa_phi", "pdf_aoa_phi.csv"),
])
PAS_JOINT_FILE = "pas_joint.csv"


class SweepPoint(object):
    """Antenna settings of one sweep point."""

    def __init__(self, kind, value, tx, rx):
        """Initialize sweep point.

        Args:
            kind (str): "alpha" or "hpbw_phi".
            value (float): Swept value in degrees.
            tx (AntennaPattern): Transmit pattern.
            rx (AntennaPattern): Receive pattern.

        """
        self.kind = kind
        self.value = float(value)
        self.tx = tx
        self.rx = rx

    @property
    def name(self):
        """Return the directory name of the point."""
        return f"{self.kind}_{self.value:g}"

    @property
    def omega(self):
        """Return the receive pattern parameters."""
        return OmegaKey(self.rx.alpha, self.rx.hpbw_theta, self.rx.hpbw_phi)

    @property
    def tx_key(self):
        """Return a hashable key of the transmit pattern."""
        tx = self.tx
        return (tx.G, tx.hpbw_theta, tx.hpbw_phi, tx.alpha, tx.omnidirectional)


def make_sweep_points(config):
    """Make the alpha sweep points followed by the HPBW sweep points.

    Args:
        config (dict): Resolved configuration.

    Returns:
        list: SweepPoint instances.

    """
    tx = pattern_from_config(config["tx_pattern"])
    rx = pattern_from_config(config["rx_pattern"])
    points = [SweepPoint("alpha", alpha, tx, rx.with_alpha(alpha)) for alpha in config["alpha_sweep"]]
    for hpbw in config["hpbw_phi_sweep"]:
        point_tx = tx
        if config["sweep_tx_with_rx"] and not tx.omnidirectional:
            point_tx = tx.with_hpbw(hpbw_phi=hpbw)
        points.append(SweepPoint("hpbw_phi", hpbw, point_tx, rx.with_hpbw(hpbw_phi=hpbw)))
    return points


def load_scenario(params):
    """Load the cluster profile of a scenario.

    Args:
        params (dict): Scenario entry with keys file and delay_spread.

    Returns:
        ClusterProfile: Profile with delays in seconds.

    """
    profile = parse_profile(params["file"], format="cluster_table")
    if profile.normalized:
        if params["delay_spread"] is None:
            raise DomainError(f"{params['file']} has normalized delays, delay_spread must be given.")
        profile = scale_delays(profile, params["delay_spread"])
    elif params["delay_spread"] is not None:
        logging.warning(f"{params['file']} has absolute delays, delay_spread is ignored.")
    return profile


class RunContext(object):
    """Everything a worker needs to simulate the runs of one scenario."""

    def __init__(self, profile, config, points, scenario_index):
        """Initialize run context."""
        self.profile = profile
        self.geom = LinkGeometry(config["geometry"]["distance"])
        self.generation = GenerationConfig.from_config(config)
        self.points = points
        self.eps_theta = config["eps_theta"]
        self.eps_phi = config["eps_phi"]
        self.seed = config["seed"]
        self.common_random_numbers = config["common_random_numbers"]
        self.scenario_index = scenario_index

    def spawn_key(self, point_index, run_index):
        """Return the seed substream key of a run."""
        if self.common_random_numbers:
            return (self.scenario_index, run_index)
        return (self.scenario_index, point_index, run_index)


def evaluate_point(ensemble, rx, eps_theta, eps_phi):
    """Estimate spectra, PDFs and spreads of one ensemble for one receive pattern.

    Args:
        ensemble (PathEnsemble): Channel realization.
        rx (AntennaPattern): Receive pattern.
        eps_theta (float): Zenith bin half-width in degrees.
        eps_phi (float): Azimuth bin half-width in degrees.

    Returns:
        dict: Estimates of the angle of reception and the angle of arrival.

    """
    w = apply_rx_pattern(ensemble, rx)
    w_aoa = apply_rx_pattern(ensemble, make_omnidirectional(0.0))
    grid = estimate_pas(w, eps_theta, eps_phi)
    pdf_aor = estimate_marginals(w, eps_theta, eps_phi)
    pdf_aoa = estimate_marginals(w_aoa, eps_theta, eps_phi)
    return {
        "pas_joint": grid,
        "pdf_joint": estimate_joint_pdf(grid),
        "pdf_aor_theta": pdf_aor[0],
        "pdf_aor_phi": pdf_aor[1],
        "pdf_aoa_theta": pdf_aoa[0],
        "pdf_aoa_phi": pdf_aoa[1],
        "pas_aor": estimate_marginal_pas(w, eps_theta, eps_phi),
        "pas_aoa": estimate_marginal_pas(w_aoa, eps_theta, eps_phi),
        "sigma_aor": (std_dev(pdf_aor[0]), std_dev(pdf_aor[1])),
        "sigma_aoa": (std_dev(pdf_aoa[0]), std_dev(pdf_aoa[1])),
        "skewness_phi": skewness(pdf_aor[1]),
        "received_power": w.total,
    }


def simulate_run(context, run_index):
    """Simulate one Monte Carlo run for every sweep point.

    Points with the same transmit pattern and seed substream share one ensemble.

    Args:
        context (RunContext): Scenario context.
        run_index (int): Index of the run.

    Returns:
        int: Index of the run.
        list: Output of ``evaluate_point`` per sweep point.
        float: Elapsed seconds.

    """
    start = time.perf_counter()
    ensembles = {}
    outputs = []
    for point_index, point in enumerate(context.points):
        key = context.spawn_key(point_index, run_index)
        if (point.tx_key, key) not in ensembles:
            rng = np.random.default_rng(np.random.SeedSequence(context.seed, spawn_key=key))
            ensembles[(point.tx_key, key)] = generate_ensemble(
                context.profile, context.geom, point.tx, context.generation, rng)
        outputs.append(evaluate_point(ensembles[(point.tx_key, key)], point.rx,
                                      context.eps_theta, context.eps_phi))
    return run_index, outputs, time.perf_counter() - start


class PointResult(object):
    """Run-averaged estimates and spreads of one sweep point."""

    def __init__(self, point):
        """Initialize point result."""
        self.point = point
        self._averages = OrderedDict((key, RunningAverage()) for key in [
            "pas_joint", "pdf_joint", "pdf_aor_theta", "pdf_aor_phi", "pdf_aoa_theta", "pdf_aoa_phi",
            "pas_aor_theta", "pas_aor_phi", "pas_aoa_theta", "pas_aoa_phi"])
        self.sigma_aor = []
        self.sigma_aoa = []
        self.skewness_phi = []
        self.received_power = []

    def add(self, output):
        """Accumulate the output of one run."""
        for key in ["pas_joint", "pdf_joint", "pdf_aor_theta", "pdf_aor_phi", "pdf_aoa_theta", "pdf_aoa_phi"]:
            self._averages[key].add(output[key])
        for prefix in ["pas_aor", "pas_aoa"]:
            self._averages[f"{prefix}_theta"].add(output[prefix][0])
            self._averages[f"{prefix}_phi"].add(output[prefix][1])
        self.sigma_aor.append(output["sigma_aor"])
        self.sigma_aoa.append(output["sigma_aoa"])
        self.skewness_phi.append(output["skewness_phi"])
        self.received_power.append(output["received_power"])

    def __getattr__(self, key):
        """Return the run-averaged estimate of a key."""
        if key.startswith("_") or key not in self._averages:
            raise AttributeError(key)
        return self._averages[key].mean

    @property
    def runs(self):
        """Return the number of accumulated runs."""
        return len(self.sigma_aor)

    @property
    def report(self):
        """Return the spread report of the angle of reception."""
        sigmas = np.array(self.sigma_aor).reshape(-1, 2)
        return SpreadReport(self.point.omega, sigmas[:, 0], sigmas[:, 1],
                            std_dev(self.pdf_aor_theta), std_dev(self.pdf_aor_phi))

    @property
    def report_aoa(self):
        """Return the spread report of the angle of arrival."""
        sigmas = np.array(self.sigma_aoa).reshape(-1, 2)
        return SpreadReport(self.point.omega, sigmas[:, 0], sigmas[:, 1],
                            std_dev(self.pdf_aoa_theta), std_dev(self.pdf_aoa_phi))

    @property
    def peaks(self):
        """Return the maxima in dB of the run-averaged marginal spectra."""
        return OrderedDict((key, peak_db(getattr(self, key)))
                           for key in ["pas_aor_theta", "pas_aor_phi", "pas_aoa_theta", "pas_aoa_phi"])


class ScenarioResult(object):
    """Results of all sweep points of one scenario."""

    def __init__(self, name, profile, points):
        """Initialize scenario result."""
        self.name = name
        self.profile = profile
        self.points = [PointResult(point) for point in points]
        self.timings = []

    def peak_degradation(self):
        """Return the drop of the spectrum maxima of each alpha point relative to alpha = 0.

        Returns:
            dict: Point name to {key: drop in dB}, empty if alpha = 0 is not swept.

        """
        reference = [p for p in self.points if p.point.kind == "alpha" and p.point.value == 0.0]
        if len(reference) == 0:
            return {}
        reference = reference[0].peaks
        degradation = OrderedDict()
        for p in self.points:
            if p.point.kind != "alpha":
                continue
            degradation[p.point.name] = {key: float(reference[key] - value) for key, value in p.peaks.items()}
        return degradation


class Simulator(object):
    """Monte Carlo simulator over scenarios and sweep points."""

    def __init__(self, config, jobs=1, scenarios=None, show_progress=True):
        """Initialize simulator.

        Args:
            config (dict): Resolved and validated configuration.
            jobs (int): Number of worker processes.
            scenarios (list): Names of the scenarios to simulate (all if None).
            show_progress (bool): Whether to show a progress bar.

        """
        self.config = config
        self.jobs = jobs
        self.show_progress = show_progress
        self.table = scenario_table(config)
        if scenarios is not None:
            unknown = [name for name in scenarios if name not in self.table]
            if len(unknown) != 0:
                raise ValueError(f"unknown scenarios {unknown} (available: {list(self.table)}).")
        self.selected = list(self.table) if scenarios is None else list(scenarios)
        self.points = make_sweep_points(config)
        self.profiles = OrderedDict((name, load_scenario(self.table[name])) for name in self.selected)

    def run(self):
        """Run all Monte Carlo runs.

        Returns:
            OrderedDict: Scenario name to ScenarioResult.

        """
        results = OrderedDict()
        for name in self.selected:
            # seed substreams follow the position in the full scenario table
            scenario_index = list(self.table).index(name)
            results[name] = self._run_scenario(name, scenario_index)
        return results

    def _run_scenario(self, name, scenario_index):
        profile = self.profiles[name]
        context = RunContext(profile, self.config, self.points, scenario_index)
        result = ScenarioResult(name, profile, self.points)
        runs = self.config["runs"]
        logging.info(f"Simulating scenario {name}: {profile.num_clusters} clusters, "
                     f"{len(self.points)} sweep points, {runs} runs.")

        bar = tqdm(total=runs, desc=f"[{name}]", disable=not self.show_progress)
        if self.jobs > 1:
            with ProcessPoolExecutor(max_workers=self.jobs) as executor:
                # map yields in submission order, so accumulation is deterministic
                for outputs in executor.map(simulate_run, repeat(context), range(runs), chunksize=4):
                    self._accumulate(result, outputs)
                    bar.update(1)
        else:
            for outputs in map(simulate_run, repeat(context), range(runs)):
                self._accumulate(result, outputs)
                bar.update(1)
        bar.close()

        for p in result.points:
            logging.info(f"{name}/{p.point.name}: {p.report}")
        return result

    @staticmethod
    def _accumulate(result, outputs):
        run_index, point_outputs, elapsed = outputs
        assert run_index == len(result.timings), "runs must be accumulated in order."
        for point_result, output in zip(result.points, point_outputs):
            point_result.add(output)
        result.timings.append(elapsed)


class RunArtifacts(object):
    """Outputs of a simulation stored under an output directory."""

    def __init__(self, outdir, config, scenarios):
        """Initialize run artifacts.

        Args:
            outdir (str): Output directory.
            config (dict): Resolved configuration.
            scenarios (OrderedDict): Scenario name to dict with keys
                "spreads", "spreads_aoa" (lists of SpreadReport) and
                "points" (list of dicts holding the point name, kind, value,
                the joint spectrum and the marginal PDFs).

        """
        self.outdir = outdir
        self.config = config
        self.scenarios = scenarios

    def __len__(self):
        """Return the number of scenarios."""
        return len(self.scenarios)

    @classmethod
    def load(cls, outdir):
        """Load artifacts written by ``aor-sim-run``.

        Args:
            outdir (str): Output directory.

        Returns:
            RunArtifacts: Loaded artifacts (without scenarios if nothing is found).

        """
        config = {}
        if os.path.exists(os.path.join(outdir, "config.yml")):
            with open(os.path.join(outdir, "config.yml")) as f:
                config = yaml.load(f, Loader=yaml.Loader)
        hdf5_name = os.path.join(outdir, "artifacts.h5")
        scenarios = OrderedDict()
        for spreads_file in find_files(outdir, "spreads.csv"):
            scenario_dir = os.path.dirname(spreads_file)
            spreads, _ = read_spreads_csv(spreads_file)
            spreads_aoa = []
            if os.path.exists(os.path.join(scenario_dir, "spreads_aoa.csv")):
                spreads_aoa, _ = read_spreads_csv(os.path.join(scenario_dir, "spreads_aoa.csv"))
            if os.path.exists(hdf5_name):
                # per-run spreads are only kept in the hdf5 file
                names = [p.name for p in make_sweep_points(config)]
                for key, reports in [("sigma_aor", spreads), ("sigma_aoa", spreads_aoa)]:
                    for point_name, report in zip(names, reports):
                        sigmas = read_hdf5(hdf5_name, f"{os.path.basename(scenario_dir)}/{point_name}/{key}")
                        report.per_run_theta, report.per_run_phi = sigmas[:, 0], sigmas[:, 1]
            points = []
            for pas_file in find_files(scenario_dir, PAS_JOINT_FILE):
                point_dir = os.path.dirname(pas_file)
                kind, value = os.path.basename(point_dir).rsplit("_", 1)
                point = {"name": os.path.basename(point_dir), "kind": kind, "value": float(value)}
                point["pas_joint"] = read_joint_csv(pas_file)[:3]
                for key, filename in PDF_FILES.items():
                    point[key] = read_marginal_csv(os.path.join(point_dir, filename))[:2]
                points.append(point)
            points.sort(key=lambda p: (p["kind"] != "alpha", p["value"]))
            scenarios[os.path.basename(scenario_dir)] = {
                "spreads": spreads, "spreads_aoa": spreads_aoa, "points": points}
        return cls(outdir, config, scenarios)


def read_peaks_csv(filename):
    """Read a peaks CSV into a list of dicts."""
    header, values, _ = read_csv(filename)
    return [dict(zip(header, row)) for row in values]
