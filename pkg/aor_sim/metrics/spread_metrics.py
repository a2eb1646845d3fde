# -*- coding: utf-8 -*-

# Copyright 2026 aor_sim contributors
#  MIT License (https://opensource.org/licenses/MIT)

"""Angular spread metrics of binned PDFs."""

import copy
import logging

from collections import namedtuple

import numpy as np

from aor_sim.antennas import db
from aor_sim.utils import EmptyInputError
from aor_sim.utils import NormalizationError
from aor_sim.utils import read_csv
from aor_sim.utils import write_csv

OmegaKey = namedtuple("OmegaKey", ["alpha", "hpbw_theta", "hpbw_phi"])

SPREAD_COLUMNS = ["alpha_deg", "hpbw_theta_deg", "hpbw_phi_deg", "sigma_theta_deg",
                  "sigma_phi_deg", "stderr_theta", "stderr_phi", "runs"]

NORMALIZATION_TOLERANCE = 1e-3


def binned_moments(centers, values, width):
    """Compute rectangle-rule mean and variance of a binned density.

    Args:
        centers (ndarray): Bin centers.
        values (ndarray): Density values.
        width (float): Bin width.

    Returns:
        float: Mean.
        float: Variance (>= 0).

    """
    centers = np.asarray(centers, dtype=np.float64)
    mass = np.asarray(values, dtype=np.float64) * width
    mean = np.sum(centers * mass)
    variance = np.sum(centers ** 2 * mass) - mean ** 2
    return float(mean), float(max(variance, 0.0))


def _check_normalized(pdf):
    integral = pdf.integral()
    if abs(integral - 1.0) > NORMALIZATION_TOLERANCE:
        raise NormalizationError(f"PDF integrates to {integral:.6g} instead of 1.")


def std_dev(pdf):
    """Return the standard deviation of a normalized marginal PDF.

    Moments are taken over the bin centers on the linear domain, so azimuths
    are not treated as circular.

    Args:
        pdf (PdfEstimate): Marginal PDF (kind "theta" or "phi").

    Returns:
        float: Standard deviation in degrees.

    """
    assert pdf.kind in ["theta", "phi"], "std_dev expects a marginal PDF."
    _check_normalized(pdf)
    _, variance = binned_moments(pdf.centers, pdf.values, pdf.bin_width)
    return float(np.sqrt(variance))


def skewness(pdf):
    """Return the standardized third central moment of a normalized marginal PDF."""
    assert pdf.kind in ["theta", "phi"], "skewness expects a marginal PDF."
    _check_normalized(pdf)
    mean, variance = binned_moments(pdf.centers, pdf.values, pdf.bin_width)
    if variance == 0.0:
        return 0.0
    third = np.sum((pdf.centers - mean) ** 3 * pdf.values * pdf.bin_width)
    return float(third / variance ** 1.5)


def aggregate_runs(per_run):
    """Aggregate per-run values.

    Args:
        per_run (list): Values of the Monte Carlo runs.

    Returns:
        float: Arithmetic mean.
        float: Standard error (sample standard deviation over sqrt(n), 0 for a single run).

    """
    values = np.asarray(per_run, dtype=np.float64)
    if len(values) == 0:
        raise EmptyInputError("no runs to aggregate.")
    if len(values) == 1:
        return float(values[0]), 0.0
    return float(values.mean()), float(values.std(ddof=1) / np.sqrt(len(values)))


class SpreadReport(object):
    """Angular spreads of one sweep point aggregated over Monte Carlo runs."""

    def __init__(self, omega, per_run_theta, per_run_phi, sigma_theta=None, sigma_phi=None):
        """Initialize spread report.

        Args:
            omega (OmegaKey): Receive pattern parameters of the sweep point.
            per_run_theta (list): Zenith spread of each run in degrees.
            per_run_phi (list): Azimuth spread of each run in degrees.
            sigma_theta (float): Zenith spread of the run-averaged PDF (mean of the runs if None).
            sigma_phi (float): Azimuth spread of the run-averaged PDF (mean of the runs if None).

        """
        assert len(per_run_theta) == len(per_run_phi), "per-run spreads have different lengths."
        self.omega = OmegaKey(*[float(v) for v in omega])
        self.per_run_theta = np.asarray(per_run_theta, dtype=np.float64)
        self.per_run_phi = np.asarray(per_run_phi, dtype=np.float64)
        self.sigma_theta, self.stderr_theta = aggregate_runs(self.per_run_theta)
        self.sigma_phi, self.stderr_phi = aggregate_runs(self.per_run_phi)
        if sigma_theta is not None:
            self.sigma_theta = float(sigma_theta)
        if sigma_phi is not None:
            self.sigma_phi = float(sigma_phi)
        self.runs = len(self.per_run_theta)

    @property
    def row(self):
        """Return the CSV row of the report."""
        return [self.omega.alpha, self.omega.hpbw_theta, self.omega.hpbw_phi,
                self.sigma_theta, self.sigma_phi, self.stderr_theta, self.stderr_phi, self.runs]

    @classmethod
    def from_row(cls, row):
        """Rebuild a report from a CSV row (per-run values are not stored)."""
        report = cls.__new__(cls)
        report.omega = OmegaKey(*[float(v) for v in row[:3]])
        report.sigma_theta, report.sigma_phi = float(row[3]), float(row[4])
        report.stderr_theta, report.stderr_phi = float(row[5]), float(row[6])
        report.runs = int(row[7])
        report.per_run_theta = np.array([])
        report.per_run_phi = np.array([])
        return report

    def __repr__(self):
        """Return the string representation."""
        return (f"SpreadReport(alpha={self.omega.alpha:g}, hpbw_phi={self.omega.hpbw_phi:g}, "
                f"sigma_theta={self.sigma_theta:.3f}, sigma_phi={self.sigma_phi:.3f}, runs={self.runs})")


def write_spreads_csv(filename, reports, comments=()):
    """Write spread reports to CSV."""
    write_csv(filename, SPREAD_COLUMNS, [r.row for r in reports], comments)


def read_spreads_csv(filename):
    """Read spread reports from CSV.

    Returns:
        list: SpreadReport instances.
        list: Metadata lines.

    """
    header, values, comments = read_csv(filename)
    assert header == SPREAD_COLUMNS, f"{filename} is not a spreads CSV ({header})."
    return [SpreadReport.from_row(row) for row in values], comments


def peak_db(spectrum):
    """Return the maximum of a marginal power angular spectrum in dB."""
    return db(np.max(spectrum.values))


def peak_degradation(reference, other):
    """Return the drop in dB of the spectrum maximum from reference to other."""
    return peak_db(reference) - peak_db(other)


def sweep(kind, values, config, scenario=None, jobs=1):
    """Compute the spread reports of an antenna parameter sweep.

    Every point uses the same base seed with its own substreams, so the
    reports are reproducible.

    Args:
        kind (str): "alpha" (receive boresight azimuth) or "hpbw_phi" (azimuth beamwidth).
        values (list): Sweep values in degrees.
        config (dict): Resolved configuration of the fixed parameters.
        scenario (str): Scenario name (the first scenario if None).
        jobs (int): Number of worker processes.

    Returns:
        list: SpreadReport of the angle of reception per sweep point.

    """
    # avoid circular import
    from aor_sim.simulator import Simulator

    if kind not in ["alpha", "hpbw_phi"]:
        raise ValueError(f"sweep kind must be alpha or hpbw_phi (got {kind}).")
    if len(values) == 0:
        raise EmptyInputError("sweep needs at least one value.")
    config = copy.deepcopy(config)
    config["alpha_sweep"] = list(values) if kind == "alpha" else []
    config["hpbw_phi_sweep"] = list(values) if kind == "hpbw_phi" else []
    simulator = Simulator(config, jobs=jobs, scenarios=None if scenario is None else [scenario])
    results = simulator.run()
    name = list(results.keys())[0]
    logging.info(f"Finished {kind} sweep over {len(values)} points for scenario {name}.")
    return [point.report for point in results[name].points]
