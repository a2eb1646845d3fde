#!/usr/bin/env python3
# -*- coding: utf-8 -*-

# Copyright 2026 aor_sim contributors
#  MIT License (https://opensource.org/licenses/MIT)

"""Plot simulated angle-of-reception statistics."""

import argparse
import logging
import os
import sys

import matplotlib
import numpy as np

from aor_sim.antennas import gain
from aor_sim.antennas import pattern_from_config
from aor_sim.simulator import RunArtifacts

# set to avoid matplotlib error in CLI environment
matplotlib.use("Agg")

import matplotlib.pyplot as plt  # NOQA

DB_FLOOR = -60.0


def to_db(values):
    """Convert linear values to dB floored at ``DB_FLOOR``."""
    with np.errstate(divide="ignore"):
        values_db = 10.0 * np.log10(np.asarray(values, dtype=np.float64))
    return np.maximum(values_db, DB_FLOOR)


def marginal_spectra(pas_joint):
    """Integrate a joint spectrum into the marginal spectra per degree.

    Args:
        pas_joint (tuple): Zenith centers, azimuth centers and values per square degree.

    Returns:
        ndarray: Zenith centers.
        ndarray: P_R(theta) per degree.
        ndarray: Azimuth centers.
        ndarray: P_R(phi) per degree.

    """
    theta, phi, values = pas_joint
    d_theta = 90.0 / len(theta)
    d_phi = 360.0 / len(phi)
    return theta, values.sum(axis=1) * d_phi, phi, values.sum(axis=0) * d_theta


def _sweep_reports(artifacts, reports):
    # spreads rows follow the alpha sweep first, then the hpbw sweep
    num_alpha = len(artifacts.config.get("alpha_sweep", reports))
    return reports[:num_alpha], reports[num_alpha:]


def _save(figname):
    plt.tight_layout()
    plt.savefig(figname, format="svg")
    plt.close()
    logging.info(f"Saved {figname}.")
    return figname


def plot_pattern_azimuth(artifacts, alpha_values, figname):
    """Plot the receive power patterns at the horizon for each alpha."""
    if "rx_pattern" not in artifacts.config:
        logging.warning("config.yml has no rx_pattern, skip the pattern figure.")
        return None
    rx = pattern_from_config(artifacts.config["rx_pattern"])
    phi = np.linspace(-180.0, 180.0, 721)
    plt.figure(figsize=(6.4, 4.0))
    for alpha in alpha_values:
        plt.plot(phi, gain(rx.with_alpha(alpha), np.full_like(phi, 90.0), phi), label=f"alpha = {alpha:g}")
    plt.xlabel("azimuth [deg]")
    plt.ylabel("power gain (linear)")
    plt.title(f"receive pattern {rx}")
    plt.legend()
    return _save(figname)


def plot_pas_db(points, axis, figname):
    """Plot run-averaged marginal spectra of the alpha points in dB."""
    series = []
    for point in points:
        theta, pas_theta, phi, pas_phi = marginal_spectra(point["pas_joint"])
        x, y = (theta, pas_theta) if axis == "theta" else (phi, pas_phi)
        if not np.any(y > 0):
            logging.warning(f"{point['name']} carries no power, skip it in {figname}.")
            continue
        series.append((point["name"], x, to_db(y)))
    if len(series) == 0:
        logging.warning(f"no power in any sweep point, skip {figname}.")
        return None
    plt.figure(figsize=(6.4, 4.0))
    for name, x, y in series:
        plt.plot(x, y, label=name)
    plt.xlabel(f"{axis} [deg]")
    plt.ylabel(f"P_R({axis}) [dB]")
    plt.ylim(bottom=DB_FLOOR)
    plt.legend()
    return _save(figname)


def plot_pdfs(points, axis, figname):
    """Plot AOR PDFs of each point together with the AOA baseline."""
    plt.figure(figsize=(6.4, 4.0))
    for point in points:
        x, y = point[f"pdf_aor_{axis}"]
        plt.plot(x, y, label=f"AOR {point['name']}")
    x, y = points[0][f"pdf_aoa_{axis}"]
    plt.plot(x, y, "k--", label="AOA")
    plt.xlabel(f"{axis} [deg]")
    plt.ylabel("PDF [1/deg]")
    plt.legend()
    return _save(figname)


def plot_sigma_vs_alpha(reports, figname):
    """Plot the angular spreads versus the absolute boresight azimuth."""
    alpha = np.abs([r.omega.alpha for r in reports])
    order = np.argsort(alpha, kind="stable")
    plt.figure(figsize=(6.4, 4.0))
    plt.plot(alpha[order], np.array([r.sigma_theta for r in reports])[order], "o-", label="sigma_theta")
    plt.plot(alpha[order], np.array([r.sigma_phi for r in reports])[order], "s-", label="sigma_phi")
    plt.xlabel("|alpha| [deg]")
    plt.ylabel("standard deviation [deg]")
    plt.legend()
    return _save(figname)


def plot_sigma_vs_hpbw(hpbw_reports, figname):
    """Plot the azimuth spread versus the azimuth beamwidth per scenario."""
    plt.figure(figsize=(6.4, 4.0))
    for name, reports in hpbw_reports.items():
        hpbw = np.array([r.omega.hpbw_phi for r in reports])
        order = np.argsort(hpbw)
        plt.plot(hpbw[order], np.array([r.sigma_phi for r in reports])[order], "o-", label=name)
    plt.xlabel("HPBW_phi [deg]")
    plt.ylabel("sigma_phi [deg]")
    plt.legend()
    return _save(figname)


def emit_plots(artifacts):
    """Write the svg figures of simulation artifacts.

    Args:
        artifacts (RunArtifacts): Loaded or freshly written artifacts.

    Returns:
        list: Written figure filenames.

    """
    if len(artifacts) == 0:
        logging.warning(f"no artifacts found in {artifacts.outdir}, no figures are written.")
        return []

    written = []
    hpbw_reports = {}
    for name, scenario in artifacts.scenarios.items():
        scenario_dir = os.path.join(artifacts.outdir, name)
        alpha_reports, hpbw_reports[name] = _sweep_reports(artifacts, scenario["spreads"])
        alpha_points = [p for p in scenario["points"] if p["kind"] == "alpha"]
        if len(alpha_points) != 0:
            written += [
                plot_pattern_azimuth(artifacts, [p["value"] for p in alpha_points],
                                     os.path.join(scenario_dir, "pattern_azimuth.svg")),
                plot_pas_db(alpha_points, "phi", os.path.join(scenario_dir, "pas_phi_db.svg")),
                plot_pas_db(alpha_points, "theta", os.path.join(scenario_dir, "pas_theta_db.svg")),
                plot_pdfs(alpha_points, "theta", os.path.join(scenario_dir, "pdf_theta.svg")),
                plot_pdfs(alpha_points, "phi", os.path.join(scenario_dir, "pdf_phi.svg")),
            ]
        if len(alpha_reports) != 0:
            written.append(plot_sigma_vs_alpha(alpha_reports, os.path.join(scenario_dir, "sigma_vs_alpha.svg")))
    hpbw_reports = {name: reports for name, reports in hpbw_reports.items() if len(reports) != 0}
    if len(hpbw_reports) != 0:
        written.append(plot_sigma_vs_hpbw(hpbw_reports, os.path.join(artifacts.outdir, "sigma_vs_hpbw.svg")))

    return [figname for figname in written if figname is not None]


def main(argv=None):
    """Run plotting process."""
    parser = argparse.ArgumentParser(
        description="Plot outputs of aor-sim-run (See detail in aor_sim/bin/plot.py).")
    parser.add_argument("--outdir", type=str, required=True,
                        help="output directory of aor-sim-run.")
    parser.add_argument("--verbose", type=int, default=1,
                        help="logging level. higher is more logging. (default=1)")
    args = parser.parse_args(argv)

    # set logger
    if args.verbose > 1:
        logging.basicConfig(
            level=logging.DEBUG, format="%(asctime)s (%(module)s:%(lineno)d) %(levelname)s: %(message)s")
    elif args.verbose > 0:
        logging.basicConfig(
            level=logging.INFO, format="%(asctime)s (%(module)s:%(lineno)d) %(levelname)s: %(message)s")
    else:
        logging.basicConfig(
            level=logging.WARN, format="%(asctime)s (%(module)s:%(lineno)d) %(levelname)s: %(message)s")
        logging.warning("Skip DEBUG/INFO messages")

    if not os.path.isdir(args.outdir):
        logging.error(f"There is no such a directory ({args.outdir}).")
        return 1
    emit_plots(RunArtifacts.load(args.outdir))
    return 0


if __name__ == "__main__":
    sys.exit(main())
