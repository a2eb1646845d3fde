#!/usr/bin/env python3
# -*- coding: utf-8 -*-

# Copyright 2026 aor_sim contributors
#  MIT License (https://opensource.org/licenses/MIT)

"""Run Monte Carlo simulations of the angle of reception."""

import argparse
import logging
import os
import shutil
import sys

import yaml

import aor_sim

from aor_sim.estimators import write_joint_csv
from aor_sim.estimators import write_marginal_csv
from aor_sim.metrics import write_spreads_csv
from aor_sim.simulator import PAS_JOINT_FILE
from aor_sim.simulator import PDF_FILES
from aor_sim.simulator import RunArtifacts
from aor_sim.simulator import Simulator
from aor_sim.utils import ConfigError
from aor_sim.utils import config_hash
from aor_sim.utils import load_config
from aor_sim.utils import scenario_table
from aor_sim.utils import validate_config
from aor_sim.utils import write_csv
from aor_sim.utils import write_hdf5

PEAK_COLUMNS = ["alpha_deg", "hpbw_theta_deg", "hpbw_phi_deg", "peak_aor_theta_db",
                "peak_aor_phi_db", "peak_aoa_theta_db", "peak_aoa_phi_db"]

EXIT_CONFIG_ERROR = 1
EXIT_RUNTIME_ERROR = 2


def write_scenario(result, scenario_dir, comments):
    """Write the CSV files of one scenario.

    Args:
        result (ScenarioResult): Simulated scenario.
        scenario_dir (str): Output directory of the scenario.
        comments (list): Metadata lines written to every file.

    """
    for p in result.points:
        point_dir = os.path.join(scenario_dir, p.point.name)
        point_comments = comments + [f"sweep_point = {p.point.name}", f"rx = {p.point.rx}", f"tx = {p.point.tx}"]
        write_joint_csv(os.path.join(point_dir, PAS_JOINT_FILE), p.pas_joint,
                        point_comments + ["value = P_R(theta, phi) in power per square degree"])
        for key, filename in PDF_FILES.items():
            write_marginal_csv(os.path.join(point_dir, filename), getattr(p, key),
                               point_comments + ["value = probability density per degree"])

    write_spreads_csv(os.path.join(scenario_dir, "spreads.csv"), [p.report for p in result.points],
                      comments + ["angle of reception (receive pattern applied)"])
    write_spreads_csv(os.path.join(scenario_dir, "spreads_aoa.csv"), [p.report_aoa for p in result.points],
                      comments + ["angle of arrival (omnidirectional baseline)"])
    rows = [list(p.point.omega) + list(p.peaks.values()) for p in result.points]
    write_csv(os.path.join(scenario_dir, "peaks.csv"), PEAK_COLUMNS, rows,
              comments + ["maxima of the run-averaged marginal spectra in dB"])


def write_artifacts_hdf5(hdf5_name, results):
    """Write all run-averaged arrays to a single hdf5 file."""
    for name, result in results.items():
        for p in result.points:
            prefix = f"{name}/{p.point.name}"
            write_hdf5(hdf5_name, f"{prefix}/pas_joint", p.pas_joint.values)
            write_hdf5(hdf5_name, f"{prefix}/pdf_joint", p.pdf_joint.values)
            for key in list(PDF_FILES) + ["pas_aor_theta", "pas_aor_phi", "pas_aoa_theta", "pas_aoa_phi"]:
                write_hdf5(hdf5_name, f"{prefix}/{key}", getattr(p, key).values)
            write_hdf5(hdf5_name, f"{prefix}/sigma_aor", p.sigma_aor)
            write_hdf5(hdf5_name, f"{prefix}/sigma_aoa", p.sigma_aoa)
        write_hdf5(hdf5_name, f"{name}/theta_centers", result.points[0].pas_joint.theta_centers)
        write_hdf5(hdf5_name, f"{name}/phi_centers", result.points[0].pas_joint.phi_centers)


def make_run_log(config, digest, results):
    """Make the run log with seed, config hash, timings and diagnostics."""
    run_log = {
        "version": aor_sim.__version__,
        "seed": config["seed"],
        "config_hash": digest,
        "runs": config["runs"],
        "random_streams": "shared by all sweep points" if config["common_random_numbers"] else "per sweep point",
        "spreads": "standard deviations of the run-averaged PDFs",
        "scenarios": {},
    }
    for name, result in results.items():
        entry = {
            "clusters": result.profile.num_clusters,
            "rms_delay_spread_ns": result.profile.rms_delay_spread() * 1e9,
            "total_sec": float(sum(result.timings)),
            "timings_sec": [float(t) for t in result.timings],
            "skewness_phi": {p.point.name: float(sum(p.skewness_phi) / p.runs) for p in result.points},
        }
        degradation = result.peak_degradation()
        if len(degradation) != 0:
            entry["peak_degradation_db"] = degradation
        run_log["scenarios"][name] = entry
    return run_log


def run(config_path, overrides=None, jobs=None, show_progress=True, plots=False):
    """Simulate every scenario and sweep point of a configuration and write the outputs.

    Args:
        config_path (str): Yaml format configuration file.
        overrides (dict): Values replacing the file contents (e.g. seed, runs, outdir).
        jobs (int): Number of worker processes (config value if None).
        show_progress (bool): Whether to show progress bars.
        plots (bool): Whether to also write the svg figures.

    Returns:
        RunArtifacts: Artifacts written under the output directory.

    """
    config = load_config(config_path, overrides)
    validate_config(config)
    config["version"] = aor_sim.__version__
    for key, value in config.items():
        logging.info(f"{key} = {value}")

    try:
        simulator = Simulator(config, jobs=config["jobs"] if jobs is None else jobs, show_progress=show_progress)
    except (ValueError, FileNotFoundError) as e:
        raise ConfigError([f"scenarios: {e}"])
    results = simulator.run()

    outdir = config["outdir"]
    created_outdir = not os.path.exists(outdir)
    outputs = [os.path.join(outdir, name) for name in scenario_table(config)]
    outputs += [os.path.join(outdir, f) for f in ["config.yml", "run_log.yml", "artifacts.h5", "sigma_vs_hpbw.svg"]]
    try:
        if not os.path.exists(outdir):
            os.makedirs(outdir)
        digest = config_hash(config)
        comments = [f"aor_sim {aor_sim.__version__}", f"config_hash = {digest}", f"seed = {config['seed']}",
                    f"estimates averaged over {config['runs']} Monte Carlo runs"]
        header = "".join(f"# {line}\n" for line in comments[:2])
        with open(os.path.join(outdir, "config.yml"), "w") as f:
            f.write(header)
            yaml.dump(config, f, Dumper=yaml.Dumper)
        for name, result in results.items():
            write_scenario(result, os.path.join(outdir, name), comments + [f"scenario = {name}"])
        if config["save_hdf5"]:
            write_artifacts_hdf5(os.path.join(outdir, "artifacts.h5"), results)
        with open(os.path.join(outdir, "run_log.yml"), "w") as f:
            f.write(header)
            yaml.dump(make_run_log(config, digest, results), f, Dumper=yaml.Dumper, sort_keys=False)
        artifacts = RunArtifacts.load(outdir)
        if plots:
            # avoid importing matplotlib when plots are disabled
            from aor_sim.bin.plot import emit_plots
            emit_plots(artifacts)
    except BaseException:
        remove_outputs(outdir, outputs, created_outdir)
        raise
    logging.info(f"Successfully wrote outputs to {outdir}.")

    return artifacts


def remove_outputs(outdir, outputs, created_outdir):
    """Remove partially written outputs."""
    for path in outputs:
        if os.path.isdir(path):
            shutil.rmtree(path)
        elif os.path.exists(path):
            os.remove(path)
    if created_outdir and os.path.isdir(outdir) and len(os.listdir(outdir)) == 0:
        os.rmdir(outdir)
    logging.warning(f"Removed partial outputs in {outdir}.")


def main(argv=None):
    """Run simulation process."""
    parser = argparse.ArgumentParser(
        description="Simulate angle-of-reception statistics (See detail in aor_sim/bin/simulate.py).")
    parser.add_argument("--config", type=str, required=True,
                        help="yaml format configuration file.")
    parser.add_argument("--seed", default=None, type=int,
                        help="random seed. overrides the config value. (default=None)")
    parser.add_argument("--runs", default=None, type=int,
                        help="number of Monte Carlo runs. overrides the config value. (default=None)")
    parser.add_argument("--out", "--outdir", dest="outdir", default=None, type=str,
                        help="directory to save outputs. overrides the config value. (default=None)")
    parser.add_argument("--jobs", default=None, type=int,
                        help="number of worker processes. overrides the config value. (default=None)")
    parser.add_argument("--no-plots", default=False, action="store_true",
                        help="do not write svg figures.")
    parser.add_argument("--quiet", default=False, action="store_true",
                        help="same as --verbose 0.")
    parser.add_argument("--verbose", type=int, default=1,
                        help="logging level. higher is more logging. (default=1)")
    args = parser.parse_args(argv)
    if args.quiet:
        args.verbose = 0

    # set logger
    if args.verbose > 1:
        logging.basicConfig(
            level=logging.DEBUG, stream=sys.stdout,
            format="%(asctime)s (%(module)s:%(lineno)d) %(levelname)s: %(message)s")
    elif args.verbose > 0:
        logging.basicConfig(
            level=logging.INFO, stream=sys.stdout,
            format="%(asctime)s (%(module)s:%(lineno)d) %(levelname)s: %(message)s")
    else:
        logging.basicConfig(
            level=logging.WARN, stream=sys.stdout,
            format="%(asctime)s (%(module)s:%(lineno)d) %(levelname)s: %(message)s")
        logging.warning("Skip DEBUG/INFO messages")

    overrides = {"seed": args.seed, "runs": args.runs, "outdir": args.outdir, "jobs": args.jobs}
    try:
        run(args.config, overrides, show_progress=args.verbose > 0, plots=not args.no_plots)
    except ConfigError as e:
        logging.error(str(e))
        return EXIT_CONFIG_ERROR
    except Exception as e:
        logging.error(f"{type(e).__name__}: {e}")
        logging.debug("Traceback:", exc_info=True)
        return EXIT_RUNTIME_ERROR

    return 0


if __name__ == "__main__":
    sys.exit(main())
