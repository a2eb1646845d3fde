# -*- coding: utf-8 -*-

# Copyright 2026 aor_sim contributors
#  MIT License (https://opensource.org/licenses/MIT)

"""Utility functions."""

import copy
import fnmatch
import hashlib
import logging
import os
import warnings

import h5py
import numpy as np
import yaml

from aor_sim.utils.errors import ConfigError

DEFAULT_CONFIG = {
    "scenario_file": None,
    "delay_spread": None,
    "scenarios": None,
    "frequency": 28.0e9,
    "geometry": {
        "distance": 17.0,
    },
    "tx_pattern": {
        "gain_dbi": 15.0,
        "hpbw_theta": 30.0,
        "hpbw_phi": 28.8,
        "alpha": 0.0,
        "omnidirectional": False,
    },
    "rx_pattern": {
        "gain_dbi": 15.0,
        "hpbw_theta": 30.0,
        "hpbw_phi": 28.8,
        "alpha": 0.0,
        "omnidirectional": False,
    },
    "generation": {
        "paths_per_cluster": 50,
        "local_paths": 100,
        "kappa": 3.0,
        "local_power_fraction": 0.02,
        "local_elevation": 88.0,
        "local_elevation_spread": 8.0,
        "min_delay": None,
    },
    "eps_theta": 1.0,
    "eps_phi": 1.0,
    "alpha_sweep": [0.0],
    "hpbw_phi_sweep": [],
    "sweep_tx_with_rx": True,
    "common_random_numbers": False,
    "runs": 200,
    "seed": 1,
    "jobs": 1,
    "outdir": "exp",
    "save_hdf5": False,
}

# keys that do not change simulated values
UNHASHED_KEYS = ["outdir", "jobs", "verbose", "no_plots", "config", "version"]


def find_files(root_dir, query="*.csv", include_root_dir=True):
    """Find files recursively.

    Args:
        root_dir (str): Root root_dir to find.
        query (str): Query to find.
        include_root_dir (bool): If False, root_dir name is not included.

    Returns:
        list: Sorted list of found filenames.

    """
    files = []
    for root, dirnames, filenames in os.walk(root_dir, followlinks=True):
        for filename in fnmatch.filter(filenames, query):
            files.append(os.path.join(root, filename))
    if not include_root_dir:
        files = [file_.replace(root_dir + "/", "") for file_ in files]

    return sorted(files)


def read_hdf5(hdf5_name, hdf5_path):
    """Read hdf5 dataset.

    Args:
        hdf5_name (str): Filename of hdf5 file.
        hdf5_path (str): Dataset name in hdf5 file.

    Return:
        any: Dataset values.

    """
    if not os.path.exists(hdf5_name):
        raise FileNotFoundError(f"There is no such a hdf5 file ({hdf5_name}).")

    with h5py.File(hdf5_name, "r") as hdf5_file:
        if hdf5_path not in hdf5_file:
            raise KeyError(f"There is no such a data in hdf5 file. ({hdf5_path})")
        hdf5_data = hdf5_file[hdf5_path][()]

    return hdf5_data


def write_hdf5(hdf5_name, hdf5_path, write_data, is_overwrite=True):
    """Write dataset to hdf5.

    Args:
        hdf5_name (str): Hdf5 dataset filename.
        hdf5_path (str): Dataset path in hdf5.
        write_data (ndarray): Data to write.
        is_overwrite (bool): Whether to overwrite dataset.

    """
    write_data = np.array(write_data)

    folder_name, _ = os.path.split(hdf5_name)
    if not os.path.exists(folder_name) and len(folder_name) != 0:
        os.makedirs(folder_name)

    mode = "r+" if os.path.exists(hdf5_name) else "w"
    with h5py.File(hdf5_name, mode) as hdf5_file:
        if hdf5_path in hdf5_file:
            if not is_overwrite:
                raise ValueError(f"Dataset {hdf5_path} in hdf5 file already exists. "
                                 "if you want to overwrite, please set is_overwrite = True.")
            logging.debug(f"Dataset {hdf5_path} in hdf5 file already exists. recreate it.")
            del hdf5_file[hdf5_path]
        hdf5_file.create_dataset(hdf5_path, data=write_data)
        hdf5_file.flush()


def write_csv(filename, header, rows, comments=()):
    """Write a CSV file with optional ``#`` metadata lines.

    Values are written with 17 significant digits so that they are read back
    to the identical floats.

    Args:
        filename (str): Output filename.
        header (list): Column names.
        rows (iterable): Rows of numbers (each an iterable).
        comments (iterable): Metadata lines written before the header.

    """
    folder_name = os.path.dirname(filename)
    if len(folder_name) != 0 and not os.path.exists(folder_name):
        os.makedirs(folder_name)
    values = np.array(list(rows), dtype=np.float64).reshape(-1, len(header))
    lines = [f"# {comment}" for comment in comments] + [",".join(header)]
    np.savetxt(filename, values, fmt="%.17g", delimiter=",", newline="\n",
               header="\n".join(lines), comments="", encoding="utf-8")


def read_csv(filename):
    """Read a CSV file written by ``write_csv``.

    Args:
        filename (str): Input filename.

    Returns:
        list: Column names.
        ndarray: Values (#rows, #columns).
        list: Metadata lines without the leading ``#``.

    """
    comments, header, skiprows = [], None, 0
    with open(filename, encoding="utf-8") as f:
        for line in f:
            skiprows += 1
            line = line.strip()
            if line.startswith("#"):
                comments.append(line[1:].strip())
            elif len(line) != 0:
                header = [name.strip() for name in line.split(",")]
                break
    if header is None:
        raise ValueError(f"{filename} has no header row.")
    with warnings.catch_warnings():
        # a table without rows is valid
        warnings.simplefilter("ignore", UserWarning)
        values = np.loadtxt(filename, delimiter=",", comments="#", skiprows=skiprows,
                            ndmin=2, encoding="utf-8")

    return header, values.reshape(-1, len(header)), comments


def _merge_dict(base, override):
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge_dict(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_config(config_path, overrides=None):
    """Load yaml configuration and merge it over the defaults.

    Args:
        config_path (str): Yaml format configuration file.
        overrides (dict): Values replacing the file contents (None values are ignored).

    Returns:
        dict: Resolved configuration.

    """
    if not os.path.exists(config_path):
        raise ConfigError([f"config: no such file ({config_path})"])
    try:
        with open(config_path) as f:
            config = yaml.load(f, Loader=yaml.Loader)
    except yaml.YAMLError as e:
        raise ConfigError([f"config: cannot parse {config_path} ({e})"])
    if config is None:
        config = {}
    if not isinstance(config, dict):
        raise ConfigError([f"config: top level of {config_path} must be a mapping"])
    config = _merge_dict(DEFAULT_CONFIG, config)
    if overrides is not None:
        config.update({k: v for k, v in overrides.items() if v is not None})

    # scenario paths are relative to the config file
    config_dir = os.path.dirname(os.path.abspath(config_path))
    if config["scenario_file"] is not None:
        config["scenario_file"] = _resolve(config_dir, config["scenario_file"])
    if config["scenarios"] is not None and isinstance(config["scenarios"], dict):
        for params in config["scenarios"].values():
            if isinstance(params, dict) and params.get("file") is not None:
                params["file"] = _resolve(config_dir, params["file"])

    return config


def _resolve(config_dir, path):
    if os.path.isabs(path):
        return path
    return os.path.normpath(os.path.join(config_dir, path))


def _check_pattern(name, params, problems):
    if not isinstance(params, dict):
        problems.append(f"{name}: must be a mapping")
        return
    for key in ["gain_dbi", "hpbw_theta", "hpbw_phi", "alpha"]:
        if not isinstance(params.get(key), (int, float)) or not np.isfinite(params[key]):
            problems.append(f"{name}.{key}: must be a finite number")
    for key in ["hpbw_theta", "hpbw_phi"]:
        value = params.get(key)
        if isinstance(value, (int, float)) and not 0.0 < value <= 180.0:
            problems.append(f"{name}.{key}: must be in (0, 180] degrees (got {value})")


def _check_eps(name, value, span, problems):
    if not isinstance(value, (int, float)) or value <= 0:
        problems.append(f"{name}: must be > 0")
        return
    bins = span / (2.0 * value)
    if abs(bins - round(bins)) > 1e-9:
        problems.append(f"{name}: 2 * {name} must divide {span:g} degrees (got {value})")


def scenario_table(config):
    """Return the scenarios of a configuration.

    Args:
        config (dict): Resolved configuration.

    Returns:
        dict: Mapping of scenario name to {"file": str, "delay_spread": float or None}.

    """
    if config["scenarios"] is not None:
        return {name: {"file": params.get("file"), "delay_spread": params.get("delay_spread")}
                for name, params in config["scenarios"].items()}
    name = os.path.splitext(os.path.basename(config["scenario_file"]))[0]
    return {name: {"file": config["scenario_file"], "delay_spread": config["delay_spread"]}}


def validate_config(config):
    """Check a resolved configuration and collect every violated field.

    Args:
        config (dict): Resolved configuration.

    Raises:
        ConfigError: If at least one field is invalid.

    """
    problems = []

    # scenarios
    if config["scenarios"] is None and config["scenario_file"] is None:
        problems.append("scenario_file: either scenario_file or scenarios must be given")
    elif config["scenarios"] is not None and config["scenario_file"] is not None:
        problems.append("scenarios: give either scenario_file or scenarios, not both")
    elif config["scenarios"] is not None and (
            not isinstance(config["scenarios"], dict) or len(config["scenarios"]) == 0):
        problems.append("scenarios: must be a non-empty mapping")
    else:
        for name, params in scenario_table(config).items():
            if params["file"] is None:
                problems.append(f"scenarios.{name}.file: missing")
            elif not os.path.exists(params["file"]):
                problems.append(f"scenarios.{name}.file: no such file ({params['file']})")
            ds = params["delay_spread"]
            if ds is not None and (not isinstance(ds, (int, float)) or ds <= 0):
                problems.append(f"scenarios.{name}.delay_spread: must be > 0 seconds")

    # link and antennas
    if not isinstance(config["geometry"], dict):
        problems.append("geometry: must be a mapping")
    else:
        for key in sorted(set(config["geometry"]) - set(DEFAULT_CONFIG["geometry"])):
            problems.append(f"geometry.{key}: unknown key")
        distance = config["geometry"].get("distance")
        if not isinstance(distance, (int, float)) or distance <= 0:
            problems.append("geometry.distance: must be > 0 meters")
    if not isinstance(config["frequency"], (int, float)) or config["frequency"] <= 0:
        problems.append("frequency: must be > 0 Hz")
    _check_pattern("tx_pattern", config["tx_pattern"], problems)
    _check_pattern("rx_pattern", config["rx_pattern"], problems)

    # generation
    gen = config["generation"]
    if not isinstance(gen, dict):
        problems.append("generation: must be a mapping")
    else:
        for key in sorted(set(gen) - set(DEFAULT_CONFIG["generation"])):
            problems.append(f"generation.{key}: unknown key")
        for key in ["paths_per_cluster", "local_paths"]:
            if not isinstance(gen.get(key), int) or gen[key] < 1:
                problems.append(f"generation.{key}: must be an integer >= 1")
        if not isinstance(gen.get("kappa"), (int, float)) or gen["kappa"] < 0:
            problems.append("generation.kappa: must be >= 0")
        fraction = gen.get("local_power_fraction")
        if not isinstance(fraction, (int, float)) or not 0.0 <= fraction < 1.0:
            problems.append("generation.local_power_fraction: must be in [0, 1)")
        elevation = gen.get("local_elevation")
        if not isinstance(elevation, (int, float)) or not 0.0 <= elevation <= 90.0:
            problems.append("generation.local_elevation: must be in [0, 90] degrees")
        spread = gen.get("local_elevation_spread")
        if not isinstance(spread, (int, float)) or spread < 0:
            problems.append("generation.local_elevation_spread: must be >= 0 degrees")
        min_delay = gen.get("min_delay")
        if min_delay is not None and (not isinstance(min_delay, (int, float)) or min_delay <= 0):
            problems.append("generation.min_delay: must be null or > 0 seconds")

    # estimation grid
    _check_eps("eps_theta", config["eps_theta"], 90.0, problems)
    _check_eps("eps_phi", config["eps_phi"], 360.0, problems)

    # sweeps and monte carlo
    for key in ["alpha_sweep", "hpbw_phi_sweep"]:
        if not isinstance(config[key], (list, tuple)):
            problems.append(f"{key}: must be a list")
    if isinstance(config["alpha_sweep"], (list, tuple)) and isinstance(config["hpbw_phi_sweep"], (list, tuple)):
        if len(config["alpha_sweep"]) + len(config["hpbw_phi_sweep"]) == 0:
            problems.append("alpha_sweep: at least one sweep point is required")
        for value in config["hpbw_phi_sweep"]:
            if not isinstance(value, (int, float)) or not 0.0 < value <= 180.0:
                problems.append(f"hpbw_phi_sweep: {value} is not in (0, 180] degrees")
        for value in config["alpha_sweep"]:
            if not isinstance(value, (int, float)) or not np.isfinite(value):
                problems.append(f"alpha_sweep: {value} is not a finite number")
        for key in ["alpha_sweep", "hpbw_phi_sweep"]:
            if len(set(config[key])) != len(config[key]):
                problems.append(f"{key}: values must be unique")
    for key in ["sweep_tx_with_rx", "common_random_numbers", "save_hdf5"]:
        if not isinstance(config[key], bool):
            problems.append(f"{key}: must be true or false")
    if not isinstance(config["runs"], int) or config["runs"] < 1:
        problems.append("runs: must be an integer >= 1")
    if not isinstance(config["seed"], int) or not 0 <= config["seed"] < 2 ** 64:
        problems.append("seed: must be an unsigned 64-bit integer")
    if not isinstance(config["jobs"], int) or config["jobs"] < 1:
        problems.append("jobs: must be an integer >= 1")

    if len(problems) != 0:
        raise ConfigError(problems)


def config_hash(config):
    """Return the SHA-256 digest of a configuration.

    Keys that do not change the simulated values (output and parallelism settings)
    are excluded.

    Args:
        config (dict): Resolved configuration.

    Returns:
        str: Hex digest (first 16 characters).

    """
    hashed = {k: v for k, v in config.items() if k not in UNHASHED_KEYS}
    text = yaml.dump(hashed, Dumper=yaml.Dumper, sort_keys=True, default_flow_style=False)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]
