# -*- coding: utf-8 -*-

# Copyright 2026 aor_sim contributors
#  MIT License (https://opensource.org/licenses/MIT)

"""Power delay profile modules.

A scenario is driven by the time clusters of a power delay profile (PDP) or
power delay spectrum (PDS). Files on disk are two-column CSV tables with the
delay in nanoseconds (``delay_ns``) or normalized units (``delay_norm``) and
the power in dB (``power_db``). Internally delays are seconds and powers linear.

"""

import logging
import os

import numpy as np

from aor_sim.antennas.gaussian_beam import lin
from aor_sim.utils import DegenerateTraceError
from aor_sim.utils import DomainError
from aor_sim.utils import EmptyInputError
from aor_sim.utils import ProfileOrderError
from aor_sim.utils import ProfileParseError
from aor_sim.utils import write_csv

DELAY_COLUMNS = {
    "delay_ns": 1e9,
    "delay_norm": 1.0,
}
POWER_COLUMN = "power_db"


class PdsTrace(object):
    """Sampled power delay spectrum."""

    def __init__(self, delays, powers, normalized=False):
        """Initialize power delay spectrum.

        Args:
            delays (array-like): Delays in seconds (or normalized units), strictly increasing.
            powers (array-like): Linear powers (>= 0).
            normalized (bool): Whether delays are dimensionless.

        """
        delays = np.asarray(delays, dtype=np.float64).reshape(-1)
        powers = np.asarray(powers, dtype=np.float64).reshape(-1)
        if len(delays) == 0:
            raise EmptyInputError("power delay spectrum has no samples.")
        if len(delays) != len(powers):
            raise ValueError(f"delays and powers have different lengths ({len(delays)} vs {len(powers)}).")
        if np.any(np.diff(delays) <= 0):
            raise ProfileOrderError("delays must be strictly increasing.")
        if np.any(powers < 0) or not np.all(np.isfinite(powers)):
            raise DomainError("powers must be finite and >= 0.")
        self.delays = delays
        self.powers = powers
        self.normalized = normalized

    def __len__(self):
        """Return the number of samples."""
        return len(self.delays)


class ClusterProfile(object):
    """Ordered time clusters (excess delay, linear power)."""

    def __init__(self, delays, powers, normalized=False):
        """Initialize cluster profile.

        Args:
            delays (array-like): Excess delays in seconds (or normalized units).
                Must be strictly increasing and start at >= 0.
            powers (array-like): Linear cluster powers (> 0).
            normalized (bool): Whether delays are dimensionless and still need
                ``scale_delays`` before they can be used geometrically.

        """
        delays = np.asarray(delays, dtype=np.float64).reshape(-1)
        powers = np.asarray(powers, dtype=np.float64).reshape(-1)
        if len(delays) == 0:
            raise EmptyInputError("cluster profile needs at least one cluster.")
        if len(delays) != len(powers):
            raise ValueError(f"delays and powers have different lengths ({len(delays)} vs {len(powers)}).")
        if delays[0] < 0:
            raise DomainError(f"first excess delay must be >= 0 (got {delays[0]}).")
        if np.any(np.diff(delays) <= 0):
            raise ProfileOrderError("cluster delays must be strictly increasing.")
        if np.any(powers <= 0) or not np.all(np.isfinite(powers)):
            raise DomainError("cluster powers must be finite and > 0.")
        self.delays = delays
        self.powers = powers
        self.normalized = normalized

    @property
    def num_clusters(self):
        """Return the number of clusters N."""
        return len(self.delays)

    @property
    def clusters(self):
        """Return the list of (delay, power) pairs."""
        return list(zip(self.delays.tolist(), self.powers.tolist()))

    def __len__(self):
        """Return the number of clusters."""
        return len(self.delays)

    def rms_delay_spread(self):
        """Return the power-weighted RMS delay spread."""
        weights = self.powers / self.powers.sum()
        mean = np.sum(weights * self.delays)
        return float(np.sqrt(max(np.sum(weights * self.delays ** 2) - mean ** 2, 0.0)))


def parse_profile(file_path, format="cluster_table"):
    """Parse a power delay profile file.

    Args:
        file_path (str): CSV file with header ``delay_ns,power_db`` (or ``delay_norm,power_db``).
        format (str): "cluster_table" or "pds_trace".

    Returns:
        ClusterProfile or PdsTrace: Parsed profile in file order.

    """
    if format not in ["cluster_table", "pds_trace"]:
        raise ValueError(f"support only cluster_table or pds_trace format (got {format}).")
    if not os.path.exists(file_path):
        raise FileNotFoundError(f"There is no such a profile file ({file_path}).")

    header, scale = None, None
    delays, powers, line_numbers = [], [], []
    with open(file_path, encoding="utf-8") as f:
        for line_number, line in enumerate(f, 1):
            line = line.strip()
            if len(line) == 0 or line.startswith("#"):
                continue
            fields = [field.strip() for field in line.split(",")]
            if header is None:
                header = fields
                if len(header) != 2 or header[0] not in DELAY_COLUMNS or header[1] != POWER_COLUMN:
                    raise ProfileParseError(
                        f"header must be 'delay_ns,power_db' or 'delay_norm,power_db' (got '{line}').",
                        line_number)
                scale = DELAY_COLUMNS[header[0]]
                continue
            if len(fields) != 2:
                raise ProfileParseError(f"expected 2 columns but found {len(fields)}.", line_number)
            try:
                delay, power_db = float(fields[0]), float(fields[1])
            except ValueError:
                raise ProfileParseError(f"cannot parse '{line}' as numbers.", line_number)
            if not np.isfinite(delay) or np.isnan(power_db) or power_db == np.inf:
                raise ProfileParseError(f"non-finite value in '{line}'.", line_number)
            if delay < 0:
                raise ProfileParseError(f"negative delay {delay}.", line_number)
            if format == "cluster_table" and power_db == -np.inf:
                raise ProfileParseError("cluster power must be > 0 (got -inf dB).", line_number)
            if len(delays) != 0 and delay / scale <= delays[-1]:
                raise ProfileOrderError(
                    f"line {line_number}: delay {fields[0]} is not greater than the previous delay "
                    f"(line {line_numbers[-1]}).")
            delays.append(delay / scale)
            powers.append(lin(power_db))
            line_numbers.append(line_number)

    if len(delays) == 0:
        raise EmptyInputError(f"{file_path} contains no profile rows.")
    normalized = header[0] == "delay_norm"
    logging.debug(f"Loaded {len(delays)} rows from {file_path}.")

    if format == "cluster_table":
        return ClusterProfile(delays, powers, normalized=normalized)
    return PdsTrace(delays, powers, normalized=normalized)


def write_profile(profile, file_path, comments=()):
    """Write a cluster profile or trace in the format read by ``parse_profile``.

    Args:
        profile (ClusterProfile or PdsTrace): Profile to write.
        file_path (str): Output CSV filename.
        comments (iterable): Metadata lines written as ``#`` comments.

    """
    column = "delay_norm" if profile.normalized else "delay_ns"
    scale = DELAY_COLUMNS[column]
    with np.errstate(divide="ignore"):
        powers_db = 10.0 * np.log10(profile.powers)
    write_csv(file_path, [column, POWER_COLUMN], np.column_stack([profile.delays * scale, powers_db]), comments)


def extract_clusters(trace):
    """Extract time clusters from the local maxima of a power delay spectrum.

    A sample is a maximum when it is strictly greater than both neighbours,
    boundary samples need only exceed their single neighbour, and a plateau
    contributes one cluster at its first sample.

    Args:
        trace (PdsTrace): Power delay spectrum.

    Returns:
        ClusterProfile: Clusters with delays relative to the first extracted cluster.

    """
    powers = trace.powers
    if len(powers) == 0:
        raise EmptyInputError("power delay spectrum has no samples.")
    if len(powers) == 1:
        return ClusterProfile([0.0], powers.copy(), normalized=trace.normalized)

    # collapse runs of equal samples into plateaus
    starts = np.concatenate([[0], np.flatnonzero(np.diff(powers) != 0) + 1])
    if len(starts) == 1:
        raise DegenerateTraceError("all samples of the power delay spectrum are equal.")
    levels = powers[starts]
    left = np.concatenate([[-np.inf], levels[:-1]])
    right = np.concatenate([levels[1:], [-np.inf]])
    peaks = starts[(levels > left) & (levels > right)]

    delays = trace.delays[peaks]
    return ClusterProfile(delays - delays[0], powers[peaks], normalized=trace.normalized)


def scale_delays(profile, delay_spread):
    """Scale normalized cluster delays by a delay spread.

    Args:
        profile (ClusterProfile): Profile with normalized delays.
        delay_spread (float): Delay spread in seconds.

    Returns:
        ClusterProfile: Profile with delays in seconds.

    """
    if not delay_spread > 0:
        raise DomainError(f"delay spread must be > 0 (got {delay_spread}).")
    return ClusterProfile(profile.delays * delay_spread, profile.powers.copy(), normalized=False)


def normalize_powers(profile):
    """Renormalize cluster powers so that they sum to one."""
    return ClusterProfile(profile.delays.copy(), profile.powers / profile.powers.sum(),
                          normalized=profile.normalized)
