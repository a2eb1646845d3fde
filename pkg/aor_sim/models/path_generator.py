# -*- coding: utf-8 -*-

# Copyright 2026 aor_sim contributors
#  MIT License (https://opensource.org/licenses/MIT)

"""Propagation path generator.

Produces the elevation, azimuth and power sets of the propagation paths seen
around the receiver: delayed cluster paths whose scatterers lie on the
half-ellipsoids of the power delay profile, shaped by the transmit antenna
pattern, plus local scattering paths (cluster index 0) with von Mises
distributed azimuths.

"""

import logging

from collections import namedtuple

import numpy as np

from aor_sim.antennas import gain
from aor_sim.antennas import wrap_angle
from aor_sim.geometry import arrival_angles
from aor_sim.geometry import departure_angles
from aor_sim.geometry import ellipsoid_from_delay
from aor_sim.geometry import sample_surface_points
from aor_sim.profiles import normalize_powers
from aor_sim.utils import DomainError
from aor_sim.utils import EmptyInputError
from aor_sim.utils import SamplingStallError

PathComponent = namedtuple("PathComponent", ["i", "j", "theta", "phi", "power"])

MAX_CONSECUTIVE_REJECTIONS = 1000000


class GenerationConfig(object):
    """Parameters of the path generation."""

    def __init__(self,
                 paths_per_cluster=50,
                 local_paths=100,
                 kappa=3.0,
                 local_power_fraction=0.02,
                 distance=17.0,
                 local_elevation=88.0,
                 local_elevation_spread=8.0,
                 min_delay=None,
                 ):
        """Initialize generation config.

        Args:
            paths_per_cluster (int): Number of paths M_i per delayed cluster.
            local_paths (int): Number of local scattering paths M_0.
            kappa (float): Von Mises concentration of local scattering azimuths.
            local_power_fraction (float): Share of the total power carried by local scattering.
            distance (float): Tx-Rx distance in meters.
            local_elevation (float): Zenith angle of local scattering paths in degrees.
            local_elevation_spread (float): Standard deviation in degrees of the local
                scattering zenith angles around ``local_elevation`` (0 keeps them fixed).
            min_delay (float): Excess delay in seconds used for clusters at zero delay.
                If None, such clusters (e.g., the first tap of a normalized table)
                are skipped and the remaining clusters share their power.

        """
        problems = []
        if int(paths_per_cluster) != paths_per_cluster or paths_per_cluster < 1:
            problems.append(f"paths_per_cluster must be an integer >= 1 (got {paths_per_cluster})")
        if int(local_paths) != local_paths or local_paths < 1:
            problems.append(f"local_paths must be an integer >= 1 (got {local_paths})")
        if not kappa >= 0:
            problems.append(f"kappa must be >= 0 (got {kappa})")
        if not 0.0 <= local_power_fraction < 1.0:
            problems.append(f"local_power_fraction must be in [0, 1) (got {local_power_fraction})")
        if not distance > 0:
            problems.append(f"distance must be > 0 (got {distance})")
        if not 0.0 <= local_elevation <= 90.0:
            problems.append(f"local_elevation must be in [0, 90] (got {local_elevation})")
        if not local_elevation_spread >= 0:
            problems.append(f"local_elevation_spread must be >= 0 (got {local_elevation_spread})")
        if min_delay is not None and not min_delay > 0:
            problems.append(f"min_delay must be None or > 0 (got {min_delay})")
        if len(problems) != 0:
            raise DomainError("; ".join(problems))
        self.paths_per_cluster = int(paths_per_cluster)
        self.local_paths = int(local_paths)
        self.kappa = float(kappa)
        self.local_power_fraction = float(local_power_fraction)
        self.distance = float(distance)
        self.local_elevation = float(local_elevation)
        self.local_elevation_spread = float(local_elevation_spread)
        self.min_delay = None if min_delay is None else float(min_delay)

    @classmethod
    def from_config(cls, config):
        """Build from a resolved simulation config."""
        return cls(distance=config["geometry"]["distance"], **config["generation"])


class PathSet(object):
    """Columns of a set of propagation paths."""

    def __init__(self, cluster, path, theta, phi, power, departure_theta=None, departure_phi=None, delay=None):
        """Initialize path set.

        Args:
            cluster (ndarray): Cluster index i of each path (0 = local scattering).
            path (ndarray): Path index j within the cluster (1-based).
            theta (ndarray): Arrival zenith angles in degrees.
            phi (ndarray): Arrival azimuths in degrees.
            power (ndarray): Linear path powers.
            departure_theta (ndarray): Departure zenith angles in degrees (cluster paths only).
            departure_phi (ndarray): Departure azimuths in degrees (cluster paths only).
            delay (ndarray): Excess delay in seconds of each path.

        """
        n = len(theta)
        self.cluster = np.asarray(cluster, dtype=np.int64)
        self.path = np.asarray(path, dtype=np.int64)
        self.theta = np.asarray(theta, dtype=np.float64)
        self.phi = np.asarray(phi, dtype=np.float64)
        self.power = np.asarray(power, dtype=np.float64)
        self.departure_theta = np.full(n, np.nan) if departure_theta is None else np.asarray(departure_theta)
        self.departure_phi = np.full(n, np.nan) if departure_phi is None else np.asarray(departure_phi)
        self.delay = np.zeros(n) if delay is None else np.asarray(delay, dtype=np.float64)
        assert all(len(x) == n for x in [self.cluster, self.path, self.phi, self.power]), \
            "all path columns must have the same length."

    def __len__(self):
        """Return the number of paths."""
        return len(self.theta)

    def __iter__(self):
        """Iterate over PathComponent tuples."""
        for values in zip(self.cluster.tolist(), self.path.tolist(),
                          self.theta.tolist(), self.phi.tolist(), self.power.tolist()):
            yield PathComponent(*values)

    @property
    def components(self):
        """Return the list of PathComponent tuples."""
        return list(self)

    @property
    def total_power(self):
        """Return the sum of path powers."""
        return float(np.sum(self.power))

    @classmethod
    def concatenate(cls, sets):
        """Concatenate path sets column-wise."""
        sets = [s for s in sets if len(s) != 0]
        if len(sets) == 0:
            return cls([], [], [], [], [])
        columns = ["cluster", "path", "theta", "phi", "power", "departure_theta", "departure_phi", "delay"]
        return cls(*[np.concatenate([getattr(s, c) for s in sets]) for c in columns])


class PathEnsemble(PathSet):
    """All propagation paths of one channel realization."""

    def __init__(self, paths, num_clusters, paths_per_cluster):
        """Initialize path ensemble.

        Args:
            paths (PathSet): Path columns.
            num_clusters (int): Number of delayed clusters N.
            paths_per_cluster (list): Path counts [M_0, M_1, ..., M_N].

        """
        super(PathEnsemble, self).__init__(
            paths.cluster, paths.path, paths.theta, paths.phi, paths.power,
            paths.departure_theta, paths.departure_phi, paths.delay)
        self.num_clusters = int(num_clusters)
        self.paths_per_cluster = list(paths_per_cluster)
        assert len(self) == sum(self.paths_per_cluster), \
            f"ensemble has {len(self)} paths but counts sum to {sum(self.paths_per_cluster)}."


def generate_cluster_paths(profile, geom, tx, cfg, rng):
    """Generate delayed cluster paths shaped by the transmit antenna pattern.

    For each cluster, scatterers are drawn uniformly by area on its
    half-ellipsoid and accepted with probability g_T^2(departure) / G_T, so
    that every accepted path carries the same power P_i / M.

    Args:
        profile (ClusterProfile): Cluster profile with delays in seconds.
        geom (LinkGeometry): Link geometry.
        tx (AntennaPattern): Transmit antenna pattern.
        cfg (GenerationConfig): Generation parameters.
        rng (numpy.random.Generator): Random stream.

    Returns:
        PathSet: Cluster paths (i >= 1).

    """
    if profile.normalized:
        raise DomainError("profile delays are normalized; apply scale_delays first.")
    m = cfg.paths_per_cluster
    sets = []
    for i, (tau, power) in enumerate(zip(profile.delays, profile.powers), 1):
        if not tau > 0:
            if cfg.min_delay is None:
                # degenerate half-ellipsoid
                logging.debug(f"Skipped cluster {i} at zero excess delay.")
                continue
            tau = cfg.min_delay
        ellipsoid = ellipsoid_from_delay(geom, tau)
        points = _sample_shaped_points(ellipsoid, geom, tx, m, rng, i)
        d_theta, d_phi = departure_angles(points, geom)
        theta, phi = arrival_angles(points, geom)
        sets.append(PathSet(
            cluster=np.full(m, i),
            path=np.arange(1, m + 1),
            theta=theta,
            phi=phi,
            power=np.full(m, power / m),
            departure_theta=d_theta,
            departure_phi=d_phi,
            delay=np.full(m, tau),
        ))
    logging.debug(f"Generated {m} paths for each of {len(sets)} clusters.")

    return PathSet.concatenate(sets)


def _sample_shaped_points(ellipsoid, geom, tx, n, rng, cluster_index):
    if tx.omnidirectional:
        return sample_surface_points(ellipsoid, n, rng)

    accepted = []
    remaining = n
    rate = 1.0
    since_last = 0
    while remaining > 0:
        batch = int(min(max(np.ceil(1.2 * remaining / rate), 64), 200000))
        points = sample_surface_points(ellipsoid, batch, rng)
        d_theta, d_phi = departure_angles(points, geom)
        keep = rng.random(batch) * tx.G < gain(tx, d_theta, d_phi)
        idx = np.flatnonzero(keep)
        if len(idx) == 0:
            since_last += batch
            if since_last > MAX_CONSECUTIVE_REJECTIONS:
                raise SamplingStallError(
                    f"cluster {cluster_index}: more than {MAX_CONSECUTIVE_REJECTIONS} consecutive "
                    f"candidates were rejected by the transmit pattern ({tx}).")
            rate = max(rate / 10.0, 1e-4)
            continue
        since_last = batch - 1 - idx[-1]
        rate = max(len(idx) / batch, 1e-4)
        idx = idx[:remaining]
        accepted.append(points[idx])
        remaining -= len(idx)

    return np.concatenate(accepted)


def sample_von_mises(mu, kappa, n, rng):
    """Sample von Mises distributed angles by rejection.

    This is the algorithm of Best and Fisher (1979), a rejection sampler with a
    wrapped Cauchy envelope.

    Args:
        mu (float): Mean direction in radians.
        kappa (float): Concentration (>= 0).
        n (int): Number of samples.
        rng (numpy.random.Generator): Random stream.

    Returns:
        ndarray: Angles in radians within [-pi, pi).

    """
    if not kappa >= 0:
        raise DomainError(f"kappa must be >= 0 (got {kappa}).")
    if kappa == 0:
        x = 2.0 * np.pi * rng.random(n) - np.pi
        return np.mod(x + mu + np.pi, 2.0 * np.pi) - np.pi

    if kappa < 1e-5:
        # second order Taylor expansion around 0 for small kappa
        r = 1.0 / kappa + kappa
    else:
        tau = 1.0 + np.sqrt(1.0 + 4.0 * kappa ** 2)
        rho = (tau - np.sqrt(2.0 * tau)) / (2.0 * kappa)
        r = (1.0 + rho ** 2) / (2.0 * rho)

    samples = []
    remaining = n
    while remaining > 0:
        batch = 2 * remaining + 16
        u1, u2, u3 = rng.random((3, batch))
        z = np.cos(np.pi * u1)
        f = (1.0 + r * z) / (r + z)
        c = kappa * (r - f)
        with np.errstate(divide="ignore"):
            accept = (c * (2.0 - c) - u2 > 0) | (np.log(c / u2) + 1.0 - c >= 0)
        x = np.sign(u3 - 0.5) * np.arccos(np.clip(f, -1.0, 1.0))
        x = x[accept][:remaining]
        samples.append(x)
        remaining -= len(x)

    x = np.concatenate(samples)
    return np.mod(x + mu + np.pi, 2.0 * np.pi) - np.pi


def generate_local_scatter(cfg, rng):
    """Generate local scattering paths (cluster index 0).

    Azimuths are von Mises distributed around azimuth 0. Zenith angles are
    normal around the local elevation, folded back into [0, 90]; a zero
    spread keeps them fixed.

    Args:
        cfg (GenerationConfig): Generation parameters.
        rng (numpy.random.Generator): Random stream.

    Returns:
        PathSet: Local scattering paths.

    """
    m = cfg.local_paths
    phi = wrap_angle(np.degrees(sample_von_mises(0.0, cfg.kappa, m, rng)))
    theta = np.full(m, cfg.local_elevation)
    if cfg.local_elevation_spread > 0:
        theta = theta + cfg.local_elevation_spread * rng.standard_normal(m)
        theta = np.where(theta > 90.0, 180.0 - theta, theta)
        theta = np.abs(theta)
    return PathSet(
        cluster=np.zeros(m, dtype=np.int64),
        path=np.arange(1, m + 1),
        theta=theta,
        phi=np.atleast_1d(phi),
        power=np.full(m, cfg.local_power_fraction / m),
    )


def assemble_ensemble(cluster_paths, local_paths):
    """Join cluster and local scattering paths into a normalized ensemble.

    Local scattering keeps its power share f; cluster path powers are
    rescaled to carry the remaining 1 - f. Local paths carrying no power are
    dropped.

    Args:
        cluster_paths (PathSet): Paths with i >= 1.
        local_paths (PathSet): Paths with i = 0.

    Returns:
        PathEnsemble: Ensemble with total power 1.

    """
    local_total = local_paths.total_power if local_paths is not None else 0.0
    cluster_total = cluster_paths.total_power if cluster_paths is not None else 0.0
    if local_total <= 0:
        local_paths = None
    if cluster_total <= 0:
        cluster_paths = None
    if cluster_paths is None and local_paths is None:
        raise EmptyInputError("ensemble has neither cluster nor local scattering paths.")

    sets = []
    counts = [0]
    if local_paths is not None:
        fraction = local_total if cluster_paths is not None else 1.0
        local_paths = PathSet.concatenate([local_paths])
        local_paths.power = local_paths.power * (fraction / local_total)
        sets.append(local_paths)
        counts[0] = len(local_paths)
    else:
        fraction = 0.0
    num_clusters = 0
    if cluster_paths is not None:
        cluster_paths = PathSet.concatenate([cluster_paths])
        cluster_paths.power = cluster_paths.power * ((1.0 - fraction) / cluster_total)
        sets.append(cluster_paths)
        num_clusters = int(cluster_paths.cluster.max())
        counts += [int(np.sum(cluster_paths.cluster == i)) for i in range(1, num_clusters + 1)]

    return PathEnsemble(PathSet.concatenate(sets), num_clusters, counts)


def generate_ensemble(profile, geom, tx, cfg, rng):
    """Generate one channel realization.

    Args:
        profile (ClusterProfile): Cluster profile with delays in seconds.
        geom (LinkGeometry): Link geometry.
        tx (AntennaPattern): Transmit antenna pattern.
        cfg (GenerationConfig): Generation parameters.
        rng (numpy.random.Generator): Random stream.

    Returns:
        PathEnsemble: Normalized ensemble.

    """
    profile = normalize_powers(profile)
    cluster_paths = generate_cluster_paths(profile, geom, tx, cfg, rng)
    local_paths = generate_local_scatter(cfg, rng)
    return assemble_ensemble(cluster_paths, local_paths)
