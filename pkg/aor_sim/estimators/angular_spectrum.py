# -*- coding: utf-8 -*-

# Copyright 2026 aor_sim contributors
#  MIT License (https://opensource.org/licenses/MIT)

"""Power angular spectrum and angle-of-reception PDF estimators.

Path powers are weighted by the receive power pattern, then accumulated on a
regular histogram of half-open bins [center - eps, center + eps). The last
zenith bin is closed at 90 degrees. Dividing the bin power sums by the bin
area gives the power angular spectrum, dividing additionally by the total
power gives the PDF of the angle of reception.

"""

import copy

import numpy as np

from aor_sim.antennas import gain
from aor_sim.antennas import wrap_angle
from aor_sim.utils import DegenerateDistributionError
from aor_sim.utils import EmptyInputError
from aor_sim.utils import GridSpecificationError
from aor_sim.utils import read_csv
from aor_sim.utils import write_csv

THETA_RANGE = (0.0, 90.0)
PHI_RANGE = (-180.0, 180.0)


def make_edges(eps, lower, upper):
    """Make bin edges of width 2 * eps covering [lower, upper].

    Args:
        eps (float): Bin half-width in degrees.
        lower (float): Lower bound in degrees.
        upper (float): Upper bound in degrees.

    Returns:
        ndarray: Bin edges (#bins + 1,).

    """
    if not eps > 0:
        raise GridSpecificationError(f"bin half-width must be > 0 (got {eps}).")
    num_bins = (upper - lower) / (2.0 * eps)
    if abs(num_bins - round(num_bins)) > 1e-9 or round(num_bins) < 1:
        raise GridSpecificationError(
            f"bin width {2 * eps:g} does not divide [{lower:g}, {upper:g}] into an integer number of bins.")
    num_bins = int(round(num_bins))
    edges = lower + 2.0 * eps * np.arange(num_bins + 1)
    edges[-1] = upper
    return edges


def bin_index(values, edges, closed_upper=False):
    """Return the bin index of each value for half-open bins [edge_k, edge_k+1).

    Args:
        values (ndarray): Values in degrees.
        edges (ndarray): Bin edges.
        closed_upper (bool): Whether the last bin also contains the upper edge.

    Returns:
        ndarray: Bin indices.

    """
    index = np.searchsorted(edges, values, side="right") - 1
    if closed_upper:
        index = np.where(values == edges[-1], len(edges) - 2, index)
    assert np.all((index >= 0) & (index < len(edges) - 1)), "angle outside of the binned domain."
    return index


class WeightedEnsemble(object):
    """Propagation paths with powers weighted by the receive pattern."""

    def __init__(self, theta, phi, power, original_power, cluster=None, path=None):
        """Initialize weighted ensemble.

        Args:
            theta (ndarray): Arrival zenith angles in degrees.
            phi (ndarray): Arrival azimuths in degrees.
            power (ndarray): Weighted powers P_R.
            original_power (ndarray): Powers before weighting.
            cluster (ndarray): Cluster index of each path.
            path (ndarray): Path index of each path.

        """
        self.theta = np.asarray(theta, dtype=np.float64)
        self.phi = np.asarray(phi, dtype=np.float64)
        self.power = np.asarray(power, dtype=np.float64)
        self.original_power = np.asarray(original_power, dtype=np.float64)
        n = len(self.theta)
        self.cluster = np.zeros(n, dtype=np.int64) if cluster is None else np.asarray(cluster)
        self.path = np.arange(1, n + 1) if path is None else np.asarray(path)

    @property
    def total(self):
        """Return the received power estimate P_0 (sum of weighted powers)."""
        return float(np.sum(self.power))

    def __len__(self):
        """Return the number of paths."""
        return len(self.theta)

    def subset(self, index):
        """Return the paths selected by an index array or slice."""
        return WeightedEnsemble(self.theta[index], self.phi[index], self.power[index],
                                self.original_power[index], self.cluster[index], self.path[index])


class AngularSpectrumGrid(object):
    """Binned joint power angular spectrum P_R(theta, phi)."""

    def __init__(self, eps_theta, eps_phi, power_sums):
        """Initialize grid.

        Args:
            eps_theta (float): Zenith bin half-width in degrees.
            eps_phi (float): Azimuth bin half-width in degrees.
            power_sums (ndarray): Power sum of each bin (#theta_bins, #phi_bins).

        """
        self.eps_theta = float(eps_theta)
        self.eps_phi = float(eps_phi)
        self.theta_edges = make_edges(eps_theta, *THETA_RANGE)
        self.phi_edges = make_edges(eps_phi, *PHI_RANGE)
        self.theta_centers = self.theta_edges[:-1] + eps_theta
        self.phi_centers = self.phi_edges[:-1] + eps_phi
        self.power_sums = np.asarray(power_sums, dtype=np.float64)
        assert self.power_sums.shape == (len(self.theta_centers), len(self.phi_centers)), \
            f"power sums {self.power_sums.shape} do not match the grid."

    @property
    def bin_area(self):
        """Return the bin area 4 eps_theta eps_phi in square degrees."""
        return 4.0 * self.eps_theta * self.eps_phi

    @property
    def values(self):
        """Return the power angular spectrum in power per square degree."""
        return self.power_sums / self.bin_area

    @property
    def total_power(self):
        """Return the total binned power."""
        return float(self.power_sums.sum())


class PdfEstimate(object):
    """Binned PDF of the angle of reception (joint or marginal)."""

    def __init__(self, kind, eps_theta, eps_phi, values, normalizer):
        """Initialize PDF estimate.

        Args:
            kind (str): "joint", "theta" or "phi".
            eps_theta (float): Zenith bin half-width in degrees.
            eps_phi (float): Azimuth bin half-width in degrees.
            values (ndarray): Density per degree (marginal) or square degree (joint).
            normalizer (float): Normalizing constant C_0, C_theta or C_phi applied.

        """
        assert kind in ["joint", "theta", "phi"], f"unknown PDF kind {kind}."
        self.kind = kind
        self.eps_theta = float(eps_theta)
        self.eps_phi = float(eps_phi)
        self.theta_edges = make_edges(eps_theta, *THETA_RANGE)
        self.phi_edges = make_edges(eps_phi, *PHI_RANGE)
        self.theta_centers = self.theta_edges[:-1] + eps_theta
        self.phi_centers = self.phi_edges[:-1] + eps_phi
        self.values = np.asarray(values, dtype=np.float64)
        self.normalizer = float(normalizer)

    @property
    def centers(self):
        """Return the bin centers of a marginal PDF."""
        return self.theta_centers if self.kind == "theta" else self.phi_centers

    @property
    def bin_width(self):
        """Return the bin width (marginal) or area (joint)."""
        if self.kind == "joint":
            return 4.0 * self.eps_theta * self.eps_phi
        return 2.0 * (self.eps_theta if self.kind == "theta" else self.eps_phi)

    def integral(self):
        """Return the rectangle-rule integral over the angular domain."""
        return float(self.values.sum() * self.bin_width)


class MarginalSpectrum(object):
    """Binned marginal power angular spectrum P_R(theta) or P_R(phi)."""

    def __init__(self, kind, eps, power_sums):
        """Initialize marginal spectrum.

        Args:
            kind (str): "theta" or "phi".
            eps (float): Bin half-width in degrees.
            power_sums (ndarray): Power sum of each bin.

        """
        assert kind in ["theta", "phi"], f"unknown spectrum kind {kind}."
        self.kind = kind
        self.eps = float(eps)
        self.edges = make_edges(eps, *(THETA_RANGE if kind == "theta" else PHI_RANGE))
        self.centers = self.edges[:-1] + eps
        self.power_sums = np.asarray(power_sums, dtype=np.float64)

    @property
    def values(self):
        """Return the spectrum in power per degree."""
        return self.power_sums / (2.0 * self.eps)


def apply_rx_pattern(ensemble, rx):
    """Weight path powers by the receive power pattern.

    Args:
        ensemble (PathSet): Propagation paths.
        rx (AntennaPattern): Receive antenna pattern.

    Returns:
        WeightedEnsemble: Paths with P_R = P g_R^2(theta, phi).

    """
    weights = gain(rx, ensemble.theta, ensemble.phi)
    return WeightedEnsemble(ensemble.theta, ensemble.phi, ensemble.power * weights, ensemble.power,
                            ensemble.cluster, ensemble.path)


def _theta_bins(w, eps_theta):
    edges = make_edges(eps_theta, *THETA_RANGE)
    return bin_index(w.theta, edges, closed_upper=True), len(edges) - 1


def _phi_bins(w, eps_phi):
    edges = make_edges(eps_phi, *PHI_RANGE)
    return bin_index(np.atleast_1d(wrap_angle(w.phi)), edges), len(edges) - 1


def estimate_pas(w, eps_theta=1.0, eps_phi=1.0):
    """Estimate the joint power angular spectrum.

    Args:
        w (WeightedEnsemble): Weighted paths.
        eps_theta (float): Zenith bin half-width in degrees.
        eps_phi (float): Azimuth bin half-width in degrees.

    Returns:
        AngularSpectrumGrid: Binned spectrum.

    """
    i_theta, n_theta = _theta_bins(w, eps_theta)
    i_phi, n_phi = _phi_bins(w, eps_phi)
    sums = np.bincount(i_theta * n_phi + i_phi, weights=w.power, minlength=n_theta * n_phi)
    return AngularSpectrumGrid(eps_theta, eps_phi, sums.reshape(n_theta, n_phi))


def merge_grids(grids):
    """Merge spectra accumulated over disjoint partitions of an ensemble."""
    if len(grids) == 0:
        raise EmptyInputError("no grids to merge.")
    merged = copy.copy(grids[0])
    merged.power_sums = np.sum([g.power_sums for g in grids], axis=0)
    return merged


def estimate_joint_pdf(grid):
    """Estimate the joint PDF of the angle of reception.

    Args:
        grid (AngularSpectrumGrid): Joint power angular spectrum.

    Returns:
        PdfEstimate: Joint PDF per square degree.

    """
    total = grid.total_power
    if not total > 0:
        raise DegenerateDistributionError("the angular spectrum carries no power.")
    normalizer = 1.0 / grid.bin_area
    return PdfEstimate("joint", grid.eps_theta, grid.eps_phi, grid.power_sums / total * normalizer, normalizer)


def estimate_marginal_pas(w, eps_theta=1.0, eps_phi=1.0):
    """Estimate the marginal power angular spectra.

    Args:
        w (WeightedEnsemble): Weighted paths.
        eps_theta (float): Zenith bin half-width in degrees.
        eps_phi (float): Azimuth bin half-width in degrees.

    Returns:
        MarginalSpectrum: P_R(theta) per degree.
        MarginalSpectrum: P_R(phi) per degree.

    """
    i_theta, n_theta = _theta_bins(w, eps_theta)
    i_phi, n_phi = _phi_bins(w, eps_phi)
    return (MarginalSpectrum("theta", eps_theta, np.bincount(i_theta, weights=w.power, minlength=n_theta)),
            MarginalSpectrum("phi", eps_phi, np.bincount(i_phi, weights=w.power, minlength=n_phi)))


def estimate_marginals(w, eps_theta=1.0, eps_phi=1.0):
    """Estimate the marginal PDFs of the angle of reception.

    Args:
        w (WeightedEnsemble): Weighted paths.
        eps_theta (float): Zenith bin half-width in degrees.
        eps_phi (float): Azimuth bin half-width in degrees.

    Returns:
        PdfEstimate: Zenith PDF per degree over [0, 90].
        PdfEstimate: Azimuth PDF per degree over [-180, 180).

    """
    total = w.total
    if not total > 0:
        raise DegenerateDistributionError("the weighted ensemble carries no power.")
    pas_theta, pas_phi = estimate_marginal_pas(w, eps_theta, eps_phi)
    c_theta = 1.0 / (2.0 * eps_theta)
    c_phi = 1.0 / (2.0 * eps_phi)
    return (PdfEstimate("theta", eps_theta, eps_phi, pas_theta.power_sums / total * c_theta, c_theta),
            PdfEstimate("phi", eps_theta, eps_phi, pas_phi.power_sums / total * c_phi, c_phi))


def marginal_from_joint(pdf, axis):
    """Integrate a joint PDF over one angle.

    Args:
        pdf (PdfEstimate): Joint PDF.
        axis (str): Angle to keep, "theta" or "phi".

    Returns:
        PdfEstimate: Marginal PDF.

    """
    assert pdf.kind == "joint", "marginal_from_joint expects a joint PDF."
    if axis == "theta":
        values = pdf.values.sum(axis=1) * 2.0 * pdf.eps_phi
        normalizer = 1.0 / (2.0 * pdf.eps_theta)
    elif axis == "phi":
        values = pdf.values.sum(axis=0) * 2.0 * pdf.eps_theta
        normalizer = 1.0 / (2.0 * pdf.eps_phi)
    else:
        raise ValueError(f"axis must be theta or phi (got {axis}).")
    return PdfEstimate(axis, pdf.eps_theta, pdf.eps_phi, values, normalizer)


class RunningAverage(object):
    """Streaming arithmetic mean of binned estimates of the same grid."""

    def __init__(self):
        """Initialize running average."""
        self.count = 0
        self._first = None
        self._total = None

    @staticmethod
    def _field(estimate):
        return "power_sums" if hasattr(estimate, "power_sums") else "values"

    def add(self, estimate):
        """Add one estimate (PdfEstimate, AngularSpectrumGrid or MarginalSpectrum)."""
        values = getattr(estimate, self._field(estimate))
        if self._first is None:
            self._first = estimate
            self._total = np.array(values, dtype=np.float64)
        else:
            assert type(estimate) is type(self._first), "cannot average estimates of different types."
            assert values.shape == self._total.shape, f"grid mismatch {values.shape} vs {self._total.shape}."
            self._total += values
        self.count += 1

    @property
    def mean(self):
        """Return an estimate of the same type holding the mean."""
        if self.count == 0:
            raise EmptyInputError("no estimates to average.")
        averaged = copy.copy(self._first)
        setattr(averaged, self._field(averaged), self._total / self.count)
        return averaged


def average_estimates(estimates):
    """Average binned estimates of the same grid over Monte Carlo runs.

    Args:
        estimates (iterable): PdfEstimate, AngularSpectrumGrid or MarginalSpectrum instances.

    Returns:
        object: Estimate of the same type holding the arithmetic mean.

    """
    averager = RunningAverage()
    for estimate in estimates:
        averager.add(estimate)
    return averager.mean


def write_joint_csv(filename, estimate, comments=()):
    """Write a joint spectrum or PDF as ``theta_deg,phi_deg,value`` rows."""
    theta, phi = np.meshgrid(estimate.theta_centers, estimate.phi_centers, indexing="ij")
    rows = zip(theta.ravel(), phi.ravel(), estimate.values.ravel())
    comments = list(comments) + [f"eps_theta_deg = {estimate.eps_theta:g}",
                                 f"eps_phi_deg = {estimate.eps_phi:g}"]
    write_csv(filename, ["theta_deg", "phi_deg", "value"], rows, comments)


def write_marginal_csv(filename, estimate, comments=()):
    """Write a marginal spectrum or PDF as ``angle_deg,value`` rows."""
    if isinstance(estimate, PdfEstimate):
        width = estimate.bin_width
    else:
        width = 2.0 * estimate.eps
    comments = list(comments) + [f"bin_width_deg = {width:g}"]
    write_csv(filename, ["angle_deg", "value"], zip(estimate.centers, estimate.values), comments)


def read_marginal_csv(filename):
    """Read a marginal CSV.

    Returns:
        ndarray: Bin centers in degrees.
        ndarray: Values.
        list: Metadata lines.

    """
    header, values, comments = read_csv(filename)
    assert header == ["angle_deg", "value"], f"{filename} is not a marginal CSV ({header})."
    return values[:, 0], values[:, 1], comments


def read_joint_csv(filename):
    """Read a joint CSV.

    Returns:
        ndarray: Zenith bin centers in degrees.
        ndarray: Azimuth bin centers in degrees.
        ndarray: Values (#theta_bins, #phi_bins).
        list: Metadata lines.

    """
    header, values, comments = read_csv(filename)
    assert header == ["theta_deg", "phi_deg", "value"], f"{filename} is not a joint CSV ({header})."
    theta = np.unique(values[:, 0])
    phi = np.unique(values[:, 1])
    return theta, phi, values[:, 2].reshape(len(theta), len(phi)), comments
